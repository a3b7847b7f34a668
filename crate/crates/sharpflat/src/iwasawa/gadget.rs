use num_bigint::BigInt;

use crate::padic::{log_of_u, Lx, Qp, QpPoly, EXACT};

use super::{exact_divide, IwasawaError, TruncPoly};

/// The cyclotomic gadget polynomials, all viewed as polynomials in `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gadget {
    /// `Φ_n(1+X)`, `n ≥ 1`.
    Phi(u32),
    /// `ω_n(1+X) = (1+X)^{p^n} − 1`.
    Omega(u32),
    /// `Φ_{n,h} = ∏_{j<h} Φ_n(u^{−j}(1+X) − 1)`.
    PhiBlock(u32, u32),
    /// `ω_{n,h} = ∏_{j<h} ω_n(u^{−j}(1+X) − 1)`.
    OmegaBlock(u32, u32),
    /// `δ_h = ω_{0,h}`.
    Delta(u32),
    /// `log_{p,h} = ∏_{j<h} log_p(u^{−j}(1+X))`, truncated at the cap.
    Log(u32),
}

impl Gadget {
    /// Degree of the exact kinds (`None` for the logarithm series).
    pub fn degree(&self, p: u64) -> Option<usize> {
        let pn = |n: u32| (p as usize).pow(n);
        match *self {
            Gadget::Phi(n) => Some((p as usize - 1) * pn(n.saturating_sub(1))),
            Gadget::Omega(n) => Some(pn(n)),
            Gadget::PhiBlock(n, h) => Some(h as usize * (p as usize - 1) * pn(n.saturating_sub(1))),
            Gadget::OmegaBlock(n, h) => Some(h as usize * pn(n)),
            Gadget::Delta(h) => Some(h as usize),
            Gadget::Log(_) => None,
        }
    }
}

/// Build a gadget polynomial, refusing to truncate exact objects.
///
/// `u` fixes the topological generator; twisted blocks (`h > 1`) inherit its
/// precision, so it must be given at finite precision for them.
pub fn gadget(kind: Gadget, u: &Qp, cap: usize) -> Result<QpPoly, IwasawaError> {
    let p = u.p();
    if let Some(d) = kind.degree(p) {
        if d > cap {
            return Err(IwasawaError::CapTooSmall { degree: d, cap });
        }
    }
    match kind {
        Gadget::Phi(0) | Gadget::PhiBlock(0, _) => Err(IwasawaError::InvalidInput("Φ_n needs n ≥ 1".into())),
        Gadget::PhiBlock(_, 0) | Gadget::OmegaBlock(_, 0) | Gadget::Delta(0) | Gadget::Log(0) => {
            Err(IwasawaError::InvalidInput("block weight must be ≥ 1".into()))
        }
        Gadget::Phi(n) => Ok(gadget_phi(p, n)),
        Gadget::Omega(n) => Ok(gadget_omega(p, n)),
        Gadget::PhiBlock(n, h) => phi_block(u, n, h),
        Gadget::OmegaBlock(n, h) => omega_block(u, n, h),
        Gadget::Delta(h) => delta(u, h),
        Gadget::Log(h) => {
            let prec = u.prec();
            if prec >= EXACT {
                return Err(IwasawaError::InvalidInput("logarithm needs a finite precision".into()));
            }
            log_block(u, h, cap, prec)
        }
    }
}

fn binomial_row(m: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut c = BigInt::from(1);
    row.push(c.clone());
    for r in 0..m {
        c = c * BigInt::from(m - r) / BigInt::from(r + 1);
        row.push(c.clone());
    }
    row
}

/// `Σ_{i<p} w^i (1+X)^{i·m}`; with `w = 1` and `m = p^{n−1}` this is `Φ_n(1+X)`.
fn phi_like(p: u64, m: u64, w: &Qp) -> QpPoly {
    let mut out = QpPoly::zero(p, EXACT);
    let mut wi = Qp::one(p);
    for i in 0..p {
        let row = QpPoly::from_ints(p, binomial_row(i * m), EXACT);
        out = out.add(&row.scale(&wi));
        wi = wi.mul(w);
    }
    out
}

/// `Φ_n(1+X)` with integer coefficients.
///
/// ```
/// use sharpflat::iwasawa::gadget_phi;
/// use sharpflat::padic::QpPoly;
/// assert!(gadget_phi(3, 1).same_as(&QpPoly::from_i64s(3, &[3, 3, 1], i64::MAX)));
/// ```
pub fn gadget_phi(p: u64, n: u32) -> QpPoly {
    assert!(n >= 1, "Φ_n needs n ≥ 1");
    phi_like(p, p.pow(n - 1), &Qp::one(p))
}

/// `ω_n(1+X) = (1+X)^{p^n} − 1` with integer coefficients.
pub fn gadget_omega(p: u64, n: u32) -> QpPoly {
    let row = QpPoly::from_ints(p, binomial_row(p.pow(n)), EXACT);
    row.sub(&QpPoly::from_i64s(p, &[1], EXACT))
}

fn u_inv_pow(u: &Qp, e: u64) -> Result<Qp, IwasawaError> {
    if e == 0 {
        return Ok(Qp::one(u.p()));
    }
    u.pow(e as u32).inv().map_err(|_| IwasawaError::InvalidInput("u must be given at finite precision".into()))
}

/// `Φ_{n,h}(1+X)`.
pub fn phi_block(u: &Qp, n: u32, h: u32) -> Result<QpPoly, IwasawaError> {
    let p = u.p();
    if n == 0 {
        return Err(IwasawaError::InvalidInput("Φ_n needs n ≥ 1".into()));
    }
    let m = p.pow(n - 1);
    let mut out = QpPoly::from_i64s(p, &[1], EXACT);
    for j in 0..h as u64 {
        let w = u_inv_pow(u, j * m)?;
        out = out.mul(&phi_like(p, m, &w));
    }
    Ok(out)
}

/// `ω_{n,h}(1+X)`.
pub fn omega_block(u: &Qp, n: u32, h: u32) -> Result<QpPoly, IwasawaError> {
    let p = u.p();
    let m = p.pow(n);
    let row = QpPoly::from_ints(p, binomial_row(m), EXACT);
    let one = QpPoly::from_i64s(p, &[1], EXACT);
    let mut out = one.clone();
    for j in 0..h as u64 {
        let w = u_inv_pow(u, j * m)?;
        out = out.mul(&row.scale(&w).sub(&one));
    }
    Ok(out)
}

/// `δ_h(1+X) = ∏_{j<h} (u^{−j}(1+X) − 1)`.
pub fn delta(u: &Qp, h: u32) -> Result<QpPoly, IwasawaError> {
    omega_block(u, 0, h)
}

/// `log(1+X)` modulo `X^{deg+1}`, to absolute precision `prec − ⌊log_p deg⌋`.
pub fn log_series(p: u64, deg: usize, prec: i64) -> QpPoly {
    let mut cs = vec![Qp::zero(p, EXACT)];
    for i in 1..=deg {
        let s = if i % 2 == 1 { 1 } else { -1 };
        let c = Qp::from_i64(p, s, prec).div(&Qp::from_i64(p, i as i64, EXACT)).expect("nonzero");
        cs.push(c);
    }
    QpPoly::from_coeffs(p, &cs)
}

/// `log_{p,h}(1+X)` modulo `X^{deg+1}`.
///
/// ```
/// use sharpflat::iwasawa::log_block;
/// use sharpflat::padic::Qp;
/// let l = log_block(&Qp::from_i64(3, 4, 20), 1, 3, 20).unwrap();
/// // X − X²/2 + X³/3
/// assert_eq!(l.coeff(3).val(), -1);
/// ```
pub fn log_block(u: &Qp, h: u32, deg: usize, prec: i64) -> Result<QpPoly, IwasawaError> {
    let p = u.p();
    let lg = log_series(p, deg, prec);
    let lu = log_of_u(&u.with_prec(prec)).map_err(|e| IwasawaError::InvalidInput(e.to_string()))?;
    let mut out = QpPoly::from_i64s(p, &[1], EXACT);
    for j in 0..h as i64 {
        let f = lg.sub(&QpPoly::constant(&lu.mul(&Qp::from_i64(p, j, EXACT))));
        out = out.mul(&f).truncate(deg + 1);
    }
    Ok(out)
}

/// `F(X + s)` by divide and conquer on powers `(X + s)^{2^i}`.
pub fn taylor_shift(f: &QpPoly, s: &Qp) -> QpPoly {
    let n = f.len();
    if n <= 1 || s.is_zero() && s.is_exact() {
        return f.clone();
    }
    let p = f.p();
    let mut pows = vec![QpPoly::from_coeffs(p, &[s.clone(), Qp::one(p)])];
    while (1usize << pows.len()) < n {
        let last = pows.last().unwrap();
        pows.push(last.mul(last));
    }
    fn rec(f: &QpPoly, lo: usize, lvl: usize, pows: &[QpPoly]) -> QpPoly {
        if lvl == 0 {
            return f.slice(lo, lo + 1);
        }
        let half = 1usize << (lvl - 1);
        let lo_part = rec(f, lo, lvl - 1, pows);
        if lo + half >= f.len() {
            return lo_part;
        }
        let hi_part = rec(f, lo + half, lvl - 1, pows);
        lo_part.add(&hi_part.mul(&pows[lvl - 1]))
    }
    rec(f, 0, pows.len(), &pows)
}

/// `F(u^j(1+X) − 1)`.
///
/// ```
/// use sharpflat::iwasawa::{twist_subst, TruncPoly};
/// use sharpflat::padic::{Qp, QpPoly};
/// let u = Qp::from_i64(5, 6, 20);
/// let g = twist_subst(&TruncPoly::x(5), 1, &u).unwrap();
/// assert!(g.a.same_as(&QpPoly::from_i64s(5, &[5, 6], 20))); // (u−1) + uX
/// ```
pub fn twist_subst(f: &TruncPoly, j: i64, u: &Qp) -> Result<TruncPoly, IwasawaError> {
    if j == 0 {
        return Ok(f.clone());
    }
    let p = u.p();
    let uj = if j > 0 { u.pow(j as u32) } else { u_inv_pow(u, (-j) as u64)? };
    let s = uj.sub(&Qp::one(p));
    let go = |g: &QpPoly| {
        let sh = taylor_shift(g, &s);
        let mut w = Qp::one(p);
        let mut cs = Vec::with_capacity(sh.len());
        for c in sh.coeffs() {
            cs.push(c.mul(&w));
            w = w.mul(&uj);
        }
        let out = QpPoly::from_coeffs(p, &cs);
        if sh.is_empty() {
            QpPoly::zero(p, sh.prec().min(uj.prec()))
        } else {
            out
        }
    };
    Ok(f.map(go))
}

/// `F(u^j − 1)`.
pub fn eval_at_uj(f: &TruncPoly, j: i64, u: &Qp) -> Result<Lx, IwasawaError> {
    let p = u.p();
    let uj = if j >= 0 { u.pow(j as u32) } else { u_inv_pow(u, (-j) as u64)? };
    Ok(f.eval(&uj.sub(&Qp::one(p))))
}

/// Whether `Φ_{m,h}` divides `F`, with the remainder judged against `thresh`.
pub fn divisible_by_block(f: &TruncPoly, m: u32, h: u32, u: &Qp, thresh: Option<i64>) -> Result<bool, IwasawaError> {
    let g = TruncPoly::from_qp(phi_block(u, m, h)?);
    match exact_divide(f, &g, thresh) {
        Ok(_) => Ok(true),
        Err(IwasawaError::NotDivisible { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(p: u64) -> Qp {
        Qp::from_i64(p, 1 + p as i64, 30)
    }

    #[test]
    fn small_gadgets() {
        assert!(gadget_omega(3, 1).same_as(&QpPoly::from_i64s(3, &[0, 3, 3, 1], EXACT)));
        assert!(gadget_phi(3, 1).same_as(&QpPoly::from_i64s(3, &[3, 3, 1], EXACT)));
        assert!(gadget_omega(5, 0).same_as(&QpPoly::x(5)));
    }

    #[test]
    fn omega_factors_through_phi_and_delta() {
        for (p, h) in [(3u64, 1u32), (5, 3), (7, 3)] {
            let uu = u(p);
            for n in 1..=3 {
                let mut prod = delta(&uu, h).unwrap();
                for m in 1..=n {
                    prod = prod.mul(&phi_block(&uu, m, h).unwrap());
                }
                assert!(prod.same_as(&omega_block(&uu, n, h).unwrap()), "p={p} h={h} n={n}");
            }
        }
    }

    #[test]
    fn next_phi_is_p_modulo_omega() {
        for p in [3u64, 5, 7] {
            for n in 0..=3u32 {
                let m = super::super::Modulus::new(&gadget_omega(p, n)).unwrap();
                let r = m.rem(&gadget_phi(p, n + 1));
                assert!(r.same_as(&QpPoly::from_i64s(p, &[p as i64], EXACT)));
            }
        }
    }

    #[test]
    fn cap_refuses_truncation() {
        let e = gadget(Gadget::Omega(2), &u(3), 5).unwrap_err();
        assert_eq!(e, IwasawaError::CapTooSmall { degree: 9, cap: 5 });
    }

    #[test]
    fn phi_at_u_minus_one() {
        let f = TruncPoly::from_qp(gadget_phi(3, 1));
        let v = eval_at_uj(&f, 1, &u(3)).unwrap();
        assert!(v.a.same_as(&Qp::from_i64(3, 21, 30)));
    }

    #[test]
    fn delta_vanishes_at_critical_points() {
        let uu = u(7);
        let d = TruncPoly::from_qp(delta(&uu, 3).unwrap());
        for j in 0..3 {
            assert!(eval_at_uj(&d, j, &uu).unwrap().is_zero());
        }
    }

    #[test]
    fn log_series_coefficients() {
        let l = log_series(3, 3, 20);
        let expect = [0i64, 1, -1, 1];
        for (i, e) in expect.iter().enumerate().skip(1) {
            let c = l.coeff(i).mul(&Qp::from_i64(3, i as i64, EXACT));
            assert!(c.same_as(&Qp::from_i64(3, *e, EXACT)));
        }
    }

    #[test]
    fn shift_matches_horner() {
        let f = QpPoly::from_i64s(5, &[3, -1, 4, 1, -5, 9, 2, 6, 5, 3, 5], EXACT);
        let s = Qp::from_i64(5, 7, EXACT);
        let g = taylor_shift(&f, &s);
        for x in [0i64, 1, 2, 13] {
            let x = Qp::from_i64(5, x, EXACT);
            assert!(g.eval(&x).same_as(&f.eval(&x.add(&s))));
        }
    }
}
