use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{ppow, FieldConfig, HalfVal, Lx, PadicError, Qp, EXACT};

/// Arithmetic context of a non-ordinary form at p.
#[derive(Clone, Debug)]
pub struct HeckeData {
    pub p: u64,
    pub k: u32,
    pub ap: i64,
    pub eps: i64,
    pub c: i64,
    pub u: i64,
    /// Absolute precision N.
    pub prec: i64,
    pub field: FieldConfig,
    pub alpha: Lx,
    pub beta: Lx,
    pub ord_alpha: HalfVal,
    pub ord_beta: HalfVal,
}

/// Plain-data echo of a context, used in reports and JSON files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextJson {
    pub p: u64,
    pub k: u32,
    pub ap: i64,
    pub eps: i64,
    pub c: i64,
    pub u: i64,
    #[serde(rename = "N")]
    pub n: i64,
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn vp_i64(p: u64, x: i64) -> Option<i64> {
    if x == 0 {
        return None;
    }
    let mut x = x.unsigned_abs();
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// Build the context with the default generator `u = 1 + p`.
///
/// ```
/// use sharpflat::padic::{make_context, HalfVal};
/// let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
/// assert!(h.field.is_quadratic());
/// assert_eq!(h.ord_alpha, HalfVal(1)); // ord α = 1/2
/// ```
pub fn make_context(p: u64, k: u32, ap: i64, eps: i64, c: i64, n: i64) -> Result<HeckeData, PadicError> {
    make_context_with_u(p, k, ap, eps, c, 1 + p as i64, n)
}

pub fn make_context_with_u(
    p: u64,
    k: u32,
    ap: i64,
    eps: i64,
    c: i64,
    u: i64,
    n: i64,
) -> Result<HeckeData, PadicError> {
    if !is_odd_prime(p) {
        return Err(PadicError::InvalidInput(format!("p = {p} is not an odd prime")));
    }
    if k < 2 || k % 2 != 0 {
        return Err(PadicError::InvalidInput(format!("weight k = {k} must be even and at least 2")));
    }
    if p <= k as u64 {
        return Err(PadicError::InvalidInput(format!("need p > k, got p = {p}, k = {k}")));
    }
    if vp_i64(p, eps) != Some(0) || vp_i64(p, c) != Some(0) {
        return Err(PadicError::InvalidInput("eps and c must be p-adic units".into()));
    }
    if vp_i64(p, u - 1) != Some(1) {
        return Err(PadicError::InvalidInput(format!("u = {u} is not a topological generator of 1 + pZ_p")));
    }
    let vap = vp_i64(p, ap);
    if vap == Some(0) {
        return Err(PadicError::OrdinaryInput);
    }
    if n < k as i64 {
        return Err(PadicError::PrecisionTooLow { n, k });
    }
    let km1 = k as i64 - 1;
    let t = Qp::from_i64(p, ap, n);
    let nrm = Qp::from_i64(p, eps, n).mul_p_pow(km1);
    let disc = t.mul(&t).sub(&nrm.mul_p_pow(0).mul(&Qp::from_i64(p, 4, EXACT)));
    if disc.is_zero() {
        return Err(PadicError::RepeatedRoot);
    }
    // Newton polygon: split iff 2·ord(a_p) < k − 1.
    let split = matches!(vap, Some(v) if 2 * v < km1);
    if split {
        let r = vap.unwrap();
        let field = FieldConfig::trivial(p, n);
        let alpha = newton_root(p, ap, eps, km1, r, n)?;
        let beta = t.sub(&alpha);
        Ok(HeckeData {
            p,
            k,
            ap,
            eps,
            c,
            u,
            prec: n,
            alpha: field.from_qp(alpha),
            beta: field.from_qp(beta),
            field,
            ord_alpha: HalfVal::from_int(r),
            ord_beta: HalfVal::from_int(km1 - r),
        })
    } else {
        let field = FieldConfig::quadratic(p, n, t.clone(), nrm);
        let alpha = field.generator().expect("quadratic");
        let beta = field.from_qp(t).sub(&alpha);
        Ok(HeckeData {
            p,
            k,
            ap,
            eps,
            c,
            u,
            prec: n,
            field,
            alpha,
            beta,
            ord_alpha: HalfVal(km1),
            ord_beta: HalfVal(km1),
        })
    }
}

/// Root of `x² − a x + ε p^{k−1}` of valuation `r = ord(a)` by Newton iteration.
fn newton_root(p: u64, ap: i64, eps: i64, km1: i64, r: i64, n: i64) -> Result<Qp, PadicError> {
    let work = n + 2 * r + 4;
    let a = Qp::from_i64(p, ap, work);
    let b = Qp::from_i64(p, eps, work).mul_p_pow(km1);
    let two = Qp::from_i64(p, 2, EXACT);
    let mut x = a.clone();
    for _ in 0..64 {
        let fx = x.mul(&x).sub(&a.mul(&x)).add(&b);
        let dfx = two.mul(&x).sub(&a);
        let step = fx.div(&dfx)?;
        let next = x.sub(&step).with_prec(work);
        if next.same_as(&x) && step.val() >= work {
            break;
        }
        x = next;
    }
    Ok(x.with_prec(n))
}

impl HeckeData {
    pub fn km1(&self) -> i64 {
        self.k as i64 - 1
    }

    pub fn to_json(&self) -> ContextJson {
        ContextJson { p: self.p, k: self.k, ap: self.ap, eps: self.eps, c: self.c, u: self.u, n: self.prec }
    }

    pub fn from_json(j: &ContextJson) -> Result<Self, PadicError> {
        make_context_with_u(j.p, j.k, j.ap, j.eps, j.c, j.u, j.n)
    }

    /// Same context at a different precision.
    pub fn at_precision(&self, n: i64) -> Result<Self, PadicError> {
        make_context_with_u(self.p, self.k, self.ap, self.eps, self.c, self.u, n)
    }

    pub fn qp(&self, v: i64) -> Qp {
        Qp::from_i64(self.p, v, self.prec)
    }

    pub fn lx(&self, v: i64) -> Lx {
        self.field.from_i64(v)
    }

    /// `u^j` for any integer `j`, at precision N.
    pub fn u_pow(&self, j: i64) -> Qp {
        let u = Qp::from_i64(self.p, self.u, self.prec);
        if j >= 0 {
            u.pow(j as u32)
        } else {
            u.pow((-j) as u32).inv().expect("u is a unit")
        }
    }

    /// `det Q = ε p^{k−1} (α − β)`.
    pub fn det_q(&self) -> Lx {
        let d = self.alpha.sub(&self.beta);
        d.scale(&self.qp(self.eps)).mul_p_pow(self.km1())
    }

    /// Valuation of `α − β`.
    pub fn v_alpha_minus_beta(&self) -> HalfVal {
        self.field.val(&self.alpha.sub(&self.beta))
    }

    /// Valuation of `det Q`.
    pub fn v_det_q(&self) -> HalfVal {
        HalfVal::from_int(self.km1()) + self.v_alpha_minus_beta()
    }
}

/// Teichmüller representative of `r mod p`, to precision N.
///
/// ```
/// use sharpflat::padic::teichmuller;
/// let w = teichmuller(5, 2, 10).unwrap();
/// assert_eq!(w.residue().unwrap() % 25, 7.into());
/// ```
pub fn teichmuller(p: u64, r: i64, n: i64) -> Result<Qp, PadicError> {
    let pb = p as i64;
    if r.rem_euclid(pb) == 0 {
        return Err(PadicError::ZeroResidue);
    }
    let md = ppow(p, n);
    let mut x = BigInt::from(r).mod_floor(&md);
    let e = BigInt::from(p);
    // x ↦ x^p converges to ω(r) and gains one digit per step.
    for _ in 0..n {
        x = x.modpow(&e, &md);
    }
    Ok(Qp::from_int(p, x, n))
}

/// p-adic logarithm of a principal unit, to the precision of `u`.
///
/// ```
/// use sharpflat::padic::{log_of_u, Qp};
/// let l = log_of_u(&Qp::from_i64(5, 6, 30)).unwrap();
/// assert_eq!(l.val(), 1);
/// ```
pub fn log_of_u(u: &Qp) -> Result<Qp, PadicError> {
    let p = u.p();
    let n = u.prec();
    if n >= EXACT {
        return Err(PadicError::UnboundedPrecision);
    }
    let x = u.sub(&Qp::one(p));
    if x.is_zero() {
        return Ok(Qp::zero(p, n));
    }
    let vx = x.val();
    if vx < 1 {
        return Err(PadicError::NotPrincipalUnit);
    }
    let mut acc = Qp::zero(p, n);
    let mut xn = Qp::one(p);
    let mut i: i64 = 1;
    loop {
        xn = xn.mul(&x);
        let vi = vp_i64(p, i).unwrap_or(0);
        let ilog = (i as f64).log(p as f64).floor() as i64 + 1;
        if i * vx - ilog >= n {
            break;
        }
        if i * vx - vi < n {
            let mut term = xn.with_prec(n + vi).div(&Qp::from_i64(p, i, EXACT))?;
            if i % 2 == 0 {
                term = term.neg();
            }
            acc = acc.add(&term);
        }
        i += 1;
    }
    Ok(acc.with_prec(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramified_example() {
        let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
        assert!(h.field.is_quadratic());
        assert_eq!(h.ord_alpha, HalfVal(1));
        assert_eq!(h.ord_beta, HalfVal(1));
        let sum = h.alpha.add(&h.beta);
        assert!(sum.same_as(&h.lx(3)));
        let prod = h.field.mul(&h.alpha, &h.beta);
        assert!(prod.same_as(&h.lx(3)));
    }

    #[test]
    fn a_p_zero_gives_square_root() {
        let h = make_context(5, 2, 0, 1, 1, 40).unwrap();
        let a2 = h.field.mul(&h.alpha, &h.alpha);
        assert!(a2.same_as(&h.lx(-5)));
        assert!(h.alpha.add(&h.beta).is_zero());
        assert_eq!(h.field.e, 2);
    }

    #[test]
    fn split_roots() {
        for (p, ap) in [(5u64, 5i64), (7, 7)] {
            for eps in [1, -1] {
                let h = make_context(p, 4, ap, eps, 1, 40).unwrap();
                assert!(!h.field.is_quadratic());
                assert_eq!(h.ord_alpha, HalfVal(2));
                assert_eq!(h.ord_beta, HalfVal(4));
                let prod = h.field.mul(&h.alpha, &h.beta);
                let target = h.lx(eps).mul_p_pow(3);
                assert!(prod.same_as(&target));
                assert_eq!(h.field.val(&h.alpha), HalfVal(2));
            }
        }
    }

    #[test]
    fn guard_cases() {
        assert!(matches!(make_context(3, 2, 3, 1, 1, 1), Err(PadicError::PrecisionTooLow { .. })));
        assert_eq!(make_context(5, 2, 1, 1, 1, 40).unwrap_err(), PadicError::OrdinaryInput);
    }

    #[test]
    fn teichmuller_values() {
        assert!(teichmuller(5, 1, 20).unwrap().same_as(&Qp::from_i64(5, 1, 20)));
        assert!(teichmuller(5, 4, 20).unwrap().same_as(&Qp::from_i64(5, -1, 20)));
        assert_eq!(teichmuller(7, 0, 10).unwrap_err(), PadicError::ZeroResidue);
        let w = teichmuller(7, 3, 30).unwrap();
        assert!(w.pow(6).same_as(&Qp::one(7)));
    }

    #[test]
    fn log_valuations() {
        assert_eq!(log_of_u(&Qp::from_i64(5, 6, 30)).unwrap().val(), 1);
        assert_eq!(log_of_u(&Qp::from_i64(5, 26, 30)).unwrap().val(), 2);
        assert!(log_of_u(&Qp::from_i64(5, 1, 30)).unwrap().is_zero());
        assert_eq!(log_of_u(&Qp::from_i64(5, 2, 30)).unwrap_err(), PadicError::NotPrincipalUnit);
    }

    #[test]
    fn log_is_additive() {
        let a = Qp::from_i64(7, 8, 30);
        let b = Qp::from_i64(7, 50, 30);
        let lhs = log_of_u(&a.mul(&b)).unwrap();
        let rhs = log_of_u(&a).unwrap().add(&log_of_u(&b).unwrap());
        assert!(lhs.same_as(&rhs));
    }
}
