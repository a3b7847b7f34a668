//! The matrices `A_φ`, `Q`, `C_n` and the level-n approximants of
//! `Q^{-1}·M_log`.

use std::cell::OnceCell;

use num_rational::Ratio;
use thiserror::Error;

use crate::iwasawa::{
    exact_divide_by, omega_block, phi_block, sup_norm_at, GrowthEstimate, IwasawaError, Modulus, TruncPoly,
};
use crate::padic::{FieldConfig, HalfVal, HeckeData, Lx, PadicError, Qp, QpPoly, EXACT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogMatError {
    #[error("α − β vanishes at working precision")]
    SingularQ,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("determinant mismatch: {0}")]
    DeterminantMismatch(String),
    #[error("growth bound violated on row {row} at level {n}")]
    GrowthViolation { row: usize, n: u32 },
    #[error("level {0} was not built")]
    LevelNotBuilt(u32),
    #[error(transparent)]
    Iwasawa(#[from] IwasawaError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// 2×2 matrix over L.
#[derive(Clone, Debug)]
pub struct Mat2 {
    pub e: [[Lx; 2]; 2],
}

impl Mat2 {
    pub fn new(a: Lx, b: Lx, c: Lx, d: Lx) -> Self {
        Mat2 { e: [[a, b], [c, d]] }
    }

    pub fn identity(f: &FieldConfig) -> Self {
        Self::new(f.one(), f.zero(), f.zero(), f.one())
    }

    pub fn diag(a: Lx, d: Lx, f: &FieldConfig) -> Self {
        Self::new(a, f.zero(), f.zero(), d)
    }

    pub fn mul(&self, o: &Mat2, f: &FieldConfig) -> Mat2 {
        let g = |i: usize, j: usize| f.mul(&self.e[i][0], &o.e[0][j]).add(&f.mul(&self.e[i][1], &o.e[1][j]));
        Self::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let g = |i: usize, j: usize| self.e[i][j].sub(&o.e[i][j]);
        Self::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn scale(&self, x: &Lx, f: &FieldConfig) -> Mat2 {
        let g = |i: usize, j: usize| f.mul(&self.e[i][j], x);
        Self::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn det(&self, f: &FieldConfig) -> Lx {
        f.mul(&self.e[0][0], &self.e[1][1]).sub(&f.mul(&self.e[0][1], &self.e[1][0]))
    }

    pub fn adj(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.e.clone();
        Self::new(d, b.neg(), c.neg(), a)
    }

    pub fn pow(&self, e: u32, f: &FieldConfig) -> Mat2 {
        let mut acc = Mat2::identity(f);
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }

    /// Smallest proven valuation among the entries (half units).
    pub fn min_val(&self, f: &FieldConfig) -> HalfVal {
        self.e.iter().flatten().map(|x| f.val(x)).min().unwrap()
    }
}

/// 2×2 matrix of polynomials over L.
#[derive(Clone, Debug)]
pub struct Mat2Poly {
    pub e: [[TruncPoly; 2]; 2],
}

impl Mat2Poly {
    pub fn new(a: TruncPoly, b: TruncPoly, c: TruncPoly, d: TruncPoly) -> Self {
        Mat2Poly { e: [[a, b], [c, d]] }
    }

    pub fn identity(p: u64) -> Self {
        let one = TruncPoly::from_qp(QpPoly::from_i64s(p, &[1], EXACT));
        let zero = TruncPoly::zero(p, EXACT);
        Self::new(one.clone(), zero.clone(), zero, one)
    }

    pub fn from_scalar(m: &Mat2) -> Self {
        let g = |i: usize, j: usize| TruncPoly::constant(&m.e[i][j]);
        Self::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    fn map(&self, g: impl Fn(&TruncPoly) -> TruncPoly) -> Self {
        Self::new(g(&self.e[0][0]), g(&self.e[0][1]), g(&self.e[1][0]), g(&self.e[1][1]))
    }

    pub fn mul(&self, o: &Mat2Poly, f: &FieldConfig) -> Mat2Poly {
        let g = |i: usize, j: usize| self.e[i][0].mul(&o.e[0][j], f).add(&self.e[i][1].mul(&o.e[1][j], f));
        Self::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    /// `m · self` for a scalar matrix `m`.
    pub fn left_scalar(&self, m: &Mat2, f: &FieldConfig) -> Mat2Poly {
        let g = |i: usize, j: usize| {
            self.e[0][j].scale(&m.e[i][0], f).add(&self.e[1][j].scale(&m.e[i][1], f))
        };
        Self::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    /// `self · m` for a scalar matrix `m`.
    pub fn right_scalar(&self, m: &Mat2, f: &FieldConfig) -> Mat2Poly {
        let g = |i: usize, j: usize| {
            self.e[i][0].scale(&m.e[0][j], f).add(&self.e[i][1].scale(&m.e[1][j], f))
        };
        Self::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn scale(&self, x: &Lx, f: &FieldConfig) -> Mat2Poly {
        self.map(|e| e.scale(x, f))
    }

    pub fn sub(&self, o: &Mat2Poly) -> Mat2Poly {
        let g = |i: usize, j: usize| self.e[i][j].sub(&o.e[i][j]);
        Self::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn det(&self, f: &FieldConfig) -> TruncPoly {
        self.e[0][0].mul(&self.e[1][1], f).sub(&self.e[0][1].mul(&self.e[1][0], f))
    }

    pub fn adj(&self) -> Mat2Poly {
        let [[a, b], [c, d]] = self.e.clone();
        Self::new(d, b.neg(), c.neg(), a)
    }

    pub fn rem(&self, m: &Modulus) -> Mat2Poly {
        self.map(|e| m.rem_l(e))
    }

    /// `self · (x, y)ᵀ`.
    pub fn apply(&self, v: &[TruncPoly; 2], f: &FieldConfig) -> [TruncPoly; 2] {
        let g = |i: usize| self.e[i][0].mul(&v[0], f).add(&self.e[i][1].mul(&v[1], f));
        [g(0), g(1)]
    }

    pub fn max_len(&self) -> usize {
        self.e.iter().flatten().map(|x| x.len()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(|x| x.is_zero())
    }

    pub fn row_val(&self, i: usize, f: &FieldConfig) -> HalfVal {
        self.e[i][0].val(f).min(self.e[i][1].val(f))
    }

    pub fn min_prec(&self) -> i64 {
        self.e.iter().flatten().map(|x| x.prec()).min().unwrap()
    }
}

/// Which representative of `C_n` to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CnRep {
    /// `D_i` uses `G_i = Φ_{i,k−1}·U_i` with `G_i ≡ p^{k−1} mod ω_{i−1,k−1}`,
    /// and `C_n` is reduced modulo `ω_{n,k−1}`. Satisfies the compatibility
    /// congruence for every weight.
    #[default]
    Compatible,
    /// The bare product `∏ [[a_p, 1], [−εΦ_{i,k−1}, 0]]`; its determinant is
    /// exactly `ε^n ∏ Φ_{m,k−1}`, but for `k > 2` it is not compatible.
    Product,
}

/// `A_φ = c·[[0, −1/(εp^{k−1})], [1, a_p/(εp^{k−1})]]`.
pub fn build_aphi(h: &HeckeData) -> Mat2 {
    let f = &h.field;
    let c = h.lx(h.c);
    // (εp^{k−1})^{−1}: exact when ε = ±1, otherwise at working precision.
    let inv = Qp::from_i64(h.p, h.eps, EXACT)
        .mul_p_pow(h.km1())
        .inv()
        .or_else(|_| h.qp(h.eps).mul_p_pow(h.km1()).inv())
        .expect("ε is a unit");
    let m = Mat2::new(
        f.zero(),
        f.from_qp(inv.neg()),
        f.one(),
        f.from_qp(inv.mul(&h.qp(h.ap))),
    );
    m.scale(&c, f)
}

/// `Q = [[α, −β], [−εp^{k−1}, εp^{k−1}]]`.
pub fn build_q(h: &HeckeData) -> Mat2 {
    let e = h.field.from_qp(Qp::from_i64(h.p, h.eps, EXACT).mul_p_pow(h.km1()));
    Mat2::new(h.alpha.clone(), h.beta.neg(), e.neg(), e)
}

/// `Q^{−1} = (εp^{k−1}(α−β))^{−1}·[[εp^{k−1}, β], [εp^{k−1}, α]]`.
pub fn build_q_inv(h: &HeckeData) -> Result<Mat2, LogMatError> {
    let f = &h.field;
    let d = h.det_q();
    if d.is_zero() {
        return Err(LogMatError::SingularQ);
    }
    let di = f.inv(&d).map_err(|_| LogMatError::SingularQ)?;
    let e = f.from_qp(Qp::from_i64(h.p, h.eps, EXACT).mul_p_pow(h.km1()));
    Ok(Mat2::new(e.clone(), h.beta.clone(), e, h.alpha.clone()).scale(&di, f))
}

/// `diag((c/α)^e, (c/β)^e)`.
pub fn diag_power(h: &HeckeData, e: u32) -> Result<Mat2, LogMatError> {
    let f = &h.field;
    let c = h.lx(h.c);
    let a = f.pow(&f.div(&c, &h.alpha)?, e);
    let b = f.pow(&f.div(&c, &h.beta)?, e);
    Ok(Mat2::diag(a, b, f))
}

fn u_at(h: &HeckeData, prec: i64) -> Qp {
    Qp::from_i64(h.p, h.u, prec)
}

fn upow(u: &Qp, e: i64) -> Qp {
    if e >= 0 {
        u.pow(e as u32)
    } else {
        u.pow((-e) as u32).inv().expect("u is a unit at finite precision")
    }
}

/// The unit `U_i` with `Φ_{i,k−1}·U_i ≡ p^{k−1} mod ω_{i−1,k−1}`, of degree
/// `(k−2)p^{i−1}`, computed at absolute precision `prec`.
///
/// Modulo `ω_{i−1}(u^{−d}(1+X)−1)` the variable `Z = (1+X)^{p^{i−1}}` is the
/// constant `y_d = u^{dp^{i−1}}`, so `U_i = V(Z)` for the Lagrange
/// interpolant `V` of `p^{k−1}/Φ_{i,k−1}|_{Z=y_d}` at the nodes `y_d`.
pub fn unit_factor(h: &HeckeData, i: u32, prec: i64) -> QpPoly {
    let p = h.p;
    let km1 = h.km1();
    let u = u_at(h, prec);
    let pi1 = p.pow(i - 1) as i64;
    let nodes: Vec<Qp> = (0..km1).map(|j| upow(&u, j * pi1)).collect();
    let g = |e: i64| -> Qp {
        if e == 0 {
            Qp::from_i64(p, p as i64, EXACT)
        } else {
            let num = upow(&u, e * pi1 * p as i64).sub(&Qp::one(p));
            let den = upow(&u, e * pi1).sub(&Qp::one(p));
            num.div(&den).expect("nonzero")
        }
    };
    let pk = Qp::one(p).mul_p_pow(km1);
    let vals: Vec<Qp> = (0..km1)
        .map(|j| {
            let mut d = Qp::one(p);
            for dd in 0..km1 {
                d = d.mul(&g(j - dd));
            }
            pk.div(&d).expect("nonzero")
        })
        .collect();
    // Newton divided differences, then expand to monomials in Z.
    let n = nodes.len();
    let mut dd = vals.clone();
    for lvl in 1..n {
        for j in (lvl..n).rev() {
            dd[j] = dd[j].sub(&dd[j - 1]).div(&nodes[j].sub(&nodes[j - lvl])).expect("distinct nodes");
        }
    }
    let mut v = QpPoly::constant(&dd[n - 1]);
    for j in (0..n - 1).rev() {
        let lin = QpPoly::from_coeffs(p, &[nodes[j].neg(), Qp::one(p)]);
        v = v.mul(&lin).add(&QpPoly::constant(&dd[j]));
    }
    // Substitute Z = (1+X)^{p^{i−1}}.
    let z = crate::iwasawa::gadget_omega(p, i - 1).add(&QpPoly::from_i64s(p, &[1], EXACT));
    let mut out = QpPoly::zero(p, EXACT);
    for c in v.coeffs().iter().rev() {
        out = out.mul(&z).add(&QpPoly::constant(c));
    }
    out
}

/// Level data of the logarithm matrix for one context, built up to `n_max`.
#[derive(Clone, Debug)]
pub struct LogMatrix {
    pub h: HeckeData,
    pub rep: CnRep,
    pub n_max: u32,
    pub aphi: Mat2,
    pub q: Mat2,
    pub q_inv: Mat2,
    /// `cn[n] = C_n`.
    cn: Vec<Mat2Poly>,
    /// `g[i] = G_i` (index 0 unused).
    g: Vec<QpPoly>,
    /// `phi[m] = Φ_{m,k−1}` (index 0 unused).
    phi: Vec<QpPoly>,
    /// `omega[n]` wraps `ω_{n,k−1}`.
    omega: Vec<Modulus>,
    /// `pn[n]` is the approximant `diag((c/α)^{n+1}, (c/β)^{n+1})·Q^{−1}·C_n mod ω_{n,k−1}`.
    pn: Vec<Mat2Poly>,
    /// `(det C_n / ∏Φ)^{−1} mod ω_{n,k−1}`, built on first use.
    det_inv: Vec<OnceCell<QpPoly>>,
    /// Divisors `Φ_{m,k−1}` and `∏_{m≤n}Φ_{m,k−1}`, built on first use.
    phi_mod: Vec<OnceCell<Modulus>>,
    prod_mod: Vec<OnceCell<Modulus>>,
}

impl LogMatrix {
    pub fn new(h: &HeckeData, rep: CnRep, n_max: u32) -> Result<Self, LogMatError> {
        let f = &h.field;
        let p = h.p;
        let hh = h.k - 1;
        let u = u_at(h, h.prec);
        let mut phi = vec![QpPoly::zero(p, EXACT)];
        let mut g = vec![QpPoly::zero(p, EXACT)];
        let mut omega = Vec::new();
        for n in 0..=n_max {
            omega.push(Modulus::new(&omega_block(&u, n, hh)?)?);
        }
        for i in 1..=n_max {
            let ph = phi_block(&u, i, hh)?;
            let gi = if rep == CnRep::Product || h.k == 2 {
                ph.clone()
            } else {
                // U_i has denominators up to p^{(k−2)i}; work above N. C_n is
                // cut back to N once reduced.
                let extra = h.prec + (h.k as i64 - 2) * i as i64 + 2 + n_max as i64;
                let phx = phi_block(&u_at(h, extra), i, hh)?;
                phx.mul(&unit_factor(h, i, extra)).with_prec(h.prec + n_max as i64 + 1)
            };
            phi.push(ph);
            g.push(gi);
        }
        let mut lm = LogMatrix {
            h: h.clone(),
            rep,
            n_max,
            aphi: build_aphi(h),
            q: build_q(h),
            q_inv: build_q_inv(h)?,
            cn: vec![Mat2Poly::identity(p)],
            g,
            phi,
            omega,
            pn: Vec::new(),
            det_inv: (0..=n_max).map(|_| OnceCell::new()).collect(),
            phi_mod: (0..=n_max).map(|_| OnceCell::new()).collect(),
            prod_mod: (0..=n_max).map(|_| OnceCell::new()).collect(),
        };
        for n in 1..=n_max {
            let next = lm.d_matrix(n).mul(&lm.cn[n as usize - 1], f);
            let next = if rep == CnRep::Compatible { next.rem(&lm.omega[n as usize]) } else { next };
            lm.cn.push(next);
        }
        for c in lm.cn.iter_mut() {
            for x in c.e.iter_mut().flatten() {
                *x = x.with_prec(h.prec);
            }
        }
        lm.pn = (0..=n_max).map(|n| lm.compute_pn(n)).collect::<Result<_, _>>()?;
        Ok(lm)
    }

    fn compute_pn(&self, n: u32) -> Result<Mat2Poly, LogMatError> {
        let f = self.field();
        let m = diag_power(&self.h, n + 1)?.mul(&self.q_inv, f);
        Ok(self.cn(n)?.left_scalar(&m, f).rem(self.omega(n)?))
    }

    pub fn field(&self) -> &FieldConfig {
        &self.h.field
    }

    /// `D_i = [[a_p, 1], [−ε G_i, 0]]`.
    pub fn d_matrix(&self, i: u32) -> Mat2Poly {
        let p = self.h.p;
        let one = TruncPoly::from_qp(QpPoly::from_i64s(p, &[1], EXACT));
        let ap = TruncPoly::from_qp(QpPoly::from_i64s(p, &[self.h.ap], EXACT));
        let low = TruncPoly::from_qp(self.g[i as usize].scale_i64(-self.h.eps));
        Mat2Poly::new(ap, one, low, TruncPoly::zero(p, EXACT))
    }

    pub fn cn(&self, n: u32) -> Result<&Mat2Poly, LogMatError> {
        self.cn.get(n as usize).ok_or(LogMatError::LevelNotBuilt(n))
    }

    /// Test hook: perturb the constant term of the lower-left entry of `C_n`.
    pub fn inject_fault(&mut self, n: u32) {
        if let Some(c) = self.cn.get_mut(n as usize) {
            let bump = TruncPoly::from_qp(QpPoly::from_i64s(self.h.p, &[1], EXACT));
            c.e[1][0] = c.e[1][0].add(&bump);
            self.pn[n as usize] = self.compute_pn(n).expect("level exists");
            self.det_inv[n as usize] = OnceCell::new();
        }
    }

    /// `Φ_{m,k−1}`.
    pub fn phi(&self, m: u32) -> Result<&QpPoly, LogMatError> {
        if m == 0 {
            return Err(LogMatError::LevelNotBuilt(0));
        }
        self.phi.get(m as usize).ok_or(LogMatError::LevelNotBuilt(m))
    }

    /// `G_i` (equal to `Φ_{i,k−1}` for the product representative).
    pub fn g(&self, i: u32) -> Result<&QpPoly, LogMatError> {
        self.g.get(i as usize).ok_or(LogMatError::LevelNotBuilt(i))
    }

    /// `ω_{n,k−1}` as a reusable modulus.
    pub fn omega(&self, n: u32) -> Result<&Modulus, LogMatError> {
        self.omega.get(n as usize).ok_or(LogMatError::LevelNotBuilt(n))
    }

    /// `∏_{m=1}^n Φ_{m,k−1}`.
    pub fn phi_product(&self, n: u32) -> Result<QpPoly, LogMatError> {
        let mut acc = QpPoly::from_i64s(self.h.p, &[1], EXACT);
        for m in 1..=n {
            acc = acc.mul(self.phi(m)?);
        }
        Ok(acc)
    }

    /// `Φ_{m,k−1}` as a reusable modulus.
    pub fn phi_modulus(&self, m: u32) -> Result<&Modulus, LogMatError> {
        let cell = self.phi_mod.get(m as usize).ok_or(LogMatError::LevelNotBuilt(m))?;
        if let Some(x) = cell.get() {
            return Ok(x);
        }
        let x = Modulus::new(self.phi(m)?)?;
        Ok(cell.get_or_init(|| x))
    }

    /// `∏_{m=1}^n Φ_{m,k−1}` as a reusable modulus.
    pub fn phi_product_modulus(&self, n: u32) -> Result<&Modulus, LogMatError> {
        let cell = self.prod_mod.get(n as usize).ok_or(LogMatError::LevelNotBuilt(n))?;
        if let Some(x) = cell.get() {
            return Ok(x);
        }
        let x = Modulus::new(&self.phi_product(n)?)?;
        Ok(cell.get_or_init(|| x))
    }

    /// `diag((c/α)^{n+1}, (c/β)^{n+1})·Q^{−1}·C_n mod ω_{n,k−1}`.
    pub fn mlog_approx(&self, n: u32) -> Result<&Mat2Poly, LogMatError> {
        self.pn.get(n as usize).ok_or(LogMatError::LevelNotBuilt(n))
    }

    /// `ε'_n^{−1} mod ω_{n,k−1}`, where `det C_n = ε'_n·∏_{m≤n} Φ_{m,k−1}`.
    ///
    /// Newton iteration `V ← V(2 − ε'V)` from the inverse of the constant term.
    pub fn det_unit_inverse(&self, n: u32) -> Result<&QpPoly, LogMatError> {
        let cell = self.det_inv.get(n as usize).ok_or(LogMatError::LevelNotBuilt(n))?;
        if let Some(v) = cell.get() {
            return Ok(v);
        }
        let rep = self.verify_det(n)?;
        if !rep.unit {
            return Err(LogMatError::DeterminantMismatch(format!("det C_{n}/∏Φ is not a unit")));
        }
        let e = rep.quotient.a;
        let m = self.omega(n)?;
        let p = self.h.p;
        let two = QpPoly::from_i64s(p, &[2], EXACT);
        let one = QpPoly::from_i64s(p, &[1], EXACT);
        let mut v = QpPoly::constant(&e.coeff(0).inv()?);
        for _ in 0..128 {
            let ev = m.rem(&e.mul(&v));
            if one.sub(&ev).is_zero() {
                break;
            }
            v = m.rem(&v.mul(&two.sub(&ev)));
        }
        let _ = cell.set(v);
        Ok(cell.get().expect("just set"))
    }

    /// Same class computed as `Q^{−1}·A_φ^{n+1}·C_n mod ω_{n,k−1}`.
    pub fn mlog_approx_via_aphi(&self, n: u32) -> Result<Mat2Poly, LogMatError> {
        let f = self.field();
        let m = self.q_inv.mul(&self.aphi.pow(n + 1, f), f);
        Ok(self.cn(n)?.left_scalar(&m, f).rem(self.omega(n)?))
    }

    /// `Q^{−1}·C_n mod ω_{n,k−1}` (no diagonal factor).
    pub fn qinv_cn(&self, n: u32) -> Result<Mat2Poly, LogMatError> {
        let f = self.field();
        Ok(self.cn(n)?.left_scalar(&self.q_inv, f).rem(self.omega(n)?))
    }

    /// Residual of `Q^{−1}A_φQ − diag(c/α, c/β)`.
    pub fn diagonalization_residual(&self) -> Result<Mat2, LogMatError> {
        let f = self.field();
        let lhs = self.q_inv.mul(&self.aphi, f).mul(&self.q, f);
        Ok(lhs.sub(&diag_power(&self.h, 1)?))
    }

    /// Residual of `A_φ^{n−m}C_n − c^{n−m}C_m` modulo `ω_{m,k−1}`.
    pub fn compatibility_residual(&self, m: u32, n: u32) -> Result<Mat2Poly, LogMatError> {
        let f = self.field();
        let lhs = self.cn(n)?.left_scalar(&self.aphi.pow(n - m, f), f);
        let c = self.h.field.from_qp(Qp::from_i64(self.h.p, self.h.c, EXACT).pow(n - m));
        let rhs = self.cn(m)?.scale(&c, f);
        Ok(lhs.sub(&rhs).rem(self.omega(m)?))
    }

    /// Determinant report for `C_n`.
    pub fn verify_det(&self, n: u32) -> Result<DetReport, LogMatError> {
        let f = self.field();
        let det = self.cn(n)?.det(f);
        let q = exact_divide_by(&det, self.phi_product_modulus(n)?, None)
            .map_err(|e| LogMatError::DeterminantMismatch(format!("det C_{n} not divisible by ∏Φ: {e}")))?
            .quotient;
        let c0 = q.coeff(0);
        let unit = f.val(&c0) == HalfVal(0) && !c0.is_zero();
        let epsn = Qp::from_i64(self.h.p, self.h.eps, EXACT).pow(n);
        let exact = q.sub(&TruncPoly::from_qp(QpPoly::constant(&epsn))).is_zero();
        Ok(DetReport { n, quotient: q, unit, exact_eps_power: exact })
    }

    /// Growth of the rows of the approximants for `1 ≤ n ≤ n_max`.
    pub fn verify_growth(&self) -> Result<GrowthReport, LogMatError> {
        let f = self.field();
        let ords = [self.h.ord_alpha, self.h.ord_beta];
        let mut rows: [Vec<(u32, Ratio<i64>)>; 2] = [Vec::new(), Vec::new()];
        let mut literal: [Vec<(u32, Ratio<i64>)>; 2] = [Vec::new(), Vec::new()];
        let mut swapped: Vec<(u32, Ratio<i64>)> = Vec::new();
        let mut trend: Vec<(u32, Ratio<i64>)> = Vec::new();
        for n in 1..=self.n_max {
            let qc = self.qinv_cn(n)?;
            let pn = self.mlog_approx(n)?;
            for i in 0..2 {
                let ord = Ratio::new(ords[i].0, 2);
                // log_p ‖p^{n·ord λ}·row_i(P_n)‖
                let v = Ratio::new(pn.row_val(i, f).0, 2);
                rows[i].push((n, -v - ord * n as i64));
                // log_p ‖λ^{n+1}·row_i(Q^{−1}C_n)‖
                let vq = Ratio::new(qc.row_val(i, f).0, 2);
                literal[i].push((n, -vq - ord * (n as i64 + 1)));
            }
            // Row 1 scaled by (c/β)^{n+1} instead of (c/α)^{n+1}.
            let vq = Ratio::new(qc.row_val(0, f).0, 2);
            let oa = Ratio::new(ords[0].0, 2);
            let ob = Ratio::new(ords[1].0, 2);
            swapped.push((n, -vq + ob * (n as i64 + 1) - oa * n as i64));
            let pk = Ratio::from_integer(n as i64 * self.h.km1());
            let v = Ratio::new(pn.row_val(0, f).0.min(pn.row_val(1, f).0), 2);
            trend.push((n, -v - pk));
        }
        let est = |w: &Vec<(u32, Ratio<i64>)>, r: Ratio<i64>| {
            GrowthEstimate::from_witnesses(r, w.iter().map(|(n, x)| (*n, Some(*x))).collect())
        };
        Ok(GrowthReport {
            row1: est(&rows[0], Ratio::new(ords[0].0, 2)),
            row2: est(&rows[1], Ratio::new(ords[1].0, 2)),
            literal_row1: literal[0].clone(),
            literal_row2: literal[1].clone(),
            swapped_row1: est(&swapped, Ratio::new(ords[0].0, 2)),
            trend_pk: trend,
        })
    }

    /// Sup-norm bracket of an entry of the approximant at radius `ρ_t`.
    pub fn entry_norm(&self, n: u32, i: usize, j: usize, t: u32) -> Result<crate::iwasawa::NormBound, LogMatError> {
        let pn = self.mlog_approx(n)?;
        Ok(sup_norm_at(&pn.e[i][j], t, self.field()))
    }
}

/// Outcome of [`LogMatrix::verify_det`].
#[derive(Clone, Debug)]
pub struct DetReport {
    pub n: u32,
    /// `det C_n / ∏_{m≤n} Φ_{m,k−1}`.
    pub quotient: TruncPoly,
    /// Constant term of the quotient is a unit.
    pub unit: bool,
    /// Quotient equals `ε^n` exactly.
    pub exact_eps_power: bool,
}

/// Outcome of [`LogMatrix::verify_growth`]. All norms are `log_p` values.
#[derive(Clone, Debug)]
pub struct GrowthReport {
    /// `‖p^{n·ord α}·row₁(P_n)‖`, which should stay bounded.
    pub row1: GrowthEstimate,
    /// `‖p^{n·ord β}·row₂(P_n)‖`.
    pub row2: GrowthEstimate,
    /// `‖α^{n+1}·row₁(Q^{−1}C_n)‖`.
    pub literal_row1: Vec<(u32, Ratio<i64>)>,
    pub literal_row2: Vec<(u32, Ratio<i64>)>,
    /// Negative control: row 1 with `β` in place of `α`.
    pub swapped_row1: GrowthEstimate,
    /// `‖p^{n(k−1)}·P_n‖`.
    pub trend_pk: Vec<(u32, Ratio<i64>)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_context;

    #[test]
    fn aphi_small_example() {
        let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
        let a = build_aphi(&h);
        let f = &h.field;
        assert!(a.e[0][0].is_zero());
        assert!(a.e[0][1].same_as(&f.from_qp(Qp::from_i64(3, -1, EXACT).mul_p_pow(-1))));
        assert!(a.e[1][0].same_as(&f.one()));
        assert!(a.e[1][1].same_as(&f.one()));
    }

    #[test]
    fn c1_small_example() {
        let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
        let lm = LogMatrix::new(&h, CnRep::Compatible, 1).unwrap();
        let c1 = lm.cn(1).unwrap();
        assert!(c1.e[0][0].a.same_as(&QpPoly::from_i64s(3, &[3], EXACT)));
        assert!(c1.e[1][0].a.same_as(&QpPoly::from_i64s(3, &[-3, -3, -1], EXACT)));
        assert!(c1.e[1][1].is_zero());
    }

    #[test]
    fn unit_factor_interpolates() {
        let h = make_context(5, 4, 5, 1, 1, 30).unwrap();
        let lm = LogMatrix::new(&h, CnRep::Compatible, 2).unwrap();
        for i in 1..=2 {
            let g = TruncPoly::from_qp(lm.g(i).unwrap().clone());
            let r = lm.omega(i - 1).unwrap().rem_l(&g);
            let pk = TruncPoly::from_qp(QpPoly::from_i64s(5, &[125], EXACT));
            assert!(r.sub(&pk).is_zero(), "G_{i} ≢ p^3");
        }
    }
}
