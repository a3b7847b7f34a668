//! Image lattices of the signed Coleman maps and of the Perrin-Riou maps:
//! the ratio constants `C_{j,η}`, the ξ-divisors and the error-term ideals.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::iwasawa::{
    delta, eval_at_uj, exact_divide_by, log_block, phi_block, IwasawaError, Modulus, TruncPoly,
};
use crate::logmat::{LogMatError, LogMatrix};
use crate::padic::{HeckeData, Lx, PadicError, Qp, QpPoly};
use crate::signed::{guard, synth_pair, SignedError, SignedPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("Euler factor vanishes at j = {0}")]
    DegenerateFactor(u32),
    #[error("twist index j = {j} out of range 0..={max}")]
    BadTwist { j: u32, max: u32 },
    #[error("divisor has a formal factor and no polynomial")]
    FormalDivisor,
    #[error(transparent)]
    Iwasawa(#[from] IwasawaError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    LogMat(#[from] LogMatError),
    #[error(transparent)]
    Signed(#[from] SignedError),
}

/// One irreducible piece of a divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    /// `u^{−j}(1+X) − 1`.
    Lin(u32),
    /// `Φ_{m,h}`.
    PhiBlock(u32, u32),
    /// `log_{p,h}`, kept formal.
    LogBlock(u32),
    Unit,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Lin(j) => write!(f, "Lin({j})"),
            Factor::PhiBlock(m, h) => write!(f, "PhiBlock({m},{h})"),
            Factor::LogBlock(h) => write!(f, "LogBlock({h})"),
            Factor::Unit => write!(f, "Unit"),
        }
    }
}

/// A product of [`Factor`]s with multiplicities; units are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    factors: BTreeMap<Factor, u32>,
}

impl Divisor {
    pub fn unit() -> Self {
        Divisor::default()
    }

    pub fn from_factors(fs: impl IntoIterator<Item = Factor>) -> Self {
        let mut d = Divisor::unit();
        for f in fs {
            if f != Factor::Unit {
                *d.factors.entry(f).or_insert(0) += 1;
            }
        }
        d
    }

    /// `δ_h = ∏_{j<h} Lin(j)`.
    pub fn delta(h: u32) -> Self {
        Divisor::from_factors((0..h).map(Factor::Lin))
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn multiplicity(&self, f: Factor) -> u32 {
        self.factors.get(&f).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Factor, u32)> + '_ {
        self.factors.iter().map(|(f, m)| (*f, *m))
    }

    pub fn mul(&self, o: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (f, m) in o.factors() {
            *d.factors.entry(f).or_insert(0) += m;
        }
        d
    }

    /// `self / o`, or `None` when `o` does not divide `self`.
    pub fn checked_div(&self, o: &Divisor) -> Option<Divisor> {
        let mut d = self.clone();
        for (f, m) in o.factors() {
            let e = d.factors.get_mut(&f)?;
            if *e < m {
                return None;
            }
            *e -= m;
            if *e == 0 {
                d.factors.remove(&f);
            }
        }
        Some(d)
    }

    /// Degree as a polynomial in `X`; `None` when a `LogBlock` is present.
    pub fn degree(&self, p: u64) -> Option<usize> {
        let mut deg = 0;
        for (f, m) in self.factors() {
            let d = match f {
                Factor::Lin(_) => 1,
                Factor::PhiBlock(n, h) => {
                    let pn = p.pow(n) as usize;
                    h as usize * if n == 0 { 1 } else { pn - pn / p as usize }
                }
                Factor::LogBlock(_) => return None,
                Factor::Unit => 0,
            };
            deg += d * m as usize;
        }
        Some(deg)
    }

    /// The product as a polynomial; `LogBlock` factors are truncated at
    /// degree `cap` when `cap` is given, and rejected otherwise.
    pub fn to_poly(&self, u: &Qp, cap: Option<usize>) -> Result<QpPoly, ImageError> {
        let p = u.p();
        let mut acc = QpPoly::from_i64s(p, &[1], crate::padic::EXACT);
        for (f, m) in self.factors() {
            let g = match f {
                Factor::Lin(j) => delta_lin(u, j)?,
                Factor::PhiBlock(n, h) => phi_block(u, n, h)?,
                Factor::LogBlock(h) => {
                    let cap = cap.ok_or(ImageError::FormalDivisor)?;
                    log_block(u, h, cap, u.prec())?
                }
                Factor::Unit => continue,
            };
            for _ in 0..m {
                acc = acc.mul(&g);
            }
        }
        Ok(match cap {
            Some(c) => acc.truncate(c),
            None => acc,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "factors": self.factors().map(|(f, m)| json!({"factor": f.to_string(), "mult": m})).collect::<Vec<_>>(),
            "display": self.to_string(),
        })
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "Unit");
        }
        let parts: Vec<String> = self
            .factors()
            .map(|(x, m)| if m == 1 { x.to_string() } else { format!("{x}^{m}") })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// `u^{−j}(1+X) − 1`.
fn delta_lin(u: &Qp, j: u32) -> Result<QpPoly, ImageError> {
    let w = u.pow(j).inv()?;
    Ok(QpPoly::from_coeffs(u.p(), &[w.sub(&Qp::one(u.p())), w]))
}

/// Class of a character `η` of `Δ` as seen by the image conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EtaClass {
    /// `η = ω^{j0}` with `0 ≤ j0 ≤ k−2`.
    Power(u32),
    /// `η` is not of that form.
    Outside,
}

impl EtaClass {
    /// Class of `ω^i`, `0 ≤ i < p−1`.
    pub fn of_power(i: u32, h: &HeckeData) -> Self {
        if i + 2 <= h.k {
            EtaClass::Power(i)
        } else {
            EtaClass::Outside
        }
    }

    /// Every class that occurs for the context, listed once per character.
    pub fn all(h: &HeckeData) -> Vec<EtaClass> {
        (0..h.p as u32 - 1).map(|i| EtaClass::of_power(i, h)).collect()
    }

    /// Parse `none` or a nonnegative integer.
    pub fn parse(s: &str, h: &HeckeData) -> Option<Self> {
        if s == "none" {
            return Some(EtaClass::Outside);
        }
        let i: u32 = s.parse().ok()?;
        (i < h.p as u32 - 1).then(|| EtaClass::of_power(i, h))
    }

    fn twist_trivial(self, j: u32) -> bool {
        self == EtaClass::Power(j)
    }
}

impl fmt::Display for EtaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaClass::Power(j) => write!(f, "ω^{j}"),
            EtaClass::Outside => write!(f, "none"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bullet {
    Sharp,
    Flat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Coleman,
    PerrinRiou,
}

/// Normalisation of the Coleman ratio.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColemanNorm {
    /// `c(1−p) / (p^{k−j−1} − a_p c + ε^{−1}p^{j+1}c²)`.
    #[default]
    Ratio,
    /// `c(p−1)p^{k−2} / (p^{k−j−2} − a_p c + ε^{−1}p^j c²)`.
    Shifted,
}

/// A ratio constant, or the flag for "the condition is `F(u^j−1) = 0`".
#[derive(Clone, Debug)]
pub enum RatioEntry {
    Scalar(Lx),
    /// The condition is `F_2(u^j−1) = 0`.
    Zero,
    /// The denominator vanishes; cross-multiplied, the condition is `F_1(u^j−1) = 0`.
    Infinite,
}

impl RatioEntry {
    pub fn is_zero_flag(&self) -> bool {
        matches!(self, RatioEntry::Zero)
    }

    fn apply(&self, x: &Lx, h: &HeckeData) -> Lx {
        match self {
            RatioEntry::Scalar(c) => h.field.mul(c, x),
            RatioEntry::Zero | RatioEntry::Infinite => h.field.zero(),
        }
    }
}

fn check_j(j: u32, h: &HeckeData) -> Result<(), ImageError> {
    if j + 2 > h.k {
        return Err(ImageError::BadTwist { j, max: h.k - 2 });
    }
    Ok(())
}

fn pow_p(h: &HeckeData, e: u32) -> Qp {
    h.qp(h.p as i64).pow(e)
}

/// `C_{j,η}` for the signed Coleman maps.
///
/// ```
/// use sharpflat::image::{coleman_ratio, RatioEntry};
/// use sharpflat::padic::make_context;
/// let h = make_context(3, 2, 3, 1, 1, 20).unwrap();
/// let RatioEntry::Scalar(c) = coleman_ratio(0, true, &h).unwrap() else { panic!() };
/// // (1 − 3) / (3 − 3 + 3) = −2/3
/// let want = h.lx(-2).scale(&h.qp(3).inv().unwrap());
/// assert!(c.same_as(&want));
/// ```
pub fn coleman_ratio(j: u32, eta_trivial: bool, h: &HeckeData) -> Result<RatioEntry, ImageError> {
    coleman_ratio_with(j, eta_trivial, h, ColemanNorm::Ratio)
}

pub fn coleman_ratio_with(j: u32, eta_trivial: bool, h: &HeckeData, norm: ColemanNorm) -> Result<RatioEntry, ImageError> {
    check_j(j, h)?;
    if !eta_trivial {
        return Ok(RatioEntry::Zero);
    }
    let (k, p) = (h.k, h.p as i64);
    let c = h.qp(h.c);
    let eps_inv = h.qp(h.eps).inv()?;
    let c2 = c.mul(&c);
    let (num, den) = match norm {
        ColemanNorm::Ratio => (
            c.mul(&h.qp(1 - p)),
            pow_p(h, k - j - 1).sub(&h.qp(h.ap).mul(&c)).add(&eps_inv.mul(&pow_p(h, j + 1)).mul(&c2)),
        ),
        ColemanNorm::Shifted => (
            c.mul(&h.qp(p - 1)).mul(&pow_p(h, k - 2)),
            pow_p(h, k - j - 2).sub(&h.qp(h.ap).mul(&c)).add(&eps_inv.mul(&pow_p(h, j)).mul(&c2)),
        ),
    };
    if den.is_zero() {
        return Ok(RatioEntry::Infinite);
    }
    let r = num.div(&den).map_err(|_| ImageError::DegenerateFactor(j))?;
    Ok(RatioEntry::Scalar(h.field.from_qp(r)))
}

/// `C_{j,η}` for the Perrin-Riou maps at conductor exponent `n`.
pub fn pr_ratio(j: u32, n: u32, eta_trivial: bool, h: &HeckeData) -> Result<Lx, ImageError> {
    check_j(j, h)?;
    let f = &h.field;
    if !eta_trivial {
        let r = f.div(&h.beta, &h.alpha)?;
        return Ok(f.pow(&r, n));
    }
    let one = f.one();
    let x = f.from_qp(pow_p(h, j).mul(&h.qp(h.c)));
    let y = f.from_qp(pow_p(h, j + 1).mul(&h.qp(h.c)));
    let deg = |e: Result<Lx, PadicError>| -> Result<Lx, ImageError> {
        let t = one.sub(&e.map_err(|_| ImageError::DegenerateFactor(j))?);
        if t.is_zero() {
            Err(ImageError::DegenerateFactor(j))
        } else {
            Ok(t)
        }
    };
    let n1 = deg(f.div(&h.alpha, &x))?;
    let n2 = deg(f.div(&y, &h.beta))?;
    let d1 = deg(f.div(&h.beta, &x))?;
    let d2 = deg(f.div(&y, &h.alpha))?;
    Ok(f.div(&f.mul(&n1, &n2), &f.mul(&d1, &d2))?)
}

/// `ξ_{η,•}`.
pub fn xi_factor(eta: EtaClass, bullet: Bullet, h: &HeckeData) -> Divisor {
    match (bullet, eta) {
        (Bullet::Sharp, _) => Divisor::unit(),
        (Bullet::Flat, EtaClass::Power(j)) => {
            Divisor::delta(h.k - 1).checked_div(&Divisor::from_factors([Factor::Lin(j)])).expect("Lin(j) | δ")
        }
        (Bullet::Flat, EtaClass::Outside) => Divisor::delta(h.k - 1),
    }
}

/// Characteristic ideal of the error term, as a divisor.
pub fn error_charideal(eta: EtaClass, h: &HeckeData, mode: Mode) -> Divisor {
    match mode {
        Mode::Coleman => Divisor::delta(h.k - 1)
            .checked_div(&xi_factor(eta, Bullet::Flat, h))
            .expect("ξ divides δ"),
        Mode::PerrinRiou => Divisor::from_factors([Factor::LogBlock(h.k - 1)]),
    }
}

/// Table of `C_{j,η}` for `0 ≤ j ≤ k−2` and every class.
#[derive(Clone, Debug)]
pub struct RatioTable {
    pub mode: Mode,
    pub entries: BTreeMap<(u32, EtaClass), RatioEntry>,
}

impl RatioTable {
    pub fn build(h: &HeckeData, mode: Mode, norm: ColemanNorm) -> Result<Self, ImageError> {
        let mut classes: Vec<EtaClass> = (0..h.k - 1).map(EtaClass::Power).collect();
        classes.push(EtaClass::Outside);
        let mut entries = BTreeMap::new();
        for j in 0..h.k - 1 {
            for &eta in &classes {
                let t = eta.twist_trivial(j);
                let e = match mode {
                    Mode::Coleman => coleman_ratio_with(j, t, h, norm)?,
                    Mode::PerrinRiou => RatioEntry::Scalar(pr_ratio(j, 1, t, h)?),
                };
                entries.insert((j, eta), e);
            }
        }
        Ok(RatioTable { mode, entries })
    }

    pub fn get(&self, j: u32, eta: EtaClass) -> &RatioEntry {
        &self.entries[&(j, eta)]
    }
}

/// First failing image condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImageWitness {
    /// Point condition at `X = u^j − 1`.
    Tame { j: u32, residual_val: i64 },
    /// `Φ_{m,k−1} ∤ α^{m+1}F_1 − β^{m+1}F_2`.
    Wild { m: u32, residual_val: i64 },
}

impl fmt::Display for ImageWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageWitness::Tame { j, residual_val } => write!(f, "condition at u^{j}−1 fails (residual valuation {residual_val})"),
            ImageWitness::Wild { m, residual_val } => {
                write!(f, "Φ_{{{m},k−1}} condition fails (residual valuation {residual_val})")
            }
        }
    }
}

/// Verdict of [`image_membership`].
#[derive(Clone, Debug)]
pub struct Membership {
    pub accepted: bool,
    pub witness: Option<ImageWitness>,
}

/// Digits a residual must reach to count as zero at level `n`.
pub fn image_threshold(h: &HeckeData, n: u32) -> i64 {
    h.prec - guard(h, n)
}

fn proven(x: &Lx, h: &HeckeData) -> i64 {
    let f = &h.field;
    if x.is_zero() {
        f.prec_of(x).floor()
    } else {
        f.val(x).floor().min(f.prec_of(x).floor())
    }
}

/// Whether `(F_1, F_2)` satisfies every image condition for `η` at level `n`.
///
/// Coleman mode checks `F_2(u^j−1) = C_{j,ηω^{−j}}·F_1(u^j−1)`. Perrin-Riou
/// mode checks `F_1(u^j−1) = C_{j,ηω^{−j}}·F_2(u^j−1)` and, for `1 ≤ m ≤ n`,
/// `Φ_{m,k−1} | α^{m+1}F_1 − β^{m+1}F_2` (the characters of conductor `p^{m+1}`).
pub fn image_membership(
    f1: &TruncPoly,
    f2: &TruncPoly,
    eta: EtaClass,
    h: &HeckeData,
    mode: Mode,
    n: u32,
) -> Result<Membership, ImageError> {
    image_membership_with(f1, f2, eta, h, mode, n, ColemanNorm::Ratio)
}

pub fn image_membership_with(
    f1: &TruncPoly,
    f2: &TruncPoly,
    eta: EtaClass,
    h: &HeckeData,
    mode: Mode,
    n: u32,
    norm: ColemanNorm,
) -> Result<Membership, ImageError> {
    let u = h.u_pow(1);
    let t = image_threshold(h, n);
    let reject = |w| Ok(Membership { accepted: false, witness: Some(w) });
    for j in 0..h.k - 1 {
        let a = eval_at_uj(f1, j as i64, &u)?;
        let b = eval_at_uj(f2, j as i64, &u)?;
        let tw = eta.twist_trivial(j);
        let diff = match mode {
            Mode::Coleman => match coleman_ratio_with(j, tw, h, norm)? {
                RatioEntry::Infinite => a,
                c => b.sub(&c.apply(&a, h)),
            },
            Mode::PerrinRiou => a.sub(&h.field.mul(&pr_ratio(j, 1, tw, h)?, &b)),
        };
        let v = proven(&diff, h);
        if v < t {
            return reject(ImageWitness::Tame { j, residual_val: v });
        }
    }
    if mode == Mode::PerrinRiou {
        let f = &h.field;
        for m in 1..=n {
            let g = Modulus::new(&phi_block(&u, m, h.k - 1)?)?;
            let d = f1.scale(&f.pow(&h.alpha, m + 1), f).sub(&f2.scale(&f.pow(&h.beta, m + 1), f));
            match exact_divide_by(&d, &g, Some(t)) {
                Ok(_) => {}
                Err(IwasawaError::NotDivisible { residual_val, .. }) => {
                    return reject(ImageWitness::Wild { m, residual_val })
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(Membership { accepted: true, witness: None })
}

/// Interpolating polynomial through `(u^j − 1, values[j])`.
pub fn interpolate_at_twists(values: &[Lx], h: &HeckeData) -> Result<TruncPoly, ImageError> {
    let p = h.p;
    let f = &h.field;
    let nodes: Vec<Qp> = (0..values.len() as i64).map(|j| h.u_pow(j).sub(&Qp::one(p))).collect();
    let mut acc = TruncPoly::zero(p, h.prec);
    for (j, v) in values.iter().enumerate() {
        let mut basis = QpPoly::from_i64s(p, &[1], crate::padic::EXACT);
        let mut den = Qp::one(p);
        for (i, t) in nodes.iter().enumerate() {
            if i != j {
                basis = basis.mul(&QpPoly::from_coeffs(p, &[t.neg(), Qp::one(p)]));
                den = den.mul(&nodes[j].sub(t));
            }
        }
        let l = TruncPoly::from_qp(basis.scale(&den.inv()?));
        acc = acc.add(&l.scale(v, f));
    }
    Ok(acc)
}

/// A Coleman-mode image pair: `F_2` interpolates `C_{j,η}·F_1(u^j−1)`,
/// plus `δ_{k−1}·noise`. Where the ratio is infinite, `F_1` is first moved to
/// vanish at `u^j−1`.
pub fn construct_coleman_pair(
    f1: &TruncPoly,
    noise: &TruncPoly,
    eta: EtaClass,
    table: &RatioTable,
    h: &HeckeData,
) -> Result<(TruncPoly, TruncPoly), ImageError> {
    let u = h.u_pow(1);
    let mut vals = Vec::new();
    let mut fix = Vec::new();
    for j in 0..h.k - 1 {
        let a = eval_at_uj(f1, j as i64, &u)?;
        let e = table.get(j, eta);
        vals.push(e.apply(&a, h));
        fix.push(if matches!(e, RatioEntry::Infinite) { a.neg() } else { h.field.zero() });
    }
    let f1 = f1.add(&interpolate_at_twists(&fix, h)?);
    let d = TruncPoly::from_qp(delta(&u, h.k - 1)?);
    let f2 = interpolate_at_twists(&vals, h)?.add(&d.mul(noise, &h.field));
    Ok((f1, f2))
}

/// A Perrin-Riou image pair at level `n`: `synth_pair(x_#, x_♭)` with `x_♭`
/// chosen so the tame conditions hold; the wild ones hold for every output
/// of `synth_pair`.
pub fn construct_pr_pair(
    lm: &LogMatrix,
    sharp: &TruncPoly,
    noise: &TruncPoly,
    eta: EtaClass,
    n: u32,
) -> Result<(TruncPoly, TruncPoly), ImageError> {
    let h = &lm.h;
    let f = &h.field;
    let u = h.u_pow(1);
    let q = &lm.q_inv.e;
    // Modulo δ the approximant is c^{n+1}·diag(1/α, 1/β)·Q^{−1}; the scalar cancels.
    // Where the flat value drops out of the condition, the sharp value must vanish.
    let t = image_threshold(h, n);
    let mut vals = Vec::new();
    let mut fix = Vec::new();
    for j in 0..h.k - 1 {
        let c = pr_ratio(j, 1, eta.twist_trivial(j), h)?;
        let a = eval_at_uj(sharp, j as i64, &u)?;
        let lhs = f.div(&q[0][1], &h.alpha)?.sub(&f.mul(&c, &f.div(&q[1][1], &h.beta)?));
        let rhs = f.mul(&c, &f.div(&q[1][0], &h.beta)?).sub(&f.div(&q[0][0], &h.alpha)?);
        if proven(&lhs, h) >= t {
            vals.push(f.zero());
            fix.push(a.neg());
        } else {
            vals.push(f.div(&f.mul(&rhs, &a), &lhs).map_err(|_| ImageError::DegenerateFactor(j))?);
            fix.push(f.zero());
        }
    }
    let sharp = sharp.add(&interpolate_at_twists(&fix, h)?);
    let d = TruncPoly::from_qp(delta(&u, h.k - 1)?);
    let flat = interpolate_at_twists(&vals, h)?.add(&d.mul(noise, f));
    let ep = synth_pair(lm, &SignedPair::new(sharp, flat, n, h), n)?;
    Ok((ep.f_alpha, ep.f_beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_context;

    #[test]
    fn delta_over_xi_is_the_missing_line() {
        let h = make_context(5, 4, 5, 1, 1, 30).unwrap();
        for eta in EtaClass::all(&h) {
            let xi = xi_factor(eta, Bullet::Flat, &h);
            let e = error_charideal(eta, &h, Mode::Coleman);
            assert_eq!(xi.mul(&e), Divisor::delta(3));
        }
    }

    #[test]
    fn lin_factor_vanishes_at_its_twist() {
        let h = make_context(5, 2, 0, 1, 1, 30).unwrap();
        let u = h.u_pow(1);
        let l = delta_lin(&u, 1).unwrap();
        assert!(l.eval(&u.sub(&Qp::one(5))).is_zero());
    }
}
