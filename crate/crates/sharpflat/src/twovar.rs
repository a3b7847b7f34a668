//! Two-variable truncated series, the doubly-signed factorisation identity and
//! the passage to cyclotomic/anticyclotomic coordinates.

use serde_json::{json, Value};
use thiserror::Error;

use crate::json::{trunc_from_json, trunc_json, JsonError};
use crate::iwasawa::{twist_subst, IwasawaError, Modulus, TruncPoly};
use crate::logmat::{LogMatError, LogMatrix, Mat2Poly};
use crate::padic::{log_of_u, FieldConfig, HeckeData, Lx, PadicError, QpPoly, EXACT};
use crate::signed::guard;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoVarError {
    #[error("variable labels differ: {0:?} vs {1:?}")]
    LabelMismatch(Labels, Labels),
    #[error("operation needs labels {want:?}, got {got:?}")]
    WrongLabel { want: Labels, got: Labels },
    #[error("restriction to the anticyclotomic line is nonzero (valuation {0})")]
    NonvanishingOnAcLine(i64),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error(transparent)]
    Iwasawa(#[from] IwasawaError),
    #[error(transparent)]
    LogMat(#[from] LogMatError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// Which pair of variables a grid is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Labels {
    /// `(X, Y)` at `(𝔭, 𝔭^c)`.
    PPc,
    /// `(S, T)`, cyclotomic and anticyclotomic.
    CycAc,
}

/// Which variable a one-variable operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    First,
    Second,
}

/// `Σ_{i<cx, j<cy} c_{ij} x^i y^j` over L, stored as `rows[j] = Σ_i c_{ij} x^i`.
#[derive(Clone, Debug)]
pub struct TruncPoly2 {
    pub rows: Vec<TruncPoly>,
    /// `(cap in the first variable, cap in the second)`.
    pub caps: (usize, usize),
    pub labels: Labels,
    p: u64,
}

impl TruncPoly2 {
    pub fn zero(p: u64, caps: (usize, usize), labels: Labels, prec: i64) -> Self {
        TruncPoly2 { rows: vec![TruncPoly::zero(p, prec); caps.1], caps, labels, p }
    }

    /// Build from rows indexed by the degree of the second variable.
    pub fn from_rows(p: u64, rows: Vec<TruncPoly>, caps: (usize, usize), labels: Labels) -> Self {
        let prec = rows.iter().map(|r| r.prec()).min().unwrap_or(EXACT);
        let mut rows: Vec<TruncPoly> = rows.into_iter().take(caps.1).map(|r| r.truncate(caps.0)).collect();
        rows.resize(caps.1, TruncPoly::zero(p, prec));
        TruncPoly2 { rows, caps, labels, p }
    }

    /// A series in the first variable alone.
    pub fn from_first(f: &TruncPoly, caps: (usize, usize), labels: Labels) -> Self {
        Self::from_rows(f.p(), vec![f.clone()], caps, labels)
    }

    /// A series in the second variable alone.
    pub fn from_second(f: &TruncPoly, caps: (usize, usize), labels: Labels) -> Self {
        let rows = (0..caps.1).map(|j| TruncPoly::constant(&f.coeff(j))).collect();
        Self::from_rows(f.p(), rows, caps, labels)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeff(&self, i: usize, j: usize) -> Lx {
        self.rows[j].coeff(i)
    }

    pub fn prec(&self) -> i64 {
        self.rows.iter().map(|r| r.prec()).min().unwrap_or(EXACT)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    /// Smallest proven valuation over all coefficients, in digits.
    pub fn proven_val(&self, f: &FieldConfig) -> i64 {
        self.rows
            .iter()
            .map(|r| if r.is_zero() { r.prec() } else { r.val(f).floor().min(r.prec()) })
            .min()
            .unwrap_or(EXACT)
    }

    fn check(&self, o: &Self) -> Result<(), TwoVarError> {
        if self.labels != o.labels {
            return Err(TwoVarError::LabelMismatch(self.labels, o.labels));
        }
        Ok(())
    }

    fn zip(&self, o: &Self, g: impl Fn(&TruncPoly, &TruncPoly) -> TruncPoly) -> Result<Self, TwoVarError> {
        self.check(o)?;
        let caps = (self.caps.0.max(o.caps.0), self.caps.1.max(o.caps.1));
        let zero = TruncPoly::zero(self.p, EXACT);
        let rows = (0..caps.1).map(|j| g(self.rows.get(j).unwrap_or(&zero), o.rows.get(j).unwrap_or(&zero))).collect();
        Ok(Self::from_rows(self.p, rows, caps, self.labels))
    }

    pub fn add(&self, o: &Self) -> Result<Self, TwoVarError> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, TwoVarError> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &Lx, f: &FieldConfig) -> Self {
        self.map_rows(|r| r.scale(c, f))
    }

    pub fn truncate(&self, caps: (usize, usize)) -> Self {
        Self::from_rows(self.p, self.rows.clone(), caps, self.labels)
    }

    fn map_rows(&self, g: impl Fn(&TruncPoly) -> TruncPoly) -> Self {
        let rows: Vec<TruncPoly> = self.rows.iter().map(g).collect();
        let cx = rows.iter().map(|r| r.len()).max().unwrap_or(0).max(self.caps.0);
        Self::from_rows(self.p, rows, (cx, self.caps.1), self.labels)
    }

    /// Swap the roles of the two variables.
    fn transpose(&self) -> Self {
        let (cx, cy) = self.caps;
        let prec = self.prec();
        let col = |i: usize, pick: fn(&TruncPoly) -> &QpPoly| -> QpPoly {
            let parts: Vec<QpPoly> = self.rows.iter().map(|r| QpPoly::constant(&pick(r).coeff(i))).collect();
            QpPoly::interleave(self.p, &parts, 1).with_prec(prec)
        };
        let rows = (0..cx).map(|i| TruncPoly { a: col(i, |r| &r.a), b: col(i, |r| &r.b) }).collect();
        Self::from_rows(self.p, rows, (cy, cx), self.labels)
    }

    fn on_second(&self, g: impl Fn(&Self) -> Self) -> Self {
        g(&self.transpose()).transpose()
    }

    /// Multiply by a series in the first variable (no truncation).
    pub fn mul_first(&self, a: &TruncPoly, f: &FieldConfig) -> Self {
        let cx = self.caps.0 + a.len().max(1) - 1;
        let prod = self.pack(cx).mul(a, f);
        self.unpack(&prod, cx, self.caps.1)
    }

    /// All rows in one series, row `j` starting at `X^{j·stride}`.
    fn pack(&self, stride: usize) -> TruncPoly {
        let part = |g: fn(&TruncPoly) -> &QpPoly| {
            QpPoly::interleave(self.p, &self.rows.iter().map(|r| g(r).clone()).collect::<Vec<_>>(), stride)
        };
        TruncPoly { a: part(|r| &r.a), b: part(|r| &r.b) }
    }

    fn unpack(&self, t: &TruncPoly, stride: usize, ny: usize) -> Self {
        let rows = (0..ny)
            .map(|j| TruncPoly { a: t.a.slice(j * stride, (j + 1) * stride), b: t.b.slice(j * stride, (j + 1) * stride) })
            .collect();
        Self::from_rows(self.p, rows, (stride, ny), self.labels)
    }

    /// Multiply by a series in the second variable (no truncation).
    pub fn mul_second(&self, a: &TruncPoly, f: &FieldConfig) -> Self {
        self.on_second(|t| t.mul_first(a, f))
    }

    /// Reduce the first variable modulo `m`.
    pub fn rem_first(&self, m: &Modulus) -> Self {
        let a = m.rem_many(&self.rows.iter().map(|r| r.a.clone()).collect::<Vec<_>>());
        let b = m.rem_many(&self.rows.iter().map(|r| r.b.clone()).collect::<Vec<_>>());
        let rows = a.into_iter().zip(b).map(|(a, b)| TruncPoly { a, b }).collect();
        Self::from_rows(self.p, rows, (m.degree(), self.caps.1), self.labels)
    }

    pub fn rem_second(&self, m: &Modulus) -> Self {
        self.on_second(|t| t.rem_first(m))
    }

    /// Apply a one-variable map to the chosen variable.
    pub fn map_var(
        &self,
        var: Var,
        g: impl Fn(&TruncPoly) -> Result<TruncPoly, TwoVarError>,
    ) -> Result<Self, TwoVarError> {
        let go = |t: &Self| -> Result<Self, TwoVarError> {
            let rows = t.rows.iter().map(&g).collect::<Result<Vec<_>, _>>()?;
            Ok(Self::from_rows(t.p, rows, t.caps, t.labels))
        };
        match var {
            Var::First => go(self),
            Var::Second => Ok(go(&self.transpose())?.transpose()),
        }
    }

    /// Exact product, packed into one variable with stride `2·cap − 1`.
    pub fn mul(&self, o: &Self, f: &FieldConfig) -> Result<Self, TwoVarError> {
        self.check(o)?;
        let cx = self.caps.0 + o.caps.0 - 1;
        let cy = self.caps.1 + o.caps.1 - 1;
        let prod = self.pack(cx).mul(&o.pack(cx), f);
        Ok(self.unpack(&prod, cx, cy))
    }

    /// Product truncated back to the caps of `self`.
    pub fn mul_trunc(&self, o: &Self, f: &FieldConfig) -> Result<Self, TwoVarError> {
        Ok(self.mul(o, f)?.truncate(self.caps))
    }

    pub fn to_json(&self, f: &FieldConfig, cap: i64) -> Value {
        json!({
            "labels": format!("{:?}", self.labels),
            "caps": [self.caps.0, self.caps.1],
            "rows": self.rows.iter().map(|r| trunc_json(r, self.caps.0, f, cap)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, f: &FieldConfig) -> Result<Self, JsonError> {
        let labels = match v["labels"].as_str() {
            Some("PPc") => Labels::PPc,
            Some("CycAc") => Labels::CycAc,
            _ => return Err(JsonError::Malformed("labels".into())),
        };
        let cap = |i: usize| v["caps"][i].as_u64().map(|c| c as usize).ok_or_else(|| JsonError::Malformed("caps".into()));
        let caps = (cap(0)?, cap(1)?);
        let rows = v["rows"]
            .as_array()
            .ok_or_else(|| JsonError::Malformed("rows".into()))?
            .iter()
            .map(|r| trunc_from_json(r, f).map(|x| x.0))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_rows(f.p, rows, caps, labels))
    }
}

/// `V ↦ u^{k/2−1}(1+V) − 1`.
///
/// ```
/// use sharpflat::iwasawa::TruncPoly;
/// use sharpflat::padic::{make_context, QpPoly};
/// use sharpflat::twovar::twist_halfweight;
/// let h = make_context(5, 4, 5, 1, 1, 20).unwrap();
/// let x = TruncPoly::from_qp(QpPoly::x(5));
/// let t = twist_halfweight(&x, &h).unwrap();
/// // (u − 1) + u·X with u = 6
/// assert!(t.same_as(&TruncPoly::from_qp(QpPoly::from_i64s(5, &[5, 6], 20))));
/// ```
pub fn twist_halfweight(f: &TruncPoly, h: &HeckeData) -> Result<TruncPoly, TwoVarError> {
    Ok(twist_subst(f, h.k as i64 / 2 - 1, &h.u_pow(1))?)
}

/// Inverse of [`twist_halfweight`].
pub fn untwist_halfweight(f: &TruncPoly, h: &HeckeData) -> Result<TruncPoly, TwoVarError> {
    Ok(twist_subst(f, 1 - h.k as i64 / 2, &h.u_pow(1))?)
}

pub fn twist_halfweight2(f: &TruncPoly2, var: Var, h: &HeckeData) -> Result<TruncPoly2, TwoVarError> {
    f.map_var(var, |r| twist_halfweight(r, h))
}

/// 2×2 matrix of two-variable series, indexed `[row][column]`.
pub type Mat2x2 = [[TruncPoly2; 2]; 2];

/// Level-`n` data for the doubly-signed identity: the twisted approximant
/// `Tw_{k/2−1}(P_n)` and the twisted modulus `Tw_{k/2−1}(ω_{n,k−1})`.
#[derive(Clone, Debug)]
pub struct TwoVarLevel {
    pub n: u32,
    pub h: HeckeData,
    pub a: [[TruncPoly; 2]; 2],
    pub modulus: Modulus,
    pub cap: usize,
}

impl TwoVarLevel {
    pub fn new(lm: &LogMatrix, n: u32) -> Result<Self, TwoVarError> {
        let h = lm.h.clone();
        let w = twist_halfweight(&TruncPoly::from_qp(lm.omega(n)?.poly().clone()), &h)?;
        let modulus = Modulus::new(&w.a)?;
        let pn = lm.mlog_approx(n)?;
        let tw = |i: usize, j: usize| -> Result<TruncPoly, TwoVarError> {
            Ok(modulus.rem_l(&twist_halfweight(&pn.e[i][j], &h)?))
        };
        let a = [[tw(0, 0)?, tw(0, 1)?], [tw(1, 0)?, tw(1, 1)?]];
        Ok(TwoVarLevel { n, cap: modulus.degree(), h, a, modulus })
    }

    pub fn caps(&self) -> (usize, usize) {
        (self.cap, self.cap)
    }

    /// `A(Y)·S·A(X)ᵀ` reduced modulo the twisted moduli in both variables.
    pub fn synthesize(&self, s: &Mat2x2) -> Result<Mat2x2, TwoVarError> {
        let f = &self.h.field;
        for row in s {
            for e in row {
                if e.labels != Labels::PPc {
                    return Err(TwoVarError::WrongLabel { want: Labels::PPc, got: e.labels });
                }
            }
        }
        let left = |i: usize, k: usize| -> Result<TruncPoly2, TwoVarError> {
            let t = s[0][k].mul_second(&self.a[i][0], f).add(&s[1][k].mul_second(&self.a[i][1], f))?;
            Ok(t.rem_second(&self.modulus))
        };
        let ys = [[left(0, 0)?, left(0, 1)?], [left(1, 0)?, left(1, 1)?]];
        let right = |i: usize, l: usize| -> Result<TruncPoly2, TwoVarError> {
            let t = ys[i][0].mul_first(&self.a[l][0], f).add(&ys[i][1].mul_first(&self.a[l][1], f))?;
            Ok(t.rem_first(&self.modulus).truncate(self.caps()))
        };
        Ok([[right(0, 0)?, right(0, 1)?], [right(1, 0)?, right(1, 1)?]])
    }

    /// Digits a residual must reach: each of the two approximants may cost `guard`.
    pub fn threshold(&self) -> i64 {
        (self.h.prec - 2 * guard(&self.h, self.n)).max(1)
    }

    pub fn verify(&self, analytic: &Mat2x2, s: &Mat2x2) -> Result<TwoVarReport, TwoVarError> {
        let f = &self.h.field;
        let back = self.synthesize(s)?;
        let t = self.threshold();
        let mut worst = EXACT;
        let mut failing = None;
        for i in 0..2 {
            for l in 0..2 {
                let d = back[i][l].sub(&analytic[i][l])?.rem_first(&self.modulus).rem_second(&self.modulus);
                let v = d.proven_val(f);
                worst = worst.min(v);
                if v < t && failing.is_none() {
                    failing = Some((i, l));
                }
            }
        }
        Ok(TwoVarReport { ok: failing.is_none(), failing, worst_val: worst, threshold: t })
    }

    /// The `Y = 0` slice as a one-variable identity: row `i` of the analytic
    /// matrix equals `A(X)·(Σ_j A_{ij}(0)·S_{j•}(X, 0))ᵀ`.
    pub fn verify_slice(&self, analytic: &Mat2x2, s: &Mat2x2) -> Result<TwoVarReport, TwoVarError> {
        let f = &self.h.field;
        let ax = Mat2Poly::new(self.a[0][0].clone(), self.a[0][1].clone(), self.a[1][0].clone(), self.a[1][1].clone());
        let t = self.threshold();
        let mut worst = EXACT;
        let mut failing = None;
        for i in 0..2 {
            let a0 = [self.a[i][0].coeff(0), self.a[i][1].coeff(0)];
            let col = |k: usize| s[0][k].rows[0].scale(&a0[0], f).add(&s[1][k].rows[0].scale(&a0[1], f));
            let out = ax.apply(&[col(0), col(1)], f);
            for l in 0..2 {
                let d = self.modulus.rem_l(&out[l].sub(&analytic[i][l].rows[0]));
                let v = if d.is_zero() { d.prec() } else { d.val(f).floor().min(d.prec()) };
                worst = worst.min(v);
                if v < t && failing.is_none() {
                    failing = Some((i, l));
                }
            }
        }
        Ok(TwoVarReport { ok: failing.is_none(), failing, worst_val: worst, threshold: t })
    }
}

/// `A(Y)·S·A(X)ᵀ` computed the slow way, as a cross-check of
/// [`TwoVarLevel::synthesize`]: the approximant comes from `Q^{−1}A_φ^{n+1}C_n`,
/// products are full two-variable products and reduction is row by row.
pub fn synthesize_direct(lm: &LogMatrix, s: &Mat2x2, n: u32) -> Result<Mat2x2, TwoVarError> {
    let h = &lm.h;
    let f = &h.field;
    let w = twist_halfweight(&TruncPoly::from_qp(lm.omega(n)?.poly().clone()), h)?;
    let modulus = Modulus::new(&w.a)?;
    let pn = lm.mlog_approx_via_aphi(n)?;
    let caps = s[0][0].caps;
    let mut a: Vec<Vec<TruncPoly>> = Vec::new();
    for i in 0..2 {
        let mut row = Vec::new();
        for j in 0..2 {
            row.push(modulus.rem_l(&twist_halfweight(&pn.e[i][j], h)?));
        }
        a.push(row);
    }
    let rx = |g: &TruncPoly2| g.map_var(Var::First, |r| Ok(modulus.rem_l(r)));
    let ry = |g: &TruncPoly2| g.map_var(Var::Second, |r| Ok(modulus.rem_l(r)));
    // T_{jl} = Σ_k S_{jk}·A_{lk}(X), then L_{il} = Σ_j A_{ij}(Y)·T_{jl}.
    let mut tm: Vec<Vec<TruncPoly2>> = Vec::new();
    for j in 0..2 {
        let mut row = Vec::new();
        for l in 0..2 {
            let mut acc: Option<TruncPoly2> = None;
            for k in 0..2 {
                let ax = TruncPoly2::from_first(&a[l][k], (caps.0, 1), Labels::PPc);
                let t = s[j][k].mul(&ax, f)?;
                acc = Some(match acc {
                    None => t,
                    Some(x) => x.add(&t)?,
                });
            }
            row.push(rx(&acc.expect("two terms"))?.truncate(caps));
        }
        tm.push(row);
    }
    let entry = |i: usize, l: usize| -> Result<TruncPoly2, TwoVarError> {
        let ay = |j: usize| TruncPoly2::from_second(&a[i][j], (1, caps.1), Labels::PPc);
        let t = ay(0).mul(&tm[0][l], f)?.add(&ay(1).mul(&tm[1][l], f)?)?;
        Ok(ry(&t)?.truncate(caps))
    };
    Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

/// Outcome of [`TwoVarLevel::verify`].
#[derive(Clone, Debug)]
pub struct TwoVarReport {
    pub ok: bool,
    pub failing: Option<(usize, usize)>,
    pub worst_val: i64,
    pub threshold: i64,
}

pub fn doubly_signed_synthesize(lm: &LogMatrix, s: &Mat2x2, n: u32) -> Result<Mat2x2, TwoVarError> {
    TwoVarLevel::new(lm, n)?.synthesize(s)
}

pub fn verify_doubly_signed(lm: &LogMatrix, analytic: &Mat2x2, s: &Mat2x2, n: u32) -> Result<bool, TwoVarError> {
    Ok(TwoVarLevel::new(lm, n)?.verify(analytic, s)?.ok)
}

/// `X = (1+S)(1+T) − 1`, `Y = (1+S)(1+T)^{−1} − 1`, truncated to the caps.
pub fn to_cyc_ac(g: &TruncPoly2, f: &FieldConfig) -> Result<TruncPoly2, TwoVarError> {
    if g.labels != Labels::PPc {
        return Err(TwoVarError::WrongLabel { want: Labels::PPc, got: g.labels });
    }
    let p = g.p;
    let caps = g.caps;
    let lab = Labels::CycAc;
    let poly = |cs: &[i64]| TruncPoly::from_qp(QpPoly::from_i64s(p, cs, EXACT));
    let s = TruncPoly2::from_first(&poly(&[0, 1]), caps, lab);
    let t = TruncPoly2::from_second(&poly(&[0, 1]), caps, lab);
    let x = s.add(&t)?.add(&s.mul_trunc(&t, f)?)?;
    // (1+T)^{−1} − 1 = Σ_{i≥1} (−T)^i
    let inv: Vec<i64> = (0..caps.1).map(|i| if i == 0 { 0 } else if i % 2 == 0 { 1 } else { -1 }).collect();
    let inv_t = TruncPoly2::from_second(&poly(&inv), caps, lab);
    let y = s.add(&inv_t)?.add(&s.mul_trunc(&inv_t, f)?)?;
    let mut acc = TruncPoly2::zero(p, caps, lab, g.prec());
    for row in g.rows.iter().rev() {
        // Horner in X for this row, then one Horner step in Y.
        let mut inner = TruncPoly2::zero(p, caps, lab, row.prec());
        for i in (0..row.len()).rev() {
            let c = TruncPoly2::from_first(&TruncPoly::constant(&row.coeff(i)), caps, lab);
            inner = inner.mul_trunc(&x, f)?.add(&c)?;
        }
        acc = acc.mul_trunc(&y, f)?.add(&inner)?;
    }
    Ok(acc)
}

fn need_cyc_ac(g: &TruncPoly2) -> Result<(), TwoVarError> {
    if g.labels != Labels::CycAc {
        return Err(TwoVarError::WrongLabel { want: Labels::CycAc, got: g.labels });
    }
    Ok(())
}

/// `T = 0`: a series in `S`.
pub fn restrict_cyc(g: &TruncPoly2) -> Result<TruncPoly, TwoVarError> {
    need_cyc_ac(g)?;
    Ok(g.rows[0].clone())
}

/// `S = 0`: a series in `T`.
pub fn restrict_ac(g: &TruncPoly2) -> Result<TruncPoly, TwoVarError> {
    need_cyc_ac(g)?;
    Ok(g.transpose().rows[0].clone())
}

/// `log_p(u)·[S¹]F`, a series in `T`; needs `F|_{S=0} = 0`.
pub fn derived_on_ac(g: &TruncPoly2, h: &HeckeData) -> Result<TruncPoly, TwoVarError> {
    let ac = restrict_ac(g)?;
    if !ac.is_zero() {
        return Err(TwoVarError::NonvanishingOnAcLine(ac.val(&h.field).floor()));
    }
    let tr = g.transpose();
    let lin = tr.rows.get(1).cloned().unwrap_or_else(|| TruncPoly::zero(g.p, g.prec()));
    let l = log_of_u(&h.u_pow(1))?;
    Ok(lin.scale_qp(&l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_context;

    fn poly(p: u64, cs: &[i64]) -> TruncPoly {
        TruncPoly::from_qp(QpPoly::from_i64s(p, cs, 30))
    }

    #[test]
    fn x_becomes_s_plus_t_plus_st() {
        let h = make_context(5, 2, 0, 1, 1, 30).unwrap();
        let x = TruncPoly2::from_first(&poly(5, &[0, 1]), (4, 4), Labels::PPc);
        let g = to_cyc_ac(&x, &h.field).unwrap();
        for (i, j, want) in [(1, 0, 1), (0, 1, 1), (1, 1, 1), (2, 0, 0), (0, 2, 0)] {
            assert!(g.coeff(i, j).same_as(&h.lx(want)), "coefficient ({i},{j})");
        }
    }

    #[test]
    fn transpose_roundtrip() {
        let rows = vec![poly(3, &[1, 2]), poly(3, &[0, 0, 5]), poly(3, &[7])];
        let g = TruncPoly2::from_rows(3, rows, (3, 3), Labels::PPc);
        let back = g.transpose().transpose();
        assert!(back.sub(&g).unwrap().is_zero());
        assert!(g.transpose().coeff(2, 1).same_as(&g.coeff(1, 2)));
    }
}
