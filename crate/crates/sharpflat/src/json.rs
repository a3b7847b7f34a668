//! Canonical JSON encodings.
//!
//! A scalar `a + bα` is written as base-p digit vectors of both coordinates
//! relative to a common `shift`: coordinate = `p^shift · Σ d_i p^i`. Values
//! known only modulo `p^prec` use their representative in `[0, p^(prec−shift))`;
//! exact values are written at the caller's precision cap. Keys come out sorted.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::iwasawa::TruncPoly;
use crate::padic::{ppow, FieldConfig, HalfVal, HeckeData, Lx, Qp, QpPoly};
use crate::signed::{EigenPair, SignedPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Malformed(String),
}

fn bad(s: &str) -> JsonError {
    JsonError::Malformed(s.to_string())
}

fn split(x: &Qp) -> Option<(BigInt, i64)> {
    x.unit_split()
}

fn digits_of(p: u64, x: &Qp, shift: i64, prec: i64) -> Vec<u64> {
    let Some((m, e)) = split(x) else { return Vec::new() };
    if e >= prec {
        return Vec::new();
    }
    let m = (m * ppow(p, e - shift)).mod_floor(&ppow(p, prec - shift));
    let pb = BigInt::from(p);
    let mut m = m;
    let mut out = Vec::new();
    while !m.is_zero() {
        let (q, r) = m.div_rem(&pb);
        out.push(r.to_u64().unwrap_or(0));
        m = q;
    }
    out
}

/// Encode `x`, capping exact values at `cap` digits.
///
/// ```
/// use sharpflat::json::scalar_json;
/// use sharpflat::padic::make_context;
/// let h = make_context(5, 2, 0, 1, 1, 10).unwrap();
/// let v = scalar_json(&h.lx(-1), &h.field, 3);
/// assert_eq!(v["digits_a"], serde_json::json!([4, 4, 4]));
/// assert_eq!(v["prec"], "3");
/// ```
pub fn scalar_json(x: &Lx, f: &FieldConfig, cap: i64) -> Value {
    let p = f.p;
    let prec = x.a.prec().min(x.b.prec()).min(cap);
    let va = split(&x.a).map(|(_, e)| e);
    let vb = split(&x.b).map(|(_, e)| e);
    let shift = match (va, vb) {
        (None, None) => 0,
        (Some(a), None) | (None, Some(a)) => a.min(prec),
        (Some(a), Some(b)) => a.min(b).min(prec),
    };
    let xv = Lx { a: x.a.with_prec(prec), b: x.b.with_prec(prec) };
    json!({
        "digits_a": digits_of(p, &x.a, shift, prec),
        "digits_b": digits_of(p, &x.b, shift, prec),
        "shift": shift,
        "prec": HalfVal::from_int(prec).to_ratio_string(),
        "val": f.val(&xv).to_ratio_string(),
    })
}

fn int_from_digits(p: u64, v: &Value) -> Result<BigInt, JsonError> {
    let arr = v.as_array().ok_or_else(|| bad("digit vector"))?;
    let mut m = BigInt::zero();
    for d in arr.iter().rev() {
        let d = d.as_u64().filter(|&d| d < p).ok_or_else(|| bad("digit out of range"))?;
        m = m * p + d;
    }
    Ok(m)
}

pub fn scalar_from_json(v: &Value, f: &FieldConfig) -> Result<Lx, JsonError> {
    let p = f.p;
    let shift = v["shift"].as_i64().ok_or_else(|| bad("shift"))?;
    let prec = v["prec"].as_str().and_then(HalfVal::parse).ok_or_else(|| bad("prec"))?.floor();
    let a = int_from_digits(p, &v["digits_a"])?;
    let b = int_from_digits(p, &v["digits_b"])?;
    Ok(Lx { a: Qp::from_parts(p, a, shift, prec), b: Qp::from_parts(p, b, shift, prec) })
}

/// `{"coeffs": [scalar…], "deg_cap": M}`.
pub fn trunc_json(t: &TruncPoly, deg_cap: usize, f: &FieldConfig, cap: i64) -> Value {
    let n = t.len().min(deg_cap);
    json!({
        "coeffs": (0..n).map(|i| scalar_json(&t.coeff(i), f, cap)).collect::<Vec<_>>(),
        "deg_cap": deg_cap,
    })
}

pub fn trunc_from_json(v: &Value, f: &FieldConfig) -> Result<(TruncPoly, usize), JsonError> {
    let cap = v["deg_cap"].as_u64().ok_or_else(|| bad("deg_cap"))? as usize;
    let cs = v["coeffs"].as_array().ok_or_else(|| bad("coeffs"))?;
    let xs = cs.iter().map(|c| scalar_from_json(c, f)).collect::<Result<Vec<_>, _>>()?;
    let prec = xs.iter().map(|x| x.a.prec().min(x.b.prec())).min().unwrap_or(f.prec);
    let a: Vec<QpPoly> = xs.iter().map(|x| QpPoly::constant(&x.a)).collect();
    let b: Vec<QpPoly> = xs.iter().map(|x| QpPoly::constant(&x.b)).collect();
    let t = TruncPoly { a: QpPoly::interleave(f.p, &a, 1), b: QpPoly::interleave(f.p, &b, 1) };
    Ok((t.with_prec(prec).truncate(cap), cap))
}

/// Row-major 2×2 matrix of series.
pub fn matrix_json(m: &[[TruncPoly; 2]; 2], deg_cap: usize, f: &FieldConfig, cap: i64) -> Value {
    let row = |i: usize| json!([trunc_json(&m[i][0], deg_cap, f, cap), trunc_json(&m[i][1], deg_cap, f, cap)]);
    json!({ "entries": [row(0), row(1)] })
}

pub fn matrix_from_json(v: &Value, f: &FieldConfig) -> Result<[[TruncPoly; 2]; 2], JsonError> {
    let e = |i: usize, j: usize| trunc_from_json(&v["entries"][i][j], f).map(|x| x.0);
    Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

/// `{"sharp", "flat", "level", "denom_exponent"}`.
pub fn signed_json(x: &SignedPair, h: &HeckeData) -> Value {
    let cap = x.sharp.len().max(x.flat.len());
    json!({
        "sharp": trunc_json(&x.sharp, cap, &h.field, h.prec),
        "flat": trunc_json(&x.flat, cap, &h.field, h.prec),
        "level": x.level,
        "denom_exponent": x.denom_exponent,
    })
}

pub fn signed_from_json(v: &Value, h: &HeckeData) -> Result<SignedPair, JsonError> {
    let level = v["level"].as_u64().ok_or_else(|| bad("level"))? as u32;
    let a = trunc_from_json(&v["sharp"], &h.field)?.0;
    let b = trunc_from_json(&v["flat"], &h.field)?.0;
    Ok(SignedPair::new(a, b, level, h))
}

/// `{"f_alpha", "f_beta", "level"}`.
pub fn eigen_json(x: &EigenPair, h: &HeckeData) -> Value {
    let cap = x.f_alpha.len().max(x.f_beta.len());
    json!({
        "f_alpha": trunc_json(&x.f_alpha, cap, &h.field, h.prec),
        "f_beta": trunc_json(&x.f_beta, cap, &h.field, h.prec),
        "level": x.level,
    })
}

pub fn eigen_from_json(v: &Value, h: &HeckeData) -> Result<EigenPair, JsonError> {
    let level = v["level"].as_u64().ok_or_else(|| bad("level"))? as u32;
    let a = trunc_from_json(&v["f_alpha"], &h.field)?.0;
    let b = trunc_from_json(&v["f_beta"], &h.field)?.0;
    Ok(EigenPair::new(a, b, level, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_context;

    #[test]
    fn scalar_roundtrip_quadratic() {
        let h = make_context(3, 2, 3, 1, 1, 20).unwrap();
        let f = &h.field;
        let alpha = f.generator().unwrap();
        let x = f.mul(&alpha, &h.lx(7)).add(&h.lx(-3)).mul_p_pow(-2);
        let v = scalar_json(&x, f, 20);
        let y = scalar_from_json(&v, f).unwrap();
        assert!(y.same_as(&x.with_prec(y.a.prec())));
        assert_eq!(v["shift"], -2);
    }
}
