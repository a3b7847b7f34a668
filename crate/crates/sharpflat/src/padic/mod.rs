//! Exact arithmetic in Q_p and in the algebra generated by a root of the
//! Hecke polynomial, with explicit absolute-precision tracking.

mod field;
mod hecke;
mod qp;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::{Extension, FieldConfig, Lx};
pub use hecke::{log_of_u, make_context, make_context_with_u, teichmuller, ContextJson, HeckeData};
pub use qp::{mod_inverse, ppow, vp_int, Qp, QpPoly, EXACT};
pub(crate) use qp::prec_add;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("the Hecke polynomial has a repeated root at working precision")]
    RepeatedRoot,
    #[error("a_p is a p-adic unit (ordinary form)")]
    OrdinaryInput,
    #[error("precision N = {n} is below the weight k = {k}")]
    PrecisionTooLow { n: i64, k: u32 },
    #[error("residue class is zero mod p")]
    ZeroResidue,
    #[error("u is not a principal unit")]
    NotPrincipalUnit,
    #[error("division by an element that is zero at working precision")]
    DivisionByZero,
    #[error("operation on exact data would need unbounded precision")]
    UnboundedPrecision,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Valuation or precision measured in halves of `ord_p`.
///
/// Only ramification index 1 or 2 occurs, so every valuation in play is an
/// integer multiple of 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfVal(pub i64);

impl HalfVal {
    pub fn from_int(v: i64) -> Self {
        HalfVal(2 * v)
    }

    pub fn halves(self) -> i64 {
        self.0
    }

    /// Smallest integer `>= self`.
    pub fn ceil(self) -> i64 {
        self.0.div_euclid(2) + i64::from(self.0.rem_euclid(2) != 0)
    }

    /// Largest integer `<= self`.
    pub fn floor(self) -> i64 {
        self.0.div_euclid(2)
    }

    /// Rational string `"n"` or `"n/2"`.
    pub fn to_ratio_string(self) -> String {
        if self.0 % 2 == 0 {
            format!("{}", self.0 / 2)
        } else {
            format!("{}/2", self.0)
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.split_once('/') {
            None => s.trim().parse::<i64>().ok().map(HalfVal::from_int),
            Some((n, d)) => {
                let n: i64 = n.trim().parse().ok()?;
                match d.trim() {
                    "1" => Some(HalfVal(2 * n)),
                    "2" => Some(HalfVal(n)),
                    _ => None,
                }
            }
        }
    }
}

impl std::ops::Add for HalfVal {
    type Output = HalfVal;
    fn add(self, o: HalfVal) -> HalfVal {
        HalfVal(self.0 + o.0)
    }
}

impl std::ops::Sub for HalfVal {
    type Output = HalfVal;
    fn sub(self, o: HalfVal) -> HalfVal {
        HalfVal(self.0 - o.0)
    }
}

impl std::ops::Mul<i64> for HalfVal {
    type Output = HalfVal;
    fn mul(self, k: i64) -> HalfVal {
        HalfVal(self.0 * k)
    }
}

impl fmt::Display for HalfVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ratio_string())
    }
}

impl Serialize for HalfVal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_ratio_string())
    }
}

impl<'de> Deserialize<'de> for HalfVal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        HalfVal::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad valuation {s}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfval_rounding() {
        assert_eq!(HalfVal(3).ceil(), 2);
        assert_eq!(HalfVal(3).floor(), 1);
        assert_eq!(HalfVal(-3).ceil(), -1);
        assert_eq!(HalfVal(-3).floor(), -2);
        assert_eq!(HalfVal(4).ceil(), 2);
        assert_eq!(HalfVal::parse("3/2"), Some(HalfVal(3)));
        assert_eq!(HalfVal(-5).to_ratio_string(), "-5/2");
    }
}
