//! Truncated power series over L in `X = γ₀ − 1`: gadget polynomials,
//! substitutions, exact division, CRT assembly and growth estimates.

mod crt;
mod divide;
mod gadget;
mod group_ring;
mod growth;
mod trunc;

use thiserror::Error;

pub use crt::{crt_assemble, extract_blocks, CrtOutput};
pub use divide::{exact_divide, exact_divide_by, Division, Modulus};
pub use gadget::{
    delta, divisible_by_block, eval_at_uj, gadget, gadget_omega, gadget_phi, log_block, log_series, omega_block,
    phi_block, taylor_shift, twist_subst, Gadget,
};
pub use group_ring::GroupRingElem;
pub use growth::{pr_limit, sup_norm_at, GrowthEstimate, NormBound, Verdict};
pub use trunc::TruncPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IwasawaError {
    #[error("division by a polynomial that is zero at working precision")]
    ZeroDivisor,
    #[error("unsupported divisor: {0}")]
    BadDivisor(String),
    #[error("remainder has valuation {residual_val} below the threshold {threshold}")]
    NotDivisible { residual_val: i64, threshold: i64 },
    #[error("object of degree {degree} does not fit under the cap {cap}")]
    CapTooSmall { degree: usize, cap: usize },
    #[error("CRT moduli are not coprime at working precision")]
    ModuliNotCoprime,
    #[error("P_{n1} is not congruent to P_{n} modulo ω_{{{n},h}}", n1 = .0 + 1, n = .0)]
    CongruenceFailure(usize),
    #[error("normalised sup-norm grows at level {0}")]
    NormBlowup(usize),
    #[error("invalid argument: {0}")]
    InvalidInput(String),
}
