//! Signed (sharp/flat) factorisation of pairs of p-adic power series.
//!
//! The crate is organised bottom-up:
//!
//! - [`padic`]: exact Q_p and quadratic-extension arithmetic.
//! - [`iwasawa`]: truncated polynomials in `X = γ₀ − 1`, cyclotomic gadgets,
//!   division, CRT and growth estimates.
//! - [`logmat`]: the matrices `A_φ`, `Q`, `C_n` and logarithm-matrix approximants.
//! - [`signed`]: synthesis, compatibility and factorisation of eigen-pairs.
//! - [`image`]: image lattices, ξ-divisors and error ideals of Coleman maps.
//! - [`twovar`]: two-variable series and the doubly-signed identity.
//! - [`suite`]: seeded verification suites and reports.

pub mod kron;
pub mod logmat;
pub mod image;
pub mod json;
pub mod iwasawa;
pub mod padic;
pub mod signed;
pub mod suite;
pub mod twovar;

// The book's code blocks run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/padic.md")]
    mod padic {}
    #[doc = include_str!("../../../book/src/gadgets.md")]
    mod gadgets {}
    #[doc = include_str!("../../../book/src/logmat.md")]
    mod logmat {}
    #[doc = include_str!("../../../book/src/signed.md")]
    mod signed {}
    #[doc = include_str!("../../../book/src/image.md")]
    mod image {}
    #[doc = include_str!("../../../book/src/twovar.md")]
    mod twovar {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
