//! A desk-scale laboratory for lower and upper bounds on the Sidon constant
//! of homogeneous polynomials with unimodular coefficients.
//!
//! The crate is organised around five concerns:
//!
//! * [`indexcomb`] -- exact combinatorics of monomial index families
//!   (unrestricted, non-decreasing, strictly increasing maps into `[n]`),
//!   orbit sizes, and the counting identities the estimates rest on.
//! * [`polyform`] -- polynomial representations on the torus and the cube,
//!   symmetric multilinear forms, coefficient extensions, polarization.
//! * [`norms`] -- coefficient norms, exact cube sup-norms, and certified
//!   lower estimates of torus sup-norms.
//! * [`bleiverify`] -- numerical verification of the mixed-norm
//!   (Blei-type) inequalities and the two-sided envelopes around them.
//! * [`boundcalc`] -- closed-form bound calculators, Chebyshev coefficient
//!   tables, regime classification, and variance/influence quantities.
//!
//! All enumeration is capped (default [`DEFAULT_ENUM_CAP`]) and refuses to
//! run past the cap rather than degrade silently. Everything that can be
//! decided in exact integer or rational arithmetic is decided that way;
//! floats only enter for quantities that are genuinely transcendental.

mod error;
mod numeric;

pub mod bleiverify;
pub mod boundcalc;
pub mod indexcomb;
pub mod norms;
pub mod polyform;

pub use error::{Error, Result};
pub use numeric::{ln_bigint, ln_biguint, pow_ratio, ExactRational};

/// Default ceiling on the number of elements any enumeration may visit.
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// Ceiling on the number of elements an enumeration may visit.
///
/// Passed explicitly so callers (tests, the CLI's `SIDONLAB_CAP` override)
/// stay in control of how much work an exhaustive check is allowed to do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumCap(pub u64);

impl Default for EnumCap {
    fn default() -> Self {
        EnumCap(DEFAULT_ENUM_CAP)
    }
}
