use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational scalar. `num_rational` keeps values normalised
/// (positive denominator, lowest terms), which is exactly the contract
/// the identity checks rely on.
pub type ExactRational = BigRational;

/// Natural logarithm of a positive big integer, accurate to f64 precision
/// even when the integer itself overflows f64 range.
///
/// The value is split as `m * 2^shift` with `m` holding the top 64 bits.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in u64") as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("top word fits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive big integer.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln of non-positive integer");
    ln_biguint(x.magnitude())
}

/// Natural logarithm of a positive rational.
pub fn ln_ratio(x: &ExactRational) -> f64 {
    assert!(x.is_positive(), "ln of non-positive rational");
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// `x^alpha` for a positive rational and real exponent, via logs.
pub fn pow_ratio(x: &ExactRational, alpha: f64) -> f64 {
    (alpha * ln_ratio(x)).exp()
}

/// Rational to f64, falling back to the log route when the parts
/// individually overflow f64 range.
pub fn ratio_to_f64(x: &ExactRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match x.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            let sign = if x.is_negative() { -1.0 } else { 1.0 };
            sign * ln_ratio(&x.abs()).exp()
        }
    }
}
