use num_bigint::BigUint;

/// Errors shared across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An enumeration would visit more elements than the configured cap.
    /// Carries the exact cardinality so the caller can report or re-run
    /// with a larger cap.
    #[error("enumeration of {cardinality} elements exceeds cap {cap}")]
    CapExceeded { cardinality: BigUint, cap: u64 },

    /// A point had the wrong number of coordinates for the polynomial.
    #[error("point has {got} coordinates, polynomial needs {want}")]
    DimensionMismatch { want: usize, got: usize },

    /// A torus point had a coordinate off the unit circle.
    #[error("coordinate {slot} has modulus {modulus}, not unimodular")]
    PointNotUnimodular { slot: usize, modulus: f64 },

    /// A cube point had a coordinate other than +1 or -1.
    #[error("coordinate {slot} is {value}, cube points must be +-1")]
    PointNotSign { slot: usize, value: f64 },

    /// Inputs fell outside the regime an operation is specified for.
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    /// A ratio was requested against a vanishing denominator.
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    /// A multi-index or coefficient table violated its declared shape.
    #[error("invalid index data: {0}")]
    InvalidIndex(String),

    /// A polynomial file or in-memory table failed validation.
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
}

pub type Result<T> = std::result::Result<T, Error>;
