//! Bound curves, explicit constants, and regime analysis.
//!
//! Everything here is a closed-form calculator: hypercontractivity
//! factors, exact Chebyshev coefficients and the derivative-step bound
//! built from them, the optimal split degree, the competing bound curves
//! in the degree, the small-`n` cap, and the variance/influence regime
//! table. Curves that overflow `f64` are compared through their logs,
//! which every report carries alongside the (possibly infinite) value.
//!
//! No constant is silent: everything tunable lives in [`BoundConfig`]
//! and is echoed by the command-line reports.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::indexcomb::{binomial, factorial, ln_binomial};
use crate::norms::SupNormEstimate;
use crate::numeric::ratio_to_f64;
use crate::polyform::{Domain, UnimodularPolynomial};
use crate::{Error, ExactRational, Result};

/// All tunable constants. Fields deserialize from JSON under the exact
/// names shown by `serde`, and absent fields keep their defaults.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundConfig {
    /// Exponent of the polynomial-in-`k` prefactor on the form side.
    pub c0: f64,
    /// Exponent constant on the multilinear side; informational, echoed
    /// in reports.
    pub a: f64,
    /// Slack added to the leading exponent coefficient of the complex
    /// curve; must be positive.
    pub tau: f64,
    /// Prefactor of the complex curve.
    #[serde(rename = "C_tau")]
    pub c_tau: f64,
    /// Constant in the crossover condition of the regime table.
    #[serde(rename = "C0")]
    pub big_c0: f64,
    /// Prefactor of the product-estimate curve.
    #[serde(rename = "C1")]
    pub big_c1: f64,
    /// The generic absolute constant: regime boundary, variance
    /// inequality, exhaustive-k penalty.
    pub c_abs: f64,
    /// Exponent in the variance inequality.
    #[serde(rename = "K")]
    pub k_exp: f64,
    /// Regime exponent: degrees up to `n^epsilon` count as small.
    pub epsilon: f64,
    /// Base for displayed logarithms; 0 selects the natural log, which
    /// is also the convention inside every formula.
    pub log_base: u32,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            c0: 0.4,
            a: 0.39,
            tau: 0.1,
            c_tau: 1.0,
            big_c0: 1.0,
            big_c1: 1.0,
            c_abs: 1.0,
            k_exp: 3.0,
            epsilon: 0.5,
            log_base: 0,
        }
    }
}

impl BoundConfig {
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("c0", self.c0),
            ("a", self.a),
            ("tau", self.tau),
            ("C_tau", self.c_tau),
            ("C0", self.big_c0),
            ("C1", self.big_c1),
            ("c_abs", self.c_abs),
            ("K", self.k_exp),
            ("epsilon", self.epsilon),
        ];
        for (name, v) in positives {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidIndex(format!(
                    "config constant {name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.log_base == 1 {
            return Err(Error::InvalidIndex("log_base 1 is not a logarithm base".into()));
        }
        Ok(())
    }

    /// Rescales a natural log for display under `log_base`.
    pub fn display_log(&self, natural: f64) -> f64 {
        match self.log_base {
            0 => natural,
            b => natural / (b as f64).ln(),
        }
    }
}

/// One named quantity of a bound chain. `value` is `exp(ln_value)` and
/// may overflow to infinity; comparisons should use `ln_value`.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub name: String,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub value: f64,
    pub ln_value: f64,
    pub exact_value: Option<ExactRational>,
    /// Short role label for tables and CSV output.
    pub tag: String,
}

impl BoundReport {
    fn from_ln(name: &str, tag: &str, ln_value: f64) -> Self {
        BoundReport {
            name: name.into(),
            n: None,
            d: None,
            k: None,
            value: ln_value.exp(),
            ln_value,
            exact_value: None,
            tag: tag.into(),
        }
    }

    /// Attaches an exact value, insisting it agree with the float.
    pub fn with_exact(mut self, exact: ExactRational) -> Result<Self> {
        let approx = ratio_to_f64(&exact);
        let scale = self.value.abs().max(1e-300);
        if ((approx - self.value) / scale).abs() > 1e-12 {
            return Err(Error::InvalidIndex(format!(
                "exact value {approx} does not match float {}",
                self.value
            )));
        }
        self.exact_value = Some(exact);
        Ok(self)
    }
}

/// Hypercontractive comparison factor between degree-`d` and degree-`k`
/// homogeneous parts: `e^{4(d-k)/(3k-1)}`.
pub fn hc_constant(d: usize, k: usize) -> Result<f64> {
    if k == 0 || k > d {
        return Err(Error::InvalidIndex(format!("need 1 <= k <= d, got k={k} d={d}")));
    }
    Ok((4.0 * (d - k) as f64 / (3.0 * k as f64 - 1.0)).exp())
}

/// Coefficient vector of the Chebyshev polynomial `T_d`, exact, index by
/// power, via `T_{m+1} = 2x T_m - T_{m-1}`.
pub fn chebyshev_polynomial(d: usize) -> Vec<BigInt> {
    let mut prev: Vec<BigInt> = vec![BigInt::one()];
    if d == 0 {
        return prev;
    }
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..d {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] += 2 * c;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Signed coefficient of `x^k` in `T_d`; zero off the parity diagonal.
pub fn chebyshev_coefficient(d: usize, k: usize) -> BigInt {
    let coeffs = chebyshev_polynomial(d);
    coeffs.get(k).cloned().unwrap_or_default()
}

/// Magnitude of the `x^k` coefficient relevant for degree-`d` growth
/// bounds: from `T_d` when the parities of `d` and `k` agree, otherwise
/// from `T_{d-1}` (whose parity then matches).
pub fn chebyshev_l(d: usize, k: usize) -> Result<BigUint> {
    if k > d {
        return Err(Error::InvalidIndex(format!("need k <= d, got k={k} d={d}")));
    }
    let source = if (d - k) % 2 == 0 { d } else { d - 1 };
    Ok(chebyshev_coefficient(source, k)
        .abs()
        .to_biguint()
        .expect("absolute value is non-negative"))
}

/// Exact multiplier bounding the `k`-th inhomogeneous part of a
/// degree-`d` polynomial by its sup:
/// `L(d,k) (d-k)! k! d^d / (d! k^k (d-k)^{d-k})`.
pub fn markov_step_bound(d: usize, k: usize) -> Result<BoundReport> {
    if k == 0 || k >= d {
        return Err(Error::InvalidIndex(format!("need 1 <= k <= d-1, got k={k} d={d}")));
    }
    let l = chebyshev_l(d, k)?;
    let num: BigUint = l.clone()
        * factorial(d - k)
        * factorial(k)
        * BigUint::from(d).pow(d as u32);
    let den: BigUint =
        factorial(d) * BigUint::from(k).pow(k as u32) * BigUint::from(d - k).pow((d - k) as u32);
    let exact: ExactRational = Ratio::new(num.into(), den.into());
    let ln_value = crate::numeric::ln_ratio(&exact);
    let mut report = BoundReport::from_ln("derivative-step multiplier", "step", ln_value);
    report.d = Some(d);
    report.k = Some(k);
    report = report.with_exact(exact)?;
    Ok(report)
}

/// The split degree minimising the complex-side product bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OptimalK {
    /// Closed-form choice `round((2 sqrt2 / sqrt3) sqrt(d / ln d))`,
    /// clamped to `[1, d-1]`; informational.
    pub formula: usize,
    /// Argmin of the assembled factor over `1 <= k <= d-1`; ties go to
    /// the smaller `k`. Authoritative.
    pub exhaustive: usize,
}

fn complex_split_objective_ln(d: usize, k: usize, cfg: &BoundConfig) -> f64 {
    let (df, kf) = (d as f64, k as f64);
    cfg.c0 * kf.ln() + cfg.c_abs * kf * kf / df + 4.0 * df / (3.0 * kf) + 0.5 * kf * df.ln()
        + 2.0 * kf
        - kf * kf.ln()
}

pub fn optimal_k_complex(d: usize, cfg: &BoundConfig) -> Result<OptimalK> {
    if d < 2 {
        return Err(Error::InvalidIndex(format!("need d >= 2, got d={d}")));
    }
    let raw = (2.0 * 2.0f64.sqrt() / 3.0f64.sqrt()) * (d as f64 / (d as f64).ln()).sqrt();
    let formula = (raw.round() as usize).clamp(1, d - 1);
    let mut best_k = 1;
    let mut best = complex_split_objective_ln(d, 1, cfg);
    for k in 2..d {
        let v = complex_split_objective_ln(d, k, cfg);
        if v < best {
            best = v;
            best_k = k;
        }
    }
    Ok(OptimalK {
        formula,
        exhaustive: best_k,
    })
}

/// The complex-side curve `C_tau e^{(sqrt2/sqrt3 + tau) sqrt(d ln d)}`.
pub fn bound_complex(d: usize, cfg: &BoundConfig) -> Result<BoundReport> {
    if d < 1 {
        return Err(Error::InvalidIndex("need d >= 1".into()));
    }
    let coeff = 2.0f64.sqrt() / 3.0f64.sqrt() + cfg.tau;
    let ln_value = cfg.c_tau.ln() + coeff * (d as f64 * (d as f64).ln()).sqrt();
    let mut r = BoundReport::from_ln("complex split curve", "curve", ln_value);
    r.d = Some(d);
    Ok(r)
}

/// The curve a direct product of one-dimensional estimates would give:
/// `C1 e^{(4/sqrt3) sqrt(d ln d) + (8/sqrt3) sqrt(d / ln d)}`.
pub fn bound_bps(d: usize, cfg: &BoundConfig) -> Result<BoundReport> {
    if d < 2 {
        return Err(Error::InvalidIndex("need d >= 2".into()));
    }
    let (df, lnd) = (d as f64, (d as f64).ln());
    let ln_value =
        cfg.big_c1.ln() + (4.0 / 3.0f64.sqrt()) * (df * lnd).sqrt() + (8.0 / 3.0f64.sqrt()) * (df / lnd).sqrt();
    let mut r = BoundReport::from_ln("product estimate curve", "curve", ln_value);
    r.d = Some(d);
    Ok(r)
}

/// Natural logs of factorials 0..=max as a prefix table; float accuracy
/// suffices for curve comparisons, exactness claims go through bigints.
struct LnFact(Vec<f64>);

impl LnFact {
    fn new(max: usize) -> Self {
        let mut t = Vec::with_capacity(max + 1);
        let mut acc = 0.0;
        t.push(0.0);
        for i in 1..=max {
            acc += (i as f64).ln();
            t.push(acc);
        }
        LnFact(t)
    }

    fn choose(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

/// Boolean-side bound: three curves minimised over the split degree.
#[derive(Clone, Debug)]
pub struct BooleanBound {
    pub d: usize,
    /// Argmin of the strengthened curve; the headline value.
    pub argmin_k: usize,
    pub strengthened: f64,
    pub simplified: f64,
    pub unstrengthened: f64,
    pub ln_strengthened: f64,
    pub ln_simplified: f64,
    pub ln_unstrengthened: f64,
    pub argmin_simplified: usize,
    pub argmin_unstrengthened: usize,
}

impl BooleanBound {
    pub fn report(&self) -> BoundReport {
        let mut r = BoundReport::from_ln("boolean split curve", "curve", self.ln_strengthened);
        r.d = Some(self.d);
        r.k = Some(self.argmin_k);
        r
    }
}

/// Minimises, over `1 <= k <= d-1`, the split comparison
/// `C(d,k)^{-1/2} e^{(d-k)/(2k)} (1 + k/(d-k))^{d-k} (d/k)^{2k}`,
/// together with its simplified exponent form
/// `e^{d/(2k) + (3/2) k ln d - (3/2) k ln k}` and the version without
/// the `C(d,k)^{-1/2}` shrink.
pub fn bound_boolean(d: usize, _cfg: &BoundConfig) -> Result<BooleanBound> {
    if d < 2 {
        return Err(Error::InvalidIndex("need d >= 2".into()));
    }
    let lf = LnFact::new(d);
    let df = d as f64;
    let mut best = (f64::INFINITY, 0usize);
    let mut best_simpl = (f64::INFINITY, 0usize);
    let mut best_plain = (f64::INFINITY, 0usize);
    for k in 1..d {
        let kf = k as f64;
        let dk = (d - k) as f64;
        let plain_ln = dk / (2.0 * kf) + dk * (df / dk).ln() + 2.0 * kf * (df / kf).ln();
        let strong_ln = plain_ln - 0.5 * lf.choose(d, k);
        let simpl_ln = df / (2.0 * kf) + 1.5 * kf * df.ln() - 1.5 * kf * kf.ln();
        if strong_ln < best.0 {
            best = (strong_ln, k);
        }
        if simpl_ln < best_simpl.0 {
            best_simpl = (simpl_ln, k);
        }
        if plain_ln < best_plain.0 {
            best_plain = (plain_ln, k);
        }
    }
    Ok(BooleanBound {
        d,
        argmin_k: best.1,
        strengthened: best.0.exp(),
        simplified: best_simpl.0.exp(),
        unstrengthened: best_plain.0.exp(),
        ln_strengthened: best.0,
        ln_simplified: best_simpl.0,
        ln_unstrengthened: best_plain.0,
        argmin_simplified: best_simpl.1,
        argmin_unstrengthened: best_plain.1,
    })
}

/// Unsigned square-and-multiply; `BigUint` powers with no fraction
/// reduction anywhere on the hot path.
fn biguint_pow(base: &BigUint, mut e: u128) -> BigUint {
    let mut acc = BigUint::one();
    let mut sq = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        sq = &sq * &sq;
        e >>= 1;
    }
    acc
}

/// Exact rational lower bound for `e^d`: `(1 + 1/m)^{m d}`. The base
/// `(1+1/m)^m` increases to `e`, so any `m` keeps the comparison sound;
/// larger `m` only tightens it. Numerator and denominator are coprime
/// (consecutive integers stay coprime under powers), so the ratio is
/// assembled raw rather than through the reducing constructor.
pub fn e_power_lower_rational(d: usize, m: u64) -> ExactRational {
    let e = (m as u128) * d as u128;
    let numer = biguint_pow(&BigUint::from(m + 1), e);
    let denom = biguint_pow(&BigUint::from(m), e);
    Ratio::new_raw(BigInt::from(numer), BigInt::from(denom))
}

/// Exact rational lower bound for `e^d` by a Taylor partial sum
/// `sum_{j<=terms} d^j / j!`; every partial sum undershoots.
pub fn e_power_lower_taylor(d: usize, terms: usize) -> ExactRational {
    let mut acc = ExactRational::zero();
    let mut term = ExactRational::one();
    for j in 0..=terms {
        if j > 0 {
            term = term * Ratio::new(BigInt::from(d), BigInt::from(j));
        }
        acc += term.clone();
    }
    acc
}

/// Proves `C(d^2 + d - 1, d) <= e^d (d+1)^d` exactly, substituting a
/// rational lower bound for `e^d` (so success implies the real
/// inequality; the bound is retried with the Taylor sum if the power
/// form is too loose).
pub fn helper_inequality_exact(d: usize) -> Result<bool> {
    if d == 0 {
        return Err(Error::InvalidIndex("need d >= 1".into()));
    }
    // Cross-multiplied form of `C(d^2+d-1, d) <= (1+1/m)^{md} (d+1)^d`,
    // kept in `BigUint` throughout so no gcd is ever taken.
    let m: u64 = 1000;
    let count = binomial((d * d + d - 1) as u64, d as i64);
    let pow_side = biguint_pow(&BigUint::from(d as u64 + 1), d as u128);
    let e = (m as u128) * d as u128;
    let lhs = count * biguint_pow(&BigUint::from(m), e);
    if lhs <= biguint_pow(&BigUint::from(m + 1), e) * &pow_side {
        return Ok(true);
    }
    let taylor = e_power_lower_taylor(d, 4 * d + 16);
    let lhs = BigInt::from(binomial((d * d + d - 1) as u64, d as i64)) * taylor.denom();
    Ok(lhs <= taylor.numer() * BigInt::from(pow_side))
}

/// Small-`n` report: the critical-norm root of the full family count
/// against its dimension-free cap `sqrt(e (d+1))`.
#[derive(Clone, Debug)]
pub struct TrivialRegimeReport {
    pub n: usize,
    pub d: usize,
    /// `C(n+d-1, d)^{1/(2d)}`.
    pub critical_root: f64,
    /// `sqrt(e (d+1))`.
    pub cap: f64,
    /// The cap was proved to dominate by exact integer arithmetic.
    pub helper_exact: bool,
}

pub fn trivial_regime(n: usize, d: usize) -> Result<TrivialRegimeReport> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidIndex("need n, d >= 1".into()));
    }
    if n > d * d {
        return Err(Error::RegimeMismatch(format!(
            "cap applies for n <= d^2, got n={n} d={d}"
        )));
    }
    let critical_root = (ln_binomial((n + d - 1) as u64, d as i64) / (2.0 * d as f64)).exp();
    let cap = (std::f64::consts::E * (d as f64 + 1.0)).sqrt();
    let helper_exact = helper_inequality_exact(d)?;
    Ok(TrivialRegimeReport {
        n,
        d,
        critical_root,
        cap,
        helper_exact,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Interesting,
    Trivial,
}

/// A pair `(n, d)` is worth the heavy machinery iff `d^2 <= c_abs n`;
/// the boundary counts as interesting.
pub fn regime_classify(n: usize, d: usize, cfg: &BoundConfig) -> Regime {
    if (d * d) as f64 <= cfg.c_abs * n as f64 {
        Regime::Interesting
    } else {
        Regime::Trivial
    }
}

/// Variance, influences, and the two sides of the variance-influence
/// inequality for a multilinear cube polynomial.
#[derive(Clone, Debug)]
pub struct AaQuantities {
    pub variance: f64,
    pub influences: Vec<f64>,
    pub max_influence: f64,
    /// `(variance / d)^K`.
    pub lhs: f64,
    /// `c_abs * max_influence * sup^{2K-2}`.
    pub rhs: f64,
    pub k_exp: f64,
}

pub fn aa_quantities(
    f: &UnimodularPolynomial,
    sup: &SupNormEstimate,
    cfg: &BoundConfig,
) -> Result<AaQuantities> {
    if f.domain() != Domain::Cube || !f.is_homogeneous() {
        return Err(Error::InvalidPolynomial(
            "variance analysis expects a homogeneous multilinear cube polynomial".into(),
        ));
    }
    let mut influences = vec![0.0; f.n()];
    let mut variance = 0.0;
    for (values, coeff) in f.coefficients().entries() {
        let sq = coeff.modulus().powi(2);
        variance += sq;
        for &v in values {
            influences[v - 1] += sq;
        }
    }
    let max_influence = influences.iter().cloned().fold(0.0, f64::max);
    let lhs = (variance / f.d() as f64).powf(cfg.k_exp);
    let rhs = cfg.c_abs * max_influence * sup.value.powf(2.0 * cfg.k_exp - 2.0);
    Ok(AaQuantities {
        variance,
        influences,
        max_influence,
        lhs,
        rhs,
        k_exp: cfg.k_exp,
    })
}

/// Regime table built around the degree where the spectral lower bound
/// stops beating the trivial one.
#[derive(Clone, Debug)]
pub struct AaRegimes {
    pub n: usize,
    /// Largest `d >= 1` (capped at `sqrt(n)`) with
    /// `C0 sqrt(d ln d) < (1/2) ln n`.
    pub d_star: usize,
    /// `C(n, d*)^{1/2}`. Counts here are strictly-increasing supports,
    /// the multilinear convention, not the non-decreasing family size.
    pub trivial_bound_ln: f64,
    /// `n^{1/2} e^{-C0 sqrt(d* ln d*)} C(n, d*)^{1/2}`.
    pub spectral_bound_ln: f64,
    /// `c_abs d^{(K+1)/(2K-2)} n^{-1/(2K-2)}` at `d = d*`.
    pub required_factor: f64,
    /// Upper end `n^epsilon` of the unexplained interval.
    pub gap_upper: f64,
    /// The open interval `(d*, n^epsilon)` contains a degree.
    pub gap_nonempty: bool,
}

pub fn aa_regimes(n: usize, cfg: &BoundConfig) -> Result<AaRegimes> {
    if n < 4 {
        return Err(Error::InvalidIndex(format!("need n >= 4, got n={n}")));
    }
    let half_ln_n = 0.5 * (n as f64).ln();
    let cap = (n as f64).sqrt().floor() as usize;
    let mut d_star = 1;
    for d in 2..=cap {
        if cfg.big_c0 * (d as f64 * (d as f64).ln()).sqrt() < half_ln_n {
            d_star = d;
        } else {
            break;
        }
    }
    let half_ln_count = 0.5 * ln_binomial(n as u64, d_star as i64);
    let spectral_ln =
        half_ln_n - cfg.big_c0 * (d_star as f64 * (d_star as f64).ln()).sqrt() + half_ln_count;
    let required_factor = cfg.c_abs
        * (d_star as f64).powf((cfg.k_exp + 1.0) / (2.0 * cfg.k_exp - 2.0))
        * (n as f64).powf(-1.0 / (2.0 * cfg.k_exp - 2.0));
    let gap_upper = (n as f64).powf(cfg.epsilon);
    Ok(AaRegimes {
        n,
        d_star,
        trivial_bound_ln: half_ln_count,
        spectral_bound_ln: spectral_ln,
        required_factor,
        gap_upper,
        gap_nonempty: (d_star as f64) < gap_upper,
    })
}
