//! Mixed-norm splitting inequalities for coefficient tables.
//!
//! The central object is a two-block mixed norm: split the `d` slots
//! into an outer block of size `k` and an inner block of size `d - k`,
//! sum squares over the inner block, raise to `k/(k+1)`, sum over the
//! outer block, and average geometrically over all splits. The critical
//! coefficient norm `l_{2d/(d+1)}` sits below that mean; everything here
//! either evaluates one side of such an inequality or pins down an
//! endpoint of the chain of bounds built from it.
//!
//! Two coefficient conventions appear, matching `polyform`: plain table
//! entries read through an extension that vanishes off the admissible
//! maps (non-decreasing or injective), and orbit-weighted symmetric
//! coefficients summed over unrestricted maps.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::indexcomb::{
    binomial, binomial_ratio_identity, factorial, ln_binomial, orbit_size_values, subsets,
    IndexSpace, Monotonicity,
};
use crate::numeric::ratio_to_f64;
use crate::polyform::{CoefficientTable, Domain, UnimodularPolynomial};
use crate::{EnumCap, Error, ExactRational, Result};

/// Which admissible family and extension rule the split uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BleiVariant {
    /// Non-decreasing blocks; a combined map contributes its table entry
    /// exactly when it is non-decreasing as a whole.
    Complex,
    /// Strictly increasing blocks; a combined map contributes the entry
    /// at its sorted values exactly when it is injective.
    Boolean,
    /// The injective rule with the split mean shrunk by
    /// `C(d, k)^{-1/2}`. On full strictly-increasing support both sides
    /// depend only on coefficient moduli and the shrunken mean still
    /// dominates (the comparison collapses to root-wise binomial
    /// growth); off full support no proof is wired in here, so
    /// assertions stick to full support even though random searches
    /// have not produced a violation.
    BooleanStrengthened,
}

/// One split's contribution to the geometric mean.
#[derive(Clone, Debug)]
pub struct SubsetFactor {
    /// Slots of the inner (squared) block, size `d - k`.
    pub inner_slots: Vec<usize>,
    pub factor: f64,
}

/// Both sides of the splitting inequality at one `k`.
#[derive(Clone, Debug)]
pub struct BleiSides {
    pub variant: BleiVariant,
    pub k: usize,
    /// Critical coefficient norm `l_{2d/(d+1)}` of the table.
    pub lhs: f64,
    /// Geometric mean of the split factors (shrunk when strengthened).
    pub rhs: f64,
    pub factors: Vec<SubsetFactor>,
}

impl BleiSides {
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs + tol
    }
}

fn family_class(variant: BleiVariant) -> Monotonicity {
    match variant {
        BleiVariant::Complex => Monotonicity::NonDecreasing,
        BleiVariant::Boolean | BleiVariant::BooleanStrengthened => Monotonicity::StrictlyIncreasing,
    }
}

/// Evaluates both sides of the splitting inequality for a coefficient
/// table over its full-degree family. `k` is the outer block size,
/// `1 <= k <= d`; at `k = d` both sides coincide by construction.
pub fn blei_sides(
    table: &CoefficientTable,
    k: usize,
    variant: BleiVariant,
    cap: EnumCap,
) -> Result<BleiSides> {
    let space = table.space();
    let d = space.d();
    let n = space.n();
    if space.slots() != (1..=d).collect::<Vec<_>>() {
        return Err(Error::InvalidIndex("table must live on the full slot range".into()));
    }
    if space.class() != family_class(variant) {
        return Err(Error::InvalidPolynomial(
            "table's family does not match the variant's admissible maps".into(),
        ));
    }
    if k == 0 || k > d {
        return Err(Error::InvalidIndex(format!("need 1 <= k <= d, got k={k} d={d}")));
    }

    let critical = 2.0 * d as f64 / (d as f64 + 1.0);
    let lhs = table
        .entries()
        .map(|(_, c)| c.modulus().powf(critical))
        .sum::<f64>()
        .powf(1.0 / critical);

    let alpha = k as f64 / (k as f64 + 1.0);
    let beta = (k as f64 + 1.0) / (2.0 * k as f64);
    let class = family_class(variant);

    let mut factors = Vec::new();
    let mut ln_sum = 0.0;
    let mut any_zero = false;
    for inner_slots in subsets(d, d - k) {
        let outer_slots: Vec<usize> = (1..=d).filter(|s| !inner_slots.contains(s)).collect();
        let inner_space = IndexSpace::on_slots(d, n, inner_slots.clone(), class)?;
        let outer_space = IndexSpace::on_slots(d, n, outer_slots, class)?;
        let pairs = inner_space.cardinality() * outer_space.cardinality();
        if pairs > BigUint::from(cap.0) {
            return Err(Error::CapExceeded {
                cardinality: pairs,
                cap: cap.0,
            });
        }
        let inner: Vec<_> = inner_space.enumerate(cap)?.collect();
        let mut outer_sum = 0.0;
        for j in outer_space.enumerate(cap)? {
            let mut inner_sum = 0.0;
            for i in &inner {
                let combined = i.combine(&j)?;
                let a = match variant {
                    BleiVariant::Complex => {
                        if combined.is_nondecreasing() {
                            table.value_at(combined.values())
                        } else {
                            continue;
                        }
                    }
                    BleiVariant::Boolean | BleiVariant::BooleanStrengthened => {
                        if combined.is_injective() {
                            table.value_at(&combined.sorted_values())
                        } else {
                            continue;
                        }
                    }
                };
                inner_sum += a.norm_sqr();
            }
            outer_sum += inner_sum.powf(alpha);
        }
        let factor = outer_sum.powf(beta);
        if factor == 0.0 {
            any_zero = true;
        } else {
            ln_sum += factor.ln();
        }
        factors.push(SubsetFactor {
            inner_slots,
            factor,
        });
    }

    let splits = factors.len() as f64;
    let mut rhs = if any_zero { 0.0 } else { (ln_sum / splits).exp() };
    if variant == BleiVariant::BooleanStrengthened {
        rhs *= (-0.5 * ln_binomial(d as u64, k as i64)).exp();
    }
    Ok(BleiSides {
        variant,
        k,
        lhs,
        rhs,
        factors,
    })
}

/// Critical norm of the full unimodular non-decreasing table and the
/// two-factor product that bounds it after splitting at `k`.
#[derive(Clone, Copy, Debug)]
pub struct CriticalNormEndpoints {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    /// `C(n+d-1, d)^{(d+1)/(2d)}`.
    pub critical_norm: f64,
    /// `C(n+k-1, k)^{1/(2k)} C(n+d-1, d)^{1/2}`.
    pub product_bound: f64,
}

impl CriticalNormEndpoints {
    /// The comparison reduces to the root-wise growth of the family
    /// counts, so it is checked in log space.
    pub fn holds(&self) -> bool {
        let full = ln_binomial((self.n + self.d - 1) as u64, self.d as i64);
        let split = ln_binomial((self.n + self.k - 1) as u64, self.k as i64);
        full * (self.d as f64 + 1.0) / (2.0 * self.d as f64)
            <= split / (2.0 * self.k as f64) + full / 2.0 + 1e-12
    }
}

pub fn critical_norm_endpoints(d: usize, n: usize, k: usize) -> Result<CriticalNormEndpoints> {
    if d == 0 || n == 0 || k == 0 || k > d {
        return Err(Error::InvalidIndex(format!(
            "need 1 <= k <= d and n >= 1, got d={d} n={n} k={k}"
        )));
    }
    let full = ln_binomial((n + d - 1) as u64, d as i64);
    let split = ln_binomial((n + k - 1) as u64, k as i64);
    let critical_norm = (full * (d as f64 + 1.0) / (2.0 * d as f64)).exp();
    let product_bound = (split / (2.0 * k as f64) + full / 2.0).exp();
    Ok(CriticalNormEndpoints {
        d,
        n,
        k,
        critical_norm,
        product_bound,
    })
}

/// The two strictly-increasing product bounds whose quotient collapses
/// to a single binomial: a count cap on the critical norm of a full
/// unimodular table, and the per-split product it is measured against.
#[derive(Clone, Debug)]
pub struct SplitProductRatio {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    /// `C(n,d)^{1/2} C(n,k)^{1/(2k)}`.
    pub count_cap: f64,
    /// `C(n-k,d-k)^{1/2} C(n,k)^{(k+1)/(2k)}`.
    pub product_bound: f64,
    /// `count_cap / product_bound = C(d,k)^{-1/2}`.
    pub ratio: f64,
    /// `ratio^2 = C(n,d) / (C(n-k,d-k) C(n,k))`, exact.
    pub ratio_sq_exact: ExactRational,
}

pub fn split_product_ratio(n: usize, d: usize, k: usize) -> Result<SplitProductRatio> {
    // Validates 1 <= k <= d <= n and decides the identity in exact
    // rationals before any float enters.
    let ratio_sq_exact = binomial_ratio_identity(k, d, n)?;
    let ln_nd = ln_binomial(n as u64, d as i64);
    let ln_nk = ln_binomial(n as u64, k as i64);
    let ln_rest = ln_binomial((n - k) as u64, (d - k) as i64);
    let count_cap = (0.5 * ln_nd + ln_nk / (2.0 * k as f64)).exp();
    let product_bound = (0.5 * ln_rest + ln_nk * (k as f64 + 1.0) / (2.0 * k as f64)).exp();
    let ratio = ratio_to_f64(&ratio_sq_exact).sqrt();
    Ok(SplitProductRatio {
        n,
        d,
        k,
        count_cap,
        product_bound,
        ratio,
        ratio_sq_exact,
    })
}

/// Geometric mean over size-`k` outer blocks of the mixed sums of
/// orbit-weighted symmetric coefficients: the inner term for a combined
/// unrestricted map is its orbit size times the squared modulus of the
/// symmetric coefficient, which for a unimodular table entry is one over
/// the orbit size.
pub fn mixed_orbit_mean(p: &UnimodularPolynomial, k: usize, cap: EnumCap) -> Result<f64> {
    if p.domain() != Domain::Torus || !p.is_homogeneous() {
        return Err(Error::InvalidPolynomial(
            "orbit-weighted splitting needs a homogeneous torus polynomial".into(),
        ));
    }
    let d = p.d();
    let n = p.n();
    if k == 0 || k > d {
        return Err(Error::InvalidIndex(format!("need 1 <= k <= d, got k={k} d={d}")));
    }
    let alpha = k as f64 / (k as f64 + 1.0);
    let beta = (k as f64 + 1.0) / (2.0 * k as f64);

    let mut ln_sum = 0.0;
    let mut splits = 0.0;
    let mut any_zero = false;
    for outer_slots in subsets(d, k) {
        let inner_slots: Vec<usize> = (1..=d).filter(|s| !outer_slots.contains(s)).collect();
        let outer_space =
            IndexSpace::on_slots(d, n, outer_slots, Monotonicity::Unrestricted)?;
        let inner_space =
            IndexSpace::on_slots(d, n, inner_slots, Monotonicity::Unrestricted)?;
        let pairs = inner_space.cardinality() * outer_space.cardinality();
        if pairs > BigUint::from(cap.0) {
            return Err(Error::CapExceeded {
                cardinality: pairs,
                cap: cap.0,
            });
        }
        let inner: Vec<_> = inner_space.enumerate(cap)?.collect();
        let mut outer_sum = 0.0;
        for i in outer_space.enumerate(cap)? {
            let mut inner_sum = 0.0;
            for j in &inner {
                let combined = i.combine(j)?;
                let a = p.coefficient(&combined.sorted_values());
                if a == num_complex::Complex64::default() {
                    continue;
                }
                let orbit = orbit_size_values(combined.values())
                    .to_f64()
                    .expect("orbit size fits in f64");
                inner_sum += a.norm_sqr() / orbit;
            }
            outer_sum += inner_sum.powf(alpha);
        }
        if outer_sum == 0.0 {
            any_zero = true;
        } else {
            ln_sum += beta * outer_sum.ln();
        }
        splits += 1.0;
    }
    if any_zero {
        return Ok(0.0);
    }
    Ok((ln_sum / splits).exp())
}

/// Closed-form bracket around the orbit-weighted split mean of the full
/// unimodular table. The lower end carries an adjustable constant; with
/// constant one it can overshoot for large `n`, so envelope tests report
/// the constants that restore the bracket instead of asserting one.
#[derive(Clone, Copy, Debug)]
pub struct MixedOrbitBounds {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub lower: f64,
    /// Upper end per unit of sup-norm; multiply by a sound sup-norm
    /// upper bound (the l1 coefficient norm will do) before comparing.
    pub upper_per_sup: f64,
    pub lower_constant: f64,
    pub c0: f64,
}

pub fn mixed_orbit_bounds(
    d: usize,
    n: usize,
    k: usize,
    lower_constant: f64,
    c0: f64,
) -> Result<MixedOrbitBounds> {
    if d == 0 || n == 0 || k == 0 || k > d {
        return Err(Error::InvalidIndex(format!(
            "need 1 <= k <= d and n >= 1, got d={d} n={n} k={k}"
        )));
    }
    let beta = (k as f64 + 1.0) / (2.0 * k as f64);
    // Falling factorial d (d-1) .. (d-k+1), in logs.
    let ff_ln: f64 = (0..k).map(|t| ((d - t) as f64).ln()).sum();
    let kfact_ln = factorial(k).to_f64().expect("k! fits in f64").ln();
    let lower_ln = lower_constant.ln() - 0.5 * ff_ln
        + 0.5 * ln_binomial((n + d - k - 1) as u64, (d - k) as i64)
        + beta * kfact_ln
        + beta * ln_binomial((n + k - 1) as u64, k as i64);
    let shrink = if k == d {
        0.0
    } else {
        4.0 * (d - k) as f64 / (3.0 * k as f64 - 1.0)
    };
    let spread = if k == d {
        d as f64 * (d as f64).ln()
    } else {
        d as f64 * (d as f64).ln() - (d - k) as f64 * ((d - k) as f64).ln()
    };
    let upper_ln = -0.5 * ff_ln + shrink + c0 * (k as f64).ln() + spread;
    Ok(MixedOrbitBounds {
        d,
        n,
        k,
        lower: lower_ln.exp(),
        upper_per_sup: upper_ln.exp(),
        lower_constant,
        c0,
    })
}

/// All the closed-form split quantities for one `(d, n, k)` in one view.
#[derive(Clone, Copy, Debug)]
pub struct SplitSummary {
    pub endpoints: CriticalNormEndpoints,
    pub mixed: MixedOrbitBounds,
}

pub fn split_summary(
    d: usize,
    n: usize,
    k: usize,
    lower_constant: f64,
    c0: f64,
) -> Result<SplitSummary> {
    Ok(SplitSummary {
        endpoints: critical_norm_endpoints(d, n, k)?,
        mixed: mixed_orbit_bounds(d, n, k, lower_constant, c0)?,
    })
}

/// Exhaustive check that combining a block `i` on `k` slots with a block
/// `j` on the rest multiplies the orbit size by at most
/// `d (d-1) .. (d-k+1)`, over every subset and every pair of
/// unrestricted blocks. Ratios are exact rationals; `worst_fraction` is
/// the largest ratio-to-bound quotient seen and the check holds when it
/// stays at most one.
#[derive(Clone, Debug)]
pub struct OrbitGrowthReport {
    pub d: usize,
    pub n: usize,
    pub checked: u64,
    pub worst_fraction: ExactRational,
}

impl OrbitGrowthReport {
    pub fn holds(&self) -> bool {
        self.worst_fraction <= ExactRational::one()
    }
}

pub fn orbit_growth_check(d: usize, n: usize, cap: EnumCap) -> Result<OrbitGrowthReport> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidIndex(format!("need d, n >= 1, got d={d} n={n}")));
    }
    let mut checked = 0u64;
    let mut worst = ExactRational::zero();
    for outer_slots in (0..=d).flat_map(|k| subsets(d, k)) {
        let k = outer_slots.len();
        let inner_slots: Vec<usize> = (1..=d).filter(|s| !outer_slots.contains(s)).collect();
        let outer_space =
            IndexSpace::on_slots(d, n, outer_slots, Monotonicity::Unrestricted)?;
        let inner_space =
            IndexSpace::on_slots(d, n, inner_slots, Monotonicity::Unrestricted)?;
        let pairs = inner_space.cardinality() * outer_space.cardinality();
        if pairs > BigUint::from(cap.0) {
            return Err(Error::CapExceeded {
                cardinality: pairs,
                cap: cap.0,
            });
        }
        // d! / (d-k)!
        let ff: BigUint = (d - k + 1..=d).map(BigUint::from).product::<BigUint>().max(BigUint::one());
        let inner: Vec<_> = inner_space.enumerate(cap)?.collect();
        for i in outer_space.enumerate(cap)? {
            for j in &inner {
                let combined = i.combine(j)?;
                let ratio = Ratio::new(
                    orbit_size_values(combined.values()).into(),
                    orbit_size_values(j.values()).into(),
                );
                let fraction = ratio / ExactRational::from_integer(ff.clone().into());
                if fraction > worst {
                    worst = fraction;
                }
                checked += 1;
            }
        }
    }
    Ok(OrbitGrowthReport {
        d,
        n,
        checked,
        worst_fraction: worst,
    })
}

/// Exhaustive check of how a strictly increasing index spreads over
/// block splits: for every split of the `d` slots into `d - k` and `k`,
/// every support element arises from exactly `C(d, k)` injective block
/// pairs, and the pair total ties the three binomial counts together as
/// `C(n, k) C(n-k, d-k) = C(n, d) C(d, k)`.
#[derive(Clone, Debug)]
pub struct SplitCountCheck {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub per_element: BigUint,
    pub total_pairs: BigUint,
    pub holds: bool,
}

pub fn split_count_check(d: usize, n: usize, k: usize, cap: EnumCap) -> Result<SplitCountCheck> {
    if d == 0 || k > d || d > n {
        return Err(Error::InvalidIndex(format!(
            "need 1 <= d <= n and k <= d, got d={d} n={n} k={k}"
        )));
    }
    let expected_per = binomial(d as u64, k as i64);
    let expected_total = binomial(n as u64, k as i64) * binomial((n - k) as u64, (d - k) as i64);
    let mut holds = expected_total.clone() == binomial(n as u64, d as i64) * expected_per.clone();

    let full = IndexSpace::full(d, n, Monotonicity::StrictlyIncreasing)?;
    for inner_slots in subsets(d, d - k) {
        let outer_slots: Vec<usize> = (1..=d).filter(|s| !inner_slots.contains(s)).collect();
        let inner_space =
            IndexSpace::on_slots(d, n, inner_slots, Monotonicity::StrictlyIncreasing)?;
        let outer_space =
            IndexSpace::on_slots(d, n, outer_slots, Monotonicity::StrictlyIncreasing)?;
        let pairs = inner_space.cardinality() * outer_space.cardinality();
        if pairs > BigUint::from(cap.0) {
            return Err(Error::CapExceeded {
                cardinality: pairs,
                cap: cap.0,
            });
        }
        let mut counts: std::collections::BTreeMap<Vec<usize>, u64> = full
            .enumerate(cap)?
            .map(|r| (r.values().to_vec(), 0u64))
            .collect();
        let inner: Vec<_> = inner_space.enumerate(cap)?.collect();
        let mut total = 0u64;
        for j in outer_space.enumerate(cap)? {
            for i in &inner {
                let combined = i.combine(&j)?;
                if !combined.is_injective() {
                    continue;
                }
                *counts.get_mut(&combined.sorted_values()).expect("sorted injective map is a support element") += 1;
                total += 1;
            }
        }
        holds &= counts
            .values()
            .all(|&c| BigUint::from(c) == expected_per);
        holds &= BigUint::from(total) == expected_total;
    }
    Ok(SplitCountCheck {
        d,
        n,
        k,
        per_element: expected_per,
        total_pairs: expected_total,
        holds,
    })
}
