//! Exact combinatorics of monomial index families.
//!
//! A monomial in `n` variables is identified with a map from an ordered
//! slot set `S ⊆ {1, .., d}` into `{1, .., n}`. Three families appear
//! throughout: unrestricted maps, non-decreasing maps (torus monomials),
//! and strictly increasing maps (multilinear cube monomials). This module
//! enumerates those families under an explicit cap, computes their
//! cardinalities and orbit sizes exactly, and decides the counting
//! identities and inequalities the bound calculators rest on. Everything
//! here is integer or rational arithmetic; nothing is approximated.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numeric::{ln_biguint, ExactRational};
use crate::{EnumCap, Error, Result};

/// Ordering constraint a family of index maps satisfies along its slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monotonicity {
    Unrestricted,
    NonDecreasing,
    StrictlyIncreasing,
}

/// Binomial coefficient `C(n, k)`, exactly. Zero when `k` is negative or
/// exceeds `n`, matching the usual convention.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    // Each partial product n(n-1)..(n-i+1)/i! is itself a binomial
    // coefficient, so the division is exact at every step.
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub(crate) fn factorial(m: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=m {
        acc *= BigUint::from(i);
    }
    acc
}

/// All subsets of `{1, .., d}` with `size` elements, in lexicographic order.
pub fn subsets(d: usize, size: usize) -> Vec<Vec<usize>> {
    (1..=d).combinations(size).collect()
}

/// A map from an ordered slot set into `{1, .., n}`, tagged with the
/// family it was drawn from. Slots are 1-based positions in `{1, .., d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    slots: Vec<usize>,
    values: Vec<usize>,
    class: Monotonicity,
}

impl MultiIndex {
    /// Builds an index over explicit slots, validating slot order and the
    /// declared monotonicity along those slots.
    pub fn new(slots: Vec<usize>, values: Vec<usize>, class: Monotonicity) -> Result<Self> {
        if slots.len() != values.len() {
            return Err(Error::InvalidIndex(format!(
                "{} slots vs {} values",
                slots.len(),
                values.len()
            )));
        }
        if !slots.windows(2).all(|w| w[0] < w[1]) || slots.first().is_some_and(|&s| s == 0) {
            return Err(Error::InvalidIndex("slots must be increasing and 1-based".into()));
        }
        if values.iter().any(|&v| v == 0) {
            return Err(Error::InvalidIndex("values are 1-based".into()));
        }
        let mi = MultiIndex { slots, values, class };
        if !mi.satisfies_class() {
            return Err(Error::InvalidIndex(format!(
                "values {:?} violate {:?}",
                mi.values, mi.class
            )));
        }
        Ok(mi)
    }

    /// Index on the full slot range `1..=values.len()`.
    pub fn full(values: Vec<usize>, class: Monotonicity) -> Result<Self> {
        let slots = (1..=values.len()).collect();
        Self::new(slots, values, class)
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn class(&self) -> Monotonicity {
        self.class
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn satisfies_class(&self) -> bool {
        match self.class {
            Monotonicity::Unrestricted => true,
            Monotonicity::NonDecreasing => self.values.windows(2).all(|w| w[0] <= w[1]),
            Monotonicity::StrictlyIncreasing => self.values.windows(2).all(|w| w[0] < w[1]),
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    /// True when no value repeats.
    pub fn is_injective(&self) -> bool {
        let mut seen = self.values.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] < w[1])
    }

    /// The non-decreasing rearrangement of the values.
    pub fn sorted_values(&self) -> Vec<usize> {
        let mut v = self.values.clone();
        v.sort_unstable();
        v
    }

    /// Merges two indices with disjoint slot sets into one map on the
    /// union, keeping values attached to their slots. The result carries
    /// no monotonicity promise.
    pub fn combine(&self, other: &MultiIndex) -> Result<MultiIndex> {
        let mut pairs: Vec<(usize, usize)> = self
            .slots
            .iter()
            .copied()
            .zip(self.values.iter().copied())
            .chain(other.slots.iter().copied().zip(other.values.iter().copied()))
            .collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidIndex("slot sets overlap".into()));
        }
        let (slots, values) = pairs.into_iter().unzip();
        Ok(MultiIndex {
            slots,
            values,
            class: Monotonicity::Unrestricted,
        })
    }
}

/// Number of distinct rearrangements of the value multiset over the same
/// slot count: `m! / prod_v (multiplicity of v)!`.
pub fn orbit_size(i: &MultiIndex) -> BigUint {
    orbit_size_values(i.values())
}

/// Orbit size computed directly from a value list.
pub fn orbit_size_values(values: &[usize]) -> BigUint {
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in values {
        *mult.entry(v).or_insert(0) += 1;
    }
    let mut acc = factorial(values.len());
    for m in mult.values() {
        acc /= factorial(*m);
    }
    acc
}

/// A family of index maps: all maps from `slots ⊆ {1, .., d}` into
/// `{1, .., n}` satisfying `class`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSpace {
    d: usize,
    n: usize,
    slots: Vec<usize>,
    class: Monotonicity,
}

impl IndexSpace {
    /// Space of maps on the full slot range `{1, .., d}`.
    pub fn full(d: usize, n: usize, class: Monotonicity) -> Result<Self> {
        Self::on_slots(d, n, (1..=d).collect(), class)
    }

    /// Space of maps on an explicit subset of `{1, .., d}`.
    pub fn on_slots(d: usize, n: usize, slots: Vec<usize>, class: Monotonicity) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidIndex("need at least one variable".into()));
        }
        if !slots.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidIndex("slots must be strictly increasing".into()));
        }
        if slots.iter().any(|&s| s == 0 || s > d) {
            return Err(Error::InvalidIndex(format!("slots must lie in 1..={d}")));
        }
        Ok(IndexSpace { d, n, slots, class })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn class(&self) -> Monotonicity {
        self.class
    }

    /// Slots of `{1, .., d}` not used by this space.
    pub fn complement_slots(&self) -> Vec<usize> {
        (1..=self.d).filter(|s| !self.slots.contains(s)).collect()
    }

    /// Exact number of maps in the family: `n^m` unrestricted,
    /// `C(n+m-1, m)` non-decreasing, `C(n, m)` strictly increasing,
    /// where `m` is the slot count.
    pub fn cardinality(&self) -> BigUint {
        let m = self.slots.len();
        let n = self.n as u64;
        match self.class {
            Monotonicity::Unrestricted => BigUint::from(self.n).pow(m as u32),
            Monotonicity::NonDecreasing => binomial(n + m as u64 - 1, m as i64),
            Monotonicity::StrictlyIncreasing => binomial(n, m as i64),
        }
    }

    /// True when the index belongs to this family.
    pub fn contains(&self, i: &MultiIndex) -> bool {
        if i.slots() != self.slots.as_slice() {
            return false;
        }
        if i.values().iter().any(|&v| v > self.n) {
            return false;
        }
        match self.class {
            Monotonicity::Unrestricted => true,
            Monotonicity::NonDecreasing => i.is_nondecreasing(),
            Monotonicity::StrictlyIncreasing => i.is_strictly_increasing(),
        }
    }

    /// Lexicographic stream over the family. Refuses to start when the
    /// cardinality exceeds the cap; the error carries the exact count.
    pub fn enumerate(&self, cap: EnumCap) -> Result<IndexStream> {
        let cardinality = self.cardinality();
        if cardinality > BigUint::from(cap.0) {
            return Err(Error::CapExceeded {
                cardinality,
                cap: cap.0,
            });
        }
        Ok(IndexStream {
            space: self.clone(),
            next_values: self.first_values(),
        })
    }

    fn first_values(&self) -> Option<Vec<usize>> {
        let m = self.slots.len();
        match self.class {
            Monotonicity::Unrestricted | Monotonicity::NonDecreasing => Some(vec![1; m]),
            Monotonicity::StrictlyIncreasing => {
                if m > self.n {
                    None
                } else {
                    Some((1..=m).collect())
                }
            }
        }
    }
}

/// Lexicographic iterator over an [`IndexSpace`]. Re-create via
/// [`IndexSpace::enumerate`] to restart; streams are independent.
#[derive(Clone, Debug)]
pub struct IndexStream {
    space: IndexSpace,
    next_values: Option<Vec<usize>>,
}

impl Iterator for IndexStream {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let values = self.next_values.take()?;
        self.next_values = successor(&values, self.space.n, self.space.class);
        Some(MultiIndex {
            slots: self.space.slots.clone(),
            values,
            class: self.space.class,
        })
    }
}

fn successor(values: &[usize], n: usize, class: Monotonicity) -> Option<Vec<usize>> {
    let m = values.len();
    if m == 0 {
        return None;
    }
    let mut v = values.to_vec();
    match class {
        Monotonicity::Unrestricted => {
            for i in (0..m).rev() {
                if v[i] < n {
                    v[i] += 1;
                    v[i + 1..].fill(1);
                    return Some(v);
                }
            }
            None
        }
        Monotonicity::NonDecreasing => {
            for i in (0..m).rev() {
                if v[i] < n {
                    v[i] += 1;
                    let val = v[i];
                    v[i + 1..].fill(val);
                    return Some(v);
                }
            }
            None
        }
        Monotonicity::StrictlyIncreasing => {
            for i in (0..m).rev() {
                if v[i] < n - (m - 1 - i) {
                    v[i] += 1;
                    for j in i + 1..m {
                        v[j] = v[j - 1] + 1;
                    }
                    return Some(v);
                }
            }
            None
        }
    }
}

/// Number of non-decreasing maps on the full `{1, .., d}` restricting to
/// `j` on `j`'s slots, by the per-gap product: free slots between two
/// pinned slots must take non-decreasing values in the closed range the
/// pins allow, contributing a stars-and-bars factor per gap.
pub fn count_nondecreasing_extensions(j: &MultiIndex, d: usize, n: usize) -> Result<BigUint> {
    validate_partial_nondecreasing(j, d, n)?;
    let mut ways = BigUint::one();
    let mut prev_slot = 0usize;
    let mut lo = 1usize;
    for (&slot, &val) in j.slots().iter().zip(j.values()) {
        let gap = slot - prev_slot - 1;
        ways *= range_fill_count(lo, val, gap);
        prev_slot = slot;
        lo = val;
    }
    ways *= range_fill_count(lo, n, d - prev_slot);
    Ok(ways)
}

/// Same count, by filtering the full non-decreasing family. Reference
/// path for the per-gap product; the two must agree.
pub fn count_nondecreasing_extensions_by_enumeration(
    j: &MultiIndex,
    d: usize,
    n: usize,
    cap: EnumCap,
) -> Result<BigUint> {
    validate_partial_nondecreasing(j, d, n)?;
    let full = IndexSpace::full(d, n, Monotonicity::NonDecreasing)?;
    let mut count = BigUint::zero();
    for phi in full.enumerate(cap)? {
        if restricts_to(&phi, j) {
            count += BigUint::one();
        }
    }
    Ok(count)
}

fn validate_partial_nondecreasing(j: &MultiIndex, d: usize, n: usize) -> Result<()> {
    if !j.is_nondecreasing() {
        return Err(Error::InvalidIndex("pinned values must be non-decreasing".into()));
    }
    if j.slots().iter().any(|&s| s > d) {
        return Err(Error::InvalidIndex(format!("pinned slots must lie in 1..={d}")));
    }
    if j.values().iter().any(|&v| v > n) {
        return Err(Error::InvalidIndex(format!("pinned values must lie in 1..={n}")));
    }
    Ok(())
}

/// Non-decreasing sequences of length `len` inside `{lo, .., hi}`.
fn range_fill_count(lo: usize, hi: usize, len: usize) -> BigUint {
    debug_assert!(lo <= hi);
    let span = (hi - lo + 1) as u64;
    binomial(span + len as u64 - 1, len as i64)
}

fn restricts_to(phi: &MultiIndex, j: &MultiIndex) -> bool {
    j.slots().iter().zip(j.values()).all(|(&slot, &val)| {
        let pos = phi.slots().iter().position(|&s| s == slot);
        pos.is_some_and(|p| phi.values()[p] == val)
    })
}

/// Closed form and brute-force mean of the extension count over all
/// non-decreasing assignments on the slots complementary to `s`.
#[derive(Clone, Debug)]
pub struct ExpectedExtensions {
    /// `C(n+d-1, d) / C(n+k-1, k)` as an exact rational.
    pub closed_form: ExactRational,
    /// Mean of per-assignment extension counts from full enumeration;
    /// `None` when the enumeration cap was exceeded.
    pub brute_force: Option<ExactRational>,
}

/// Mean number of non-decreasing maps on `{1, .., d}` extending a uniform
/// random non-decreasing assignment on the complement of `s`, where
/// `|s| = d - k`. Evaluates both the closed form and, under the cap, the
/// brute-force mean, and insists they agree exactly.
pub fn expected_extensions(
    d: usize,
    k: usize,
    n: usize,
    s: &[usize],
    cap: EnumCap,
) -> Result<ExpectedExtensions> {
    if k == 0 || k > d {
        return Err(Error::InvalidIndex(format!("need 1 <= k <= d, got k={k} d={d}")));
    }
    if s.len() != d - k {
        return Err(Error::InvalidIndex(format!(
            "slot set has {} elements, need d-k = {}",
            s.len(),
            d - k
        )));
    }
    let s_space = IndexSpace::on_slots(d, n, s.to_vec(), Monotonicity::NonDecreasing)?;
    let hat = s_space.complement_slots();

    let total = binomial((n + d - 1) as u64, d as i64);
    let assignments = binomial((n + k - 1) as u64, k as i64);
    let closed_form = ExactRational::new(BigInt::from(total.clone()), BigInt::from(assignments.clone()));

    let full = IndexSpace::full(d, n, Monotonicity::NonDecreasing)?;
    let hat_space = IndexSpace::on_slots(d, n, hat.clone(), Monotonicity::NonDecreasing)?;
    let brute_force = match (full.enumerate(cap), hat_space.enumerate(cap)) {
        (Ok(phis), Ok(js)) => {
            // Bucket the full family by its restriction to the complement;
            // every map lands in exactly one bucket.
            let mut buckets: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
            for phi in phis {
                let key: Vec<usize> = hat
                    .iter()
                    .map(|&slot| phi.values()[phi.slots().iter().position(|&t| t == slot).unwrap()])
                    .collect();
                *buckets.entry(key).or_insert(0) += 1;
            }
            let mut sum = BigUint::zero();
            let mut count = BigUint::zero();
            for j in js {
                sum += buckets.get(j.values()).copied().unwrap_or(0);
                count += BigUint::one();
            }
            assert_eq!(sum, total, "restriction must partition the full family");
            assert_eq!(count, assignments);
            Some(ExactRational::new(BigInt::from(sum), BigInt::from(count)))
        }
        _ => None,
    };

    if let Some(bf) = &brute_force {
        assert_eq!(
            &closed_form, bf,
            "closed form disagrees with enumeration at d={d} k={k} n={n} s={s:?}"
        );
    }
    Ok(ExpectedExtensions {
        closed_form,
        brute_force,
    })
}

/// Outcome of the power comparison
/// `C(n+d-1, d)^k <= C(n+k-1, k)^d`, decided in exact integers.
#[derive(Clone, Debug)]
pub struct PowerComparisonCheck {
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub lhs_pow: BigUint,
    pub rhs_pow: BigUint,
}

impl PowerComparisonCheck {
    pub fn holds(&self) -> bool {
        self.lhs_pow <= self.rhs_pow
    }
}

/// Decides whether `C(n+d-1, d)^{1/d} <= C(n+k-1, k)^{1/k}` by comparing
/// the cross-multiplied integer powers, avoiding fractional arithmetic.
pub fn check_power_comparison(k: usize, d: usize, n: usize) -> Result<PowerComparisonCheck> {
    if !(1 <= k && k <= d && d <= n) {
        return Err(Error::InvalidIndex(format!(
            "need 1 <= k <= d <= n, got k={k} d={d} n={n}"
        )));
    }
    let lhs = binomial((n + d - 1) as u64, d as i64).pow(k as u32);
    let rhs = binomial((n + k - 1) as u64, k as i64).pow(d as u32);
    Ok(PowerComparisonCheck {
        k,
        d,
        n,
        lhs_pow: lhs,
        rhs_pow: rhs,
    })
}

/// Evaluates `C(n, d) / (C(n-k, d-k) C(n, k))` exactly and insists it
/// equals `1 / C(d, k)`; returns the common value.
pub fn binomial_ratio_identity(k: usize, d: usize, n: usize) -> Result<ExactRational> {
    if !(1 <= k && k <= d && d <= n) {
        return Err(Error::InvalidIndex(format!(
            "need 1 <= k <= d <= n, got k={k} d={d} n={n}"
        )));
    }
    let num = binomial(n as u64, d as i64);
    let den = binomial((n - k) as u64, (d - k) as i64) * binomial(n as u64, k as i64);
    let lhs = ExactRational::new(BigInt::from(num), BigInt::from(den));
    let rhs = ExactRational::new(BigInt::one(), BigInt::from(binomial(d as u64, k as i64)));
    assert_eq!(lhs, rhs, "ratio identity failed at k={k} d={d} n={n}");
    Ok(rhs)
}

/// Default constant in the sampling promise `k <= c sqrt(d)` for the
/// binomial-shift comparison; exposed because nothing pins it.
pub const DEFAULT_PROMISE_C: f64 = 3.0;

/// One numerical check of `C(n+k-1, k) / C(n, k) <= e^{3k^2/n}`,
/// in log form.
#[derive(Clone, Copy, Debug)]
pub struct ShiftRatioCheck {
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub ratio_ln: f64,
    pub bound_ln: f64,
}

impl ShiftRatioCheck {
    pub fn holds(&self) -> bool {
        self.ratio_ln <= self.bound_ln + 1e-12
    }
}

/// Compares the shifted binomial against its exponential bound at one
/// triple. The ratio is evaluated from exact integers, then logged.
pub fn shift_ratio_check(k: usize, d: usize, n: usize) -> ShiftRatioCheck {
    let shifted = binomial((n + k - 1) as u64, k as i64);
    let plain = binomial(n as u64, k as i64);
    let ratio_ln = ln_biguint(&shifted) - ln_biguint(&plain);
    let bound_ln = 3.0 * (k * k) as f64 / n as f64;
    ShiftRatioCheck {
        k,
        d,
        n,
        ratio_ln,
        bound_ln,
    }
}

/// Deterministic sample of triples satisfying `k <= promise_c sqrt(d)`,
/// `k <= d`, and `d^2 <= n`, each checked against the exponential bound.
pub fn shift_ratio_samples(count: usize, seed: u64, promise_c: f64) -> Vec<ShiftRatioCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = rng.gen_range(2..=40usize);
        let k_hi = ((promise_c * (d as f64).sqrt()).floor() as usize).clamp(1, d);
        let k = rng.gen_range(1..=k_hi);
        let n = rng.gen_range(d * d..=4 * d * d);
        out.push(shift_ratio_check(k, d, n));
    }
    out
}

/// Outcome of one row in a verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The enumeration cap stopped the reference computation.
    Skipped,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

/// One checked instance, with both sides rendered exactly for reporting.
#[derive(Clone, Debug)]
pub struct SuiteRow {
    pub check: &'static str,
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub subset: Option<Vec<usize>>,
    pub lhs: String,
    pub rhs: String,
    pub status: CheckStatus,
}

/// Sweeps the extension-count expectation over every `d <= d_max`,
/// `n <= n_max`, `1 <= k <= d`, and every slot subset of size `d - k`.
/// `inject_fault` corrupts the first closed form before comparison; it
/// exists so failure reporting stays testable end to end.
pub fn extension_expectation_suite(
    d_max: usize,
    n_max: usize,
    cap: EnumCap,
    inject_fault: bool,
) -> Vec<SuiteRow> {
    let mut rows = Vec::new();
    let mut faulted = !inject_fault;
    for d in 1..=d_max {
        for n in 1..=n_max {
            for k in 1..=d {
                for s in subsets(d, d - k) {
                    let row = match expected_extensions(d, k, n, &s, cap) {
                        Ok(ext) => {
                            let mut closed = ext.closed_form.clone();
                            if !faulted {
                                closed += ExactRational::one();
                                faulted = true;
                            }
                            match &ext.brute_force {
                                Some(bf) => SuiteRow {
                                    check: "extension-expectation",
                                    d,
                                    n,
                                    k,
                                    subset: Some(s.clone()),
                                    lhs: closed.to_string(),
                                    rhs: bf.to_string(),
                                    status: if &closed == bf {
                                        CheckStatus::Pass
                                    } else {
                                        CheckStatus::Fail
                                    },
                                },
                                None => SuiteRow {
                                    check: "extension-expectation",
                                    d,
                                    n,
                                    k,
                                    subset: Some(s.clone()),
                                    lhs: closed.to_string(),
                                    rhs: "cap".into(),
                                    status: CheckStatus::Skipped,
                                },
                            }
                        }
                        Err(e) => unreachable!("suite inputs are valid: {e}"),
                    };
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// Sweeps the integer-power comparison over `1 <= k <= d <= n <= n_max`.
pub fn power_comparison_suite(n_max: usize) -> Vec<SuiteRow> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for d in 1..=n {
            for k in 1..=d {
                let chk = check_power_comparison(k, d, n).expect("suite inputs are valid");
                rows.push(SuiteRow {
                    check: "power-comparison",
                    d,
                    n,
                    k,
                    subset: None,
                    lhs: chk.lhs_pow.to_string(),
                    rhs: chk.rhs_pow.to_string(),
                    status: if chk.holds() {
                        CheckStatus::Pass
                    } else {
                        CheckStatus::Fail
                    },
                });
            }
        }
    }
    rows
}

/// Sweeps the binomial ratio identity over `1 <= k <= d <= n <= n_max`.
pub fn ratio_identity_suite(n_max: usize) -> Vec<SuiteRow> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for d in 1..=n {
            for k in 1..=d {
                let num = binomial(n as u64, d as i64);
                let den = binomial((n - k) as u64, (d - k) as i64) * binomial(n as u64, k as i64);
                let lhs = ExactRational::new(BigInt::from(num), BigInt::from(den));
                let rhs = ExactRational::new(
                    BigInt::one(),
                    BigInt::from(binomial(d as u64, k as i64)),
                );
                rows.push(SuiteRow {
                    check: "ratio-identity",
                    d,
                    n,
                    k,
                    subset: None,
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    status: if lhs == rhs {
                        CheckStatus::Pass
                    } else {
                        CheckStatus::Fail
                    },
                });
            }
        }
    }
    rows
}

/// Convenience used by float-side consumers: `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: i64) -> f64 {
    let b = binomial(n, k);
    assert!(!b.is_zero(), "ln of zero binomial C({n}, {k})");
    ln_biguint(&b)
}

/// Exact cardinality as f64 when it fits, used by reporting code.
pub fn cardinality_f64(space: &IndexSpace) -> f64 {
    space
        .cardinality()
        .to_f64()
        .expect("cardinality converts to f64")
}
