//! Release gate: thirteen numbered criteria, each a single test that
//! prints one `criterion NN (...): PASS` line with the measured
//! quantities. Exact claims compare big integers or rationals with zero
//! tolerance; float claims state their tolerance inline. Every test
//! also enforces its own wall-clock budget so the gate stays runnable
//! as a whole.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sidonlab::bleiverify::{blei_sides, orbit_growth_check, BleiVariant};
use sidonlab::boundcalc::{
    aa_regimes, bound_boolean, bound_bps, bound_complex, chebyshev_l, helper_inequality_exact,
    BoundConfig,
};
use sidonlab::indexcomb::{
    binomial, extension_expectation_suite, power_comparison_suite, ratio_identity_suite,
    CheckStatus, IndexSpace, Monotonicity,
};
use sidonlab::norms::{mc_l2_squared, supnorm_cube_exact};
use sidonlab::polyform::{
    evaluate, polarization_coefficient, symmetric_form_value, Coefficient, CoefficientTable,
    SymmetricForm, UnimodularPolynomial,
};
use sidonlab::EnumCap;

const TAU: f64 = std::f64::consts::TAU;

fn budget(name: &str, started: Instant, limit: Duration) {
    let spent = started.elapsed();
    assert!(
        spent <= limit,
        "FAIL {name}: ran {spent:?}, budget {limit:?}"
    );
}

/// Strictly increasing value lists of the full family, for sign sweeps.
fn increasing_family(d: usize, n: usize) -> Vec<Vec<usize>> {
    IndexSpace::full(d, n, Monotonicity::StrictlyIncreasing)
        .unwrap()
        .enumerate(EnumCap::default())
        .unwrap()
        .map(|i| i.values().to_vec())
        .collect()
}

#[test]
fn criterion_01_extension_expectation_exact() {
    let t0 = Instant::now();
    let rows = extension_expectation_suite(6, 6, EnumCap::default(), false);
    assert_eq!(
        rows.len(),
        720,
        "FAIL criterion 01: expected 720 rows, got {}",
        rows.len()
    );
    for r in &rows {
        assert_eq!(
            r.status,
            CheckStatus::Pass,
            "FAIL criterion 01: d={} n={} k={} subset={:?}: {} vs {}",
            r.d,
            r.n,
            r.k,
            r.subset,
            r.lhs,
            r.rhs
        );
    }
    budget("criterion 01", t0, Duration::from_secs(60));
    println!(
        "criterion 01 (extension expectation exact): PASS — 720 subset means equal their closed forms, d <= 6, n <= 6"
    );
}

#[test]
fn criterion_02_power_comparison_exact() {
    let t0 = Instant::now();
    let rows = power_comparison_suite(25);
    assert!(!rows.is_empty(), "FAIL criterion 02: empty sweep");
    for r in &rows {
        assert_eq!(
            r.status,
            CheckStatus::Pass,
            "FAIL criterion 02: d={} n={} k={}: {} vs {}",
            r.d,
            r.n,
            r.k,
            r.lhs,
            r.rhs
        );
    }
    budget("criterion 02", t0, Duration::from_secs(30));
    println!(
        "criterion 02 (family-count power comparison exact): PASS — {} integer comparisons, 1 <= k <= d <= n <= 25",
        rows.len()
    );
}

#[test]
fn criterion_03_ratio_identity_exact() {
    let t0 = Instant::now();
    let rows = ratio_identity_suite(25);
    assert!(!rows.is_empty(), "FAIL criterion 03: empty sweep");
    for r in &rows {
        assert_eq!(
            r.status,
            CheckStatus::Pass,
            "FAIL criterion 03: d={} n={} k={}: {} vs {}",
            r.d,
            r.n,
            r.k,
            r.lhs,
            r.rhs
        );
    }
    budget("criterion 03", t0, Duration::from_secs(10));
    println!(
        "criterion 03 (binomial ratio identity exact): PASS — {} rational identities, 1 <= k <= d <= n <= 25",
        rows.len()
    );
}

/// Random table on the full family: partial support, coefficients mixed
/// between unit phases and general complex entries.
fn random_table(rng: &mut ChaCha8Rng, class: Monotonicity) -> CoefficientTable {
    loop {
        let d = rng.gen_range(1..=4usize);
        let n = match class {
            Monotonicity::StrictlyIncreasing => rng.gen_range(d..=5usize),
            _ => rng.gen_range(1..=5usize),
        };
        let space = IndexSpace::full(d, n, class).unwrap();
        let mut entries = Vec::new();
        for member in space.enumerate(EnumCap::default()).unwrap() {
            if rng.gen::<f64>() < 0.7 {
                let coeff = if rng.gen::<bool>() {
                    Coefficient::Phase(rng.gen::<f64>() * TAU)
                } else {
                    Coefficient::General(Complex64::from_polar(
                        0.2 + 1.6 * rng.gen::<f64>(),
                        rng.gen::<f64>() * TAU,
                    ))
                };
                entries.push((member.values().to_vec(), coeff));
            }
        }
        if entries.is_empty() {
            continue;
        }
        return CoefficientTable::new(space, entries).unwrap();
    }
}

#[test]
fn criterion_04_split_inequality_on_random_tables() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let mut tables = 0usize;
    let mut checks = 0usize;
    for variant in [BleiVariant::Complex, BleiVariant::Boolean] {
        let class = match variant {
            BleiVariant::Complex => Monotonicity::NonDecreasing,
            _ => Monotonicity::StrictlyIncreasing,
        };
        for _ in 0..100 {
            let table = random_table(&mut rng, class);
            let d = table.space().d();
            tables += 1;
            for k in 1..=d {
                let sides = blei_sides(&table, k, variant, EnumCap::default()).unwrap();
                let scale = sides.lhs.abs().max(1.0);
                assert!(
                    sides.rhs >= sides.lhs - 1e-9 * scale,
                    "FAIL criterion 04: {variant:?} d={d} k={k}: lhs {} > rhs {}",
                    sides.lhs,
                    sides.rhs
                );
                checks += 1;
            }
        }
    }
    assert!(tables >= 200, "FAIL criterion 04: only {tables} tables");
    budget("criterion 04", t0, Duration::from_secs(300));
    println!(
        "criterion 04 (split inequality on random tables): PASS — {tables} mixed-coefficient tables, {checks} split checks, relative slack >= -1e-9"
    );
}

#[test]
fn criterion_05_strengthened_split_on_all_sign_patterns() {
    let t0 = Instant::now();
    let mut min_slack = f64::INFINITY;
    let mut patterns = 0u64;
    for (n, d) in [(4usize, 2usize), (5, 2), (4, 3)] {
        let family = increasing_family(d, n);
        let m = family.len();
        for bits in 0u32..(1u32 << m) {
            let entries: Vec<(Vec<usize>, Coefficient)> = family
                .iter()
                .enumerate()
                .map(|(i, ix)| {
                    (
                        ix.clone(),
                        Coefficient::Sign(if bits >> i & 1 == 1 { 1 } else { -1 }),
                    )
                })
                .collect();
            let space = IndexSpace::full(d, n, Monotonicity::StrictlyIncreasing).unwrap();
            let table = CoefficientTable::new(space, entries).unwrap();
            for k in 1..=d {
                let sides =
                    blei_sides(&table, k, BleiVariant::BooleanStrengthened, EnumCap::default())
                        .unwrap();
                let scale = sides.lhs.abs().max(1.0);
                assert!(
                    sides.lhs <= sides.rhs * (1.0 + 1e-9),
                    "FAIL criterion 05: n={n} d={d} k={k} bits={bits:b}: lhs {} > shrunk rhs {}",
                    sides.lhs,
                    sides.rhs
                );
                let slack = sides.slack() / scale;
                if slack < min_slack {
                    min_slack = slack;
                }
            }
            patterns += 1;
        }
    }
    // The extremal pattern sits at k = d where both sides coincide, so
    // the worst relative slack is zero up to rounding.
    assert!(
        (-1e-9..=1e-12).contains(&min_slack),
        "FAIL criterion 05: extremal relative slack {min_slack} moved off zero"
    );
    budget("criterion 05", t0, Duration::from_secs(300));
    println!(
        "criterion 05 (strengthened split on all sign patterns): PASS — {patterns} patterns over (4,2),(5,2),(4,3), extremal relative slack {min_slack:.3e}"
    );
}

/// Full-support torus polynomial with uniformly random phases.
fn random_torus(rng: &mut ChaCha8Rng, d: usize, n: usize) -> UnimodularPolynomial {
    let entries: Vec<(Vec<usize>, f64)> = IndexSpace::full(d, n, Monotonicity::NonDecreasing)
        .unwrap()
        .enumerate(EnumCap::default())
        .unwrap()
        .map(|i| (i.values().to_vec(), rng.gen::<f64>() * TAU))
        .collect();
    UnimodularPolynomial::torus(n, d, entries).unwrap()
}

#[test]
fn criterion_06_symmetric_form_diagonal_identity() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let d = rng.gen_range(1..=4usize);
        let n = rng.gen_range(1..=4usize);
        let p = random_torus(&mut rng, d, n);
        let form = SymmetricForm::new(&p).unwrap();
        for _ in 0..100 {
            let z: Vec<Complex64> = (0..n)
                .map(|_| Complex64::from_polar(1.0, rng.gen::<f64>() * TAU))
                .collect();
            let diag =
                symmetric_form_value(&form, &vec![z.clone(); d], EnumCap::default()).unwrap();
            let direct = evaluate(&p, &z).unwrap();
            let err = (diag - direct).norm();
            worst = worst.max(err);
            assert!(
                err <= 1e-10,
                "FAIL criterion 06: d={d} n={n}: |form - polynomial| = {err}"
            );
        }
    }
    budget("criterion 06", t0, Duration::from_secs(60));
    println!(
        "criterion 06 (symmetric form diagonal identity): PASS — 20 polynomials x 100 points, worst |error| {worst:.3e} <= 1e-10"
    );
}

#[test]
fn criterion_07_polarization_coefficient_extraction() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let mut trial = 0;
    while trial < 200 {
        let d = rng.gen_range(2..=5usize);
        let n = rng.gen_range(d..=6usize);
        let family = increasing_family(d, n);
        let mut entries: Vec<(Vec<usize>, i8)> = Vec::new();
        for ix in &family {
            if rng.gen::<f64>() < 0.8 {
                entries.push((ix.clone(), if rng.gen::<bool>() { 1 } else { -1 }));
            }
        }
        if entries.is_empty() {
            continue;
        }
        trial += 1;
        let p = UnimodularPolynomial::cube(n, d, entries).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let k = rng.gen_range(1..d);
        let pc = polarization_coefficient(&p, &x, &y, k).unwrap();
        assert!(
            pc.agrees(1e-9),
            "FAIL criterion 07: trial {trial} d={d} n={n} k={k}: extracted {} vs predicted {}",
            pc.extracted,
            pc.predicted
        );
    }
    budget("criterion 07", t0, Duration::from_secs(60));
    println!(
        "criterion 07 (polarization coefficient extraction): PASS — 200 random restrictions agree within 1e-9 relative"
    );
}

#[test]
fn criterion_08_monte_carlo_l2_matches_term_count() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    for trial in 0..10u64 {
        let d = rng.gen_range(1..=3usize);
        let n = rng.gen_range(1..=4usize);
        let p = random_torus(&mut rng, d, n);
        let target = binomial((n + d - 1) as u64, d as i64)
            .to_f64()
            .expect("family count fits in f64");
        let mc = mc_l2_squared(&p, 100_000, 800 + trial).unwrap();
        let dev = (mc.mean - target).abs();
        assert!(
            dev <= 3.0 * mc.std_error,
            "FAIL criterion 08: d={d} n={n}: mean {} vs {target}, {dev:.4} > 3 x {:.4}",
            mc.mean,
            mc.std_error
        );
    }
    budget("criterion 08", t0, Duration::from_secs(60));
    println!(
        "criterion 08 (Monte Carlo squared L2 norm): PASS — 10 full-support polynomials within 3 standard errors of their term counts"
    );
}

#[test]
fn criterion_09_exhaustive_cube_ratio_under_boolean_curve() {
    let t0 = Instant::now();
    let cfg = BoundConfig::default();
    // Regression pins from the first exhaustive run; the maximiser is
    // the minimal sup-norm 4, reached by patterns aligned on a vertex.
    let pinned = [
        (4usize, 2usize, 0.9584146563694086f64),
        (5, 2, 1.4058533129758728),
        (4, 3, 0.6299605249474366),
    ];
    for (n, d, frozen) in pinned {
        let family = increasing_family(d, n);
        let m = family.len();
        let critical = binomial(n as u64, d as i64)
            .to_f64()
            .unwrap()
            .powf((d as f64 + 1.0) / (2.0 * d as f64));
        let mut max_ratio = f64::NEG_INFINITY;
        for bits in 0u32..(1u32 << m) {
            let entries: Vec<(Vec<usize>, i8)> = family
                .iter()
                .enumerate()
                .map(|(i, ix)| (ix.clone(), if bits >> i & 1 == 1 { 1 } else { -1 }))
                .collect();
            let p = UnimodularPolynomial::cube(n, d, entries).unwrap();
            let sup = supnorm_cube_exact(&p).unwrap();
            assert!(sup.exact, "FAIL criterion 09: sweep lost exactness");
            max_ratio = max_ratio.max(critical / sup.value);
        }
        let curve = bound_boolean(d, &cfg).unwrap().strengthened;
        assert!(
            max_ratio <= curve,
            "FAIL criterion 09: (n,d)=({n},{d}): max ratio {max_ratio} above curve {curve}"
        );
        assert!(
            (max_ratio - frozen).abs() <= 1e-9,
            "FAIL criterion 09: (n,d)=({n},{d}): max ratio {max_ratio} drifted from pinned {frozen}"
        );
        println!(
            "criterion 09 (exhaustive cube ratio): PASS — (n,d)=({n},{d}): max ratio {max_ratio:.12} <= curve {curve:.3}"
        );
    }
    budget("criterion 09", t0, Duration::from_secs(600));
}

#[test]
fn criterion_10_counting_helper_inequality_exact() {
    let t0 = Instant::now();
    for d in 1..=40 {
        assert!(
            helper_inequality_exact(d).unwrap(),
            "FAIL criterion 10: inequality broke at d={d}"
        );
    }
    budget("criterion 10", t0, Duration::from_secs(10));
    println!(
        "criterion 10 (counting helper inequality exact): PASS — rational lower bound certifies all d <= 40 in {:?}",
        t0.elapsed()
    );
}

/// Chebyshev coefficient magnitude by the closed form: with `d'` the
/// largest degree of matching parity and `m = (d' - k) / 2`, the size is
/// `2^{k-1} d' C(d'-m, m) / (d'-m)`, an exact integer.
fn chebyshev_coefficient_oracle(d: usize, k: usize) -> BigUint {
    let dp = if (d - k) % 2 == 0 { d } else { d - 1 };
    if dp == 0 || k > dp {
        return BigUint::zero();
    }
    let m = (dp - k) / 2;
    let numer = (BigUint::one() << (k - 1)) * BigUint::from(dp) * binomial((dp - m) as u64, m as i64);
    let denom = BigUint::from(dp - m);
    assert!(
        (&numer % &denom).is_zero(),
        "oracle arithmetic must divide exactly at d={d} k={k}"
    );
    numer / denom
}

#[test]
fn criterion_11_curve_dominance_and_chebyshev_table() {
    let t0 = Instant::now();
    let cfg = BoundConfig::default();
    for d in 2..=10_000 {
        let bps = bound_bps(d, &cfg).unwrap().ln_value;
        let complex = bound_complex(d, &cfg).unwrap().ln_value;
        assert!(
            bps > complex,
            "FAIL criterion 11: product curve fell below split curve at d={d}: {bps} vs {complex}"
        );
    }
    let mut entries = 0usize;
    for d in 1..=60 {
        for k in 1..=d {
            let table = chebyshev_l(d, k).unwrap();
            let oracle = chebyshev_coefficient_oracle(d, k);
            assert_eq!(
                table, oracle,
                "FAIL criterion 11: coefficient table disagrees at d={d} k={k}"
            );
            entries += 1;
        }
    }
    budget("criterion 11", t0, Duration::from_secs(30));
    println!(
        "criterion 11 (curve dominance and coefficient table): PASS — dominance on 2..=10000, {entries} table entries match the closed form"
    );
}

#[test]
fn criterion_12_orbit_growth_exhaustive() {
    let t0 = Instant::now();
    for d in 1..=6 {
        for n in 1..=6 {
            let report = orbit_growth_check(d, n, EnumCap::default()).unwrap();
            assert!(
                report.holds(),
                "FAIL criterion 12: orbit ratio exceeded the falling factorial at d={d} n={n}: worst {}",
                report.worst_fraction
            );
        }
    }
    budget("criterion 12", t0, Duration::from_secs(60));
    println!(
        "criterion 12 (orbit growth exhaustive): PASS — every pair ratio bounded by its falling factorial, d <= 6, n <= 6"
    );
}

#[test]
fn criterion_13_regime_crossover_monotone() {
    let t0 = Instant::now();
    let mut cfg = BoundConfig::default();
    cfg.big_c0 = 1.0;
    let mut last = 0usize;
    let mut row_text = Vec::new();
    for exp in 3..=7u32 {
        let n = 10usize.pow(exp);
        let row = aa_regimes(n, &cfg).unwrap();
        assert!(
            row.d_star >= last,
            "FAIL criterion 13: crossover degree dropped at n={n}: {} < {last}",
            row.d_star
        );
        if n >= 10_000 {
            assert!(
                row.gap_nonempty,
                "FAIL criterion 13: empty gap interval at n={n}: d* = {}, upper = {}",
                row.d_star, row.gap_upper
            );
        }
        last = row.d_star;
        row_text.push(format!("n=1e{exp}: d*={}", row.d_star));
    }
    budget("criterion 13", t0, Duration::from_secs(5));
    println!(
        "criterion 13 (regime crossover monotone): PASS — {}, gap interval non-empty from n=1e4",
        row_text.join(", ")
    );
}
