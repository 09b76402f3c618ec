//! Norms: coefficient norms, exact L2, and sup-norms.
//!
//! Monomials here are distinct characters on both domains, so the L2
//! norm is the coefficient l2 norm with no further work. Sup-norms are
//! harder: on the cube the vertex sweep is exact but exponential in `n`,
//! on the torus we settle for certified lower bounds. Every estimate
//! carries a witness point, so `|P(witness)| = value` can be re-checked
//! independently of how the point was found; only `exact` claims the
//! witness is a global maximiser.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::polyform::{evaluate_cube_real, Domain, UnimodularPolynomial};
use crate::{Error, Result};

/// Where a sup-norm estimate attains its value.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Sign vector, one entry per variable.
    Cube(Vec<i8>),
    /// Phase vector; the point is `exp(i theta)` coordinatewise.
    Torus(Vec<f64>),
}

/// A certified lower bound for the sup-norm, exact when flagged.
#[derive(Clone, Debug)]
pub struct SupNormEstimate {
    pub value: f64,
    pub witness: Witness,
    /// Polynomial evaluations spent.
    pub evaluations: u64,
    /// For ascent: the best restart met the gradient tolerance. Sweeps
    /// and grids are always converged.
    pub converged: bool,
    /// True only when every candidate point was visited (cube sweep).
    pub exact: bool,
}

/// Coefficient lq norm over all stored monomials, `q > 0`.
pub fn coeff_lq_norm(p: &UnimodularPolynomial, q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::InvalidIndex(format!("norm exponent must be positive, got {q}")));
    }
    let sum: f64 = p.all_entries().map(|(_, c)| c.modulus().powf(q)).sum();
    Ok(sum.powf(1.0 / q))
}

/// Exact L2 norm over the domain: monomials are orthonormal characters,
/// so this is the coefficient l2 norm.
pub fn l2_norm_exact(p: &UnimodularPolynomial) -> f64 {
    p.all_entries()
        .map(|(_, c)| c.modulus().powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Largest `n` for which the vertex sweep is attempted.
pub const CUBE_SWEEP_MAX_VARS: usize = 24;

/// Exact cube sup-norm by sweeping all `2^n` vertices.
pub fn supnorm_cube_exact(p: &UnimodularPolynomial) -> Result<SupNormEstimate> {
    if p.domain() != Domain::Cube {
        return Err(Error::InvalidPolynomial("vertex sweep is for cube polynomials".into()));
    }
    let n = p.n();
    if n > CUBE_SWEEP_MAX_VARS {
        return Err(Error::CapExceeded {
            cardinality: num_bigint::BigUint::from(1u8) << n,
            cap: 1u64 << CUBE_SWEEP_MAX_VARS,
        });
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_bits = 0u64;
    let mut point = vec![0.0f64; n];
    for bits in 0..(1u64 << n) {
        for (i, slot) in point.iter_mut().enumerate() {
            *slot = if bits & (1 << i) != 0 { 1.0 } else { -1.0 };
        }
        let v = evaluate_cube_real(p, &point)?.abs();
        if v > best {
            best = v;
            best_bits = bits;
        }
    }
    let signs: Vec<i8> = (0..n)
        .map(|i| if best_bits & (1 << i) != 0 { 1 } else { -1 })
        .collect();
    Ok(SupNormEstimate {
        value: best,
        witness: Witness::Cube(signs),
        evaluations: 1 << n,
        converged: true,
        exact: true,
    })
}

/// One evaluation of `|F(theta)|^2` together with the data the gradient
/// needs: `F` itself and, per variable, the sum of monomial terms
/// weighted by that variable's multiplicity.
fn value_and_gradient(p: &UnimodularPolynomial, theta: &[f64]) -> (f64, Vec<f64>) {
    let n = p.n();
    let mut f = Complex64::default();
    let mut g = vec![Complex64::default(); n];
    for (values, coeff) in p.all_entries() {
        let phase: f64 = values.iter().map(|&v| theta[v - 1]).sum();
        let term = coeff.value() * Complex64::from_polar(1.0, phase);
        f += term;
        for &v in values {
            g[v - 1] += term;
        }
    }
    // d|F|^2/dtheta_j = -2 Im(conj(F) G_j).
    let grad: Vec<f64> = g.iter().map(|gj| -2.0 * (f.conj() * gj).im).collect();
    (f.norm_sqr(), grad)
}

/// Outcome of one ascent run.
#[derive(Clone, Debug)]
pub struct AscentRun {
    pub value: f64,
    pub theta: Vec<f64>,
    pub iterations: u64,
    pub evaluations: u64,
    /// The run stopped at a point it could not improve (gradient under
    /// tolerance, or line search exhausted at machine precision), not by
    /// running out of iterations.
    pub converged: bool,
    /// `|F|` at the starting point; the run never goes below it.
    pub initial_value: f64,
}

/// Gradient ascent on `|F(theta)|^2` from a given start, with
/// backtracking line search. The objective never decreases, so the
/// result is at least `|F|` at the start.
pub fn ascend_from(
    p: &UnimodularPolynomial,
    start: &[f64],
    max_iters: u64,
    tol: f64,
) -> Result<AscentRun> {
    if p.domain() != Domain::Torus {
        return Err(Error::InvalidPolynomial("phase ascent is for torus polynomials".into()));
    }
    if start.len() != p.n() {
        return Err(Error::DimensionMismatch {
            want: p.n(),
            got: start.len(),
        });
    }
    let mut theta = start.to_vec();
    let (mut obj, mut grad) = value_and_gradient(p, &theta);
    let initial_value = obj.sqrt();
    let mut evaluations = 1u64;
    let mut iterations = 0u64;
    let mut converged = false;
    while iterations < max_iters {
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm <= tol {
            converged = true;
            break;
        }
        let mut step = 0.5;
        let mut advanced = false;
        while step > 1e-18 {
            let trial: Vec<f64> = theta
                .iter()
                .zip(&grad)
                .map(|(t, g)| t + step * g)
                .collect();
            let (trial_obj, trial_grad) = value_and_gradient(p, &trial);
            evaluations += 1;
            if trial_obj > obj {
                theta = trial;
                obj = trial_obj;
                grad = trial_grad;
                advanced = true;
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        if !advanced {
            // No step of any length improves the objective: numerically
            // stationary, which is as converged as f64 allows even when
            // the gradient tolerance is below float resolution.
            converged = true;
            break;
        }
    }
    Ok(AscentRun {
        value: obj.sqrt(),
        theta,
        iterations,
        evaluations,
        converged,
        initial_value,
    })
}

/// Multistart gradient ascent for the torus sup-norm. Restart `r` draws
/// its start from a generator seeded with `seed + r`, restarts run in
/// parallel, and the best value is picked in restart order, so results
/// are reproducible and never decrease as `restarts` grows.
pub fn supnorm_torus_estimate(
    p: &UnimodularPolynomial,
    restarts: usize,
    max_iters: u64,
    tol: f64,
    seed: u64,
) -> Result<SupNormEstimate> {
    if p.domain() != Domain::Torus {
        return Err(Error::InvalidPolynomial("phase ascent is for torus polynomials".into()));
    }
    if restarts == 0 {
        return Err(Error::InvalidIndex("need at least one restart".into()));
    }
    let n = p.n();
    let runs: Vec<AscentRun> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
            let start: Vec<f64> = (0..n)
                .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
                .collect();
            ascend_from(p, &start, max_iters, tol)
        })
        .collect::<Result<_>>()?;
    let mut best = &runs[0];
    for run in &runs[1..] {
        if run.value > best.value {
            best = run;
        }
    }
    Ok(SupNormEstimate {
        value: best.value,
        witness: Witness::Torus(best.theta.clone()),
        evaluations: runs.iter().map(|r| r.evaluations).sum(),
        converged: best.converged,
        exact: false,
    })
}

/// Variables beyond which the dense torus grid is refused.
pub const TORUS_GRID_MAX_VARS: usize = 3;

/// Dense-grid lower bound for the torus sup-norm, for cross-checking the
/// ascent on few variables.
pub fn supnorm_torus_grid(
    p: &UnimodularPolynomial,
    points_per_dim: usize,
) -> Result<SupNormEstimate> {
    if p.domain() != Domain::Torus {
        return Err(Error::InvalidPolynomial("phase grids are for torus polynomials".into()));
    }
    if points_per_dim == 0 {
        return Err(Error::InvalidIndex("need at least one grid point per dimension".into()));
    }
    let n = p.n();
    if n > TORUS_GRID_MAX_VARS {
        return Err(Error::CapExceeded {
            cardinality: num_bigint::BigUint::from(points_per_dim).pow(n as u32),
            cap: num_traits::ToPrimitive::to_u64(
                &num_bigint::BigUint::from(points_per_dim).pow(TORUS_GRID_MAX_VARS as u32),
            )
            .unwrap_or(u64::MAX),
        });
    }
    let step = std::f64::consts::TAU / points_per_dim as f64;
    let total = (points_per_dim as u64).pow(n as u32);
    let mut best = f64::NEG_INFINITY;
    let mut best_theta = vec![0.0; n];
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        let theta: Vec<f64> = idx.iter().map(|&i| i as f64 * step).collect();
        let (obj, _) = value_and_gradient(p, &theta);
        if obj > best {
            best = obj;
            best_theta = theta;
        }
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < points_per_dim {
                break;
            }
            *slot = 0;
        }
    }
    Ok(SupNormEstimate {
        value: best.sqrt(),
        witness: Witness::Torus(best_theta),
        evaluations: total,
        converged: true,
        exact: false,
    })
}

/// Evaluates `|P|` at a witness, for re-checking estimates.
pub fn witness_value(p: &UnimodularPolynomial, witness: &Witness) -> Result<f64> {
    match witness {
        Witness::Cube(signs) => {
            let point: Vec<f64> = signs.iter().map(|&s| s as f64).collect();
            Ok(evaluate_cube_real(p, &point)?.abs())
        }
        Witness::Torus(theta) => {
            if theta.len() != p.n() {
                return Err(Error::DimensionMismatch {
                    want: p.n(),
                    got: theta.len(),
                });
            }
            let (obj, _) = value_and_gradient(p, theta);
            Ok(obj.sqrt())
        }
    }
}

/// Monte Carlo estimate of the mean of `|P|^2` over the domain.
#[derive(Clone, Copy, Debug)]
pub struct McL2Squared {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Samples `|P|^2` at uniform domain points: random phases on the torus,
/// random signs on the cube. The population mean is the squared L2 norm.
pub fn mc_l2_squared(p: &UnimodularPolynomial, samples: u64, seed: u64) -> Result<McL2Squared> {
    if samples < 2 {
        return Err(Error::InvalidIndex("need at least two samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.n();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let v = match p.domain() {
            Domain::Torus => {
                let theta: Vec<f64> = (0..n)
                    .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
                    .collect();
                value_and_gradient(p, &theta).0
            }
            Domain::Cube => {
                let point: Vec<f64> =
                    (0..n).map(|_| if rng.gen() { 1.0 } else { -1.0 }).collect();
                evaluate_cube_real(p, &point)?.powi(2)
            }
        };
        sum += v;
        sum_sq += v * v;
    }
    let m = samples as f64;
    let mean = sum / m;
    let variance = (sum_sq / m - mean * mean).max(0.0) * m / (m - 1.0);
    Ok(McL2Squared {
        mean,
        std_error: (variance / m).sqrt(),
        samples,
    })
}

/// Ratio of the critical coefficient norm to a sup-norm: the l_{2d/(d+1)}
/// coefficient norm divided by the supplied sup value. With an exact sup
/// this is the quantity whose maximum over unimodular polynomials the
/// bound calculators dominate.
pub fn bh_ratio(p: &UnimodularPolynomial, supnorm: f64) -> Result<f64> {
    let d = p.d();
    if d == 0 {
        return Err(Error::InvalidIndex("ratio needs degree at least 1".into()));
    }
    if !(supnorm > 0.0) {
        return Err(Error::DivisionByZero("sup-norm must be positive"));
    }
    let q = 2.0 * d as f64 / (d as f64 + 1.0);
    Ok(coeff_lq_norm(p, q)? / supnorm)
}
