//! Polynomial representations on the torus and the cube.
//!
//! Two coefficient conventions coexist. Torus polynomials are indexed by
//! non-decreasing maps and their symmetric multilinear form divides each
//! coefficient by its orbit size. Cube polynomials are multilinear,
//! indexed by strictly increasing maps, and their extensions spread a
//! coefficient across injective rearrangements without the orbit weight;
//! the flat/sorted rules below vanish off injective maps instead. The two
//! rules do not coincide, so code consuming a "symmetric" coefficient
//! must pick the side explicitly.
//!
//! Unimodular coefficients are stored structurally: a phase angle on the
//! torus (the coefficient is `e^{i theta}`), a sign on the cube. General
//! complex entries are allowed for verification tables.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::indexcomb::{binomial, orbit_size_values, subsets, IndexSpace, Monotonicity, MultiIndex};
use crate::{EnumCap, Error, Result};

/// Tolerance for the unimodularity flag on general complex entries.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Tolerance for point-domain validation in [`evaluate`].
pub const POINT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Torus,
    Cube,
}

/// A single monomial coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coefficient {
    /// `e^{i theta}`; the unimodular torus convention.
    Phase(f64),
    /// `+1` or `-1`; the cube convention.
    Sign(i8),
    /// Arbitrary complex entry, for verification tables.
    General(Complex64),
}

impl Coefficient {
    pub fn value(&self) -> Complex64 {
        match *self {
            Coefficient::Phase(theta) => Complex64::from_polar(1.0, theta),
            Coefficient::Sign(s) => Complex64::new(s as f64, 0.0),
            Coefficient::General(z) => z,
        }
    }

    pub fn modulus(&self) -> f64 {
        match *self {
            Coefficient::Phase(_) => 1.0,
            Coefficient::Sign(_) => 1.0,
            Coefficient::General(z) => z.norm(),
        }
    }

    pub fn is_unimodular(&self) -> bool {
        (self.modulus() - 1.0).abs() <= UNIMODULAR_TOL
    }
}

/// Coefficients indexed by value lists from one index family.
///
/// Keys are the value vectors of members of `space` (the slots are the
/// space's slots, so they are not repeated per key). Monomials absent
/// from the map have coefficient zero.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    space: IndexSpace,
    entries: BTreeMap<Vec<usize>, Coefficient>,
    unimodular: bool,
}

impl CoefficientTable {
    pub fn new(
        space: IndexSpace,
        entries: impl IntoIterator<Item = (Vec<usize>, Coefficient)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (values, coeff) in entries {
            let mi = MultiIndex::new(space.slots().to_vec(), values.clone(), space.class())?;
            if !space.contains(&mi) {
                return Err(Error::InvalidIndex(format!(
                    "key {values:?} outside the table's family"
                )));
            }
            if map.insert(values.clone(), coeff).is_some() {
                return Err(Error::InvalidIndex(format!("duplicate key {values:?}")));
            }
        }
        let unimodular = map.values().all(Coefficient::is_unimodular);
        Ok(CoefficientTable {
            space,
            entries: map,
            unimodular,
        })
    }

    pub fn space(&self) -> &IndexSpace {
        &self.space
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodular
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Coefficient)> {
        self.entries.iter()
    }

    /// Coefficient at a value list; zero when the monomial is absent.
    pub fn value_at(&self, values: &[usize]) -> Complex64 {
        self.entries
            .get(values)
            .map(Coefficient::value)
            .unwrap_or_default()
    }

    pub fn contains_key(&self, values: &[usize]) -> bool {
        self.entries.contains_key(values)
    }
}

/// A polynomial with (typically) unimodular coefficients.
///
/// Homogeneous by default: every monomial has degree exactly `d`. The
/// non-homogeneous torus case (degrees up to `d`) exists solely as input
/// to [`lift_nonhomogeneous`] and stores its lower-degree monomials by
/// value lists of length `< d`.
#[derive(Clone, Debug)]
pub struct UnimodularPolynomial {
    n: usize,
    d: usize,
    domain: Domain,
    coefficients: CoefficientTable,
    lower: BTreeMap<Vec<usize>, Coefficient>,
    homogeneous: bool,
}

impl UnimodularPolynomial {
    /// Homogeneous torus polynomial with phase coefficients.
    pub fn torus(n: usize, d: usize, entries: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        let space = IndexSpace::full(d, n, Monotonicity::NonDecreasing)?;
        let table = CoefficientTable::new(
            space,
            entries.into_iter().map(|(v, th)| (v, Coefficient::Phase(th))),
        )?;
        Ok(UnimodularPolynomial {
            n,
            d,
            domain: Domain::Torus,
            coefficients: table,
            lower: BTreeMap::new(),
            homogeneous: true,
        })
    }

    /// Homogeneous torus polynomial with arbitrary complex coefficients.
    pub fn torus_general(n: usize, d: usize, entries: Vec<(Vec<usize>, Complex64)>) -> Result<Self> {
        let space = IndexSpace::full(d, n, Monotonicity::NonDecreasing)?;
        let table = CoefficientTable::new(
            space,
            entries.into_iter().map(|(v, z)| (v, Coefficient::General(z))),
        )?;
        Ok(UnimodularPolynomial {
            n,
            d,
            domain: Domain::Torus,
            coefficients: table,
            lower: BTreeMap::new(),
            homogeneous: true,
        })
    }

    /// Multilinear cube polynomial with sign coefficients.
    pub fn cube(n: usize, d: usize, entries: Vec<(Vec<usize>, i8)>) -> Result<Self> {
        for (_, s) in &entries {
            if *s != 1 && *s != -1 {
                return Err(Error::InvalidPolynomial(format!("sign must be +-1, got {s}")));
            }
        }
        let space = IndexSpace::full(d, n, Monotonicity::StrictlyIncreasing)?;
        let table = CoefficientTable::new(
            space,
            entries.into_iter().map(|(v, s)| (v, Coefficient::Sign(s))),
        )?;
        Ok(UnimodularPolynomial {
            n,
            d,
            domain: Domain::Cube,
            coefficients: table,
            lower: BTreeMap::new(),
            homogeneous: true,
        })
    }

    /// Torus polynomial of degree at most `d` with phase coefficients;
    /// the only constructor that admits lower-degree monomials.
    pub fn torus_nonhomogeneous(
        n: usize,
        d: usize,
        entries: Vec<(Vec<usize>, f64)>,
    ) -> Result<Self> {
        let space = IndexSpace::full(d, n, Monotonicity::NonDecreasing)?;
        let mut top = Vec::new();
        let mut lower = BTreeMap::new();
        for (values, theta) in entries {
            if values.len() > d {
                return Err(Error::InvalidPolynomial(format!(
                    "monomial {values:?} exceeds degree {d}"
                )));
            }
            if !values.windows(2).all(|w| w[0] <= w[1]) {
                return Err(Error::InvalidPolynomial(format!(
                    "monomial {values:?} is not sorted"
                )));
            }
            if values.iter().any(|&v| v == 0 || v > n) {
                return Err(Error::InvalidPolynomial(format!(
                    "monomial {values:?} has variables outside 1..={n}"
                )));
            }
            if values.len() == d {
                top.push((values, Coefficient::Phase(theta)));
            } else if lower.insert(values.clone(), Coefficient::Phase(theta)).is_some() {
                return Err(Error::InvalidIndex(format!("duplicate key {values:?}")));
            }
        }
        let table = CoefficientTable::new(space, top)?;
        let homogeneous = lower.is_empty();
        Ok(UnimodularPolynomial {
            n,
            d,
            domain: Domain::Torus,
            coefficients: table,
            lower,
            homogeneous,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn is_unimodular(&self) -> bool {
        self.coefficients.is_unimodular()
            && self.lower.values().all(Coefficient::is_unimodular)
    }

    /// The full-degree coefficient table.
    pub fn coefficients(&self) -> &CoefficientTable {
        &self.coefficients
    }

    /// Full-degree coefficient at a sorted value list; zero when absent.
    pub fn coefficient(&self, values: &[usize]) -> Complex64 {
        self.coefficients.value_at(values)
    }

    /// All monomials including lower-degree ones: (values, coefficient).
    pub fn all_entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Coefficient)> {
        self.lower.iter().chain(self.coefficients.entries())
    }

    /// Number of stored monomials of every degree.
    pub fn term_count(&self) -> usize {
        self.lower.len() + self.coefficients.len()
    }
}

/// Evaluates the polynomial at a point of its domain.
///
/// Torus points must have unimodular coordinates, cube points must be
/// `+-1` (both within [`POINT_TOL`]); anything else is rejected rather
/// than silently extended off the domain.
pub fn evaluate(p: &UnimodularPolynomial, point: &[Complex64]) -> Result<Complex64> {
    if point.len() != p.n {
        return Err(Error::DimensionMismatch {
            want: p.n,
            got: point.len(),
        });
    }
    for (idx, z) in point.iter().enumerate() {
        match p.domain {
            Domain::Torus => {
                if (z.norm() - 1.0).abs() > POINT_TOL {
                    return Err(Error::PointNotUnimodular {
                        slot: idx + 1,
                        modulus: z.norm(),
                    });
                }
            }
            Domain::Cube => {
                if (z.re.abs() - 1.0).abs() > POINT_TOL || z.im.abs() > POINT_TOL {
                    return Err(Error::PointNotSign {
                        slot: idx + 1,
                        value: z.re,
                    });
                }
            }
        }
    }
    Ok(evaluate_unchecked(p, point))
}

fn evaluate_unchecked(p: &UnimodularPolynomial, point: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::default();
    for (values, coeff) in p.all_entries() {
        let mut term = coeff.value();
        for &v in values {
            term *= point[v - 1];
        }
        acc += term;
    }
    acc
}

/// Evaluates a cube polynomial at an arbitrary real point. Multilinear
/// polynomials are defined on all of `R^n`; this is the entry point for
/// interpolation and convexity arguments that leave the vertex set.
pub fn evaluate_cube_real(p: &UnimodularPolynomial, point: &[f64]) -> Result<f64> {
    if p.domain != Domain::Cube {
        return Err(Error::InvalidPolynomial(
            "real-point evaluation is for cube polynomials".into(),
        ));
    }
    if point.len() != p.n {
        return Err(Error::DimensionMismatch {
            want: p.n,
            got: point.len(),
        });
    }
    let mut acc = 0.0;
    for (values, coeff) in p.all_entries() {
        let mut term = coeff.value().re;
        for &v in values {
            term *= point[v - 1];
        }
        acc += term;
    }
    Ok(acc)
}

/// The symmetric multilinear form attached to a homogeneous torus
/// polynomial. Coefficients are never materialised: the value at an
/// unrestricted index is the base coefficient at its sorted rearrangement
/// divided by the orbit size.
#[derive(Clone, Copy, Debug)]
pub struct SymmetricForm<'a> {
    base: &'a UnimodularPolynomial,
}

impl<'a> SymmetricForm<'a> {
    pub fn new(base: &'a UnimodularPolynomial) -> Result<Self> {
        if base.domain != Domain::Torus || !base.homogeneous {
            return Err(Error::InvalidPolynomial(
                "symmetric form needs a homogeneous torus polynomial".into(),
            ));
        }
        Ok(SymmetricForm { base })
    }

    pub fn base(&self) -> &UnimodularPolynomial {
        self.base
    }

    /// Form coefficient at an arbitrary value list of length `d`.
    pub fn coefficient(&self, values: &[usize]) -> Complex64 {
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        let a = self.base.coefficient(&sorted);
        if a == Complex64::default() {
            return a;
        }
        let orbit = orbit_size_values(values)
            .to_f64()
            .expect("orbit size fits in f64");
        a / orbit
    }
}

/// Evaluates the symmetric form at `d` point vectors, materialising the
/// unrestricted index family under the cap.
pub fn symmetric_form_value(
    form: &SymmetricForm<'_>,
    points: &[Vec<Complex64>],
    cap: EnumCap,
) -> Result<Complex64> {
    let p = form.base();
    if points.len() != p.d() {
        return Err(Error::DimensionMismatch {
            want: p.d(),
            got: points.len(),
        });
    }
    for pt in points {
        if pt.len() != p.n() {
            return Err(Error::DimensionMismatch {
                want: p.n(),
                got: pt.len(),
            });
        }
    }
    let all = IndexSpace::full(p.d(), p.n(), Monotonicity::Unrestricted)?;
    let mut acc = Complex64::default();
    for j in all.enumerate(cap)? {
        let b = form.coefficient(j.values());
        if b == Complex64::default() {
            continue;
        }
        let mut term = b;
        for (s, &v) in j.values().iter().enumerate() {
            term *= points[s][v - 1];
        }
        acc += term;
    }
    Ok(acc)
}

/// How a block-indexed coefficient is read off a cube polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionRule {
    /// Strictly increasing blocks; zero unless the combined map is
    /// injective, else the base coefficient at the sorted combined values.
    Flat,
    /// Arbitrary blocks, sorted before the flat rule; invariant under
    /// permuting within each block.
    Sorted,
    /// The sorted rule divided by `d!`; the symmetric multilinear form
    /// coefficient of a multilinear polynomial.
    Scaled,
}

/// A coefficient-extension view over a cube polynomial.
#[derive(Clone, Copy, Debug)]
pub struct ExtendedCoefficient<'a> {
    base: &'a UnimodularPolynomial,
    rule: ExtensionRule,
}

impl<'a> ExtendedCoefficient<'a> {
    pub fn new(base: &'a UnimodularPolynomial, rule: ExtensionRule) -> Result<Self> {
        if base.domain != Domain::Cube || !base.homogeneous {
            return Err(Error::InvalidPolynomial(
                "coefficient extension needs a homogeneous cube polynomial".into(),
            ));
        }
        Ok(ExtendedCoefficient { base, rule })
    }

    pub fn rule(&self) -> ExtensionRule {
        self.rule
    }
}

/// Reads the extended coefficient at a pair of blocks whose slot sets
/// partition `{1, .., d}`.
pub fn extend_coefficient(
    ext: &ExtendedCoefficient<'_>,
    i: &MultiIndex,
    j: &MultiIndex,
) -> Result<Complex64> {
    let d = ext.base.d();
    let combined = i.combine(j)?;
    if combined.len() != d || *combined.slots() != (1..=d).collect::<Vec<_>>() {
        return Err(Error::InvalidIndex(
            "blocks must partition the full slot range".into(),
        ));
    }
    if ext.rule == ExtensionRule::Flat
        && !(i.is_strictly_increasing() && j.is_strictly_increasing())
    {
        return Err(Error::InvalidIndex(
            "flat extension expects strictly increasing blocks".into(),
        ));
    }
    if !combined.is_injective() {
        return Ok(Complex64::default());
    }
    let a = ext.base.coefficient(&combined.sorted_values());
    Ok(match ext.rule {
        ExtensionRule::Flat | ExtensionRule::Sorted => a,
        ExtensionRule::Scaled => {
            let dfact = crate::indexcomb::factorial(d)
                .to_f64()
                .expect("d! fits in f64");
            a / dfact
        }
    })
}

/// The mixed evaluation of a cube polynomial's symmetric multilinear form
/// with `k` copies of `x` and `d - k` copies of `y`, expanded over the
/// polynomial's support: for each monomial the value multiset is split
/// into every k/(d-k) bipartition. Cost is support size times `C(d, k)`
/// instead of `n^d`.
pub fn mixed_form(p: &UnimodularPolynomial, x: &[f64], y: &[f64], k: usize) -> Result<f64> {
    if p.domain != Domain::Cube || !p.homogeneous {
        return Err(Error::InvalidPolynomial(
            "mixed form needs a homogeneous cube polynomial".into(),
        ));
    }
    let d = p.d();
    if k > d {
        return Err(Error::InvalidIndex(format!("need k <= d, got k={k} d={d}")));
    }
    if x.len() != p.n() || y.len() != p.n() {
        return Err(Error::DimensionMismatch {
            want: p.n(),
            got: if x.len() != p.n() { x.len() } else { y.len() },
        });
    }
    let splits = subsets(d, k);
    let choose = binomial(d as u64, k as i64)
        .to_f64()
        .expect("C(d, k) fits in f64");
    let mut acc = 0.0;
    for (values, coeff) in p.coefficients.entries() {
        let mut orbit_sum = 0.0;
        for split in &splits {
            // `split` holds 1-based positions within the sorted value list
            // that are fed `x`; the rest take `y`.
            let mut term = 1.0;
            let mut pos = 0;
            for (idx, &v) in values.iter().enumerate() {
                if pos < split.len() && split[pos] == idx + 1 {
                    term *= x[v - 1];
                    pos += 1;
                } else {
                    term *= y[v - 1];
                }
            }
            orbit_sum += term;
        }
        acc += coeff.value().re * orbit_sum / choose;
    }
    Ok(acc)
}

/// Extracted and predicted coefficient of `t^k` in the one-variable
/// restriction `t -> P(k t x + (d - k) y)`.
#[derive(Clone, Copy, Debug)]
pub struct PolarizationCoefficient {
    /// Coefficient recovered by exact-degree interpolation.
    pub extracted: f64,
    /// `k^k (d-k)^{d-k} C(d, k)` times the mixed form value.
    pub predicted: f64,
}

impl PolarizationCoefficient {
    /// Relative agreement with floor 1, so a zero prediction still admits
    /// interpolation noise.
    pub fn agrees(&self, tol: f64) -> bool {
        let scale = self.extracted.abs().max(self.predicted.abs()).max(1.0);
        (self.extracted - self.predicted).abs() <= tol * scale
    }
}

/// Restricts a multilinear cube polynomial along the segment
/// `t -> k t x + (d - k) y`, interpolates the degree-`d` restriction at
/// Chebyshev nodes, and extracts the `t^k` coefficient; returns it with
/// the value the mixed form predicts for it.
pub fn polarization_coefficient(
    p: &UnimodularPolynomial,
    x: &[f64],
    y: &[f64],
    k: usize,
) -> Result<PolarizationCoefficient> {
    let d = p.d();
    if d < 2 || k == 0 || k >= d {
        return Err(Error::InvalidIndex(format!(
            "need 1 <= k <= d-1 with d >= 2, got k={k} d={d}"
        )));
    }
    let m = d + 1;
    let nodes: Vec<f64> = (0..m)
        .map(|i| ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos())
        .collect();
    let mut samples = Vec::with_capacity(m);
    for &t in &nodes {
        let point: Vec<f64> = x
            .iter()
            .zip(y)
            .map(|(&xi, &yi)| k as f64 * t * xi + (d - k) as f64 * yi)
            .collect();
        samples.push(evaluate_cube_real(p, &point)?);
    }
    let mono = monomial_coefficients(&nodes, &samples);
    let extracted = mono[k];

    let lk = mixed_form(p, x, y, k)?;
    let choose = binomial(d as u64, k as i64)
        .to_f64()
        .expect("C(d, k) fits in f64");
    let predicted =
        (k as f64).powi(k as i32) * ((d - k) as f64).powi((d - k) as i32) * choose * lk;
    Ok(PolarizationCoefficient { extracted, predicted })
}

/// Monomial coefficients of the unique interpolant through `(ts, ps)`,
/// via Newton divided differences expanded into the power basis.
fn monomial_coefficients(ts: &[f64], ps: &[f64]) -> Vec<f64> {
    let m = ts.len();
    let mut dd = ps.to_vec();
    for level in 1..m {
        for i in (level..m).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (ts[i] - ts[i - level]);
        }
    }
    let mut mono = vec![0.0; m];
    let mut basis = vec![0.0; m + 1];
    basis[0] = 1.0;
    let mut basis_len = 1;
    for (i, &c) in dd.iter().enumerate() {
        for j in 0..basis_len {
            mono[j] += c * basis[j];
        }
        if i + 1 < m {
            // Multiply the running Newton basis by (t - ts[i]).
            for j in (1..=basis_len).rev() {
                basis[j] = basis[j - 1] - ts[i] * basis[j];
            }
            basis[0] *= -ts[i];
            basis_len += 1;
        }
    }
    mono
}

/// Homogenises a torus polynomial of degree at most `d` by one auxiliary
/// variable: each monomial is padded with copies of variable `n + 1` up
/// to degree `d`. The coefficient multiset is unchanged, and on the torus
/// the sup-norm is too (fix the auxiliary coordinate at 1 to recover the
/// original, rotate it away to dominate).
pub fn lift_nonhomogeneous(p: &UnimodularPolynomial) -> Result<UnimodularPolynomial> {
    if p.domain != Domain::Torus {
        return Err(Error::InvalidPolynomial("lifting is for torus polynomials".into()));
    }
    if !p.is_unimodular() {
        return Err(Error::InvalidPolynomial(
            "lifting expects unimodular coefficients".into(),
        ));
    }
    let (n, d) = (p.n, p.d);
    let mut entries = Vec::with_capacity(p.term_count());
    for (values, coeff) in p.all_entries() {
        let mut padded = values.clone();
        padded.resize(d, n + 1);
        let theta = match coeff {
            Coefficient::Phase(t) => *t,
            Coefficient::Sign(s) => {
                if *s > 0 {
                    0.0
                } else {
                    std::f64::consts::PI
                }
            }
            Coefficient::General(z) => z.arg(),
        };
        entries.push((padded, theta));
    }
    UnimodularPolynomial::torus(n + 1, d, entries)
}

/// On-disk polynomial: 1-based sorted indices, one coefficient per entry,
/// phases for the torus, signs for the cube.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct PolynomialFile {
    n: usize,
    d: usize,
    domain: Domain,
    homogeneous: bool,
    coefficients: Vec<FileEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FileEntry {
    index: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sign: Option<i8>,
}

/// Parses the JSON polynomial format, rejecting mixed or missing
/// coefficient fields and indices that violate the domain's ordering.
pub fn from_json(text: &str) -> Result<UnimodularPolynomial> {
    let file: PolynomialFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidPolynomial(format!("json: {e}")))?;
    let mut phases = Vec::new();
    let mut signs = Vec::new();
    for entry in &file.coefficients {
        match (file.domain, entry.phase, entry.sign) {
            (Domain::Torus, Some(theta), None) => phases.push((entry.index.clone(), theta)),
            (Domain::Cube, None, Some(s)) => signs.push((entry.index.clone(), s)),
            (Domain::Torus, _, _) => {
                return Err(Error::InvalidPolynomial(format!(
                    "torus entry {:?} must carry exactly a phase",
                    entry.index
                )))
            }
            (Domain::Cube, _, _) => {
                return Err(Error::InvalidPolynomial(format!(
                    "cube entry {:?} must carry exactly a sign",
                    entry.index
                )))
            }
        }
    }
    let poly = match file.domain {
        Domain::Torus => {
            if file.homogeneous {
                if let Some(bad) = phases.iter().find(|(v, _)| v.len() != file.d) {
                    return Err(Error::InvalidPolynomial(format!(
                        "homogeneous file has monomial {:?} of degree {} != {}",
                        bad.0,
                        bad.0.len(),
                        file.d
                    )));
                }
                UnimodularPolynomial::torus(file.n, file.d, phases)?
            } else {
                UnimodularPolynomial::torus_nonhomogeneous(file.n, file.d, phases)?
            }
        }
        Domain::Cube => {
            if !file.homogeneous {
                return Err(Error::InvalidPolynomial(
                    "cube polynomials are homogeneous multilinear".into(),
                ));
            }
            UnimodularPolynomial::cube(file.n, file.d, signs)?
        }
    };
    Ok(poly)
}

/// Serialises a polynomial to the JSON format. General complex
/// coefficients have no file representation and are rejected.
pub fn to_json(p: &UnimodularPolynomial) -> Result<String> {
    let mut coefficients = Vec::with_capacity(p.term_count());
    for (values, coeff) in p.all_entries() {
        let entry = match coeff {
            Coefficient::Phase(theta) => FileEntry {
                index: values.clone(),
                phase: Some(*theta),
                sign: None,
            },
            Coefficient::Sign(s) => FileEntry {
                index: values.clone(),
                phase: None,
                sign: Some(*s),
            },
            Coefficient::General(_) => {
                return Err(Error::InvalidPolynomial(
                    "general complex coefficients have no file form".into(),
                ))
            }
        };
        coefficients.push(entry);
    }
    let file = PolynomialFile {
        n: p.n,
        d: p.d,
        domain: p.domain,
        homogeneous: p.homogeneous,
        coefficients,
    };
    Ok(serde_json::to_string_pretty(&file).expect("serialisable"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn product_poly() -> UnimodularPolynomial {
        // z1 z2 in two variables.
        UnimodularPolynomial::torus(2, 2, vec![(vec![1, 2], 0.0)]).unwrap()
    }

    #[test]
    fn evaluate_torus_product() {
        let p = product_poly();
        let v = evaluate(&p, &[z(0.0, 1.0), z(1.0, 0.0)]).unwrap();
        assert!((v - z(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_rejects_bad_points() {
        let p = product_poly();
        assert!(matches!(
            evaluate(&p, &[z(1.0, 0.0)]),
            Err(Error::DimensionMismatch { want: 2, got: 1 })
        ));
        assert!(matches!(
            evaluate(&p, &[z(2.0, 0.0), z(1.0, 0.0)]),
            Err(Error::PointNotUnimodular { slot: 1, .. })
        ));
        let c = UnimodularPolynomial::cube(2, 2, vec![(vec![1, 2], 1)]).unwrap();
        assert!(matches!(
            evaluate(&c, &[z(0.5, 0.0), z(1.0, 0.0)]),
            Err(Error::PointNotSign { slot: 1, .. })
        ));
    }

    #[test]
    fn symmetric_form_divides_by_orbit() {
        let p = product_poly();
        let form = SymmetricForm::new(&p).unwrap();
        let half = form.coefficient(&[2, 1]);
        assert!((half - z(0.5, 0.0)).norm() < 1e-15);
        // Off-support stays zero.
        assert_eq!(form.coefficient(&[1, 1]), Complex64::default());
    }

    #[test]
    fn symmetric_form_value_example() {
        let p = product_poly();
        let form = SymmetricForm::new(&p).unwrap();
        let points = vec![vec![z(1.0, 0.0), z(0.0, 0.0)], vec![z(0.0, 0.0), z(1.0, 0.0)]];
        let v = symmetric_form_value(&form, &points, EnumCap::default()).unwrap();
        assert!((v - z(0.5, 0.0)).norm() < 1e-15);
    }

    fn random_torus(n: usize, d: usize, rng: &mut ChaCha8Rng) -> UnimodularPolynomial {
        let space = IndexSpace::full(d, n, Monotonicity::NonDecreasing).unwrap();
        let entries: Vec<(Vec<usize>, f64)> = space
            .enumerate(EnumCap::default())
            .unwrap()
            .map(|i| (i.values().to_vec(), rng.gen::<f64>() * std::f64::consts::TAU))
            .collect();
        UnimodularPolynomial::torus(n, d, entries).unwrap()
    }

    fn random_torus_point(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU))
            .collect()
    }

    #[test]
    fn diagonal_of_symmetric_form_recovers_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let n = rng.gen_range(1..=3);
            let d = rng.gen_range(1..=3);
            let p = random_torus(n, d, &mut rng);
            let form = SymmetricForm::new(&p).unwrap();
            let zpt = random_torus_point(n, &mut rng);
            let diag: Vec<Vec<Complex64>> = (0..d).map(|_| zpt.clone()).collect();
            let fv = symmetric_form_value(&form, &diag, EnumCap::default()).unwrap();
            let pv = evaluate(&p, &zpt).unwrap();
            assert!((fv - pv).norm() < 1e-10, "n={n} d={d}");
        }
    }

    #[test]
    fn flat_extension_vanishes_on_collisions() {
        let p = UnimodularPolynomial::cube(3, 2, vec![(vec![1, 2], 1), (vec![1, 3], -1)]).unwrap();
        let ext = ExtendedCoefficient::new(&p, ExtensionRule::Flat).unwrap();
        let i = MultiIndex::new(vec![1], vec![1], Monotonicity::StrictlyIncreasing).unwrap();
        let j = MultiIndex::new(vec![2], vec![1], Monotonicity::StrictlyIncreasing).unwrap();
        assert_eq!(extend_coefficient(&ext, &i, &j).unwrap(), Complex64::default());
        let j2 = MultiIndex::new(vec![2], vec![3], Monotonicity::StrictlyIncreasing).unwrap();
        let v = extend_coefficient(&ext, &i, &j2).unwrap();
        assert!((v - z(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sorted_extension_matches_flat_on_sorted_blocks() {
        let p = UnimodularPolynomial::cube(
            4,
            3,
            vec![(vec![1, 2, 3], 1), (vec![1, 2, 4], -1), (vec![2, 3, 4], 1)],
        )
        .unwrap();
        let flat = ExtendedCoefficient::new(&p, ExtensionRule::Flat).unwrap();
        let sorted = ExtendedCoefficient::new(&p, ExtensionRule::Sorted).unwrap();
        // Permuted block (4, 2) on slots {1, 3}; sorted it is (2, 4).
        let i_perm = MultiIndex::new(vec![1, 3], vec![4, 2], Monotonicity::Unrestricted).unwrap();
        let i_sort = MultiIndex::new(vec![1, 3], vec![2, 4], Monotonicity::StrictlyIncreasing).unwrap();
        let j = MultiIndex::new(vec![2], vec![1], Monotonicity::StrictlyIncreasing).unwrap();
        let a = extend_coefficient(&sorted, &i_perm, &j).unwrap();
        let b = extend_coefficient(&flat, &i_sort, &j).unwrap();
        assert_eq!(a, b);
        assert!((a - z(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn scaled_extension_divides_by_d_factorial() {
        let p = UnimodularPolynomial::cube(2, 2, vec![(vec![1, 2], 1)]).unwrap();
        let scaled = ExtendedCoefficient::new(&p, ExtensionRule::Scaled).unwrap();
        let i = MultiIndex::new(vec![1], vec![2], Monotonicity::StrictlyIncreasing).unwrap();
        let j = MultiIndex::new(vec![2], vec![1], Monotonicity::StrictlyIncreasing).unwrap();
        let v = extend_coefficient(&scaled, &i, &j).unwrap();
        assert!((v - z(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn mixed_form_example() {
        let p = UnimodularPolynomial::cube(2, 2, vec![(vec![1, 2], 1)]).unwrap();
        let v = mixed_form(&p, &[1.0, 1.0], &[1.0, -1.0], 1).unwrap();
        assert!(v.abs() < 1e-15);
        let w = mixed_form(&p, &[1.0, 1.0], &[1.0, -1.0], 0).unwrap();
        assert!((w - (-1.0)).abs() < 1e-15);
    }

    #[test]
    fn mixed_form_extremes_recover_evaluations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = UnimodularPolynomial::cube(
            4,
            2,
            vec![
                (vec![1, 2], 1),
                (vec![1, 3], -1),
                (vec![2, 4], 1),
                (vec![3, 4], -1),
            ],
        )
        .unwrap();
        for _ in 0..10 {
            let x: Vec<f64> = (0..4).map(|_| if rng.gen() { 1.0 } else { -1.0 }).collect();
            let y: Vec<f64> = (0..4).map(|_| if rng.gen() { 1.0 } else { -1.0 }).collect();
            let lx = mixed_form(&p, &x, &y, 2).unwrap();
            let ly = mixed_form(&p, &x, &y, 0).unwrap();
            assert!((lx - evaluate_cube_real(&p, &x).unwrap()).abs() < 1e-12);
            assert!((ly - evaluate_cube_real(&p, &y).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn polarization_example() {
        let p = UnimodularPolynomial::cube(2, 2, vec![(vec![1, 2], 1)]).unwrap();
        let pc = polarization_coefficient(&p, &[1.0, 1.0], &[1.0, 1.0], 1).unwrap();
        assert!((pc.extracted - 2.0).abs() < 1e-10);
        assert!((pc.predicted - 2.0).abs() < 1e-12);
        assert!(pc.agrees(1e-9));
    }

    #[test]
    fn interpolation_recovers_known_coefficients() {
        // (t - 2)(t + 1) = t^2 - t - 2 sampled anywhere distinct.
        let ts = [0.3, -0.7, 1.9];
        let ps: Vec<f64> = ts.iter().map(|t| (t - 2.0) * (t + 1.0)).collect();
        let mono = monomial_coefficients(&ts, &ps);
        assert!((mono[0] + 2.0).abs() < 1e-12);
        assert!((mono[1] + 1.0).abs() < 1e-12);
        assert!((mono[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lift_pads_with_auxiliary_variable() {
        let p = UnimodularPolynomial::torus_nonhomogeneous(
            1,
            1,
            vec![(vec![], 0.0), (vec![1], 0.0)],
        )
        .unwrap();
        assert!(!p.is_homogeneous());
        let q = lift_nonhomogeneous(&p).unwrap();
        assert!(q.is_homogeneous());
        assert_eq!(q.n(), 2);
        assert_eq!(q.d(), 1);
        let keys: Vec<Vec<usize>> = q.all_entries().map(|(v, _)| v.clone()).collect();
        assert_eq!(keys, vec![vec![1], vec![2]]);
    }

    #[test]
    fn lift_of_homogeneous_keeps_monomials() {
        let p = product_poly();
        let q = lift_nonhomogeneous(&p).unwrap();
        assert_eq!(q.n(), 3);
        let keys: Vec<Vec<usize>> = q.all_entries().map(|(v, _)| v.clone()).collect();
        assert_eq!(keys, vec![vec![1, 2]]);
    }

    #[test]
    fn lift_agrees_with_base_at_fixed_auxiliary() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let p = UnimodularPolynomial::torus_nonhomogeneous(
            2,
            3,
            vec![
                (vec![], 0.3),
                (vec![1], 1.1),
                (vec![1, 2], 2.7),
                (vec![1, 1, 2], 4.0),
                (vec![2, 2, 2], 5.9),
            ],
        )
        .unwrap();
        let q = lift_nonhomogeneous(&p).unwrap();
        for _ in 0..20 {
            let zpt = random_torus_point(2, &mut rng);
            let mut wpt = zpt.clone();
            wpt.push(z(1.0, 0.0));
            let pv = evaluate(&p, &zpt).unwrap();
            let qv = evaluate(&q, &wpt).unwrap();
            assert!((pv - qv).norm() < 1e-12);
        }
    }

    #[test]
    fn convexity_transfer_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let p = UnimodularPolynomial::cube(
            3,
            2,
            vec![(vec![1, 2], 1), (vec![1, 3], 1), (vec![2, 3], -1)],
        )
        .unwrap();
        let mut vertex_max: f64 = 0.0;
        for bits in 0..8u32 {
            let x: Vec<f64> = (0..3)
                .map(|i| if bits & (1 << i) != 0 { 1.0 } else { -1.0 })
                .collect();
            vertex_max = vertex_max.max(evaluate_cube_real(&p, &x).unwrap().abs());
        }
        for _ in 0..200 {
            let u: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let v = evaluate_cube_real(&p, &u).unwrap().abs();
            assert!(v <= vertex_max + 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let p = UnimodularPolynomial::cube(3, 2, vec![(vec![1, 2], 1), (vec![2, 3], -1)]).unwrap();
        let text = to_json(&p).unwrap();
        let q = from_json(&text).unwrap();
        assert_eq!(q.n(), 3);
        assert_eq!(q.d(), 2);
        assert_eq!(q.domain(), Domain::Cube);
        let again = to_json(&q).unwrap();
        assert_eq!(text, again);
    }

    #[test]
    fn json_rejects_malformed_files() {
        // Torus entry with a sign.
        let bad = r#"{"n":2,"d":1,"domain":"torus","homogeneous":true,
                      "coefficients":[{"index":[1],"sign":1}]}"#;
        assert!(from_json(bad).is_err());
        // Cube index not strictly increasing.
        let bad = r#"{"n":3,"d":2,"domain":"cube","homogeneous":true,
                      "coefficients":[{"index":[2,2],"sign":1}]}"#;
        assert!(from_json(bad).is_err());
        // Homogeneous torus file with a short monomial.
        let bad = r#"{"n":2,"d":2,"domain":"torus","homogeneous":true,
                      "coefficients":[{"index":[1],"phase":0.0}]}"#;
        assert!(from_json(bad).is_err());
    }

    proptest! {
        #[test]
        fn sorted_rule_is_permutation_invariant(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=5usize);
            let d = rng.gen_range(2..=3usize);
            let space = IndexSpace::full(d, n, Monotonicity::StrictlyIncreasing).unwrap();
            let entries: Vec<(Vec<usize>, i8)> = space
                .enumerate(EnumCap::default())
                .unwrap()
                .map(|i| (i.values().to_vec(), if rng.gen() { 1 } else { -1 }))
                .collect();
            let p = UnimodularPolynomial::cube(n, d, entries).unwrap();
            let ext = ExtendedCoefficient::new(&p, ExtensionRule::Sorted).unwrap();
            // A random bipartition with random (possibly colliding) values.
            let ksz = rng.gen_range(1..d);
            let subs = subsets(d, ksz);
            let s = subs[rng.gen_range(0..subs.len())].clone();
            let hat: Vec<usize> = (1..=d).filter(|t| !s.contains(t)).collect();
            let iv: Vec<usize> = (0..s.len()).map(|_| rng.gen_range(1..=n)).collect();
            let jv: Vec<usize> = (0..hat.len()).map(|_| rng.gen_range(1..=n)).collect();
            let i = MultiIndex::new(s.clone(), iv.clone(), Monotonicity::Unrestricted).unwrap();
            let j = MultiIndex::new(hat.clone(), jv.clone(), Monotonicity::Unrestricted).unwrap();
            let v = extend_coefficient(&ext, &i, &j).unwrap();
            let mut iv_s = iv; iv_s.sort_unstable();
            let mut jv_s = jv; jv_s.sort_unstable();
            let i_s = MultiIndex::new(s, iv_s, Monotonicity::Unrestricted).unwrap();
            let j_s = MultiIndex::new(hat, jv_s, Monotonicity::Unrestricted).unwrap();
            let v_s = extend_coefficient(&ext, &i_s, &j_s).unwrap();
            prop_assert_eq!(v, v_s);
        }

        #[test]
        fn mixed_form_is_between_evaluations_only_in_degree(seed in 0u64..200) {
            // Not a bound, only a well-formedness check: the mixed form is
            // finite and symmetric under swapping (x, k) with (y, d-k).
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 4usize;
            let d = 3usize;
            let space = IndexSpace::full(d, n, Monotonicity::StrictlyIncreasing).unwrap();
            let entries: Vec<(Vec<usize>, i8)> = space
                .enumerate(EnumCap::default())
                .unwrap()
                .map(|i| (i.values().to_vec(), if rng.gen() { 1 } else { -1 }))
                .collect();
            let p = UnimodularPolynomial::cube(n, d, entries).unwrap();
            let x: Vec<f64> = (0..n).map(|_| if rng.gen() { 1.0 } else { -1.0 }).collect();
            let y: Vec<f64> = (0..n).map(|_| if rng.gen() { 1.0 } else { -1.0 }).collect();
            for k in 0..=d {
                let a = mixed_form(&p, &x, &y, k).unwrap();
                let b = mixed_form(&p, &y, &x, d - k).unwrap();
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
