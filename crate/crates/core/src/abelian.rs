//! Abelian groups: evaluation on the dual torus, spectra of finite quotients
//! through characters, the torus limit measure and convergence diagnostics.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianGroupSpec, GroupElement, GroupSpec, QuotientSpec};
use crate::linalg::{eigenvalues, DenseComplexMatrix};
use crate::quotient::root_of_unity;
use crate::ring::GroupRingMatrix;
use crate::spectra::{measure_from_eigenvalues, zero_atom_from_eigenvalues, AtomicMeasure, HistogramSpec};

const TORUS_TOL: f64 = 1e-12;

/// A character of `Z^k x T`: a point of the unit torus for the free part and
/// a residue `j` (meaning `exp(2 pi i j / t)`) per torsion factor.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    pub free: Vec<Complex64>,
    pub torsion: Vec<u64>,
}

impl TorusPoint {
    pub fn free(free: Vec<Complex64>) -> Self {
        Self {
            free,
            torsion: Vec::new(),
        }
    }

    fn validate(&self, spec: &AbelianGroupSpec) -> Result<()> {
        if self.free.len() != spec.rank() || self.torsion.len() != spec.torsion_orders().len() {
            return Err(Error::DimensionMismatch(format!(
                "torus point with {} free and {} torsion coordinates for {spec}",
                self.free.len(),
                self.torsion.len()
            )));
        }
        for (index, z) in self.free.iter().enumerate() {
            let modulus = z.norm();
            if !((modulus - 1.0).abs() <= TORUS_TOL) {
                return Err(Error::OffTorus { index, modulus });
            }
        }
        Ok(())
    }
}

fn abelian_spec(group: &GroupSpec) -> Result<&Arc<AbelianGroupSpec>> {
    match group {
        GroupSpec::Abelian(spec) => Ok(spec),
        other => Err(Error::MismatchedGroup(format!(
            "torus evaluation needs an abelian group, got {other}"
        ))),
    }
}

/// `A(zeta)`: every group element `g` replaced by `chi_zeta(g)`.
pub fn evaluate_at(a: &GroupRingMatrix, zeta: &TorusPoint) -> Result<DenseComplexMatrix> {
    let spec = abelian_spec(a.group())?;
    zeta.validate(spec)?;
    let torsion_roots: Vec<Complex64> = zeta
        .torsion
        .iter()
        .zip(spec.torsion_orders())
        .map(|(&j, &t)| root_of_unity(j as i64, t))
        .collect();
    let character = |g: &GroupElement| -> Complex64 {
        let GroupElement::Abelian(e) = g else {
            unreachable!("abelian group ring");
        };
        let mut v = Complex64::new(1.0, 0.0);
        for (z, &x) in zeta.free.iter().zip(e.free_exponents()) {
            v *= z.powi(x as i32);
        }
        for (w, &x) in torsion_roots.iter().zip(e.torsion_residues()) {
            v *= w.powi(x as i32);
        }
        v
    };
    let n = a.size();
    Ok(DenseComplexMatrix::from_fn(n, n, |i, j| {
        a.get(i, j).terms().map(|(g, c)| c * character(g)).sum()
    }))
}

/// Every tuple in the product of `0..radix` ranges, lexicographic.
fn mixed_radix(radices: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &r in radices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..r).map(move |j| {
                    let mut t = prefix.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

/// The characters of the quotient `q`, in the enumeration order of its
/// elements.
pub fn quotient_characters(q: &QuotientSpec) -> Result<Vec<TorusPoint>> {
    let QuotientSpec::Abelian { group, moduli } = q else {
        return Err(Error::MismatchedGroup(format!("{q} is not an abelian quotient")));
    };
    let mut radices = moduli.clone();
    radices.extend_from_slice(group.torsion_orders());
    let k = moduli.len();
    Ok(mixed_radix(&radices)
        .into_iter()
        .map(|t| TorusPoint {
            free: t[..k]
                .iter()
                .zip(moduli)
                .map(|(&j, &m)| root_of_unity(j as i64, m))
                .collect(),
            torsion: t[k..].to_vec(),
        })
        .collect())
}

/// Union over the characters `zeta` of the quotient of the spectra of
/// `A(zeta)`: the spectrum of the regular representation, obtained from
/// `n x n` eigensolves.
pub fn spectrum_by_factorization(a: &GroupRingMatrix, q: &QuotientSpec) -> Result<Vec<Complex64>> {
    spectrum_by_factorization_with(a, q, eigenvalues)
}

/// Same as [`spectrum_by_factorization`] with a caller-chosen solver for
/// the `n x n` blocks `A(zeta)`.
pub fn spectrum_by_factorization_with<F>(a: &GroupRingMatrix, q: &QuotientSpec, solve: F) -> Result<Vec<Complex64>>
where
    F: Fn(&DenseComplexMatrix) -> Result<Vec<Complex64>> + Sync,
{
    let spec = abelian_spec(a.group())?;
    if q.group() != GroupSpec::Abelian(spec.clone()) {
        return Err(Error::MismatchedGroup(format!(
            "matrix over C[{spec}] on the quotient {q}"
        )));
    }
    spectrum_over(a, &quotient_characters(q)?, &solve)
}

fn spectrum_over<F>(a: &GroupRingMatrix, points: &[TorusPoint], solve: &F) -> Result<Vec<Complex64>>
where
    F: Fn(&DenseComplexMatrix) -> Result<Vec<Complex64>> + Sync,
{
    let parts: Vec<Vec<Complex64>> = points
        .par_iter()
        .map(|z| solve(&evaluate_at(a, z)?))
        .collect::<Result<_>>()?;
    Ok(parts.concat())
}

/// How the free coordinates of the torus are sampled. Torsion coordinates
/// are always enumerated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TorusSampler {
    /// `exp(2 pi i j / m)` for `j < m`, one order per free coordinate.
    RootsOfUnity { orders: Vec<u64> },
    /// Midpoints `exp(2 pi i (j + 1/2) / M)` in every free coordinate.
    UniformGrid { points_per_axis: u64 },
    /// Independent uniform angles from a seeded ChaCha stream.
    MonteCarlo { count: u64, seed: u64 },
}

impl TorusSampler {
    pub fn points(&self, spec: &AbelianGroupSpec) -> Result<Vec<TorusPoint>> {
        let k = spec.rank();
        let free: Vec<Vec<Complex64>> = match self {
            TorusSampler::RootsOfUnity { orders } => {
                if orders.len() != k || orders.contains(&0) {
                    return Err(Error::InvalidArgument(format!(
                        "need {k} positive orders, got {orders:?}"
                    )));
                }
                mixed_radix(orders)
                    .into_iter()
                    .map(|t| t.iter().zip(orders).map(|(&j, &m)| root_of_unity(j as i64, m)).collect())
                    .collect()
            }
            TorusSampler::UniformGrid { points_per_axis: m } => {
                if *m == 0 {
                    return Err(Error::InvalidArgument("grid needs at least one point".into()));
                }
                let angle = |j: u64| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / *m as f64);
                mixed_radix(&vec![*m; k])
                    .into_iter()
                    .map(|t| t.into_iter().map(angle).collect())
                    .collect()
            }
            TorusSampler::MonteCarlo { count, seed } => {
                if *count == 0 {
                    return Err(Error::InvalidArgument("Monte Carlo needs at least one sample".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*count)
                    .map(|_| {
                        (0..k)
                            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI)))
                            .collect()
                    })
                    .collect()
            }
        };
        let torsion = mixed_radix(spec.torsion_orders());
        Ok(free
            .iter()
            .flat_map(|f| {
                torsion.iter().map(move |t| TorusPoint {
                    free: f.clone(),
                    torsion: t.clone(),
                })
            })
            .collect())
    }
}

impl fmt::Display for TorusSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusSampler::RootsOfUnity { orders } => {
                let o: Vec<String> = orders.iter().map(|m| m.to_string()).collect();
                write!(f, "roots:{}", o.join(","))
            }
            TorusSampler::UniformGrid { points_per_axis } => write!(f, "grid:{points_per_axis}"),
            TorusSampler::MonteCarlo { count, seed } => write!(f, "mc:{count}:{seed}"),
        }
    }
}

impl std::str::FromStr for TorusSampler {
    type Err = Error;

    /// `grid:M`, `roots:m1,m2,...` or `mc:COUNT[:SEED]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse sampler {s:?}"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        match kind.trim() {
            "grid" => Ok(TorusSampler::UniformGrid {
                points_per_axis: num(rest)?,
            }),
            "roots" => Ok(TorusSampler::RootsOfUnity {
                orders: rest.split(',').map(num).collect::<Result<_>>()?,
            }),
            "mc" => {
                let (count, seed) = match rest.split_once(':') {
                    Some((c, s)) => (num(c)?, num(s)?),
                    None => (num(rest)?, 0),
                };
                Ok(TorusSampler::MonteCarlo { count, seed })
            }
            _ => Err(bad()),
        }
    }
}

/// Average over the sampled characters of the eigenvalue sets of `A(zeta)`;
/// total mass `n`.
pub fn limit_measure(a: &GroupRingMatrix, sampler: &TorusSampler) -> Result<AtomicMeasure> {
    let spec = abelian_spec(a.group())?;
    let points = sampler.points(spec)?;
    let eigs = spectrum_over(a, &points, &eigenvalues)?;
    measure_from_eigenvalues(&eigs, points.len() as u64)
}

/// `mu_{A_q}` computed through characters; equal to the eigenvalue measure of
/// the regular representation.
pub fn quotient_measure(a: &GroupRingMatrix, q: &QuotientSpec) -> Result<AtomicMeasure> {
    let eigs = spectrum_by_factorization(a, q)?;
    measure_from_eigenvalues(&eigs, q.order() as u64)
}

/// Polynomial in `y` with Laurent-polynomial coefficients in `t`, stored as
/// `(t exponent, y exponent) -> coefficient`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(i64, u32), Complex64>,
}

impl BivariatePoly {
    fn constant(c: Complex64) -> Self {
        let mut p = Self::default();
        p.add_term(0, 0, c);
        p
    }

    fn add_term(&mut self, t: i64, y: u32, c: Complex64) {
        let e = self.terms.entry((t, y)).or_default();
        *e += c;
        if *e == Complex64::new(0.0, 0.0) {
            self.terms.remove(&(t, y));
        }
    }

    fn add(&self, other: &Self, sign: f64) -> Self {
        let mut out = self.clone();
        for (&(t, y), &c) in &other.terms {
            out.add_term(t, y, c * sign);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(t1, y1), &c1) in &self.terms {
            for (&(t2, y2), &c2) in &other.terms {
                out.add_term(t1 + t2, y1 + y2, c1 * c2);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, u32), Complex64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coefficient(&self, t: i64, y: u32) -> Complex64 {
        self.terms.get(&(t, y)).copied().unwrap_or_default()
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|&(_, y)| y).max().unwrap_or(0)
    }

    /// Coefficients of `y^0, y^1, ...` after substituting `t = zeta`.
    pub fn at_t(&self, zeta: Complex64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.degree_y() as usize + 1];
        for (&(t, y), &c) in &self.terms {
            out[y as usize] += c * zeta.powi(t as i32);
        }
        out
    }

    pub fn eval(&self, t: Complex64, y: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(te, ye), &c)| c * t.powi(te as i32) * y.powu(ye))
            .sum()
    }
}

fn format_coefficient(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({},{})", c.re, c.im)
    }
}

impl fmt::Display for BivariatePoly {
    /// Terms by descending `y` degree, then descending `t` degree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(i64, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
        for (idx, &&(t, y)) in keys.iter().enumerate() {
            let c = self.terms[&(t, y)];
            let mut factors = Vec::new();
            let (negative, magnitude) = if c.im == 0.0 && c.re < 0.0 { (true, -c) } else { (false, c) };
            let is_one = magnitude == Complex64::new(1.0, 0.0);
            if !is_one || (t == 0 && y == 0) {
                factors.push(format_coefficient(magnitude));
            }
            match t {
                0 => {}
                1 => factors.push("t".into()),
                _ => factors.push(format!("t^{t}")),
            }
            match y {
                0 => {}
                1 => factors.push("y".into()),
                _ => factors.push(format!("y^{y}")),
            }
            let body = factors.join("*");
            match (idx, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// Largest matrix size for the symbolic expansion.
pub const SYMBOLIC_CAP: usize = 8;

/// `p(t, y) = det(y Id - A)` over `C[t, t^-1][y]` by cofactor expansion along
/// rows, memoised over column subsets.
pub fn symbolic_char_poly(a: &GroupRingMatrix) -> Result<BivariatePoly> {
    let spec = abelian_spec(a.group())?;
    if spec.rank() != 1 || !spec.torsion_orders().is_empty() {
        return Err(Error::UnsupportedRank(spec.num_generators()));
    }
    let n = a.size();
    if n > SYMBOLIC_CAP {
        return Err(Error::TooLarge { n, cap: SYMBOLIC_CAP });
    }
    let entry = |i: usize, j: usize| -> BivariatePoly {
        let mut p = BivariatePoly::default();
        for (g, &c) in a.get(i, j).terms() {
            let GroupElement::Abelian(e) = g else {
                unreachable!("abelian group ring");
            };
            p.add_term(e.exponent(0), 0, -c);
        }
        if i == j {
            p.add_term(0, 1, Complex64::new(1.0, 0.0));
        }
        p
    };
    let m: Vec<Vec<BivariatePoly>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    // det[mask] = determinant of rows 0..|mask| against the columns in mask
    let mut det = vec![BivariatePoly::default(); 1 << n];
    det[0] = BivariatePoly::constant(Complex64::new(1.0, 0.0));
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = BivariatePoly::default();
        for (pos, col) in (0..n).filter(|c| mask >> c & 1 == 1).enumerate() {
            let minor = &det[mask & !(1 << col)];
            let term = m[row][col].mul(minor);
            // expansion along the last row of a (row+1)x(row+1) minor
            acc = acc.add(&term, if (row + pos).is_multiple_of(2) { 1.0 } else { -1.0 });
        }
        det[mask] = acc;
    }
    Ok(det.pop().expect("non-empty table"))
}

/// Settings shared by every level of a convergence report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSettings {
    pub degree: usize,
    pub cells: usize,
    /// Eigenvalues of modulus at most this count toward the zero atom.
    pub zero_tol: f64,
}

impl Default for ReportSettings {
    fn default() -> Self {
        Self {
            degree: 6,
            cells: crate::spectra::histogram::DEFAULT_CELLS,
            zero_tol: crate::spectra::DEFAULT_ZERO_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub quotient: String,
    pub order: u64,
    pub moments: Vec<Complex64>,
    /// Largest `|moment_n(mu_i) - moment_n(mu)|` over `n = 1..=degree`.
    pub moment_error: f64,
    pub histogram_distance: f64,
    pub zero_atom: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub sampler: String,
    pub settings: ReportSettings,
    pub histogram: HistogramSpec,
    /// `Tr(A^n)` for `n = 1..=degree`, summed over diagonal entries.
    pub exact_moments: Vec<Complex64>,
    pub limit_moments: Vec<Complex64>,
    pub limit_zero_atom: f64,
    pub levels: Vec<LevelReport>,
    /// Reported, not asserted.
    pub distances_decreasing: bool,
}

pub fn weak_convergence_report(
    a: &GroupRingMatrix,
    chain: &[QuotientSpec],
    sampler: &TorusSampler,
    settings: &ReportSettings,
) -> Result<ConvergenceReport> {
    let limit = limit_measure(a, sampler)?;
    let histogram = HistogramSpec::for_norm_bound(a.row_norm_bound(), settings.cells);
    let limit_moments = limit.holomorphic_moments(settings.degree);
    let mut exact_moments = Vec::with_capacity(settings.degree);
    let mut power = GroupRingMatrix::identity(a.group().clone(), a.size());
    for _ in 0..settings.degree {
        power = power.multiply(a)?;
        exact_moments.push(power.trace());
    }
    let mut levels = Vec::with_capacity(chain.len());
    for q in chain {
        let eigs = spectrum_by_factorization(a, q)?;
        let order = q.order() as u64;
        let mu = measure_from_eigenvalues(&eigs, order)?;
        let moments = mu.holomorphic_moments(settings.degree);
        let moment_error = moments
            .iter()
            .zip(&limit_moments)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        levels.push(LevelReport {
            quotient: q.to_string(),
            order,
            moments,
            moment_error,
            histogram_distance: histogram.distance(&mu, &limit),
            zero_atom: zero_atom_from_eigenvalues(&eigs, order, settings.zero_tol),
        });
    }
    let distances_decreasing = levels
        .windows(2)
        .all(|w| w[1].histogram_distance <= w[0].histogram_distance);
    Ok(ConvergenceReport {
        sampler: sampler.to_string(),
        settings: settings.clone(),
        histogram,
        exact_moments,
        limit_moments,
        limit_zero_atom: limit.mass_within(Complex64::new(0.0, 0.0), settings.zero_tol),
        levels,
        distances_decreasing,
    })
}
