//! Atomic eigenvalue measures and the spectral quantities built from them.

pub mod histogram;
pub mod matching;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, range_basis, singular_values, DenseComplexMatrix};

pub use histogram::HistogramSpec;

/// Default modulus below which a computed eigenvalue counts as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-3;
/// Default relative singular-value threshold for numerical rank.
pub const DEFAULT_SVD_TOL: f64 = 1e-10;
/// Straddling singular values closer than this ratio trigger a gap warning.
const GAP_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: Complex64,
    pub weight: f64,
}

/// A finite sum of weighted Dirac masses on the complex plane.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
    total_mass: f64,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if let Some(a) = atoms
            .iter()
            .find(|a| !(a.weight > 0.0) || !a.weight.is_finite())
        {
            return Err(Error::InvalidArgument(format!(
                "atom weight {} is not positive",
                a.weight
            )));
        }
        if atoms
            .iter()
            .any(|a| !a.location.re.is_finite() || !a.location.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let total_mass = atoms.iter().map(|a| a.weight).sum();
        Ok(Self { atoms, total_mass })
    }

    /// Equal weight `weight` at each point (repeated points stay separate atoms).
    pub fn from_points(points: &[Complex64], weight: f64) -> Result<Self> {
        let mut mu = Self::new(
            points
                .iter()
                .map(|&location| Atom { location, weight })
                .collect(),
        )?;
        // exact product rather than a rounded running sum
        mu.total_mass = points.len() as f64 * weight;
        Ok(mu)
    }

    pub fn empty() -> Self {
        Self {
            atoms: Vec::new(),
            total_mass: 0.0,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn locations(&self) -> Vec<Complex64> {
        self.atoms.iter().map(|a| a.location).collect()
    }

    /// Merges atoms at exactly equal locations, keeping first-seen order.
    pub fn aggregated(&self) -> Self {
        let mut out: Vec<Atom> = Vec::new();
        let mut index: std::collections::HashMap<(u64, u64), usize> = Default::default();
        for a in &self.atoms {
            // +0.0 and -0.0 compare equal, so normalise before hashing bits
            let key = |x: f64| if x == 0.0 { 0u64 } else { x.to_bits() };
            match index.entry((key(a.location.re), key(a.location.im))) {
                std::collections::hash_map::Entry::Occupied(e) => out[*e.get()].weight += a.weight,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(out.len());
                    out.push(*a);
                }
            }
        }
        Self {
            atoms: out,
            total_mass: self.total_mass,
        }
    }

    /// Mass of the closed disk of the given radius.
    pub fn mass_within(&self, center: Complex64, radius: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| (a.location - center).norm() <= radius)
            .map(|a| a.weight)
            .sum()
    }

    /// `int z^n dmu` for `n = 1..=degree`.
    pub fn holomorphic_moments(&self, degree: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); degree];
        for a in &self.atoms {
            let mut p = Complex64::new(1.0, 0.0);
            for m in out.iter_mut() {
                p *= a.location;
                *m += p * a.weight;
            }
        }
        out
    }

    /// `int z^n conj(z)^m dmu`.
    pub fn mixed_moment(&self, n: u32, m: u32) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| a.location.powu(n) * a.location.conj().powu(m) * a.weight)
            .sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,weight\n");
        for a in &self.atoms {
            out.push_str(&format!(
                "{:?},{:?},{:?}\n",
                a.location.re, a.location.im, a.weight
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MeasureFile::from(self)).expect("measure serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let file: MeasureFile = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(format!("measure JSON: {e}")))?;
        let mut mu = Self::new(
            file.atoms
                .iter()
                .map(|a| Atom {
                    location: Complex64::new(a.re, a.im),
                    weight: a.w,
                })
                .collect(),
        )?;
        let sum = mu.total_mass;
        if (sum - file.total_mass).abs() > 1e-12 * sum.abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "total_mass {} disagrees with the atom weights ({sum})",
                file.total_mass
            )));
        }
        mu.total_mass = file.total_mass;
        Ok(mu)
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureAtomFile {
    re: f64,
    im: f64,
    w: f64,
}

#[derive(Serialize, Deserialize)]
struct MeasureFile {
    atoms: Vec<MeasureAtomFile>,
    total_mass: f64,
}

impl From<&AtomicMeasure> for MeasureFile {
    fn from(mu: &AtomicMeasure) -> Self {
        Self {
            atoms: mu
                .atoms
                .iter()
                .map(|a| MeasureAtomFile {
                    re: a.location.re,
                    im: a.location.im,
                    w: a.weight,
                })
                .collect(),
            total_mass: mu.total_mass,
        }
    }
}

/// `(1/group_order) sum_j delta_{lambda_j}` over the eigenvalues of `m`.
pub fn eigenvalue_measure(m: &DenseComplexMatrix, group_order: u64) -> Result<AtomicMeasure> {
    measure_from_eigenvalues(&eigenvalues(m)?, group_order)
}

pub fn measure_from_eigenvalues(eigs: &[Complex64], group_order: u64) -> Result<AtomicMeasure> {
    if group_order == 0 {
        return Err(Error::InvalidArgument("group order must be positive".into()));
    }
    let mut mu = AtomicMeasure::from_points(eigs, 1.0 / group_order as f64)?;
    mu.total_mass = eigs.len() as f64 / group_order as f64;
    Ok(mu)
}

/// For a finite matrix the Brown measure is the normalized eigenvalue measure.
pub fn brown_measure(m: &DenseComplexMatrix) -> Result<AtomicMeasure> {
    let n = m.require_square()?;
    eigenvalue_measure(m, n as u64)
}

/// Number of eigenvalues of modulus `<= tau`, divided by `group_order`.
pub fn zero_atom_numeric(m: &DenseComplexMatrix, group_order: u64, tau: f64) -> Result<f64> {
    Ok(zero_atom_from_eigenvalues(&eigenvalues(m)?, group_order, tau))
}

pub fn zero_atom_from_eigenvalues(eigs: &[Complex64], group_order: u64, tau: f64) -> f64 {
    count_small(eigs, tau) as f64 / group_order as f64
}

fn count_small(eigs: &[Complex64], tau: f64) -> usize {
    eigs.iter().filter(|z| z.norm() <= tau).count()
}

/// Singular values straddling the rank threshold that are too close together
/// for the rank decision to be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapWarning {
    pub smallest_kept: f64,
    pub largest_dropped: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankZeroAtom {
    /// `(dim - rank(M^K)) / group_order`.
    pub mass: f64,
    pub rank: usize,
    pub dim: usize,
    /// `dim - rank`: the algebraic multiplicity of 0 when `K` is large enough.
    pub zero_multiplicity: usize,
    pub gap_warning: Option<GapWarning>,
}

/// Numerical rank: singular values above `tau_svd * sigma_max`.
pub fn numerical_rank(m: &DenseComplexMatrix, tau_svd: f64) -> (usize, Option<GapWarning>) {
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return (0, None);
    }
    let rank = sv.iter().filter(|&&s| s > tau_svd * smax).count();
    (rank, gap_warning(&sv, rank))
}

/// Singular values of `M^K` below `tau * max(|M^K|, |M|^K)` count as zero.
/// Anchoring to `|M|^K` keeps a nilpotent `M`, whose computed power is pure
/// rounding noise, from being read as full rank.
fn rank_cutoff(m: &DenseComplexMatrix, mk: &DenseComplexMatrix, power: u32, tau_svd: f64) -> f64 {
    tau_svd * mk.norm_bound().max(m.norm_bound().powi(power as i32))
}

/// `sv` sorted descending, `rank` values kept.
fn gap_warning(sv: &[f64], rank: usize) -> Option<GapWarning> {
    if rank == 0 || rank >= sv.len() {
        return None;
    }
    let (kept, dropped) = (sv[rank - 1], sv[rank]);
    let ratio = if dropped == 0.0 {
        f64::INFINITY
    } else {
        kept / dropped
    };
    (ratio < GAP_RATIO).then_some(GapWarning {
        smallest_kept: kept,
        largest_dropped: dropped,
        ratio,
    })
}

/// Spectrum with the eigenvalue 0 split off exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeflatedSpectrum {
    /// Nonzero eigenvalues followed by `zero_multiplicity` exact zeros.
    pub eigenvalues: Vec<Complex64>,
    pub zero_multiplicity: usize,
    pub gap_warning: Option<GapWarning>,
    /// `||M Q - Q (Q* M Q)||_max`, how far `range(M^K)` is from invariant.
    pub invariance_residual: f64,
}

/// Eigenvalues of `m` computed on `range(M^K)` and its complement
/// separately. The range is `M`-invariant and, once `K` reaches the largest
/// nilpotent block, carries exactly the nonzero eigenvalues; the restriction
/// is solved by the dense eigensolver while the rest is reported as exact
/// zeros. This avoids the `ulp^(1/d)` smearing of defective zero clusters.
pub fn deflated_eigenvalues(
    m: &DenseComplexMatrix,
    power: u32,
    tau_svd: f64,
) -> Result<DeflatedSpectrum> {
    let dim = m.require_square()?;
    if power == 0 {
        return Err(Error::InvalidArgument("rank power K must be positive".into()));
    }
    let mk = m.pow(power)?;
    let (q, sv) = range_basis(&mk, rank_cutoff(m, &mk, power, tau_svd));
    let Some(q) = q else {
        return Ok(DeflatedSpectrum {
            eigenvalues: vec![Complex64::new(0.0, 0.0); dim],
            zero_multiplicity: dim,
            gap_warning: None,
            invariance_residual: 0.0,
        });
    };
    let rank = q.cols();
    let mq = m.matmul(&q)?;
    let restricted = q.conj_transpose().matmul(&mq)?;
    let invariance_residual = mq.sub(&q.matmul(&restricted)?)?.max_abs();
    let mut eigenvalues = eigenvalues(&restricted)?;
    eigenvalues.resize(dim, Complex64::new(0.0, 0.0));
    Ok(DeflatedSpectrum {
        eigenvalues,
        zero_multiplicity: dim - rank,
        gap_warning: gap_warning(&sv, rank),
        invariance_residual,
    })
}

/// Zero-atom mass from `dim - rank(M^K)`. Robust where the eigenvalue count
/// is not: a nilpotent Jordan block of size `d` spreads its computed
/// eigenvalues over a circle of radius about `ulp^(1/d)`.
pub fn zero_atom_rank(
    m: &DenseComplexMatrix,
    group_order: u64,
    power: u32,
    tau_svd: f64,
) -> Result<RankZeroAtom> {
    let dim = m.require_square()?;
    if power == 0 {
        return Err(Error::InvalidArgument("rank power K must be positive".into()));
    }
    let mk = m.pow(power)?;
    let sv = singular_values(&mk);
    let cutoff = rank_cutoff(m, &mk, power, tau_svd);
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    let gap_warning = gap_warning(&sv, rank);
    if let Some(w) = &gap_warning {
        log::warn!(
            "rank decision for M^{power} is fragile: kept {:e}, dropped {:e}",
            w.smallest_kept,
            w.largest_dropped
        );
    }
    Ok(RankZeroAtom {
        mass: (dim - rank) as f64 / group_order as f64,
        rank,
        dim,
        zero_multiplicity: dim - rank,
        gap_warning,
    })
}

/// `exp((1/(2 dim)) sum_j log(sigma_j^2 + eps))`, the Fuglede-Kadison
/// determinant for the normalized trace. With `eps = 0` a vanishing singular
/// value gives 0.
pub fn fk_determinant(m: &DenseComplexMatrix, eps: f64) -> Result<f64> {
    Ok(fk_log_determinant(m, eps)?.exp())
}

/// Logarithm of [`fk_determinant`]; `-inf` for singular `m` at `eps = 0`.
pub fn fk_log_determinant(m: &DenseComplexMatrix, eps: f64) -> Result<f64> {
    let n = m.require_square()?;
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon {eps} is negative")));
    }
    let sum: f64 = singular_values(m)
        .iter()
        .map(|s| (s * s + eps).ln())
        .sum();
    Ok(sum / (2.0 * n as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LuckCheck {
    /// Product of `|lambda|` over the eigenvalues treated as nonzero.
    pub product: f64,
    pub log_product: f64,
    pub nonzero_count: usize,
    pub pass: bool,
}

/// Product of the moduli of eigenvalues with `|lambda| > tau`. For a matrix
/// with integer entries this is the modulus of the lowest nonvanishing
/// characteristic-polynomial coefficient, hence at least 1.
pub fn luck_product_check(m: &DenseComplexMatrix, tau: f64) -> Result<LuckCheck> {
    if !m.is_integer_valued() {
        return Err(Error::NotIntegral);
    }
    let eigs = eigenvalues(m)?;
    Ok(luck_product_from_eigenvalues(&eigs, |z| z.norm() > tau))
}

/// Variant that treats exactly the `zero_multiplicity` smallest-modulus
/// eigenvalues as zero, for use with a rank-certified multiplicity when
/// Jordan blocks are too large for a modulus threshold.
pub fn luck_product_excluding(
    m: &DenseComplexMatrix,
    zero_multiplicity: usize,
) -> Result<LuckCheck> {
    if !m.is_integer_valued() {
        return Err(Error::NotIntegral);
    }
    let mut eigs = eigenvalues(m)?;
    eigs.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let kept = &eigs[zero_multiplicity.min(eigs.len())..];
    Ok(luck_product_from_eigenvalues(kept, |_| true))
}

/// Lueck product over a precomputed spectrum, e.g. one from
/// [`deflated_eigenvalues`].
pub fn luck_product_of(eigs: &[Complex64], tau: f64) -> LuckCheck {
    luck_product_from_eigenvalues(eigs, |z| z.norm() > tau)
}

fn luck_product_from_eigenvalues(
    eigs: &[Complex64],
    keep: impl Fn(&Complex64) -> bool,
) -> LuckCheck {
    let logs: Vec<f64> = eigs.iter().filter(|z| keep(z)).map(|z| z.norm().ln()).collect();
    let log_product: f64 = logs.iter().sum();
    let slack = 10.0 * eigs.len() as f64 * f64::EPSILON * (1.0 + logs.iter().map(|l| l.abs()).sum::<f64>());
    let pass = log_product >= -slack;
    if !pass {
        log::info!("integrality diagnostic failed: log product {log_product:e}");
    }
    LuckCheck {
        product: log_product.exp(),
        log_product,
        nonzero_count: logs.len(),
        pass,
    }
}

/// Points `(lambda, mu(0 < |z| < lambda), mu(...) * |log lambda|)` of the
/// small-eigenvalue curve; eigenvalues of modulus `<= zero_tol` count as zero.
pub fn small_eigenvalue_curve(
    eigs: &[Complex64],
    group_order: u64,
    zero_tol: f64,
    lambdas: &[f64],
) -> Vec<(f64, f64, f64)> {
    lambdas
        .iter()
        .map(|&lambda| {
            let count = eigs
                .iter()
                .filter(|z| z.norm() > zero_tol && z.norm() < lambda)
                .count();
            let mass = count as f64 / group_order as f64;
            (lambda, mass, mass * lambda.ln().abs())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_gaussian_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_measure_on_unit_circle() {
        let mu = eigenvalue_measure(&DenseComplexMatrix::cyclic_shift(5), 5).unwrap();
        assert_eq!(mu.len(), 5);
        assert_eq!(mu.total_mass(), 1.0);
        for a in mu.atoms() {
            assert!((a.location.norm() - 1.0).abs() < 1e-13);
            assert_eq!(a.weight, 0.2);
        }
    }

    #[test]
    fn identity_measure_aggregates() {
        let mu = eigenvalue_measure(&DenseComplexMatrix::identity(4), 4).unwrap();
        let agg = mu.aggregated();
        assert_eq!(agg.len(), 1);
        assert_eq!(agg.atoms()[0].location, c(1.0, 0.0));
        assert_eq!(agg.atoms()[0].weight, 1.0);
    }

    #[test]
    fn total_mass_counts_dimension() {
        for (dim, order) in [(10usize, 5u64), (250, 125), (7, 3)] {
            let mu = measure_from_eigenvalues(&vec![c(0.3, 0.1); dim], order).unwrap();
            assert_eq!(mu.total_mass(), dim as f64 / order as f64);
        }
    }

    #[test]
    fn zero_atom_examples() {
        let j = DenseComplexMatrix::nilpotent_jordan(4);
        assert_eq!(zero_atom_numeric(&j, 4, 1e-8).unwrap(), 1.0);
        let s = DenseComplexMatrix::cyclic_shift(5);
        assert_eq!(zero_atom_numeric(&s, 5, 1e-8).unwrap(), 0.0);

        let r = zero_atom_rank(&j, 4, 4, DEFAULT_SVD_TOL).unwrap();
        assert_eq!((r.mass, r.rank), (1.0, 0));
        let r = zero_atom_rank(&DenseComplexMatrix::identity(6), 6, 1, DEFAULT_SVD_TOL).unwrap();
        assert_eq!((r.mass, r.rank, r.gap_warning), (0.0, 6, None));
        // K below the nilpotency index leaves part of the block visible
        let r = zero_atom_rank(&j, 4, 2, DEFAULT_SVD_TOL).unwrap();
        assert_eq!(r.zero_multiplicity, 2);
    }

    #[test]
    fn deflation_splits_jordan_block_from_simple_part() {
        // J_6 (+) diag(2, -1, i): naive solve smears the block to radius ~ulp^(1/6)
        let mut blocks = vec![DenseComplexMatrix::nilpotent_jordan(6)];
        blocks.push(DenseComplexMatrix::diagonal(&[c(2.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)]));
        let m = DenseComplexMatrix::block_diagonal(&blocks);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = crate::linalg::random_unitary(9, &mut rng);
        let m = u.matmul(&m).unwrap().matmul(&u.conj_transpose()).unwrap();
        let d = deflated_eigenvalues(&m, 6, DEFAULT_SVD_TOL).unwrap();
        assert_eq!(d.zero_multiplicity, 6);
        assert!(d.invariance_residual < 1e-12);
        let mut expected = vec![c(2.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)];
        expected.extend([c(0.0, 0.0); 6]);
        assert!(matching::matched_within(&d.eigenvalues, &expected, 1e-12));
        let naive = eigenvalues(&m).unwrap();
        assert!(!matching::matched_within(&naive, &expected, 1e-8));
    }

    #[test]
    fn deflation_of_zero_and_invertible() {
        let d = deflated_eigenvalues(&DenseComplexMatrix::zeros(3, 3), 1, DEFAULT_SVD_TOL).unwrap();
        assert_eq!(d.zero_multiplicity, 3);
        let d = deflated_eigenvalues(&DenseComplexMatrix::cyclic_shift(4), 2, DEFAULT_SVD_TOL).unwrap();
        assert_eq!(d.zero_multiplicity, 0);
        assert!(luck_product_of(&d.eigenvalues, 1e-3).pass);
    }

    #[test]
    fn gap_warning_fires_on_close_singular_values() {
        let d = DenseComplexMatrix::diagonal(&[c(1.0, 0.0), c(2e-10, 0.0), c(1e-10, 0.0)]);
        let (rank, warning) = numerical_rank(&d, 1.5e-10);
        assert_eq!(rank, 2);
        let w = warning.expect("2e-10 vs 1e-10 straddles the threshold");
        assert!((w.ratio - 2.0).abs() < 1e-6);
    }

    #[test]
    fn moments_of_roots_of_unity() {
        let m = 7;
        let pts: Vec<Complex64> = (0..m)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64))
            .collect();
        let mu = AtomicMeasure::from_points(&pts, 1.0 / m as f64).unwrap();
        let mom = mu.holomorphic_moments(m);
        for z in &mom[..m - 1] {
            assert!(z.norm() < 1e-14);
        }
        assert!((mom[m - 1] - c(1.0, 0.0)).norm() < 1e-14);

        let delta = AtomicMeasure::from_points(&[c(0.0, 0.0)], 1.0).unwrap();
        assert!(delta.holomorphic_moments(5).iter().all(|z| *z == c(0.0, 0.0)));
    }

    #[test]
    fn fk_examples() {
        assert!((fk_determinant(&DenseComplexMatrix::identity(3), 0.0).unwrap() - 1.0).abs() < 1e-15);
        let d = DenseComplexMatrix::diagonal(&[c(2.0, 0.0), c(0.5, 0.0)]);
        assert!((fk_determinant(&d, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let j = DenseComplexMatrix::nilpotent_jordan(5);
        assert_eq!(fk_determinant(&j, 0.0).unwrap(), 0.0);
        assert_eq!(fk_log_determinant(&j, 0.0).unwrap(), f64::NEG_INFINITY);
        assert!(fk_determinant(&j, 1e-6).unwrap() > 0.0);
        assert!(fk_determinant(&DenseComplexMatrix::zeros(2, 3), 0.0).is_err());
    }

    #[test]
    fn fk_is_root_of_abs_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [2usize, 5, 12] {
            let m = random_gaussian_matrix(n, &mut rng)
                .add(&DenseComplexMatrix::identity(n).scale(c(4.0, 0.0)))
                .unwrap();
            let det: Complex64 = eigenvalues(&m).unwrap().iter().product();
            let expected = det.norm().powf(1.0 / n as f64);
            let got = fk_determinant(&m, 0.0).unwrap();
            assert!((got - expected).abs() < 1e-8 * expected);
        }
    }

    #[test]
    fn luck_examples() {
        let r = luck_product_check(&DenseComplexMatrix::cyclic_shift(5), 1e-3).unwrap();
        assert!(r.pass && (r.product - 1.0).abs() < 1e-12);
        let r = luck_product_check(&DenseComplexMatrix::identity(3), 1e-3).unwrap();
        assert!(r.pass && r.product == 1.0);
        let half = DenseComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert_eq!(luck_product_check(&half, 1e-3), Err(Error::NotIntegral));
    }

    #[test]
    fn brown_measure_is_normalized_eigenvalue_measure() {
        let m = DenseComplexMatrix::from_real(3, 3, &[1.0, 2.0, 0.0, 0.0, 3.0, 1.0, 0.0, 0.0, -1.0]).unwrap();
        let mu = brown_measure(&m).unwrap();
        assert_eq!(mu.total_mass(), 1.0);
        assert!((mu.holomorphic_moments(1)[0] - m.trace() / 3.0).norm() < 1e-14);
    }

    #[test]
    fn json_roundtrip_and_csv_header() {
        let mu = AtomicMeasure::from_points(&[c(0.1, -2.0), c(1.0 / 3.0, 0.0)], 0.25).unwrap();
        let back = AtomicMeasure::from_json(&mu.to_json()).unwrap();
        assert_eq!(back, mu);
        assert!(mu.to_csv().starts_with("re,im,weight\n"));
        let bad = serde_json::json!({"atoms": [{"re": 0.0, "im": 0.0, "w": 1.0}], "total_mass": 2.0});
        assert!(AtomicMeasure::from_json(&bad).is_err());
    }

    #[test]
    fn small_eigenvalue_curve_counts_open_annulus() {
        let eigs = [c(0.0, 0.0), c(0.01, 0.0), c(0.0, 0.2), c(1.0, 0.0)];
        let curve = small_eigenvalue_curve(&eigs, 2, 1e-8, &[0.1, 0.5]);
        assert_eq!(curve[0].1, 0.5);
        assert_eq!(curve[1].1, 1.0);
        assert!((curve[1].2 - 0.5f64.ln().abs()).abs() < 1e-15);
    }
}
