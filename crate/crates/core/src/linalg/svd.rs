use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DenseComplexMatrix;

/// Singular values in descending order.
pub fn singular_values(m: &DenseComplexMatrix) -> Vec<f64> {
    let (r, c) = (m.rows(), m.cols());
    let mut sv: Vec<f64> = if m.is_real() {
        DMatrix::<f64>::from_row_iterator(r, c, m.data().iter().map(|z| z.re))
            .singular_values()
            .iter()
            .copied()
            .collect()
    } else {
        DMatrix::<Complex64>::from_row_iterator(r, c, m.data().iter().copied())
            .singular_values()
            .iter()
            .copied()
            .collect()
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Orthonormal basis (as columns) of the span of the left singular vectors
/// whose singular values exceed `cutoff`, together with all singular values
/// in descending order. `None` when nothing is kept.
pub fn range_basis(m: &DenseComplexMatrix, cutoff: f64) -> (Option<DenseComplexMatrix>, Vec<f64>) {
    let (r, c) = (m.rows(), m.cols());
    let (u, sv): (Vec<Complex64>, Vec<f64>) = if m.is_real() {
        let svd = DMatrix::<f64>::from_row_iterator(r, c, m.data().iter().map(|z| z.re)).svd(true, false);
        let u = svd.u.expect("requested");
        (
            u.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            svd.singular_values.iter().copied().collect(),
        )
    } else {
        let svd = DMatrix::<Complex64>::from_row_iterator(r, c, m.data().iter().copied()).svd(true, false);
        let u = svd.u.expect("requested");
        (u.iter().copied().collect(), svd.singular_values.iter().copied().collect())
    };
    // nalgebra storage is column-major: column j of u is u[j*r..(j+1)*r]
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let kept: Vec<usize> = order.iter().copied().filter(|&j| sv[j] > cutoff).collect();
    let sorted: Vec<f64> = order.iter().map(|&j| sv[j]).collect();
    let q = (!kept.is_empty())
        .then(|| DenseComplexMatrix::from_fn(r, kept.len(), |i, k| u[kept[k] * r + i]));
    (q, sorted)
}
