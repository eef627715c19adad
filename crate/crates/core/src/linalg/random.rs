use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::DenseComplexMatrix;

pub fn random_gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseComplexMatrix {
    let mut m = DenseComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    m
}

/// Haar-distributed unitary: Gram-Schmidt (applied twice) on a complex
/// Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseComplexMatrix {
    let g = random_gaussian_matrix(n, rng);
    // work on columns
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[k];
                let proj: Complex64 = q.iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in rest[0].iter_mut().zip(q) {
                    *x -= proj * a;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut q = DenseComplexMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            q[(i, j)] = z;
        }
    }
    q
}
