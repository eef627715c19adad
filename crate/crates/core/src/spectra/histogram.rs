//! Gaussian-smoothed 2D histograms of atomic measures and their L1 distance.
//!
//! This is a desk-scale proxy for weak convergence: both measures are smoothed
//! onto the same grid, normalized to probability vectors and compared in L1,
//! so distances lie in `[0, 2]`.

use serde::{Deserialize, Serialize};

use super::AtomicMeasure;

pub const DEFAULT_CELLS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    /// The grid covers `[-radius, radius]^2`.
    pub radius: f64,
    /// Cells per axis.
    pub cells: usize,
}

impl HistogramSpec {
    /// Box enclosing the disk of radius `1 + norm_bound`, padded by 10%.
    pub fn for_norm_bound(norm_bound: f64, cells: usize) -> Self {
        Self {
            radius: (1.0 + norm_bound) * 1.1,
            cells,
        }
    }

    fn cell_width(&self) -> f64 {
        2.0 * self.radius / self.cells as f64
    }

    /// Twice the box diagonal divided by the number of cells per axis.
    pub fn bandwidth(&self) -> f64 {
        2.0 * (2.0 * std::f64::consts::SQRT_2 * self.radius) / self.cells as f64
    }

    /// Row-major `cells x cells` probability vector (imaginary part selects
    /// the row).
    pub fn histogram(&self, mu: &AtomicMeasure) -> Vec<f64> {
        let n = self.cells;
        let w = self.cell_width();
        let h = self.bandwidth();
        let reach = 4.0 * h;
        let inv2h2 = 1.0 / (2.0 * h * h);
        let center = |k: usize| -self.radius + (k as f64 + 0.5) * w;
        let index_range = |x: f64| {
            let lo = ((x - reach + self.radius) / w).floor().max(0.0) as usize;
            let hi = ((x + reach + self.radius) / w).ceil().min(n as f64);
            let hi = if hi < 0.0 { 0 } else { hi as usize };
            lo..hi.max(lo)
        };
        let mut grid = vec![0.0; n * n];
        for atom in mu.atoms() {
            let (x, y) = (atom.location.re, atom.location.im);
            for row in index_range(y) {
                let dy = center(row) - y;
                for col in index_range(x) {
                    let dx = center(col) - x;
                    let d2 = dx * dx + dy * dy;
                    if d2 <= reach * reach {
                        grid[row * n + col] += atom.weight * (-d2 * inv2h2).exp();
                    }
                }
            }
        }
        let total: f64 = grid.iter().sum();
        if total > 0.0 {
            grid.iter_mut().for_each(|v| *v /= total);
        }
        grid
    }

    pub fn distance(&self, mu: &AtomicMeasure, nu: &AtomicMeasure) -> f64 {
        self.histogram(mu)
            .iter()
            .zip(self.histogram(nu))
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn delta(z: Complex64) -> AtomicMeasure {
        AtomicMeasure::from_points(&[z], 1.0).unwrap()
    }

    #[test]
    fn identical_measures_are_at_distance_zero() {
        let spec = HistogramSpec::for_norm_bound(1.0, 32);
        let mu = AtomicMeasure::from_points(
            &[Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)],
            0.5,
        )
        .unwrap();
        assert_eq!(spec.distance(&mu, &mu), 0.0);
        let hist = spec.histogram(&mu);
        assert!((hist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distance_grows_with_separation() {
        let spec = HistogramSpec::for_norm_bound(2.0, 64);
        let o = delta(Complex64::new(0.0, 0.0));
        let near = spec.distance(&o, &delta(Complex64::new(0.1, 0.0)));
        let far = spec.distance(&o, &delta(Complex64::new(2.0, 0.0)));
        assert!(0.0 < near && near < far && far <= 2.0);
    }

    #[test]
    fn mass_normalization() {
        // same shape, different total mass: distance zero
        let spec = HistogramSpec::for_norm_bound(1.0, 16);
        let a = AtomicMeasure::from_points(&[Complex64::new(0.5, 0.5)], 1.0).unwrap();
        let b = AtomicMeasure::from_points(&[Complex64::new(0.5, 0.5)], 2.0).unwrap();
        assert!(spec.distance(&a, &b) < 1e-15);
    }
}
