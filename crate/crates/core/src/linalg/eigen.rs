//! Eigenvalues of general complex matrices: Householder reduction to upper
//! Hessenberg form followed by single-shift complex QR iteration with
//! Wilkinson shifts, in the style of LAPACK's `zlahqr` (eigenvalues only).

use num_complex::Complex64;

use super::{DenseComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Largest dimension accepted by the dense eigensolver.
pub const DEFAULT_DENSE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenConfig {
    pub dense_cap: usize,
    /// QR sweeps allowed per unit of dimension before giving up.
    pub iterations_per_dim: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            dense_cap: DEFAULT_DENSE_CAP,
            iterations_per_dim: 30,
        }
    }
}

/// All eigenvalues, repeated by algebraic multiplicity, in deflation order.
pub fn eigenvalues(m: &DenseComplexMatrix) -> Result<Vec<Complex64>> {
    eigenvalues_with(m, &EigenConfig::default())
}

pub fn eigenvalues_with(m: &DenseComplexMatrix, cfg: &EigenConfig) -> Result<Vec<Complex64>> {
    let n = m.require_square()?;
    if n > cfg.dense_cap {
        return Err(Error::DimensionTooLarge {
            dim: n,
            cap: cfg.dense_cap,
        });
    }
    let mut h = m.data().to_vec();
    hessenberg(&mut h, n);
    hessenberg_qr(&mut h, n, cfg.iterations_per_dim.saturating_mul(n).max(30))
}

#[inline]
fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// In-place unitary similarity to upper Hessenberg form.
fn hessenberg(a: &mut [Complex64], n: usize) {
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    let mut s = vec![ZERO; n];
    for k in 0..n - 2 {
        let tail_norm2: f64 = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum();
        if tail_norm2 == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let norm = (x0.norm_sqr() + tail_norm2).sqrt();
        let phase = if x0 == ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        // v = x - alpha e1, stored in v[k+1..n]
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = a[i * n + k];
        }
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // left: A[k+1.., k..] -= tau v (v^H A)
        for sj in &mut s[k..n] {
            *sj = ZERO;
        }
        for i in k + 1..n {
            let vi = v[i].conj();
            let row = &a[i * n + k..i * n + n];
            for (sj, aij) in s[k..n].iter_mut().zip(row) {
                *sj += vi * aij;
            }
        }
        for i in k + 1..n {
            let f = v[i] * tau;
            let row = &mut a[i * n + k..i * n + n];
            for (aij, sj) in row.iter_mut().zip(&s[k..n]) {
                *aij -= f * sj;
            }
        }
        // right: A[.., k+1..] -= tau (A v) v^H
        for i in 0..n {
            let row = &mut a[i * n + k + 1..i * n + n];
            let dot: Complex64 = row.iter().zip(&v[k + 1..n]).map(|(x, y)| x * y).sum();
            let f = dot * tau;
            for (aij, vj) in row.iter_mut().zip(&v[k + 1..n]) {
                *aij -= f * vj.conj();
            }
        }
        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = ZERO;
        }
    }
}

/// Eigenvalues of a 2x2 block `[[a, b], [c, d]]`.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half = Complex64::new(0.5, 0.0);
    let mean = (a + d) * half;
    let t = (a - d) * half;
    let disc = (t * t + b * c).sqrt();
    let (l1, l2) = (mean + disc, mean - disc);
    // recover the smaller root from the determinant to avoid cancellation
    let det = a * d - b * c;
    if l1.norm() >= l2.norm() {
        let l2 = if l1 != ZERO { det / l1 } else { l2 };
        (l1, l2)
    } else {
        let l1 = if l2 != ZERO { det / l2 } else { l1 };
        (l1, l2)
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let t = (a - d) * 0.5;
    let bc = b * c;
    let disc = (t * t + bc).sqrt();
    let (p, m) = (t + disc, t - disc);
    let den = if p.norm() >= m.norm() { p } else { m };
    if den == ZERO {
        d
    } else {
        d - bc / den
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G [x; y] = [r; 0]`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let nrm = ax.hypot(ay);
    (ax / nrm, (x / ax) * y.conj() / nrm)
}

fn hessenberg_qr(h: &mut [Complex64], n: usize, max_iter: usize) -> Result<Vec<Complex64>> {
    let ulp = f64::EPSILON;
    let safmin = f64::MIN_POSITIVE;
    let smlnum = safmin * (n as f64 / ulp);
    let at = |h: &[Complex64], i: usize, j: usize| h[i * n + j];

    let mut eig = Vec::with_capacity(n);
    let mut total = 0usize;
    let mut hi = n as isize - 1;
    let mut its = 0usize;

    while hi >= 0 {
        let hiu = hi as usize;
        // locate the active unreduced block [l, hi]
        let mut l = hiu;
        while l > 0 {
            let sub = abs1(at(h, l, l - 1));
            if sub <= smlnum {
                break;
            }
            let mut tst = abs1(at(h, l - 1, l - 1)) + abs1(at(h, l, l));
            if tst == 0.0 {
                if l >= 2 {
                    tst += at(h, l - 1, l - 2).re.abs();
                }
                if l < hiu {
                    tst += at(h, l + 1, l).re.abs();
                }
            }
            if sub <= ulp * tst {
                break;
            }
            l -= 1;
        }
        if l > 0 {
            h[l * n + l - 1] = ZERO;
        }

        if l == hiu {
            eig.push(at(h, hiu, hiu));
            hi -= 1;
            its = 0;
            continue;
        }
        if l + 1 == hiu {
            let (e1, e2) = eig2(
                at(h, l, l),
                at(h, l, hiu),
                at(h, hiu, l),
                at(h, hiu, hiu),
            );
            eig.push(e1);
            eig.push(e2);
            hi -= 2;
            its = 0;
            continue;
        }

        total += 1;
        if total > max_iter {
            return Err(Error::NoConvergence { iterations: total });
        }
        its += 1;

        let shift = if its % 20 == 10 {
            at(h, l, l) + 0.75 * at(h, l + 1, l).re.abs()
        } else if its.is_multiple_of(20) {
            at(h, hiu, hiu) + 0.75 * at(h, hiu, hiu - 1).re.abs()
        } else {
            wilkinson_shift(
                at(h, hiu - 1, hiu - 1),
                at(h, hiu - 1, hiu),
                at(h, hiu, hiu - 1),
                at(h, hiu, hiu),
            )
        };

        // implicit single-shift sweep over [l, hi]
        for k in l..hiu {
            let (x, y) = if k == l {
                (at(h, l, l) - shift, at(h, l + 1, l))
            } else {
                (at(h, k, k - 1), at(h, k + 1, k - 1))
            };
            let (c, s) = givens(x, y);
            let sc = s.conj();
            let jstart = if k == l { l } else { k - 1 };
            for j in jstart..=hiu {
                let a = h[k * n + j];
                let b = h[(k + 1) * n + j];
                h[k * n + j] = a * c + s * b;
                h[(k + 1) * n + j] = b * c - sc * a;
            }
            if k > l {
                h[(k + 1) * n + k - 1] = ZERO;
            }
            let iend = (k + 2).min(hiu);
            for i in l..=iend {
                let a = h[i * n + k];
                let b = h[i * n + k + 1];
                h[i * n + k] = a * c + b * sc;
                h[i * n + k + 1] = b * c - a * s;
            }
        }
    }
    Ok(eig)
}
