//! Finite matrices attached to a group-ring matrix: the right regular
//! representation on a finite quotient and the irreducible representations
//! of `H3(Z/n)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Modulus, QuotientSpec};
use crate::linalg::{DenseComplexMatrix, DEFAULT_DENSE_CAP};
use crate::ring::{GroupRingElement, GroupRingMatrix};

/// Matrix of right multiplication by `a` on `C[G/N]^n`, basis ordered by
/// `(row of A, QuotientSpec::enumerate)`.
pub fn regular_rep_matrix(a: &GroupRingMatrix, q: &QuotientSpec) -> Result<DenseComplexMatrix> {
    regular_rep_matrix_with_cap(a, q, DEFAULT_DENSE_CAP)
}

pub fn regular_rep_matrix_with_cap(
    a: &GroupRingMatrix,
    q: &QuotientSpec,
    dense_cap: usize,
) -> Result<DenseComplexMatrix> {
    check_group(a.group(), q)?;
    let n = a.size();
    let dim = (n as u128).saturating_mul(q.order());
    if dim > dense_cap as u128 {
        return Err(Error::QuotientTooLarge {
            order: dim,
            cap: dense_cap as u128,
        });
    }
    let elements = q.enumerate(dense_cap as u128)?;
    let order = elements.len();

    let mut projected: BTreeMap<GroupElement, ()> = BTreeMap::new();
    for entry in a.entries() {
        for (g, _) in entry.terms() {
            projected.insert(q.project(g)?, ());
        }
    }
    let projected: Vec<GroupElement> = projected.into_keys().collect();
    let perms: Vec<Vec<usize>> = projected
        .par_iter()
        .map(|g| right_multiplication(&elements, g, q))
        .collect::<Result<_>>()?;
    let perm_of: BTreeMap<&GroupElement, &Vec<usize>> = projected.iter().zip(&perms).collect();

    let mut m = DenseComplexMatrix::zeros(n * order, n * order);
    for u in 0..n {
        for v in 0..n {
            for (g, &coef) in a.get(u, v).terms() {
                let perm = perm_of[&q.project(g)?];
                for (h, &hg) in perm.iter().enumerate() {
                    m[(u * order + h, v * order + hg)] += coef;
                }
            }
        }
    }
    Ok(m)
}

/// `perm[h] = index of h*g`.
fn right_multiplication(
    elements: &[GroupElement],
    g: &GroupElement,
    q: &QuotientSpec,
) -> Result<Vec<usize>> {
    elements
        .iter()
        .map(|h| q.index_of(&h.multiply(g)?))
        .collect()
}

fn check_group(group: &GroupSpec, q: &QuotientSpec) -> Result<()> {
    let ok = match (group, q) {
        (GroupSpec::Abelian(g), QuotientSpec::Abelian { group: h, .. }) => g == h,
        (GroupSpec::Heisenberg(Modulus::Infinite), QuotientSpec::Heisenberg { .. }) => true,
        (GroupSpec::Heisenberg(Modulus::Finite(m)), QuotientSpec::Heisenberg { .. }) => {
            m % q.heisenberg_modulus().expect("heisenberg") == 0
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::MismatchedGroup(format!(
            "matrix over C[{group}] on the quotient {q}"
        )))
    }
}

/// `exp(2 pi i e / n)`, exactly 1 when `n | e`.
pub fn root_of_unity(e: i64, n: u64) -> Complex64 {
    let e = e.rem_euclid(n as i64);
    if e == 0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * e as f64 / n as f64)
}

/// Parameters `(k, r, s)` of the irreducible representation `rho_{k,r,s}`
/// of `H3(Z/n)`: central character `omega^k`, dimension `d2 = n / gcd(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepSpec {
    n: u64,
    k: u64,
    r: u64,
    s: u64,
}

impl IrrepSpec {
    pub fn new(n: u64, k: u64, r: u64, s: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("modulus {n} must be >= 2")));
        }
        if k >= n {
            return Err(Error::InvalidParams(format!("k = {k} not in [0, {n})")));
        }
        let d1 = gcd(n, k);
        if r >= d1 || s >= d1 {
            return Err(Error::InvalidParams(format!(
                "r = {r}, s = {s} must lie in [0, {d1})"
            )));
        }
        Ok(Self { n, k, r, s })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    /// `gcd(n, k)`; note `gcd(n, 0) = n`.
    pub fn d1(&self) -> u64 {
        gcd(self.n, self.k)
    }

    /// Dimension of the representation.
    pub fn d2(&self) -> u64 {
        self.n / self.d1()
    }

    /// `omega^e` with `omega = exp(2 pi i / n)`.
    pub fn omega_pow(&self, e: i64) -> Complex64 {
        root_of_unity(e, self.n)
    }

    /// Every parameter triple for modulus `n`, ordered by `(k, r, s)`.
    pub fn all(n: u64) -> Result<Vec<Self>> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("modulus {n} must be >= 2")));
        }
        let mut out = Vec::new();
        for k in 0..n {
            let d1 = gcd(n, k);
            for r in 0..d1 {
                for s in 0..d1 {
                    out.push(Self { n, k, r, s });
                }
            }
        }
        Ok(out)
    }
}

/// Images of the generators `a`, `b`, `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepImages {
    pub a: DenseComplexMatrix,
    pub b: DenseComplexMatrix,
    pub c: DenseComplexMatrix,
}

pub fn heisenberg_irrep(spec: &IrrepSpec) -> IrrepImages {
    let d2 = spec.d2() as usize;
    let k = spec.k as i64;
    let a = if d2 == 1 {
        DenseComplexMatrix::diagonal(&[spec.omega_pow(spec.r as i64)])
    } else {
        DenseComplexMatrix::shift_with_corner(d2, spec.omega_pow((spec.r * spec.d2()) as i64))
    };
    let b_diag: Vec<Complex64> = (0..d2 as i64)
        .map(|j| spec.omega_pow(spec.s as i64 + j * k))
        .collect();
    let c = DenseComplexMatrix::identity(d2).scale(spec.omega_pow(k));
    IrrepImages {
        a,
        b: DenseComplexMatrix::diagonal(&b_diag),
        c,
    }
}

/// `rho(u) = sum_g u_g rho(g)` with `rho(x, y, z) = rho(a)^x rho(b)^y
/// rho(c)^(z - xy)`, from the factorization `(x, y, z) = a^x b^y c^(z - xy)`.
pub fn apply_irrep(u: &GroupRingElement, spec: &IrrepSpec) -> Result<DenseComplexMatrix> {
    let n = spec.n;
    match u.group() {
        GroupSpec::Heisenberg(Modulus::Infinite) => {}
        GroupSpec::Heisenberg(Modulus::Finite(m)) if m % n == 0 => {}
        other => {
            return Err(Error::MismatchedGroup(format!(
                "element of C[{other}] in a representation of H3(Z/{n})"
            )))
        }
    }
    let images = heisenberg_irrep(spec);
    let d2 = spec.d2() as usize;
    let mut out = DenseComplexMatrix::zeros(d2, d2);
    for (g, &coef) in u.terms() {
        let GroupElement::Heisenberg(h) = g else {
            unreachable!("element of a Heisenberg group ring");
        };
        let nn = n as i64;
        let (x, y, z) = (h.x().rem_euclid(nn), h.y().rem_euclid(nn), h.z().rem_euclid(nn));
        let z_prime = (z as i128 - x as i128 * y as i128).rem_euclid(nn as i128) as i64;
        let rho = images
            .a
            .pow(x as u32)?
            .matmul(&images.b.pow(y as u32)?)?
            .scale(spec.omega_pow(spec.k as i64 * z_prime));
        out.add_scaled(coef, &rho)?;
    }
    Ok(out)
}

/// One line of the irreducible-representation census of `H3(Z/p^m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub dimension: u128,
    /// Number of pairwise distinct irreducibles of this dimension.
    pub count: u128,
    /// Multiplicity of each in the regular representation.
    pub multiplicity: u128,
}

/// Irreducibles of `H3(Z/p^m)` grouped by dimension, largest first.
pub fn irrep_census(p: u64, m: u32) -> Result<Vec<CensusEntry>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidParams("level must be >= 1".into()));
    }
    let p = p as u128;
    let pow = |e: u32| {
        p.checked_pow(e)
            .ok_or_else(|| Error::Overflow(format!("{p}^{e}")))
    };
    pow(3 * m)?;
    let mut out = Vec::with_capacity(m as usize + 1);
    for i in 0..m {
        let dimension = pow(m - i)?;
        let count = (dimension - pow(m - i - 1)?) * pow(2 * i)?;
        out.push(CensusEntry {
            dimension,
            count,
            multiplicity: dimension,
        });
    }
    out.push(CensusEntry {
        dimension: 1,
        count: pow(2 * m)?,
        multiplicity: 1,
    });
    Ok(out)
}

/// Union over all irreducibles of the spectrum of `rho(u)`, each eigenvalue
/// repeated `d2` times: the spectrum of the regular representation.
pub fn spectrum_by_irreps(
    u: &GroupRingElement,
    n: u64,
    solve: impl Fn(&DenseComplexMatrix) -> Result<Vec<Complex64>> + Sync,
) -> Result<Vec<Complex64>> {
    let parts: Vec<Vec<Complex64>> = IrrepSpec::all(n)?
        .par_iter()
        .map(|spec| {
            let eigs = solve(&apply_irrep(u, spec)?)?;
            let d2 = spec.d2() as usize;
            Ok(eigs
                .iter()
                .flat_map(|&z| std::iter::repeat_n(z, d2))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(parts.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{AbelianGroupSpec, HeisenbergElement};
    use crate::linalg::eigenvalues;
    use crate::ring::{parse_element, parse_matrix};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn heis() -> GroupSpec {
        GroupSpec::heisenberg()
    }

    fn close(a: &DenseComplexMatrix, b: &DenseComplexMatrix, tol: f64) -> bool {
        a.sub(b).unwrap().max_abs() <= tol
    }

    #[test]
    fn generator_gives_shift_matrix() {
        let a = parse_matrix("[[g]]", &GroupSpec::integers()).unwrap();
        for m in [2u64, 5, 8] {
            let rep = regular_rep_matrix(&a, &QuotientSpec::cyclic(m).unwrap()).unwrap();
            assert_eq!(rep, DenseComplexMatrix::cyclic_shift(m as usize));
        }
    }

    #[test]
    fn identity_gives_identity() {
        let q = QuotientSpec::heisenberg(3, 1).unwrap();
        let one = GroupRingMatrix::identity(heis(), 1);
        assert_eq!(regular_rep_matrix(&one, &q).unwrap(), DenseComplexMatrix::identity(27));
    }

    #[test]
    fn a_minus_b_rows() {
        let u = parse_element("a - b", &heis()).unwrap();
        let q = QuotientSpec::heisenberg(3, 1).unwrap();
        let m = regular_rep_matrix(&GroupRingMatrix::from_element(u), &q).unwrap();
        assert_eq!(m.rows(), 27);
        assert!(m.is_integer_valued());
        for i in 0..27 {
            let row = m.row(i);
            assert_eq!(row.iter().filter(|z| z.re == 1.0).count(), 1);
            assert_eq!(row.iter().filter(|z| z.re == -1.0).count(), 1);
            assert_eq!(row.iter().filter(|z| z.re == 0.0).count(), 25);
        }
    }

    #[test]
    fn intro_matrix_block_structure() {
        let a = parse_matrix("[[g^2+3*g, 4],[g^3, -g^4+g]]", &GroupSpec::integers()).unwrap();
        let m = regular_rep_matrix(&a, &QuotientSpec::cyclic(5).unwrap()).unwrap();
        assert_eq!(m.rows(), 10);
        let s = DenseComplexMatrix::cyclic_shift(5);
        let block = |u: usize, v: usize| DenseComplexMatrix::from_fn(5, 5, |i, j| m[(5 * u + i, 5 * v + j)]);
        let s2 = s.pow(2).unwrap();
        let expected00 = s2.add(&s.scale(Complex64::new(3.0, 0.0))).unwrap();
        assert_eq!(block(0, 0), expected00);
        assert_eq!(block(0, 1), DenseComplexMatrix::identity(5).scale(Complex64::new(4.0, 0.0)));
        assert_eq!(block(1, 0), s.pow(3).unwrap());
        assert_eq!(block(1, 1), s.sub(&s.pow(4).unwrap()).unwrap());
    }

    #[test]
    fn dense_cap_and_group_checks() {
        let a = parse_matrix("[[g]]", &GroupSpec::integers()).unwrap();
        let big = QuotientSpec::cyclic(5000).unwrap();
        assert!(matches!(
            regular_rep_matrix(&a, &big),
            Err(Error::QuotientTooLarge { .. })
        ));
        let q = QuotientSpec::heisenberg(3, 1).unwrap();
        assert!(matches!(regular_rep_matrix(&a, &q), Err(Error::MismatchedGroup(_))));
    }

    #[test]
    fn permutation_trace_detects_kernel() {
        let q = QuotientSpec::heisenberg(3, 1).unwrap();
        for (x, y, z) in [(0, 0, 0), (3, 6, -3), (1, 0, 0), (0, 0, 1), (3, 1, 0)] {
            let g = GroupElement::Heisenberg(HeisenbergElement::new(x, y, z, Modulus::Infinite));
            let u = GroupRingElement::monomial(heis(), g.clone(), Complex64::new(1.0, 0.0)).unwrap();
            let m = regular_rep_matrix(&GroupRingMatrix::from_element(u), &q).unwrap();
            let in_kernel = q.project(&g).unwrap().is_identity();
            assert_eq!(m.trace().re, if in_kernel { 27.0 } else { 0.0 });
        }
    }

    #[test]
    fn regular_rep_is_multiplicative() {
        let g = heis();
        let q = QuotientSpec::heisenberg(3, 1).unwrap();
        let u = parse_element("2a - b^2*c + (0,1)", &g).unwrap();
        let v = parse_element("a^-1*b + 3c^2", &g).unwrap();
        let rep = |w: &GroupRingElement| {
            regular_rep_matrix(&GroupRingMatrix::from_element(w.clone()), &q).unwrap()
        };
        let lhs = rep(&u.ring_multiply(&v).unwrap());
        let rhs = rep(&u).matmul(&rep(&v)).unwrap();
        assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn torsion_quotient() {
        let spec = Arc::new(AbelianGroupSpec::new(1, vec![2]).unwrap());
        let group = GroupSpec::Abelian(spec.clone());
        let q = QuotientSpec::abelian(spec, vec![3]).unwrap();
        let u = parse_element("g2", &group).unwrap();
        let m = regular_rep_matrix(&GroupRingMatrix::from_element(u), &q).unwrap();
        assert_eq!(m.rows(), 6);
        assert_eq!(m.pow(2).unwrap(), DenseComplexMatrix::identity(6));
        assert_eq!(m.trace().re, 0.0);
    }

    #[test]
    fn irrep_examples() {
        let spec = IrrepSpec::new(3, 1, 0, 0).unwrap();
        let w = spec.omega_pow(1);
        let im = heisenberg_irrep(&spec);
        assert_eq!(im.a, DenseComplexMatrix::cyclic_shift(3));
        assert!(close(&im.b, &DenseComplexMatrix::diagonal(&[Complex64::new(1.0, 0.0), w, w * w]), 1e-15));
        assert!(close(&im.c, &DenseComplexMatrix::identity(3).scale(w), 0.0));

        let spec = IrrepSpec::new(5, 0, 2, 4).unwrap();
        let im = heisenberg_irrep(&spec);
        assert_eq!(spec.d2(), 1);
        assert_eq!(im.a[(0, 0)], root_of_unity(2, 5));
        assert_eq!(im.b[(0, 0)], root_of_unity(4, 5));
        assert_eq!(im.c[(0, 0)], Complex64::new(1.0, 0.0));

        assert!(IrrepSpec::new(9, 3, 3, 0).is_err());
        assert!(IrrepSpec::new(9, 9, 0, 0).is_err());
    }

    fn check_relations(spec: &IrrepSpec) {
        let im = heisenberg_irrep(spec);
        let n = spec.n() as u32;
        let d = spec.d2() as usize;
        let id = DenseComplexMatrix::identity(d);
        assert!(close(&im.a.pow(n).unwrap(), &id, 1e-12), "{spec:?}");
        assert!(close(&im.b.pow(n).unwrap(), &id, 1e-12), "{spec:?}");
        let comm = im
            .a
            .inverse()
            .unwrap()
            .matmul(&im.b.inverse().unwrap())
            .unwrap()
            .matmul(&im.a)
            .unwrap()
            .matmul(&im.b)
            .unwrap();
        assert!(close(&comm, &im.c, 1e-12), "{spec:?}");
        assert!(close(&im.c.matmul(&im.a).unwrap(), &im.a.matmul(&im.c).unwrap(), 1e-14));
    }

    #[test]
    fn irrep_relations() {
        for n in [3u64, 4, 9, 25] {
            for spec in IrrepSpec::all(n).unwrap() {
                check_relations(&spec);
            }
        }
        let spec = IrrepSpec::new(9, 3, 1, 2).unwrap();
        let im = heisenberg_irrep(&spec);
        let comm = im.a.inverse().unwrap().matmul(&im.b.inverse().unwrap()).unwrap()
            .matmul(&im.a).unwrap().matmul(&im.b).unwrap();
        let w3 = DenseComplexMatrix::identity(3).scale(spec.omega_pow(3));
        assert!(close(&comm, &w3, 1e-13));
    }

    #[test]
    fn apply_irrep_examples() {
        let g = heis();
        for spec in IrrepSpec::all(9).unwrap() {
            let c = apply_irrep(&parse_element("c", &g).unwrap(), &spec).unwrap();
            let d = spec.d2() as usize;
            assert!(close(&c, &DenseComplexMatrix::identity(d).scale(spec.omega_pow(spec.k() as i64)), 1e-15));
            let one = apply_irrep(&GroupRingElement::one(g.clone()), &spec).unwrap();
            assert_eq!(one, DenseComplexMatrix::identity(d));
        }
        let spec = IrrepSpec::new(3, 1, 0, 0).unwrap();
        let m = apply_irrep(&parse_element("a - b", &g).unwrap(), &spec).unwrap();
        assert!(m.pow(3).unwrap().max_abs() < 1e-14);
    }

    proptest! {
        // rho is a homomorphism: rho(gh) = rho(g) rho(h) for all group elements
        #[test]
        fn apply_irrep_is_multiplicative(
            n_idx in 0usize..3,
            x1 in -20i64..20, y1 in -20i64..20, z1 in -20i64..20,
            x2 in -20i64..20, y2 in -20i64..20, z2 in -20i64..20,
            pick in 0usize..1000,
        ) {
            let n = [3u64, 4, 9][n_idx];
            let all = IrrepSpec::all(n).unwrap();
            let spec = all[pick % all.len()];
            let g = heis();
            let mono = |x, y, z| GroupRingElement::monomial(
                g.clone(),
                GroupElement::Heisenberg(HeisenbergElement::new(x, y, z, Modulus::Infinite)),
                Complex64::new(1.0, 0.0),
            ).unwrap();
            let u = mono(x1, y1, z1);
            let v = mono(x2, y2, z2);
            let lhs = apply_irrep(&u.ring_multiply(&v).unwrap(), &spec).unwrap();
            let rhs = apply_irrep(&u, &spec).unwrap().matmul(&apply_irrep(&v, &spec).unwrap()).unwrap();
            prop_assert!(close(&lhs, &rhs, 1e-11));
        }
    }

    #[test]
    fn census_examples() {
        let c = irrep_census(3, 1).unwrap();
        assert_eq!(
            c,
            vec![
                CensusEntry { dimension: 3, count: 2, multiplicity: 3 },
                CensusEntry { dimension: 1, count: 9, multiplicity: 1 },
            ]
        );
        let c = irrep_census(5, 1).unwrap();
        assert_eq!((c[0].dimension, c[0].count, c[1].count), (5, 4, 25));
        for (p, m) in [(3u64, 1u32), (3, 2), (5, 1), (7, 1), (2, 3), (11, 3)] {
            let total: u128 = irrep_census(p, m).unwrap().iter().map(|e| e.count * e.dimension * e.dimension).sum();
            assert_eq!(total, (p as u128).pow(3 * m));
        }
        assert_eq!(irrep_census(9, 1), Err(Error::NotPrime(9)));
        assert!(matches!(irrep_census(1_000_003, 10), Err(Error::Overflow(_))));
    }

    #[test]
    fn census_matches_parameter_enumeration() {
        for (p, m) in [(3u64, 1u32), (3, 2), (5, 2), (2, 3)] {
            let n = p.pow(m);
            let mut by_dim: BTreeMap<u128, u128> = BTreeMap::new();
            for spec in IrrepSpec::all(n).unwrap() {
                *by_dim.entry(spec.d2() as u128).or_default() += 1;
            }
            for e in irrep_census(p, m).unwrap() {
                assert_eq!(by_dim[&e.dimension], e.count, "p={p} m={m} dim={}", e.dimension);
            }
        }
    }

    #[test]
    fn irrep_union_matches_regular_rep_on_normal_element() {
        // a + a^-1 + b + b^-1 is self-adjoint, so both spectra are well conditioned
        let g = heis();
        let u = parse_element("a + a^-1 + b + b^-1", &g).unwrap();
        let q = QuotientSpec::heisenberg(3, 1).unwrap();
        let reg = eigenvalues(&regular_rep_matrix(&GroupRingMatrix::from_element(u.clone()), &q).unwrap()).unwrap();
        let irr = spectrum_by_irreps(&u, 3, eigenvalues).unwrap();
        assert!(crate::spectra::matching::matched_within(&reg, &irr, 1e-10));
    }
}
