//! Exact zero-atom mass of `a - b` on `H3(Z/p^m)`, from the irreducible
//! representation census and the scalar value of `rho((a - b)^n)`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;

use crate::arith::{gcd, is_prime};
use crate::error::{Error, Result};
use crate::quotient::IrrepSpec;

/// `rho_{k,r,s}((a - b)^n) = (1 - X)^d1 * Id` with the root of unity
/// `X = (-1)^(d2 + 1) * omega^((s - r) d2)`. The image is nilpotent iff
/// `X = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerScalar {
    pub spec: IrrepSpec,
    /// `(-1)^(d2 + 1)`.
    pub sign: i8,
    /// `(s - r) * d2 mod n`.
    pub exponent: u64,
    /// `X`.
    pub unit: Complex64,
    /// Decided in integer arithmetic.
    pub is_zero: bool,
    /// `(1 - X)^d1`; overflows to infinity for very large `d1`.
    pub value: Complex64,
    /// Set for even `d2`, where the zero criterion has no published proof.
    pub unverified: bool,
}

pub fn power_scalar(n: u64, k: u64, r: u64, s: u64) -> Result<PowerScalar> {
    Ok(power_scalar_of(&IrrepSpec::new(n, k, r, s)?))
}

pub fn power_scalar_of(spec: &IrrepSpec) -> PowerScalar {
    let n = spec.n() as i128;
    let d2 = spec.d2();
    let exponent = ((spec.s() as i128 - spec.r() as i128) * d2 as i128).rem_euclid(n) as u64;
    let sign: i8 = if d2 % 2 == 1 { 1 } else { -1 };
    // X = exp(pi i h / n) with h = 2E + [sign < 0] n, taken mod 2n
    let twice_n = 2 * spec.n() as u128;
    let half_turns = (2 * exponent as u128 + if sign < 0 { spec.n() as u128 } else { 0 }) % twice_n;
    let is_zero = half_turns == 0;
    let (unit, value) = if is_zero {
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        let unit = Complex64::from_polar(1.0, PI * half_turns as f64 / spec.n() as f64);
        let base = Complex64::new(1.0, 0.0) - unit;
        let d1 = spec.d1() as f64;
        (unit, Complex64::from_polar(base.norm().powf(d1), base.arg() * d1))
    };
    PowerScalar {
        spec: *spec,
        sign,
        exponent,
        unit,
        is_zero,
        value,
        unverified: d2.is_multiple_of(2),
    }
}

/// Exact zero-atom data for one level.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroAtomReport {
    pub p: u64,
    pub m: u32,
    /// Zero eigenvalues contributed by irreducibles of dimension > 1.
    pub s1: BigInt,
    /// Zero eigenvalues contributed by one-dimensional irreducibles.
    pub s2: BigInt,
    /// `(S1 + S2) / p^(3m)`.
    pub mass: BigRational,
    /// `p / (p + 1)`.
    pub limit: BigRational,
}

impl ZeroAtomReport {
    pub fn deviation(&self) -> BigRational {
        (&self.mass - &self.limit).abs()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "m": self.m,
            "S1": self.s1.to_string(),
            "S2": self.s2.to_string(),
            "mass": rational_string(&self.mass),
            "mass_decimal": to_f64(&self.mass),
            "limit": rational_string(&self.limit),
            "limit_decimal": to_f64(&self.limit),
            "deviation": rational_string(&self.deviation()),
            "deviation_decimal": to_f64(&self.deviation()),
        })
    }
}

/// `"num/den"`, with the denominator kept even when it is 1.
pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn big_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

fn check_odd_prime(p: u64, m: u32) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidParams("level must be >= 1".into()));
    }
    Ok(())
}

/// Closed-form census count, cross-checked against an enumeration of the
/// irreducible parameters when `p^m` is at most [`ENUMERATION_CAP`].
pub fn structural_zero_count(p: u64, m: u32) -> Result<ZeroAtomReport> {
    check_odd_prime(p, m)?;
    let n = p
        .checked_pow(m)
        .ok_or_else(|| Error::Overflow(format!("{p}^{m} exceeds 64 bits")))?;

    let mut s1 = BigInt::zero();
    for i in 0..m {
        let d2 = big_pow(p, m - i);
        let ks = &d2 - big_pow(p, m - i - 1);
        s1 += &d2 * &d2 * ks * big_pow(p, i);
    }
    let s2 = big_pow(p, m);
    let order = big_pow(p, 3 * m);
    let mass = BigRational::new(&s1 + &s2, order);
    let limit = BigRational::new(BigInt::from(p), BigInt::from(p + 1));

    if n <= ENUMERATION_CAP {
        let enumerated = enumerated_zero_multiplicity(n);
        if enumerated != &s1 + &s2 {
            return Err(Error::InvalidParams(format!(
                "census mismatch for p={p}, m={m}: closed form {} vs enumeration {enumerated}",
                &s1 + &s2
            )));
        }
    }
    Ok(ZeroAtomReport {
        p,
        m,
        s1,
        s2,
        mass,
        limit,
    })
}

/// Largest `p^m` for which the enumeration cross-check runs.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// `sum d2^2` over irreducibles whose `(a - b)^n` image vanishes. Zero-ness
/// depends on `k` only through `d1 = gcd(n, k)` and on `(r, s)` only through
/// `s - r`, so the enumeration runs over `k` and over the differences with
/// their pair counts `d1 - |delta|`.
pub fn enumerated_zero_multiplicity(n: u64) -> BigInt {
    let mut ks_by_d1: std::collections::BTreeMap<u64, u64> = Default::default();
    for k in 0..n {
        *ks_by_d1.entry(gcd(n, k)).or_default() += 1;
    }
    let mut total = BigInt::zero();
    for (&d1, &ks) in &ks_by_d1 {
        let k = if d1 == n { 0 } else { d1 };
        let d2 = n / d1;
        let mut zero_pairs: u128 = 0;
        for delta in -(d1 as i64 - 1)..(d1 as i64) {
            let (r, s) = if delta >= 0 { (0, delta as u64) } else { ((-delta) as u64, 0) };
            let spec = IrrepSpec::new(n, k, r, s).expect("parameters in range");
            if power_scalar_of(&spec).is_zero {
                zero_pairs += (d1 - delta.unsigned_abs()) as u128;
            }
        }
        total += BigInt::from(ks) * BigInt::from(zero_pairs) * BigInt::from(d2) * BigInt::from(d2);
    }
    total
}

/// One row of the convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRow {
    pub m: u32,
    pub mass: BigRational,
    pub deviation: BigRational,
}

pub fn zero_count_sequence(p: u64, levels: &[u32]) -> Result<Vec<SequenceRow>> {
    levels
        .iter()
        .map(|&m| {
            let r = structural_zero_count(p, m)?;
            Ok(SequenceRow {
                m,
                deviation: r.deviation(),
                mass: r.mass,
            })
        })
        .collect()
}

/// `|mass_m - p/(p+1)| = 1 / ((p + 1) p^(2m))`.
pub fn deviation_closed_form(p: u64, m: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(p + 1) * big_pow(p, 2 * m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::apply_irrep;
    use crate::group::GroupSpec;
    use crate::linalg::DenseComplexMatrix;
    use crate::ring::parse_element;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn power_scalar_examples() {
        let z = power_scalar(3, 1, 0, 0).unwrap();
        assert!(z.is_zero && !z.unverified);
        assert_eq!(z.value, Complex64::new(0.0, 0.0));

        let v = power_scalar(9, 3, 0, 1).unwrap();
        assert!(!v.is_zero);
        assert_eq!((v.sign, v.exponent), (1, 3));
        // X - 1 = omega^3 - 1 = exp(2 pi i / 3) - 1
        assert!((v.unit - 1.0 - Complex64::new(-1.5, 0.75f64.sqrt())).norm() < 1e-15);
        // d1 = 3: (1 - X)^3 = (sqrt(3) e^{-i pi/6})^3 = -3 sqrt(3) i
        assert!((v.value - Complex64::new(0.0, -27f64.sqrt())).norm() < 1e-13);

        for r in 0..3 {
            for s in 0..3 {
                // one-dimensional: rho(a - b)^3 = (omega^r - omega^s)^3
                let one_dim = power_scalar(3, 0, r, s).unwrap();
                assert_eq!(one_dim.is_zero, r == s);
                let direct = (crate::quotient::root_of_unity(r as i64, 3)
                    - crate::quotient::root_of_unity(s as i64, 3))
                .powi(3);
                assert!((one_dim.value - direct).norm() < 1e-13);
            }
        }
        assert!(power_scalar(9, 3, 3, 0).is_err());
    }

    #[test]
    fn even_dimension_flagged() {
        // n = 4, k = 1: d2 = 4, sign -1, never zero for r = s = 0
        let v = power_scalar(4, 1, 0, 0).unwrap();
        assert!(v.unverified && !v.is_zero);
        assert!((v.value - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        // n = 4, k = 2: d2 = 2, (s - r) d2 = 2 = n/2 makes -omega^2 = 1
        let v = power_scalar(4, 2, 0, 1).unwrap();
        assert!(v.unverified && v.is_zero);
    }

    /// Raise the irrep image of a - b to the n-th power numerically and
    /// compare with the scalar formula.
    #[test]
    fn power_scalar_matches_matrix_power() {
        let u = parse_element("a - b", &GroupSpec::heisenberg()).unwrap();
        for n in [3u64, 4, 6, 9, 25] {
            for spec in IrrepSpec::all(n).unwrap() {
                let ps = power_scalar_of(&spec);
                let rho = apply_irrep(&u, &spec).unwrap();
                let pow = rho.pow(n as u32).unwrap();
                let d = spec.d2() as usize;
                let expected = DenseComplexMatrix::identity(d).scale(ps.value);
                let err = pow.sub(&expected).unwrap().max_abs();
                assert!(err <= 1e-8 * (1.0 + ps.value.norm()), "{spec:?}: {err}");
            }
        }
    }

    #[test]
    fn odd_dimension_zero_iff_r_equals_s() {
        for n in [3u64, 9, 25, 27] {
            for spec in IrrepSpec::all(n).unwrap() {
                if spec.d2() % 2 == 1 {
                    assert_eq!(power_scalar_of(&spec).is_zero, spec.r() == spec.s(), "{spec:?}");
                }
            }
        }
    }

    #[test]
    fn census_values() {
        let r = structural_zero_count(3, 1).unwrap();
        assert_eq!((r.s1.clone(), r.s2.clone()), (BigInt::from(18), BigInt::from(3)));
        assert_eq!(r.mass, q(7, 9));
        assert_eq!(r.limit, q(3, 4));
        assert_eq!(structural_zero_count(3, 2).unwrap().mass, q(61, 81));
        assert_eq!(structural_zero_count(3, 3).unwrap().mass, q(547, 729));
        let r = structural_zero_count(5, 1).unwrap();
        assert_eq!(r.mass, q(21, 25));
        assert_eq!(r.limit, q(5, 6));
        assert_eq!(r.deviation(), q(1, 150));
    }

    #[test]
    fn closed_form_mass_formula() {
        // (1 - 1/p) sum_{i<m} p^(-2i) + p^(-2m)
        for p in [3u64, 5, 7, 11] {
            for m in 1..=3u32 {
                let pq = BigRational::from_integer(BigInt::from(p));
                let mut sum = BigRational::zero();
                for i in 0..m {
                    sum += num_traits::pow(pq.clone(), 2 * i as usize).recip();
                }
                let expected = (BigRational::one() - pq.clone().recip()) * sum
                    + num_traits::pow(pq.clone(), 2 * m as usize).recip();
                assert_eq!(structural_zero_count(p, m).unwrap().mass, expected);
            }
        }
    }

    #[test]
    fn enumeration_agrees_with_closed_form() {
        for p in [3u64, 5, 7, 11] {
            for m in 1..=3u32 {
                let r = structural_zero_count(p, m).unwrap();
                assert_eq!(enumerated_zero_multiplicity(p.pow(m)), &r.s1 + &r.s2);
                assert_eq!(r.s2, big_pow(p, m));
            }
        }
    }

    #[test]
    fn rejects_even_and_composite() {
        assert_eq!(structural_zero_count(2, 1), Err(Error::NotOddPrime(2)));
        assert_eq!(structural_zero_count(9, 1), Err(Error::NotOddPrime(9)));
        assert!(matches!(structural_zero_count(3, 60), Err(Error::Overflow(_))));
    }

    #[test]
    fn sequence_converges_geometrically() {
        let rows = zero_count_sequence(3, &[1, 2, 3, 4]).unwrap();
        assert_eq!(rows[0].mass, q(7, 9));
        assert_eq!(rows[1].mass, q(61, 81));
        assert_eq!(rows[2].mass, q(547, 729));
        for w in rows.windows(2) {
            assert_eq!(&w[1].deviation / &w[0].deviation, q(1, 9));
            assert!(w[1].mass < w[0].mass);
        }
        for p in [3u64, 5, 7] {
            for m in 1..=4 {
                assert_eq!(structural_zero_count(p, m).unwrap().deviation(), deviation_closed_form(p, m));
            }
        }
    }

    #[test]
    fn report_json() {
        let v = structural_zero_count(3, 2).unwrap().to_json();
        assert_eq!(v["mass"], "61/81");
        assert_eq!(v["limit"], "3/4");
        assert_eq!(v["S2"], "9");
        assert!((v["mass_decimal"].as_f64().unwrap() - 61.0 / 81.0).abs() < 1e-16);
    }
}
