//! The complex group ring `C[G]` and matrices over it.

pub mod parse;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

pub use parse::{parse_element, parse_matrix, ParseError};

/// A finitely supported formal sum `sum_g u_g g`.
///
/// Coefficients equal to exactly zero are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRingElement {
    group: GroupSpec,
    terms: BTreeMap<GroupElement, Complex64>,
}

/// Letter of a `*`-word: `u` itself or its adjoint `u*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Letter {
    Plain,
    Star,
}

impl GroupRingElement {
    pub fn zero(group: GroupSpec) -> Self {
        Self {
            group,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(group: GroupSpec) -> Self {
        let e = group.identity();
        Self::monomial(group, e, Complex64::new(1.0, 0.0)).expect("identity belongs to its group")
    }

    pub fn scalar(group: GroupSpec, c: Complex64) -> Self {
        let e = group.identity();
        Self::monomial(group, e, c).expect("identity belongs to its group")
    }

    pub fn monomial(group: GroupSpec, g: GroupElement, c: Complex64) -> Result<Self> {
        Self::from_terms(group, [(g, c)])
    }

    /// Sums the given terms, merging repeated group elements.
    pub fn from_terms<I>(group: GroupSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, Complex64)>,
    {
        let mut out = Self::zero(group);
        for (g, c) in terms {
            if g.group() != out.group {
                return Err(Error::MismatchedGroup(format!(
                    "term over {} in an element of C[{}]",
                    g.group(),
                    out.group
                )));
            }
            out.add_term(g, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, g: GroupElement, c: Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        // exact cancellation only, no tolerance
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                if c != zero {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == zero {
                    o.remove();
                }
            }
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Complex64)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &GroupElement) -> Complex64 {
        self.terms.get(g).copied().unwrap_or_default()
    }

    /// True when every coefficient is a (real) integer.
    pub fn is_integral(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.im == 0.0 && c.re.fract() == 0.0)
    }

    /// Sum of `|u_g|`, a bound for the operator norm of right multiplication.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    fn check_group(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::MismatchedGroup(format!(
                "C[{}] vs C[{}]",
                self.group, other.group
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.group.clone());
        for (g, v) in &self.terms {
            out.add_term(g.clone(), v * c);
        }
        out
    }

    /// Convolution product: `(uv)_g = sum_h u_h v_{h^-1 g}`.
    pub fn ring_multiply(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let mut out = Self::zero(self.group.clone());
        for (g, u) in &self.terms {
            for (h, v) in &other.terms {
                out.add_term(g.multiply(h)?, u * v);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(self.group.clone());
        for _ in 0..n {
            acc = acc.ring_multiply(self)?;
        }
        Ok(acc)
    }

    /// The involution `(u*)_g = conj(u_{g^-1})`.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.group.clone());
        for (g, c) in &self.terms {
            out.add_term(g.inverse(), c.conj());
        }
        out
    }

    /// Canonical trace: the coefficient of the identity.
    pub fn trace(&self) -> Complex64 {
        self.coefficient(&self.group.identity())
    }

    /// Trace of the product of `u` / `u*` along `word`, left to right.
    pub fn star_moment(&self, word: &[Letter]) -> Result<Complex64> {
        if word.is_empty() {
            return Err(Error::InvalidArgument("empty *-word".into()));
        }
        let adjoint = self.star();
        let mut acc = Self::one(self.group.clone());
        for letter in word {
            let factor = match letter {
                Letter::Plain => self,
                Letter::Star => &adjoint,
            };
            acc = acc.ring_multiply(factor)?;
        }
        Ok(acc.trace())
    }
}

fn fmt_real(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for GroupRingElement {
    /// Renders in the expression grammar accepted by [`parse_element`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            let mono = if g.is_identity() {
                None
            } else {
                Some(g.to_string())
            };
            let (negative, coef) = if c.im == 0.0 {
                let neg = c.re.is_sign_negative();
                let mag = c.re.abs();
                let text = match (&mono, mag == 1.0) {
                    (Some(_), true) => String::new(),
                    _ => fmt_real(mag),
                };
                (neg, text)
            } else {
                (false, format!("({},{})", fmt_real(c.re), fmt_real(c.im)))
            };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match mono {
                Some(m) if coef.is_empty() => write!(f, "{m}")?,
                Some(m) => write!(f, "{coef}*{m}")?,
                None => write!(f, "{coef}")?,
            }
        }
        Ok(())
    }
}

/// An `n x n` matrix over `C[G]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRingMatrix {
    group: GroupSpec,
    n: usize,
    entries: Vec<GroupRingElement>,
}

impl GroupRingMatrix {
    /// `entries` in row-major order.
    pub fn new(group: GroupSpec, n: usize, entries: Vec<GroupRingElement>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix size must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.group != group) {
            return Err(Error::MismatchedGroup(format!(
                "entry over C[{}] in a matrix over C[{group}]",
                e.group
            )));
        }
        Ok(Self { group, n, entries })
    }

    pub fn from_element(u: GroupRingElement) -> Self {
        Self {
            group: u.group.clone(),
            n: 1,
            entries: vec![u],
        }
    }

    pub fn identity(group: GroupSpec, n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    GroupRingElement::one(group.clone())
                } else {
                    GroupRingElement::zero(group.clone())
                }
            })
            .collect();
        Self { group, n, entries }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[GroupRingElement] {
        &self.entries
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(GroupRingElement::is_integral)
    }

    /// Maximum over rows of the summed `l1` norms; bounds every eigenvalue of
    /// every finite-quotient image and of every torus evaluation.
    pub fn row_norm_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).l1_norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        if self.group != other.group {
            return Err(Error::MismatchedGroup(format!(
                "C[{}] vs C[{}]",
                self.group, other.group
            )));
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = GroupRingElement::zero(self.group.clone());
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).ring_multiply(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Self {
            group: self.group.clone(),
            n,
            entries,
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::identity(self.group.clone(), self.n);
        for _ in 0..e {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Conjugate transpose with `*` applied entrywise.
    pub fn star(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| self.get(k % n, k / n).star())
            .collect();
        Self {
            group: self.group.clone(),
            n,
            entries,
        }
    }

    /// `sum_i Tr_G(A_ii)`.
    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i).trace()).sum()
    }

    pub fn star_moment(&self, word: &[Letter]) -> Result<Complex64> {
        if word.is_empty() {
            return Err(Error::InvalidArgument("empty *-word".into()));
        }
        let adjoint = self.star();
        let mut acc = Self::identity(self.group.clone(), self.n);
        for letter in word {
            acc = acc.multiply(match letter {
                Letter::Plain => self,
                Letter::Star => &adjoint,
            })?;
        }
        Ok(acc.trace())
    }
}

impl fmt::Display for GroupRingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{AbelianElement, AbelianGroupSpec, HeisenbergElement, Modulus};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn heis() -> GroupSpec {
        GroupSpec::heisenberg()
    }

    fn t_pow(spec: &Arc<AbelianGroupSpec>, e: i64) -> GroupElement {
        GroupElement::Abelian(AbelianElement::new(spec.clone(), vec![e], vec![]).unwrap())
    }

    #[test]
    fn a_minus_b_squared() {
        let u = parse_element("a - b", &heis()).unwrap();
        let sq = u.ring_multiply(&u).unwrap();
        assert_eq!(sq.support_len(), 4);
        let m = Modulus::Infinite;
        let (a, b) = (HeisenbergElement::a(m), HeisenbergElement::b(m));
        let ab = GroupElement::Heisenberg(a.multiply(&b).unwrap());
        let ba = GroupElement::Heisenberg(b.multiply(&a).unwrap());
        assert_ne!(ab, ba);
        assert_eq!(sq.coefficient(&ab), c(-1.0));
        assert_eq!(sq.coefficient(&ba), c(-1.0));
        assert_eq!(sq.coefficient(&GroupElement::Heisenberg(a.pow(2))), c(1.0));
        assert_eq!(sq.coefficient(&GroupElement::Heisenberg(b.pow(2))), c(1.0));
    }

    #[test]
    fn one_plus_t_times_one_minus_t() {
        let z = GroupSpec::integers();
        let u = parse_element("1 + g", &z).unwrap();
        let v = parse_element("1 - g", &z).unwrap();
        let w = u.ring_multiply(&v).unwrap();
        assert_eq!(w, parse_element("1 - g^2", &z).unwrap());
        assert_eq!(u.ring_multiply(&GroupRingElement::one(z)).unwrap(), u);
    }

    #[test]
    fn star_examples() {
        let z = GroupSpec::integers();
        let spec = match &z {
            GroupSpec::Abelian(s) => s.clone(),
            _ => unreachable!(),
        };
        let u = parse_element("3*g", &z).unwrap();
        let expected = GroupRingElement::monomial(z.clone(), t_pow(&spec, -1), c(3.0)).unwrap();
        assert_eq!(u.star(), expected);

        let u = parse_element("(2,1)*a", &heis()).unwrap();
        let ainv = GroupElement::Heisenberg(HeisenbergElement::a(Modulus::Infinite).inverse());
        let expected =
            GroupRingElement::monomial(heis(), ainv, Complex64::new(2.0, -1.0)).unwrap();
        assert_eq!(u.star(), expected);
    }

    #[test]
    fn trace_examples() {
        let u = parse_element("2 + 3*a - b", &heis()).unwrap();
        assert_eq!(u.trace(), c(2.0));
        assert_eq!(parse_element("a - b", &heis()).unwrap().trace(), c(0.0));
        let z = GroupSpec::integers();
        let u = parse_element("g^-1", &z)
            .unwrap()
            .ring_multiply(&parse_element("g", &z).unwrap())
            .unwrap();
        assert_eq!(u.trace(), c(1.0));
    }

    #[test]
    fn star_moment_examples() {
        use Letter::*;
        let z = GroupSpec::integers();
        let t = parse_element("g", &z).unwrap();
        assert_eq!(t.star_moment(&[Plain, Star]).unwrap(), c(1.0));
        assert_eq!(t.star_moment(&[Plain, Plain]).unwrap(), c(0.0));
        let u = parse_element("a - b", &heis()).unwrap();
        assert_eq!(u.star_moment(&[Plain, Star]).unwrap(), c(2.0));
        assert!(u.star_moment(&[]).is_err());
    }

    #[test]
    fn exact_cancellation_prunes() {
        let z = GroupSpec::integers();
        let u = parse_element("g + 2 - g", &z).unwrap();
        assert_eq!(u.support_len(), 1);
        let zero = u.sub(&u).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.to_string(), "0");
    }

    #[test]
    fn integrality_flag() {
        let z = GroupSpec::integers();
        assert!(parse_element("g^2 + 3*g", &z).unwrap().is_integral());
        assert!(!parse_element("0.5*g", &z).unwrap().is_integral());
        assert!(!parse_element("(1,1)*g", &z).unwrap().is_integral());
    }

    #[test]
    fn matrix_trace_and_star() {
        let z = GroupSpec::integers();
        let m = parse_matrix("[[g^2+3*g, 4],[g^3, -g^4+g]]", &z).unwrap();
        assert!(m.is_integral());
        assert_eq!(m.trace(), c(0.0));
        let p = m.multiply(&m.star()).unwrap();
        // ||row 1||^2 + ||row 2||^2 in l2(G)
        assert_eq!(p.trace(), c(1.0 + 9.0 + 16.0 + 1.0 + 1.0 + 1.0));
        assert_eq!(m.row_norm_bound(), 8.0);
    }

    fn arb_element() -> impl Strategy<Value = GroupRingElement> {
        proptest::collection::vec(
            ((-3i64..4, -3i64..4, -3i64..4), (-4i32..5, -4i32..5)),
            0..5,
        )
        .prop_map(|terms| {
            GroupRingElement::from_terms(
                heis(),
                terms.into_iter().map(|((x, y, z), (re, im))| {
                    (
                        GroupElement::Heisenberg(HeisenbergElement::new(x, y, z, Modulus::Infinite)),
                        Complex64::new(re as f64, im as f64),
                    )
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn trace_is_tracial(u in arb_element(), v in arb_element()) {
            let uv = u.ring_multiply(&v).unwrap().trace();
            let vu = v.ring_multiply(&u).unwrap().trace();
            prop_assert_eq!(uv, vu);
        }

        #[test]
        fn trace_positivity(u in arb_element()) {
            let t = u.ring_multiply(&u.star()).unwrap().trace();
            let norm2: f64 = u.terms().map(|(_, c)| c.norm_sqr()).sum();
            prop_assert_eq!(t.im, 0.0);
            prop_assert_eq!(t.re, norm2);
        }

        #[test]
        fn star_is_involutive_antihomomorphism(u in arb_element(), v in arb_element()) {
            prop_assert_eq!(u.star().star(), u.clone());
            let lhs = u.ring_multiply(&v).unwrap().star();
            let rhs = v.star().ring_multiply(&u.star()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn star_moment_matches_expansion(
            u in arb_element(),
            word in proptest::collection::vec(prop_oneof![Just(Letter::Plain), Just(Letter::Star)], 1..5),
        ) {
            let mut acc = GroupRingElement::one(heis());
            for l in &word {
                let f = match l { Letter::Plain => u.clone(), Letter::Star => u.star() };
                acc = acc.ring_multiply(&f).unwrap();
            }
            prop_assert_eq!(u.star_moment(&word).unwrap(), acc.trace());
        }

        #[test]
        fn format_reparses(u in arb_element()) {
            let text = u.to_string();
            let back = parse_element(&text, &heis()).unwrap();
            prop_assert_eq!(back, u);
        }
    }
}
