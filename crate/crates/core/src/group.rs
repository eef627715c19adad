//! The two supported group families and their finite quotients.
//!
//! Finitely generated abelian groups `Z^k x Z/t_1 x ... x Z/t_l` are stored as
//! exponent vectors. The Heisenberg group `H3(R)`, `R = Z` or `Z/nZ`, is stored
//! through the three free entries of the upper unitriangular matrix
//!
//! ```text
//! [1 x z]
//! [0 1 y]
//! [0 0 1]
//! ```
//!
//! so that `(x1,y1,z1)(x2,y2,z2) = (x1+x2, y1+y2, z1+z2+x1*y2)`. The generators
//! are `a = (1,0,0)`, `b = (0,1,0)` and the central commutator `c = (0,0,1)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the order of an enumerated quotient.
pub const DEFAULT_QUOTIENT_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    rank: usize,
    torsion_orders: Vec<u64>,
}

impl AbelianGroupSpec {
    pub fn new(rank: usize, torsion_orders: Vec<u64>) -> Result<Self> {
        if rank + torsion_orders.len() == 0 {
            return Err(Error::InvalidGroup(
                "abelian group needs at least one generator".into(),
            ));
        }
        if let Some(t) = torsion_orders.iter().find(|&&t| t < 2) {
            return Err(Error::InvalidGroup(format!("torsion order {t} is < 2")));
        }
        Ok(Self {
            rank,
            torsion_orders,
        })
    }

    /// The infinite cyclic group.
    pub fn integers() -> Self {
        Self {
            rank: 1,
            torsion_orders: Vec::new(),
        }
    }

    pub fn free_abelian(rank: usize) -> Result<Self> {
        Self::new(rank, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion_orders(&self) -> &[u64] {
        &self.torsion_orders
    }

    /// Free generators first, then torsion generators.
    pub fn num_generators(&self) -> usize {
        self.rank + self.torsion_orders.len()
    }
}

impl fmt::Display for AbelianGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        for t in &self.torsion_orders {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join("x"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianElement {
    spec: Arc<AbelianGroupSpec>,
    free: Vec<i64>,
    torsion: Vec<u64>,
}

impl AbelianElement {
    pub fn new(spec: Arc<AbelianGroupSpec>, free: Vec<i64>, torsion: Vec<i64>) -> Result<Self> {
        if free.len() != spec.rank || torsion.len() != spec.torsion_orders.len() {
            return Err(Error::MismatchedGroup(format!(
                "element with {} free and {} torsion coordinates does not belong to {spec}",
                free.len(),
                torsion.len()
            )));
        }
        let torsion = torsion
            .iter()
            .zip(&spec.torsion_orders)
            .map(|(&r, &t)| r.rem_euclid(t as i64) as u64)
            .collect();
        Ok(Self {
            spec,
            free,
            torsion,
        })
    }

    pub fn identity(spec: Arc<AbelianGroupSpec>) -> Self {
        let free = vec![0; spec.rank];
        let torsion = vec![0; spec.torsion_orders.len()];
        Self {
            spec,
            free,
            torsion,
        }
    }

    /// The `j`-th generator, counting free generators first.
    pub fn generator(spec: Arc<AbelianGroupSpec>, j: usize) -> Result<Self> {
        if j >= spec.num_generators() {
            return Err(Error::InvalidGroup(format!(
                "generator index {j} out of range for {spec}"
            )));
        }
        let mut g = Self::identity(spec);
        if j < g.free.len() {
            g.free[j] = 1;
        } else {
            let t = j - g.free.len();
            g.torsion[t] = 1 % g.spec.torsion_orders[t];
        }
        Ok(g)
    }

    pub fn spec(&self) -> &Arc<AbelianGroupSpec> {
        &self.spec
    }

    pub fn free_exponents(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion_residues(&self) -> &[u64] {
        &self.torsion
    }

    /// Exponent of generator `j` (free generators first).
    pub fn exponent(&self, j: usize) -> i64 {
        if j < self.free.len() {
            self.free[j]
        } else {
            self.torsion[j - self.free.len()] as i64
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let free = self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect();
        let torsion = self
            .torsion
            .iter()
            .zip(&other.torsion)
            .zip(&self.spec.torsion_orders)
            .map(|((a, b), t)| (a + b) % t)
            .collect();
        Ok(Self {
            spec: self.spec.clone(),
            free,
            torsion,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            spec: self.spec.clone(),
            free: self.free.iter().map(|a| -a).collect(),
            torsion: self
                .torsion
                .iter()
                .zip(&self.spec.torsion_orders)
                .map(|(a, t)| (t - a) % t)
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.free.iter().all(|&a| a == 0) && self.torsion.iter().all(|&a| a == 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::MismatchedGroup(format!(
                "{} vs {}",
                self.spec, other.spec
            )))
        }
    }
}

/// Coefficient ring of the Heisenberg group: `Z` or `Z/nZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Modulus {
    Infinite,
    Finite(u64),
}

impl Modulus {
    pub fn finite(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGroup(format!("Heisenberg modulus {n} is < 2")));
        }
        Ok(Modulus::Finite(n))
    }

    fn reduce(self, v: i64) -> i64 {
        match self {
            Modulus::Infinite => v,
            Modulus::Finite(n) => v.rem_euclid(n as i64),
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Infinite => write!(f, "H3(Z)"),
            Modulus::Finite(n) => write!(f, "H3(Z/{n})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisenbergElement {
    x: i64,
    y: i64,
    z: i64,
    modulus: Modulus,
}

impl HeisenbergElement {
    pub fn new(x: i64, y: i64, z: i64, modulus: Modulus) -> Self {
        Self {
            x: modulus.reduce(x),
            y: modulus.reduce(y),
            z: modulus.reduce(z),
            modulus,
        }
    }

    pub fn identity(modulus: Modulus) -> Self {
        Self::new(0, 0, 0, modulus)
    }

    pub fn a(modulus: Modulus) -> Self {
        Self::new(1, 0, 0, modulus)
    }

    pub fn b(modulus: Modulus) -> Self {
        Self::new(0, 1, 0, modulus)
    }

    pub fn c(modulus: Modulus) -> Self {
        Self::new(0, 0, 1, modulus)
    }

    pub fn x(&self) -> i64 {
        self.x
    }

    pub fn y(&self) -> i64 {
        self.y
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::MismatchedGroup(format!(
                "{} vs {}",
                self.modulus, other.modulus
            )));
        }
        Ok(Self::new(
            self.x + other.x,
            self.y + other.y,
            self.z + other.z + self.x * other.y,
            self.modulus,
        ))
    }

    pub fn inverse(&self) -> Self {
        // (x,y,z)^-1 = (-x, -y, xy - z)
        Self::new(-self.x, -self.y, self.x * self.y - self.z, self.modulus)
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { *self };
        let mut acc = Self::identity(self.modulus);
        for _ in 0..e.unsigned_abs() {
            acc = acc.multiply(&base).expect("same modulus");
        }
        acc
    }

    /// Image under `H3(Z) -> H3(Z/nZ)` (or `H3(Z/N) -> H3(Z/n)` when `n | N`).
    pub fn reduce(&self, n: u64) -> Result<Self> {
        let target = Modulus::finite(n)?;
        match self.modulus {
            Modulus::Finite(m) if m % n != 0 => Err(Error::MismatchedGroup(format!(
                "H3(Z/{m}) does not surject onto H3(Z/{n})"
            ))),
            _ => Ok(Self::new(self.x, self.y, self.z, target)),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.y == 0 && self.z == 0
    }
}

/// A group from one of the supported families.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Abelian(Arc<AbelianGroupSpec>),
    Heisenberg(Modulus),
}

impl GroupSpec {
    pub fn abelian(spec: AbelianGroupSpec) -> Self {
        GroupSpec::Abelian(Arc::new(spec))
    }

    pub fn integers() -> Self {
        Self::abelian(AbelianGroupSpec::integers())
    }

    pub fn heisenberg() -> Self {
        GroupSpec::Heisenberg(Modulus::Infinite)
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::Abelian(s) => GroupElement::Abelian(AbelianElement::identity(s.clone())),
            GroupSpec::Heisenberg(m) => GroupElement::Heisenberg(HeisenbergElement::identity(*m)),
        }
    }
}

/// Accepts the `Display` forms: `Z`, `Z^k`, `Z/t` joined by `x`, and
/// `H3(Z)` (also `H3`, `heisenberg`) or `H3(Z/n)`.
impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidGroup(format!("cannot parse group {text:?}"));
        match compact.as_str() {
            "H3" | "H3(Z)" | "heisenberg" => return Ok(GroupSpec::heisenberg()),
            _ => {}
        }
        if let Some(n) = compact.strip_prefix("H3(Z/").and_then(|r| r.strip_suffix(')')) {
            let n = n.parse().map_err(|_| bad())?;
            return Ok(GroupSpec::Heisenberg(Modulus::finite(n)?));
        }
        let mut rank = 0;
        let mut torsion = Vec::new();
        for part in compact.split(['x', '\u{d7}']) {
            if part == "Z" {
                rank += 1;
            } else if let Some(k) = part.strip_prefix("Z^") {
                rank += k.parse::<usize>().map_err(|_| bad())?;
            } else if let Some(t) = part.strip_prefix("Z/") {
                torsion.push(t.parse().map_err(|_| bad())?);
            } else {
                return Err(bad());
            }
        }
        Ok(GroupSpec::abelian(AbelianGroupSpec::new(rank, torsion)?))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Abelian(s) => write!(f, "{s}"),
            GroupSpec::Heisenberg(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Abelian(AbelianElement),
    Heisenberg(HeisenbergElement),
}

impl GroupElement {
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (GroupElement::Abelian(g), GroupElement::Abelian(h)) => {
                g.multiply(h).map(GroupElement::Abelian)
            }
            (GroupElement::Heisenberg(g), GroupElement::Heisenberg(h)) => {
                g.multiply(h).map(GroupElement::Heisenberg)
            }
            _ => Err(Error::MismatchedGroup(
                "abelian element times Heisenberg element".into(),
            )),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::Abelian(g) => GroupElement::Abelian(g.inverse()),
            GroupElement::Heisenberg(g) => GroupElement::Heisenberg(g.inverse()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Abelian(g) => g.is_identity(),
            GroupElement::Heisenberg(g) => g.is_identity(),
        }
    }

    pub fn group(&self) -> GroupSpec {
        match self {
            GroupElement::Abelian(g) => GroupSpec::Abelian(g.spec.clone()),
            GroupElement::Heisenberg(g) => GroupSpec::Heisenberg(g.modulus),
        }
    }
}

impl fmt::Display for GroupElement {
    /// Monomial notation accepted by the expression parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors: Vec<String> = Vec::new();
        let mut push = |name: String, e: i64| match e {
            0 => {}
            1 => factors.push(name),
            e => factors.push(format!("{name}^{e}")),
        };
        match self {
            GroupElement::Abelian(g) => {
                let single = g.spec.num_generators() == 1;
                for j in 0..g.spec.num_generators() {
                    let name = if single {
                        "g".to_string()
                    } else {
                        format!("g{}", j + 1)
                    };
                    push(name, g.exponent(j));
                }
            }
            GroupElement::Heisenberg(g) => {
                // (x, y, z) = a^x b^y c^(z - xy)
                push("a".into(), g.x);
                push("b".into(), g.y);
                let zc = g.modulus.reduce(g.z - g.x * g.y);
                push("c".into(), zc);
            }
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

/// A finite quotient `G / N` with `N` from one of the supported chains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuotientSpec {
    /// `Z^k x T -> Z/m_1 x ... x Z/m_k x T`, torsion untouched.
    Abelian {
        group: Arc<AbelianGroupSpec>,
        moduli: Vec<u64>,
    },
    /// `H3(Z) -> H3(Z/p^level)`.
    Heisenberg { p: u64, level: u32 },
}

impl QuotientSpec {
    pub fn abelian(group: Arc<AbelianGroupSpec>, moduli: Vec<u64>) -> Result<Self> {
        if moduli.len() != group.rank() {
            return Err(Error::InvalidQuotient(format!(
                "{} moduli given for rank {}",
                moduli.len(),
                group.rank()
            )));
        }
        if moduli.contains(&0) {
            return Err(Error::InvalidQuotient("moduli must be positive".into()));
        }
        Ok(QuotientSpec::Abelian { group, moduli })
    }

    /// `Z -> Z/m`.
    pub fn cyclic(m: u64) -> Result<Self> {
        Self::abelian(Arc::new(AbelianGroupSpec::integers()), vec![m])
    }

    pub fn heisenberg(p: u64, level: u32) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if level == 0 {
            return Err(Error::InvalidQuotient("Heisenberg level must be >= 1".into()));
        }
        p.checked_pow(level)
            .ok_or_else(|| Error::Overflow(format!("{p}^{level}")))?;
        Ok(QuotientSpec::Heisenberg { p, level })
    }

    /// The group the quotient is taken of.
    pub fn group(&self) -> GroupSpec {
        match self {
            QuotientSpec::Abelian { group, .. } => GroupSpec::Abelian(group.clone()),
            QuotientSpec::Heisenberg { .. } => GroupSpec::Heisenberg(Modulus::Infinite),
        }
    }

    /// Coordinate radices in enumeration order.
    fn radices(&self) -> Vec<u64> {
        match self {
            QuotientSpec::Abelian { group, moduli } => moduli
                .iter()
                .chain(group.torsion_orders())
                .copied()
                .collect(),
            QuotientSpec::Heisenberg { p, level } => vec![p.pow(*level); 3],
        }
    }

    pub fn order(&self) -> u128 {
        self.radices()
            .iter()
            .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
            .unwrap_or(u128::MAX)
    }

    /// `p^level` for Heisenberg quotients.
    pub fn heisenberg_modulus(&self) -> Option<u64> {
        match self {
            QuotientSpec::Heisenberg { p, level } => Some(p.pow(*level)),
            _ => None,
        }
    }

    /// Canonical coset representative of `g`.
    pub fn project(&self, g: &GroupElement) -> Result<GroupElement> {
        match (self, g) {
            (QuotientSpec::Abelian { group, moduli }, GroupElement::Abelian(e)) => {
                if **group != **e.spec() {
                    return Err(Error::MismatchedGroup(format!(
                        "element of {} projected to a quotient of {group}",
                        e.spec()
                    )));
                }
                let free = e
                    .free
                    .iter()
                    .zip(moduli)
                    .map(|(&a, &m)| a.rem_euclid(m as i64))
                    .collect();
                Ok(GroupElement::Abelian(AbelianElement {
                    spec: e.spec.clone(),
                    free,
                    torsion: e.torsion.clone(),
                }))
            }
            (QuotientSpec::Heisenberg { .. }, GroupElement::Heisenberg(e)) => {
                let n = self.heisenberg_modulus().expect("heisenberg");
                e.reduce(n).map(GroupElement::Heisenberg)
            }
            _ => Err(Error::MismatchedGroup(format!(
                "element of {} projected to a quotient of {}",
                g.group(),
                self.group()
            ))),
        }
    }

    fn coordinates(g: &GroupElement) -> Vec<u64> {
        match g {
            GroupElement::Abelian(e) => e
                .free
                .iter()
                .map(|&a| a as u64)
                .chain(e.torsion.iter().copied())
                .collect(),
            GroupElement::Heisenberg(e) => vec![e.x as u64, e.y as u64, e.z as u64],
        }
    }

    /// Position of `g` in the enumeration order of [`Self::enumerate`].
    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        let projected = self.project(g)?;
        let coords = Self::coordinates(&projected);
        let index = coords
            .iter()
            .zip(self.radices())
            .fold(0u128, |acc, (&c, r)| acc * r as u128 + c as u128);
        Ok(index as usize)
    }

    /// All elements in lexicographic order of coordinates, identity first.
    pub fn enumerate(&self, cap: u128) -> Result<Vec<GroupElement>> {
        let order = self.order();
        if order > cap {
            return Err(Error::QuotientTooLarge { order, cap });
        }
        let radices = self.radices();
        let mut out = Vec::with_capacity(order as usize);
        let mut coords = vec![0u64; radices.len()];
        for _ in 0..order {
            out.push(self.element_from_coordinates(&coords));
            for j in (0..coords.len()).rev() {
                coords[j] += 1;
                if coords[j] < radices[j] {
                    break;
                }
                coords[j] = 0;
            }
        }
        Ok(out)
    }

    fn element_from_coordinates(&self, coords: &[u64]) -> GroupElement {
        match self {
            QuotientSpec::Abelian { group, .. } => {
                let k = group.rank();
                GroupElement::Abelian(AbelianElement {
                    spec: group.clone(),
                    free: coords[..k].iter().map(|&c| c as i64).collect(),
                    torsion: coords[k..].to_vec(),
                })
            }
            QuotientSpec::Heisenberg { .. } => {
                let n = self.heisenberg_modulus().expect("heisenberg");
                GroupElement::Heisenberg(HeisenbergElement::new(
                    coords[0] as i64,
                    coords[1] as i64,
                    coords[2] as i64,
                    Modulus::Finite(n),
                ))
            }
        }
    }
}

impl fmt::Display for QuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientSpec::Abelian { group, moduli } => {
                let m: Vec<String> = moduli.iter().map(|m| m.to_string()).collect();
                write!(f, "{group} mod ({})", m.join(","))
            }
            QuotientSpec::Heisenberg { p, level } => write!(f, "H3(Z/{p}^{level})"),
        }
    }
}
