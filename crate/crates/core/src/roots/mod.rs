//! Exact root-datum combinatorics for split groups of type A and B.
//!
//! Characters and cocharacters both live in `ℤ^rank` with the standard
//! pairing. Rational vectors use arbitrary-precision rationals throughout.

mod chamber;
mod fixtures;
mod hypotheses;
pub(crate) mod linalg;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::SimpleSubset;

pub use chamber::{
    chamber_contains, chamber_involution_certificate, chamber_samples, CertificateReport,
    StructuralWitness,
};
pub use fixtures::{fixtures, siegel, Fixture};
pub use hypotheses::{
    check_involution_conditions, modulus_character, verify_modulus_identity, HypothesisReport,
};

pub const HYPOTHESIS_SCHEMA: &str = "signlab.hypothesis-report/1";
pub const CERTIFICATE_SCHEMA: &str = "signlab.chamber-certificate/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootFamily {
    A,
    B,
}

impl fmt::Display for RootFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootFamily::A => "A",
            RootFamily::B => "B",
        })
    }
}

impl FromStr for RootFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(RootFamily::A),
            "B" | "b" => Ok(RootFamily::B),
            other => Err(Error::Precondition(format!(
                "unknown root family {other:?}"
            ))),
        }
    }
}

/// A split root datum on `X = ℤ^rank`.
///
/// Roots are stored as the positive roots followed by their negatives in the
/// same order, so root `i` and root `(i + |Φ⁺|) mod |Φ|` are opposite.
#[derive(Debug, Clone)]
pub struct RootDatum {
    family: RootFamily,
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    num_positive: usize,
    simple: Vec<usize>,
    /// Coordinates of every root in the basis `Δ`.
    simple_coords: Vec<Vec<i64>>,
    lookup: HashMap<Vec<i64>, usize>,
}

fn unit(rank: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; rank];
    v[i] = c;
    v
}

fn combine(rank: usize, terms: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; rank];
    for &(i, c) in terms {
        v[i] += c;
    }
    v
}

impl RootDatum {
    /// The root datum of `GL_n`: roots `ε_i − ε_j`, simple roots `ε_i − ε_{i+1}`.
    pub fn type_a(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank {
                rank: n,
                reason: "type A needs n ≥ 2",
            });
        }
        let mut positive = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                positive.push(combine(n, &[(i, 1), (j, -1)]));
            }
        }
        let simple: Vec<Vec<i64>> = (0..n - 1)
            .map(|i| combine(n, &[(i, 1), (i + 1, -1)]))
            .collect();
        let coroots = positive.clone();
        Self::assemble(RootFamily::A, n, positive, coroots, &simple)
    }

    /// The root datum of `SO_{2n+1}`: roots `±ε_i ± ε_j` and `±ε_i`, simple
    /// roots `ε_1 − ε_2, …, ε_{n−1} − ε_n, ε_n`. Long coroots equal their
    /// roots; the short root `ε_i` has coroot `2ε_i`.
    pub fn type_b(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidRank {
                rank: n,
                reason: "type B needs n ≥ 1",
            });
        }
        let mut positive = Vec::new();
        let mut coroots = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for s in [-1, 1] {
                    let r = combine(n, &[(i, 1), (j, s)]);
                    coroots.push(r.clone());
                    positive.push(r);
                }
            }
        }
        for i in 0..n {
            positive.push(unit(n, i, 1));
            coroots.push(unit(n, i, 2));
        }
        let mut simple: Vec<Vec<i64>> = (0..n - 1)
            .map(|i| combine(n, &[(i, 1), (i + 1, -1)]))
            .collect();
        simple.push(unit(n, n - 1, 1));
        Self::assemble(RootFamily::B, n, positive, coroots, &simple)
    }

    pub fn build(family: RootFamily, rank: usize) -> Result<Self> {
        match family {
            RootFamily::A => Self::type_a(rank),
            RootFamily::B => Self::type_b(rank),
        }
    }

    fn assemble(
        family: RootFamily,
        rank: usize,
        positive: Vec<Vec<i64>>,
        positive_coroots: Vec<Vec<i64>>,
        simple: &[Vec<i64>],
    ) -> Result<Self> {
        let num_positive = positive.len();
        let negate = |v: &Vec<i64>| v.iter().map(|x| -x).collect::<Vec<i64>>();
        let roots: Vec<Vec<i64>> = positive
            .iter()
            .cloned()
            .chain(positive.iter().map(negate))
            .collect();
        let coroots: Vec<Vec<i64>> = positive_coroots
            .iter()
            .cloned()
            .chain(positive_coroots.iter().map(negate))
            .collect();
        let lookup: HashMap<Vec<i64>, usize> = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        let simple_idx = simple
            .iter()
            .map(|s| {
                lookup
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::Consistency("simple root is not a root".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        // Expand every root in Δ; the system has full column rank.
        let columns: Vec<Vec<BigRational>> = (0..rank)
            .map(|c| {
                simple
                    .iter()
                    .map(|s| BigRational::from_integer(s[c].into()))
                    .collect()
            })
            .collect();
        let simple_coords = roots
            .iter()
            .map(|r| {
                let x = linalg::solve(&columns, &linalg::to_rational(r))
                    .ok_or_else(|| Error::Consistency("root outside the span of Δ".into()))?;
                x.iter()
                    .map(|c| {
                        c.is_integer()
                            .then(|| i64::try_from(c.to_integer()).ok())
                            .flatten()
                            .ok_or_else(|| {
                                Error::Consistency("non-integral simple-root coordinate".into())
                            })
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<i64>>>>()?;
        let datum = RootDatum {
            family,
            rank,
            roots,
            coroots,
            num_positive,
            simple: simple_idx,
            simple_coords,
            lookup,
        };
        datum.validate()?;
        Ok(datum)
    }

    /// Checks the defining invariants of a reduced root datum.
    pub fn validate(&self) -> Result<()> {
        let fail = |what: &str| {
            Err(Error::Consistency(format!(
                "root datum {}{}: {what}",
                self.family, self.rank
            )))
        };
        if self.lookup.len() != self.roots.len() {
            return fail("repeated root");
        }
        for (i, coords) in self.simple_coords.iter().enumerate() {
            let positive = i < self.num_positive;
            let ok = if positive {
                coords.iter().all(|&c| c >= 0)
            } else {
                coords.iter().all(|&c| c <= 0)
            };
            if !ok || coords.iter().all(|&c| c == 0) {
                return fail("a root is not a one-signed combination of Δ");
            }
        }
        for (a, av) in self.roots.iter().zip(&self.coroots) {
            if dot(av, a) != 2 {
                return fail("⟨α∨, α⟩ ≠ 2");
            }
            for b in &self.roots {
                let p = dot(av, b);
                let image: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - p * y).collect();
                if !self.lookup.contains_key(&image) {
                    return fail("Φ is not stable under a simple reflection");
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> RootFamily {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of simple roots.
    pub fn semisimple_rank(&self) -> usize {
        self.simple.len()
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.num_positive]
    }

    pub fn is_positive(&self, root: usize) -> bool {
        root < self.num_positive
    }

    /// Index of the opposite root.
    pub fn negative_of(&self, root: usize) -> usize {
        (root + self.num_positive) % self.roots.len()
    }

    /// Indices of the simple roots, in order.
    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    pub fn simple_root(&self, i: usize) -> &[i64] {
        &self.roots[self.simple[i]]
    }

    pub fn simple_coroot(&self, i: usize) -> &[i64] {
        &self.coroots[self.simple[i]]
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.lookup.get(v).copied()
    }

    /// Coordinates of a root in the basis `Δ`.
    pub fn simple_coordinates(&self, root: usize) -> &[i64] {
        &self.simple_coords[root]
    }

    /// `⟨x, ν⟩` for a cocharacter `x` and a rational character `ν`.
    pub fn pairing(&self, x: &[i64], nu: &RationalCharacterVector) -> BigRational {
        x.iter()
            .zip(&nu.0)
            .map(|(&a, b)| BigRational::from_integer(a.into()) * b)
            .fold(BigRational::zero(), |acc, t| acc + t)
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// An integer matrix acting on the character lattice by `x ↦ t x`.
///
/// Cocharacters transform by `tᵀ`, which makes the pairing invariant
/// whenever `t² = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeInvolution {
    matrix: Vec<Vec<i64>>,
}

impl LatticeInvolution {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::Shape {
                expected: 1,
                found: 0,
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::Shape {
                expected: n,
                found: row.len(),
            });
        }
        Ok(LatticeInvolution { matrix })
    }

    pub fn negative_identity(rank: usize) -> Self {
        LatticeInvolution {
            matrix: (0..rank).map(|i| unit(rank, i, -1)).collect(),
        }
    }

    /// The longest Weyl element of type A: `ε_i ↦ ε_{n+1−i}`.
    pub fn reversal(rank: usize) -> Self {
        LatticeInvolution {
            matrix: (0..rank).map(|i| unit(rank, rank - 1 - i, 1)).collect(),
        }
    }

    /// Plain text, one row per line, integers separated by whitespace.
    pub fn parse(text: &str) -> Result<Self> {
        let matrix = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<i64>()
                            .map_err(|_| Error::Precondition(format!("bad matrix entry {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(matrix)
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| dot(row, v)).collect()
    }

    pub fn apply_dual(&self, v: &[i64]) -> Vec<i64> {
        (0..self.size())
            .map(|c| self.matrix.iter().zip(v).map(|(row, x)| row[c] * x).sum())
            .collect()
    }

    pub fn apply_rational(&self, v: &RationalCharacterVector) -> RationalCharacterVector {
        RationalCharacterVector(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&v.0)
                        .map(|(&a, b)| BigRational::from_integer(a.into()) * b)
                        .fold(BigRational::zero(), |acc, t| acc + t)
                })
                .collect(),
        )
    }

    pub fn is_order_two(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.matrix[i]
                    .iter()
                    .zip(&self.matrix)
                    .map(|(a, r)| a * r[j])
                    .sum::<i64>()
                    == (i == j) as i64
            })
        })
    }
}

/// The standard parabolic attached to `Θ ⊆ Δ`, or its opposite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolicDatum {
    pub theta_subset: SimpleSubset,
    pub opposite: bool,
    /// `Φ ∩ ℤΘ`.
    pub levi_roots: Vec<usize>,
    /// Roots of the unipotent radical: `Φ⁺∖ℤΘ`, or `Φ⁻∖ℤΘ` for the opposite.
    pub nilradical_roots: Vec<usize>,
    pub opposite_nilradical_roots: Vec<usize>,
}

impl ParabolicDatum {
    pub fn new(datum: &RootDatum, theta: &SimpleSubset) -> Result<Self> {
        theta.validate(datum.semisimple_rank())?;
        let mut levi = Vec::new();
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for r in 0..datum.roots.len() {
            let in_levi = datum.simple_coords[r]
                .iter()
                .enumerate()
                .all(|(i, &c)| c == 0 || theta.contains(i + 1));
            if in_levi {
                levi.push(r);
            } else if datum.is_positive(r) {
                upper.push(r);
            } else {
                lower.push(r);
            }
        }
        Ok(ParabolicDatum {
            theta_subset: theta.clone(),
            opposite: false,
            levi_roots: levi,
            nilradical_roots: upper,
            opposite_nilradical_roots: lower,
        })
    }

    pub fn opposite(&self) -> Self {
        ParabolicDatum {
            theta_subset: self.theta_subset.clone(),
            opposite: !self.opposite,
            levi_roots: self.levi_roots.clone(),
            nilradical_roots: self.opposite_nilradical_roots.clone(),
            opposite_nilradical_roots: self.nilradical_roots.clone(),
        }
    }

    pub fn in_levi(&self, root: usize) -> bool {
        self.levi_roots.binary_search(&root).is_ok()
    }
}

/// An exact vector in `X ⊗ ℚ`; serialized as strings `"p"` or `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalCharacterVector(pub Vec<BigRational>);

impl RationalCharacterVector {
    pub fn from_integers(v: &[i64]) -> Self {
        RationalCharacterVector(linalg::to_rational(v))
    }

    pub fn zero(rank: usize) -> Self {
        RationalCharacterVector(vec![BigRational::zero(); rank])
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn neg(&self) -> Self {
        RationalCharacterVector(self.0.iter().map(|x| -x.clone()).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalCharacterVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalCharacterVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for RationalCharacterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for RationalCharacterVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|x| x.to_string()))
    }
}

impl<'de> Deserialize<'de> for RationalCharacterVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        parts
            .iter()
            .map(|p| p.parse::<BigRational>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<_, _>>()
            .map(RationalCharacterVector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_a_counts() {
        let a2 = RootDatum::type_a(2).unwrap();
        assert_eq!(a2.roots(), &[vec![1, -1], vec![-1, 1]]);
        assert_eq!(a2.simple_root(0), &[1, -1]);
        assert_eq!(RootDatum::type_a(3).unwrap().positive_roots().len(), 3);
        let a4 = RootDatum::type_a(4).unwrap();
        assert_eq!(a4.roots().len(), 12);
        for r in 0..6 {
            assert!(a4.simple_coordinates(r).iter().all(|&c| c == 0 || c == 1));
        }
        assert!(RootDatum::type_a(1).is_err());
    }

    #[test]
    fn type_b_counts_and_coroots() {
        let b1 = RootDatum::type_b(1).unwrap();
        assert_eq!(b1.roots(), &[vec![1], vec![-1]]);
        let b2 = RootDatum::type_b(2).unwrap();
        assert_eq!(b2.roots().len(), 8);
        assert_eq!(b2.simple_root(0), &[1, -1]);
        assert_eq!(b2.simple_root(1), &[0, 1]);
        let b3 = RootDatum::type_b(3).unwrap();
        let short = b3.root_index(&[0, 1, 0]).unwrap();
        assert_eq!(b3.coroots()[short], vec![0, 2, 0]);
        assert_eq!(dot(&b3.coroots()[short], &[1, -1, 0]), -2);
        assert!(RootDatum::type_b(0).is_err());
    }

    #[test]
    fn parabolic_partition() {
        let d = RootDatum::type_b(3).unwrap();
        for theta in SimpleSubset::all(3) {
            let p = ParabolicDatum::new(&d, &theta).unwrap();
            let mut all: Vec<usize> = p
                .levi_roots
                .iter()
                .chain(&p.nilradical_roots)
                .chain(&p.opposite_nilradical_roots)
                .copied()
                .collect();
            all.sort_unstable();
            assert_eq!(all, (0..d.roots().len()).collect::<Vec<_>>());
            for &r in &p.levi_roots {
                assert!(p.in_levi(d.negative_of(r)));
            }
        }
        assert!(ParabolicDatum::new(&d, &SimpleSubset::new([4])).is_err());
    }

    #[test]
    fn involution_parsing() {
        let t = LatticeInvolution::parse("0 -1\n-1 0\n").unwrap();
        assert!(t.is_order_two());
        assert_eq!(t.apply(&[1, 0]), vec![0, -1]);
        assert!(LatticeInvolution::parse("1 2\n3").is_err());
        assert!(LatticeInvolution::parse("x").is_err());
        assert!(!LatticeInvolution::new(vec![vec![1, 1], vec![0, 1]])
            .unwrap()
            .is_order_two());
    }

    #[test]
    fn rational_vector_serde() {
        let v = RationalCharacterVector(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::from_integer((-3).into()),
        ]);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"["1/2","-3"]"#);
        assert_eq!(
            serde_json::from_str::<RationalCharacterVector>(&json).unwrap(),
            v
        );
    }
}
