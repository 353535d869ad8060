use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{inverse_raw, transpose_raw};
use super::FiniteMatrixGroup;
use crate::error::{Error, Result};

/// Exhaustive homomorphism checks are used up to this group order.
const EXHAUSTIVE_CHECK_LIMIT: usize = 5000;
const RANDOM_CHECK_PAIRS: usize = 100_000;

/// An automorphism of an enumerated group, stored as an index permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAutomorphism {
    label: String,
    group_label: String,
    map: Vec<u32>,
    class_map: Vec<u32>,
}

impl GroupAutomorphism {
    fn from_map(group: &FiniteMatrixGroup, label: String, map: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &y in &map {
            if std::mem::replace(&mut seen[y as usize], true) {
                return Err(Error::Consistency(format!("{label} is not bijective")));
            }
        }
        let class_map = group
            .classes()
            .iter()
            .map(|c| group.class_of(map[c.representative as usize]))
            .collect();
        Ok(GroupAutomorphism {
            label,
            group_label: group.label().to_string(),
            map,
            class_map,
        })
    }

    pub fn identity(group: &FiniteMatrixGroup) -> Self {
        Self::from_map(
            group,
            "identity".into(),
            (0..group.order() as u32).collect(),
        )
        .expect("identity is bijective")
    }

    /// `g ↦ (gᵀ)^{-1}`. Fails with a closure error when the group is not
    /// stable under the map (e.g. a Borel subgroup).
    pub fn transpose_inverse(group: &FiniteMatrixGroup) -> Result<Self> {
        let n = group.degree();
        let nn = n * n;
        let mut inv = vec![0u8; nn];
        let mut out = vec![0u8; nn];
        let mut map = Vec::with_capacity(group.order());
        for g in 0..group.order() as u32 {
            inverse_raw(group.field(), n, group.raw(g), &mut inv);
            transpose_raw(n, &inv, &mut out);
            map.push(group.index_of_raw(&out).ok_or_else(|| Error::Closure {
                label: format!("transpose-inverse on {}", group.label()),
            })?);
        }
        let theta = Self::from_map(group, "transpose-inverse".into(), map)?;
        theta.verify_multiplicative(group, 0x7e57)?;
        Ok(theta)
    }

    /// The inner automorphism `g ↦ h g h^{-1}`.
    pub fn inner(group: &FiniteMatrixGroup, h: u32) -> Result<Self> {
        if h as usize >= group.order() {
            return Err(Error::NotAMember(group.label().to_string()));
        }
        let hinv = group.inv(h);
        let map = (0..group.order() as u32)
            .map(|g| group.mul(group.mul(h, g), hinv))
            .collect();
        Self::from_map(group, format!("Int(#{h})"), map)
    }

    /// `outer ∘ inner`: apply `inner` first, as in `Int(h) ∘ θ`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.group_label != inner.group_label || outer.map.len() != inner.map.len() {
            return Err(Error::GroupMismatch(
                outer.group_label.clone(),
                inner.group_label.clone(),
            ));
        }
        let map: Vec<u32> = inner.map.iter().map(|&g| outer.map[g as usize]).collect();
        let class_map = inner
            .class_map
            .iter()
            .map(|&c| outer.class_map[c as usize])
            .collect();
        Ok(GroupAutomorphism {
            label: format!("{}∘{}", outer.label, inner.label),
            group_label: outer.group_label.clone(),
            map,
            class_map,
        })
    }

    /// Restriction to a stable subgroup `sub`, whose element `i` is
    /// `sub_to_parent[i]` in the parent (sorted, as produced by `subgroup`).
    pub fn restrict_to(&self, sub: &FiniteMatrixGroup, sub_to_parent: &[u32]) -> Result<Self> {
        if sub_to_parent.len() != sub.order() {
            return Err(Error::Shape {
                expected: sub.order(),
                found: sub_to_parent.len(),
            });
        }
        let map = sub_to_parent
            .iter()
            .map(|&g| {
                sub_to_parent
                    .binary_search(&self.apply(g))
                    .map(|i| i as u32)
                    .map_err(|_| Error::Closure {
                        label: format!("{} on {}", self.label, sub.label()),
                    })
            })
            .collect::<Result<_>>()?;
        Self::from_map(sub, self.label.clone(), map)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn group_label(&self) -> &str {
        &self.group_label
    }

    #[inline]
    pub fn apply(&self, g: u32) -> u32 {
        self.map[g as usize]
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    /// Image of each conjugacy class.
    pub fn class_map(&self) -> &[u32] {
        &self.class_map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn is_involution(&self) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(i, &j)| self.map[j as usize] == i as u32)
    }

    /// Order of the automorphism as a permutation.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.map.len()];
        let mut acc = 1u64;
        for start in 0..self.map.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.map[x] as usize;
                len += 1;
            }
            acc = num_integer::lcm(acc, len);
        }
        acc
    }

    /// Whether the automorphism maps the sorted index set `members` onto itself.
    pub fn preserves(&self, members: &[u32]) -> bool {
        members
            .iter()
            .all(|&m| members.binary_search(&self.map[m as usize]).is_ok())
    }

    /// Checks `φ(gh) = φ(g)φ(h)`: every pair for groups of order at most 5000,
    /// otherwise 10⁵ seeded random pairs.
    pub fn verify_multiplicative(&self, group: &FiniteMatrixGroup, seed: u64) -> Result<()> {
        let order = group.order();
        let check = |g: u32, h: u32| -> Result<()> {
            if self.apply(group.mul(g, h)) != group.mul(self.apply(g), self.apply(h)) {
                return Err(Error::Consistency(format!(
                    "{} is not multiplicative at (#{g}, #{h})",
                    self.label
                )));
            }
            Ok(())
        };
        if order <= EXHAUSTIVE_CHECK_LIMIT {
            for g in 0..order as u32 {
                for h in 0..order as u32 {
                    check(g, h)?;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..RANDOM_CHECK_PAIRS {
                check(
                    rng.gen_range(0..order as u32),
                    rng.gen_range(0..order as u32),
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::{FieldSpec, FqElement};
    use crate::group::{FqMatrix, SubgroupTag, DEFAULT_ELEMENT_CAP};
    use crate::subset::SimpleSubset;

    fn gl(n: usize, q: u32) -> FiniteMatrixGroup {
        FiniteMatrixGroup::gl(
            n,
            Arc::new(FieldSpec::of_order(q).unwrap()),
            DEFAULT_ELEMENT_CAP,
        )
        .unwrap()
    }

    #[test]
    fn transpose_inverse_inverts_diagonal() {
        let g = gl(2, 3);
        let theta = GroupAutomorphism::transpose_inverse(&g).unwrap();
        let d = g.diagonal(&[FqElement(2), FqElement(1)]).unwrap();
        assert_eq!(theta.apply(d), g.inv(d));
        assert!(theta.is_involution());
    }

    #[test]
    fn transpose_inverse_has_order_two_on_gl2_f2() {
        let g = gl(2, 2);
        let theta = GroupAutomorphism::transpose_inverse(&g).unwrap();
        assert_eq!(theta.order(), 2);
    }

    #[test]
    fn transpose_inverse_fails_on_borel() {
        let g = gl(2, 3);
        let b = g
            .subgroup("B", g.tag(&SubgroupTag::Borel).unwrap())
            .unwrap();
        assert!(matches!(
            GroupAutomorphism::transpose_inverse(&b),
            Err(Error::Closure { .. })
        ));
    }

    #[test]
    fn inner_by_identity_is_identity() {
        let g = gl(2, 3);
        assert!(GroupAutomorphism::inner(&g, g.identity())
            .unwrap()
            .is_identity());
        assert!(GroupAutomorphism::inner(&g, 10_000).is_err());
    }

    #[test]
    fn inner_composition_is_inner_of_product() {
        let g = gl(2, 3);
        let (h, k) = (5, 17);
        let lhs = GroupAutomorphism::compose(
            &GroupAutomorphism::inner(&g, h).unwrap(),
            &GroupAutomorphism::inner(&g, k).unwrap(),
        )
        .unwrap();
        let rhs = GroupAutomorphism::inner(&g, g.mul(h, k)).unwrap();
        assert_eq!(lhs.map(), rhs.map());
    }

    #[test]
    fn twisted_inner_is_involution_iff_h_theta_h_central() {
        let g = gl(2, 3);
        let f = g.field().clone();
        let theta = GroupAutomorphism::transpose_inverse(&g).unwrap();
        for h in 0..g.order() as u32 {
            let composed =
                GroupAutomorphism::compose(&GroupAutomorphism::inner(&g, h).unwrap(), &theta)
                    .unwrap();
            let central = g.is_central(g.mul(h, theta.apply(h)));
            assert_eq!(composed.is_involution(), central);
        }
        // A passing and a failing witness.
        let w = g
            .index_of(&FqMatrix::from_rows(&f, &[vec![0, 1], vec![-1, 0]]).unwrap())
            .unwrap();
        assert!(g.is_central(g.mul(w, theta.apply(w))));
        let u = g
            .index_of(&FqMatrix::from_rows(&f, &[vec![1, 1], vec![0, 1]]).unwrap())
            .unwrap();
        assert!(!g.is_central(g.mul(u, theta.apply(u))));
    }

    #[test]
    fn transpose_inverse_swaps_nilradicals() {
        let g = gl(3, 2);
        let theta = GroupAutomorphism::transpose_inverse(&g).unwrap();
        for t in SimpleSubset::all(2) {
            let n = g.tag(&SubgroupTag::Unipotent(t.clone())).unwrap();
            let nbar = g.tag(&SubgroupTag::OppositeUnipotent(t.clone())).unwrap();
            let mut image: Vec<u32> = n.iter().map(|&x| theta.apply(x)).collect();
            image.sort_unstable();
            assert_eq!(image, nbar);
            assert!(theta.preserves(g.tag(&SubgroupTag::Levi(t)).unwrap()));
        }
    }

    #[test]
    fn automorphisms_are_multiplicative() {
        let g = gl(2, 3);
        let theta = GroupAutomorphism::transpose_inverse(&g).unwrap();
        theta.verify_multiplicative(&g, 1).unwrap();
        GroupAutomorphism::inner(&g, 7)
            .unwrap()
            .verify_multiplicative(&g, 1)
            .unwrap();
        let big = gl(2, 8);
        GroupAutomorphism::transpose_inverse(&big)
            .unwrap()
            .verify_multiplicative(&big, 2)
            .unwrap();
    }
}
