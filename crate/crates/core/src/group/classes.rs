use serde::{Deserialize, Serialize};

use super::FiniteMatrixGroup;

/// One conjugacy class: sorted member indices, the smallest is the representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyClass {
    pub representative: u32,
    pub element_order: u32,
    pub members: Vec<u32>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Class-level data shared by every class function of a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStructure {
    pub group_label: String,
    pub group_order: u64,
    pub sizes: Vec<u64>,
    pub element_orders: Vec<u32>,
    /// Class of `g^{-1}` for `g` in each class.
    pub inverse: Vec<u32>,
    /// `power_maps[c][t]` is the class of `rep_c^t` for `0 <= t < order(rep_c)`.
    pub power_maps: Vec<Vec<u32>>,
    /// Least common multiple of the element orders.
    pub exponent: u32,
}

impl ClassStructure {
    pub(crate) fn from_group(g: &FiniteMatrixGroup) -> Self {
        let classes = g.classes();
        let power_maps: Vec<Vec<u32>> = classes
            .iter()
            .map(|c| {
                let mut x = g.identity();
                (0..c.element_order)
                    .map(|_| {
                        let cls = g.class_of(x);
                        x = g.mul(x, c.representative);
                        cls
                    })
                    .collect()
            })
            .collect();
        let exponent = classes
            .iter()
            .fold(1u32, |acc, c| num_integer::lcm(acc, c.element_order));
        ClassStructure {
            group_label: g.label().to_string(),
            group_order: g.order() as u64,
            sizes: classes.iter().map(|c| c.size() as u64).collect(),
            element_orders: classes.iter().map(|c| c.element_order).collect(),
            inverse: classes
                .iter()
                .map(|c| g.class_of(g.inv(c.representative)))
                .collect(),
            power_maps,
            exponent,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.sizes.len()
    }

    /// Class of `rep_c^k` for any integer `k`.
    pub fn power(&self, c: usize, k: i64) -> u32 {
        let m = self.element_orders[c] as i64;
        self.power_maps[c][k.rem_euclid(m) as usize]
    }

    pub fn centralizer_order(&self, c: usize) -> u64 {
        self.group_order / self.sizes[c]
    }
}
