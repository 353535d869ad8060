//! Class functions, character tables and Harish-Chandra functors.

mod harish_chandra;
mod image;
mod table;

use std::sync::Arc;

use num_traits::Zero;

use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::group::{ClassStructure, FiniteMatrixGroup, GroupAutomorphism};

pub use harish_chandra::ParabolicFunctors;
pub use image::ModularImage;
pub use table::{
    CharacterTable, ClassEntry, IrreducibleEntry, TableCertificate, TableDocument, TABLE_SCHEMA,
};

/// A function on the conjugacy classes of a group, with exact cyclotomic values.
#[derive(Debug, Clone)]
pub struct ClassFunction {
    structure: Arc<ClassStructure>,
    values: Vec<Cyclotomic>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.structure, &other.structure)
            || self.structure.group_label == other.structure.group_label)
            && self.values == other.values
    }
}

impl Eq for ClassFunction {}

impl ClassFunction {
    pub fn new(structure: Arc<ClassStructure>, values: Vec<Cyclotomic>) -> Result<Self> {
        if values.len() != structure.num_classes() {
            return Err(Error::Shape {
                expected: structure.num_classes(),
                found: values.len(),
            });
        }
        Ok(ClassFunction { structure, values })
    }

    pub fn trivial(structure: Arc<ClassStructure>) -> Self {
        let values = vec![Cyclotomic::one(); structure.num_classes()];
        ClassFunction { structure, values }
    }

    pub fn structure(&self) -> &Arc<ClassStructure> {
        &self.structure
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    /// Value at the identity class.
    pub fn degree(&self) -> &Cyclotomic {
        &self.values[0]
    }

    /// Degree as a positive integer, when it is one.
    pub fn integer_degree(&self) -> Option<u64> {
        self.values[0]
            .as_integer()
            .filter(|&d| d > 0)
            .map(|d| d as u64)
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.structure.group_label != other.structure.group_label
            || self.structure.num_classes() != other.structure.num_classes()
        {
            return Err(Error::GroupMismatch(
                self.structure.group_label.clone(),
                other.structure.group_label.clone(),
            ));
        }
        Ok(())
    }

    /// `⟨χ, ψ⟩ = |G|^{-1} Σ_c |C| χ(c) conj(ψ(c))`.
    pub fn inner_product(&self, other: &Self) -> Result<Cyclotomic> {
        self.same_group(other)?;
        let s = &self.structure;
        let products: Vec<Cyclotomic> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * &b.conj())
            .collect();
        Ok(Cyclotomic::linear_combination(
            products
                .iter()
                .zip(&s.sizes)
                .map(|(x, &size)| (x, Rational::new(size as i64, s.group_order as i64))),
        ))
    }

    pub fn norm(&self) -> Result<Cyclotomic> {
        self.inner_product(self)
    }

    /// The contragredient `χ∨(g) = χ(g^{-1})`.
    pub fn dual(&self) -> Self {
        let values = self
            .structure
            .inverse
            .iter()
            .map(|&c| self.values[c as usize].clone())
            .collect();
        ClassFunction {
            structure: self.structure.clone(),
            values,
        }
    }

    /// The twist `χ^θ = χ ∘ θ`.
    pub fn twist(&self, theta: &GroupAutomorphism) -> Result<Self> {
        if theta.group_label() != self.structure.group_label {
            return Err(Error::GroupMismatch(
                theta.group_label().to_string(),
                self.structure.group_label.clone(),
            ));
        }
        let values = theta
            .class_map()
            .iter()
            .map(|&c| self.values[c as usize].clone())
            .collect();
        Ok(ClassFunction {
            structure: self.structure.clone(),
            values,
        })
    }

    /// Applies the Galois automorphism `ζ ↦ ζ^k` to every value.
    pub fn galois_conjugate(&self, k: i64) -> Self {
        ClassFunction {
            structure: self.structure.clone(),
            values: self.values.iter().map(|v| v.galois(k)).collect(),
        }
    }

    /// `ω_χ(z) = χ(z)/χ(1)` for central `z`.
    pub fn central_character(&self, group: &FiniteMatrixGroup, z: u32) -> Result<Cyclotomic> {
        if !group.is_central(z) {
            return Err(Error::NotCentral(format!("#{z} in {}", group.label())));
        }
        let d = self.values[0]
            .as_rational()
            .filter(|d| !d.is_zero())
            .ok_or_else(|| Error::Precondition("degree must be a nonzero rational".into()))?;
        Ok(self.values[group.class_of(z) as usize].scale(d.recip()))
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        Ok(ClassFunction {
            structure: self.structure.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, s: Rational) -> Self {
        ClassFunction {
            structure: self.structure.clone(),
            values: self.values.iter().map(|v| v.scale(s)).collect(),
        }
    }
}
