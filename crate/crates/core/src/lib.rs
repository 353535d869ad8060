//! Ordinary and twisted signs of finite-group representations, plus the
//! root-datum combinatorics behind parabolic descent.

pub mod character;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod group;
mod modular;
pub mod roots;
pub mod signs;
pub mod subset;

pub use character::{CharacterTable, ClassFunction, ParabolicFunctors};
pub use cyclotomic::{Cyclotomic, Rational};
pub use error::{Error, Result};
pub use field::{FieldSpec, FqElement};
pub use group::{
    ClassStructure, ConjugacyClass, FiniteMatrixGroup, FqMatrix, GroupAutomorphism, GroupFamily,
    SubgroupTag, CATALOG_ORDER_BOUND, DEFAULT_ELEMENT_CAP,
};
pub use roots::{
    LatticeInvolution, ParabolicDatum, RationalCharacterVector, RootDatum, RootFamily,
};
pub use signs::{SignLab, SignValue};
pub use subset::SimpleSubset;
