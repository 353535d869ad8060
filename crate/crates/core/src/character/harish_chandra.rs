use std::collections::BTreeMap;
use std::sync::Arc;

use super::image::Embedding;
use super::{CharacterTable, ClassFunction};
use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::group::{ClassStructure, FiniteMatrixGroup, SubgroupTag};
use crate::modular::{primes_one_mod, Fp};
use crate::subset::SimpleSubset;

/// Harish-Chandra restriction and induction for a standard parabolic `P = M ⋉ N`.
///
/// Restriction is `(Rχ)(m) = |N|^{-1} Σ_{u∈N} χ(mu)`; induction inflates a
/// class function of `M` to `P` through the Levi projection and induces to `G`.
#[derive(Debug)]
pub struct ParabolicFunctors {
    theta: SimpleSubset,
    levi: FiniteMatrixGroup,
    group_structure: Arc<ClassStructure>,
    levi_structure: Arc<ClassStructure>,
    levi_to_group: Vec<u32>,
    unipotent_order: u64,
    parabolic_order: u64,
    /// `restriction[μ]`: `(c, #{u ∈ N : m_μ u ∈ C_c})`.
    restriction: Vec<Vec<(u32, u64)>>,
    /// `induction[c]`: `(μ, #{p ∈ P ∩ C_c : levi(p) ∈ μ})`.
    induction: Vec<Vec<(u32, u64)>>,
}

impl ParabolicFunctors {
    pub fn new(group: &FiniteMatrixGroup, theta: &SimpleSubset) -> Result<Self> {
        theta.validate(group.degree().saturating_sub(1))?;
        let levi_members = group.require_tag(&SubgroupTag::Levi(theta.clone()))?;
        let unipotent = group.require_tag(&SubgroupTag::Unipotent(theta.clone()))?;
        let parabolic = group.require_tag(&SubgroupTag::Parabolic(theta.clone()))?;
        let levi = group.subgroup(format!("{} Levi {{{theta}}}", group.label()), levi_members)?;
        // Subgroup elements are listed in the parent's index order.
        let levi_to_group = levi_members.to_vec();
        let group_structure = group.class_structure();
        let levi_structure = levi.class_structure();

        let restriction = levi
            .classes()
            .iter()
            .map(|mu| {
                let m = levi_to_group[mu.representative as usize];
                let mut hist = BTreeMap::new();
                for &u in unipotent {
                    *hist.entry(group.class_of(group.mul(m, u))).or_insert(0u64) += 1;
                }
                hist.into_iter().collect()
            })
            .collect();

        let mut induction_maps = vec![BTreeMap::new(); group.num_classes()];
        for &p in parabolic {
            let l = group
                .levi_projection(theta, p)
                .and_then(|l| levi_to_group.binary_search(&l).ok())
                .ok_or_else(|| Error::Consistency(format!("Levi projection of #{p} left M")))?;
            let mu = levi.class_of(l as u32);
            *induction_maps[group.class_of(p) as usize]
                .entry(mu)
                .or_insert(0u64) += 1;
        }
        let induction = induction_maps
            .into_iter()
            .map(|m| m.into_iter().collect())
            .collect();

        Ok(ParabolicFunctors {
            theta: theta.clone(),
            levi,
            group_structure,
            levi_structure,
            levi_to_group,
            unipotent_order: unipotent.len() as u64,
            parabolic_order: parabolic.len() as u64,
            restriction,
            induction,
        })
    }

    pub fn theta(&self) -> &SimpleSubset {
        &self.theta
    }

    /// The Levi factor `M`, enumerated as a group.
    pub fn levi(&self) -> &FiniteMatrixGroup {
        &self.levi
    }

    /// Index in `G` of an element of `M`.
    pub fn levi_to_group(&self, m: u32) -> u32 {
        self.levi_to_group[m as usize]
    }

    fn check(&self, phi: &ClassFunction, s: &Arc<ClassStructure>) -> Result<()> {
        if phi.structure().group_label != s.group_label {
            return Err(Error::GroupMismatch(
                phi.structure().group_label.clone(),
                s.group_label.clone(),
            ));
        }
        Ok(())
    }

    /// Exact Harish-Chandra restriction to `M`.
    pub fn restrict(&self, chi: &ClassFunction) -> Result<ClassFunction> {
        self.check(chi, &self.group_structure)?;
        let scale = Rational::new(1, self.unipotent_order as i64);
        let values = self
            .restriction
            .iter()
            .map(|hist| {
                Cyclotomic::linear_combination(hist.iter().map(|&(c, n)| {
                    (
                        chi.value(c as usize),
                        Rational::from_integer(n as i64) * scale,
                    )
                }))
            })
            .collect();
        ClassFunction::new(self.levi_structure.clone(), values)
    }

    /// Exact Harish-Chandra induction from `M`.
    pub fn induce(&self, tau: &ClassFunction) -> Result<ClassFunction> {
        self.check(tau, &self.levi_structure)?;
        let s = &self.group_structure;
        let values = self
            .induction
            .iter()
            .enumerate()
            .map(|(c, hist)| {
                if hist.is_empty() {
                    return Cyclotomic::zero();
                }
                let scale =
                    Rational::new(s.centralizer_order(c) as i64, self.parabolic_order as i64);
                Cyclotomic::linear_combination(hist.iter().map(|&(mu, n)| {
                    (
                        tau.value(mu as usize),
                        Rational::from_integer(n as i64) * scale,
                    )
                }))
            })
            .collect();
        ClassFunction::new(s.clone(), values)
    }

    /// `mult[i][j] = ⟨R χ_i, τ_j⟩` for every irreducible `χ_i` of `G` and `τ_j` of `M`.
    ///
    /// Computed modulo one prime `ℓ ≡ 1 (mod exp G)` above `2 max χ(1)`; each
    /// multiplicity is an integer in `[0, χ_i(1)]`, so the residue determines it.
    pub fn restriction_multiplicities(
        &self,
        group_table: &CharacterTable,
        levi_table: &CharacterTable,
    ) -> Result<Vec<Vec<u64>>> {
        self.check(group_table.get(0), &self.group_structure)?;
        self.check(levi_table.get(0), &self.levi_structure)?;
        let e = self.group_structure.exponent;
        let ell = primes_one_mod(e as u64)
            .next()
            .ok_or_else(|| Error::TableFailure("no prime for the exponent".into()))?;
        let f = Fp::new(ell);
        let emb = Embedding::new(f, e);
        let ms = &self.levi_structure;
        let kg = self.group_structure.num_classes();
        // kernel[c][j] = Σ_μ |μ| #{u : m_μ u ∈ C_c} τ_j(μ^{-1})
        let levi_rows: Vec<Vec<u64>> = levi_table
            .irreducibles()
            .iter()
            .map(|tau| emb.embed_all(tau.values()))
            .collect::<Result<_>>()?;
        let mut kernel = vec![vec![0u64; levi_rows.len()]; kg];
        for (mu, hist) in self.restriction.iter().enumerate() {
            let inv_mu = ms.inverse[mu] as usize;
            for &(c, n) in hist {
                let w = f.mul(ms.sizes[mu] % ell, n % ell);
                for (j, row) in levi_rows.iter().enumerate() {
                    let slot = &mut kernel[c as usize][j];
                    *slot = f.add(*slot, f.mul(w, row[inv_mu]));
                }
            }
        }
        let denom = f.inv(f.mul(ms.group_order % ell, self.unipotent_order % ell));
        group_table
            .irreducibles()
            .iter()
            .map(|chi| {
                let d = chi.integer_degree().unwrap_or(0);
                let row = emb.embed_all(chi.values())?;
                (0..levi_rows.len())
                    .map(|j| {
                        let acc = (0..kg).fold(0u64, |acc, c| (acc + row[c] * kernel[c][j]) % ell);
                        let m = f.mul(acc, denom);
                        if m > d {
                            return Err(Error::Consistency(format!(
                                "restriction multiplicity residue {m} exceeds degree {d}"
                            )));
                        }
                        Ok(m)
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether a class function of `G` vanishes identically after restriction.
    pub fn restriction_is_zero(&self, chi: &ClassFunction) -> Result<bool> {
        Ok(self.restrict(chi)?.values().iter().all(|v| v.is_zero()))
    }
}

impl std::fmt::Display for ParabolicFunctors {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (|N| = {})", self.levi.label(), self.unipotent_order)
    }
}
