use serde::Serialize;

use super::{
    LatticeInvolution, ParabolicDatum, RationalCharacterVector, RootDatum, RootFamily,
    HYPOTHESIS_SCHEMA,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub schema: &'static str,
    pub family: RootFamily,
    pub rank: usize,
    pub theta: String,
    pub involution: Vec<Vec<i64>>,
    /// `t² = 1`.
    pub order_two: bool,
    /// `t` permutes `Φ`, and `tᵀ` carries each coroot to the coroot of the image root.
    pub permutes_roots: bool,
    /// `t(Φ⁺∖ℤΘ) = Φ⁻∖ℤΘ`.
    pub swaps_nilradicals: bool,
    /// `t(Φ∩ℤΘ) = Φ∩ℤΘ`.
    pub levi_stable: bool,
    /// `t δ_P = δ_{P̄}`.
    pub modulus_identity: bool,
    pub all_pass: bool,
    /// Roots of `Φ⁺∖ℤΘ` whose image is not in `Φ⁻∖ℤΘ`.
    pub violations: Vec<Vec<i64>>,
}

fn check_shape(datum: &RootDatum, t: &LatticeInvolution) -> Result<()> {
    if t.size() != datum.rank() {
        return Err(Error::Shape {
            expected: datum.rank(),
            found: t.size(),
        });
    }
    Ok(())
}

/// Image of every root under `t`, or `None` if some image is not a root.
fn root_permutation(datum: &RootDatum, t: &LatticeInvolution) -> Option<Vec<usize>> {
    datum
        .roots()
        .iter()
        .map(|r| datum.root_index(&t.apply(r)))
        .collect()
}

pub fn check_involution_conditions(
    datum: &RootDatum,
    t: &LatticeInvolution,
    p: &ParabolicDatum,
) -> Result<HypothesisReport> {
    check_shape(datum, t)?;
    let order_two = t.is_order_two();
    let perm = root_permutation(datum, t);
    let permutes_roots = perm.as_ref().is_some_and(|perm| {
        perm.iter()
            .enumerate()
            .all(|(r, &s)| t.apply_dual(&datum.coroots()[r]) == datum.coroots()[s])
    });
    let mut violations = Vec::new();
    let mut levi_stable = false;
    if let Some(perm) = &perm {
        for &r in &p.nilradical_roots {
            if p.opposite_nilradical_roots.binary_search(&perm[r]).is_err() {
                violations.push(datum.roots()[r].clone());
            }
        }
        levi_stable = p.levi_roots.iter().all(|&r| p.in_levi(perm[r]));
    } else {
        violations.extend(
            datum
                .roots()
                .iter()
                .filter(|r| datum.root_index(&t.apply(r)).is_none())
                .cloned(),
        );
    }
    let swaps_nilradicals = perm.is_some() && violations.is_empty();
    let modulus_identity = verify_modulus_identity(datum, t, p)?;
    Ok(HypothesisReport {
        schema: HYPOTHESIS_SCHEMA,
        family: datum.family(),
        rank: datum.rank(),
        theta: p.theta_subset.to_string(),
        involution: t.matrix().to_vec(),
        order_two,
        permutes_roots,
        swaps_nilradicals,
        levi_stable,
        modulus_identity,
        all_pass: order_two
            && permutes_roots
            && swaps_nilradicals
            && levi_stable
            && modulus_identity,
        violations,
    })
}

/// `δ_P = Σ_{α ∈ N} α` over the roots of the unipotent radical.
pub fn modulus_character(datum: &RootDatum, p: &ParabolicDatum) -> RationalCharacterVector {
    let mut sum = vec![0i64; datum.rank()];
    for &r in &p.nilradical_roots {
        for (s, x) in sum.iter_mut().zip(&datum.roots()[r]) {
            *s += x;
        }
    }
    RationalCharacterVector::from_integers(&sum)
}

/// Whether `t δ_P = δ_{P̄}`.
pub fn verify_modulus_identity(
    datum: &RootDatum,
    t: &LatticeInvolution,
    p: &ParabolicDatum,
) -> Result<bool> {
    check_shape(datum, t)?;
    Ok(t.apply_rational(&modulus_character(datum, p)) == modulus_character(datum, &p.opposite()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::SimpleSubset;

    #[test]
    fn negative_identity_passes_on_type_a() {
        for n in 2..=5 {
            let d = RootDatum::type_a(n).unwrap();
            let t = LatticeInvolution::negative_identity(n);
            for theta in SimpleSubset::all(n - 1) {
                let p = ParabolicDatum::new(&d, &theta).unwrap();
                assert!(check_involution_conditions(&d, &t, &p).unwrap().all_pass);
            }
        }
    }

    #[test]
    fn swap_negate_fails_condition_c() {
        let d = RootDatum::type_a(2).unwrap();
        let t = LatticeInvolution::new(vec![vec![0, -1], vec![-1, 0]]).unwrap();
        let p = ParabolicDatum::new(&d, &SimpleSubset::empty()).unwrap();
        let r = check_involution_conditions(&d, &t, &p).unwrap();
        assert!(r.order_two && r.permutes_roots);
        assert!(!r.swaps_nilradicals);
        assert_eq!(r.violations, vec![vec![1, -1]]);
        assert!(!r.modulus_identity);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let d = RootDatum::type_a(3).unwrap();
        let p = ParabolicDatum::new(&d, &SimpleSubset::empty()).unwrap();
        assert!(
            check_involution_conditions(&d, &LatticeInvolution::negative_identity(2), &p).is_err()
        );
    }

    #[test]
    fn modulus_examples() {
        let d = RootDatum::type_a(2).unwrap();
        let p = ParabolicDatum::new(&d, &SimpleSubset::empty()).unwrap();
        assert_eq!(
            modulus_character(&d, &p),
            RationalCharacterVector::from_integers(&[1, -1])
        );
        let d = RootDatum::type_a(3).unwrap();
        let p = ParabolicDatum::new(&d, &SimpleSubset::new([1])).unwrap();
        assert_eq!(
            modulus_character(&d, &p),
            RationalCharacterVector::from_integers(&[1, 1, -2])
        );
        assert_eq!(
            modulus_character(&d, &p.opposite()),
            RationalCharacterVector::from_integers(&[-1, -1, 2])
        );
    }
}
