use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    check_involution_conditions, linalg, LatticeInvolution, ParabolicDatum,
    RationalCharacterVector, RootDatum, RootFamily, CERTIFICATE_SCHEMA,
};
use crate::error::{Error, Result};

/// `⟨α∨, ν⟩ = 0` for `α ∈ Θ` and `⟨α∨, ν⟩ < 0` for `α ∈ Δ∖Θ`.
pub fn chamber_contains(
    datum: &RootDatum,
    p: &ParabolicDatum,
    nu: &RationalCharacterVector,
) -> bool {
    (0..datum.semisimple_rank()).all(|i| {
        let v = datum.pairing(datum.simple_coroot(i), nu);
        if p.theta_subset.contains(i + 1) {
            v.is_zero()
        } else {
            v.cmp(&BigRational::zero()) == Ordering::Less
        }
    })
}

/// Whether `⟨α∨, ν⟩ = 0` for every `α ∈ Θ`.
fn in_levi_dual(datum: &RootDatum, p: &ParabolicDatum, nu: &RationalCharacterVector) -> bool {
    p.theta_subset
        .iter()
        .all(|i| datum.pairing(datum.simple_coroot(i - 1), nu).is_zero())
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(lo..=hi)),
        BigInt::from(rng.gen_range(1..=16i64)),
    )
}

/// Seeded rational points of the open chamber.
///
/// Solves `⟨α∨, ω_β⟩ = −δ_{αβ}` exactly for `β ∈ Δ∖Θ`, then returns positive
/// combinations of the `ω_β` plus arbitrary vectors annihilated by every
/// simple coroot.
pub fn chamber_samples(
    datum: &RootDatum,
    p: &ParabolicDatum,
    count: usize,
    seed: u64,
) -> Result<Vec<RationalCharacterVector>> {
    let rows: Vec<Vec<BigRational>> = (0..datum.semisimple_rank())
        .map(|i| linalg::to_rational(datum.simple_coroot(i)))
        .collect();
    let rank = datum.rank();
    let mut directions = Vec::new();
    for beta in (0..datum.semisimple_rank()).filter(|&i| !p.theta_subset.contains(i + 1)) {
        let rhs: Vec<BigRational> = (0..rows.len())
            .map(|i| BigRational::from_integer(BigInt::from(-((i == beta) as i64))))
            .collect();
        let w = linalg::solve(&rows, &rhs)
            .ok_or_else(|| Error::Consistency("simple coroots are linearly dependent".into()))?;
        directions.push(RationalCharacterVector(w));
    }
    let central: Vec<RationalCharacterVector> = linalg::kernel(&rows, rank)
        .into_iter()
        .map(RationalCharacterVector)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let mut nu = RationalCharacterVector::zero(rank);
            for w in &directions {
                nu = nu.add(&w.scale(&random_rational(&mut rng, 1, 30)));
            }
            for z in &central {
                nu = nu.add(&z.scale(&random_rational(&mut rng, -30, 30)));
            }
            nu
        })
        .collect())
}

/// Expansion of `t(α)` in `Δ` for one `α ∈ Δ∖Θ`, with the first negative
/// coefficient on `Δ∖Θ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralWitness {
    /// 1-based position of `α` in `Δ`.
    pub simple_root: usize,
    pub image: Vec<i64>,
    pub image_coordinates: Vec<i64>,
    /// 1-based position of a simple root outside Θ with negative coefficient.
    pub witness: Option<usize>,
    pub coefficient: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub schema: &'static str,
    pub family: RootFamily,
    pub rank: usize,
    pub theta: String,
    pub involution: Vec<Vec<i64>>,
    pub structural: Vec<StructuralWitness>,
    pub structural_ok: bool,
    pub samples: usize,
    pub checked: usize,
    pub skipped_off_levi: usize,
    pub skipped_outside_cone: usize,
    /// Indices of samples whose image `−t ν` left the chamber.
    pub failures: Vec<usize>,
    pub ok: bool,
}

/// Certifies that `ν ↦ −t ν` preserves the chamber of `P`.
pub fn chamber_involution_certificate(
    datum: &RootDatum,
    t: &LatticeInvolution,
    p: &ParabolicDatum,
    samples: &[RationalCharacterVector],
) -> Result<CertificateReport> {
    let report = check_involution_conditions(datum, t, p)?;
    if !report.all_pass {
        return Err(Error::Precondition(
            "the involution fails the parabolic hypotheses".into(),
        ));
    }
    let structural: Vec<StructuralWitness> = (0..datum.semisimple_rank())
        .filter(|&i| !p.theta_subset.contains(i + 1))
        .map(|i| {
            let image = t.apply(datum.simple_root(i));
            let idx = datum
                .root_index(&image)
                .ok_or_else(|| Error::Consistency("image of a simple root is not a root".into()))?;
            let coords = datum.simple_coordinates(idx).to_vec();
            let witness =
                (0..coords.len()).find(|&j| !p.theta_subset.contains(j + 1) && coords[j] < 0);
            Ok(StructuralWitness {
                simple_root: i + 1,
                image,
                coefficient: witness.map(|j| coords[j]),
                witness: witness.map(|j| j + 1),
                image_coordinates: coords,
            })
        })
        .collect::<Result<_>>()?;
    let structural_ok = structural.iter().all(|w| w.witness.is_some());

    let (mut checked, mut off_levi, mut outside) = (0, 0, 0);
    let mut failures = Vec::new();
    for (k, nu) in samples.iter().enumerate() {
        if nu.coords().len() != datum.rank() {
            return Err(Error::Shape {
                expected: datum.rank(),
                found: nu.coords().len(),
            });
        }
        if !in_levi_dual(datum, p, nu) {
            off_levi += 1;
            continue;
        }
        if !chamber_contains(datum, p, nu) {
            outside += 1;
            continue;
        }
        checked += 1;
        if !chamber_contains(datum, p, &t.apply_rational(nu).neg()) {
            failures.push(k);
        }
    }
    Ok(CertificateReport {
        schema: CERTIFICATE_SCHEMA,
        family: datum.family(),
        rank: datum.rank(),
        theta: p.theta_subset.to_string(),
        involution: t.matrix().to_vec(),
        structural,
        structural_ok,
        samples: samples.len(),
        checked,
        skipped_off_levi: off_levi,
        skipped_outside_cone: outside,
        ok: structural_ok && failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::SimpleSubset;

    fn v(x: &[i64]) -> RationalCharacterVector {
        RationalCharacterVector::from_integers(x)
    }

    #[test]
    fn gl3_membership_examples() {
        let d = RootDatum::type_a(3).unwrap();
        let p = ParabolicDatum::new(&d, &SimpleSubset::new([1])).unwrap();
        assert!(chamber_contains(&d, &p, &v(&[1, 1, 2])));
        assert!(!chamber_contains(&d, &p, &v(&[1, 0, 0])));
        assert!(!chamber_contains(&d, &p, &v(&[0, 0, 0])));
    }

    #[test]
    fn gl3_structural_witness() {
        let d = RootDatum::type_a(3).unwrap();
        let p = ParabolicDatum::new(&d, &SimpleSubset::new([1])).unwrap();
        let t = LatticeInvolution::negative_identity(3);
        let r = chamber_involution_certificate(&d, &t, &p, &[]).unwrap();
        assert_eq!(r.structural.len(), 1);
        assert_eq!(r.structural[0].image_coordinates, vec![0, -1]);
        assert_eq!(
            (r.structural[0].witness, r.structural[0].coefficient),
            (Some(2), Some(-1))
        );
    }

    #[test]
    fn siegel_b2_example_point() {
        let d = RootDatum::type_b(2).unwrap();
        let p = ParabolicDatum::new(&d, &SimpleSubset::new([1])).unwrap();
        let t = LatticeInvolution::negative_identity(2);
        let nu = v(&[-1, -1]);
        assert!(chamber_contains(&d, &p, &nu));
        assert_eq!(t.apply_rational(&nu).neg(), nu);
        let r = chamber_involution_certificate(&d, &t, &p, &[nu, v(&[1, 0]), v(&[1, 1])]).unwrap();
        assert_eq!(
            (r.checked, r.skipped_off_levi, r.skipped_outside_cone),
            (1, 1, 1)
        );
        assert!(r.ok);
    }

    #[test]
    fn samples_lie_in_chamber_and_scale() {
        let d = RootDatum::type_b(3).unwrap();
        for theta in SimpleSubset::all(3) {
            let p = ParabolicDatum::new(&d, &theta).unwrap();
            for nu in chamber_samples(&d, &p, 50, 9).unwrap() {
                assert!(chamber_contains(&d, &p, &nu));
                let c = BigRational::new(3.into(), 7.into());
                assert!(chamber_contains(&d, &p, &nu.scale(&c)));
            }
        }
    }

    #[test]
    fn certificate_requires_hypotheses() {
        let d = RootDatum::type_a(2).unwrap();
        let p = ParabolicDatum::new(&d, &SimpleSubset::empty()).unwrap();
        let t = LatticeInvolution::new(vec![vec![0, -1], vec![-1, 0]]).unwrap();
        assert!(chamber_involution_certificate(&d, &t, &p, &[]).is_err());
    }
}
