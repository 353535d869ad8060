use proptest::prelude::*;

use signlab_core::roots::{
    chamber_contains, chamber_involution_certificate, chamber_samples, check_involution_conditions,
    fixtures, modulus_character, verify_modulus_identity,
};
use signlab_core::{
    LatticeInvolution, ParabolicDatum, RationalCharacterVector, RootDatum, RootFamily, SimpleSubset,
};

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A signed permutation matrix of order two built from disjoint transpositions.
fn signed_involution(n: usize, pairs: &[(usize, usize)], signs: &[i64]) -> LatticeInvolution {
    let mut perm: Vec<usize> = (0..n).collect();
    for &(a, b) in pairs {
        let (a, b) = (a % n, b % n);
        if perm[a] == a && perm[b] == b {
            perm.swap(a, b);
        }
    }
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        let j = perm[i];
        // Paired coordinates share a sign so that t² = 1.
        m[j][i] = signs[i.min(j)];
    }
    LatticeInvolution::new(m).unwrap()
}

fn datum_and_theta() -> impl Strategy<Value = (RootFamily, usize, u32)> {
    prop_oneof![Just(RootFamily::A), Just(RootFamily::B)]
        .prop_flat_map(|f| {
            let lo = if f == RootFamily::A { 2 } else { 1 };
            (Just(f), lo..=5usize)
        })
        .prop_flat_map(|(f, n)| {
            let ss = if f == RootFamily::A { n - 1 } else { n };
            (Just(f), Just(n), 0u32..(1 << ss))
        })
}

fn subset_from_mask(mask: u32, rank: usize) -> SimpleSubset {
    SimpleSubset::new((1..=rank).filter(|i| mask >> (i - 1) & 1 == 1))
}

proptest! {
    #[test]
    fn condition_c_implies_levi_stability_and_modulus_identity(
        (family, n, mask) in datum_and_theta(),
        pairs in proptest::collection::vec((0usize..5, 0usize..5), 0..3),
        signs in proptest::collection::vec(prop_oneof![Just(1i64), Just(-1i64)], 5),
    ) {
        let d = RootDatum::build(family, n).unwrap();
        let p = ParabolicDatum::new(&d, &subset_from_mask(mask, d.semisimple_rank())).unwrap();
        let t = signed_involution(n, &pairs, &signs);
        prop_assert!(t.is_order_two());
        let r = check_involution_conditions(&d, &t, &p).unwrap();
        if r.swaps_nilradicals {
            prop_assert!(r.levi_stable);
            prop_assert!(r.modulus_identity);
            prop_assert!(verify_modulus_identity(&d, &t, &p).unwrap());
        }
    }

    #[test]
    fn pairing_is_invariant(
        (family, n, _mask) in datum_and_theta(),
        pairs in proptest::collection::vec((0usize..5, 0usize..5), 0..3),
        signs in proptest::collection::vec(prop_oneof![Just(1i64), Just(-1i64)], 5),
        x in proptest::collection::vec(-9i64..9, 5),
        y in proptest::collection::vec(-9i64..9, 5),
    ) {
        let _ = RootDatum::build(family, n).unwrap();
        let t = signed_involution(n, &pairs, &signs);
        let (x, y) = (&x[..n], &y[..n]);
        prop_assert_eq!(dot(&t.apply_dual(x), &t.apply(y)), dot(x, y));
    }

    #[test]
    fn modulus_of_opposite_is_negative((family, n, mask) in datum_and_theta()) {
        let d = RootDatum::build(family, n).unwrap();
        let p = ParabolicDatum::new(&d, &subset_from_mask(mask, d.semisimple_rank())).unwrap();
        let sum = modulus_character(&d, &p).add(&modulus_character(&d, &p.opposite()));
        prop_assert_eq!(sum, RationalCharacterVector::zero(n));
    }
}

#[test]
fn reflections_preserve_roots_and_coroot_pairing_is_two() {
    for d in (2..=5)
        .map(|n| RootDatum::type_a(n).unwrap())
        .chain((1..=5).map(|n| RootDatum::type_b(n).unwrap()))
    {
        d.validate().unwrap();
        for (a, av) in d.roots().iter().zip(d.coroots()) {
            assert_eq!(dot(av, a), 2);
            for b in d.roots() {
                let c = dot(av, b);
                let s: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - c * y).collect();
                assert!(d.root_index(&s).is_some());
            }
        }
    }
}

#[test]
fn root_counts() {
    for n in 2..=6 {
        assert_eq!(RootDatum::type_a(n).unwrap().roots().len(), n * (n - 1));
    }
    for n in 1..=6 {
        assert_eq!(RootDatum::type_b(n).unwrap().roots().len(), 2 * n * n);
    }
}

#[test]
fn every_fixture_certificate_survives_a_thousand_samples() {
    for f in fixtures().unwrap() {
        let r = check_involution_conditions(&f.datum, &f.involution, &f.parabolic).unwrap();
        assert_eq!(r.all_pass, f.expect_pass, "{}", f.name);
        if !f.expect_pass {
            assert!(!r.swaps_nilradicals);
            assert!(
                chamber_involution_certificate(&f.datum, &f.involution, &f.parabolic, &[]).is_err()
            );
            continue;
        }
        let samples = chamber_samples(&f.datum, &f.parabolic, 1000, 17).unwrap();
        assert!(samples
            .iter()
            .all(|nu| chamber_contains(&f.datum, &f.parabolic, nu)));
        let cert = chamber_involution_certificate(&f.datum, &f.involution, &f.parabolic, &samples)
            .unwrap();
        assert!(cert.ok, "{}", f.name);
        assert_eq!(cert.checked, 1000);
    }
}

#[test]
fn reversal_moves_chamber_points() {
    // The longest Weyl element on GL_4 with Θ = {2}: −t ν ≠ ν in general.
    let d = RootDatum::type_a(4).unwrap();
    let p = ParabolicDatum::new(&d, &SimpleSubset::new([2])).unwrap();
    let t = LatticeInvolution::reversal(4);
    let samples = chamber_samples(&d, &p, 20, 3).unwrap();
    assert!(samples.iter().any(|nu| t.apply_rational(nu).neg() != *nu));
    assert!(
        chamber_involution_certificate(&d, &t, &p, &samples)
            .unwrap()
            .ok
    );
    // Θ = {1} is not stable under i ↦ 4 − i, so condition (c) fails.
    let q = ParabolicDatum::new(&d, &SimpleSubset::new([1])).unwrap();
    assert!(
        !check_involution_conditions(&d, &t, &q)
            .unwrap()
            .swaps_nilradicals
    );
}
