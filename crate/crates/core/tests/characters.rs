use std::sync::Arc;

use signlab_core::character::TableDocument;
use signlab_core::{
    CharacterTable, ClassFunction, Cyclotomic, FieldSpec, FiniteMatrixGroup, FqMatrix,
    GroupAutomorphism, ParabolicFunctors, SimpleSubset, DEFAULT_ELEMENT_CAP,
};

fn gl(n: usize, q: u32) -> FiniteMatrixGroup {
    FiniteMatrixGroup::gl(
        n,
        Arc::new(FieldSpec::of_order(q).unwrap()),
        DEFAULT_ELEMENT_CAP,
    )
    .unwrap()
}

fn sl(n: usize, q: u32) -> FiniteMatrixGroup {
    FiniteMatrixGroup::sl(
        n,
        Arc::new(FieldSpec::of_order(q).unwrap()),
        DEFAULT_ELEMENT_CAP,
    )
    .unwrap()
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

/// Degree multiset of GL_2(F_q) from the standard parametrization:
/// q-1 linear, q-1 of degree q, (q-1)(q-2)/2 of degree q+1, q(q-1)/2 of degree q-1.
fn gl2_degrees(q: u64) -> Vec<u64> {
    let mut d = Vec::new();
    d.extend(std::iter::repeat(1).take((q - 1) as usize));
    d.extend(std::iter::repeat(q).take((q - 1) as usize));
    d.extend(std::iter::repeat(q + 1).take(((q - 1) * (q - 2) / 2) as usize));
    d.extend(std::iter::repeat(q - 1).take((q * (q - 1) / 2) as usize));
    sorted(d)
}

/// Independent oracle: each row, rescaled to `ω(C) = |C|χ(c)/χ(1)`, must be
/// an algebra homomorphism of the class algebra. Class constants are
/// counted directly from group products; the check is numerical.
fn assert_central_characters(g: &FiniteMatrixGroup, table: &CharacterTable) {
    let k = g.num_classes();
    let mut a = vec![vec![vec![0u64; k]; k]; k];
    for (kk, class) in g.classes().iter().enumerate() {
        let z = class.representative;
        for x in 0..g.order() as u32 {
            let y = g.mul(g.inv(x), z);
            a[g.class_of(x) as usize][g.class_of(y) as usize][kk] += 1;
        }
    }
    for chi in table.irreducibles() {
        let d = chi.integer_degree().unwrap() as f64;
        let omega: Vec<(f64, f64)> = (0..k)
            .map(|c| {
                let (re, im) = chi.value(c).to_complex();
                let s = g.classes()[c].size() as f64 / d;
                (re * s, im * s)
            })
            .collect();
        for i in 0..k {
            for j in 0..k {
                let lhs = (
                    omega[i].0 * omega[j].0 - omega[i].1 * omega[j].1,
                    omega[i].0 * omega[j].1 + omega[i].1 * omega[j].0,
                );
                let mut rhs = (0.0, 0.0);
                for (kk, w) in omega.iter().enumerate() {
                    rhs.0 += a[i][j][kk] as f64 * w.0;
                    rhs.1 += a[i][j][kk] as f64 * w.1;
                }
                assert!((lhs.0 - rhs.0).abs() < 1e-6 && (lhs.1 - rhs.1).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn s3_table_is_classical() {
    let g = gl(2, 2);
    let t = CharacterTable::compute(&g).unwrap();
    assert_eq!(t.degrees(), vec![1, 1, 2]);
    // Trivial first, then the sign character (-1 on transpositions).
    assert!(t.get(0).values().iter().all(|v| *v == Cyclotomic::one()));
    let orders: Vec<u32> = g.classes().iter().map(|c| c.element_order).collect();
    for (c, &o) in orders.iter().enumerate() {
        let expected_sign = if o == 2 { -1 } else { 1 };
        assert_eq!(t.get(1).value(c).as_integer(), Some(expected_sign));
        let expected_std = match o {
            1 => 2,
            2 => 0,
            _ => -1,
        };
        assert_eq!(t.get(2).value(c).as_integer(), Some(expected_std));
    }
    assert_central_characters(&g, &t);
}

#[test]
fn gl2_degrees_match_parametrization() {
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let g = gl(2, q);
        let t = CharacterTable::compute(&g).unwrap();
        assert_eq!(sorted(t.degrees()), gl2_degrees(q as u64), "q = {q}");
    }
}

#[test]
fn gl2_f3_has_expected_degrees() {
    let g = gl(2, 3);
    let t = CharacterTable::compute(&g).unwrap();
    assert_eq!(t.degrees(), vec![1, 1, 2, 2, 2, 3, 3, 4]);
    assert_eq!(t.degrees().iter().map(|d| d * d).sum::<u64>(), 48);
}

#[test]
fn gl3_f2_and_sl2_f3_degrees() {
    // GL_3(F_2) ≅ PSL_2(F_7).
    let t = CharacterTable::compute(&gl(3, 2)).unwrap();
    assert_eq!(t.degrees(), vec![1, 3, 3, 6, 7, 8]);
    let t = CharacterTable::compute(&sl(2, 3)).unwrap();
    assert_eq!(t.degrees(), vec![1, 1, 1, 2, 2, 2, 3]);
}

#[test]
fn trivial_group_table() {
    let g = gl(1, 2);
    let t = CharacterTable::compute(&g).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t.get(0).values(), &[Cyclotomic::one()]);
}

#[test]
fn rows_are_central_characters_on_small_groups() {
    for g in [gl(2, 3), gl(2, 4), gl(3, 2), sl(2, 3), sl(2, 5)] {
        let t = CharacterTable::compute(&g).unwrap();
        assert_central_characters(&g, &t);
    }
}

#[test]
fn certificate_reports_both_relations() {
    let g = gl(2, 5);
    let t = CharacterTable::compute(&g).unwrap();
    let c = t.certificate();
    assert!(c.row_orthogonality && c.column_orthogonality && c.galois_closed);
    assert_eq!(c.degree_square_sum, 480);
    assert_eq!(c.num_irreducibles, c.num_classes);
}

#[test]
fn exact_inner_products_agree_with_certificate() {
    let g = gl(2, 4);
    let t = CharacterTable::compute(&g).unwrap();
    for (i, a) in t.irreducibles().iter().enumerate() {
        for (j, b) in t.irreducibles().iter().enumerate() {
            let expected = Cyclotomic::from_integer((i == j) as i64);
            assert_eq!(a.inner_product(b).unwrap(), expected);
        }
    }
}

#[test]
fn corrupted_tables_are_rejected() {
    let g = gl(2, 3);
    let t = CharacterTable::compute(&g).unwrap();
    let mut rows: Vec<Vec<Cyclotomic>> = t
        .irreducibles()
        .iter()
        .map(|c| c.values().to_vec())
        .collect();
    rows[3][2] = &rows[3][2] + &Cyclotomic::one();
    assert!(CharacterTable::from_values(g.class_structure(), rows).is_err());
    let mut rows: Vec<Vec<Cyclotomic>> = t
        .irreducibles()
        .iter()
        .map(|c| c.values().to_vec())
        .collect();
    rows.pop();
    assert!(CharacterTable::from_values(g.class_structure(), rows).is_err());
}

#[test]
fn dual_and_twist_permute_irreducibles() {
    let g = gl(3, 2);
    let t = CharacterTable::compute(&g).unwrap();
    let theta = GroupAutomorphism::transpose_inverse(&g).unwrap();
    let id = GroupAutomorphism::identity(&g);
    for chi in t.irreducibles() {
        assert_eq!(chi.twist(&id).unwrap(), *chi);
        assert_eq!(chi.dual().dual(), *chi);
        assert_eq!(chi.twist(&theta).unwrap().twist(&theta).unwrap(), *chi);
        assert!(t.position(&chi.dual()).is_some());
        assert!(t.position(&chi.twist(&theta).unwrap()).is_some());
    }
}

#[test]
fn central_character_of_degree_three_at_minus_identity() {
    let g = gl(2, 3);
    let f = g.field().clone();
    let t = CharacterTable::compute(&g).unwrap();
    let minus = g
        .index_of(&FqMatrix::from_rows(&f, &[vec![-1, 0], vec![0, -1]]).unwrap())
        .unwrap();
    for chi in t
        .irreducibles()
        .iter()
        .filter(|c| c.integer_degree() == Some(3))
    {
        let w = chi.central_character(&g, minus).unwrap();
        assert!(w == Cyclotomic::one() || w == Cyclotomic::from_integer(-1));
        assert_eq!(
            chi.central_character(&g, g.identity()).unwrap(),
            Cyclotomic::one()
        );
    }
    let u = g
        .index_of(&FqMatrix::from_rows(&f, &[vec![1, 1], vec![0, 1]]).unwrap())
        .unwrap();
    assert!(t.get(0).central_character(&g, u).is_err());
}

#[test]
fn document_roundtrip_and_cache() {
    let g = gl(2, 3);
    let t = CharacterTable::compute(&g).unwrap();
    let json = serde_json::to_string(&t.to_document(&g)).unwrap();
    let doc: TableDocument = serde_json::from_str(&json).unwrap();
    let back = CharacterTable::from_document(&g, doc).unwrap();
    assert_eq!(back.irreducibles(), t.irreducibles());

    let dir = std::env::temp_dir().join(format!("signlab-table-{}", std::process::id()));
    let first = CharacterTable::load_or_compute(&g, Some(&dir)).unwrap();
    let second = CharacterTable::load_or_compute(&g, Some(&dir)).unwrap();
    assert_eq!(first.irreducibles(), second.irreducibles());
    assert_eq!(first.certificate(), second.certificate());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn table_for_another_group_is_rejected() {
    let g = gl(2, 3);
    let doc = CharacterTable::compute(&gl(2, 2))
        .unwrap()
        .to_document(&gl(2, 2));
    assert!(CharacterTable::from_document(&g, doc).is_err());
}

fn borel_functors(g: &FiniteMatrixGroup) -> ParabolicFunctors {
    ParabolicFunctors::new(g, &SimpleSubset::empty()).unwrap()
}

#[test]
fn principal_series_restricts_to_twice_trivial() {
    let g = gl(2, 3);
    let hc = borel_functors(&g);
    let torus = CharacterTable::compute(hc.levi()).unwrap();
    let one_t = torus.get(0);
    let ind = hc.induce(one_t).unwrap();
    assert_eq!(ind.degree().as_integer(), Some(4)); // [G : B] = 4
    let res = hc.restrict(&ind).unwrap();
    assert_eq!(res, one_t.scale(2.into()));
}

#[test]
fn trivial_restricts_to_trivial() {
    let g = gl(3, 2);
    for theta in SimpleSubset::all(2) {
        let hc = ParabolicFunctors::new(&g, &theta).unwrap();
        let t = CharacterTable::compute(&g).unwrap();
        let r = hc.restrict(t.get(0)).unwrap();
        assert_eq!(r, ClassFunction::trivial(hc.levi().class_structure()));
    }
}

#[test]
fn cuspidal_characters_restrict_to_zero() {
    let g = gl(2, 3);
    let hc = borel_functors(&g);
    let t = CharacterTable::compute(&g).unwrap();
    let cuspidal: Vec<_> = t
        .irreducibles()
        .iter()
        .filter(|c| c.integer_degree() == Some(2))
        .collect();
    assert_eq!(cuspidal.len(), 3);
    for chi in cuspidal {
        assert!(hc.restriction_is_zero(chi).unwrap());
    }
}

#[test]
fn s3_induced_from_torus_is_trivial_plus_standard() {
    let g = gl(2, 2);
    let hc = borel_functors(&g);
    let torus = CharacterTable::compute(hc.levi()).unwrap();
    let t = CharacterTable::compute(&g).unwrap();
    let ind = hc.induce(torus.get(0)).unwrap();
    let mult: Vec<Option<i64>> = t
        .decompose(&ind)
        .unwrap()
        .iter()
        .map(|m| m.as_integer())
        .collect();
    assert_eq!(mult, vec![Some(1), Some(0), Some(1)]);
}

#[test]
fn induction_degree_and_adjunction() {
    for (n, q) in [(2, 3), (3, 2)] {
        let g = gl(n, q);
        let t = CharacterTable::compute(&g).unwrap();
        for theta in SimpleSubset::all(n - 1) {
            let hc = ParabolicFunctors::new(&g, &theta).unwrap();
            let mt = CharacterTable::compute(hc.levi()).unwrap();
            let index = g.order() as i64
                / g.tag(&signlab_core::SubgroupTag::Parabolic(theta.clone()))
                    .unwrap()
                    .len() as i64;
            let mults = hc.restriction_multiplicities(&t, &mt).unwrap();
            for (i, chi) in t.irreducibles().iter().enumerate() {
                let r = hc.restrict(chi).unwrap();
                assert_eq!(r.dual(), hc.restrict(&chi.dual()).unwrap());
                for (j, tau) in mt.irreducibles().iter().enumerate() {
                    let ind = hc.induce(tau).unwrap();
                    assert_eq!(
                        ind.degree().as_integer(),
                        Some(index * tau.integer_degree().unwrap() as i64)
                    );
                    let lhs = r.inner_product(tau).unwrap();
                    let rhs = chi.inner_product(&ind).unwrap();
                    assert_eq!(lhs, rhs);
                    assert_eq!(lhs.as_integer(), Some(mults[i][j] as i64));
                }
            }
            // Restriction after induction contains τ.
            for (j, tau) in mt.irreducibles().iter().enumerate() {
                let back = hc.restrict(&hc.induce(tau).unwrap()).unwrap();
                let m = back.inner_product(tau).unwrap().as_integer().unwrap();
                assert!(m >= 1, "τ_{j} missing from R(I(τ))");
            }
        }
    }
}
