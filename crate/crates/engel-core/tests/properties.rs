//! Property tests for the algebraic laws every engine must satisfy, over a
//! mix of catalog groups and the symbolic engine.

use engel_core::group::{Element, Group, GroupOps};
use engel_core::{ExampleGroup, ExampleParams};
use proptest::prelude::*;

fn test_groups() -> Vec<Group> {
    let s3 = Group::permutation(3, &[vec![vec![1, 2]], vec![vec![1, 2, 3]]]).unwrap();
    let s4 = Group::permutation(4, &[vec![vec![1, 2]], vec![vec![1, 2, 3, 4]]]).unwrap();
    let m32 = Group::modular(3, 2).unwrap();
    let m53 = Group::modular(5, 3).unwrap();
    let d12 = Group::dihedral(12).unwrap();
    let f1 = {
        let actor = Group::cyclic(3).unwrap();
        let base = Group::modular(3, 2).unwrap();
        let a_img = base.modular_element(0, 1).unwrap();
        let b_img = base.modular_element(1, 3).unwrap();
        Group::semidirect_product(&actor, &base, &[a_img, b_img]).unwrap()
    };
    let prod = Group::direct_product(&s3, &Group::cyclic(4).unwrap());
    vec![s3, s4, m32, m53, d12, f1, prod]
}

fn pick(group: &Group, seed: usize) -> Element {
    let elems = group.elements().unwrap();
    elems[seed % elems.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associativity(gi in 0usize..7, x in any::<usize>(), y in any::<usize>(), z in any::<usize>()) {
        let g = &test_groups()[gi];
        let (a, b, c) = (pick(g, x), pick(g, y), pick(g, z));
        prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
    }

    #[test]
    fn two_sided_inverse(gi in 0usize..7, x in any::<usize>()) {
        let g = &test_groups()[gi];
        let a = pick(g, x);
        let inv = g.inv(&a);
        prop_assert_eq!(g.mul(&a, &inv), g.identity());
        prop_assert_eq!(g.mul(&inv, &a), g.identity());
    }

    #[test]
    fn conjugation_is_an_action(gi in 0usize..7, x in any::<usize>(), y in any::<usize>(), z in any::<usize>()) {
        let g = &test_groups()[gi];
        let (a, h, k) = (pick(g, x), pick(g, y), pick(g, z));
        // a^(hk) = (a^h)^k
        prop_assert_eq!(
            g.conjugate(&a, &g.mul(&h, &k)),
            g.conjugate(&g.conjugate(&a, &h), &k)
        );
    }

    #[test]
    fn commutator_expansion(gi in 0usize..7, x in any::<usize>(), y in any::<usize>(), z in any::<usize>()) {
        let g = &test_groups()[gi];
        let (a, h, k) = (pick(g, x), pick(g, y), pick(g, z));
        // [a, hk] = [a, k] [a, h]^k — the identity behind testing central
        // membership against generators only.
        let lhs = g.commutator(&a, &g.mul(&h, &k));
        let rhs = g.mul(&g.commutator(&a, &k), &g.conjugate(&g.commutator(&a, &h), &k));
        prop_assert_eq!(lhs, rhs);
        // [a, h]^-1 = [h, a]
        prop_assert_eq!(g.inv(&g.commutator(&a, &h)), g.commutator(&h, &a));
    }

    #[test]
    fn symbolic_engine_laws(
        r1 in -40i64..40, r2 in -40i64..40,
        j1 in 0u64..30, k1 in 0u64..200,
        j2 in 0u64..30, k2 in 0u64..200,
        comp in 0usize..3,
    ) {
        let g = ExampleGroup::new(ExampleParams::new(vec![(3, 2), (5, 3), (7, 4)]).unwrap());
        let mut parts1 = vec![(0, 0); 3];
        parts1[comp] = (j1, k1);
        let mut parts2 = vec![(0, 0); 3];
        parts2[(comp + 1) % 3] = (j2, k2);
        let u = g.element(r1, parts1);
        let v = g.element(r2, parts2);
        let w = g.element(r1.wrapping_sub(r2), vec![(j2, k1), (j1, k2), (k1, j2)]);
        prop_assert_eq!(g.mul(&g.mul(&u, &v), &w), g.mul(&u, &g.mul(&v, &w)));
        prop_assert_eq!(g.mul(&u, &g.inv(&u)), g.identity());
        prop_assert_eq!(g.mul(&g.inv(&v), &v), g.identity());
        // x-exponents add exactly
        let prod = g.mul(&u, &v);
        prop_assert_eq!(prod.x_exponent().clone(), num_bigint::BigInt::from(r1) + r2);
    }

    #[test]
    fn torsion_is_closed(j in 0u64..30, k in 0u64..200, j2 in 0u64..30, k2 in 0u64..200) {
        let g = ExampleGroup::new(ExampleParams::new(vec![(3, 2), (5, 3)]).unwrap());
        let u = g.element(0, vec![(j, k), (j2, k2)]);
        let v = g.element(0, vec![(k % 3, j), (k2, j2)]);
        prop_assert!(g.mul(&u, &v).is_torsion());
        prop_assert!(g.inv(&u).is_torsion());
    }
}

#[test]
fn groups_are_shareable_across_threads() {
    use std::sync::Arc;
    let g = Arc::new(Group::modular(3, 2).unwrap());
    let mut handles = Vec::new();
    for _ in 0..4 {
        let g = Arc::clone(&g);
        handles.push(std::thread::spawn(move || {
            let cls = engel_core::classify(&g, 5_000).unwrap();
            (cls.left.len(), cls.right.len(), g.elements().unwrap().len())
        }));
    }
    for h in handles {
        assert_eq!(h.join().unwrap(), (27, 27, 27));
    }
}

#[test]
fn perfect_and_simple_group_a5() {
    // A5 is perfect and simple: the lower central series stabilizes at the
    // whole group, the Fitting subgroup is trivial, and the Engel/series
    // equalities still hold (they do not need solubility).
    let a5 = Group::permutation(5, &[vec![vec![1, 2, 3, 4, 5]], vec![vec![1, 2, 3]]]).unwrap();
    assert_eq!(a5.order(), 60);
    let lower = engel_core::series::lower_central_series(&a5, 5_000).unwrap();
    assert_eq!(lower.class, None);
    assert_eq!(lower.orders, vec![60, 60]);
    assert_eq!(
        engel_core::series::fitting_subgroup(&a5, 5_000)
            .unwrap()
            .order(),
        1
    );
    let baer = engel_core::verify::check_baer("A5", &a5, 5_000).unwrap();
    assert!(baer.passed, "{:?}", baer.witness);
    let heineken = engel_core::verify::check_heineken("A5", &a5, 5_000).unwrap();
    assert!(heineken.passed, "{:?}", heineken.witness);
    let rho = engel_core::verify::check_rho_chain("A5", &a5, 5_000).unwrap();
    assert!(rho.passed, "{:?}", rho.witness);
}

#[test]
fn semidirect_with_permutation_base_matches_s3() {
    // C2 acting on the rotation group of a triangle by inversion gives a
    // group with the S3 Engel structure; the action application has to
    // decompose permutation elements into generator words.
    let actor = Group::cyclic(2).unwrap();
    let base = Group::permutation(3, &[vec![vec![1, 2, 3]]]).unwrap();
    let gens = base.generators();
    let inverted = base.inv(&gens[0]);
    let g = Group::semidirect_product(&actor, &base, &[inverted]).unwrap();
    assert_eq!(g.order(), 6);
    let cls = engel_core::classify(&g, 100).unwrap();
    assert_eq!(cls.left.len(), 3);
    assert_eq!(cls.right.len(), 1);
    let fitting = engel_core::series::fitting_subgroup(&g, 100).unwrap();
    assert_eq!(fitting.order(), 3);
}

#[test]
fn product_of_two_nonabelian_groups() {
    let s3 = Group::permutation(3, &[vec![vec![1, 2]], vec![vec![1, 2, 3]]]).unwrap();
    let g = Group::direct_product(&s3, &s3);
    assert_eq!(g.order(), 36);
    let fitting = engel_core::series::fitting_subgroup(&g, 5_000).unwrap();
    assert_eq!(fitting.order(), 9, "componentwise Fitting subgroup");
    let report = engel_core::verify::check_baer("S3xS3", &g, 5_000).unwrap();
    assert!(report.passed, "{:?}", report.witness);
}

#[test]
fn extended_truncation_component_11_5() {
    // A fourth component (11, 5): the metacyclic group has order 11^9 and
    // its finite quotient order 11^13, far beyond enumeration, yet the
    // commutator formulas and the central height only touch the small
    // normal subgroups involved.
    let params = ExampleParams::new(vec![(3, 2), (5, 3), (7, 4), (11, 5)]).unwrap();
    let g = ExampleGroup::new(params);
    for m in 1..=5u32 {
        let fc = engel_core::example::engel_formula_check(&g, 4, 1, m).unwrap();
        assert!(fc.matches && fc.one_step_matches, "m={m}");
        assert_eq!(fc.vanishes, m == 5);
    }
    assert_eq!(engel_core::example::central_height(&g, 4).unwrap(), 5);
    // a witness for m = 4 now exists inside the truncation
    let w = engel_core::example::bounded_right_engel_excludes_x(&g, 4).unwrap();
    assert_eq!(w.component, 4);
}

#[test]
fn nilpotency_class_bounds_engel_degrees() {
    // In a nilpotent group of class c every element is left and right
    // c-Engel; compare the exact degrees against the computed class.
    let f1 = {
        let actor = Group::cyclic(3).unwrap();
        let base = Group::modular(3, 2).unwrap();
        let a_img = base.modular_element(0, 1).unwrap();
        let b_img = base.modular_element(1, 3).unwrap();
        Group::semidirect_product(&actor, &base, &[a_img, b_img]).unwrap()
    };
    for g in [
        Group::dihedral(8).unwrap(),
        Group::modular(5, 3).unwrap(),
        f1,
    ] {
        let class = engel_core::series::nilpotency_class(&g, 5_000)
            .unwrap()
            .expect("nilpotent test groups");
        let cls = engel_core::classify(&g, 5_000).unwrap();
        assert_eq!(cls.left.len() as u128, g.order());
        assert_eq!(cls.right.len() as u128, g.order());
        assert!(cls.max_bounded_left_degree().unwrap() <= class);
        assert!(cls.max_bounded_right_degree().unwrap() <= class);
    }
}
