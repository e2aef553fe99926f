mod common;

use amou_ktheory::kgroup::{
    induced_map, k0_group, k1_group, k_group, Cone, GroupTag, IntMatrix, KClass, MorphismSpec,
};
use amou_ktheory::random::{partial_unitary, projection, trial_rng, unitary_matrix};
use amou_ktheory::AlgebraSpec;
use common::*;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn k0_of_block_algebras_is_free_on_block_ranks() {
    for dims in small_block_algebras() {
        let o = k0_brute_force(&dims, 11);
        assert!(o.passed, "{}", o.detail);
    }
}

#[test]
fn k0_of_circle_is_integers_with_rank_unit() {
    let alg = AlgebraSpec::circle(2, 32).unwrap();
    let view = k0_group(&alg, &tol()).unwrap();
    assert_eq!(view.rank, 1);
    assert_eq!(view.order_unit, vec![2]);
    assert_eq!(view.cone, Cone::NonnegOrthant);
}

#[test]
fn k1_of_block_algebras_is_trivial() {
    let o = k1_blocks_trivial(3, 10);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn k1_of_circle_counts_windings() {
    let o = k1_circle_integers(5, 30);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn k1_order_unit_is_neutral() {
    let view = k1_group(&fd(&[2]), &tol()).unwrap();
    assert!(view.order_unit_class().is_identity());
    assert_eq!(view.cone, Cone::WholeGroup);
}

#[test]
fn theta_is_an_isomorphism_on_blocks() {
    let o = theta_splitting(7, 100, 25);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn unitary_and_orthogonal_sum_constructions() {
    let o = section_five_constructions(13, 60, 50);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn induced_maps_are_functorial() {
    let o = functoriality(17, 50, 100);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn classes_do_not_depend_on_representatives() {
    let t = tol();
    let alg = fd(&[2, 3]);
    for trial in 0..50 {
        let mut rng = trial_rng(19, trial);
        let n = rng.gen_range(1..=2);
        let p = projection(&mut rng, &alg, n);
        let q = conjugate(&mut rng, &p);
        assert_eq!(KClass::of(GroupTag::K0, &p, &t).unwrap(), KClass::of(GroupTag::K0, &q, &t).unwrap());
        let u = partial_unitary(&mut rng, &alg, n);
        let w = conjugate_partial(&mut rng, &u);
        assert_eq!(KClass::of(GroupTag::K, &u, &t).unwrap(), KClass::of(GroupTag::K, &w, &t).unwrap());
        // Stabilising both sides of a pair leaves the class unchanged.
        let z = amou_ktheory::Element::zero(&alg, 1, 1);
        let a = KClass::from_pair(GroupTag::K, &u, &p, &t).unwrap();
        let b = KClass::from_pair(GroupTag::K, &u.direct_sum(&z).unwrap(), &p.direct_sum(&z).unwrap(), &t).unwrap();
        assert_eq!(a, b);
    }
}

fn conjugate_partial(rng: &mut rand_chacha::ChaCha8Rng, u: &amou_ktheory::Element) -> amou_ktheory::Element {
    let n = u.row_level();
    let w = amou_ktheory::random::unitary_frame(rng, u.algebra(), n);
    let parts = w.iter().zip(u.parts()).map(|(a, m)| &(a * m) * &a.adjoint()).collect();
    amou_ktheory::Element::new(u.algebra().clone(), n, n, parts).unwrap()
}

#[test]
fn block_permutations_induce_isomorphisms() {
    let mut rng = trial_rng(23, 0);
    let a = fd(&[2, 1, 2]);
    let swap = vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]];
    let conj = a.part_dims().iter().map(|&d| unitary_matrix(&mut rng, d)).collect();
    let phi = MorphismSpec::new(a.clone(), a.clone(), swap, conj, tol().pred).unwrap();
    let inv = phi.inverse().unwrap();
    for g in [GroupTag::K0, GroupTag::K] {
        let m = induced_map(&phi, g).unwrap();
        assert_eq!(induced_map(&inv, g).unwrap().compose(&m), IntMatrix::identity(3));
        assert_eq!(induced_map(&inv.after(&phi).unwrap(), g).unwrap(), IntMatrix::identity(3));
    }
    let view = k0_group(&a, &tol()).unwrap();
    let m = induced_map(&phi, GroupTag::K0).unwrap();
    assert_eq!(m.apply(&view.order_unit), view.order_unit);
}

#[test]
fn k_group_of_blocks_matches_k0() {
    for dims in [vec![1], vec![2, 3], vec![1, 2, 3]] {
        let alg = fd(&dims);
        let (k, k0) = (k_group(&alg, &tol()).unwrap(), k0_group(&alg, &tol()).unwrap());
        assert_eq!(k.rank, k0.rank);
        assert_eq!(k.order_unit, k0.order_unit);
        assert!(k.flags.cone_proper);
    }
}

fn class_strategy() -> impl Strategy<Value = KClass> {
    (prop::collection::vec(0i64..5, 2), prop::collection::vec(0i64..5, 2))
        .prop_map(|(p, m)| KClass::from_invariants(GroupTag::K, p, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn addition_is_an_abelian_group(x in class_strategy(), y in class_strategy(), z in class_strategy()) {
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.add(&KClass::identity(GroupTag::K, 2)), x.clone());
        prop_assert!(x.add(&x.neg()).is_identity());
        prop_assert_eq!(x.times(3), x.add(&x).add(&x));
        prop_assert_eq!(x.times(-2), x.add(&x).neg());
    }

    #[test]
    fn positive_cone_is_a_proper_cone_with_order_unit(x in class_strategy(), y in class_strategy()) {
        let view = k0_group(&fd(&[2, 3]), &tol()).unwrap();
        let (x, y) = (
            KClass::from_invariants(GroupTag::K0, x.plus, x.minus),
            KClass::from_invariants(GroupTag::K0, y.plus, y.minus),
        );
        if view.in_cone(&x) && view.in_cone(&y) {
            prop_assert!(view.in_cone(&x.add(&y)));
        }
        if view.in_cone(&x) && view.in_cone(&x.neg()) {
            prop_assert!(x.is_identity());
        }
        prop_assert!(view.le(&x, &x));
        let n = view.order_unit_bound(&x, 10);
        prop_assert!(n.is_some());
    }

    #[test]
    fn random_classes_lie_in_the_group(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let alg = fd(&[1, 2]);
        let x = random_k_class(&mut rng, &alg);
        let y = random_k_class(&mut rng, &alg);
        prop_assert_eq!(x.add(&y).sub(&y), x.clone());
        prop_assert_eq!(x.normal_form.len(), 2);
    }
}
