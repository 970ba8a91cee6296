use proptest::prelude::*;

use covgrass::homogeneous::{
    bruhat_leq, check_symmetry_conjugate, generic_cell_point, intersection_dim, project,
    project_twisted, schubert_membership, SchubertSymbol,
};
use covgrass::lie::sample::{haar_unitary, sample_rng};
use covgrass::lie::{
    adjoint, anti_hermitian_residual, build_sigma, Algebra, LieBasis, SigmaVariant,
};
use covgrass::scalar::{Rational, TowerScalar};
use covgrass::wedge::check_main_proposition;

fn twist() -> impl Strategy<Value = Rational> {
    (1i64..=9, 2i64..=10)
        .prop_filter_map("0 < c < 1", |(a, b)| (a < b).then(|| Rational::new(a, b)))
}

fn symbol(n: usize, k: usize) -> impl Strategy<Value = SchubertSymbol> {
    proptest::collection::vec(0..=n - k, k).prop_map(move |mut a| {
        a.sort_unstable();
        SchubertSymbol::new(n, a).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn proposition_for_random_twists(c in twist(), n in 3usize..=5, m in 1usize..=2) {
        prop_assume!(2 * m <= n);
        let r = check_main_proposition::<TowerScalar>(n, m, &c, 0.0).unwrap();
        prop_assert!(r.pass);
    }

    #[test]
    fn flipped_intersections_match(c in twist(), n in 3usize..=5, k in 1usize..=2, l in 1usize..5) {
        prop_assume!(2 * k <= n && l < n);
        prop_assert!(check_symmetry_conjugate(n, k, l, &c).unwrap().pass);
    }

    #[test]
    fn sigma_conjugation_keeps_anti_hermitian(c in twist(), seed in any::<u64>(), a in 0usize..15) {
        let basis = LieBasis::new(4, Algebra::Su);
        let sigma = build_sigma::<f64>(&c, 1, 4, SigmaVariant::Canonical).unwrap();
        let x = basis.basis_matrix::<f64>(a);
        let g = haar_unitary(4, &mut sample_rng(seed, 0), true);
        let y = adjoint(&g.mul(&sigma), &x).unwrap();
        prop_assert!(anti_hermitian_residual(&y) < 1e-12);
    }

    #[test]
    fn projections_are_rank_k_projectors(seed in any::<u64>(), n in 2usize..=5, k in 1usize..=4, c in twist()) {
        prop_assume!(k < n);
        let g = haar_unitary(n, &mut sample_rng(seed, 1), true);
        let p = project(&g, k).unwrap();
        prop_assert!(p.invariant_residual() < 1e-10);
        let m = k.min(n - k);
        let sigma = build_sigma::<f64>(&c, m, n, SigmaVariant::Canonical).unwrap();
        let pt = project_twisted(&g, k, &sigma).unwrap();
        prop_assert!(pt.invariant_residual() < 1e-10);
        prop_assert_eq!(intersection_dim(&pt, n), k);
        prop_assert_eq!(intersection_dim(&pt, 0), 0);
    }

    #[test]
    fn bruhat_order_is_partial(s in symbol(5, 2), t in symbol(5, 2), u in symbol(5, 2)) {
        prop_assert!(bruhat_leq(&s, &s).unwrap());
        if bruhat_leq(&s, &t).unwrap() && bruhat_leq(&t, &s).unwrap() {
            prop_assert_eq!(&s, &t);
        }
        if bruhat_leq(&s, &t).unwrap() && bruhat_leq(&t, &u).unwrap() {
            prop_assert!(bruhat_leq(&s, &u).unwrap());
        }
    }

    #[test]
    fn cell_points_lie_in_their_closure(s in symbol(6, 3), seed in any::<u64>()) {
        let p = generic_cell_point(&s, &mut sample_rng(seed, 2));
        prop_assert!(schubert_membership(&p, &s).unwrap());
        let top = SchubertSymbol::new(6, vec![3, 3, 3]).unwrap();
        prop_assert!(schubert_membership(&p, &top).unwrap());
    }
}
