use covgrass::homogeneous::{
    block_intersection, dimension_outcome, leaf_residual, project_twisted, standard_image_symbol,
    torus_intersection_dim, Regime,
};
use covgrass::lie::{
    adjoint, build_sigma, h_element, x_minus, x_plus, Algebra, LieBasis, SigmaVariant,
};
use covgrass::linalg::CMatrix;
use covgrass::scalar::{ComplexScalar, Rational, RingElem, Tower, TowerScalar};
use covgrass::wedge::check_main_proposition;

type T = TowerScalar;

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

#[test]
fn anti_diagonal_minus_generator_is_fixed() {
    for n in [4, 5] {
        let sigma = build_sigma::<T>(&q(1, 3), 1, n, SigmaVariant::Canonical).unwrap();
        let x = x_minus::<T>(n, 1, n);
        let y = adjoint(&sigma.adjoint(), &x).unwrap();
        assert_eq!(y, x);
    }
}

#[test]
fn anti_diagonal_plus_generator_scales_by_two_c_minus_one() {
    // σ⁻¹X⁺σ = (2c−1)X⁺ + (multiple of the Cartan part); at c = 1/2 only the Cartan part survives.
    let n = 4;
    let sigma = build_sigma::<T>(&q(1, 2), 1, n, SigmaVariant::Canonical).unwrap();
    let y = adjoint(&sigma.adjoint(), &x_plus::<T>(n, 1, n)).unwrap();
    assert_eq!(*y.get(0, n - 1), ComplexScalar::zero());
    assert_eq!(*y.get(n - 1, 0), ComplexScalar::zero());
    assert!(y.get(0, 0) != &ComplexScalar::zero());
}

#[test]
fn sigma_is_orthogonal_exactly() {
    let tower = Tower::new(q(2, 5)).unwrap();
    let sigma = build_sigma::<T>(&q(2, 5), 2, 5, SigmaVariant::Canonical).unwrap();
    let id = CMatrix::<T>::identity(5);
    assert_eq!(sigma.mul(&sigma.adjoint()), id);
    assert_eq!(*sigma.get(0, 0), ComplexScalar::real(tower.sqrt_c()));
}

#[test]
fn middle_block_is_fixed() {
    let n = 5;
    let sigma = build_sigma::<T>(&q(1, 3), 1, n, SigmaVariant::Canonical).unwrap();
    let x = x_minus::<T>(n, 2, 4);
    assert_eq!(adjoint(&sigma, &x).unwrap(), x);
    // H_2 = i(e_22 − e_55) reaches the rotated corner and moves.
    let h = h_element::<T>(n, 2);
    assert_ne!(adjoint(&sigma, &h).unwrap(), h);
}

#[test]
fn proposition_holds_on_small_grid() {
    for (n, m) in [(3, 1), (4, 1), (4, 2), (5, 2)] {
        for c in [q(1, 3), q(1, 2)] {
            let r = check_main_proposition::<T>(n, m, &c, 0.0).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.max_residual, 0.0);
        }
    }
}

#[test]
fn line_orbits_have_dimension_two_n_minus_three() {
    for n in 3..=6 {
        for l in 1..n {
            let o = dimension_outcome(n, 1, l, &q(1, 3)).unwrap();
            assert_eq!(o.image_dim, 2 * n - 3, "n={n} l={l}");
        }
    }
}

#[test]
fn stiefel_regime_dimension() {
    let o = dimension_outcome(6, 2, 2, &q(2, 5)).unwrap();
    assert_eq!(o.regime, Regime::Stiefel);
    // V_2(ℂ⁴) has real dimension k(2m − k) = 2·(8 − 2).
    assert_eq!(o.stiefel_dim, Some(12));
    assert_eq!(o.image_dim, 12);
    assert_eq!(o.codimension, 4);
}

#[test]
fn torus_meets_twisted_block_in_n_minus_k_minus_one() {
    for (n, k) in [(4, 1), (4, 2), (5, 1), (5, 2)] {
        assert_eq!(torus_intersection_dim(n, k, &q(1, 3)).unwrap(), n - k - 1);
    }
}

#[test]
fn half_twist_symmetric_block_is_self_matched() {
    let basis = LieBasis::new(4, Algebra::Su);
    let a = block_intersection::<T>(&basis, &q(1, 2), 2, 2).unwrap();
    let b = block_intersection::<T>(&basis, &q(1, 2), 2, 2).unwrap();
    assert!(a.same_echelon(&b));
    assert_eq!(a.dim(), 4 + 4 - 1 - 4);
}

#[test]
fn twisted_base_point_solves_leaf_equation() {
    let sigma = build_sigma::<f64>(&q(2, 3), 1, 4, SigmaVariant::SignVariant).unwrap();
    let p = project_twisted(&CMatrix::identity(4), 1, &sigma).unwrap();
    assert!(leaf_residual(&p, 1, &q(1, 3)).unwrap().abs() < 1e-12);
}

#[test]
fn standard_symbols() {
    assert_eq!(standard_image_symbol(1, 1, 4).unwrap().entries(), &[0]);
    assert_eq!(standard_image_symbol(3, 1, 4).unwrap().entries(), &[2]);
    assert_eq!(
        standard_image_symbol(2, 3, 5).unwrap().entries(),
        &[0, 0, 2]
    );
}
