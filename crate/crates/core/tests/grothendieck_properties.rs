mod common;

use opensys::bargmann::projector;
use opensys::grothendieck::{
    classical_form, component_q, dequantisation_matrix, g_lower, g_prime, normalize_rescaling, quantum_form,
    rescaling_norm, tomography_q, tomography_rescaling, weyl_q, wigner_q, window_check, K_G_UPPER,
};
use opensys::hilbert::{matrix_one_norm, position_basis};
use opensys::{AscentOptions, Complex, ComplexMatrix, UnitCirclePoint, UnitDiscVector};
use proptest::prelude::*;
use rand::Rng;

use common::{grid_oracle_g, random_hermitian, random_ket, random_matrix, random_unitary, rel_diff, rng};

fn random_disc(r: &mut impl Rng, n: usize) -> UnitDiscVector {
    UnitDiscVector::new((0..n).map(|_| Complex::from_polar(r.random::<f64>(), r.random::<f64>() * 6.3)).collect())
        .unwrap()
}

fn random_rescaling(r: &mut impl Rng, n: usize) -> ComplexMatrix {
    let lambda = r.random_range(0.2..1.0);
    normalize_rescaling(&random_matrix(r, n, n), lambda).unwrap().into_matrix()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ascent_respects_upper_bounds(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let theta = random_matrix(&mut r, n, n);
        let rep = g_lower(&theta, AscentOptions::new(8, seed)).unwrap();
        prop_assert!(rep.g_lower <= rep.g_prime + 1e-9);
        prop_assert!(rep.g_lower <= rep.one_norm + 1e-9);
        let c = classical_form(&theta, &rep.witness_a, &rep.witness_b).unwrap();
        prop_assert!((c - rep.g_lower).abs() < 1e-12);
    }

    #[test]
    fn g_prime_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let theta = random_matrix(&mut r, n, n);
        let u = random_unitary(&mut r, n);
        let moved = &(&u * &theta) * &u.adjoint();
        prop_assert!((g_prime(&moved).unwrap() - g_prime(&theta).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn classical_form_through_dequantisation(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let theta = random_matrix(&mut r, n, n);
        let a = random_disc(&mut r, n);
        let b = random_disc(&mut r, n);
        let lhs = classical_form(&theta, &a, &b).unwrap();
        let qa = dequantisation_matrix(&a.conj()).into_matrix();
        let qb = dequantisation_matrix(&b).into_matrix();
        let rhs = (&(&qa.adjoint() * &theta) * &qb).trace().norm();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn pure_and_diagonal_states_stay_classical(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let f = random_ket(&mut r, n);
        let g = f.l1_norm().powi(2);
        let v = random_rescaling(&mut r, n);
        let w = random_rescaling(&mut r, n);
        prop_assert!(quantum_form(&f.projector(), &v, &w, g).unwrap() <= 1.0 + 1e-9);
        let p: Vec<f64> = (0..n).map(|_| r.random_range(0.01..1.0)).collect();
        let s: f64 = p.iter().sum();
        let diag = ComplexMatrix::from_real_diag(&p.iter().map(|x| x / s).collect::<Vec<_>>());
        prop_assert!(quantum_form(&diag, &v, &w, 1.0).unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn measurable_quantities_bounded(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let f = random_ket(&mut r, n);
        let (a, b, c) = (r.random_range(0..n as i64), r.random_range(0..n as i64), r.random_range(0..n as i64));
        prop_assert!(weyl_q(&f, a, b, c).unwrap() <= 1.0 + 1e-12);
        prop_assert!(wigner_q(&f, a, b).unwrap() <= 1.0 + 1e-12);
        let u = random_unitary(&mut r, n);
        let total: f64 = (0..n).map(|nu| tomography_q(&f, &u, nu).unwrap()).sum();
        prop_assert!((total * f.l1_norm().powi(2) - 1.0).abs() < 1e-10);
        for nu in 0..n {
            prop_assert!(rescaling_norm(&tomography_rescaling(&u, nu).unwrap()) <= 1.0 + 1e-12);
        }
        let h = random_hermitian(&mut r, n);
        let t = r.random_range(0.0..5.0);
        let sq: f64 = (0..n).map(|nu| component_q(&f, &h, t, nu).unwrap().powi(2)).sum();
        prop_assert!((sq - 1.0 / f.l1_norm().powi(2)).abs() < 1e-10);
    }
}

#[test]
fn grothendieck_bound_where_g_is_certified() {
    let mut r = rng(21);
    for k in 0..60 {
        let n = 1 + k % 3;
        let theta = random_matrix(&mut r, n, n);
        let g = g_lower(&theta, AscentOptions::default()).unwrap().g_lower;
        assert!(rel_diff(g, grid_oracle_g(&theta)) <= 1e-6);
        for _ in 0..20 {
            let v = random_rescaling(&mut r, n);
            let w = random_rescaling(&mut r, n);
            assert!(quantum_form(&theta, &v, &w, g).unwrap() <= K_G_UPPER * (1.0 + 1e-6));
        }
    }
}

#[test]
fn ascent_is_reproducible() {
    let theta = random_matrix(&mut rng(22), 5, 5);
    let opts = AscentOptions::new(12, 99);
    let a = g_lower(&theta, opts).unwrap();
    let b = g_lower(&theta, opts).unwrap();
    assert_eq!(a.g_lower, b.g_lower);
    assert_eq!(a.witness_a, b.witness_a);
}

#[test]
fn window_examples() {
    let opts = AscentOptions::default();
    let f = random_ket(&mut rng(23), 4);
    let pure = f.projector();
    assert!(!window_check(&pure, &g_lower(&pure, opts).unwrap()));
    let diag = ComplexMatrix::from_real_diag(&[0.1, 0.6, 0.3]);
    assert!(!window_check(&diag, &g_lower(&diag, opts).unwrap()));
    let pp = projector(3, UnitCirclePoint::from_pi_fraction(1, 4)).unwrap();
    let rep = g_lower(pp.pi_plus(), opts).unwrap();
    assert!((rep.g_prime - 6.0).abs() < 1e-10);
    assert!((matrix_one_norm(pp.pi_plus()) - 9.0).abs() < 1e-12);
    assert!(window_check(pp.pi_plus(), &rep));
    assert!(rep.window_open);
}

#[test]
fn projector_form_reduces_to_two_d_over_g() {
    let d = 3;
    let pp = projector(d, UnitCirclePoint::from_pi_fraction(1, 5)).unwrap();
    let pi = pp.pi_plus();
    let g = g_lower(pi, AscentOptions::default()).unwrap().g_lower;
    let theta = pi.scale_real(1.0 / d as f64);
    let q = quantum_form(&theta, pi, pi, g / d as f64).unwrap();
    assert!((q - 2.0 * d as f64 / g).abs() < 1e-12);
    assert!(q > 1.0);
}

#[test]
fn position_states_in_weyl_and_tomography() {
    let d = 5;
    let e0 = position_basis::<f64>(d, 0).unwrap();
    for b in 0..d as i64 {
        let expect = if b == 0 { 1.0 } else { 0.0 };
        assert!((weyl_q(&e0, 2, b, 1).unwrap() - expect).abs() < 1e-14);
    }
    assert!((wigner_q(&e0, 0, 0).unwrap() - 1.0).abs() < 1e-14);
    let id = ComplexMatrix::identity(d);
    assert!((tomography_q(&e0, &id, 0).unwrap() - 1.0).abs() < 1e-14);
    assert!(tomography_q(&e0, &id, 3).unwrap().abs() < 1e-14);
}
