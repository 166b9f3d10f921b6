mod common;

use std::f64::consts::TAU;

use opensys::bargmann::{coherent_family, projector, to_bargmann_mat};
use opensys::hilbert::shift_x;
use opensys::{ComplexMatrix, UnitCirclePoint};
use proptest::prelude::*;

use common::{random_density, rng, suite};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn identities_hold(d in 2usize..=8, t1 in 0.0..TAU, t2 in 0.0..TAU, seed in any::<u64>()) {
        let mut res = suite::Residuals::default();
        let mut r = rng(seed);
        suite::check(d, UnitCirclePoint::from_angle(t1), UnitCirclePoint::from_angle(t2), &mut r, &mut res);
        let (name, worst) = res.worst();
        prop_assert!(worst <= 1e-9, "{} residual {:e}", name, worst);
    }

    #[test]
    fn family_resolves_identity_in_two_orbits(d in 2usize..=8, t in 0.0..TAU) {
        let z = UnitCirclePoint::from_angle(t);
        let fam = coherent_family(d, z).unwrap();
        let x = shift_x::<f64>(d).unwrap();
        let mut sum = ComplexMatrix::zeros(d, d);
        for (k, ket) in fam.iter().enumerate() {
            sum = &sum + &ket.projector();
            let (orbit, r) = (k / d, k % d);
            let next = &fam[orbit * d + (r + 1) % d];
            prop_assert!(x.mul_vec(ket).max_abs_diff(next) < 1e-14);
        }
        prop_assert!(sum.scale_real(0.5).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
    }

    #[test]
    fn density_images_are_density_matrices(d in 2usize..=6, t in 0.0..TAU, seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, d);
        let z = UnitCirclePoint::from_angle(t);
        let rb = to_bargmann_mat(&rho, z).unwrap();
        prop_assert!(opensys::DensityMatrix::new(rb.clone()).is_ok());
        let pp = projector(d, z).unwrap();
        prop_assert!((&(pp.pi_minus() * &rb) * pp.pi_minus()).max_abs() < 1e-12);
    }
}
