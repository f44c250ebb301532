use jacobi_core::dynamics::{
    classify, eigenfunction_phi_z, omega_root, periodic_eigenvalues, principal_root, theta_threshold,
    verify_eigen_residual, ParabolicRegion, StripPosition, StripRegion, Verdict,
};
use jacobi_core::{Complex64, Error, GridSpec, JacobiParams};
use proptest::prelude::*;

fn rank_one() -> JacobiParams {
    JacobiParams::new(0.5, -0.5).unwrap()
}

#[test]
fn verdict_table() {
    let p = rank_one();
    assert_eq!(classify(&p, 4.0, 0.8).verdict, Verdict::Chaotic);
    assert_eq!(classify(&p, 4.0, 0.7).verdict, Verdict::Unclassified);
    assert_eq!(classify(&p, 2.0, 5.0).verdict, Verdict::NoPeriodicPoints);
    assert_eq!(classify(&p, 1.5, 5.0).verdict, Verdict::NoPeriodicPointsNotHypercyclic);
    let out = classify(&p, 1.0, 0.0);
    assert_eq!(out.verdict, Verdict::Unclassified);
    assert!(out.theta_p.is_none());
    assert_eq!(Verdict::NoPeriodicPoints.as_str(), "no-periodic-points");
}

#[test]
fn omega_root_errors() {
    let p = rank_one();
    assert!(matches!(omega_root(&p, 1.5, 1.0, Complex64::new(0.0, 1.0)), Err(Error::Domain(_))));
    // z + θ - ρ² on the nonpositive axis
    assert!(matches!(omega_root(&p, 4.0, 1.0, Complex64::new(-0.5, 0.0)), Err(Error::Slit { .. })));
    // far up the imaginary axis the root leaves the strip
    assert!(matches!(omega_root(&p, 4.0, 1.0, Complex64::new(0.0, 5.0)), Err(Error::Region { .. })));
}

#[test]
fn periodic_points_by_period() {
    let p = rank_one();
    // for θ = ρ² the admissible z = 2πik/T satisfy |Im √z| < 1/2, i.e. |z| < 1/2
    for &(period, expect) in &[(100.0, 14usize), (20.0, 2), (5.0, 0)] {
        let zs = periodic_eigenvalues(&p, 4.0, 1.0, period).unwrap();
        let count = 2 * (1..).take_while(|&k| 2.0 * std::f64::consts::PI * k as f64 / period < 0.5).count();
        assert_eq!(zs.len(), expect);
        assert_eq!(zs.len(), count);
        assert!(zs.windows(2).all(|w| w[0].im < w[1].im));
    }
    assert!(periodic_eigenvalues(&p, 1.5, 1.0, 100.0).unwrap().is_empty());
}

#[test]
fn eigenfunctions_for_general_order() {
    let p = JacobiParams::new(1.5, 0.5).unwrap();
    let xs = GridSpec::uniform(0.05, 5.0, 1000).nodes().unwrap();
    let theta = theta_threshold(&p, 3.0).unwrap() + 0.5;
    for z in [Complex64::new(0.3, 0.4), Complex64::new(1.0, -0.2)] {
        let (lambda, phi) = eigenfunction_phi_z(&p, 3.0, theta, z, &xs).unwrap();
        assert!((lambda * lambda + p.rho() * p.rho() - theta - z).norm() < 1e-12);
        assert!(verify_eigen_residual(&p, theta, z, &phi).unwrap() < 1e-6);
    }
}

#[test]
fn threshold_symmetry() {
    let p = JacobiParams::new(2.0, 1.0).unwrap();
    for &e in &[1.1, 1.5, 3.0, 7.0] {
        let a = theta_threshold(&p, e).unwrap();
        let b = theta_threshold(&p, e / (e - 1.0)).unwrap();
        assert!((a - b).abs() <= 1e-14 * a);
        assert!(a <= p.rho() * p.rho());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn strip_and_parabola_are_dual(e in 1.05f64..8.0, re in 0.0f64..5.0, im in -3.0f64..3.0, rho in 0.2f64..3.0) {
        let strip = StripRegion::new(e, rho).unwrap();
        let parabola = ParabolicRegion::new(e, rho).unwrap();
        let lambda = Complex64::new(re, im);
        let z = lambda * lambda + rho * rho;
        let hw = strip.half_width();
        prop_assume!((im.abs() - hw).abs() > 1e-6 && re > 1e-6);
        let inside = strip.position(lambda) == StripPosition::Interior;
        prop_assert_eq!(inside, parabola.contains(z));
    }

    #[test]
    fn principal_root_squares_back(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let w = Complex64::new(re, im);
        let r = principal_root(w);
        prop_assert!(r.re >= 0.0);
        prop_assert!((r * r - w).norm() <= 1e-12 * w.norm().max(1.0));
    }

    #[test]
    fn chaotic_exactly_above_threshold(e in 1.05f64..8.0, theta in -1.0f64..2.0) {
        let p = rank_one();
        let v = classify(&p, e, theta);
        let expect = e > 2.0 && theta > theta_threshold(&p, e).unwrap();
        prop_assert_eq!(v.verdict == Verdict::Chaotic, expect);
    }
}
