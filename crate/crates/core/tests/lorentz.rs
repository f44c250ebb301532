use jacobi_core::lorentz::{
    distribution_function, lorentz_norm, lp_norm, rearrangement, LevelProfile, LorentzIndex,
};
use jacobi_core::measure::{density_a, mu_ball};
use jacobi_core::{GridSpec, JacobiParams, RadialFunction};
use proptest::prelude::*;

fn rank_one() -> JacobiParams {
    JacobiParams::new(0.5, -0.5).unwrap()
}

/// The piecewise-linear interpolant the norms are defined on.
fn linear(f: &RadialFunction, x: f64) -> f64 {
    let xs = f.nodes();
    let a = f.abs_values();
    if x <= xs[0] {
        return a[0];
    }
    if x > xs[xs.len() - 1] {
        return 0.0;
    }
    let i = xs.partition_point(|&v| v < x).max(1);
    let w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    a[i - 1] * (1.0 - w) + a[i] * w
}

/// Distribution function from many small subcells sorted by value.
fn sorted_cell_distribution(p: &JacobiParams, f: &RadialFunction, s: f64) -> f64 {
    let n = 40_000;
    let h = f.x_max() / n as f64;
    let mut total = 0.0;
    for k in 0..n {
        let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
        let m = mu_ball(p, b) - mu_ball(p, a);
        if linear(f, 0.5 * (a + b)) > s {
            total += m;
        }
    }
    total
}

#[test]
fn monotone_profile_has_exact_superlevel_sets() {
    let p = rank_one();
    let xs = GridSpec::geometric(1e-3, 6.0, 200).nodes().unwrap();
    let f = RadialFunction::from_real_fn(xs.clone(), |x| (-x).exp()).unwrap();
    for &s in &[0.9, 0.5, 0.1, 0.01] {
        // invert the interpolant on its cell
        let k = xs.partition_point(|&x| (-x).exp() > s);
        let (x0, x1) = (xs[k - 1], xs[k]);
        let (v0, v1) = ((-x0).exp(), (-x1).exp());
        let xs_ = x0 + (v0 - s) / (v0 - v1) * (x1 - x0);
        let exact = mu_ball(&p, xs_);
        let d = distribution_function(&p, &f, s).unwrap();
        assert!((d - exact).abs() < 1e-10 * exact, "s={s}: {d} vs {exact}");
        let r = rearrangement(&p, &f, exact).unwrap();
        assert!((r - s).abs() < 1e-8 * s, "f*(d(s)) = {r} vs {s}");
    }
}

#[test]
fn oscillating_profile_matches_sorted_cells() {
    let p = JacobiParams::new(1.0, 0.0).unwrap();
    let xs = GridSpec::uniform(1e-3, 4.0, 300).nodes().unwrap();
    let f = RadialFunction::from_real_fn(xs, |x| (-x).exp() * (1.0 + 0.8 * (4.0 * x).sin())).unwrap();
    for &s in &[0.05, 0.3, 0.8, 1.2] {
        let d = distribution_function(&p, &f, s).unwrap();
        let oracle = sorted_cell_distribution(&p, &f, s);
        assert!((d - oracle).abs() < 2e-3 * oracle.max(1e-3), "s={s}: {d} vs {oracle}");
    }
}

#[test]
fn equimeasurability() {
    let p = JacobiParams::new(0.0, 0.0).unwrap();
    let xs = GridSpec::geometric(1e-3, 5.0, 250).nodes().unwrap();
    let f = RadialFunction::from_real_fn(xs, |x| (1.0 + (3.0 * x).cos()) * (-0.8 * x).exp()).unwrap();
    let prof = LevelProfile::new(&p, &f);
    let total = prof.total_mass();
    for &e in &[1.0, 2.0, 3.5] {
        let lhs = lp_norm(&p, &f, e).unwrap().powf(e);
        // ∫_0^{μ} f*(t)^e dt on a log grid in t
        let n = 4000;
        let (a, b) = (1e-9f64.ln(), total.ln());
        let mut rhs = prof.max().powf(e) * 1e-9;
        let mut prev_t = 1e-9;
        let mut prev_v = prof.rearrangement(prev_t).powf(e);
        for k in 1..=n {
            let t = (a + (b - a) * k as f64 / n as f64).exp();
            let v = prof.rearrangement(t).powf(e);
            rhs += 0.5 * (v + prev_v) * (t - prev_t);
            prev_t = t;
            prev_v = v;
        }
        assert!((lhs - rhs).abs() < 1e-4 * lhs, "e={e}: {lhs} vs {rhs}");
    }
}

#[test]
fn diagonal_lorentz_norm_is_lp_norm() {
    let p = JacobiParams::new(2.0, 1.0).unwrap();
    let xs = GridSpec::geometric(1e-3, 6.0, 300).nodes().unwrap();
    let f = RadialFunction::from_real_fn(xs.clone(), |x| (-2.0 * x * x).exp() * (2.0 + x.sin())).unwrap();
    for &e in &[1.0, 1.5, 4.0] {
        let a = lorentz_norm(&p, &f, LorentzIndex::new(e, e).unwrap()).unwrap().value;
        // direct quadrature of |f_lin|^e A with many midpoint cells
        let n = 60_000;
        let h = 6.0 / n as f64;
        let b: f64 = (0..n)
            .map(|k| {
                let x = (k as f64 + 0.5) * h;
                linear(&f, x).powf(e) * density_a(&p, x).unwrap() * h
            })
            .sum::<f64>()
            .powf(1.0 / e);
        assert!((a - b).abs() < 1e-6 * b, "e={e}: {a} vs {b}");
    }
}

#[test]
fn truncation_flag() {
    let p = rank_one();
    let xs = GridSpec::uniform(1e-3, 5.0, 100).nodes().unwrap();
    let slow = RadialFunction::from_real_fn(xs.clone(), |x| (-0.1 * x).exp()).unwrap();
    let fast = RadialFunction::from_real_fn(xs, |x| (-x * x).exp()).unwrap();
    let idx = LorentzIndex::new(2.0, 2.0).unwrap();
    assert!(lorentz_norm(&p, &slow, idx).unwrap().truncated);
    assert!(!lorentz_norm(&p, &fast, idx).unwrap().truncated);
}

#[test]
fn index_validation() {
    assert!(LorentzIndex::new(0.5, 1.0).is_err());
    assert!(LorentzIndex::new(f64::INFINITY, 1.0).is_err());
    assert!(LorentzIndex::new(2.0, 0.5).is_err());
    assert!(LorentzIndex::weak(3.0).is_ok());
    assert_eq!(LorentzIndex::new(3.0, 1.0).unwrap().conjugate_p(), 1.5);
}

fn profile() -> impl Strategy<Value = RadialFunction> {
    (0.2f64..3.0, 0.0f64..0.9, 0.5f64..6.0, 0.5f64..2.0).prop_map(|(a, b, w, s)| {
        let xs = GridSpec::geometric(1e-3, 6.0, 120).nodes().unwrap();
        RadialFunction::from_real_fn(xs, |x| s * (-a * x).exp() * (1.0 + b * (w * x).cos())).unwrap()
    })
}

fn index() -> impl Strategy<Value = LorentzIndex> {
    (1.0f64..5.0, prop_oneof![1.0f64..6.0, Just(f64::INFINITY)])
        .prop_map(|(p, q)| LorentzIndex::new(p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn homogeneous(f in profile(), idx in index(), c in 0.01f64..50.0) {
        let p = rank_one();
        let a = lorentz_norm(&p, &f, idx).unwrap().value;
        let b = lorentz_norm(&p, &f.scale(jacobi_core::Complex64::new(0.0, c)), idx).unwrap().value;
        prop_assert!((b - c * a).abs() <= 1e-9 * c * a);
    }

    #[test]
    fn nested_in_second_index(f in profile(), e in 1.0f64..5.0, q1 in 1.0f64..4.0, dq in 0.1f64..4.0) {
        let p = rank_one();
        let small = lorentz_norm(&p, &f, LorentzIndex::new(e, q1).unwrap()).unwrap().value;
        let large = lorentz_norm(&p, &f, LorentzIndex::new(e, q1 + dq).unwrap()).unwrap().value;
        let weak = lorentz_norm(&p, &f, LorentzIndex::weak(e).unwrap()).unwrap().value;
        prop_assert!(large <= small * (1.0 + 1e-8));
        prop_assert!(weak <= large * (1.0 + 1e-8));
    }

    #[test]
    fn monotone_in_the_function(f in profile(), idx in index(), k in 0.0f64..1.0) {
        let p = rank_one();
        let g = f.map(|x, v| v * (k + (1.0 - k) * (-x).exp()));
        let a = lorentz_norm(&p, &g, idx).unwrap().value;
        let b = lorentz_norm(&p, &f, idx).unwrap().value;
        prop_assert!(a <= b * (1.0 + 1e-9));
    }

    #[test]
    fn distribution_is_nonincreasing(f in profile(), s1 in 0.0f64..2.0, ds in 0.0f64..1.0) {
        let p = rank_one();
        let prof = LevelProfile::new(&p, &f);
        prop_assert!(prof.distribution(s1 + ds) <= prof.distribution(s1));
        prop_assert!(prof.distribution(s1) <= prof.distribution_left(s1));
    }
}
