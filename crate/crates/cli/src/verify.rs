//! Self-checks run against the resolved configuration.

use std::f64::consts::PI;

use clap::ValueEnum;
use jacobi_core::dynamics::{
    classify, dsw_pairing, eigenfunction_phi_z, periodic_eigenvalues, theta_threshold,
    verify_eigen_residual, Verdict,
};
use jacobi_core::heat::{heat_kernel, ln_heat_kernel_value, ln_sharp_bound, HeatQuery};
use jacobi_core::lorentz::{lorentz_norm, lp_norm, LorentzIndex};
use jacobi_core::measure::{mu_ball, mu_integral};
use jacobi_core::special::{apply_jacobi_operator, c_function, jacobi_phi_sorted, plancherel_density};
use jacobi_core::transform::auto_lambda_max;
use jacobi_core::{Complex64, GridSpec, JacobiParams, JacobiTransform, RadialFunction};
use serde::Serialize;

use crate::config::{RunConfig, AUTO_LAMBDA_CAP};
use crate::io::{Check, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Special,
    Transform,
    Heat,
    Lorentz,
    Dynamics,
    All,
}

impl Suite {
    fn name(&self) -> &'static str {
        match self {
            Suite::Special => "special",
            Suite::Transform => "transform",
            Suite::Heat => "heat",
            Suite::Lorentz => "lorentz",
            Suite::Dynamics => "dynamics",
            Suite::All => "all",
        }
    }
}

type Checks = Vec<Check>;

fn is_rank_one(p: &JacobiParams) -> bool {
    p.alpha() == 0.5 && p.beta() == -0.5
}

fn rank_one_heat(t: f64, x: f64) -> f64 {
    x * (-t - x * x / (4.0 * t)).exp() / (8.0 * PI.sqrt() * t.powf(1.5) * x.sinh())
}

fn l2_sq(p: &JacobiParams, f: &RadialFunction) -> jacobi_core::Result<f64> {
    Ok(mu_integral(p, &f.map(|_, v| Complex64::new(v.norm_sqr(), 0.0)))?.value.re)
}

fn special(cfg: &RunConfig, out: &mut Checks) -> jacobi_core::Result<()> {
    let p = cfg.params()?;
    let xs = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];

    let ones = jacobi_phi_sorted(&p, Complex64::new(0.0, p.rho()), &xs)?;
    let err = ones.iter().map(|v| (v - 1.0).norm()).fold(0.0, f64::max);
    out.push(Check::at_most("phi_at_i_rho_minus_one", err, 1e-10));

    let ground = jacobi_phi_sorted(&p, Complex64::new(0.0, 0.0), &xs)?;
    let mut excess: f64 = 0.0;
    for l in [0.5, 2.0, 5.0] {
        let v = jacobi_phi_sorted(&p, Complex64::new(l, 0.0), &xs)?;
        for (a, g) in v.iter().zip(&ground) {
            excess = excess.max(a.norm() - g.re);
        }
    }
    out.push(Check::at_most("phi_bound_excess", excess.max(0.0), 1e-12));

    let h = 0.005;
    let grid: Vec<f64> = (0..=984).map(|i| 0.09 + h * i as f64).collect();
    let mut worst: f64 = 0.0;
    for lambda in [Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.3)] {
        let phi = RadialFunction::new(grid.clone(), jacobi_phi_sorted(&p, lambda, &grid)?)?;
        let d = apply_jacobi_operator(&p, &phi)?;
        let ev = lambda * lambda + p.rho() * p.rho();
        let off = grid.partition_point(|&x| x < d.nodes()[0]);
        for (k, dv) in d.values().iter().enumerate() {
            worst = worst.max((dv - ev * phi.values()[off + k]).norm() / ev.norm().max(1.0));
        }
    }
    out.push(Check::at_most("eigen_residual", worst, 1e-6));

    if is_rank_one(&p) {
        let mut worst: f64 = 0.0;
        let pts: Vec<f64> = (0..=149).map(|i| 0.1 + 0.1 * i as f64).collect();
        for l in [0.5, 1.0, 2.0, 5.0] {
            let v = jacobi_phi_sorted(&p, Complex64::new(l, 0.0), &pts)?;
            for (&x, v) in pts.iter().zip(&v) {
                let exact = (l * x).sin() / (l * x.sinh());
                worst = worst.max((v - exact).norm() / exact.abs().max(1.0 / (l * x.sinh())));
            }
        }
        out.push(Check::at_most("closed_form_rel_err", worst, 1e-8));
        let mut worst: f64 = 0.0;
        for l in [0.5, 1.0, 2.0, 5.0] {
            let c = c_function(&p, Complex64::new(l, 0.0))?;
            worst = worst.max((c - Complex64::new(0.0, -1.0 / l)).norm() * l);
            worst = worst.max((plancherel_density(&p, l)? - l * l).abs() / (l * l));
        }
        out.push(Check::at_most("c_function_rel_err", worst, 1e-10));
    }
    Ok(())
}

fn transform(cfg: &RunConfig, out: &mut Checks) -> jacobi_core::Result<()> {
    let p = cfg.params()?;
    let xs = cfg.nodes()?;
    let f = RadialFunction::from_real_fn(xs.clone(), |x| (-x * x).exp())?;
    let lambda_max = match cfg.explicit_lambda_max() {
        Some(l) => l,
        None => auto_lambda_max(&p, &f, cfg.quad.tol, AUTO_LAMBDA_CAP)?,
    };
    let quad = cfg.clone().fix_quadrature(lambda_max)?;
    let tr = JacobiTransform::new(&p, &xs, &quad)?;
    let fh = tr.forward(&f)?;
    let back = tr.inverse(&fh)?;
    let norm = l2_sq(&p, &f)?;
    let err = (l2_sq(&p, &back.zip_with(&f, |a, b| a - b)?)? / norm).sqrt();
    let tol = if is_rank_one(&p) { 1e-6 } else { 1e-4 };
    out.push(Check::at_most("round_trip_rel_l2", err, tol));
    let planch = (tr.spectral_norm_sq(&fh) - norm).abs() / norm;
    out.push(Check::at_most("plancherel_rel", planch, 1e-4));
    let same = tr.translate(&f, 0.0)?;
    let err = (l2_sq(&p, &same.zip_with(&f, |a, b| a - b)?)? / norm).sqrt();
    out.push(Check::at_most("translation_by_zero_rel_l2", err, tol));
    Ok(())
}

fn heat(cfg: &RunConfig, t: f64, out: &mut Checks) -> jacobi_core::Result<()> {
    let p = cfg.params()?;
    let xs = cfg.nodes()?;
    let mut c = cfg.clone();
    let quad = c.fix_quadrature(cfg.explicit_lambda_max().unwrap_or(40.0))?;
    let k = heat_kernel(&HeatQuery::new(p, t, 0.0)?, &xs, &quad)?;
    let mass = mu_integral(&p, &k)?.value.re;
    out.push(Check::new("mass", mass, 1e-4, (mass - 1.0).abs() <= 1e-4));
    let min = k.values().iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
    out.push(Check::new("min", min, -1e-10, min >= -1e-10));

    if is_rank_one(&p) {
        let mut worst: f64 = 0.0;
        for (&x, v) in xs.iter().zip(k.values()) {
            if x <= 15.0 {
                let exact = rank_one_heat(t, x);
                worst = worst.max((v.re - exact).abs() / exact);
            }
        }
        out.push(Check::at_most("closed_form_rel_err", worst, 1e-8));
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..20 {
            let s = 0.1 + 4.9 * i as f64 / 19.0;
            for j in 0..20 {
                let x = 0.1 + 14.9 * j as f64 / 19.0;
                let r = (ln_heat_kernel_value(&p, s, x, 1e-12)? - ln_sharp_bound(&p, s, x)).exp();
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        out.push(Check::new("sharp_ratio_min", lo, 0.0695, lo >= 0.0695));
        out.push(Check::new("sharp_ratio_max", hi, 0.142, hi <= 0.142));
    }
    Ok(())
}

fn lorentz(cfg: &RunConfig, out: &mut Checks) -> jacobi_core::Result<()> {
    let p = cfg.params()?;
    let r = 1.3;
    let ind = RadialFunction::from_real_fn(GridSpec::uniform(1e-3, r, 100).nodes()?, |_| 1.0)?;
    let mu_e = mu_ball(&p, r);
    let mut worst: f64 = 0.0;
    for e in [1.5, 2.0, 3.0] {
        for q in [1.0, 2.0, f64::INFINITY] {
            let v = lorentz_norm(&p, &ind, LorentzIndex::new(e, q)?)?.value;
            let exact = mu_e.powf(1.0 / e);
            worst = worst.max((v - exact).abs() / exact);
        }
    }
    out.push(Check::at_most("indicator_norm_rel_err", worst, 1e-6));

    let xs = cfg.nodes()?;
    let f = RadialFunction::from_real_fn(xs, |x| (-1.5 * x).exp() * (1.0 + 0.5 * (3.0 * x).cos()))?;
    let mut worst: f64 = 0.0;
    for e in [1.5, 2.0, 3.0] {
        let a = lorentz_norm(&p, &f, LorentzIndex::new(e, e)?)?.value;
        let b = lp_norm(&p, &f, e)?;
        worst = worst.max((a - b).abs() / b);
    }
    out.push(Check::at_most("diagonal_vs_lp_rel_err", worst, 1e-6));

    let idx = LorentzIndex::new(3.0, 1.5)?;
    let a = lorentz_norm(&p, &f, idx)?.value;
    let b = lorentz_norm(&p, &f.scale(Complex64::new(0.0, 7.0)), idx)?.value;
    out.push(Check::at_most("homogeneity_rel_err", (b - 7.0 * a).abs() / (7.0 * a), 1e-10));
    Ok(())
}

fn dynamics(cfg: &RunConfig, out: &mut Checks) -> jacobi_core::Result<()> {
    let p = cfg.params()?;
    let rho = p.rho();
    let mut worst: f64 = 0.0;
    for e in [1.5f64, 2.0, 3.0, 4.0] {
        let other = rho * rho - rho * rho * (2.0 / e - 1.0).powi(2);
        worst = worst.max((theta_threshold(&p, e)? - other).abs());
    }
    out.push(Check::at_most("theta_p_forms", worst, 1e-14));

    let mut mismatches = 0usize;
    for i in 0..50 {
        let e = 1.05 + 6.0 * i as f64 / 49.0;
        for j in 0..50 {
            let theta = rho * rho * (-0.5 + 2.0 * j as f64 / 49.0);
            let expect = e > 2.0 && theta > theta_threshold(&p, e)?;
            if (classify(&p, e, theta).verdict == Verdict::Chaotic) != expect {
                mismatches += 1;
            }
        }
    }
    out.push(Check::at_most("classify_lattice_mismatches", mismatches as f64, 0.0));

    // with θ = ρ² and p = 4: z = 2πik/T is admissible iff 2πk/T < ρ²/2
    let (period, theta) = (100.0, rho * rho);
    let zs = periodic_eigenvalues(&p, 4.0, theta, period)?;
    let expect = 2 * (1..).take_while(|&k| 2.0 * PI * k as f64 / period < rho * rho / 2.0).count();
    out.push(Check::new(
        format!("periodic_count(T=100,p=4,\u{3b8}={theta})"),
        zs.len() as f64,
        0.0,
        zs.len() == expect,
    ));
    let grid: Vec<f64> = (0..=984).map(|i| 0.09 + 0.005 * i as f64).collect();
    let mut worst: f64 = 0.0;
    for &z in &zs {
        let (_, phi) = eigenfunction_phi_z(&p, 4.0, theta, z, &grid)?;
        worst = worst.max(verify_eigen_residual(&p, theta, z, &phi)?);
    }
    out.push(Check::at_most("eigen_residual_max", worst, 1e-5));

    let xs = cfg.nodes()?;
    let mut c = cfg.clone();
    let quad = c.fix_quadrature(cfg.explicit_lambda_max().unwrap_or(40.0))?;
    let h1 = heat_kernel(&HeatQuery::new(p, 1.0, 0.0)?, &xs, &quad)?;
    let mut worst: f64 = 0.0;
    for k in 0..5 {
        let lambda = Complex64::new(0.2 + 0.5 * k as f64, rho * (-0.4 + 0.2 * k as f64));
        let z = lambda * lambda + rho * rho - theta;
        let v = dsw_pairing(&p, 4.0, theta, &h1, z)?;
        worst = worst.max((v - (-(z + theta)).exp()).norm());
    }
    out.push(Check::at_most("dsw_pairing_err", worst, 1e-5));
    Ok(())
}

/// Runs a suite; an error stops it and is recorded in the (partial) report.
pub fn run(suite: Suite, cfg: &RunConfig, t: f64) -> Report {
    let mut checks = Vec::new();
    let order: &[Suite] = match suite {
        Suite::All => &[Suite::Special, Suite::Transform, Suite::Heat, Suite::Lorentz, Suite::Dynamics],
        _ => std::slice::from_ref(&suite),
    };
    let mut error = None;
    for s in order {
        let res = match s {
            Suite::Special => special(cfg, &mut checks),
            Suite::Transform => transform(cfg, &mut checks),
            Suite::Heat => heat(cfg, t, &mut checks),
            Suite::Lorentz => lorentz(cfg, &mut checks),
            Suite::Dynamics => dynamics(cfg, &mut checks),
            Suite::All => unreachable!(),
        };
        if let Err(e) = res {
            error = Some(format!("{} suite aborted: {e}", s.name()));
            break;
        }
    }
    Report {
        suite: suite.name().into(),
        pass: error.is_none() && checks.iter().all(|c| c.pass),
        checks,
        error,
    }
}
