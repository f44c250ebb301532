//! Heat kernel, the (shifted) heat semigroup, the sharp two-sided estimate
//! and a t-grid lower bound for the heat maximal function.
//!
//! For `x >= 1` the kernel is evaluated on the shifted contour
//! `λ = u - iη`, `η = ln(2 cosh x) / 2t`, where the Gaussian factor and the
//! oscillation of `Φ_{-λ}(x)` cancel:
//!
//! `h_t(x) = (1/π) e^{-tρ² - ρL - L²/4t} Re ∫_0^∞ e^{-tu²} F(u - iη, x) / c(u - iη) du`
//!
//! with `L = ln(2 cosh x)` and `F` the hypergeometric factor of `Φ_{-λ}`. This
//! keeps full relative accuracy where the real-axis inversion integral would
//! cancel down to `e^{-x²/4t}`. Small `x` uses the real-axis integral.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::RadialFunction;
use crate::measure::ln_2cosh;
use crate::quadrature::GaussLegendre;
use crate::special::cfunc::ln_c_function;
use crate::special::jacobi::{harish_chandra_series, jacobi_phi_sorted};
use crate::special::{plancherel_density, JacobiParams};
use crate::transform::{JacobiTransform, QuadratureConfig};

/// Below this `x` the kernel is synthesized on the real axis.
const CONTOUR_FROM: f64 = 1.0;
/// Largest `Λ_max` the real-axis synthesis accepts.
const MAX_LAMBDA: f64 = 250.0;
const PANEL_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatQuery {
    pub params: JacobiParams,
    pub t: f64,
    pub theta: f64,
}

impl HeatQuery {
    pub fn new(params: JacobiParams, t: f64, theta: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("heat time must be finite and > 0, got {t}")));
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!("shift must be finite, got {theta}")));
        }
        Ok(Self { params, t, theta })
    }
}

/// `e^{-t(λ²+ρ²)} e^{tθ}`.
pub fn heat_multiplier(q: &HeatQuery, lambda: Complex64) -> Complex64 {
    let rho = q.params.rho();
    (-q.t * (lambda * lambda + rho * rho) + q.t * q.theta).exp()
}

/// `ln h_t(x)` on the shifted contour (`x >= 1` recommended).
fn ln_heat_contour(params: &JacobiParams, t: f64, x: f64, tol: f64) -> Result<f64> {
    let rho = params.rho();
    let l = ln_2cosh(x);
    let eta = l / (2.0 * t);
    let ln_rc = |u: f64| -> Result<Complex64> {
        match ln_c_function(params, Complex64::new(u, -eta))? {
            Some(v) => Ok(-v),
            None => Err(Error::Domain(format!("c vanishes at {u} - {eta}i"))),
        }
    };
    let ref_re = ln_rc(0.0)?.re;
    let u_max = ((tol.recip().ln() + 10.0) / t).sqrt() + 2.0;
    let panels = (u_max / 0.5).ceil() as usize;
    let h = u_max / panels as f64;
    let gl = GaussLegendre::new(PANEL_POINTS);
    let mut total = 0.0;
    for k in 0..panels {
        for (u, w) in gl.mapped(k as f64 * h, (k + 1) as f64 * h) {
            let lam = Complex64::new(u, -eta);
            let (f, _) = harish_chandra_series(params, -lam, x)?;
            let g = (ln_rc(u)? - ref_re - t * u * u).exp() * f;
            total += w * g.re;
        }
    }
    if !(total > 0.0) {
        return Err(Error::Accuracy {
            message: format!("contour synthesis of h_{t}({x}) lost positivity"),
            partial: Complex64::new(total, 0.0),
            estimate: total.abs(),
        });
    }
    Ok(-t * rho * rho - rho * l - l * l / (4.0 * t) + ref_re + (total / PI).ln())
}

fn heat_lambda_max(t: f64, tol: f64) -> Result<f64> {
    let lm = QuadratureConfig::for_heat(t, tol).lambda_max;
    if lm > MAX_LAMBDA {
        return Err(Error::Accuracy {
            message: format!(
                "t = {t} needs lambda_max = {lm:.1} > {MAX_LAMBDA} for tol {tol:.1e}"
            ),
            partial: Complex64::new(f64::NAN, 0.0),
            estimate: f64::INFINITY,
        });
    }
    Ok(lm)
}

/// `ln h_t` at ascending `xs < 1` by the real-axis inversion integral.
fn ln_heat_real_axis(params: &JacobiParams, t: f64, xs: &[f64], tol: f64) -> Result<Vec<f64>> {
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let lm = heat_lambda_max(t, tol)?;
    let quad = QuadratureConfig::for_grid(lm, xs[xs.len() - 1], tol);
    let (nodes, weights) = quad.rule();
    let rows = nodes
        .par_iter()
        .zip(&weights)
        .map(|(&l, &w)| {
            let c = w * (-t * l * l).exp() * plancherel_density(params, l)? / (2.0 * PI);
            let phi = jacobi_phi_sorted(params, Complex64::new(l, 0.0), xs)?;
            Ok(phi.iter().map(|p| c * p.re).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let rho = params.rho();
    (0..xs.len())
        .map(|i| {
            let s: f64 = rows.iter().map(|r| r[i]).sum();
            if s > 0.0 {
                Ok(s.ln() - t * rho * rho)
            } else {
                Err(Error::Accuracy {
                    message: format!("real-axis synthesis of h_{t}({}) is not positive", xs[i]),
                    partial: Complex64::new(s, 0.0),
                    estimate: s.abs(),
                })
            }
        })
        .collect()
}

/// `ln h_t(x)` for one point.
pub fn ln_heat_kernel_value(params: &JacobiParams, t: f64, x: f64, tol: f64) -> Result<f64> {
    check_tx(t, x)?;
    if x >= CONTOUR_FROM {
        ln_heat_contour(params, t, x, tol)
    } else {
        Ok(ln_heat_real_axis(params, t, &[x], tol)?[0])
    }
}

/// `h_t(x)` for one point.
pub fn heat_kernel_value(params: &JacobiParams, t: f64, x: f64, tol: f64) -> Result<f64> {
    Ok(ln_heat_kernel_value(params, t, x, tol)?.exp())
}

fn check_tx(t: f64, x: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("heat time must be finite and > 0, got {t}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// `ln h_t` at ascending nodes.
pub fn ln_heat_kernel(params: &JacobiParams, t: f64, xs: &[f64], tol: f64) -> Result<Vec<f64>> {
    for &x in xs {
        check_tx(t, x)?;
    }
    let split = xs.partition_point(|&x| x < CONTOUR_FROM);
    let mut out = ln_heat_real_axis(params, t, &xs[..split], tol)?;
    let far = xs[split..]
        .par_iter()
        .map(|&x| ln_heat_contour(params, t, x, tol))
        .collect::<Result<Vec<f64>>>()?;
    out.extend(far);
    Ok(out)
}

/// `h_t` on the given nodes (the query's shift must be 0).
pub fn heat_kernel(q: &HeatQuery, nodes: &[f64], quad: &QuadratureConfig) -> Result<RadialFunction> {
    if q.theta != 0.0 {
        return Err(Error::Input("the heat kernel is defined for theta = 0".into()));
    }
    quad.validate()?;
    let ln = ln_heat_kernel(&q.params, q.t, nodes, quad.tol.min(1e-12))?;
    RadialFunction::new(
        nodes.to_vec(),
        ln.iter().map(|&v| Complex64::new(v.exp(), 0.0)).collect(),
    )
}

/// `e^{-t(Δ-θ)} f`, computed as the inverse transform of `e^{tθ} ĥ_t f̂`.
pub fn heat_evolve(q: &HeatQuery, f: &RadialFunction, quad: &QuadratureConfig) -> Result<RadialFunction> {
    let tr = JacobiTransform::new(&q.params, f.nodes(), quad)?;
    evolve_with(&tr, f, &[q.t], q.theta).map(|mut v| v.remove(0))
}

/// Evolution to several times with one set of transform tables.
pub fn evolve_with(
    tr: &JacobiTransform,
    f: &RadialFunction,
    ts: &[f64],
    theta: f64,
) -> Result<Vec<RadialFunction>> {
    let fh = tr.forward(f)?;
    ts.iter()
        .map(|&t| {
            let q = HeatQuery::new(*tr.params(), t, theta)?;
            tr.inverse(&fh.map(|l, v| v * heat_multiplier(&q, Complex64::new(l, 0.0))))
        })
        .collect()
}

/// `ln` of the comparison function
/// `t^{-α-1} (1+t+x)^{α-1/2} (1+x) e^{-ρx - ρ²t - x²/4t}`.
pub fn ln_sharp_bound(params: &JacobiParams, t: f64, x: f64) -> f64 {
    let (a, rho) = (params.alpha(), params.rho());
    -(a + 1.0) * t.ln() + (a - 0.5) * (1.0 + t + x).ln() + (1.0 + x).ln()
        - rho * x
        - rho * rho * t
        - x * x / (4.0 * t)
}

/// `h_t(x)` divided by the comparison function, formed in log space.
pub fn sharp_estimate_ratio(params: &JacobiParams, t: f64, x: f64, quad: &QuadratureConfig) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("sharp estimate needs x > 0, got {x}")));
    }
    let d = ln_heat_kernel_value(params, t, x, quad.tol.min(1e-12))? - ln_sharp_bound(params, t, x);
    if d.abs() > 700.0 {
        return Err(Error::Range { exponent: d });
    }
    Ok(d.exp())
}

/// `max_t |h_t ⋆ f|` over the given times: a lower bound for the maximal function.
pub fn heat_maximal(
    params: &JacobiParams,
    f: &RadialFunction,
    t_grid: &[f64],
    quad: &QuadratureConfig,
) -> Result<RadialFunction> {
    if t_grid.is_empty() {
        return Err(Error::Input("t grid must not be empty".into()));
    }
    let tr = JacobiTransform::new(params, f.nodes(), quad)?;
    heat_maximal_with(&tr, f, t_grid)
}

pub fn heat_maximal_with(tr: &JacobiTransform, f: &RadialFunction, t_grid: &[f64]) -> Result<RadialFunction> {
    let mut best = vec![0.0f64; f.len()];
    for u in evolve_with(tr, f, t_grid, 0.0)? {
        for (b, v) in best.iter_mut().zip(u.values()) {
            *b = b.max(v.norm());
        }
    }
    RadialFunction::new(
        f.nodes().to_vec(),
        best.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
    )
}

/// 32 log-spaced times in `[1e-3, 10]`.
pub fn default_t_grid() -> Vec<f64> {
    let (a, b) = (1e-3f64.ln(), 10f64.ln());
    (0..32).map(|k| (a + (b - a) * k as f64 / 31.0).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_one() -> JacobiParams {
        JacobiParams::new(0.5, -0.5).unwrap()
    }

    fn closed_form(t: f64, x: f64) -> f64 {
        x * (-t - x * x / (4.0 * t)).exp() / (8.0 * PI.sqrt() * t.powf(1.5) * x.sinh())
    }

    #[test]
    fn multiplier_values() {
        let q = HeatQuery::new(rank_one(), 1.0, 0.0).unwrap();
        assert!((heat_multiplier(&q, Complex64::new(1.0, 0.0)).re - (-2f64).exp()).abs() < 1e-15);
        assert!((heat_multiplier(&q, Complex64::new(0.0, 1.0)) - 1.0).norm() < 1e-15);
        assert!(HeatQuery::new(rank_one(), 0.0, 0.0).is_err());
    }

    #[test]
    fn both_routes_match_closed_form() {
        let p = rank_one();
        for &t in &[0.1, 1.0, 5.0] {
            for &x in &[0.05, 0.5, 0.99, 1.0, 3.0, 12.0] {
                let v = heat_kernel_value(&p, t, x, 1e-13).unwrap();
                let e = closed_form(t, x);
                assert!(((v - e) / e).abs() < 1e-9, "t={t} x={x}: {v} vs {e}");
            }
        }
        // deep tail, far beyond double-precision cancellation on the real axis
        let v = ln_heat_kernel_value(&p, 0.1, 20.0, 1e-13).unwrap();
        let e = 20f64.ln() - 0.1 - 1000.0 - (8.0 * PI.sqrt() * 0.1f64.powf(1.5)).ln() - 20f64.sinh().ln();
        assert!((v - e).abs() < 1e-9);
    }

    #[test]
    fn default_times() {
        let g = default_t_grid();
        assert_eq!(g.len(), 32);
        assert!((g[0] - 1e-3).abs() < 1e-15 && (g[31] - 10.0).abs() < 1e-12);
    }
}
