//! The Jacobi transform `f̂(λ) = ∫ f φ_λ dμ`, its inversion against the
//! Plancherel density, and the spectral convolution and translation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{lagrange_window, RadialFunction};
use crate::measure::{density_unchecked, GridQuadrature};
use crate::quadrature::GaussLegendre;
use crate::special::jacobi::jacobi_phi_sorted;
use crate::special::{plancherel_density, JacobiParams};

/// Composite Gauss–Legendre layout on `[0, Λ_max]`.
///
/// The first panel is split geometrically in three toward `λ = 0`, where the
/// Plancherel density vanishes like `λ^{2α+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub lambda_max: f64,
    pub panels: usize,
    pub points_per_panel: usize,
    pub tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            lambda_max: 40.0,
            panels: 20,
            points_per_panel: 16,
            tol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn new(lambda_max: f64, panels: usize, points_per_panel: usize, tol: f64) -> Result<Self> {
        let q = Self {
            lambda_max,
            panels,
            points_per_panel,
            tol,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_max > 0.0 && self.lambda_max.is_finite()) {
            return Err(Error::Input(format!("lambda_max must be > 0, got {}", self.lambda_max)));
        }
        if self.panels < 1 {
            return Err(Error::Input("at least one panel is required".into()));
        }
        if self.points_per_panel < 2 {
            return Err(Error::Input(format!(
                "points_per_panel must be >= 2, got {}",
                self.points_per_panel
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Input(format!("tol must be > 0, got {}", self.tol)));
        }
        Ok(())
    }

    /// Panels of width about 2 up to `lambda_max`.
    pub fn with_lambda_max(lambda_max: f64, tol: f64) -> Self {
        Self {
            lambda_max,
            panels: (lambda_max / 2.0).ceil().max(1.0) as usize,
            points_per_panel: 16,
            tol,
        }
    }

    /// Panels narrow enough that `φ_λ(x)` turns through a bounded phase per
    /// panel for every `x <= x_max`.
    pub fn for_grid(lambda_max: f64, x_max: f64, tol: f64) -> Self {
        Self {
            lambda_max,
            panels: (lambda_max * (x_max + 1.0) / 8.0).ceil().max(1.0) as usize,
            points_per_panel: 16,
            tol,
        }
    }

    /// Cut-off for data damped by `e^{-tλ²}`: `Λ_max = sqrt(ln(1/tol)/t) + 5`.
    pub fn for_heat(t: f64, tol: f64) -> Self {
        Self::with_lambda_max((tol.recip().ln() / t).sqrt() + 5.0, tol)
    }

    fn panel_breaks(&self) -> Vec<f64> {
        let w = self.lambda_max / self.panels as f64;
        let mut b = vec![0.0, w / 16.0, w / 4.0];
        for k in 1..=self.panels {
            b.push(w * k as f64);
        }
        b[self.panels + 2] = self.lambda_max;
        b
    }

    /// Nodes and plain Gauss weights; the last `points_per_panel` belong to the last panel.
    pub fn rule(&self) -> (Vec<f64>, Vec<f64>) {
        let gl = GaussLegendre::new(self.points_per_panel);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for w in self.panel_breaks().windows(2) {
            for (x, wt) in gl.mapped(w[0], w[1]) {
                nodes.push(x);
                weights.push(wt);
            }
        }
        (nodes, weights)
    }
}

/// Transform values `f̂(λ)` on increasing `λ >= 0`; zero beyond `Λ_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFunction {
    lambda_nodes: Vec<f64>,
    values: Vec<Complex64>,
}

impl SpectralFunction {
    pub fn new(lambda_nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if lambda_nodes.len() != values.len() || lambda_nodes.is_empty() {
            return Err(Error::Input(format!(
                "{} lambda nodes but {} values",
                lambda_nodes.len(),
                values.len()
            )));
        }
        if lambda_nodes[0] < 0.0 || !lambda_nodes.iter().all(|l| l.is_finite()) {
            return Err(Error::Input("lambda nodes must be finite and >= 0".into()));
        }
        if lambda_nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input("lambda nodes must be increasing".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Input("spectral values must be finite".into()));
        }
        Ok(Self { lambda_nodes, values })
    }

    pub fn from_fn(lambda_nodes: Vec<f64>, g: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = lambda_nodes.iter().map(|&l| g(l)).collect();
        Self::new(lambda_nodes, values)
    }

    pub fn lambda_nodes(&self) -> &[f64] {
        &self.lambda_nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_nodes[self.lambda_nodes.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Local interpolation, even continuation through `λ = 0`.
    pub fn interpolate(&self, lambda: f64) -> Complex64 {
        let l = lambda.abs();
        if l > self.lambda_max() {
            return Complex64::new(0.0, 0.0);
        }
        if self.lambda_nodes.len() == 1 {
            return self.values[0];
        }
        lagrange_window(&self.lambda_nodes, l)
            .iter()
            .map(|&(j, c)| self.values[j] * c)
            .sum()
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        Self {
            lambda_nodes: self.lambda_nodes.clone(),
            values: self
                .lambda_nodes
                .iter()
                .zip(&self.values)
                .map(|(&l, &v)| f(l, v))
                .collect(),
        }
    }
}

/// A transform value with the weight of the integrand at the truncation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue {
    pub value: Complex64,
    /// `|f φ_λ| A` at `x_max` times the last grid spacing.
    pub tail_estimate: f64,
}

/// An inversion value with the estimated size of the truncated spectral tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseValue {
    pub value: Complex64,
    pub tail_estimate: f64,
}

/// `f̂(λ)` for a single, possibly complex, `λ`.
pub fn forward_transform(
    params: &JacobiParams,
    f: &RadialFunction,
    lambda: Complex64,
) -> Result<TransformValue> {
    let q = GridQuadrature::new(params, f.nodes(), lambda.re.abs());
    let samples = q.sample(f);
    // the trailing points where f vanishes identically contribute nothing
    let used = samples
        .iter()
        .rposition(|v| *v != Complex64::new(0.0, 0.0))
        .map_or(0, |i| i + 1);
    let phi = jacobi_phi_sorted(params, lambda, &q.points[..used])?;
    let value = samples[..used]
        .iter()
        .zip(&phi)
        .zip(&q.weights[..used])
        .map(|((s, p), w)| s * p * w)
        .sum();
    let xs = f.nodes();
    let n = xs.len();
    let last = jacobi_phi_sorted(params, lambda, &[xs[n - 1]])?[0];
    let tail_estimate = (f.values()[n - 1] * last).norm()
        * density_unchecked(params, xs[n - 1])
        * (xs[n - 1] - xs[n - 2]);
    Ok(TransformValue { value, tail_estimate })
}

/// The weight `|c(λ)|^{-2} / 2π` of the inversion integral.
fn inversion_weight(params: &JacobiParams, lambda: f64) -> Result<f64> {
    Ok(plancherel_density(params, lambda)? / (2.0 * PI))
}

/// `(1/2π) ∫_0^{Λ_max} g(λ) φ_λ(x) |c(λ)|^{-2} dλ`.
pub fn inverse_transform(
    params: &JacobiParams,
    g: &SpectralFunction,
    x: f64,
    quad: &QuadratureConfig,
) -> Result<InverseValue> {
    quad.validate()?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite and >= 0, got {x}")));
    }
    let (nodes, weights) = quad.rule();
    let mut terms = Vec::with_capacity(nodes.len());
    for (&l, &w) in nodes.iter().zip(&weights) {
        let gv = g.interpolate(l);
        let phi = jacobi_phi_sorted(params, Complex64::new(l, 0.0), &[x])?[0];
        terms.push((gv, phi, w * inversion_weight(params, l)?));
    }
    let value = terms.iter().map(|(gv, phi, w)| gv * phi * w).sum();
    let tail_estimate = terms[terms.len() - quad.points_per_panel..]
        .iter()
        .map(|(gv, _, w)| gv.norm() * w)
        .sum();
    check_tail(value, tail_estimate, quad.tol)?;
    Ok(InverseValue { value, tail_estimate })
}

fn check_tail(partial: Complex64, tail: f64, tol: f64) -> Result<()> {
    if tail > tol {
        return Err(Error::Accuracy {
            message: format!(
                "spectral tail at lambda_max is {tail:.3e}, above tol {tol:.1e}; raise lambda_max"
            ),
            partial,
            estimate: tail,
        });
    }
    Ok(())
}

/// Precomputed `φ_λ` tables linking one space grid to one spectral rule.
///
/// Rows are evaluated in parallel; every reduction runs in a fixed index
/// order, so results do not depend on the thread count.
#[derive(Debug, Clone)]
pub struct JacobiTransform {
    params: JacobiParams,
    quad: QuadratureConfig,
    nodes: Vec<f64>,
    lambdas: Vec<f64>,
    /// Gauss weight times `|c|^{-2} / 2π`
    weights: Vec<f64>,
    space: GridQuadrature,
    /// `φ_{λ_k}` at the quadrature points of `space`
    phi_points: Vec<Vec<f64>>,
    /// `φ_{λ_k}` at the grid nodes
    phi_nodes: Vec<Vec<f64>>,
}

impl JacobiTransform {
    pub fn new(params: &JacobiParams, nodes: &[f64], quad: &QuadratureConfig) -> Result<Self> {
        quad.validate()?;
        // validates the node layout
        RadialFunction::zeros(nodes.to_vec())?;
        let (lambdas, gauss) = quad.rule();
        let weights = lambdas
            .iter()
            .zip(&gauss)
            .map(|(&l, &w)| Ok(w * inversion_weight(params, l)?))
            .collect::<Result<Vec<f64>>>()?;
        let space = GridQuadrature::new(params, nodes, quad.lambda_max);
        let (merged, point_slot, node_slot) = merge_sorted(&space.points, nodes);
        let rows: Vec<Result<(Vec<f64>, Vec<f64>)>> = lambdas
            .par_iter()
            .map(|&l| {
                let phi = jacobi_phi_sorted(params, Complex64::new(l, 0.0), &merged)?;
                let at_points = point_slot.iter().map(|&k| phi[k].re).collect();
                let at_nodes = node_slot.iter().map(|&k| phi[k].re).collect();
                Ok((at_points, at_nodes))
            })
            .collect();
        let mut phi_points = Vec::with_capacity(rows.len());
        let mut phi_nodes = Vec::with_capacity(rows.len());
        for r in rows {
            let (a, b) = r?;
            phi_points.push(a);
            phi_nodes.push(b);
        }
        Ok(Self {
            params: *params,
            quad: *quad,
            nodes: nodes.to_vec(),
            lambdas,
            weights,
            space,
            phi_points,
            phi_nodes,
        })
    }

    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn quad(&self) -> &QuadratureConfig {
        &self.quad
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    fn check_grid(&self, f: &RadialFunction) -> Result<()> {
        if f.nodes() != self.nodes.as_slice() {
            return Err(Error::Input(
                "function grid differs from the grid of the transform tables".into(),
            ));
        }
        Ok(())
    }

    /// `f̂` on the spectral rule.
    pub fn forward(&self, f: &RadialFunction) -> Result<SpectralFunction> {
        self.check_grid(f)?;
        let weighted: Vec<Complex64> = self
            .space
            .sample(f)
            .iter()
            .zip(&self.space.weights)
            .map(|(v, w)| v * w)
            .collect();
        let values = self
            .phi_points
            .par_iter()
            .map(|row| row.iter().zip(&weighted).map(|(p, v)| v * p).sum())
            .collect();
        SpectralFunction::new(self.lambdas.clone(), values)
    }

    fn on_rule(&self, g: &SpectralFunction) -> Vec<Complex64> {
        if g.lambda_nodes() == self.lambdas.as_slice() {
            g.values().to_vec()
        } else {
            self.lambdas.iter().map(|&l| g.interpolate(l)).collect()
        }
    }

    /// Inversion at the grid nodes; fails when the last panel carries more than `tol`.
    pub fn inverse(&self, g: &SpectralFunction) -> Result<RadialFunction> {
        let (f, tail) = self.inverse_unchecked(g)?;
        let partial = f.values().first().copied().unwrap_or_default();
        check_tail(partial, tail, self.quad.tol)?;
        Ok(f)
    }

    /// Inversion together with the last-panel estimate, without the tolerance check.
    pub fn inverse_unchecked(&self, g: &SpectralFunction) -> Result<(RadialFunction, f64)> {
        let gv = self.on_rule(g);
        let coef: Vec<Complex64> = gv.iter().zip(&self.weights).map(|(g, w)| g * w).collect();
        let values: Vec<Complex64> = (0..self.nodes.len())
            .into_par_iter()
            .map(|i| {
                coef.iter()
                    .zip(&self.phi_nodes)
                    .map(|(c, row)| c * row[i])
                    .sum()
            })
            .collect();
        let m = self.quad.points_per_panel;
        let tail = coef[coef.len() - m..].iter().map(|c| c.norm()).sum();
        Ok((RadialFunction::new(self.nodes.clone(), values)?, tail))
    }

    /// `(1/2π) ∫ |g|² |c|^{-2} dλ`, the Plancherel side of `‖f‖²_{L²(μ)}`.
    pub fn spectral_norm_sq(&self, g: &SpectralFunction) -> f64 {
        self.on_rule(g)
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v.norm_sqr() * w)
            .sum()
    }

    /// `f ⋆ g` through `(f⋆g)^ = f̂ ĝ`.
    pub fn convolve(&self, f: &RadialFunction, g: &RadialFunction) -> Result<RadialFunction> {
        let fh = self.forward(f)?;
        let gh = self.forward(g)?;
        let prod = SpectralFunction::new(
            self.lambdas.clone(),
            fh.values().iter().zip(gh.values()).map(|(a, b)| a * b).collect(),
        )?;
        self.inverse(&prod)
    }

    /// `τ_x f` through `(τ_x f)^(λ) = φ_λ(x) f̂(λ)`.
    pub fn translate(&self, f: &RadialFunction, x: f64) -> Result<RadialFunction> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("translation needs finite x >= 0, got {x}")));
        }
        let fh = self.forward(f)?;
        let phis = self
            .lambdas
            .par_iter()
            .map(|&l| Ok(jacobi_phi_sorted(&self.params, Complex64::new(l, 0.0), &[x])?[0]))
            .collect::<Result<Vec<Complex64>>>()?;
        let g = SpectralFunction::new(
            self.lambdas.clone(),
            fh.values().iter().zip(&phis).map(|(a, p)| a * p).collect(),
        )?;
        self.inverse(&g)
    }

    /// Multiplies `f̂` by `m(λ)` and inverts.
    pub fn apply_multiplier(
        &self,
        f: &RadialFunction,
        m: impl Fn(f64) -> Complex64 + Sync,
    ) -> Result<RadialFunction> {
        let fh = self.forward(f)?;
        self.inverse(&fh.map(|l, v| v * m(l)))
    }
}

/// Merged ascending list of `a ∪ b` with the positions of each input in it.
fn merge_sorted(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<usize>, Vec<usize>) {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let mut sa = Vec::with_capacity(a.len());
    let mut sb = Vec::with_capacity(b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i] <= b[j]);
        if take_a {
            sa.push(merged.len());
            merged.push(a[i]);
            i += 1;
        } else {
            sb.push(merged.len());
            merged.push(b[j]);
            j += 1;
        }
    }
    (merged, sa, sb)
}

/// `f̂` on the rule of `quad`.
pub fn forward_spectrum(
    params: &JacobiParams,
    f: &RadialFunction,
    quad: &QuadratureConfig,
) -> Result<SpectralFunction> {
    JacobiTransform::new(params, f.nodes(), quad)?.forward(f)
}

/// `f ⋆ g` for two functions on the same grid.
pub fn convolve(
    params: &JacobiParams,
    f: &RadialFunction,
    g: &RadialFunction,
    quad: &QuadratureConfig,
) -> Result<RadialFunction> {
    if f.nodes() != g.nodes() {
        return Err(Error::Input("convolution needs both functions on one grid".into()));
    }
    JacobiTransform::new(params, f.nodes(), quad)?.convolve(f, g)
}

/// `τ_x f`.
pub fn translate(
    params: &JacobiParams,
    f: &RadialFunction,
    x: f64,
    quad: &QuadratureConfig,
) -> Result<RadialFunction> {
    JacobiTransform::new(params, f.nodes(), quad)?.translate(f, x)
}

/// Smallest multiple of 5 beyond which `|f̂(λ)| |c(λ)|^{-2}` stays under
/// `tol` relative to its largest sampled value (capped at `cap`).
pub fn auto_lambda_max(params: &JacobiParams, f: &RadialFunction, tol: f64, cap: f64) -> Result<f64> {
    let mut scale: f64 = 0.0;
    let mut below = 0;
    let mut l = 0.5;
    let mut last_above = 5.0;
    while l <= cap {
        let v = forward_transform(params, f, Complex64::new(l, 0.0))?.value.norm()
            * plancherel_density(params, l)?;
        scale = scale.max(v);
        if v <= tol * scale {
            below += 1;
            if below >= 2 {
                break;
            }
        } else {
            below = 0;
            last_above = l;
        }
        l += 2.5;
    }
    Ok(((last_above + 2.5) / 5.0).ceil() * 5.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn rank_one() -> JacobiParams {
        JacobiParams::new(0.5, -0.5).unwrap()
    }

    #[test]
    fn rule_integrates_smooth_functions() {
        let q = QuadratureConfig::new(10.0, 5, 16, 1e-10).unwrap();
        let (n, w) = q.rule();
        let s: f64 = n.iter().zip(&w).map(|(x, w)| w * x * x * (-x).exp()).sum();
        assert!((s - (2.0 - 122.0 * (-10f64).exp())).abs() < 1e-14);
        assert!(n.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(0.0, 5, 16, 1e-10).is_err());
        assert!(QuadratureConfig::new(10.0, 0, 16, 1e-10).is_err());
        assert!(QuadratureConfig::new(10.0, 5, 1, 1e-10).is_err());
        assert!(QuadratureConfig::new(10.0, 5, 16, 0.0).is_err());
    }

    #[test]
    fn zero_function_transforms_to_zero() {
        let xs = GridSpec::geometric(1e-3, 5.0, 64).nodes().unwrap();
        let f = RadialFunction::zeros(xs).unwrap();
        let v = forward_transform(&rank_one(), &f, Complex64::new(1.3, 0.2)).unwrap();
        assert_eq!(v.value, Complex64::new(0.0, 0.0));
        let g = SpectralFunction::from_fn(vec![0.5, 1.0, 2.0], |_| Complex64::new(0.0, 0.0)).unwrap();
        let inv = inverse_transform(&rank_one(), &g, 1.0, &QuadratureConfig::default()).unwrap();
        assert_eq!(inv.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn merge_keeps_positions() {
        let (m, a, b) = merge_sorted(&[0.1, 0.5, 0.9], &[0.2, 0.5, 1.0]);
        assert_eq!(m.len(), 6);
        assert_eq!(a.iter().map(|&k| m[k]).collect::<Vec<_>>(), vec![0.1, 0.5, 0.9]);
        assert_eq!(b.iter().map(|&k| m[k]).collect::<Vec<_>>(), vec![0.2, 0.5, 1.0]);
    }
}
