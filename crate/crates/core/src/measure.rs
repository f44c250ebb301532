//! The measure `dμ = A(x) dx` and quadrature of sampled functions against it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{lagrange_window, RadialFunction};
use crate::quadrature::{graded_breaks, GaussLegendre};
use crate::special::JacobiParams;

/// Gauss points per sub-cell.
const CELL_POINTS: usize = 8;

/// `ln(2 sinh x)` without overflow.
pub(crate) fn ln_2sinh(x: f64) -> f64 {
    if x > 1.0 {
        x + (-(-2.0 * x).exp()).ln_1p()
    } else {
        (2.0 * x.sinh()).ln()
    }
}

/// `ln(2 cosh x)` without overflow.
pub(crate) fn ln_2cosh(x: f64) -> f64 {
    x + (-2.0 * x).exp().ln_1p()
}

/// `ln A(x)`.
pub fn ln_density_a(params: &JacobiParams, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("A(x) needs finite x > 0, got {x}")));
    }
    Ok((2.0 * params.alpha() + 1.0) * ln_2sinh(x) + (2.0 * params.beta() + 1.0) * ln_2cosh(x))
}

/// `A(x) = (2 sinh x)^{2α+1} (2 cosh x)^{2β+1}`.
pub fn density_a(params: &JacobiParams, x: f64) -> Result<f64> {
    let l = ln_density_a(params, x)?;
    if l > 709.0 {
        return Err(Error::Range { exponent: l });
    }
    Ok(l.exp())
}

pub(crate) fn density_unchecked(params: &JacobiParams, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    ((2.0 * params.alpha() + 1.0) * ln_2sinh(x) + (2.0 * params.beta() + 1.0) * ln_2cosh(x)).exp()
}

/// Largest sub-cell width: a couple of radians of phase at frequency `lambda_max`,
/// and at most one e-fold of `A`.
fn max_cell_width(params: &JacobiParams, lambda_max: f64) -> f64 {
    let mut h = 1.0 / (2.0 * params.rho()).max(1.0);
    if lambda_max > 0.0 {
        h = h.min(2.0 / lambda_max);
    }
    h
}

/// Cell boundaries covering `[0, x_max]`: the grid intervals, split further
/// where they are wide, with `[0, x_0]` graded toward the origin.
pub(crate) fn cell_breaks(params: &JacobiParams, nodes: &[f64], lambda_max: f64) -> Vec<f64> {
    let h = max_cell_width(params, lambda_max);
    let mut out = graded_breaks(0.0, nodes[0], 6, 0.25);
    out.pop();
    for w in nodes.windows(2) {
        out.push(w[0]);
        let k = ((w[1] - w[0]) / h).ceil().max(1.0) as usize;
        for j in 1..k {
            out.push(w[0] + (w[1] - w[0]) * j as f64 / k as f64);
        }
    }
    out.push(nodes[nodes.len() - 1]);
    out
}

/// Quadrature points on `[0, x_max]` with weights that include `A`, and the
/// interpolation stencils mapping grid values to the points.
#[derive(Debug, Clone)]
pub struct GridQuadrature {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    stencils: Vec<Vec<(usize, f64)>>,
    node_count: usize,
}

impl GridQuadrature {
    /// `lambda_max` bounds the frequency of the functions later multiplied in
    /// (0 for plain integrals).
    pub fn new(params: &JacobiParams, nodes: &[f64], lambda_max: f64) -> Self {
        let gl = GaussLegendre::new(CELL_POINTS);
        let breaks = cell_breaks(params, nodes, lambda_max);
        let mut points = Vec::with_capacity(breaks.len() * CELL_POINTS);
        let mut weights = Vec::with_capacity(breaks.len() * CELL_POINTS);
        for w in breaks.windows(2) {
            for (x, wt) in gl.mapped(w[0], w[1]) {
                points.push(x);
                weights.push(wt * density_unchecked(params, x));
            }
        }
        let stencils = points.iter().map(|&x| lagrange_window(nodes, x)).collect();
        Self {
            points,
            weights,
            stencils,
            node_count: nodes.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Interpolated values of `f` at the quadrature points.
    pub fn sample(&self, f: &RadialFunction) -> Vec<Complex64> {
        debug_assert_eq!(f.len(), self.node_count);
        let v = f.values();
        self.stencils
            .iter()
            .map(|s| s.iter().map(|&(j, c)| v[j] * c).sum())
            .collect()
    }

    /// `∫ g dμ` for values `g` at the points, summed in index order.
    pub fn integrate(&self, g: &[Complex64]) -> Complex64 {
        g.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

/// A `μ`-integral with a measure of how much the integrand still weighs at `x_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuIntegral {
    pub value: Complex64,
    /// `|f(x_max)| A(x_max) δ` with `δ` the last grid spacing; large values mean
    /// the truncation at `x_max` is visible.
    pub tail_estimate: f64,
}

/// `∫ f dμ` over `[0, x_max]`.
pub fn mu_integral(params: &JacobiParams, f: &RadialFunction) -> Result<MuIntegral> {
    let q = GridQuadrature::new(params, f.nodes(), 0.0);
    let value = q.integrate(&q.sample(f));
    let n = f.len();
    let xs = f.nodes();
    let tail_estimate = f.values()[n - 1].norm() * density_unchecked(params, xs[n - 1]) * (xs[n - 1] - xs[n - 2]);
    Ok(MuIntegral { value, tail_estimate })
}

/// `μ([0, b])`.
pub fn mu_ball(params: &JacobiParams, b: f64) -> f64 {
    if b <= 0.0 {
        return 0.0;
    }
    let gl = GaussLegendre::new(CELL_POINTS);
    let h = max_cell_width(params, 0.0);
    let mut breaks = graded_breaks(0.0, b.min(h), 8, 0.25);
    let k = ((b - b.min(h)) / h).ceil() as usize;
    let start = b.min(h);
    for j in 1..=k {
        breaks.push(start + (b - start) * j as f64 / k as f64);
    }
    breaks
        .windows(2)
        .map(|w| gl.integrate(w[0], w[1], |x| density_unchecked(params, x)))
        .sum()
}
