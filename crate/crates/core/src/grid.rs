//! Sampled radial functions on `(0, x_max]` and the grids they live on.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Geometric,
    Uniform,
}

/// Node layout for space-side objects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub spacing: Spacing,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_min: 1e-3,
            x_max: 20.0,
            n: 512,
            spacing: Spacing::Geometric,
        }
    }
}

impl GridSpec {
    pub fn geometric(x_min: f64, x_max: f64, n: usize) -> Self {
        Self {
            x_min,
            x_max,
            n,
            spacing: Spacing::Geometric,
        }
    }

    pub fn uniform(x_min: f64, x_max: f64, n: usize) -> Self {
        Self {
            x_min,
            x_max,
            n,
            spacing: Spacing::Uniform,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite()) || self.x_min <= 0.0 {
            return Err(Error::Input(format!(
                "grid needs 0 < x_min < x_max, got x_min={}, x_max={}",
                self.x_min, self.x_max
            )));
        }
        if self.x_max <= self.x_min {
            return Err(Error::Input(format!(
                "grid needs x_min < x_max, got x_min={}, x_max={}",
                self.x_min, self.x_max
            )));
        }
        if self.n < 2 {
            return Err(Error::Input(format!("grid needs at least 2 nodes, got {}", self.n)));
        }
        Ok(())
    }

    pub fn nodes(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.n;
        let last = (n - 1) as f64;
        let mut xs: Vec<f64> = match self.spacing {
            Spacing::Uniform => (0..n)
                .map(|i| self.x_min + (self.x_max - self.x_min) * i as f64 / last)
                .collect(),
            Spacing::Geometric => {
                let r = (self.x_max / self.x_min).ln();
                (0..n).map(|i| self.x_min * (r * i as f64 / last).exp()).collect()
            }
        };
        xs[0] = self.x_min;
        xs[n - 1] = self.x_max;
        Ok(xs)
    }
}

/// A complex-valued function sampled on a strictly increasing grid in `(0, x_max]`.
///
/// Beyond `x_max` the function is taken to vanish; on `[0, x_0]` it is continued
/// evenly through the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialFunction {
    nodes: Vec<f64>,
    values: Vec<Complex64>,
}

impl RadialFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::Input(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.len() < 2 {
            return Err(Error::Input("a radial function needs at least 2 nodes".into()));
        }
        if !nodes.iter().all(|x| x.is_finite()) || nodes[0] <= 0.0 {
            return Err(Error::Input("nodes must be finite and positive".into()));
        }
        if let Some(i) = nodes.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!(
                "nodes must be strictly increasing (x[{}]={} >= x[{}]={})",
                i,
                nodes[i],
                i + 1,
                nodes[i + 1]
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Input(format!("non-finite value at node {i}")));
        }
        Ok(Self { nodes, values })
    }

    pub fn from_fn(nodes: Vec<f64>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(nodes, values)
    }

    pub fn from_real_fn(nodes: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(nodes, |x| Complex64::new(f(x), 0.0))
    }

    pub fn zeros(nodes: Vec<f64>) -> Result<Self> {
        Self::from_fn(nodes, |_| Complex64::new(0.0, 0.0))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn x_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            nodes: self.nodes.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        Self {
            nodes: self.nodes.clone(),
            values: self
                .nodes
                .iter()
                .zip(&self.values)
                .map(|(&x, &v)| f(x, v))
                .collect(),
        }
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.nodes != other.nodes {
            return Err(Error::Input("functions live on different grids".into()));
        }
        Ok(Self {
            nodes: self.nodes.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Restriction to the nodes in `[a, b]`.
    pub fn restrict(&self, a: f64, b: f64) -> Result<Self> {
        let (nodes, values): (Vec<f64>, Vec<Complex64>) = self
            .nodes
            .iter()
            .zip(&self.values)
            .filter(|(&x, _)| x >= a && x <= b)
            .map(|(&x, &v)| (x, v))
            .unzip();
        Self::new(nodes, values)
    }

    /// Local Lagrange interpolation (even continuation at the origin, zero beyond `x_max`).
    pub fn interpolate(&self, x: f64) -> Complex64 {
        if x > self.x_max() {
            return Complex64::new(0.0, 0.0);
        }
        let w = lagrange_window(&self.nodes, x.abs());
        w.iter().map(|&(j, c)| self.values[j] * c).sum()
    }
}

/// Points used by the local interpolant.
pub(crate) const INTERP_POINTS: usize = 6;

/// Lagrange weights `(node index, weight)` for interpolating at `x` from the
/// nearest [`INTERP_POINTS`] nodes, mirroring nodes through `0` when `x` is
/// close to the origin (unless `0` is itself a node).
pub(crate) fn lagrange_window(nodes: &[f64], x: f64) -> Vec<(usize, f64)> {
    let n = nodes.len() as isize;
    // index of the left node of the cell containing x; -1 for [0, x_0]
    let left = nodes.partition_point(|&v| v <= x) as isize - 1;
    let m = INTERP_POINTS as isize;
    let mut start = left - (m / 2 - 1);
    let lowest = if nodes[0] > 0.0 { -(n.min(m / 2)) } else { 0 };
    if start < lowest {
        start = lowest;
    }
    let mut end = start + m;
    if end > n {
        end = n;
        start = (end - m).max(lowest);
    }
    let pts: Vec<(usize, f64)> = (start..end)
        .map(|j| {
            if j < 0 {
                let k = (-j - 1) as usize;
                (k, -nodes[k])
            } else {
                (j as usize, nodes[j as usize])
            }
        })
        .collect();
    if let Some(&(j, _)) = pts.iter().find(|&&(_, xj)| xj == x) {
        return vec![(j, 1.0)];
    }
    let mut out = Vec::with_capacity(pts.len());
    for (i, &(j, xi)) in pts.iter().enumerate() {
        let mut w = 1.0;
        for (k, &(_, xk)) in pts.iter().enumerate() {
            if k != i {
                w *= (x - xk) / (xi - xk);
            }
        }
        out.push((j, w));
    }
    out
}
