//! Distribution functions, nonincreasing rearrangements and `L^{p,q}(μ)` norms.
//!
//! All of these act on the piecewise-linear interpolant of `|f|` through the
//! grid values (constant on `[0, x_0]`, zero beyond `x_max`), so superlevel
//! sets are finite unions of intervals with exactly located end points.

use crate::error::{Error, Result};
use crate::grid::RadialFunction;
use crate::measure::density_unchecked;
use crate::quadrature::{graded_breaks, GaussLegendre};
use crate::special::JacobiParams;

const CELL_POINTS: usize = 8;
const LEVEL_POINTS: usize = 12;
const BISECTION_REL_TOL: f64 = 1e-10;

/// The exponent pair `(p, q)`; `q = f64::INFINITY` selects the weak space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzIndex {
    pub p: f64,
    pub q: f64,
}

impl LorentzIndex {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !p.is_finite() || p < 1.0 {
            return Err(Error::Input(format!("Lorentz index needs 1 <= p < inf, got p={p}")));
        }
        if q.is_nan() || q < 1.0 {
            return Err(Error::Input(format!("Lorentz index needs q >= 1 or q = inf, got q={q}")));
        }
        Ok(Self { p, q })
    }

    pub fn weak(p: f64) -> Result<Self> {
        Self::new(p, f64::INFINITY)
    }

    /// `p'` with `1/p + 1/p' = 1` (`inf` for `p = 1`).
    pub fn conjugate_p(&self) -> f64 {
        conjugate(self.p)
    }
}

pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzNorm {
    pub value: f64,
    /// `|f|` is still above `1e-8 · max|f|` at `x_max`: the value is that of
    /// the truncation, and membership questions need refinement in `x_max`.
    pub truncated: bool,
}

/// `|f|` as a piecewise-linear profile with precomputed cell masses.
pub struct LevelProfile {
    params: JacobiParams,
    /// cell end points; cell 0 is `[0, x_0]`
    edges: Vec<f64>,
    /// `|f|` at the left and right ends of each cell
    ends: Vec<(f64, f64)>,
    masses: Vec<f64>,
    max: f64,
    truncated: bool,
    gl: GaussLegendre,
}

impl LevelProfile {
    pub fn new(params: &JacobiParams, f: &RadialFunction) -> Self {
        let xs = f.nodes();
        let a = f.abs_values();
        let mut edges = Vec::with_capacity(xs.len() + 1);
        edges.push(0.0);
        edges.extend_from_slice(xs);
        let mut ends = Vec::with_capacity(xs.len());
        ends.push((a[0], a[0]));
        for w in a.windows(2) {
            ends.push((w[0], w[1]));
        }
        let gl = GaussLegendre::new(CELL_POINTS);
        let mut profile = Self {
            params: *params,
            edges,
            ends,
            masses: Vec::new(),
            max: a.iter().cloned().fold(0.0, f64::max),
            truncated: false,
            gl,
        };
        profile.masses = (0..profile.ends.len())
            .map(|i| profile.mass_between(profile.edges[i], profile.edges[i + 1], i == 0))
            .collect();
        profile.truncated = a[a.len() - 1] > 1e-8 * profile.max;
        profile
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Total measure of the support interval `[0, x_max]`.
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    fn max_width(&self) -> f64 {
        1.0 / (2.0 * self.params.rho()).max(1.0)
    }

    fn mass_between(&self, u: f64, v: f64, at_origin: bool) -> f64 {
        if v <= u {
            return 0.0;
        }
        let a = |x: f64| density_unchecked(&self.params, x);
        if at_origin && u == 0.0 {
            return graded_breaks(0.0, v, 6, 0.25)
                .windows(2)
                .map(|w| self.gl.integrate(w[0], w[1], a))
                .sum();
        }
        let k = ((v - u) / self.max_width()).ceil().max(1.0) as usize;
        let h = (v - u) / k as f64;
        (0..k)
            .map(|j| self.gl.integrate(u + j as f64 * h, u + (j + 1) as f64 * h, a))
            .sum()
    }

    fn level_mass(&self, s: f64, inclusive: bool) -> f64 {
        let above = |v: f64| if inclusive { v >= s } else { v > s };
        let mut total = 0.0;
        for (i, &(a, b)) in self.ends.iter().enumerate() {
            let (ia, ib) = (above(a), above(b));
            if ia && ib {
                total += self.masses[i];
            } else if ia || ib {
                let (x0, x1) = (self.edges[i], self.edges[i + 1]);
                let xc = x0 + (s - a) / (b - a) * (x1 - x0);
                let xc = xc.clamp(x0, x1);
                total += if ia {
                    self.mass_between(x0, xc, i == 0)
                } else {
                    self.mass_between(xc, x1, false)
                };
            }
        }
        total
    }

    /// `d(s) = μ{|f| > s}`.
    pub fn distribution(&self, s: f64) -> f64 {
        self.level_mass(s, false)
    }

    /// `μ{|f| >= s}`, the left limit of the distribution function at `s`.
    pub fn distribution_left(&self, s: f64) -> f64 {
        self.level_mass(s, true)
    }

    /// `f*(t) = inf{s : d(s) <= t}` by bisection.
    pub fn rearrangement(&self, t: f64) -> f64 {
        if self.distribution(0.0) <= t {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, self.max);
        while hi - lo > BISECTION_REL_TOL * self.max {
            let mid = 0.5 * (lo + hi);
            if self.distribution(mid) <= t {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Distinct levels `0 = s_0 < s_1 < ... < s_m = max|f|` between which `d` is smooth.
    fn levels(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.ends.iter().map(|e| e.0).collect();
        v.push(self.ends[self.ends.len() - 1].1);
        v.push(0.0);
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * self.max.max(f64::MIN_POSITIVE));
        v
    }

    /// `∫|f|^p dμ` on the same piecewise-linear model.
    pub fn lp_integral(&self, p: f64) -> f64 {
        let mut total = 0.0;
        for (i, &(a, b)) in self.ends.iter().enumerate() {
            let (x0, x1) = (self.edges[i], self.edges[i + 1]);
            let lin = |x: f64| (a + (b - a) * (x - x0) / (x1 - x0)).max(0.0);
            let g = |x: f64| lin(x).powf(p) * density_unchecked(&self.params, x);
            if i == 0 {
                total += a.powf(p) * self.masses[0];
                continue;
            }
            let k = ((x1 - x0) / self.max_width()).ceil().max(1.0) as usize;
            let h = (x1 - x0) / k as f64;
            for j in 0..k {
                total += self.gl.integrate(x0 + j as f64 * h, x0 + (j + 1) as f64 * h, g);
            }
        }
        total
    }

    /// `‖f‖_{p,q}` via `‖f‖_{p,q}^q = q ∫_0^∞ s^{q-1} d(s)^{q/p} ds`, and
    /// `sup_s s d(s)^{1/p}` for `q = ∞`.
    pub fn lorentz_norm(&self, idx: LorentzIndex) -> f64 {
        if self.max == 0.0 {
            return 0.0;
        }
        let levels = self.levels();
        if idx.q.is_infinite() {
            return self.weak_norm(idx.p, &levels);
        }
        let (p, q) = (idx.p, idx.q);
        let gl = GaussLegendre::new(LEVEL_POINTS);
        let mut total = 0.0;
        let last = levels.len() - 2;
        for (k, w) in levels.windows(2).enumerate() {
            let (s0, s1) = (w[0], w[1]);
            let d_left = self.distribution(s0 + 1e-14 * (s1 - s0));
            let d_right = self.distribution_left(s1);
            if (d_left - d_right).abs() <= 1e-15 * d_left {
                // d is constant on the segment
                total += (s1.powf(q) - s0.powf(q)) * d_left.powf(q / p);
                continue;
            }
            let mut breaks = vec![s0, s1];
            if k == 0 {
                breaks = graded_breaks(s0, s1, 10, 0.3);
            }
            if k == last {
                let mut top: Vec<f64> = graded_breaks(s0, s1, 10, 0.3)
                    .iter()
                    .map(|&s| s0 + s1 - s)
                    .collect();
                top.reverse();
                if k == 0 {
                    let mid = 0.5 * (s0 + s1);
                    breaks.retain(|&s| s <= mid);
                    breaks.extend(top.into_iter().filter(|&s| s > mid));
                } else {
                    breaks = top;
                }
            }
            for b in breaks.windows(2) {
                total += gl.integrate(b[0], b[1], |s| {
                    q * s.powf(q - 1.0) * self.distribution(s).powf(q / p)
                });
            }
        }
        total.powf(1.0 / q)
    }

    fn weak_norm(&self, p: f64, levels: &[f64]) -> f64 {
        let gl = GaussLegendre::new(LEVEL_POINTS);
        let g = |s: f64| s * self.distribution(s).powf(1.0 / p);
        let mut best = 0.0f64;
        let mut best_seg = None;
        for w in levels.windows(2) {
            let (s0, s1) = (w[0], w[1]);
            let top = s1 * self.distribution_left(s1).powf(1.0 / p);
            if top > best {
                best = top;
                best_seg = None;
            }
            for (s, _) in gl.mapped(s0, s1) {
                let v = g(s);
                if v > best {
                    best = v;
                    best_seg = Some((s0, s1));
                }
            }
        }
        if let Some((mut a, mut b)) = best_seg {
            // golden-section refinement inside the winning segment
            let r = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let c = b - r * (b - a);
                let d = a + r * (b - a);
                if g(c) > g(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            best = best.max(g(0.5 * (a + b)));
        }
        best
    }
}

/// `μ{x : |f(x)| > s}`.
pub fn distribution_function(params: &JacobiParams, f: &RadialFunction, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::Domain(format!("level must be >= 0, got {s}")));
    }
    Ok(LevelProfile::new(params, f).distribution(s))
}

/// `f*(t)`.
pub fn rearrangement(params: &JacobiParams, f: &RadialFunction, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("rearrangement needs t > 0, got {t}")));
    }
    Ok(LevelProfile::new(params, f).rearrangement(t))
}

/// `‖f‖_{p,q}` of the truncation of `f` to its grid.
pub fn lorentz_norm(params: &JacobiParams, f: &RadialFunction, idx: LorentzIndex) -> Result<LorentzNorm> {
    let profile = LevelProfile::new(params, f);
    Ok(LorentzNorm {
        value: profile.lorentz_norm(idx),
        truncated: profile.truncated(),
    })
}

/// `‖f‖_{L^p(μ)}` on the same piecewise-linear model.
pub fn lp_norm(params: &JacobiParams, f: &RadialFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Input(format!("L^p norm needs p >= 1, got {p}")));
    }
    let profile = LevelProfile::new(params, f);
    if p.is_infinite() {
        return Ok(profile.max());
    }
    Ok(profile.lp_integral(p).powf(1.0 / p))
}
