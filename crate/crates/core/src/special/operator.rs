//! The Jacobi operator `Δu = -u'' - (A'/A) u'` on sampled functions.

use num_complex::Complex64;

use super::params::JacobiParams;
use crate::error::{Error, Result};
use crate::grid::RadialFunction;

const STENCIL: usize = 5;

/// Finite-difference weights for derivatives `0..=m` at `z` (Fornberg's recursion).
pub(crate) fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c
}

/// `Δf` on the nodes that carry a full centred five-point stencil.
///
/// On a uniform grid the stencils are the fourth-order central differences;
/// on a nonuniform grid the weights are exact for quartics.
pub fn apply_jacobi_operator(params: &JacobiParams, f: &RadialFunction) -> Result<RadialFunction> {
    let xs = f.nodes();
    let vs = f.values();
    if xs.len() < STENCIL {
        return Err(Error::Input(format!(
            "the Jacobi operator needs at least {STENCIL} nodes, got {}",
            xs.len()
        )));
    }
    let half = STENCIL / 2;
    let mut nodes = Vec::with_capacity(xs.len() - 2 * half);
    let mut out = Vec::with_capacity(xs.len() - 2 * half);
    for i in half..xs.len() - half {
        let x = xs[i];
        let w = fd_weights(x, &xs[i - half..=i + half], 2);
        let mut d1 = Complex64::new(0.0, 0.0);
        let mut d2 = Complex64::new(0.0, 0.0);
        for (k, wk) in w.iter().enumerate() {
            d1 += vs[i - half + k] * wk[1];
            d2 += vs[i - half + k] * wk[2];
        }
        nodes.push(x);
        out.push(-d2 - params.drift(x) * d1);
    }
    RadialFunction::new(nodes, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    #[test]
    fn uniform_weights_are_the_classical_stencils() {
        let w = fd_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        let d2: Vec<f64> = w.iter().map(|r| r[2] * 12.0).collect();
        let d1: Vec<f64> = w.iter().map(|r| r[1] * 12.0).collect();
        for (a, b) in d2.iter().zip([-1.0, 16.0, -30.0, 16.0, -1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in d1.iter().zip([1.0, -8.0, 0.0, 8.0, -1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constants_are_annihilated() {
        let p = JacobiParams::new(2.0, 1.0).unwrap();
        let xs = GridSpec::geometric(0.05, 4.0, 60).nodes().unwrap();
        let f = RadialFunction::from_real_fn(xs, |_| 3.5).unwrap();
        let d = apply_jacobi_operator(&p, &f).unwrap();
        assert_eq!(d.len(), 56);
        assert!(d.sup_norm() < 1e-9);
    }

    #[test]
    fn too_few_nodes() {
        let p = JacobiParams::new(0.5, -0.5).unwrap();
        let f = RadialFunction::from_real_fn(vec![0.1, 0.2, 0.3, 0.4], |x| x).unwrap();
        assert!(matches!(apply_jacobi_operator(&p, &f), Err(Error::Input(_))));
    }

    #[test]
    fn closed_form_order_eigenvalue_at_one() {
        // φ_1(x) = sin x / sinh x, Δφ_1 = 2 φ_1
        let p = JacobiParams::new(0.5, -0.5).unwrap();
        let xs = GridSpec::uniform(0.5, 1.5, 201).nodes().unwrap();
        let f = RadialFunction::from_real_fn(xs, |x| x.sin() / x.sinh()).unwrap();
        let d = apply_jacobi_operator(&p, &f).unwrap();
        let i = d.nodes().iter().position(|&x| (x - 1.0).abs() < 1e-12).unwrap();
        let exact = 2.0 * 1f64.sin() / 1f64.sinh();
        assert!((d.values()[i].re - exact).abs() < 1e-9);
    }
}
