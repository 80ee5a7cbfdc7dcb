use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{dot, lowest_eigenpair, norm, Matrix};
use crate::{Error, Result};

/// A real symmetric operator known through its diagonal and its action.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn diagonal(&self) -> Vec<f64>;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DavidsonOptions {
    /// Residual 2-norm at convergence.
    pub tol: f64,
    pub max_iterations: usize,
    pub max_subspace: usize,
}

impl Default for DavidsonOptions {
    fn default() -> Self {
        DavidsonOptions {
            tol: 1e-8,
            max_iterations: 300,
            max_subspace: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn orthonormalize(t: &mut [f64], basis: &[Vec<f64>]) -> f64 {
    for _ in 0..2 {
        for v in basis {
            let c = dot(t, v);
            t.iter_mut().zip(v).for_each(|(ti, vi)| *ti -= c * vi);
        }
    }
    let n = norm(t);
    if n > 0.0 {
        t.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Lowest eigenpair by Davidson iteration with the diagonal preconditioner.
pub fn davidson<O: LinearOperator>(
    op: &O,
    guess: Option<Vec<f64>>,
    opts: &DavidsonOptions,
) -> Result<Eigenpair> {
    let dim = op.dim();
    let diag = op.diagonal();
    if dim == 0 {
        return Err(Error::InvalidOption("empty operator".into()));
    }
    let mut v0 = guess.unwrap_or_else(|| {
        let mut g = vec![0.0; dim];
        let imin = (0..dim)
            .min_by(|&a, &b| diag[a].total_cmp(&diag[b]))
            .unwrap_or(0);
        g[imin] = 1.0;
        g
    });
    if orthonormalize(&mut v0, &[]) == 0.0 {
        return Err(Error::InvalidOption("zero Davidson guess".into()));
    }
    let mut vs: Vec<Vec<f64>> = Vec::new();
    let mut avs: Vec<Vec<f64>> = Vec::new();
    let push = |v: Vec<f64>, vs: &mut Vec<Vec<f64>>, avs: &mut Vec<Vec<f64>>| {
        let mut av = vec![0.0; dim];
        op.apply(&v, &mut av);
        vs.push(v);
        avs.push(av);
    };
    push(v0, &mut vs, &mut avs);

    let mut residual = f64::INFINITY;
    for iteration in 1..=opts.max_iterations {
        let k = vs.len();
        let t = Matrix::from_fn(k, k, |i, j| dot(&vs[i], &avs[j]));
        let t = (&t + t.transpose()) * 0.5;
        let (theta, s) = lowest_eigenpair(t);
        let mut x = vec![0.0; dim];
        let mut ax = vec![0.0; dim];
        for (c, (v, av)) in s.iter().zip(vs.iter().zip(&avs)) {
            for i in 0..dim {
                x[i] += c * v[i];
                ax[i] += c * av[i];
            }
        }
        let r: Vec<f64> = ax.iter().zip(&x).map(|(a, xi)| a - theta * xi).collect();
        residual = norm(&r);
        if residual < opts.tol || k == dim {
            let xn = norm(&x);
            x.iter_mut().for_each(|v| *v /= xn);
            return Ok(Eigenpair {
                value: theta,
                vector: x,
                iterations: iteration,
                residual,
            });
        }
        let mut t: Vec<f64> = r
            .iter()
            .zip(&diag)
            .map(|(ri, di)| {
                let d = theta - di;
                let d = if d.abs() < 1e-8 {
                    1e-8f64.copysign(d)
                } else {
                    d
                };
                ri / d
            })
            .collect();
        if vs.len() >= opts.max_subspace {
            // restart from the current Ritz vector
            let xn = norm(&x);
            x.iter_mut().for_each(|v| *v /= xn);
            ax.iter_mut().for_each(|v| *v /= xn);
            vs = vec![x];
            avs = vec![ax];
        }
        if orthonormalize(&mut t, &vs) < 1e-10 {
            // preconditioned residual collapsed into the subspace; fall back
            // to the raw residual direction
            t = r;
            if orthonormalize(&mut t, &vs) < 1e-12 {
                let x = vs[0].clone();
                let value = dot(&x, &avs[0]);
                return Ok(Eigenpair {
                    value,
                    vector: x,
                    iterations: iteration,
                    residual,
                });
            }
        }
        push(t, &mut vs, &mut avs);
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dense(Matrix);

    impl LinearOperator for Dense {
        fn dim(&self) -> usize {
            self.0.nrows()
        }
        fn diagonal(&self) -> Vec<f64> {
            (0..self.dim()).map(|i| self.0[(i, i)]).collect()
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            for i in 0..self.dim() {
                y[i] = (0..self.dim()).map(|j| self.0[(i, j)] * x[j]).sum();
            }
        }
    }

    #[test]
    fn matches_dense_lowest_eigenvalue() {
        let n = 60;
        let m = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                i as f64 * 0.5 - 3.0
            } else {
                0.05 / (1.0 + (i as f64 - j as f64).abs())
            }
        });
        let (exact, _) = lowest_eigenpair(m.clone());
        let opts = DavidsonOptions {
            max_subspace: 8,
            ..Default::default()
        };
        let e = davidson(&Dense(m), None, &opts).unwrap();
        assert!((e.value - exact).abs() < 1e-10, "{} vs {}", e.value, exact);
        assert!(e.residual < 1e-8);
    }
}
