use alloc::vec;
use alloc::vec::Vec;

use super::Minimum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    /// Central-difference step.
    pub fd_step: f64,
    pub max_iterations: usize,
    /// Converged when an iteration lowers the value by less than this and the
    /// gradient max-norm is below `gtol`.
    pub ftol: f64,
    pub gtol: f64,
    /// Cap on the length of a single step.
    pub max_step: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        BfgsOptions {
            fd_step: 1e-5,
            max_iterations: 500,
            ftol: 1e-10,
            gtol: 1e-5,
            max_step: 1.0,
        }
    }
}

fn fd_gradient<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x: &[f64],
    h: f64,
    evals: &mut usize,
) -> Vec<f64> {
    let mut xp = x.to_vec();
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() {
        let xi = xp[i];
        xp[i] = xi + h;
        let fp = f(&xp);
        xp[i] = xi - h;
        let fm = f(&xp);
        xp[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
        *evals += 2;
    }
    g
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// BFGS with central finite-difference gradients and an Armijo backtracking
/// line search.
pub fn bfgs<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &BfgsOptions) -> Minimum {
    let n = x0.len();
    let mut evaluations = 1;
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut trace = vec![fx];
    if n == 0 || opts.max_iterations == 0 {
        return Minimum {
            x,
            value: fx,
            iterations: 0,
            evaluations,
            converged: n == 0,
            trace,
        };
    }
    let mut g = fd_gradient(&mut f, &x, opts.fd_step, &mut evaluations);
    // inverse Hessian, row-major
    let mut hinv = vec![0.0; n * n];
    let reset = |hinv: &mut Vec<f64>| {
        hinv.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            hinv[i * n + i] = 1.0;
        }
    };
    reset(&mut hinv);
    let mut converged = false;
    let mut iterations = 0;
    let mut fresh_hessian = true;

    while iterations < opts.max_iterations {
        if max_abs(&g) < opts.gtol * 1e-3 {
            converged = true;
            break;
        }
        iterations += 1;
        let mut dir: Vec<f64> = (0..n)
            .map(|i| -(0..n).map(|j| hinv[i * n + j] * g[j]).sum::<f64>())
            .collect();
        let mut slope: f64 = dir.iter().zip(&g).map(|(d, gi)| d * gi).sum();
        if slope >= 0.0 {
            reset(&mut hinv);
            fresh_hessian = true;
            dir = g.iter().map(|gi| -gi).collect();
            slope = -g.iter().map(|gi| gi * gi).sum::<f64>();
        }
        let len = libm::sqrt(dir.iter().map(|d| d * d).sum::<f64>());
        let mut alpha = if len > opts.max_step {
            opts.max_step / len
        } else {
            1.0
        };
        let mut accepted = None;
        for _ in 0..40 {
            let xn: Vec<f64> = x.iter().zip(&dir).map(|(xi, d)| xi + alpha * d).collect();
            let fnew = f(&xn);
            evaluations += 1;
            if fnew <= fx + 1e-4 * alpha * slope {
                accepted = Some((xn, fnew));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, fnew)) = accepted else {
            if fresh_hessian {
                // steepest descent failed too: flat to numerical precision
                converged = max_abs(&g) < opts.gtol;
                break;
            }
            reset(&mut hinv);
            fresh_hessian = true;
            continue;
        };
        let gn = fd_gradient(&mut f, &xn, opts.fd_step, &mut evaluations);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        let decrease = fx - fnew;
        x = xn;
        fx = fnew;
        g = gn;
        trace.push(fx);
        if sy > 1e-14 {
            if fresh_hessian {
                // scale the initial guess to the observed curvature
                let yy: f64 = y.iter().map(|v| v * v).sum();
                let scale = sy / yy;
                hinv.iter_mut().for_each(|v| *v *= scale);
            }
            let hy: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| hinv[i * n + j] * y[j]).sum())
                .collect();
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            let rho = 1.0 / sy;
            for i in 0..n {
                for j in 0..n {
                    hinv[i * n + j] +=
                        (1.0 + yhy * rho) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
            fresh_hessian = false;
        }
        if decrease < opts.ftol && max_abs(&g) < opts.gtol {
            converged = true;
            break;
        }
    }
    Minimum {
        x,
        value: fx,
        iterations,
        evaluations,
        converged,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = bfgs(f, &[-1.2, 1.0], &BfgsOptions::default());
        assert!(m.converged);
        assert!(
            (m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4,
            "{:?}",
            m.x
        );
        assert!(m.trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn periodic_one_dimensional() {
        let f = |x: &[f64]| -libm::cos(x[0] - 0.3);
        let m = bfgs(f, &[0.0], &BfgsOptions::default());
        assert!((m.x[0] - 0.3).abs() < 1e-6);
        assert!((m.value + 1.0).abs() < 1e-12);
    }
}
