use alloc::vec;
use alloc::vec::Vec;

use super::Minimum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    pub max_iterations: usize,
    /// Stop once the spread of simplex values drops below this.
    pub ftol: f64,
    pub xtol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            initial_step: 0.1,
            max_iterations: 20_000,
            ftol: 1e-10,
            xtol: 1e-6,
        }
    }
}

/// Nelder–Mead with the dimension-adaptive coefficients of Gao and Han.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> Minimum {
    let n = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        f(x)
    };
    if n == 0 || opts.max_iterations == 0 {
        let value = eval(x0, &mut evaluations);
        return Minimum {
            x: x0.to_vec(),
            value,
            iterations: 0,
            evaluations,
            converged: n == 0,
            trace: vec![value],
        };
    }
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evaluations)).collect();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut order: Vec<usize> = (0..=n).collect();

    while iterations < opts.max_iterations {
        iterations += 1;
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        trace.push(values[best]);

        let spread = values[worst] - values[best];
        let size = simplex
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread.abs() < opts.ftol && size < opts.xtol {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(alpha);
        let fr = eval(&xr, &mut evaluations);
        if fr < values[best] {
            let xe = along(beta);
            let fe = eval(&xe, &mut evaluations);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[worst] {
            let xc = along(gamma);
            let fc = eval(&xc, &mut evaluations);
            (xc, fc)
        } else {
            let xc = along(-gamma);
            let fc = eval(&xc, &mut evaluations);
            (xc, fc)
        };
        if fc < values[worst].min(fr) {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        // shrink towards the best vertex
        let xb = simplex[best].clone();
        for &i in &order[1..] {
            for (x, b) in simplex[i].iter_mut().zip(&xb) {
                *x = b + delta * (*x - b);
            }
            values[i] = eval(&simplex[i], &mut evaluations);
        }
    }
    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
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
    fn finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2) + 0.5 * x[0] * x[1];
        let m = nelder_mead(f, &[0.0, 0.0], &NelderMeadOptions::default());
        assert!(m.converged);
        // stationary point of the quadratic, solved by hand
        let x = 54.0 / 47.0;
        let y = -0.5 - x / 12.0;
        assert!(
            (m.x[0] - x).abs() < 1e-4 && (m.x[1] - y).abs() < 1e-4,
            "{:?}",
            m.x
        );
        assert!(m.trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn zero_iterations_evaluates_start() {
        let opts = NelderMeadOptions {
            max_iterations: 0,
            ..Default::default()
        };
        let m = nelder_mead(|x| x[0] * x[0] + 2.0, &[0.5], &opts);
        assert_eq!(m.x, [0.5]);
        assert_eq!(m.value, 2.25);
        assert_eq!(m.evaluations, 1);
    }
}
