use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Minimum;

/// Simultaneous-perturbation stochastic approximation with the standard
/// gain sequences a_k = a/(k+1+A)^α and c_k = c/(k+1)^γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpsaOptions {
    pub iterations: usize,
    /// Target size of the first parameter update, used to calibrate `a`.
    pub initial_step: f64,
    pub perturbation: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Stability constant A, as a fraction of `iterations`.
    pub stability: f64,
    /// Fraction of the final iterates averaged into the returned point.
    pub tail_average: f64,
    pub seed: u64,
}

impl Default for SpsaOptions {
    fn default() -> Self {
        SpsaOptions {
            iterations: 300,
            initial_step: 0.2,
            perturbation: 0.1,
            alpha: 0.602,
            gamma: 0.101,
            stability: 0.1,
            tail_average: 0.2,
            seed: 0,
        }
    }
}

/// Minimizes a (possibly noisy) objective. The returned `value` is one
/// fresh evaluation at the returned point.
pub fn spsa<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &SpsaOptions) -> Minimum {
    let n = x0.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut evaluations = 0;
    let mut x = x0.to_vec();
    if n == 0 || opts.iterations == 0 {
        let value = f(&x);
        return Minimum {
            x,
            value,
            iterations: 0,
            evaluations: 1,
            converged: n == 0,
            trace: vec![value],
        };
    }
    let big_a = opts.stability * opts.iterations as f64;
    let mut delta = vec![0.0; n];
    let mut gradient =
        |x: &[f64], ck: f64, rng: &mut ChaCha8Rng, delta: &mut Vec<f64>, evals: &mut usize| {
            for d in delta.iter_mut() {
                *d = if rng.random::<bool>() { 1.0 } else { -1.0 };
            }
            let xp: Vec<f64> = x
                .iter()
                .zip(delta.iter())
                .map(|(xi, d)| xi + ck * d)
                .collect();
            let xm: Vec<f64> = x
                .iter()
                .zip(delta.iter())
                .map(|(xi, d)| xi - ck * d)
                .collect();
            let (fp, fm) = (f(&xp), f(&xm));
            *evals += 2;
            let diff = (fp - fm) / (2.0 * ck);
            (
                delta.iter().map(|d| diff / d).collect::<Vec<f64>>(),
                0.5 * (fp + fm),
            )
        };

    // calibrate a from the mean gradient magnitude at the start
    let mut mag = 0.0;
    let samples = 5;
    for _ in 0..samples {
        let (g, _) = gradient(
            &x,
            opts.perturbation,
            &mut rng,
            &mut delta,
            &mut evaluations,
        );
        mag += g.iter().map(|v| v.abs()).sum::<f64>() / n as f64;
    }
    mag /= samples as f64;
    let a = if mag > 0.0 {
        opts.initial_step * libm::pow(big_a + 1.0, opts.alpha) / mag
    } else {
        opts.initial_step
    };

    let tail_start = ((1.0 - opts.tail_average) * opts.iterations as f64) as usize;
    let mut tail_sum = vec![0.0; n];
    let mut tail_count = 0usize;
    let mut trace = Vec::with_capacity(opts.iterations);
    for k in 0..opts.iterations {
        let ak = a / libm::pow(k as f64 + 1.0 + big_a, opts.alpha);
        let ck = opts.perturbation / libm::pow(k as f64 + 1.0, opts.gamma);
        let (g, fmid) = gradient(&x, ck, &mut rng, &mut delta, &mut evaluations);
        for (xi, gi) in x.iter_mut().zip(&g) {
            *xi -= ak * gi;
        }
        trace.push(fmid);
        if k >= tail_start {
            for (t, xi) in tail_sum.iter_mut().zip(&x) {
                *t += xi;
            }
            tail_count += 1;
        }
    }
    if tail_count > 0 {
        x = tail_sum.iter().map(|t| t / tail_count as f64).collect();
    }
    let value = f(&x);
    evaluations += 1;
    Minimum {
        x,
        value,
        iterations: opts.iterations,
        evaluations,
        converged: true,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noisy_quadratic() {
        let mut noise = ChaCha8Rng::seed_from_u64(11);
        let f = |x: &[f64]| {
            let e: f64 = x
                .iter()
                .enumerate()
                .map(|(i, v)| (v - 0.1 * i as f64).powi(2))
                .sum();
            e + 1e-3 * (noise.random::<f64>() - 0.5)
        };
        let m = spsa(
            f,
            &[0.5, 0.5, 0.5],
            &SpsaOptions {
                iterations: 400,
                ..Default::default()
            },
        );
        for (i, v) in m.x.iter().enumerate() {
            assert!((v - 0.1 * i as f64).abs() < 0.05, "{:?}", m.x);
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let f = |x: &[f64]| x[0] * x[0] + libm::sin(3.0 * x[1]);
        let o = SpsaOptions {
            iterations: 50,
            seed: 4,
            ..Default::default()
        };
        assert_eq!(spsa(f, &[0.3, 0.2], &o), spsa(f, &[0.3, 0.2], &o));
    }
}
