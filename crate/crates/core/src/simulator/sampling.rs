//! Finite-shot estimates of the pair-Hamiltonian energy and of occupation
//! moments.
//!
//! Measurement groups: one computational-basis group for every Z-diagonal term,
//! and one group per orbital pair for (X_p X_q + Y_p Y_q)/2, whose outcomes are
//! +1, −1 and 0. Each group receives `shots` shots. Counts are drawn from the
//! exact outcome distribution of the state as a multinomial.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{OccupationMoments, PairState};
use crate::pairham::PauliTermGroups;
use crate::{Error, Hartree, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledEnergy {
    pub energy: Hartree,
    pub stderr: Hartree,
    /// Contribution of the Z-diagonal group alone.
    pub z_energy: Hartree,
    pub z_stderr: Hartree,
    /// Total shots spent across all groups.
    pub shots_used: u64,
}

fn multinomial<R: Rng>(rng: &mut R, shots: u64, prob: &[f64]) -> Vec<u64> {
    let mut counts = vec![0u64; prob.len()];
    let mut left = shots;
    let mut mass_left = 1.0f64;
    for (i, &p) in prob.iter().enumerate() {
        if left == 0 {
            break;
        }
        if i + 1 == prob.len() {
            counts[i] = left;
            break;
        }
        let q = if mass_left > 0.0 {
            (p / mass_left).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let c = if q >= 1.0 {
            left
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(left, q)
                .expect("valid probability")
                .sample(rng)
        };
        counts[i] = c;
        left -= c;
        mass_left -= p;
    }
    counts
}

fn probabilities(st: &PairState) -> Vec<f64> {
    let mut prob: Vec<f64> = st.amplitudes().iter().map(|a| a * a).collect();
    let total: f64 = prob.iter().sum();
    if total > 0.0 {
        prob.iter_mut().for_each(|p| *p /= total);
    }
    prob
}

/// Mean and standard error of a sample given as (value, count) pairs.
fn mean_stderr(values: impl Iterator<Item = (f64, u64)> + Clone, shots: u64) -> (f64, f64) {
    let n = shots as f64;
    let mean = values.clone().map(|(v, c)| v * c as f64).sum::<f64>() / n;
    if shots < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values
        .map(|(v, c)| c as f64 * (v - mean) * (v - mean))
        .sum();
    let var = ss / (n - 1.0);
    (mean, libm::sqrt(var / n))
}

pub fn expectation_sampled(
    st: &PairState,
    groups: &PauliTermGroups,
    shots: u64,
    seed: u64,
) -> Result<SampledEnergy> {
    if shots == 0 {
        return Err(Error::InvalidOption("shot count must be at least 1".into()));
    }
    if groups.nqubits != st.basis().nqubits() {
        return Err(Error::Mismatch(alloc::format!(
            "Pauli groups over {} qubits, state over {}",
            groups.nqubits,
            st.basis().nqubits()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = st.basis();
    let amp = st.amplitudes();

    let counts = multinomial(&mut rng, shots, &probabilities(st));
    let values = basis
        .states()
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c > 0)
        .map(|(&b, &c)| (groups.z_energy(b), c));
    let (z_energy, z_stderr) = mean_stderr(values, shots);
    let mut energy = z_energy;
    let mut var = z_stderr * z_stderr;
    let mut shots_used = shots;

    for &(p, q, coef) in &groups.xxyy {
        // |±⟩ = (|01⟩ ± |10⟩)/√2 on qubits p, q; the observable is +1/−1 there,
        // 0 on |00⟩ and |11⟩.
        let mask = (1u64 << p) | (1u64 << q);
        let (mut plus, mut minus) = (0.0, 0.0);
        for (k, &b) in basis.states().iter().enumerate() {
            if b >> p & 1 == 1 && b >> q & 1 == 0 {
                let k2 = basis.rank(b ^ mask).expect("same sector");
                let (x, y) = (amp[k], amp[k2]);
                plus += 0.5 * (x + y) * (x + y);
                minus += 0.5 * (x - y) * (x - y);
            }
        }
        let total = st.norm_sqr();
        let (plus, minus) = (plus / total, minus / total);
        let zero = (1.0 - plus - minus).max(0.0);
        let c = multinomial(&mut rng, shots, &[plus, minus, zero]);
        let (m, e) = mean_stderr([(1.0, c[0]), (-1.0, c[1]), (0.0, c[2])].into_iter(), shots);
        energy += coef * m;
        var += coef * coef * e * e;
        shots_used += shots;
    }
    Ok(SampledEnergy {
        energy,
        stderr: libm::sqrt(var),
        z_energy,
        z_stderr,
        shots_used,
    })
}

/// Z-basis histogram of a state and the occupation moments it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMoments {
    pub shots: u64,
    /// Counts per basis state, aligned with the state's basis.
    pub counts: Vec<u64>,
    pub moments: OccupationMoments,
}

pub fn sample_moments(st: &PairState, shots: u64, seed: u64) -> Result<SampledMoments> {
    if shots == 0 {
        return Err(Error::InvalidOption("shot count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = multinomial(&mut rng, shots, &probabilities(st));
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
    let moments = OccupationMoments::from_distribution(st.basis(), &freq);
    Ok(SampledMoments {
        shots,
        counts,
        moments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::PairBasis;
    use alloc::sync::Arc;

    #[test]
    fn multinomial_conserves_shots() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = multinomial(&mut rng, 1000, &[0.2, 0.0, 0.5, 0.3]);
        assert_eq!(c.iter().sum::<u64>(), 1000);
        assert_eq!(c[1], 0);
    }

    #[test]
    fn zero_shots_rejected() {
        let basis = Arc::new(PairBasis::new(2, 1).unwrap());
        let st = PairState::reference(basis);
        assert!(sample_moments(&st, 0, 1).is_err());
    }

    #[test]
    fn point_mass_histogram() {
        let basis = Arc::new(PairBasis::new(4, 2).unwrap());
        let st = PairState::reference(basis);
        let s = sample_moments(&st, 500, 9).unwrap();
        assert_eq!(s.counts[0], 500);
        assert_eq!(s.moments.hole_particle(1, 2), 1.0);
    }
}
