mod common;

use std::sync::Arc;

use common::random_integrals;
use pairvqe_core::simulator::full::{evolve_full, RotationAxis};
use pairvqe_core::simulator::{
    evolve, expectation_exact, expectation_sampled, occupation_moments, sample_moments, GateOrder,
    SparsePairOperator,
};
use pairvqe_core::{AnsatzCircuit, PairBasis, PairHamiltonian, PairState, PauliTermGroups};
use proptest::prelude::*;

/// ⟨ψ|H|ψ⟩ assembled from the measurement groups, one group at a time.
fn pauli_group_expectation(st: &PairState, groups: &PauliTermGroups) -> f64 {
    let basis = st.basis();
    let amp = st.amplitudes();
    let mut e: f64 = basis
        .states()
        .iter()
        .zip(amp)
        .map(|(&b, a)| a * a * groups.z_energy(b))
        .sum();
    for &(p, q, c) in &groups.xxyy {
        let mut hop = 0.0;
        for (k, &b) in basis.states().iter().enumerate() {
            if b >> p & 1 == 1 && b >> q & 1 == 0 {
                let k2 = basis.rank(b ^ (1 << p) ^ (1 << q)).unwrap();
                hop += 2.0 * amp[k] * amp[k2];
            }
        }
        e += c * hop;
    }
    e
}

fn circuit_strategy() -> impl Strategy<Value = (usize, usize, usize, bool, Vec<f64>)> {
    (2usize..=8)
        .prop_flat_map(|n| (Just(n), 1..n, 1usize..=2, any::<bool>()))
        .prop_flat_map(|(n, nocc, depth, asc)| {
            let np = depth * nocc * (n - nocc);
            (
                Just(nocc),
                Just(n - nocc),
                Just(depth),
                Just(asc),
                prop::collection::vec(-std::f64::consts::PI..std::f64::consts::PI, np),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn subspace_and_gate_level_backends_agree((nocc, nvir, depth, asc, theta) in circuit_strategy()) {
        let order = if asc { GateOrder::OccupiedAscending } else { GateOrder::OccupiedDescending };
        let circuit = AnsatzCircuit::with_order(nocc, nvir, depth, order).unwrap();
        let basis = Arc::new(PairBasis::new(nocc + nvir, nocc).unwrap());
        let sub = evolve(&circuit, &theta, basis.clone()).unwrap();
        let full = evolve_full(&circuit, &theta, RotationAxis::Y).unwrap();
        prop_assert!(full.weight_outside(nocc) < 1e-20);
        let restricted = full.restrict(&basis).unwrap();
        for (a, z) in sub.amplitudes().iter().zip(&restricted) {
            prop_assert!((a - z.re).abs() < 1e-10);
            prop_assert!(z.im.abs() < 1e-10);
        }
        prop_assert!((sub.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn literal_x_axis_preserves_norm_and_pair_number((nocc, nvir, _d, _a, theta) in circuit_strategy()) {
        let circuit = AnsatzCircuit::new(nocc, nvir, 1).unwrap();
        let theta = &theta[..circuit.nparams()];
        let x = evolve_full(&circuit, theta, RotationAxis::X).unwrap();
        prop_assert!((x.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(x.weight_outside(nocc) < 1e-20);
    }

    #[test]
    fn pauli_groups_reproduce_the_direct_expectation(
        seed in 0u64..1000,
        (nocc, nvir, depth, _a, theta) in circuit_strategy(),
    ) {
        let n = nocc + nvir;
        let s = random_integrals(n, 2 * nocc, seed);
        let ph = PairHamiltonian::from_integrals(&s);
        let circuit = AnsatzCircuit::new(nocc, nvir, depth).unwrap();
        let st = evolve(&circuit, &theta, Arc::new(PairBasis::new(n, nocc).unwrap())).unwrap();
        let direct = expectation_exact(&st, &ph).unwrap();
        let grouped = pauli_group_expectation(&st, &ph.to_pauli_terms());
        prop_assert!((direct - grouped).abs() < 1e-10, "{direct} vs {grouped}");
        let op = SparsePairOperator::new(&ph, st.basis()).unwrap();
        prop_assert!((op.expectation(st.amplitudes()) - direct).abs() < 1e-10);
    }
}

#[test]
fn reference_expectation_is_the_diagonal_energy() {
    let s = random_integrals(6, 6, 5);
    let ph = PairHamiltonian::from_integrals(&s);
    let basis = Arc::new(PairBasis::new(6, 3).unwrap());
    let st = PairState::reference(basis);
    let e = expectation_exact(&st, &ph).unwrap();
    assert!((e - ph.reference_energy()).abs() < 1e-12);
    assert!((ph.to_pauli_terms().z_energy(0b111) - e).abs() < 1e-12);
}

fn probe_state(seed: u64) -> (PairHamiltonian, PairState) {
    let s = random_integrals(6, 4, seed);
    let ph = PairHamiltonian::from_integrals(&s);
    let circuit = AnsatzCircuit::new(2, 4, 1).unwrap();
    let theta: Vec<f64> = (0..circuit.nparams())
        .map(|k| 0.3 + 0.17 * k as f64)
        .collect();
    let st = evolve(&circuit, &theta, Arc::new(PairBasis::new(6, 2).unwrap())).unwrap();
    (ph, st)
}

#[test]
fn sampled_energy_is_unbiased_and_reproducible() {
    let (ph, st) = probe_state(8);
    let groups = ph.to_pauli_terms();
    let exact = expectation_exact(&st, &ph).unwrap();
    let runs: Vec<f64> = (0..200)
        .map(|seed| {
            expectation_sampled(&st, &groups, 2000, seed)
                .unwrap()
                .energy
        })
        .collect();
    let mean = runs.iter().sum::<f64>() / runs.len() as f64;
    let sd =
        (runs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (runs.len() - 1) as f64).sqrt();
    assert!((mean - exact).abs() < 5.0 * sd / (runs.len() as f64).sqrt());

    let a = expectation_sampled(&st, &groups, 500, 42).unwrap();
    let b = expectation_sampled(&st, &groups, 500, 42).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.shots_used, 500 * (1 + groups.xxyy.len() as u64));
}

#[test]
fn reported_stderr_tracks_the_spread_over_seeds() {
    let (ph, st) = probe_state(21);
    let groups = ph.to_pauli_terms();
    let samples: Vec<_> = (0..300)
        .map(|seed| expectation_sampled(&st, &groups, 4000, 1000 + seed).unwrap())
        .collect();
    let mean = samples.iter().map(|s| s.energy).sum::<f64>() / samples.len() as f64;
    let sd = (samples
        .iter()
        .map(|s| (s.energy - mean).powi(2))
        .sum::<f64>()
        / (samples.len() - 1) as f64)
        .sqrt();
    let reported = samples.iter().map(|s| s.stderr).sum::<f64>() / samples.len() as f64;
    assert!(
        (sd / reported - 1.0).abs() < 0.2,
        "empirical {sd} vs reported {reported}"
    );
}

#[test]
fn sampled_moments_converge_to_exact_moments() {
    let (_, st) = probe_state(3);
    let exact = occupation_moments(&st);
    let sampled = sample_moments(&st, 400_000, 17).unwrap();
    assert_eq!(sampled.counts.iter().sum::<u64>(), 400_000);
    for p in 0..6 {
        assert!((sampled.moments.occupation(p) - exact.occupation(p)).abs() < 5e-3);
        for r in 0..6 {
            let d = sampled.moments.hole_particle(p, r) - exact.hole_particle(p, r);
            assert!(d.abs() < 5e-3);
        }
    }
}
