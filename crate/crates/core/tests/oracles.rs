mod common;

use common::random_integrals;
use pairvqe_core::linalg::{binomial, lowest_eigenpair};
use pairvqe_core::oracles::{
    dense_pair_matrix, determinant_energy_matrix, determinant_matrix_element, doci_ground_state,
    fci_ground_state, fci_ground_state_with, rhf_energy, seniority_zero_fci_energy, FciOptions,
    FciResult, FciSolver,
};
use pairvqe_core::{PairBasis, PairHamiltonian};
use proptest::prelude::*;

#[test]
fn sigma_matches_slater_condon_matrix() {
    let s = random_integrals(5, 4, 11);
    let solver = FciSolver::new(&s, 10_000).unwrap();
    let reference = determinant_energy_matrix(&s).unwrap();
    let dim = solver.dim();
    assert_eq!(dim, reference.nrows());
    let mut e = vec![0.0; dim];
    let mut col = vec![0.0; dim];
    let mut worst: f64 = 0.0;
    for c in 0..dim {
        e[c] = 1.0;
        solver.sigma(&e, &mut col);
        e[c] = 0.0;
        for r in 0..dim {
            worst = worst.max((col[r] - reference[(r, c)]).abs());
        }
    }
    assert!(worst < 1e-12, "max deviation {worst}");
}

#[test]
fn davidson_and_dense_fci_agree() {
    let s = random_integrals(6, 4, 3);
    let dense = fci_ground_state(&s).unwrap();
    let iterative = fci_ground_state_with(
        &s,
        &FciOptions {
            dense_limit: 0,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(dense.dimension(), 225);
    assert!((dense.energy - iterative.energy).abs() < 1e-10);
    let overlap: f64 = dense
        .coefficients()
        .iter()
        .zip(iterative.coefficients())
        .map(|(a, b)| a * b)
        .sum();
    assert!((overlap.abs() - 1.0).abs() < 1e-8);
    let (exact, _) =
        lowest_eigenpair(determinant_energy_matrix(&random_integrals(4, 4, 3)).unwrap());
    let small = fci_ground_state(&random_integrals(4, 4, 3)).unwrap();
    assert!((exact - small.energy).abs() < 1e-10);
}

#[test]
fn rhf_energy_is_the_reference_determinant_energy() {
    let s = random_integrals(5, 6, 8);
    let n = s.npairs();
    let refbits = (1u64 << n) - 1;
    let sc = determinant_matrix_element(&s, (refbits, refbits), (refbits, refbits));
    let ph = PairHamiltonian::from_integrals(&s);
    assert!((rhf_energy(&s, n) - sc).abs() < 1e-12);
    assert!((ph.reference_energy() - sc).abs() < 1e-12);
}

#[test]
fn spin_squared_of_simple_determinants() {
    let strings = PairBasis::new(3, 1).unwrap();
    let ns = strings.len();
    // closed shell |0α 0β⟩
    let mut c = vec![0.0; ns * ns];
    c[0] = 1.0;
    let closed = FciResult::from_coefficients(strings.clone(), c, 0.0).unwrap();
    assert!(closed.spin_squared().abs() < 1e-14);
    // open shell |0α 1β⟩ is half singlet, half triplet
    let mut c = vec![0.0; ns * ns];
    c[1] = 1.0;
    let open = FciResult::from_coefficients(strings.clone(), c, 0.0).unwrap();
    assert!((open.spin_squared() - 1.0).abs() < 1e-14);
    // (|0α1β⟩ − |1α0β⟩)/√2 is the Ms = 0 triplet component in this ordering
    let mut c = vec![0.0; ns * ns];
    c[1] = 1.0 / 2f64.sqrt();
    c[ns] = -1.0 / 2f64.sqrt();
    let triplet = FciResult::from_coefficients(strings.clone(), c.clone(), 0.0).unwrap();
    let mut c2 = c;
    c2[ns] = -c2[ns];
    let singlet = FciResult::from_coefficients(strings, c2, 0.0).unwrap();
    let (t, s) = (triplet.spin_squared(), singlet.spin_squared());
    assert!(
        ((t - 2.0).abs() < 1e-14 && s.abs() < 1e-14)
            || ((s - 2.0).abs() < 1e-14 && t.abs() < 1e-14)
    );
}

#[test]
fn closed_shell_ground_state_is_a_singlet() {
    let s = random_integrals(5, 4, 21);
    let fci = fci_ground_state(&s).unwrap();
    let s2 = fci.spin_squared();
    assert!(s2 < 1e-8 || (s2 - 2.0).abs() < 1e-8, "<S^2> = {s2}");
}

#[test]
fn doci_davidson_matches_dense() {
    // 14 choose 5 = 2002, above the dense cutoff
    let s = random_integrals(14, 10, 5);
    let ph = PairHamiltonian::from_integrals(&s);
    let basis = PairBasis::new(14, 5).unwrap();
    assert_eq!(basis.len(), binomial(14, 5));
    let doci = doci_ground_state(&ph).unwrap();
    let (exact, _) = lowest_eigenpair(dense_pair_matrix(&ph, &basis).unwrap());
    assert!((doci.energy - exact).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pair_hamiltonian_is_the_seniority_zero_block(seed in 0u64..1000, norb in 2usize..6, npairs in 1usize..3) {
        prop_assume!(npairs <= norb);
        let s = random_integrals(norb, 2 * npairs, seed);
        let ph = PairHamiltonian::from_integrals(&s);
        let basis = PairBasis::new(norb, npairs).unwrap();
        let m = dense_pair_matrix(&ph, &basis).unwrap();
        let st = basis.states();
        for i in 0..st.len() {
            for j in 0..st.len() {
                let sc = determinant_matrix_element(&s, (st[i], st[i]), (st[j], st[j]));
                prop_assert!((m[(i, j)] - sc).abs() < 1e-12);
            }
        }
        let doci = doci_ground_state(&ph).unwrap();
        prop_assert!((doci.energy - seniority_zero_fci_energy(&s).unwrap()).abs() < 1e-10);
        prop_assert!(doci.energy >= fci_ground_state(&s).unwrap().energy - 1e-10);
    }
}
