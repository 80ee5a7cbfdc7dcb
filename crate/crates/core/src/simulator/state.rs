use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{AnsatzCircuit, PairBasis};
use crate::pairham::PairHamiltonian;
use crate::{Error, Hartree, Result};

/// Real amplitudes over a [`PairBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    basis: Arc<PairBasis>,
    amp: Vec<f64>,
}

impl PairState {
    pub fn reference(basis: Arc<PairBasis>) -> PairState {
        let mut amp = vec![0.0; basis.len()];
        amp[basis.reference_index()] = 1.0;
        PairState { basis, amp }
    }

    pub fn from_amplitudes(basis: Arc<PairBasis>, amp: Vec<f64>) -> Result<PairState> {
        if amp.len() != basis.len() {
            return Err(Error::Dimension {
                what: "amplitude vector length",
                expected: basis.len(),
                actual: amp.len(),
            });
        }
        Ok(PairState { basis, amp })
    }

    pub fn basis(&self) -> &Arc<PairBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a * a).sum()
    }

    pub fn normalize(&mut self) {
        let n = libm::sqrt(self.norm_sqr());
        if n > 0.0 {
            self.amp.iter_mut().for_each(|a| *a /= n);
        }
    }

    /// `bitstring,amplitude` lines (orbital 0 leftmost), with a header.
    pub fn to_csv(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut out = alloc::string::String::from("bitstring,amplitude\n");
        for (k, a) in self.amp.iter().enumerate() {
            let _ = writeln!(out, "{},{:.12e}", self.basis.label(self.basis.unrank(k)), a);
        }
        out
    }
}

/// An ansatz circuit compiled against a basis: each gate carries its list of
/// coupled amplitude pairs.
#[derive(Debug, Clone)]
pub struct AnsatzSimulator {
    basis: Arc<PairBasis>,
    circuit: AnsatzCircuit,
    pairs: Vec<Arc<Vec<(u32, u32)>>>,
}

impl AnsatzSimulator {
    pub fn new(circuit: &AnsatzCircuit, basis: Arc<PairBasis>) -> Result<AnsatzSimulator> {
        if circuit.nqubits() != basis.nqubits() || circuit.nocc() != basis.npairs() {
            return Err(Error::Mismatch(alloc::format!(
                "circuit over {} qubits with {} occupied vs basis with {} qubits and {} pairs",
                circuit.nqubits(),
                circuit.nocc(),
                basis.nqubits(),
                basis.npairs()
            )));
        }
        let mut cache: Vec<((usize, usize), Arc<Vec<(u32, u32)>>)> = Vec::new();
        let mut pairs = Vec::with_capacity(circuit.nparams());
        for g in circuit.gates() {
            let key = (g.occ, g.vir);
            let list = match cache.iter().find(|(k, _)| *k == key) {
                Some((_, l)) => l.clone(),
                None => {
                    let l = Arc::new(basis.hop_pairs(g.occ, g.vir));
                    cache.push((key, l.clone()));
                    l
                }
            };
            pairs.push(list);
        }
        Ok(AnsatzSimulator {
            basis,
            circuit: circuit.clone(),
            pairs,
        })
    }

    pub fn basis(&self) -> &Arc<PairBasis> {
        &self.basis
    }

    pub fn circuit(&self) -> &AnsatzCircuit {
        &self.circuit
    }

    pub fn evolve(&self, theta: &[f64]) -> Result<PairState> {
        if theta.len() != self.pairs.len() {
            return Err(Error::Dimension {
                what: "parameter vector length",
                expected: self.pairs.len(),
                actual: theta.len(),
            });
        }
        let mut st = PairState::reference(self.basis.clone());
        for (t, pairs) in theta.iter().zip(&self.pairs) {
            let c = libm::cos(0.5 * t);
            let s = libm::sin(0.5 * t);
            let amp = &mut st.amp;
            for &(k, k2) in pairs.iter() {
                let (k, k2) = (k as usize, k2 as usize);
                let (x, y) = (amp[k], amp[k2]);
                amp[k] = c * x + s * y;
                amp[k2] = c * y - s * x;
            }
        }
        Ok(st)
    }
}

/// Applies the circuit to the reference state.
pub fn evolve(circuit: &AnsatzCircuit, theta: &[f64], basis: Arc<PairBasis>) -> Result<PairState> {
    AnsatzSimulator::new(circuit, basis)?.evolve(theta)
}

/// The pair Hamiltonian as a sparse symmetric matrix over a basis: the
/// diagonal plus one entry K_pq per single-pair hop.
#[derive(Debug, Clone)]
pub struct SparsePairOperator {
    diag: Vec<f64>,
    // (k, k2, value) with k < k2
    hops: Vec<(u32, u32, f64)>,
}

impl SparsePairOperator {
    pub fn new(ph: &PairHamiltonian, basis: &PairBasis) -> Result<SparsePairOperator> {
        if ph.nqubits() != basis.nqubits() || ph.npairs() != basis.npairs() {
            return Err(Error::Mismatch(alloc::format!(
                "Hamiltonian over {} qubits with {} pairs vs basis with {} qubits and {} pairs",
                ph.nqubits(),
                ph.npairs(),
                basis.nqubits(),
                basis.npairs()
            )));
        }
        let n = ph.nqubits();
        let diag = basis.states().iter().map(|&b| ph.diagonal(b)).collect();
        let mut hops = Vec::new();
        for (k, &b) in basis.states().iter().enumerate() {
            for p in (0..n).filter(|&p| b >> p & 1 == 1) {
                for q in (0..n).filter(|&q| b >> q & 1 == 0) {
                    let k2 = basis.rank(b ^ (1 << p) ^ (1 << q)).expect("same sector");
                    if k < k2 {
                        hops.push((k as u32, k2 as u32, ph.kmat()[(p, q)]));
                    }
                }
            }
        }
        Ok(SparsePairOperator { diag, hops })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn expectation(&self, amp: &[f64]) -> f64 {
        let mut e: f64 = self.diag.iter().zip(amp).map(|(d, a)| d * a * a).sum();
        for &(k, k2, v) in &self.hops {
            e += 2.0 * v * amp[k as usize] * amp[k2 as usize];
        }
        e
    }

    /// y = H x
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, d), xi) in y.iter_mut().zip(&self.diag).zip(x) {
            *yi = d * xi;
        }
        for &(k, k2, v) in &self.hops {
            let (k, k2) = (k as usize, k2 as usize);
            y[k] += v * x[k2];
            y[k2] += v * x[k];
        }
    }
}

/// ⟨st|H|st⟩ for the pair Hamiltonian.
pub fn expectation_exact(st: &PairState, ph: &PairHamiltonian) -> Result<Hartree> {
    Ok(SparsePairOperator::new(ph, st.basis())?.expectation(st.amplitudes()))
}

/// Occupation statistics of a pair state. Every operator involved is
/// Z-diagonal, so all of them follow from |amp|².
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationMoments {
    nqubits: usize,
    occ: Vec<f64>,
    pair: Vec<f64>,
}

impl OccupationMoments {
    /// Builds the moments from a probability (or normalized count) vector
    /// over `basis`.
    pub fn from_distribution(basis: &PairBasis, prob: &[f64]) -> OccupationMoments {
        let n = basis.nqubits();
        let mut occ = vec![0.0; n];
        let mut pair = vec![0.0; n * n];
        for (&b, &w) in basis.states().iter().zip(prob) {
            if w == 0.0 {
                continue;
            }
            for p in (0..n).filter(|&p| b >> p & 1 == 1) {
                occ[p] += w;
                for q in (0..n).filter(|&q| b >> q & 1 == 1) {
                    pair[p * n + q] += w;
                }
            }
        }
        OccupationMoments {
            nqubits: n,
            occ,
            pair,
        }
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    /// ⟨n_p⟩
    pub fn occupation(&self, p: usize) -> f64 {
        self.occ[p]
    }

    /// ⟨n_p n_q⟩
    pub fn pair(&self, p: usize, q: usize) -> f64 {
        self.pair[p * self.nqubits + q]
    }

    /// ⟨(1 − n_r) n_p⟩, exactly zero for r = p.
    pub fn hole_particle(&self, p: usize, r: usize) -> f64 {
        if p == r {
            0.0
        } else {
            self.occ[p] - self.pair(p, r)
        }
    }
}

pub fn occupation_moments(st: &PairState) -> OccupationMoments {
    let prob: Vec<f64> = st.amplitudes().iter().map(|a| a * a).collect();
    OccupationMoments::from_distribution(st.basis(), &prob)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_angles_leave_reference() {
        let basis = Arc::new(PairBasis::new(5, 2).unwrap());
        let c = AnsatzCircuit::new(2, 3, 1).unwrap();
        let st = evolve(&c, &[0.0; 6], basis).unwrap();
        assert_eq!(st.amplitudes()[0], 1.0);
        assert!(st.amplitudes()[1..].iter().all(|&a| a == 0.0));
    }

    #[test]
    fn single_gate_two_qubits() {
        let basis = Arc::new(PairBasis::new(2, 1).unwrap());
        let c = AnsatzCircuit::new(1, 1, 1).unwrap();
        let t = 0.8;
        let st = evolve(&c, &[t], basis).unwrap();
        // basis order: 0b01 (orbital 0 filled, label "10"), 0b10
        assert!((st.amplitudes()[0] - libm::cos(t / 2.0)).abs() < 1e-15);
        assert!((st.amplitudes()[1] + libm::sin(t / 2.0)).abs() < 1e-15);
        let m = occupation_moments(&st);
        let (c2, s2) = (libm::cos(t / 2.0).powi(2), libm::sin(t / 2.0).powi(2));
        assert!((m.hole_particle(0, 1) - c2).abs() < 1e-15);
        assert!((m.hole_particle(1, 0) - s2).abs() < 1e-15);
        assert_eq!(m.hole_particle(1, 1), 0.0);
    }

    #[test]
    fn parameter_count_checked() {
        let basis = Arc::new(PairBasis::new(3, 1).unwrap());
        let c = AnsatzCircuit::new(1, 2, 1).unwrap();
        assert!(matches!(
            evolve(&c, &[0.1], basis),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn circuit_must_match_basis() {
        let basis = Arc::new(PairBasis::new(4, 1).unwrap());
        let c = AnsatzCircuit::new(2, 2, 1).unwrap();
        assert!(AnsatzSimulator::new(&c, basis).is_err());
    }

    #[test]
    fn reference_moments() {
        let basis = Arc::new(PairBasis::new(4, 2).unwrap());
        let m = occupation_moments(&PairState::reference(basis));
        for p in 0..4 {
            assert_eq!(m.occupation(p), if p < 2 { 1.0 } else { 0.0 });
        }
        assert_eq!(m.hole_particle(0, 3), 1.0);
        assert_eq!(m.hole_particle(3, 0), 0.0);
        assert_eq!(m.hole_particle(0, 1), 0.0);
    }

    #[test]
    fn csv_dump_has_one_line_per_state() {
        let basis = Arc::new(PairBasis::new(3, 1).unwrap());
        let csv = PairState::reference(basis).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("100,1.0"));
    }
}
