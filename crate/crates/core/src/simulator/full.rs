//! Gate-level 2^N statevector backend.
//!
//! Each exchange gate is applied as CNOT(occ → vir), a rotation of the occupied
//! qubit controlled on the virtual one, and CNOT(occ → vir) again.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{AnsatzCircuit, PairBasis};
use crate::{Error, Result};

/// Axis of the controlled rotation inside the exchange gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RotationAxis {
    /// Real rotation; reproduces [`super::exchange_gate_matrix`].
    #[default]
    Y,
    /// Controlled RX as drawn literally; gives −i phases on each hop.
    X,
}

pub const MAX_FULL_QUBITS: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    nqubits: usize,
    amp: Vec<Complex64>,
}

impl FullState {
    pub fn basis_state(nqubits: usize, bits: u64) -> Result<FullState> {
        if nqubits > MAX_FULL_QUBITS {
            return Err(Error::SizeGuard {
                what: "full statevector qubit count",
                dim: nqubits,
                limit: MAX_FULL_QUBITS,
            });
        }
        let mut amp = vec![Complex64::new(0.0, 0.0); 1 << nqubits];
        amp[bits as usize] = Complex64::new(1.0, 0.0);
        Ok(FullState { nqubits, amp })
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        let (cm, tm) = (1usize << control, 1usize << target);
        for i in 0..self.amp.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amp.swap(i, i | tm);
            }
        }
    }

    /// Rotation by θ about `axis` on `target`, applied when `control` is set.
    pub fn controlled_rotation(
        &mut self,
        control: usize,
        target: usize,
        theta: f64,
        axis: RotationAxis,
    ) {
        let c = libm::cos(0.5 * theta);
        let s = libm::sin(0.5 * theta);
        // [[m00, m01], [m10, m11]] in the target's |0⟩, |1⟩ basis
        let (m00, m01, m10, m11) = match axis {
            RotationAxis::Y => (
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ),
            RotationAxis::X => (
                Complex64::new(c, 0.0),
                Complex64::new(0.0, -s),
                Complex64::new(0.0, -s),
                Complex64::new(c, 0.0),
            ),
        };
        let (cm, tm) = (1usize << control, 1usize << target);
        for i in 0..self.amp.len() {
            if i & cm != 0 && i & tm == 0 {
                let (a0, a1) = (self.amp[i], self.amp[i | tm]);
                self.amp[i] = m00 * a0 + m01 * a1;
                self.amp[i | tm] = m10 * a0 + m11 * a1;
            }
        }
    }

    pub fn exchange(&mut self, occ: usize, vir: usize, theta: f64, axis: RotationAxis) {
        self.cnot(occ, vir);
        self.controlled_rotation(vir, occ, theta, axis);
        self.cnot(occ, vir);
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Total probability on basis states whose Hamming weight is not `weight`.
    pub fn weight_outside(&self, weight: usize) -> f64 {
        self.amp
            .iter()
            .enumerate()
            .filter(|(i, _)| i.count_ones() as usize != weight)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Amplitudes of the weight-n sector in `basis` order.
    pub fn restrict(&self, basis: &PairBasis) -> Result<Vec<Complex64>> {
        if basis.nqubits() != self.nqubits {
            return Err(Error::Dimension {
                what: "basis qubit count",
                expected: self.nqubits,
                actual: basis.nqubits(),
            });
        }
        Ok(basis
            .states()
            .iter()
            .map(|&b| self.amp[b as usize])
            .collect())
    }
}

/// Literal gate-by-gate simulation of the ansatz from the reference bitstring.
pub fn evolve_full(
    circuit: &AnsatzCircuit,
    theta: &[f64],
    axis: RotationAxis,
) -> Result<FullState> {
    if theta.len() != circuit.nparams() {
        return Err(Error::Dimension {
            what: "parameter vector length",
            expected: circuit.nparams(),
            actual: theta.len(),
        });
    }
    let reference = (1u64 << circuit.nocc()) - 1;
    let mut st = FullState::basis_state(circuit.nqubits(), reference)?;
    for (g, &t) in circuit.gates().iter().zip(theta) {
        st.exchange(g.occ, g.vir, t, axis);
    }
    Ok(st)
}
