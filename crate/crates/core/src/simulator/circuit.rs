use alloc::vec::Vec;

use crate::{Error, Result};

/// Order of the exchange gates inside one layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GateOrder {
    /// Occupied index from highest to lowest, virtual from lowest to highest.
    #[default]
    OccupiedDescending,
    /// Occupied index from lowest to highest, virtual from lowest to highest.
    OccupiedAscending,
}

/// One exchange gate between occupied qubit `occ` and virtual qubit `vir`
/// (both absolute qubit indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExchangeGate {
    pub occ: usize,
    pub vir: usize,
    pub layer: usize,
}

/// Layers of exchange gates between every occupied and every virtual qubit,
/// one angle per gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnsatzCircuit {
    nocc: usize,
    nvir: usize,
    depth: usize,
    order: GateOrder,
    gates: Vec<ExchangeGate>,
}

impl AnsatzCircuit {
    pub fn new(nocc: usize, nvir: usize, depth: usize) -> Result<AnsatzCircuit> {
        Self::with_order(nocc, nvir, depth, GateOrder::default())
    }

    pub fn with_order(
        nocc: usize,
        nvir: usize,
        depth: usize,
        order: GateOrder,
    ) -> Result<AnsatzCircuit> {
        if nocc == 0 || depth == 0 {
            return Err(Error::InvalidOption(alloc::format!(
                "ansatz needs at least one occupied orbital and one layer (got O={nocc}, D={depth})"
            )));
        }
        let mut gates = Vec::with_capacity(nocc * nvir * depth);
        for layer in 0..depth {
            for step in 0..nocc {
                let occ = match order {
                    GateOrder::OccupiedDescending => nocc - 1 - step,
                    GateOrder::OccupiedAscending => step,
                };
                for v in 0..nvir {
                    gates.push(ExchangeGate {
                        occ,
                        vir: nocc + v,
                        layer,
                    });
                }
            }
        }
        Ok(AnsatzCircuit {
            nocc,
            nvir,
            depth,
            order,
            gates,
        })
    }

    pub fn nocc(&self) -> usize {
        self.nocc
    }

    pub fn nvir(&self) -> usize {
        self.nvir
    }

    pub fn nqubits(&self) -> usize {
        self.nocc + self.nvir
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn order(&self) -> GateOrder {
        self.order
    }

    pub fn gates(&self) -> &[ExchangeGate] {
        &self.gates
    }

    pub fn nparams(&self) -> usize {
        self.gates.len()
    }

    /// Each exchange gate is CNOT · controlled rotation · CNOT.
    pub fn two_qubit_gate_count(&self) -> usize {
        3 * self.gates.len()
    }

    pub fn resources(&self) -> ResourceCounts {
        resource_counts(self.nocc, self.nvir, self.depth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceCounts {
    pub qubits: usize,
    pub parameters: usize,
    pub two_qubit_gates: usize,
}

pub fn resource_counts(nocc: usize, nvir: usize, depth: usize) -> ResourceCounts {
    ResourceCounts {
        qubits: nocc + nvir,
        parameters: depth * nocc * nvir,
        two_qubit_gates: 3 * depth * nocc * nvir,
    }
}

/// Exchange gate on |q_occ q_vir⟩ in the basis order |00⟩, |01⟩, |10⟩, |11⟩.
///
/// |00⟩ and |11⟩ are untouched; on span{|01⟩, |10⟩} it is the real rotation
/// [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]], so |10⟩ → cos(θ/2)|10⟩ − sin(θ/2)|01⟩.
pub fn exchange_gate_matrix(theta: f64) -> [[f64; 4]; 4] {
    let c = libm::cos(0.5 * theta);
    let s = libm::sin(0.5 * theta);
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, c, -s, 0.0],
        [0.0, s, c, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn counts_follow_layers() {
        let c = AnsatzCircuit::new(1, 1, 1).unwrap();
        assert_eq!((c.nparams(), c.two_qubit_gate_count()), (1, 3));
        let c = AnsatzCircuit::new(5, 3, 1).unwrap();
        assert_eq!((c.nparams(), c.two_qubit_gate_count()), (15, 45));
        let c = AnsatzCircuit::new(4, 8, 2).unwrap();
        assert_eq!((c.nparams(), c.two_qubit_gate_count()), (64, 192));
    }

    #[test]
    fn default_order_walks_occupied_down() {
        let c = AnsatzCircuit::new(2, 2, 1).unwrap();
        let pairs: Vec<(usize, usize)> = c.gates().iter().map(|g| (g.occ, g.vir)).collect();
        assert_eq!(pairs, [(1, 2), (1, 3), (0, 2), (0, 3)]);
        let c = AnsatzCircuit::with_order(2, 2, 1, GateOrder::OccupiedAscending).unwrap();
        assert_eq!(c.gates()[0].occ, 0);
    }

    #[test]
    fn zero_depth_rejected() {
        assert!(AnsatzCircuit::new(2, 2, 0).is_err());
        assert!(AnsatzCircuit::new(0, 2, 1).is_err());
    }

    fn matmul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        out
    }

    #[test]
    fn gate_at_zero_is_identity_and_at_pi_swaps() {
        let id = exchange_gate_matrix(0.0);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(id[i][j], if i == j { 1.0 } else { 0.0 });
            }
        }
        let sw = exchange_gate_matrix(PI);
        assert!((sw[2][1].abs() - 1.0).abs() < 1e-15 && (sw[1][2].abs() - 1.0).abs() < 1e-15);
        assert!(sw[1][1].abs() < 1e-15 && sw[2][2].abs() < 1e-15);
    }

    #[test]
    fn gate_is_orthogonal_and_weight_preserving() {
        for k in 0..100 {
            let t = -7.0 + 0.14 * k as f64;
            let u = exchange_gate_matrix(t);
            let mut ut = u;
            for i in 0..4 {
                for j in 0..4 {
                    ut[i][j] = u[j][i];
                }
            }
            let g = matmul(&ut, &u);
            for i in 0..4 {
                for j in 0..4 {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((g[i][j] - target).abs() < 1e-14);
                }
            }
            // weight 0 and weight 2 states map to themselves only
            assert_eq!(
                [u[1][0], u[2][0], u[3][0], u[0][3], u[1][3], u[2][3]],
                [0.0; 6]
            );
        }
    }
}
