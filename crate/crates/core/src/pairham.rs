//! Hard-core boson form of the electronic Hamiltonian restricted to
//! seniority-zero states.
//!
//! ```text
//! H = E_core + Σ_p ε_p n_p + Σ_{p≠q} K_pq d†_p d_q − Σ_{p≠q} K_pq n_p n_q + Σ_{pq} 2 J_pq n_p n_q
//! ε_p = 2 h_pp − J_pp,   J_pq = (pp|qq),   K_pq = (pq|qp)
//! ```
//!
//! Qubit p is set when spatial orbital p is doubly occupied. Because n_p² = n_p
//! on qubits, the p = q part of the last sum contributes 2 J_pp n_p.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::integrals::IntegralSet;
use crate::linalg::Matrix;
use crate::{Error, Hartree, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PairHamiltonian {
    npairs: usize,
    e_core: f64,
    eps: Vec<f64>,
    jmat: Matrix,
    kmat: Matrix,
}

impl PairHamiltonian {
    pub fn from_integrals(s: &IntegralSet) -> PairHamiltonian {
        let n = s.norb();
        let g = s.eri();
        let jmat = Matrix::from_fn(n, n, |p, q| g.get(p, p, q, q));
        let kmat = Matrix::from_fn(n, n, |p, q| g.get(p, q, q, p));
        let eps = (0..n).map(|p| 2.0 * s.h()[(p, p)] - jmat[(p, p)]).collect();
        PairHamiltonian {
            npairs: s.npairs(),
            e_core: s.e_core(),
            eps,
            jmat,
            kmat,
        }
    }

    /// Assembles a Hamiltonian straight from its tables (used for synthetic
    /// test problems). J and K must be symmetric with equal diagonals.
    pub fn from_tables(
        npairs: usize,
        e_core: f64,
        eps: Vec<f64>,
        jmat: Matrix,
        kmat: Matrix,
    ) -> Result<PairHamiltonian> {
        let n = eps.len();
        for (what, m) in [("J", &jmat), ("K", &kmat)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Dimension {
                    what: if what == "J" {
                        "J table size"
                    } else {
                        "K table size"
                    },
                    expected: n,
                    actual: m.nrows(),
                });
            }
            if (m - m.transpose()).amax() > 1e-12 {
                return Err(Error::InvalidIntegrals(alloc::format!(
                    "{what} is not symmetric"
                )));
            }
        }
        for p in 0..n {
            if (jmat[(p, p)] - kmat[(p, p)]).abs() > 1e-12 {
                return Err(Error::InvalidIntegrals(alloc::format!(
                    "J_pp != K_pp at p = {p}"
                )));
            }
        }
        if npairs > n {
            return Err(Error::InvalidIntegrals(alloc::format!(
                "{npairs} pairs in {n} orbitals"
            )));
        }
        let finite = e_core.is_finite()
            && eps.iter().all(|x| x.is_finite())
            && jmat.iter().all(|x| x.is_finite())
            && kmat.iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidIntegrals("non-finite table entry".into()));
        }
        Ok(PairHamiltonian {
            npairs,
            e_core,
            eps,
            jmat,
            kmat,
        })
    }

    pub fn nqubits(&self) -> usize {
        self.eps.len()
    }

    pub fn npairs(&self) -> usize {
        self.npairs
    }

    pub fn e_core(&self) -> f64 {
        self.e_core
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    pub fn jmat(&self) -> &Matrix {
        &self.jmat
    }

    pub fn kmat(&self) -> &Matrix {
        &self.kmat
    }

    /// ⟨b|H|b⟩ for an occupation bitstring (bit p = orbital p).
    pub fn diagonal(&self, bits: u64) -> Hartree {
        let n = self.nqubits();
        let mut e = self.e_core;
        for p in (0..n).filter(|&p| bits >> p & 1 == 1) {
            e += self.eps[p] + 2.0 * self.jmat[(p, p)];
            for q in (0..n).filter(|&q| q != p && bits >> q & 1 == 1) {
                e += 2.0 * self.jmat[(p, q)] - self.kmat[(p, q)];
            }
        }
        e
    }

    /// Energy of the reference with the first `npairs` orbitals filled.
    pub fn reference_energy(&self) -> Hartree {
        let n = self.npairs;
        let mut e = self.e_core;
        for i in 0..n {
            e += self.eps[i];
            for j in 0..n {
                e += 2.0 * self.jmat[(i, j)];
                if i != j {
                    e -= self.kmat[(i, j)];
                }
            }
        }
        e
    }

    /// Rewrites the Hamiltonian as measurable Pauli groups using
    /// n_p = (1 − Z_p)/2 and d†_p d_q + d†_q d_p = (X_p X_q + Y_p Y_q)/2.
    pub fn to_pauli_terms(&self) -> PauliTermGroups {
        let n = self.nqubits();
        let w: Vec<f64> = (0..n)
            .map(|p| self.eps[p] + 2.0 * self.jmat[(p, p)])
            .collect();
        let pair_w = |p: usize, q: usize| 2.0 * self.jmat[(p, q)] - self.kmat[(p, q)];
        // Σ_{p≠q} W_pq n_p n_q = Σ_{p<q} 2 W_pq (1 − Z_p − Z_q + Z_p Z_q)/4
        let mut identity = self.e_core;
        let mut z = Vec::with_capacity(n);
        for p in 0..n {
            identity += 0.5 * w[p];
            let mut zp = -0.5 * w[p];
            for q in (0..n).filter(|&q| q != p) {
                zp -= 0.5 * pair_w(p, q);
            }
            z.push(zp);
        }
        let mut zz = Vec::new();
        let mut xxyy = Vec::new();
        for p in 0..n {
            for q in p + 1..n {
                identity += 0.5 * pair_w(p, q);
                zz.push((p, q, 0.5 * pair_w(p, q)));
                xxyy.push((p, q, self.kmat[(p, q)]));
            }
        }
        PauliTermGroups {
            nqubits: n,
            identity,
            z,
            zz,
            xxyy,
        }
    }

    /// Plain-text dump of ε, J and K for inspection.
    pub fn debug_table(&self) -> String {
        let n = self.nqubits();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# nqubits {n} npairs {} e_core {:.10}",
            self.npairs, self.e_core
        );
        let _ = writeln!(out, "# p eps");
        for (p, e) in self.eps.iter().enumerate() {
            let _ = writeln!(out, "{p} {e:.10}");
        }
        for (name, m) in [("J", &self.jmat), ("K", &self.kmat)] {
            let _ = writeln!(out, "# {name}");
            for p in 0..n {
                let row: Vec<String> = (0..n)
                    .map(|q| alloc::format!("{:.10}", m[(p, q)]))
                    .collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        out
    }
}

/// Commuting measurement groups: one Z-diagonal group plus one
/// (X_p X_q + Y_p Y_q)/2 observable per orbital pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTermGroups {
    pub nqubits: usize,
    pub identity: f64,
    /// Coefficient of Z_p.
    pub z: Vec<f64>,
    /// (p, q, coefficient of Z_p Z_q) with p < q.
    pub zz: Vec<(usize, usize, f64)>,
    /// (p, q, coefficient of (X_p X_q + Y_p Y_q)/2) with p < q.
    pub xxyy: Vec<(usize, usize, f64)>,
}

impl PauliTermGroups {
    /// Value of the Z group on a computational basis state.
    pub fn z_energy(&self, bits: u64) -> f64 {
        let zval = |p: usize| if bits >> p & 1 == 1 { -1.0 } else { 1.0 };
        let mut e = self.identity;
        for (p, c) in self.z.iter().enumerate() {
            e += c * zval(p);
        }
        for &(p, q, c) in &self.zz {
            e += c * zval(p) * zval(q);
        }
        e
    }
}
