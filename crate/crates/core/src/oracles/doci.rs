use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::davidson::{davidson, DavidsonOptions, LinearOperator};
use crate::linalg::{fix_phase, lowest_eigenpair, Matrix};
use crate::pairham::PairHamiltonian;
use crate::simulator::{PairBasis, PairState, SparsePairOperator};
use crate::{Error, Hartree, Result};

/// Largest pair-basis dimension the DOCI reference accepts.
pub const DOCI_MAX_DIM: usize = 100_000;
const DENSE_LIMIT: usize = 400;

#[derive(Debug, Clone)]
pub struct DociResult {
    pub energy: Hartree,
    pub state: PairState,
    pub iterations: usize,
}

/// ⟨b'|H|b⟩ assembled term by term from the hard-core boson operators,
/// without going through the packed diagonal of `PairHamiltonian`.
pub fn dense_pair_matrix(ph: &PairHamiltonian, basis: &PairBasis) -> Result<Matrix> {
    if basis.len() > 5000 {
        return Err(Error::SizeGuard {
            what: "dense pair matrix",
            dim: basis.len(),
            limit: 5000,
        });
    }
    if ph.nqubits() != basis.nqubits() || ph.npairs() != basis.npairs() {
        return Err(Error::Mismatch("Hamiltonian and basis sizes differ".into()));
    }
    let n = ph.nqubits();
    let (eps, j, k) = (ph.eps(), ph.jmat(), ph.kmat());
    let occ = |b: u64, p: usize| (b >> p & 1) as f64;
    let mut m = Matrix::zeros(basis.len(), basis.len());
    for (col, &b) in basis.states().iter().enumerate() {
        let mut d = ph.e_core();
        for p in 0..n {
            d += eps[p] * occ(b, p);
            for q in 0..n {
                let nn = occ(b, p) * occ(b, q);
                d += 2.0 * j[(p, q)] * nn;
                if p != q {
                    d -= k[(p, q)] * nn;
                }
            }
        }
        m[(col, col)] += d;
        // d†_p d_q
        for p in 0..n {
            for q in 0..n {
                if p != q && occ(b, q) == 1.0 && occ(b, p) == 0.0 {
                    let row = basis.rank(b ^ (1 << p) ^ (1 << q)).expect("same sector");
                    m[(row, col)] += k[(p, q)];
                }
            }
        }
    }
    Ok(m)
}

struct PairOp<'a>(&'a SparsePairOperator);

impl LinearOperator for PairOp<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn diagonal(&self) -> Vec<f64> {
        self.0.diagonal().to_vec()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply(x, y)
    }
}

/// Exact ground state of the pair Hamiltonian in its fixed-n sector.
pub fn doci_ground_state(ph: &PairHamiltonian) -> Result<DociResult> {
    let dim = crate::linalg::binomial(ph.nqubits(), ph.npairs());
    if dim > DOCI_MAX_DIM {
        return Err(Error::SizeGuard {
            what: "DOCI",
            dim,
            limit: DOCI_MAX_DIM,
        });
    }
    let basis = Arc::new(PairBasis::new(ph.nqubits(), ph.npairs())?);
    let op = SparsePairOperator::new(ph, &basis)?;
    let (energy, mut amp, iterations) = if dim <= DENSE_LIMIT {
        let mut m = Matrix::zeros(dim, dim);
        let mut e = vec![0.0; dim];
        let mut col = vec![0.0; dim];
        for c in 0..dim {
            e[c] = 1.0;
            op.apply(&e, &mut col);
            e[c] = 0.0;
            for r in 0..dim {
                m[(r, c)] = col[r];
            }
        }
        let (value, v) = lowest_eigenpair(m);
        (value, v, 1)
    } else {
        let mut guess = vec![0.0; dim];
        guess[basis.reference_index()] = 1.0;
        let pair = davidson(&PairOp(&op), Some(guess), &DavidsonOptions::default())?;
        (pair.value, pair.vector, pair.iterations)
    };
    fix_phase(&mut amp, 1e-12);
    let state = PairState::from_amplitudes(basis, amp)?;
    Ok(DociResult {
        energy,
        state,
        iterations,
    })
}
