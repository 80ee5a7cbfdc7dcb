use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::davidson::{davidson, DavidsonOptions, LinearOperator};
use crate::integrals::IntegralSet;
use crate::linalg::{binomial, fix_phase, lowest_eigenpair, Matrix};
use crate::simulator::PairBasis;
use crate::{Error, Hartree, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FciOptions {
    /// Largest determinant space solved by dense diagonalization.
    pub dense_limit: usize,
    /// Largest determinant space accepted at all.
    pub max_dim: usize,
    pub davidson: DavidsonOptions,
}

impl Default for FciOptions {
    fn default() -> Self {
        FciOptions {
            dense_limit: 1000,
            max_dim: 1_000_000,
            davidson: DavidsonOptions::default(),
        }
    }
}

/// One spin's replacement list: E_pq acting on string J gives `sign` times
/// string `target`, with `pq = p * norb + q`.
#[derive(Debug, Clone, Copy)]
struct Excitation {
    target: u32,
    pq: u32,
    sign: f64,
}

fn single_excitations(strings: &PairBasis) -> Vec<Vec<Excitation>> {
    let n = strings.nqubits();
    strings
        .states()
        .iter()
        .map(|&s| {
            let mut out = Vec::new();
            for q in (0..n).filter(|&q| s >> q & 1 == 1) {
                for p in 0..n {
                    if p != q && s >> p & 1 == 1 {
                        continue;
                    }
                    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
                    let between = if hi > lo + 1 {
                        (s >> (lo + 1)) & ((1u64 << (hi - lo - 1)) - 1)
                    } else {
                        0
                    };
                    let sign = if between.count_ones() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    let t = s ^ (1 << q) ^ (1 << p);
                    out.push(Excitation {
                        target: strings.rank(t).expect("same weight") as u32,
                        pq: (p * n + q) as u32,
                        sign,
                    });
                }
            }
            out
        })
        .collect()
}

/// Full CI in the Ms = 0 determinant space. Coefficients are stored with
/// index `ia * nstrings + ib` over the colex-ordered strings.
pub struct FciSolver {
    norb: usize,
    e_core: f64,
    strings: PairBasis,
    exc: Vec<Vec<Excitation>>,
    // (pq|rs) as an N² × N² row-major table
    g: Vec<f64>,
    // same-spin Hamiltonian over strings
    hs: DMatrix<f64>,
    diag: Vec<f64>,
}

impl FciSolver {
    pub fn new(s: &IntegralSet, max_dim: usize) -> Result<FciSolver> {
        let n = s.norb();
        let na = s.npairs();
        let ns = binomial(n, na);
        let dim = ns.saturating_mul(ns);
        if dim > max_dim {
            return Err(Error::SizeGuard {
                what: "FCI",
                dim,
                limit: max_dim,
            });
        }
        let strings = PairBasis::new(n, na)?;
        let exc = single_excitations(&strings);
        let g = s.eri().to_dense();
        let n2 = n * n;
        let mut hp = vec![0.0; n2];
        for p in 0..n {
            for q in 0..n {
                let mut v = s.h()[(p, q)];
                for r in 0..n {
                    v -= 0.5 * g[(p * n + r) * n2 + r * n + q];
                }
                hp[p * n + q] = v;
            }
        }
        let mut hs = DMatrix::zeros(ns, ns);
        for j in 0..ns {
            for e1 in &exc[j] {
                let k = e1.target as usize;
                hs[(k, j)] += e1.sign * hp[e1.pq as usize];
                for e2 in &exc[k] {
                    hs[(e2.target as usize, j)] +=
                        0.5 * e1.sign * e2.sign * g[e2.pq as usize * n2 + e1.pq as usize];
                }
            }
        }
        let hs = (&hs + hs.transpose()) * 0.5;
        let mut diag = vec![0.0; ns * ns];
        for (ia, &a) in strings.states().iter().enumerate() {
            for (ib, &b) in strings.states().iter().enumerate() {
                let mut d = s.e_core() + hs[(ia, ia)] + hs[(ib, ib)];
                for p in (0..n).filter(|&p| a >> p & 1 == 1) {
                    for q in (0..n).filter(|&q| b >> q & 1 == 1) {
                        d += g[(p * n + p) * n2 + q * n + q];
                    }
                }
                diag[ia * ns + ib] = d;
            }
        }
        Ok(FciSolver {
            norb: n,
            e_core: s.e_core(),
            strings,
            exc,
            g,
            hs,
            diag,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn strings(&self) -> &PairBasis {
        &self.strings
    }

    /// σ = H c
    pub fn sigma(&self, c: &[f64], out: &mut [f64]) {
        let ns = self.strings.len();
        let n2 = self.norb * self.norb;
        // column-major view: M(ib, ia) = c[ia * ns + ib]
        let m = DMatrix::from_column_slice(ns, ns, c);
        let same = &m * &self.hs + &self.hs * &m;
        for (o, (s, ci)) in out.iter_mut().zip(same.as_slice().iter().zip(c)) {
            *o = s + self.e_core * ci;
        }
        for ja in 0..ns {
            for ea in &self.exc[ja] {
                let ia = ea.target as usize;
                let grow = &self.g[ea.pq as usize * n2..(ea.pq as usize + 1) * n2];
                let src = &c[ja * ns..(ja + 1) * ns];
                let dst = ia * ns;
                for (jb, &cj) in src.iter().enumerate() {
                    if cj == 0.0 {
                        continue;
                    }
                    let f = ea.sign * cj;
                    for eb in &self.exc[jb] {
                        out[dst + eb.target as usize] += f * eb.sign * grow[eb.pq as usize];
                    }
                }
            }
        }
    }

    pub fn solve(&self, opts: &FciOptions) -> Result<FciResult> {
        let dim = self.dim();
        let (energy, mut coeffs, iterations) = if dim <= opts.dense_limit {
            let mut h = Matrix::zeros(dim, dim);
            let mut e = vec![0.0; dim];
            let mut col = vec![0.0; dim];
            for c in 0..dim {
                e[c] = 1.0;
                self.sigma(&e, &mut col);
                e[c] = 0.0;
                for r in 0..dim {
                    h[(r, c)] = col[r];
                }
            }
            let h = (&h + h.transpose()) * 0.5;
            let (value, v) = lowest_eigenpair(h);
            (value, v, 1)
        } else {
            let mut guess = vec![0.0; dim];
            guess[0] = 1.0;
            let pair = davidson(self, Some(guess), &opts.davidson)?;
            (pair.value, pair.vector, pair.iterations)
        };
        fix_phase(&mut coeffs, 1e-12);
        Ok(FciResult {
            energy,
            strings: self.strings.clone(),
            coeffs,
            iterations,
        })
    }
}

impl LinearOperator for FciSolver {
    fn dim(&self) -> usize {
        self.diag.len()
    }
    fn diagonal(&self) -> Vec<f64> {
        self.diag.clone()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.sigma(x, y)
    }
}

#[derive(Debug, Clone)]
pub struct FciResult {
    pub energy: Hartree,
    strings: PairBasis,
    coeffs: Vec<f64>,
    pub iterations: usize,
}

impl FciResult {
    /// Wraps a coefficient vector laid out like the solver's output.
    pub fn from_coefficients(
        strings: PairBasis,
        coeffs: Vec<f64>,
        energy: Hartree,
    ) -> Result<FciResult> {
        let ns = strings.len();
        if coeffs.len() != ns * ns {
            return Err(Error::Dimension {
                what: "FCI coefficient vector",
                expected: ns * ns,
                actual: coeffs.len(),
            });
        }
        Ok(FciResult {
            energy,
            strings,
            coeffs,
            iterations: 0,
        })
    }

    pub fn dimension(&self) -> usize {
        self.coeffs.len()
    }

    pub fn strings(&self) -> &PairBasis {
        &self.strings
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of the determinant with α string `a` and β string `b`.
    pub fn coefficient(&self, a: u64, b: u64) -> Option<f64> {
        let ns = self.strings.len();
        Some(self.coeffs[self.strings.rank(a)? * ns + self.strings.rank(b)?])
    }

    /// ⟨S²⟩ of the Ms = 0 wavefunction, computed as ‖S₊ψ‖².
    pub fn spin_squared(&self) -> f64 {
        let n = self.strings.nqubits();
        let states = self.strings.states();
        let ns = states.len();
        let na = self.strings.npairs();
        let mut plus: alloc::collections::BTreeMap<(u64, u64), f64> =
            alloc::collections::BTreeMap::new();
        for (ia, &a) in states.iter().enumerate() {
            for (ib, &b) in states.iter().enumerate() {
                let c = self.coeffs[ia * ns + ib];
                if c == 0.0 {
                    continue;
                }
                // S₊ = Σ_p a†_{pα} a_{pβ}; operators ordered α block then β block
                for p in 0..n {
                    if b >> p & 1 == 1 && a >> p & 1 == 0 {
                        let below = (1u64 << p) - 1;
                        let parity =
                            na as u32 + (b & below).count_ones() + (a & below).count_ones();
                        let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
                        *plus.entry((a | 1 << p, b ^ 1 << p)).or_insert(0.0) += sign * c;
                    }
                }
            }
        }
        plus.values().map(|v| v * v).sum()
    }

    /// Probability mass on each doubly-occupied pattern (α string = β string).
    pub fn seniority_zero_weights(&self) -> Vec<(u64, f64)> {
        let ns = self.strings.len();
        self.strings
            .states()
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let c = self.coeffs[i * ns + i];
                (s, c * c)
            })
            .collect()
    }
}

pub fn fci_ground_state(s: &IntegralSet) -> Result<FciResult> {
    fci_ground_state_with(s, &FciOptions::default())
}

pub fn fci_ground_state_with(s: &IntegralSet, opts: &FciOptions) -> Result<FciResult> {
    FciSolver::new(s, opts.max_dim)?.solve(opts)
}
