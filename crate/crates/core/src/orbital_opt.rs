//! Orbital optimization: alternate between the ansatz parameters and an
//! orthogonal rotation u = exp(κ) of the active orbitals.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::integrals::IntegralSet;
use crate::linalg::{antisymmetry_deviation, exp_antisymmetric, Matrix};
use crate::optimize::{bfgs, BfgsOptions};
use crate::oracles::doci_ground_state;
use crate::pairham::PairHamiltonian;
use crate::simulator::{AnsatzCircuit, PairState};
use crate::vqe::{
    minimize_objective, mix_seed, EnergyMode, EnergyObjective, VqeOptions, VqeResult,
};
use crate::{Error, Hartree, Result};

pub fn kappa_to_unitary(kappa: &Matrix) -> Result<Matrix> {
    if !kappa.is_square() {
        return Err(Error::Dimension {
            what: "kappa column count",
            expected: kappa.nrows(),
            actual: kappa.ncols(),
        });
    }
    let dev = antisymmetry_deviation(kappa);
    if dev > 1e-12 {
        return Err(Error::NotAntisymmetric(dev));
    }
    Ok(exp_antisymmetric(kappa))
}

/// κ and its exponential.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalRotation {
    pub kappa: Matrix,
    pub u: Matrix,
}

impl OrbitalRotation {
    pub fn identity(n: usize) -> Self {
        OrbitalRotation {
            kappa: Matrix::zeros(n, n),
            u: Matrix::identity(n, n),
        }
    }

    pub fn from_kappa(kappa: Matrix) -> Result<Self> {
        let u = kappa_to_unitary(&kappa)?;
        Ok(OrbitalRotation { kappa, u })
    }

    /// Unpacks the strictly lower triangle, row by row.
    pub fn from_parameters(n: usize, x: &[f64]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if x.len() != expected {
            return Err(Error::Dimension {
                what: "rotation parameter count",
                expected,
                actual: x.len(),
            });
        }
        let mut kappa = Matrix::zeros(n, n);
        let mut k = 0;
        for p in 1..n {
            for q in 0..p {
                kappa[(p, q)] = x[k];
                kappa[(q, p)] = -x[k];
                k += 1;
            }
        }
        Self::from_kappa(kappa)
    }

    /// `row,col,value` of u.
    pub fn to_csv(&self) -> alloc::string::String {
        matrix_csv(&self.u)
    }
}

pub fn matrix_csv(u: &Matrix) -> alloc::string::String {
    let mut out = alloc::string::String::from("row,col,value\n");
    for p in 0..u.nrows() {
        for q in 0..u.ncols() {
            out.push_str(&alloc::format!("{p},{q},{:.15e}\n", u[(p, q)]));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OoOptions {
    pub macro_max: usize,
    pub macro_tolerance: Hartree,
    /// BFGS settings for the κ block.
    pub orbital: BfgsOptions,
    /// Extra κ starts in the first macro iteration, each drawn uniformly in
    /// ±`kick`. Canonical orbitals of a symmetric molecule are a stationary
    /// point of the orbital energy, so a start at κ = 0 cannot leave them.
    pub extra_starts: usize,
    pub kick: f64,
    pub seed: u64,
}

impl Default for OoOptions {
    fn default() -> Self {
        OoOptions {
            macro_max: 30,
            macro_tolerance: 1e-7,
            orbital: BfgsOptions {
                max_iterations: 200,
                ftol: 1e-12,
                gtol: 1e-7,
                ..Default::default()
            },
            extra_starts: 4,
            kick: 0.5,
            seed: 0,
        }
    }
}

/// Pair densities of a fixed state: ⟨n_p⟩, ⟨n_p n_q⟩ and ⟨d†_p d_q⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDensity {
    n: usize,
    occ: Vec<f64>,
    nn: Vec<f64>,
    hop: Vec<f64>,
}

impl PairDensity {
    pub fn from_state(st: &PairState) -> PairDensity {
        let basis = st.basis();
        let n = basis.nqubits();
        let amp = st.amplitudes();
        let mut occ = vec![0.0; n];
        let mut nn = vec![0.0; n * n];
        let mut hop = vec![0.0; n * n];
        for (k, &b) in basis.states().iter().enumerate() {
            let w = amp[k] * amp[k];
            for p in (0..n).filter(|&p| b >> p & 1 == 1) {
                occ[p] += w;
                for q in (0..n).filter(|&q| b >> q & 1 == 1) {
                    nn[p * n + q] += w;
                }
                // d†_q d_p moves the pair from p to q
                for q in (0..n).filter(|&q| b >> q & 1 == 0) {
                    let k2 = basis.rank(b ^ (1 << p) ^ (1 << q)).expect("same sector");
                    hop[q * n + p] += amp[k2] * amp[k];
                }
            }
        }
        PairDensity { n, occ, nn, hop }
    }

    /// ⟨H⟩ for the pair Hamiltonian built from these tables.
    pub fn energy(&self, e_core: f64, eps: &[f64], j: &Matrix, k: &Matrix) -> Hartree {
        let n = self.n;
        let mut e = e_core;
        for p in 0..n {
            e += (eps[p] + 2.0 * j[(p, p)]) * self.occ[p];
            for q in (0..n).filter(|&q| q != p) {
                e += (2.0 * j[(p, q)] - k[(p, q)]) * self.nn[p * n + q]
                    + k[(p, q)] * self.hop[p * n + q];
            }
        }
        e
    }
}

/// The original integrals arranged so that ε', J' and K' of any rotation
/// are two small matrix products away.
pub struct PairTableTransform {
    n: usize,
    npairs: usize,
    e_core: f64,
    h: Matrix,
    // G[(ab),(cd)] = (ab|cd)
    g: Matrix,
    // G2[(ad),(bc)] = (ab|cd)
    g2: Matrix,
}

impl PairTableTransform {
    pub fn new(s: &IntegralSet) -> Self {
        let n = s.norb();
        let n2 = n * n;
        let dense = s.eri().to_dense();
        let g = Matrix::from_fn(n2, n2, |ab, cd| dense[ab * n2 + cd]);
        let g2 = Matrix::from_fn(n2, n2, |ad, bc| {
            let (a, d) = (ad / n, ad % n);
            let (b, c) = (bc / n, bc % n);
            dense[(a * n + b) * n2 + c * n + d]
        });
        PairTableTransform {
            n,
            npairs: s.npairs(),
            e_core: s.e_core(),
            h: s.h().clone(),
            g,
            g2,
        }
    }

    /// (ε', J', K') in the orbitals φ'_p = Σ_a u_ap φ_a.
    pub fn tables(&self, u: &Matrix) -> (Vec<f64>, Matrix, Matrix) {
        let n = self.n;
        let w = Matrix::from_fn(n, n * n, |p, ab| u[(ab / n, p)] * u[(ab % n, p)]);
        let j = &w * &self.g * w.transpose();
        let k = &w * &self.g2 * w.transpose();
        let hu = self.h.transpose() * u;
        let eps = (0..n)
            .map(|p| {
                let hpp: f64 = (0..n).map(|a| u[(a, p)] * hu[(a, p)]).sum();
                2.0 * hpp - j[(p, p)]
            })
            .collect();
        (eps, j, k)
    }

    pub fn pair_hamiltonian(&self, u: &Matrix) -> Result<PairHamiltonian> {
        let (eps, j, k) = self.tables(u);
        let j = (&j + j.transpose()) * 0.5;
        let mut k = (&k + k.transpose()) * 0.5;
        for p in 0..self.n {
            k[(p, p)] = j[(p, p)];
        }
        PairHamiltonian::from_tables(self.npairs, self.e_core, eps, j, k)
    }

    pub fn energy(&self, u: &Matrix, density: &PairDensity) -> Hartree {
        let (eps, j, k) = self.tables(u);
        density.energy(self.e_core, &eps, &j, &k)
    }
}

/// Minimizes ⟨st|H(u)|st⟩ over u = exp(κ) with the state held fixed.
/// Returns the rotation and the energy it reaches.
pub fn optimize_orbitals_for_state(
    s: &IntegralSet,
    st: &PairState,
    opts: &BfgsOptions,
) -> Result<(OrbitalRotation, Hartree)> {
    optimize_orbitals_from(s, st, opts, &[])
}

/// As [`optimize_orbitals_for_state`], also running BFGS from each of
/// `starts` (κ parameter vectors) and keeping the lowest result.
pub fn optimize_orbitals_from(
    s: &IntegralSet,
    st: &PairState,
    opts: &BfgsOptions,
    starts: &[Vec<f64>],
) -> Result<(OrbitalRotation, Hartree)> {
    let n = s.norb();
    let np = n * n.saturating_sub(1) / 2;
    let tr = PairTableTransform::new(s);
    let density = PairDensity::from_state(st);
    let e0 = tr.energy(&Matrix::identity(n, n), &density);
    if np == 0 {
        return Ok((OrbitalRotation::identity(n), e0));
    }
    let f = |x: &[f64]| match OrbitalRotation::from_parameters(n, x) {
        Ok(r) => tr.energy(&r.u, &density),
        Err(_) => f64::INFINITY,
    };
    let zero = vec![0.0; np];
    let mut best: Option<(Vec<f64>, f64)> = None;
    for x0 in core::iter::once(&zero).chain(starts) {
        if x0.len() != np {
            return Err(Error::Dimension {
                what: "orbital start vector length",
                expected: np,
                actual: x0.len(),
            });
        }
        let m = bfgs(f, x0, opts);
        if best.as_ref().is_none_or(|b| m.value < b.1) {
            best = Some((m.x, m.value));
        }
    }
    let (x, value) = best.expect("at least one start");
    if value < e0 {
        Ok((OrbitalRotation::from_parameters(n, &x)?, value))
    } else {
        Ok((OrbitalRotation::identity(n), e0))
    }
}

fn kicked_starts(n: usize, oo: &OoOptions, seed: u64) -> Vec<Vec<f64>> {
    let np = n * n.saturating_sub(1) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..oo.extra_starts)
        .map(|_| {
            (0..np)
                .map(|_| oo.kick * (2.0 * rng.random::<f64>() - 1.0))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct OoResult {
    /// Accumulated rotation: rotated_integrals = input.rotate_orbitals(rotation).
    pub rotation: Matrix,
    /// The re-centred κ steps, one per macro iteration.
    pub steps: Vec<OrbitalRotation>,
    /// Final VQE at the optimized orbitals.
    pub vqe: VqeResult,
    /// VQE in the input orbitals (first θ block).
    pub initial: VqeResult,
    pub rotated_integrals: IntegralSet,
    pub macro_iterations: usize,
    pub converged: bool,
    /// Energy after each macro iteration (exact expectation).
    pub energy_trace: Vec<Hartree>,
}

impl OoResult {
    pub fn energy(&self) -> Hartree {
        self.vqe.energy
    }
}

fn macro_energy(r: &VqeResult) -> Hartree {
    r.exact_energy
}

/// Alternating θ / κ minimization starting from the input orbitals.
pub fn oo_vqe(s: &IntegralSet, opts: &VqeOptions, oo: &OoOptions) -> Result<OoResult> {
    let circuit =
        AnsatzCircuit::with_order(s.npairs(), s.norb() - s.npairs(), opts.depth, opts.order)?;
    oo_vqe_from(s, &circuit, opts, oo, None)
}

/// As [`oo_vqe`], optionally reusing an already converged first θ block.
pub fn oo_vqe_from(
    s: &IntegralSet,
    circuit: &AnsatzCircuit,
    opts: &VqeOptions,
    oo: &OoOptions,
    initial: Option<VqeResult>,
) -> Result<OoResult> {
    opts.validate()?;
    let n = s.norb();
    let ph = PairHamiltonian::from_integrals(s);
    let obj = EnergyObjective::new(&ph, circuit)?;
    let initial = match initial {
        Some(r) => r,
        None => minimize_objective(&obj, opts, &vec![0.0; circuit.nparams()])?,
    };
    // later θ blocks are warm-started, so extra perturbed starts only add cost
    let warm = VqeOptions {
        restarts: 0,
        ..*opts
    };
    let mut cur = s.clone();
    let mut total = Matrix::identity(n, n);
    let mut steps = Vec::new();
    let mut vqe = initial.clone();
    let mut energy_trace = vec![macro_energy(&vqe)];
    let mut converged = false;
    let mut macro_iterations = 0;
    for it in 1..=oo.macro_max {
        macro_iterations = it;
        let before = *energy_trace.last().unwrap();
        let starts = if it == 1 {
            kicked_starts(n, oo, mix_seed(oo.seed, opts.seed))
        } else {
            Vec::new()
        };
        let (rot, _) = optimize_orbitals_from(&cur, &vqe.state, &oo.orbital, &starts)?;
        let is_identity = rot.kappa.amax() == 0.0;
        if !is_identity {
            cur = cur.rotate_orbitals(&rot.u)?;
            total = &total * &rot.u;
        }
        let ph = PairHamiltonian::from_integrals(&cur);
        let obj = EnergyObjective::new(&ph, circuit)?;
        let next = minimize_objective(&obj, &warm, &vqe.theta_star)?;
        steps.push(rot);
        let after = macro_energy(&next);
        if opts.mode == EnergyMode::Exact && after > before + 1e-9 {
            return Err(Error::NonMonotone {
                iteration: it,
                rise: after - before,
            });
        }
        vqe = next;
        energy_trace.push(after);
        if (before - after).abs() < oo.macro_tolerance {
            converged = true;
            break;
        }
    }
    let mut rotated = s.rotate_orbitals(&total)?;
    rotated = rotated.with_symmetry(None);
    Ok(OoResult {
        rotation: total,
        steps,
        vqe,
        initial,
        rotated_integrals: rotated,
        macro_iterations,
        converged,
        energy_trace,
    })
}

#[derive(Debug, Clone)]
pub struct OoDociResult {
    pub energy: Hartree,
    pub rotation: Matrix,
    pub state: PairState,
    pub macro_iterations: usize,
}

/// Minimizes the DOCI ground energy over orbital rotations by the same
/// alternating scheme, starting from the orbitals `start` (identity if None).
pub fn oo_doci(s: &IntegralSet, start: Option<&Matrix>, oo: &OoOptions) -> Result<OoDociResult> {
    let n = s.norb();
    let mut total = start.cloned().unwrap_or_else(|| Matrix::identity(n, n));
    let mut cur = s.rotate_orbitals(&total)?;
    let mut doci = doci_ground_state(&PairHamiltonian::from_integrals(&cur))?;
    let mut macro_iterations = 0;
    for it in 1..=oo.macro_max {
        macro_iterations = it;
        let starts = if it == 1 {
            kicked_starts(n, oo, mix_seed(oo.seed, 0x6F64_6F63))
        } else {
            Vec::new()
        };
        let (rot, _) = optimize_orbitals_from(&cur, &doci.state, &oo.orbital, &starts)?;
        if rot.kappa.amax() == 0.0 {
            break;
        }
        let rotated = cur.rotate_orbitals(&rot.u)?;
        let next = doci_ground_state(&PairHamiltonian::from_integrals(&rotated))?;
        if next.energy >= doci.energy {
            break;
        }
        let gain = doci.energy - next.energy;
        cur = rotated;
        total = &total * &rot.u;
        doci = next;
        if gain < oo.macro_tolerance {
            break;
        }
    }
    Ok(OoDociResult {
        energy: doci.energy,
        rotation: total,
        state: doci.state,
        macro_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::orthogonality_deviation;

    #[test]
    fn planar_rotation() {
        let t = 0.3;
        let k = Matrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let u = kappa_to_unitary(&k).unwrap();
        assert!((u[(0, 0)] - libm::cos(t)).abs() < 1e-14);
        assert!((u[(1, 0)] - libm::sin(t)).abs() < 1e-14);
        assert!(orthogonality_deviation(&u) < 1e-14);
        assert!(kappa_to_unitary(&Matrix::identity(2, 2)).is_err());
        let zero = kappa_to_unitary(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(zero, Matrix::identity(3, 3));
    }

    #[test]
    fn parameters_fill_the_lower_triangle() {
        let r = OrbitalRotation::from_parameters(3, &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(r.kappa[(1, 0)], 0.1);
        assert_eq!(r.kappa[(2, 0)], 0.2);
        assert_eq!(r.kappa[(2, 1)], 0.3);
        assert_eq!(r.kappa[(0, 2)], -0.2);
        assert!(OrbitalRotation::from_parameters(3, &[0.1]).is_err());
    }
}
