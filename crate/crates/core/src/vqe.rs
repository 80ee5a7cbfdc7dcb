//! The VQE outer loop: minimize the ansatz energy over θ with either exact
//! expectations or shot-sampled estimates.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::integrals::IntegralSet;
use crate::optimize::{
    bfgs, nelder_mead, spsa, BfgsOptions, Minimum, NelderMeadOptions, SpsaOptions,
};
use crate::pairham::{PairHamiltonian, PauliTermGroups};
use crate::simulator::{
    expectation_sampled, AnsatzCircuit, AnsatzSimulator, GateOrder, PairBasis, PairState,
    SparsePairOperator,
};
use crate::{Error, Hartree, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergyMode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptimizerKind {
    /// Nelder–Mead, restarted from its own result until it stops improving.
    Simplex,
    /// BFGS on central finite-difference gradients. Exact mode only.
    QuasiNewton,
    /// SPSA.
    StochasticApproximation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VqeOptions {
    pub mode: EnergyMode,
    /// Shots per measurement group in sampled mode.
    pub shots: u64,
    pub optimizer: OptimizerKind,
    /// Per start. Simplex iterations, BFGS iterations or SPSA steps.
    pub max_iterations: usize,
    pub energy_tolerance: Hartree,
    /// Extra starts beyond the first, each perturbed uniformly in ±0.1.
    pub restarts: usize,
    pub seed: u64,
    /// Ansatz depth D.
    pub depth: usize,
    pub order: GateOrder,
}

impl VqeOptions {
    pub fn exact() -> Self {
        VqeOptions {
            mode: EnergyMode::Exact,
            shots: 100_000,
            optimizer: OptimizerKind::Simplex,
            max_iterations: 20_000,
            energy_tolerance: 1e-8,
            restarts: 2,
            seed: 0,
            depth: 1,
            order: GateOrder::default(),
        }
    }

    pub fn sampled(shots: u64) -> Self {
        VqeOptions {
            mode: EnergyMode::Sampled,
            shots,
            optimizer: OptimizerKind::StochasticApproximation,
            max_iterations: 300,
            energy_tolerance: 1e-4,
            restarts: 0,
            ..VqeOptions::exact()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.energy_tolerance > 0.0) {
            return Err(Error::InvalidOption(
                "energy tolerance must be positive".into(),
            ));
        }
        if self.mode == EnergyMode::Sampled && self.shots == 0 {
            return Err(Error::InvalidOption(
                "sampled mode needs at least one shot".into(),
            ));
        }
        if self.mode == EnergyMode::Sampled && self.optimizer == OptimizerKind::QuasiNewton {
            return Err(Error::InvalidOption(
                "finite-difference gradients are only offered in exact mode".into(),
            ));
        }
        if self.depth == 0 {
            return Err(Error::InvalidOption(
                "ansatz depth must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl Default for VqeOptions {
    fn default() -> Self {
        VqeOptions::exact()
    }
}

#[derive(Debug, Clone)]
pub struct VqeResult {
    pub theta_star: Vec<f64>,
    /// The exact expectation in exact mode, a fresh sampled estimate otherwise.
    pub energy: Hartree,
    /// Zero in exact mode.
    pub stderr: Hartree,
    /// Exact expectation at `theta_star`, whatever the mode.
    pub exact_energy: Hartree,
    pub iterations: usize,
    pub evaluations: usize,
    pub mode: EnergyMode,
    pub shots_used: u64,
    pub converged: bool,
    /// Best energy so far after each optimizer iteration, across all starts.
    pub trace: Vec<Hartree>,
    pub state: PairState,
}

impl VqeResult {
    /// `iteration,best_energy`
    pub fn trace_csv(&self) -> alloc::string::String {
        let mut out = alloc::string::String::from("iteration,best_energy\n");
        for (i, e) in self.trace.iter().enumerate() {
            out.push_str(&alloc::format!("{i},{e:.10}\n"));
        }
        out
    }
}

/// splitmix64 finalizer, used to derive independent sub-seeds.
pub(crate) fn mix_seed(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Everything needed to evaluate E(θ) for a fixed Hamiltonian and circuit.
pub struct EnergyObjective {
    sim: AnsatzSimulator,
    op: SparsePairOperator,
    groups: PauliTermGroups,
}

impl EnergyObjective {
    pub fn new(ph: &PairHamiltonian, circuit: &AnsatzCircuit) -> Result<EnergyObjective> {
        if circuit.nqubits() != ph.nqubits() || circuit.nocc() != ph.npairs() {
            return Err(Error::Mismatch(alloc::format!(
                "circuit with {} qubits and {} occupied vs Hamiltonian with {} qubits and {} pairs",
                circuit.nqubits(),
                circuit.nocc(),
                ph.nqubits(),
                ph.npairs()
            )));
        }
        let basis = Arc::new(PairBasis::new(ph.nqubits(), ph.npairs())?);
        Ok(EnergyObjective {
            op: SparsePairOperator::new(ph, &basis)?,
            sim: AnsatzSimulator::new(circuit, basis)?,
            groups: ph.to_pauli_terms(),
        })
    }

    pub fn nparams(&self) -> usize {
        self.sim.circuit().nparams()
    }

    pub fn state(&self, theta: &[f64]) -> Result<PairState> {
        self.sim.evolve(theta)
    }

    pub fn exact(&self, theta: &[f64]) -> Result<Hartree> {
        Ok(self.op.expectation(self.state(theta)?.amplitudes()))
    }

    pub fn sampled(&self, theta: &[f64], shots: u64, seed: u64) -> Result<(Hartree, Hartree, u64)> {
        let st = self.state(theta)?;
        let e = expectation_sampled(&st, &self.groups, shots, seed)?;
        Ok((e.energy, e.stderr, e.shots_used))
    }
}

fn run_start(
    obj: &EnergyObjective,
    opts: &VqeOptions,
    x0: &[f64],
    seed: u64,
    shots_used: &mut u64,
) -> Minimum {
    match opts.mode {
        EnergyMode::Exact => {
            let f = |x: &[f64]| obj.exact(x).unwrap_or(f64::INFINITY);
            match opts.optimizer {
                OptimizerKind::Simplex => {
                    let nm = NelderMeadOptions {
                        max_iterations: opts.max_iterations,
                        ftol: opts.energy_tolerance * 1e-2,
                        ..Default::default()
                    };
                    let mut best = nelder_mead(f, x0, &nm);
                    let mut rounds = 0;
                    while best.iterations > 0 && rounds < 20 {
                        rounds += 1;
                        let again = nelder_mead(f, &best.x, &nm);
                        let gain = best.value - again.value;
                        best.iterations += again.iterations;
                        best.evaluations += again.evaluations;
                        if gain > 0.0 {
                            best.trace.extend(again.trace);
                            best.x = again.x;
                            best.value = again.value;
                            best.converged = again.converged;
                        }
                        if gain < opts.energy_tolerance {
                            break;
                        }
                    }
                    best
                }
                OptimizerKind::QuasiNewton => bfgs(
                    f,
                    x0,
                    &BfgsOptions {
                        max_iterations: opts.max_iterations,
                        ftol: opts.energy_tolerance * 1e-2,
                        ..Default::default()
                    },
                ),
                OptimizerKind::StochasticApproximation => spsa(
                    f,
                    x0,
                    &SpsaOptions {
                        iterations: opts.max_iterations,
                        seed,
                        ..Default::default()
                    },
                ),
            }
        }
        EnergyMode::Sampled => {
            let mut counter = 0u64;
            let mut f = |x: &[f64]| {
                counter += 1;
                match obj.sampled(x, opts.shots, mix_seed(seed, counter)) {
                    Ok((e, _, used)) => {
                        *shots_used += used;
                        e
                    }
                    Err(_) => f64::INFINITY,
                }
            };
            match opts.optimizer {
                OptimizerKind::Simplex => nelder_mead(
                    &mut f,
                    x0,
                    &NelderMeadOptions {
                        max_iterations: opts.max_iterations,
                        ftol: opts.energy_tolerance,
                        ..Default::default()
                    },
                ),
                _ => spsa(
                    &mut f,
                    x0,
                    &SpsaOptions {
                        iterations: opts.max_iterations,
                        seed: mix_seed(seed, u64::MAX),
                        ..Default::default()
                    },
                ),
            }
        }
    }
}

/// Minimizes E(θ) starting from θ = 0.
pub fn minimize_energy(
    ph: &PairHamiltonian,
    circuit: &AnsatzCircuit,
    opts: &VqeOptions,
) -> Result<VqeResult> {
    minimize_energy_from(ph, circuit, opts, &vec![0.0; circuit.nparams()])
}

/// Minimizes E(θ). The first start is `theta0` itself; each restart adds a
/// uniform ±0.1 perturbation to it. Returns the best start.
pub fn minimize_energy_from(
    ph: &PairHamiltonian,
    circuit: &AnsatzCircuit,
    opts: &VqeOptions,
    theta0: &[f64],
) -> Result<VqeResult> {
    opts.validate()?;
    let obj = EnergyObjective::new(ph, circuit)?;
    minimize_objective(&obj, opts, theta0)
}

pub(crate) fn minimize_objective(
    obj: &EnergyObjective,
    opts: &VqeOptions,
    theta0: &[f64],
) -> Result<VqeResult> {
    if theta0.len() != obj.nparams() {
        return Err(Error::Dimension {
            what: "initial parameter vector",
            expected: obj.nparams(),
            actual: theta0.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut shots_used = 0u64;
    let mut best: Option<(Minimum, f64)> = None;
    let mut trace: Vec<f64> = Vec::new();
    let (mut iterations, mut evaluations) = (0, 0);
    // with the optimizer disabled the answer is θ0 itself
    let restarts = if opts.max_iterations == 0 {
        0
    } else {
        opts.restarts
    };
    for start in 0..=restarts {
        let x0: Vec<f64> = if start == 0 {
            theta0.to_vec()
        } else {
            theta0
                .iter()
                .map(|t| t + rng.random_range(-0.1..=0.1))
                .collect()
        };
        let m = run_start(
            obj,
            opts,
            &x0,
            mix_seed(opts.seed, start as u64),
            &mut shots_used,
        );
        iterations += m.iterations;
        evaluations += m.evaluations;
        // in sampled mode, rank starts by their exact energy to keep the
        // choice free of shot noise in the comparison itself
        let rank = match opts.mode {
            EnergyMode::Exact => m.value,
            EnergyMode::Sampled => obj.exact(&m.x)?,
        };
        let floor = trace.last().copied().unwrap_or(f64::INFINITY);
        let mut running = floor;
        for &v in &m.trace {
            running = running.min(v);
            trace.push(running);
        }
        if best.as_ref().is_none_or(|(_, r)| rank < *r) {
            best = Some((m, rank));
        }
    }
    let (m, _) = best.expect("at least one start");
    let state = obj.state(&m.x)?;
    let exact_energy = obj.exact(&m.x)?;
    let (energy, stderr) = match opts.mode {
        EnergyMode::Exact => (exact_energy, 0.0),
        EnergyMode::Sampled => {
            let (e, s, used) = obj.sampled(&m.x, opts.shots, mix_seed(opts.seed, 0xF1A1))?;
            shots_used += used;
            (e, s)
        }
    };
    Ok(VqeResult {
        theta_star: m.x,
        energy,
        stderr,
        exact_energy,
        iterations,
        evaluations,
        mode: opts.mode,
        shots_used,
        converged: m.converged,
        trace,
        state,
    })
}

/// Pair Hamiltonian, ansatz with O = n and V = N − n, then [`minimize_energy`].
pub fn run_vqe(s: &IntegralSet, opts: &VqeOptions) -> Result<VqeResult> {
    let ph = PairHamiltonian::from_integrals(s);
    let circuit =
        AnsatzCircuit::with_order(s.npairs(), s.norb() - s.npairs(), opts.depth, opts.order)?;
    minimize_energy(&ph, &circuit, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::Eri;
    use crate::linalg::Matrix;

    fn two_orbital() -> IntegralSet {
        let h = Matrix::from_row_slice(2, 2, &[-1.25, 0.0, 0.0, -0.47]);
        let mut g = Eri::zeros(2);
        g.set(0, 0, 0, 0, 0.67);
        g.set(1, 1, 1, 1, 0.70);
        g.set(0, 0, 1, 1, 0.66);
        g.set(0, 1, 0, 1, 0.18);
        IntegralSet::new(2, 0, 0.7, h, g).unwrap()
    }

    #[test]
    fn zero_iterations_give_the_reference_energy() {
        let s = two_orbital();
        let ph = PairHamiltonian::from_integrals(&s);
        let opts = VqeOptions {
            max_iterations: 0,
            restarts: 0,
            ..VqeOptions::exact()
        };
        let r = run_vqe(&s, &opts).unwrap();
        assert!((r.energy - ph.reference_energy()).abs() < 1e-14);
    }

    #[test]
    fn two_level_problem_reaches_the_lower_eigenvalue() {
        let s = two_orbital();
        let ph = PairHamiltonian::from_integrals(&s);
        let d0 = ph.diagonal(0b01);
        let d1 = ph.diagonal(0b10);
        let k = ph.kmat()[(0, 1)];
        let exact = 0.5 * (d0 + d1) - libm::sqrt(0.25 * (d0 - d1) * (d0 - d1) + k * k);
        for optimizer in [OptimizerKind::Simplex, OptimizerKind::QuasiNewton] {
            let r = run_vqe(
                &s,
                &VqeOptions {
                    optimizer,
                    ..VqeOptions::exact()
                },
            )
            .unwrap();
            assert!(
                (r.energy - exact).abs() < 1e-8,
                "{optimizer:?}: {} vs {exact}",
                r.energy
            );
            assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn sampled_mode_is_reproducible() {
        let s = two_orbital();
        let opts = VqeOptions {
            max_iterations: 40,
            seed: 9,
            ..VqeOptions::sampled(2000)
        };
        let a = run_vqe(&s, &opts).unwrap();
        let b = run_vqe(&s, &opts).unwrap();
        assert_eq!(a.theta_star, b.theta_star);
        assert_eq!(a.energy, b.energy);
        assert!(a.stderr > 0.0 && a.shots_used > 0);
    }

    #[test]
    fn options_are_validated() {
        let mut o = VqeOptions::sampled(0);
        assert!(o.validate().is_err());
        o.shots = 10;
        o.optimizer = OptimizerKind::QuasiNewton;
        assert!(o.validate().is_err());
        assert!(VqeOptions {
            energy_tolerance: 0.0,
            ..VqeOptions::exact()
        }
        .validate()
        .is_err());
    }
}
