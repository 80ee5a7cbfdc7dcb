//! Exchange-gate ansatz simulation.
//!
//! Two backends: a real statevector over the C(N, n) weight-n bitstrings
//! ([`PairState`]) used everywhere in practice, and a complex 2^N gate-level
//! backend ([`full`]) that applies the CNOT / controlled-rotation / CNOT
//! decomposition literally, for cross-validation.

mod basis;
mod circuit;
pub mod full;
mod sampling;
mod state;

pub use basis::PairBasis;
pub use circuit::{
    exchange_gate_matrix, resource_counts, AnsatzCircuit, ExchangeGate, GateOrder, ResourceCounts,
};
pub use sampling::{expectation_sampled, sample_moments, SampledEnergy, SampledMoments};
pub use state::{
    evolve, expectation_exact, occupation_moments, AnsatzSimulator, OccupationMoments, PairState,
    SparsePairOperator,
};
