//! Classical-shadow fidelity estimation on simulated density matrices.
//!
//! Measurement is simulated one system qubit at a time with a single reused
//! ancilla. Because the ancilla starts fresh for every qubit and relaxation
//! only acts on the pair being measured, each qubit's noisy readout equals
//! an effective single-qubit POVM; shots are drawn from the resulting joint
//! distribution. [`measure_povm_sequential`] runs the explicit simulation.

mod estimate;
mod measure;
mod noise;
mod state;

pub use estimate::{
    circuit_povm, estimate_fidelity, estimate_table, measurement_circuit, optimal_sic_for_state, set1_circuit,
    snapshot_table, snapshot_table_general, FidelityEstimate, SnapshotTable,
};
pub use measure::{
    effective_povm, effective_povms, first_qubit_distribution, joint_expectations, measure_povm_sequential, run_shadow,
    shot_rng, OutcomeSampler, ShadowRecord,
};
pub use noise::{kraus_completeness, pair_ops, thermal_relaxation_channel, NoiseConfig, NoiseModel, PairOp};
pub use state::{depolarize, prepare_ghz, prepare_product, DensityState, MAX_QUBITS};
