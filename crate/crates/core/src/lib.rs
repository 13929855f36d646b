//! Algorithmic cooling of qubit registers with permutation unitaries.
//!
//! Basis index bit `n - 1 - q` holds qubit `q`, so qubit 0 is the most
//! significant bit and the label `"101"` is index 5. Qubit 0 is the target.

pub mod basis;
pub mod error;
pub mod methods;
pub mod protocols;
pub mod sim;
pub mod synth;
pub mod thermo;
pub mod unitary;

pub use error::{Error, Result};
pub use methods::{
    build_circuit, dynamic_final_p, final_p, hbac_final_p, report, report_from_p,
    semi_open_final_p, simulate_method, sub_optimal_final_p, total_work_cost, work_cost,
    CoolingReport, MethodCircuit, MethodConfig,
};
pub use protocols::{
    heterogeneous_max_cooling, minimal_work_protocol, mirror_protocol, ppa, ProtocolKind,
};
pub use sim::{simulate, NoiseModel, NoisePlacement, ProbVector};
pub use synth::{
    export_qasm, gate_count, simplify, synthesize_circuit, Circuit, GateCount, Instruction, McNot,
    ResetInstr,
};
pub use thermo::{
    probability_from_temperature, temperature_from_probability, thermal_product_vector, EnergyGap,
    EnergyUnits, ExcitationProbability, Temperature, ThermalSpec,
};
pub use unitary::{CoolingUnitary, CycleFile, StateLabel, ValuePrecision};
