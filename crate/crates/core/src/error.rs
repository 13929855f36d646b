use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state label {label:?} is not a {n_qubits}-character binary string")]
    InvalidLabel { label: String, n_qubits: usize },

    #[error("basis index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: u64, n_qubits: usize },

    #[error("basis state {0} appears in more than one cycle")]
    OverlappingCycles(usize),

    #[error("degenerate cycle: {0}")]
    DegenerateCycle(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{what} needs {requested} qubits, above the cap of {cap}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("excitation probability 1/2 corresponds to infinite temperature")]
    InfiniteTemperature,

    #[error("excitation probability {0} > 1/2 is a population inversion with no nonnegative temperature")]
    PopulationInversion(f64),

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("invalid temperature {0} K")]
    InvalidTemperature(f64),

    #[error("invalid energy gap {0}")]
    InvalidEnergyGap(f64),

    #[error("phase-bearing unitary not synthesizable as multi-controlled-NOT circuit")]
    PhaseBearing,

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("qubit set must not be empty")]
    EmptyQubitSet,

    #[error("transposition endpoints must differ (got {0} twice)")]
    IdenticalStates(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid probability vector: {0}")]
    InvalidVector(String),
}

impl Error {
    /// True for errors caused by exceeding a configured size cap.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
