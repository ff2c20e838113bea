use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("trip index {0} out of range ({1} trips)")]
    TripIndexOutOfRange(usize, usize),

    #[error("node index {0} out of range ({1} nodes)")]
    NodeIndexOutOfRange(usize, usize),

    #[error("malformed schedule: {0}")]
    MalformedSchedule(String),

    #[error("malformed weak schedule: {0}")]
    MalformedWeakSchedule(String),

    #[error("temporalisation has {got} starts but the network has {want} trips")]
    TemporalisationLengthMismatch { got: usize, want: usize },

    #[error("reweight expects {want} weights, got {got}")]
    ReweightLengthMismatch { got: usize, want: usize },

    #[error("weight at position {0} is {1}; weights must be >= 1")]
    NonPositiveWeight(usize, i64),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("network is not symmetric: trip {witness} has no unmatched reverse")]
    NotSymmetric { witness: usize },

    #[error("underlying multidigraph is not strongly connected")]
    NotStronglyConnected,

    #[error("transfer graph is disconnected (underlying multidigraph is not strongly connected)")]
    TransferGraphDisconnected,

    #[error("search space of {required} candidates exceeds cap {cap}")]
    CapExceeded { required: u128, cap: u128 },

    #[error("state cap {cap} exceeded after {explored} states")]
    StateCapExceeded { explored: usize, cap: usize },

    #[error("{0} supports at most 128 trips, network has {1}")]
    TooManyTrips(&'static str, usize),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("formula error: {0}")]
    Formula(String),

    #[error("assignment does not satisfy clause {0}")]
    UnsatisfiedClause(usize),

    #[error("network fails validation: {0}")]
    InvalidNetwork(String),

    #[error("internal verification failure: {0}")]
    VerificationFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
