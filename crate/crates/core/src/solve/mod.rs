//! Solvers: exhaustive search for tiny instances, the exact one-to-one
//! feasibility oracle, the color-coding bounded-trip decision procedure, and
//! the symmetric approximation pipeline.

pub mod exact;
pub mod fpt;
pub mod oracle;
pub mod symmetric;

pub use exact::{BestAssignment, ExactMode, ExactOptions, ExactResult, default_horizon, exact_best};
pub use fpt::{ColoringState, FptMode, FptOutcome, default_trials, fpt_o2o};
pub use oracle::{OracleOptions, OracleOutcome, Witness, WitnessSegment, o2o_oracle, witness_to_schedule};
pub use symmetric::{
    CentroidPartition, Direction, SymmetricApproxResult, TemporalisabilityMode,
    TemporalisabilityOutcome, TransferTree, approx_guarantee, one_to_all_schedule,
    strongly_temporalisable_check, symmetric_approx_schedule, transfer_tree,
    weighted_centroid_partition,
};
