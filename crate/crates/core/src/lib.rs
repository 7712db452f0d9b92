//! Quantum state discrimination through Pauli channels, the quantum switch
//! and higher-order superswitches.
//!
//! Channels are Pauli probability vectors ([`PauliChannel`]). Switching two
//! channels and measuring the control yields a [`BranchDistribution`]; the
//! guessing probability of a protocol is the branch-weighted Helstrom value.

pub mod analysis;
pub mod dim4;
pub mod discrimination;
pub mod error;
pub mod kraus;
pub mod linalg;
pub mod pauli;
pub mod reference;
pub mod switch;
pub mod verify;

pub use analysis::{
    region_volume, region_volumes, superswitch_sequence, sweep, Axis, ChannelFamily, EngineLimits, ParameterGrid,
    Protocol, RegionEstimate, RegionPredicate, SweepTable,
};
pub use discrimination::{helstrom_two, protocol_guessing, GuessingResult, Povm, Strategy};
pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use pauli::{BlochVector, DensityMatrix, Dim, Ensemble, PauliChannel};
pub use switch::{superswitch, switch_pair, Branch, BranchDistribution};
