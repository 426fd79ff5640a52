//! A synchronous CONGEST simulator and the distributed fault-tolerant spanner
//! build run on it.

pub mod broadcast;
pub mod error;
pub mod log;
pub mod network;
pub mod spanner;

pub use broadcast::{tree_broadcast, BroadcastOutcome, BroadcastTree, TreeLink};
pub use error::SimError;
pub use network::{Encoding, Envelope, Network, Payload, Tag};
pub use spanner::{simulate, simulate_distributed_spanner, DistConfig, RoundReport, Simulation, StageRounds};
