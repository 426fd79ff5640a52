use thiserror::Error;
use vft_core::error::BuildError;
use vft_core::graph::{EdgeId, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("round {round}, edge {edge} ({from} -> {to}): message of {bits} bits exceeds the {limit}-bit bandwidth")]
    Bandwidth { round: u64, edge: EdgeId, from: VertexId, to: VertexId, bits: u32, limit: u32 },
    #[error("vertex {vertex} is not an endpoint of edge {edge}")]
    NotIncident { vertex: VertexId, edge: EdgeId },
    #[error("phase {phase}, {stage}: {rounds} rounds exceed the budget of {budget}")]
    RoundBudget { phase: usize, stage: &'static str, rounds: u64, budget: u64 },
    #[error("vertex {vertex}: {detail}")]
    Protocol { vertex: VertexId, detail: String },
    #[error("message log: {0}")]
    Log(String),
    #[error(transparent)]
    Build(#[from] BuildError),
}
