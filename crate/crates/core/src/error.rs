use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("edge #{edge}: self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: VertexId },
    #[error("edge #{edge}: duplicate of {u}-{v}")]
    DuplicateEdge { edge: usize, u: VertexId, v: VertexId },
    #[error("edge #{edge}: vertex id out of range for n={n}")]
    VertexOutOfRange { edge: usize, n: usize },
    #[error("edge #{edge}: weight must be positive")]
    ZeroWeight { edge: usize },
    #[error("too many edges for 32-bit edge ids")]
    TooManyEdges,
    #[error("vertex {0} is part of the excluded set")]
    EndpointExcluded(VertexId),
    #[error("vertex {vertex} out of range for n={n}")]
    NoSuchVertex { vertex: VertexId, n: usize },
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("fault budget f={f} must satisfy 1 <= f < n={n}")]
    FaultBudget { f: usize, n: usize },
    #[error("stretch parameter k={0} must be at least 2")]
    StretchParameter(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("exhaustive check needs {needed} fault sets, above the cap of {cap}; use sampled mode")]
    BudgetExceeded { needed: u128, cap: u128 },
    #[error("subgraph edge {0} does not exist in the host graph")]
    NotASubgraph(u32),
    #[error("edge endpoints must differ")]
    DegenerateEdge,
    #[error("{0}")]
    Parameter(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HittingError {
    #[error("set {index} has {size} elements, below the admissible minimum {needed}")]
    Inadmissible { index: usize, size: usize, needed: usize },
    #[error("set {index} contains element {element} outside the ground set")]
    OutsideGround { index: usize, element: u32 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}
