//! Vertex fault-tolerant spanners and vertex-connectivity certificates built
//! from fault-tolerant clusterings.
//!
//! The randomized build lives in [`meta`], the two-step 3-spanner in
//! [`warmup`], the deterministic build in [`detkit`], and the ground-truth
//! checks in [`verify`].

pub mod certificate;
pub mod detkit;
pub mod error;
pub mod fan;
pub mod generate;
pub mod graph;
pub mod invariants;
pub mod meta;
pub mod mis;
pub mod path;
pub mod result;
pub mod rng;
pub mod shortest;
pub mod verify;
pub mod warmup;

pub use error::{BuildError, GraphError, HittingError, VerifyError};
pub use graph::{Edge, EdgeId, EdgeKey, EdgeSet, FaultSet, Graph, VertexId, Weight};
pub use path::Path;
pub use result::SpannerResult;
