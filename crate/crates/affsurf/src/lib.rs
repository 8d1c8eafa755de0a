pub mod error;
pub mod divisor;
pub mod family;
pub mod graph;
pub mod iso;
pub mod laurent;
pub mod linalg;
pub mod plumbing;
pub mod topology;

pub use error::{Error, Result};
pub use graph::{ChainType, Edge, GraphKind, Vertex, WeightedGraph};
