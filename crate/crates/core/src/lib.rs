pub mod ackermann;
pub mod ancestry;
pub mod applications;
pub mod cover;
pub mod error;
pub mod gen;
pub mod graph;
pub mod pathquery;
pub mod routing;
pub mod payload;
pub mod spanner;
pub mod tree;

pub use error::{Error, Result};
pub use tree::{TreePath, Vertex, WeightedTree};
