pub mod bounds;
pub mod counterexample;
pub mod error;
pub mod evolving;
pub mod graph;
pub mod measure;
pub mod report;
pub mod rng;
pub mod runner;
pub mod space;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{GraphFamily, VertexId};
pub use report::{BoundReport, Direction};
