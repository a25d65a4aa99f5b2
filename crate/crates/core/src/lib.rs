//! Loose-triangle-free subgraphs of uniform hypergraphs.
//!
//! The crate builds triangle-free template hypergraphs from
//! progression-free difference sets, extracts large loose-triangle-free
//! subgraphs of arbitrary hosts with randomized and exact algorithms, counts
//! triangle-free 3-graphs at tiny sizes, and runs seeded scaling experiments.

pub mod apfree;
pub mod census;
pub mod error;
pub mod experiment;
pub mod extract;
pub mod hosts;
pub mod hypergraph;
pub mod io;
pub mod seeds;
pub mod template;

pub use apfree::{Ambient, ApFreeSet};
pub use error::{Error, Result};
pub use extract::{Algorithm, ExtractionResult};
pub use hosts::HostSpec;
pub use hypergraph::{Hypergraph, LooseTriangle, Vertex};
pub use io::HypergraphFile;
pub use template::Template;
