//! Canonical graph decompositions built on a generic partitive-family engine.

pub mod bipartition;
pub mod cliquewidth;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod iso;
pub mod modular;
pub mod mso;
pub mod partitive;
pub mod split;
pub mod twodag;
pub mod whitney;
pub mod tutte;

pub use error::{Error, Result};
pub use graph::{MEdge, MultiGraph, RelStructure, Relation, SimpleDigraph, TwoGraph};
