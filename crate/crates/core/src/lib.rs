//! Coarse graph decompositions certified against fat minors.
//!
//! Given a graph `G` and a fatness `K`, the drivers in [`cactus`] and [`sp`]
//! return either an honest radial decomposition of `G` modelled on a
//! K4⁻-minor-free (resp. K4-minor-free) graph within fixed bounds, or a
//! `K`-fat K4⁻ (resp. K4) minor model. Every certificate has an independent
//! checker in [`minors`], [`decomp`] or [`quasi`].

pub mod cactus;
pub mod corpus;
pub mod decomp;
pub mod error;
pub mod graph;
pub mod minors;
pub mod quasi;
pub mod sp;

pub use decomp::{GraphDecomposition, Outcome, PartialDecomposition};
pub use error::{Error, Result};
pub use graph::{Dist, Graph, Path, Vertex, VertexSet};
pub use minors::{MinorModel, Pattern};
