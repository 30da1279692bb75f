//! Graph-minor toolkit.
//!
//! The crate is organised bottom-up: [`graph`] is the substrate, [`minor`]
//! and [`obstruction`] decide containment and enumerate obstruction sets,
//! [`walls`] and [`flatness`] handle wall templates and flatness
//! certificates, [`contraction`] extracts apex grids, [`boundaried`] holds
//! the boundaried-graph machinery, [`decomp`] the tree decompositions and
//! [`bounds`] the exact bound evaluators.

pub mod boundaried;
pub mod bounds;
pub mod contraction;
pub mod decomp;
pub mod error;
pub mod flatness;
pub mod graph;
pub mod grid;
pub mod minor;
pub mod obstruction;
pub mod util;
pub mod walls;

pub use error::{Budget, Error, Result};
pub use graph::{CanonicalCode, ContractionWitness, Graph};
