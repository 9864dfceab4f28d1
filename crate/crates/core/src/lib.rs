//! Exact difference-of-convex decompositions of continuous piecewise linear
//! functions over complete polyhedral complexes.

pub mod caps;
pub mod complex;
pub mod constructions;
pub mod cpwl;
pub mod decomposition;
pub mod error;
pub mod fixtures;
pub mod gluing;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod nn;
pub mod plot;
pub mod rat;
pub mod submodular;

pub use error::{Error, Result};
pub use rat::Rat;
