//! Exact computational engine for reduced curve singularities presented by
//! branch parametrizations: partial normalization chains, the associated
//! matrix order, its quasi-hereditary quotient algebras with their quivers
//! and homological invariants, and the tilting algebra of rational projective
//! curve configurations.

pub mod chain;
pub mod curve;
pub mod error;
pub mod findim;
pub mod fixtures;
pub mod lattice;
pub mod linalg;
pub mod order;
pub mod pipeline;
pub mod qha;
pub mod report;
pub mod scalar;
pub mod series;

pub use error::{KoenigError, Result};
pub use lattice::FractionalIdeal;
pub use scalar::{Field, Scalar};
pub use series::SeriesVec;
