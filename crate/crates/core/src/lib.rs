//! Cohomology models of closed 9-manifolds, their characteristic classes, and
//! the obstruction-theoretic decision of whether they carry a contact structure.

pub mod builders;
pub mod classes;
pub mod decide;
pub mod iso;
pub mod library;
pub mod model;
pub mod poly;
pub mod schema;
pub mod selftest;
pub mod validate;

pub use classes::{CosetH8, SWClasses, SpincData, WuClasses};
pub use decide::{decide, decide_connected_sum, Missing, Obstruction, Outcome, Verdict};
pub use model::{CohomologyModel, Degree, ManifoldModel, OmegaDatum, Orientation, ZVec};
pub use validate::{validate, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("torsion factor: products are only assembled for torsion-free factors")]
    TorsionFactor,
    #[error("integral products missing for degree pair {0:?}")]
    MissingProducts((usize, usize)),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("connected sum needs oriented models")]
    NotOrientable,
    #[error("not a closed manifold: {0}")]
    NotClosedManifold(String),
    #[error("unknown library model {0:?}")]
    UnknownModel(String),
    #[error("simplicial engine: {0}")]
    Engine(String),
}
