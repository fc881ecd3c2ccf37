//! Exact simplicial cohomology: Smith normal form, cochains, cup and ∪ᵢ products,
//! Steenrod squares, Bocksteins and coefficient reductions.

pub mod cochain;
pub mod cohomology;
pub mod complex;
pub mod f2;
pub mod int;
pub mod snf;
pub mod triangulations;

pub use cochain::{Coefficients, Cochain};
pub use cohomology::{Class, Cohomology, GradedGroup, Method};
pub use complex::{SimplicialComplex, VertexId};
pub use f2::{BitVec, F2Matrix, Subspace};
pub use int::Int;
pub use snf::{smith_normal_form, Snf, ZMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("coefficient ring mismatch")]
    RingMismatch,
    #[error("cochains live on different complexes")]
    ComplexMismatch,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}
