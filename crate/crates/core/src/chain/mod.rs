//! Finite chain complexes over ℤ or a field.

mod complex;
mod filtered;
pub mod json;
mod maps;
mod matrix;
mod reduced;

use thiserror::Error;

use crate::graded::Degree;
use crate::scalar::Ring;

pub use complex::{homology, homology_of, ChainComplex, ChainComplexBuilder, HomologyGroup};
pub use filtered::{
    check_filtration_preserving, filtration_window_homology, invert_upper_triangular, FilteredChainComplex,
    Strictness,
};
pub use maps::{
    commutator, from_graded_map, verify_chain_map, verify_commutator_relation, verify_homotopy, ChainMapData,
};
pub use matrix::{smith_normal_form, Matrix, SmithForm};
pub use reduced::{
    compare_reduced, cone_generator, reduced_chain_map, reduced_complex, reduction_kind, DistinguishedPoint,
    ReducedComparison, ReductionKind,
};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ChainError {
    #[error("∂∘∂ ≠ 0 starting in degree {degree}")]
    NotAComplex { degree: Degree },
    #[error("generator {0:?} appears twice")]
    DuplicateGenerator(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ring mismatch: expected {expected}, found {found}")]
    RingMismatch { expected: Ring, found: Ring },
    #[error("distinguished generator {0:?} is not a cycle")]
    NotACycle(String),
    #[error("filtration: {0}")]
    Filtration(String),
    #[error("diagonal not a unit at generator {0:?}")]
    NonUnitDiagonal(String),
    #[error("window endpoint {0} equals a generator's filtration value")]
    IrregularWindow(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
}
