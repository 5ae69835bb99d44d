//! Witness construction and verification for the dynamical criterion:
//! conditions (C), (2T), (3T), (L), Properties (1)–(3) of the algebraic
//! criterion, extremal proximality, and the circle analogues for `T`.
//!
//! Every witness returned here has already been re-verified with exact
//! element and set operations.

mod cantor_witness;
mod circle;
mod laws;
mod sampling;
mod suite;

pub use cantor_witness::{
    build_cover_a, decompose_a, extremely_proximal_witness, glue, property2_witness, property3_witness,
    transitivity_witness, verify_glue, weak_triple_witness, CoverA, Decomposition, Property2Witness, Property3Report,
    WeakTriple,
};
pub use circle::{circle_glue, circle_ordered_witness, circle_weak_triple, verify_circle_condition_c, DyadicArc};
pub use laws::{run_clopen_algebra, run_group_laws, ClopenAlgebraConfig};
pub use sampling::{random_admissible_tuple, random_supported_in, residue};
pub use suite::{
    run_bounded_generation, run_criterion_suite, run_extreme_proximality, run_property_chains, ConditionResult,
    Evidence, Family, SuiteReport,
};

use crate::cantor::CantorError;
use crate::elements::ElementError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriterionError {
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error("tuple is not admissible: {0}")]
    NotAdmissible(String),
    #[error("source and target tuples have different lengths")]
    LengthMismatch,
    #[error(
        "entry {index}: cylinder counts {src} and {dst} differ mod {step}; \
         no element of the group maps one onto the other"
    )]
    ResidueMismatch { index: usize, src: usize, dst: usize, step: usize },
    #[error("{0} fixes no nonempty clopen set")]
    NotInB(&'static str),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("cover is invalid: {0}")]
    InvalidCover(String),
}

pub type Result<T, E = CriterionError> = std::result::Result<T, E>;

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CriterionError::VerificationFailed(what()))
    }
}
