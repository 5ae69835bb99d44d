//! Quasimorphism laboratory over small exactly computable groups.

mod lab;
mod oracle;

pub use lab::{
    ball_pairs, busemann_estimate, defect_estimate, homogenize_estimate, integer_identity, loxodromic_link_check,
    parity_perturbed, quasicocycle_extend, quasiline_generators, rat, ratio, respects_claim, wreath_lift, zero_map,
    BusemannReport, EpsQuasicocycle, Homogenization, LinkReport, QuasiLineReport, Quasimorphism, RaySpec,
};
pub use oracle::{CantorOracle, CyclicWreath, Dihedral, GroupOracle, InfiniteDihedral, Integers, WreathElem};

use crate::hypgraph::HypError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasiError {
    #[error(transparent)]
    Graph(#[from] HypError),
    #[error("iteration count must be positive")]
    ZeroIterations,
    #[error("ray is empty")]
    EmptyRay,
    #[error("ray is not geodesic at index {0}")]
    NotGeodesic(usize),
    #[error("image of vertex {0} lies outside the graph")]
    OutsideGraph(usize),
    #[error("no value of p lies in (0, C/2) on the ball (C = {0})")]
    NoSmallValue(String),
    #[error("defect {defect} exceeds C/2 (C = {c})")]
    DefectTooLarge { defect: String, c: String },
    #[error("coset representative lies in the kernel of ε")]
    InKernel,
}

pub type Result<T, E = QuasiError> = std::result::Result<T, E>;

#[cfg(test)]
mod tests;
