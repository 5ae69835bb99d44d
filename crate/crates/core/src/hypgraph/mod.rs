//! Finite-graph metric toolkit: distances, four-point hyperbolicity,
//! quasiconvexity, cone-offs along an orbit, and finite-scale estimates for
//! isometries.

mod coneoff;
mod dynamics;
mod graph;
mod metric;

pub use coneoff::{cone_off, hausdorff_distance, neighbourhood, verify_coneoff, ConeOff, ConeOffReport};
pub use dynamics::{
    commuting_elliptic_bound, translation_length_estimate, Classification, EllipticBound, GraphMap, TranslationReport,
};
pub use graph::{binary_tree, cayley_ball, cycle, grid, path, random_tree, star, FiniteGraph};
pub use metric::{
    all_distances, delta_exact, delta_four_point, delta_sampled, is_quasiconvex, quasiconvexity_constant, DeltaReport,
    DistanceMatrix, DELTA_EXACT_LIMIT,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("subset is not contained in the orbit")]
    NotInOrbit,
    #[error("subset is not {claimed}-quasiconvex (measured constant {measured})")]
    NotQuasiconvex { claimed: u32, measured: u32 },
    #[error("maps a{a} and b{b} do not commute at vertex {vertex}")]
    NotCommuting { a: usize, b: usize, vertex: usize },
    #[error("ray is not geodesic at index {0}")]
    NotGeodesic(usize),
    #[error("map is undefined at vertex {0}")]
    Undefined(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = HypError> = std::result::Result<T, E>;

#[cfg(test)]
mod tests;
