//! Coning off the complement of a neighbourhood of an orbit.

use super::metric::{all_distances, quasiconvexity_constant, DistanceMatrix};
use super::{FiniteGraph, HypError, Result};
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `Y_R` together with the edges that were added. The vertex map
/// `π_R: X → Y_R` is the identity on vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeOff {
    pub graph: FiniteGraph,
    pub added: Vec<(usize, usize)>,
}

impl ConeOff {
    pub fn to_dot(&self) -> String {
        self.graph.to_dot(&self.added)
    }
}

/// Vertices at distance at most `r` from the orbit.
pub fn neighbourhood(dm: &DistanceMatrix, orbit: &[usize], r: u32) -> Vec<bool> {
    dm.distance_to_set(orbit).into_iter().map(|d| d <= r).collect()
}

/// Adds `{u, v}` whenever some `u`–`v` geodesic of `g` avoids `N_R(orbit)`,
/// that is, when the subgraph induced on the complement of `N_R` joins
/// them by a path of length `d(u, v)`.
pub fn cone_off(g: &FiniteGraph, dm: &DistanceMatrix, orbit: &[usize], r: u32) -> Result<ConeOff> {
    if orbit.is_empty() {
        return Err(HypError::EmptySet);
    }
    if let Some(&v) = orbit.iter().find(|&&v| v >= g.n()) {
        return Err(HypError::VertexOutOfRange(v));
    }
    let near = neighbourhood(dm, orbit, r);
    let allowed: Vec<bool> = near.iter().map(|b| !b).collect();
    let n = g.n();
    let added: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .filter(|&u| allowed[u])
        .flat_map_iter(|u| {
            let inside = g.bfs_within(u, Some(&allowed));
            let row = dm.row(u);
            (u + 1..n)
                .filter(move |&v| row[v] >= 2 && inside[v] == Some(row[v]))
                .map(move |v| (u, v))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut graph = g.clone();
    for &(u, v) in &added {
        graph.add_edge(u, v)?;
    }
    Ok(ConeOff { graph, added })
}

/// Measurements of `π_R` on a quasiconvex subset and on sampled geodesics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeOffReport {
    pub r: u32,
    /// Measured quasiconvexity constant of `z`.
    pub q: u32,
    /// Largest `d_X / d_Y` over distinct pairs of `z`.
    pub max_distortion: Rational64,
    /// Least integer `K >= 1` with `d_X / K - K <= d_Y <= K d_X + K` on `z`.
    pub k: u32,
    pub z_pairs: usize,
    /// Largest Hausdorff distance (in `Y_R`) between `π` of an `X`-geodesic
    /// and a `Y_R`-geodesic with the same endpoints, over sampled pairs.
    pub hausdorff: u32,
    pub geodesic_pairs: usize,
    /// Whether `R > Q + D` with `D` the measured Hausdorff bound.
    pub precondition_met: bool,
    /// `d_Y <= d_X` on every pair of vertices.
    pub lipschitz: bool,
}

/// Rejects `z` that is not a `q`-quasiconvex subset of the orbit; the
/// `R > Q + D` hypothesis is measured and reported, not enforced.
pub fn verify_coneoff(
    g: &FiniteGraph,
    orbit: &[usize],
    r: u32,
    z: &[usize],
    q: u32,
    samples: usize,
    seed: u64,
) -> Result<ConeOffReport> {
    let dx = all_distances(g)?;
    if z.iter().any(|v| !orbit.contains(v)) {
        return Err(HypError::NotInOrbit);
    }
    let measured_q = quasiconvexity_constant(&dx, z)?;
    if measured_q > q {
        return Err(HypError::NotQuasiconvex { claimed: q, measured: measured_q });
    }
    let cone = cone_off(g, &dx, orbit, r)?;
    let dy = all_distances(&cone.graph)?;
    let n = g.n();

    let lipschitz = (0..n).all(|u| (0..n).all(|v| dy.get(u, v) <= dx.get(u, v)));

    let mut max_distortion = Rational64::from_integer(if z.len() > 1 { 1 } else { 0 });
    let mut z_pairs = 0;
    let mut k = 1u32;
    for (i, &a) in z.iter().enumerate() {
        for &b in &z[i + 1..] {
            z_pairs += 1;
            let (x, y) = (dx.get(a, b) as i64, dy.get(a, b) as i64);
            max_distortion = max_distortion.max(Rational64::new(x, y));
            let kk = |k: u32| k as i64;
            while x - kk(k) * kk(k) > kk(k) * y || y > kk(k) * x + kk(k) {
                k += 1;
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    if pairs.len() > samples {
        pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        pairs.truncate(samples);
    }
    let hausdorff = pairs
        .par_iter()
        .map(|&(a, b)| {
            let px = dx.geodesic(g, a, b);
            let py = dy.geodesic(&cone.graph, a, b);
            hausdorff_distance(&dy, &px, &py)
        })
        .max()
        .unwrap_or(0);

    Ok(ConeOffReport {
        r,
        q: measured_q,
        max_distortion,
        k,
        z_pairs,
        hausdorff,
        geodesic_pairs: pairs.len(),
        precondition_met: r > measured_q + hausdorff,
        lipschitz,
    })
}

pub fn hausdorff_distance(dm: &DistanceMatrix, a: &[usize], b: &[usize]) -> u32 {
    let one_way = |s: &[usize], t: &[usize]| {
        s.iter().map(|&u| t.iter().map(|&v| dm.get(u, v)).min().unwrap_or(0)).max().unwrap_or(0)
    };
    one_way(a, b).max(one_way(b, a))
}
