//! All-pairs distances, four-point hyperbolicity and quasiconvexity.

use super::{FiniteGraph, HypError, Result};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Exact shortest-path distances of a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

/// BFS from every vertex; rejects disconnected graphs.
pub fn all_distances(g: &FiniteGraph) -> Result<DistanceMatrix> {
    let n = g.n();
    let rows: Vec<Vec<Option<u32>>> = (0..n).into_par_iter().map(|s| g.bfs(s)).collect();
    let mut d = Vec::with_capacity(n * n);
    for row in rows {
        for x in row {
            d.push(x.ok_or(HypError::Disconnected)?);
        }
    }
    Ok(DistanceMatrix { n, d })
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// Distance from each vertex to the nearest member of `set`.
    pub fn distance_to_set(&self, set: &[usize]) -> Vec<u32> {
        (0..self.n).map(|v| set.iter().map(|&z| self.get(v, z)).min().unwrap_or(u32::MAX)).collect()
    }

    /// Whether `v` lies on some geodesic from `x` to `y`.
    pub fn on_geodesic(&self, x: usize, v: usize, y: usize) -> bool {
        self.get(x, v) + self.get(v, y) == self.get(x, y)
    }

    /// The geodesic from `x` to `y` that always steps to the least-numbered
    /// admissible neighbour.
    pub fn geodesic(&self, g: &FiniteGraph, x: usize, y: usize) -> Vec<usize> {
        let mut out = vec![x];
        let mut cur = x;
        while cur != y {
            cur = *g
                .neighbors(cur)
                .iter()
                .find(|&&w| self.get(w, y) + 1 == self.get(cur, y))
                .expect("distances come from this graph");
            out.push(cur);
        }
        out
    }
}

/// Four-point `δ`: the least `δ` with, for every quadruple, the two largest
/// of the three pair-sums within `2δ` of each other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub delta: Rational64,
    /// All quadruples examined; otherwise `delta` is a lower bound.
    pub exact: bool,
    pub quadruples: u64,
}

pub const DELTA_EXACT_LIMIT: usize = 60;
const DELTA_SAMPLES: u64 = 2_000_000;

/// Twice the four-point gap of one quadruple.
fn gap(dm: &DistanceMatrix, x: usize, y: usize, z: usize, w: usize) -> u32 {
    let mut s = [dm.get(x, y) + dm.get(z, w), dm.get(x, z) + dm.get(y, w), dm.get(x, w) + dm.get(y, z)];
    s.sort_unstable();
    s[2] - s[1]
}

/// Exact for at most [`DELTA_EXACT_LIMIT`] vertices, otherwise a seeded
/// sample of quadruples.
pub fn delta_four_point(dm: &DistanceMatrix) -> DeltaReport {
    if dm.n() <= DELTA_EXACT_LIMIT {
        delta_exact(dm)
    } else {
        delta_sampled(dm, DELTA_SAMPLES, 0)
    }
}

pub fn delta_exact(dm: &DistanceMatrix) -> DeltaReport {
    let n = dm.n();
    let (best, count) = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut best = 0;
            let mut count = 0u64;
            for y in x + 1..n {
                for z in y + 1..n {
                    for w in z + 1..n {
                        best = best.max(gap(dm, x, y, z, w));
                        count += 1;
                    }
                }
            }
            (best, count)
        })
        .reduce(|| (0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    DeltaReport { delta: Rational64::new(best as i64, 2), exact: true, quadruples: count }
}

/// Lower bound from `samples` uniformly random quadruples.
pub fn delta_sampled(dm: &DistanceMatrix, samples: u64, seed: u64) -> DeltaReport {
    let n = dm.n();
    if n < 4 {
        return DeltaReport { delta: Rational64::from_integer(0), exact: true, quadruples: 0 };
    }
    const CHUNK: u64 = 1 << 16;
    let chunks = samples.div_ceil(CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ c.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let todo = CHUNK.min(samples - c * CHUNK);
            (0..todo)
                .map(|_| {
                    let q: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..n));
                    gap(dm, q[0], q[1], q[2], q[3])
                })
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    DeltaReport { delta: Rational64::new(best as i64, 2), exact: false, quadruples: samples }
}

/// Least `λ` such that every vertex on every geodesic between members of
/// `z` lies within `λ` of `z`.
pub fn quasiconvexity_constant(dm: &DistanceMatrix, z: &[usize]) -> Result<u32> {
    if z.is_empty() {
        return Err(HypError::EmptySet);
    }
    let dz = dm.distance_to_set(z);
    let n = dm.n();
    let worst = z
        .par_iter()
        .map(|&x| {
            let mut worst = 0;
            for &y in z {
                for (v, &dv) in dz.iter().enumerate().take(n) {
                    if dv > worst && dm.on_geodesic(x, v, y) {
                        worst = dv;
                    }
                }
            }
            worst
        })
        .max()
        .unwrap_or(0);
    Ok(worst)
}

pub fn is_quasiconvex(dm: &DistanceMatrix, z: &[usize], lambda: u32) -> Result<bool> {
    Ok(quasiconvexity_constant(dm, z)? <= lambda)
}
