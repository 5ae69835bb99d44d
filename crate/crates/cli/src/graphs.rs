//! Cone-off and hyperbolicity suites.

use crate::config::{GraphSpec, RunConfig};
use crate::report::Report;
use crate::suites::{condition, Outcome};
use crate::CliError;
use nlkit::hypgraph::{
    all_distances, cone_off, cycle, delta_exact, delta_four_point, delta_sampled, random_tree, verify_coneoff, HypError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

fn hyp(e: HypError) -> CliError {
    CliError::Usage(e.to_string())
}

fn dot_path(config: &RunConfig, r: u32) -> Option<PathBuf> {
    let stem = config
        .out
        .as_deref()
        .and_then(Path::file_stem)
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "coneoff".into());
    let dir = match (&config.dot_dir, &config.out) {
        (Some(d), _) => d.clone(),
        (None, Some(out)) => out.parent().map(Path::to_path_buf).unwrap_or_default(),
        (None, None) => return None,
    };
    Some(dir.join(format!("{stem}-R{r}.dot")))
}

/// Sweeps the cone-off over the configured radii. `budget` caps the
/// number of vertex pairs used for geodesic tracking.
pub fn run_coneoff(config: &RunConfig, budget: usize, files: &mut Vec<(PathBuf, String)>) -> Result<Report, CliError> {
    let spec_graph = config.graph.clone().unwrap_or(GraphSpec::Path { n: 40 });
    let g = spec_graph.build()?;
    let spec = config.coneoff.clone().unwrap_or_default();
    let dm = all_distances(&g).map_err(hyp)?;
    if let Some(&v) = spec.orbit.iter().find(|&&v| v >= g.n()) {
        return Err(CliError::Usage(format!("orbit vertex {v} is out of range")));
    }
    let z = spec.z.clone().unwrap_or_else(|| spec.orbit.clone());
    let q = spec.q.unwrap_or(u32::MAX);

    let mut lipschitz = Vec::new();
    let mut embedding = Vec::new();
    let mut tracking = Vec::new();
    let mut rows = Vec::new();
    let mut added = Vec::new();
    for &r in &spec.radii {
        let cone = cone_off(&g, &dm, &spec.orbit, r).map_err(hyp)?;
        let rep = verify_coneoff(&g, &spec.orbit, r, &z, q, budget, config.seed).map_err(hyp)?;
        lipschitz.push(if rep.lipschitz {
            Outcome::Pass(format!("R = {r}: d_Y <= d_X on all pairs"))
        } else {
            Outcome::Fail(format!("R = {r}: projection is not 1-Lipschitz"))
        });
        embedding.push(Outcome::Pass(format!(
            "R = {r}: {} z-pairs, max distortion {}, K = {}",
            rep.z_pairs, rep.max_distortion, rep.k
        )));
        tracking.push(if rep.precondition_met {
            Outcome::Pass(format!("R = {r}: Hausdorff distance {} over {} pairs", rep.hausdorff, rep.geodesic_pairs))
        } else {
            Outcome::Inconclusive(format!(
                "R = {r}: R <= Q + D with Q = {}, D = {}; tracking hypothesis not met",
                rep.q, rep.hausdorff
            ))
        });
        rows.push(json!({
            "r": r,
            "added_edges": cone.added.len(),
            "q": rep.q,
            "k": rep.k,
            "max_distortion": rep.max_distortion.to_string(),
            "hausdorff": rep.hausdorff,
            "precondition_met": rep.precondition_met,
        }));
        if let Some(p) = dot_path(config, r) {
            files.push((p, cone.to_dot()));
        }
        added.push((r, cone.added.into_iter().collect::<BTreeSet<_>>()));
    }
    added.sort_by_key(|(r, _)| *r);
    let monotone = added
        .windows(2)
        .map(|w| {
            let ((r0, a0), (r1, a1)) = (&w[0], &w[1]);
            if a1.is_subset(a0) {
                Outcome::Pass(format!("Y_{r1} edges ({}) inside Y_{r0} edges ({})", a1.len(), a0.len()))
            } else {
                Outcome::Fail(format!("Y_{r1} has edges missing from Y_{r0}"))
            }
        })
        .collect();

    let conditions = vec![
        condition("1-Lipschitz projection", lipschitz, true),
        condition("monotone in R", monotone, true),
        condition("(K,K) embedding of z", embedding, true),
        condition("geodesic tracking", tracking, false),
    ];
    let family = format!("{} vertices, orbit {:?}", g.n(), spec.orbit);
    let mut report = Report::new("coneoff", family, config.seed, budget, conditions);
    report.data.insert("graph".into(), serde_json::to_value(&spec_graph).expect("graph spec serializes"));
    report.data.insert("radii".into(), rows.into());
    Ok(report)
}

/// Four-point delta: zero on `budget` random trees, sampled never above
/// exact on cycles, and the value for an input graph when given.
pub fn run_hyperbolicity(config: &RunConfig, budget: usize) -> Result<Report, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let trees = (0..budget)
        .map(|_| {
            let n = rng.gen_range(2..=60);
            let t = random_tree(n, &mut rng);
            match all_distances(&t) {
                Ok(dm) => {
                    let d = delta_four_point(&dm);
                    if d.exact && *d.delta.numer() == 0 {
                        Outcome::Pass(format!("tree on {n} vertices: delta 0"))
                    } else {
                        Outcome::Fail(format!("tree on {n} vertices: delta {} (exact {})", d.delta, d.exact))
                    }
                }
                Err(e) => Outcome::Fail(e.to_string()),
            }
        })
        .collect();

    let mut cycle_rows = serde_json::Map::new();
    let mut cycles = Vec::new();
    for k in 3..=12 {
        let dm = all_distances(&cycle(k).map_err(hyp)?).map_err(hyp)?;
        let exact = delta_exact(&dm);
        let sampled = delta_sampled(&dm, 20_000, config.seed);
        cycle_rows.insert(format!("C_{k}"), exact.delta.to_string().into());
        cycles.push(if sampled.delta <= exact.delta {
            Outcome::Pass(format!("C_{k}: exact {}, sampled {}", exact.delta, sampled.delta))
        } else {
            Outcome::Fail(format!("C_{k}: sampled {} exceeds exact {}", sampled.delta, exact.delta))
        });
    }

    let mut conditions = vec![condition("trees are 0-hyperbolic", trees, false), condition("cycles", cycles, true)];
    let mut report_data = vec![("cycles".to_string(), serde_json::Value::Object(cycle_rows))];
    if let Some(spec) = &config.graph {
        let g = spec.build()?;
        let dm = all_distances(&g).map_err(hyp)?;
        let d = delta_four_point(&dm);
        report_data.push((
            "graph".into(),
            json!({ "vertices": g.n(), "edges": g.edge_count(), "delta": d.delta.to_string(), "exact": d.exact, "quadruples": d.quadruples }),
        ));
        let outcome = if d.exact {
            Outcome::Pass(format!("delta {} on {} vertices", d.delta, g.n()))
        } else {
            Outcome::Inconclusive(format!("sampled lower bound {} on {} vertices", d.delta, g.n()))
        };
        conditions.push(condition("input graph", vec![outcome], d.exact));
    }
    let mut report = Report::new("hyperbolicity", "finite graphs".into(), config.seed, budget, conditions);
    report.data.extend(report_data);
    Ok(report)
}
