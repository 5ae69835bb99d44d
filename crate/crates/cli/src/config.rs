//! Run configuration: a JSON file, command-line flags, or both.

use crate::CliError;
use nlkit::criterion::{ClopenAlgebraConfig, Family};
use nlkit::hypgraph::{binary_tree, cycle, grid, path, star, FiniteGraph};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// A family given as text (`V`, `V(3,2)`, `2V`, `SVG`, `T`) or structurally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySpec {
    Text(String),
    Structured(Family),
}

impl FamilySpec {
    pub fn resolve(&self) -> Result<Family, CliError> {
        match self {
            FamilySpec::Text(s) => Family::from_str(s).map_err(|e| CliError::Usage(format!("family: {e}"))),
            FamilySpec::Structured(f) => Ok(f.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Star {
        leaves: usize,
    },
    BinaryTree {
        depth: u32,
    },
    Grid {
        w: usize,
        h: usize,
    },
    /// Edge-list file: a `vertices N` header and one `u v` pair per line.
    File {
        path: PathBuf,
    },
}

impl GraphSpec {
    pub fn build(&self) -> Result<FiniteGraph, CliError> {
        Ok(match self {
            GraphSpec::Path { n } => path(*n),
            GraphSpec::Cycle { n } => cycle(*n).map_err(|e| CliError::Usage(format!("graph: {e}")))?,
            GraphSpec::Star { leaves } => star(*leaves),
            GraphSpec::BinaryTree { depth } => binary_tree(*depth),
            GraphSpec::Grid { w, h } => grid(*w, *h),
            GraphSpec::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                FiniteGraph::parse_edge_list(&text)
                    .map_err(|e| CliError::Usage(format!("graph file {}: {e}", path.display())))?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeOffSpec {
    #[serde(default = "default_radii")]
    pub radii: Vec<u32>,
    #[serde(default = "default_orbit")]
    pub orbit: Vec<usize>,
    /// Quasiconvex subset of the orbit; defaults to the orbit.
    #[serde(default)]
    pub z: Option<Vec<usize>>,
    /// Claimed quasiconvexity constant of `z`; unchecked when absent.
    #[serde(default)]
    pub q: Option<u32>,
}

fn default_radii() -> Vec<u32> {
    vec![1, 2, 3, 4, 5]
}

fn default_orbit() -> Vec<usize> {
    vec![0]
}

impl Default for ConeOffSpec {
    fn default() -> Self {
        ConeOffSpec { radii: default_radii(), orbit: default_orbit(), z: None, q: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub suite: String,
    pub seed: u64,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub graph: Option<GraphSpec>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Directory for DOT exports; defaults to the directory of `out`.
    #[serde(default)]
    pub dot_dir: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
    /// Threshold for calling an estimate nonzero, as an exact rational.
    #[serde(default)]
    pub tolerance: Option<String>,
    #[serde(default)]
    pub clopen: Option<ClopenAlgebraConfig>,
    #[serde(default)]
    pub coneoff: Option<ConeOffSpec>,
    /// Extra `V_n(r)` elements in the `d->c, ...` grammar, checked by
    /// `bounded-generation` and `group-laws`.
    #[serde(default)]
    pub elements: Vec<String>,
    /// Extra clopen pairs `[U, V]` in the `[root:word, ...]` grammar,
    /// checked by `extreme-proximality`.
    #[serde(default)]
    pub set_pairs: Vec<(String, String)>,
}

impl RunConfig {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        RunConfig {
            suite: suite.into(),
            seed,
            budget: None,
            family: None,
            graph: None,
            out: None,
            dot_dir: None,
            format: None,
            tolerance: None,
            clopen: None,
            coneoff: None,
            elements: Vec::new(),
            set_pairs: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn family(&self) -> Result<Family, CliError> {
        self.family.as_ref().map_or(Ok(Family::V { n: 2, r: 1 }), FamilySpec::resolve)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_and_structured_configs() {
        let c = RunConfig::parse(r#"{ "suite": "criterion", "seed": 3 }"#).unwrap();
        assert_eq!(c, RunConfig::new("criterion", 3));
        assert_eq!(c.family().unwrap(), Family::V { n: 2, r: 1 });
        assert_eq!(c.format(), Format::Json);

        let c = RunConfig::parse(
            r#"{ "suite": "group-laws", "seed": 1, "family": { "kind": "Brin", "dims": 2 }, "format": "text" }"#,
        )
        .unwrap();
        assert_eq!(c.family().unwrap(), Family::Brin { dims: 2 });
        assert_eq!(c.format(), Format::Text);
        let c = RunConfig::parse(r#"{ "suite": "criterion", "seed": 1, "family": "V(3,2)" }"#).unwrap();
        assert_eq!(c.family().unwrap(), Family::V { n: 3, r: 2 });
    }

    #[test]
    fn rejections_name_the_problem() {
        let err = |text: &str| RunConfig::parse(text).unwrap_err().to_string();
        assert!(err(r#"{ "suite": "criterion" }"#).contains("seed"));
        let e = err("{\n \"suite\": \"criterion\",\n \"seed\": 1,\n \"sede\": 2 }");
        assert!(e.contains("sede") && e.contains("line 4"), "{e}");
        assert!(err(r#"{ "suite": "coneoff", "seed": 1, "coneoff": { "radius": 2 } }"#).contains("radius"));
        let bad_family = RunConfig::parse(r#"{ "suite": "criterion", "seed": 1, "family": "W" }"#).unwrap();
        assert!(matches!(bad_family.family(), Err(CliError::Usage(_))));
    }

    #[test]
    fn graph_specs_build() {
        assert_eq!(GraphSpec::Path { n: 5 }.build().unwrap().edge_count(), 4);
        assert_eq!(GraphSpec::BinaryTree { depth: 3 }.build().unwrap().n(), 15);
        assert_eq!(GraphSpec::Grid { w: 3, h: 2 }.build().unwrap().edge_count(), 7);
        let json = serde_json::to_string(&GraphSpec::Star { leaves: 4 }).unwrap();
        assert_eq!(json, r#"{"kind":"star","leaves":4}"#);
        let missing = GraphSpec::File { path: "/nonexistent/graph.txt".into() }.build();
        assert!(matches!(missing, Err(CliError::Io { .. })));
    }
}
