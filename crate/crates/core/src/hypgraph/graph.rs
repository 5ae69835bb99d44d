//! Simple unweighted graphs, generators, and text formats.

use super::{HypError, Result};
use rand::Rng;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

/// A simple undirected graph on `0..n` with unit-length edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl FiniteGraph {
    /// Rejects loops and out-of-range endpoints; repeated edges collapse.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = FiniteGraph { adj: vec![Vec::new(); n], labels: None };
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(HypError::Parse(format!("{} labels for {} vertices", labels.len(), self.n())));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Returns whether the edge is new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(HypError::VertexOutOfRange(w));
            }
        }
        if u == v {
            return Err(HypError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(i) => {
                self.adj[u].insert(i, v);
                let j = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(j, u);
                Ok(true)
            }
        }
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// BFS distances from `src`, restricted to vertices with `allowed[v]`
    /// when a mask is given.
    pub fn bfs_within(&self, src: usize, allowed: Option<&[bool]>) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        if allowed.is_some_and(|a| !a[src]) {
            return dist;
        }
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices are reached");
            for &v in &self.adj[u] {
                if dist[v].is_none() && allowed.is_none_or(|a| a[v]) {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn bfs(&self, src: usize) -> Vec<Option<u32>> {
        self.bfs_within(src, None)
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.bfs(0).iter().all(Option::is_some)
    }

    /// `u v` per line after a `vertices N` header line.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("vertices {}\n", self.n());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    /// Parses lines `u v`; blank lines and `#` comments are skipped. An
    /// optional `vertices N` line fixes the vertex count (otherwise one more
    /// than the largest endpoint).
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || HypError::Parse(format!("line {}: `{}`", lineno + 1, raw.trim()));
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["vertices", n] => declared = Some(n.parse::<usize>().map_err(|_| bad())?),
                [u, v] => edges.push((u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?)),
                _ => return Err(bad()),
            }
        }
        let inferred = edges.iter().map(|&(u, v): &(usize, usize)| u.max(v) + 1).max().unwrap_or(0);
        FiniteGraph::new(declared.unwrap_or(inferred), &edges)
    }

    /// Graphviz export; `highlight` edges are drawn dashed and red.
    pub fn to_dot(&self, highlight: &[(usize, usize)]) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n() {
            match &self.labels {
                Some(l) => {
                    let _ = writeln!(s, "  {v} [label=\"{}\"];", l[v].replace('"', "\\\""));
                }
                None => {
                    let _ = writeln!(s, "  {v};");
                }
            }
        }
        let marked: std::collections::HashSet<(usize, usize)> =
            highlight.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        for (u, v) in self.edges() {
            if marked.contains(&(u, v)) {
                let _ = writeln!(s, "  {u} -- {v} [style=dashed, color=red];");
            } else {
                let _ = writeln!(s, "  {u} -- {v};");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// `P_k`: vertices `0..k` in a line.
pub fn path(k: usize) -> FiniteGraph {
    let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
    FiniteGraph::new(k, &edges).expect("valid path")
}

/// `C_k` for `k >= 3`.
pub fn cycle(k: usize) -> Result<FiniteGraph> {
    if k < 3 {
        return Err(HypError::Parse(format!("cycle needs at least 3 vertices, got {k}")));
    }
    let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    FiniteGraph::new(k, &edges)
}

/// Centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> FiniteGraph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    FiniteGraph::new(leaves + 1, &edges).expect("valid star")
}

/// Complete binary tree of the given depth in heap order: root 0, children
/// of `v` are `2v + 1` and `2v + 2`.
pub fn binary_tree(depth: u32) -> FiniteGraph {
    let n = (1usize << (depth + 1)) - 1;
    let edges: Vec<_> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
    FiniteGraph::new(n, &edges).expect("valid tree")
}

/// Each vertex `v >= 1` attaches to a uniformly random earlier vertex.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> FiniteGraph {
    let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    FiniteGraph::new(n, &edges).expect("valid tree")
}

/// `w × h` grid; vertex `(x, y)` is `y * w + x`.
pub fn grid(w: usize, h: usize) -> FiniteGraph {
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                edges.push((v, v + 1));
            }
            if y + 1 < h {
                edges.push((v, v + w));
            }
        }
    }
    FiniteGraph::new(w * h, &edges).expect("valid grid")
}

/// Ball of the given radius in the Cayley graph of the permutation group
/// generated by `gens` (each a list of images of `0..d`). Vertex `0` is the
/// identity; returns the graph and the permutation at each vertex.
pub fn cayley_ball(gens: &[Vec<usize>], radius: u32) -> Result<(FiniteGraph, Vec<Vec<usize>>)> {
    let d = gens.first().map_or(0, Vec::len);
    for g in gens {
        let mut seen = vec![false; d];
        if g.len() != d || g.iter().any(|&x| x >= d || std::mem::replace(&mut seen[x], true)) {
            return Err(HypError::Parse(format!("{g:?} is not a permutation of 0..{d}")));
        }
    }
    let mut all: Vec<Vec<usize>> = gens.to_vec();
    for g in gens {
        let mut inv = vec![0; d];
        for (i, &x) in g.iter().enumerate() {
            inv[x] = i;
        }
        all.push(inv);
    }
    let mut elems = vec![(0..d).collect::<Vec<usize>>()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(elems[0].clone(), 0)]);
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &u in &frontier {
            for s in &all {
                let w: Vec<usize> = elems[u].iter().map(|&x| s[x]).collect();
                let v = match index.get(&w) {
                    Some(&v) => v,
                    None => {
                        elems.push(w.clone());
                        index.insert(w, elems.len() - 1);
                        next.push(elems.len() - 1);
                        elems.len() - 1
                    }
                };
                if u != v {
                    edges.push((u, v));
                }
            }
        }
        frontier = next;
    }
    // Edges among vertices of the outer sphere.
    for &u in &frontier {
        for s in &all {
            let w: Vec<usize> = elems[u].iter().map(|&x| s[x]).collect();
            if let Some(&v) = index.get(&w) {
                if u != v {
                    edges.push((u, v));
                }
            }
        }
    }
    Ok((FiniteGraph::new(elems.len(), &edges)?, elems))
}
