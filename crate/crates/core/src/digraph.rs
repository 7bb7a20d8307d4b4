//! Directed graphs with named vertices, the `.dg` text format, reachability,
//! reachable fragments and DAG structure queries.
//!
//! Vertices are kept in lexicographic order of their names and addressed by
//! their position in that order. Every set or list this module returns
//! follows the same order, so all downstream computations are deterministic.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    names: Vec<String>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

/// A maximal-by-inclusion set of vertices reachable from a single source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub source: String,
    pub members: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagStructure {
    pub is_dag: bool,
    pub roots: Vec<usize>,
    pub leaves: Vec<usize>,
}

/// Longest-path data of a DAG, counted in vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagDepth {
    pub depth: usize,
    /// Vertices on the longest root-to-`v` path.
    pub level: Vec<usize>,
    /// Vertices on the longest `v`-to-leaf path.
    pub vdepth: Vec<usize>,
}

pub(crate) fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.contains('#') || name.chars().any(char::is_whitespace) {
        return Err(Error::BadName(name.to_string()));
    }
    Ok(())
}

impl Digraph {
    /// Builds a digraph from vertex names and named edges. Edge endpoints are
    /// declared implicitly; duplicates are ignored.
    pub fn new<V, E, S, T>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (T, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut names = BTreeSet::new();
        let mut named_edges = Vec::new();
        for v in vertices {
            let v = v.into();
            check_name(&v)?;
            names.insert(v);
        }
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            check_name(&a)?;
            check_name(&b)?;
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            names.insert(a.clone());
            names.insert(b.clone());
            named_edges.push((a, b));
        }
        let names: Vec<String> = names.into_iter().collect();
        let mut out = vec![Vec::new(); names.len()];
        for (a, b) in &named_edges {
            let a = names.binary_search(a).unwrap();
            let b = names.binary_search(b).unwrap();
            out[a].push(b);
        }
        Ok(Self::from_adjacency(names, out))
    }

    /// Builds from already-sorted, distinct names and index adjacency.
    pub(crate) fn from_adjacency(names: Vec<String>, mut out: Vec<Vec<usize>>) -> Self {
        debug_assert!(names.windows(2).all(|w| w[0] < w[1]));
        let mut inn = vec![Vec::new(); names.len()];
        for (u, succ) in out.iter_mut().enumerate() {
            succ.sort_unstable();
            succ.dedup();
            debug_assert!(!succ.contains(&u));
            for &v in succ.iter() {
                inn[v].push(u);
            }
        }
        Digraph { names, out, inn }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Edges in lexicographic order of (from, to).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, succ)| succ.iter().map(move |&v| (u, v)))
    }

    pub fn edge_names(&self) -> Vec<(&str, &str)> {
        self.edges()
            .map(|(u, v)| (self.name(u), self.name(v)))
            .collect()
    }

    /// Same vertex set with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        if u == v {
            return Err(Error::SelfLoop(self.names[u].clone()));
        }
        let mut out = self.out.clone();
        out[u].push(v);
        Ok(Self::from_adjacency(self.names.clone(), out))
    }

    /// Subgraph induced by `keep`.
    pub fn induced(&self, keep: &FixedBitSet) -> Self {
        let mut remap = vec![usize::MAX; self.len()];
        let mut names = Vec::new();
        for v in keep.ones() {
            remap[v] = names.len();
            names.push(self.names[v].clone());
        }
        let out = keep
            .ones()
            .map(|v| {
                self.out[v]
                    .iter()
                    .filter(|&&w| keep.contains(w))
                    .map(|&w| remap[w])
                    .collect()
            })
            .collect();
        Self::from_adjacency(names, out)
    }

    pub fn without_vertex(&self, v: usize) -> Self {
        let mut keep = FixedBitSet::with_capacity(self.len());
        keep.insert_range(..);
        keep.set(v, false);
        self.induced(&keep)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (line_no, tokens) in tokenize(text) {
            let line_err = |e: Error| Error::Parse {
                line: line_no,
                message: e.to_string(),
            };
            match tokens.as_slice() {
                ["v", name] => {
                    check_name(name).map_err(line_err)?;
                    vertices.push(name.to_string());
                }
                ["e", a, b] => {
                    check_name(a).map_err(line_err)?;
                    check_name(b).map_err(line_err)?;
                    if a == b {
                        return Err(line_err(Error::SelfLoop(a.to_string())));
                    }
                    edges.push((a.to_string(), b.to_string()));
                }
                ["v", ..] | ["e", ..] => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("wrong number of tokens for `{}`", tokens[0]),
                    })
                }
                [other, ..] => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown directive `{other}`"),
                    })
                }
                [] => unreachable!(),
            }
        }
        Digraph::new(vertices, edges)
    }

    /// Vertices reachable from `from` (inclusive) using only vertices in
    /// `allowed`, or all vertices when `allowed` is `None`.
    pub fn reach_within(&self, from: usize, allowed: Option<&FixedBitSet>) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.len());
        seen.insert(from);
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            for &w in &self.out[u] {
                if !seen.contains(w) && allowed.is_none_or(|a| a.contains(w)) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn reachable_set(&self, v: &str) -> Result<BTreeSet<String>> {
        let v = self.vertex(v)?;
        Ok(self
            .reach_within(v, None)
            .ones()
            .map(|w| self.names[w].clone())
            .collect())
    }

    /// Index form of the reachable fragments: `(source, members)` pairs
    /// ordered by source.
    pub fn fragment_sets(&self) -> Vec<(usize, FixedBitSet)> {
        let reach: Vec<FixedBitSet> = (0..self.len())
            .map(|v| self.reach_within(v, None))
            .collect();
        let mut kept: Vec<(usize, FixedBitSet)> = Vec::new();
        for (v, set) in reach.iter().enumerate() {
            let dominated = reach
                .iter()
                .enumerate()
                .any(|(w, other)| w != v && set.is_subset(other) && (set != other || w < v));
            if !dominated {
                kept.push((v, set.clone()));
            }
        }
        kept
    }

    pub fn reachable_fragments(&self) -> Result<Vec<Fragment>> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(self
            .fragment_sets()
            .into_iter()
            .map(|(source, members)| Fragment {
                source: self.names[source].clone(),
                members: members.ones().map(|w| self.names[w].clone()).collect(),
            })
            .collect())
    }

    /// Kahn order; `None` when the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = self.inn.iter().map(Vec::len).collect();
        let mut ready: Vec<usize> = (0..self.len()).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(u) = ready.pop() {
            order.push(u);
            for &w in self.out[u].iter().rev() {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(w);
                }
            }
        }
        (order.len() == self.len()).then_some(order)
    }

    pub fn dag_structure(&self) -> DagStructure {
        DagStructure {
            is_dag: self.topological_order().is_some(),
            roots: (0..self.len())
                .filter(|&v| self.inn[v].is_empty())
                .collect(),
            leaves: (0..self.len())
                .filter(|&v| self.out[v].is_empty())
                .collect(),
        }
    }

    pub fn dag_depth_and_levels(&self) -> Result<DagDepth> {
        let order = self.topological_order().ok_or(Error::NotADag)?;
        let mut level = vec![1; self.len()];
        for &u in &order {
            for &w in &self.out[u] {
                level[w] = level[w].max(level[u] + 1);
            }
        }
        let mut vdepth = vec![1; self.len()];
        for &u in order.iter().rev() {
            for &w in &self.out[u] {
                vdepth[u] = vdepth[u].max(vdepth[w] + 1);
            }
        }
        Ok(DagDepth {
            depth: vdepth.iter().copied().max().unwrap_or(0),
            level,
            vdepth,
        })
    }

    /// Out-neighbourhoods as bitmasks; only for graphs with at most 64 vertices.
    pub(crate) fn out_masks(&self) -> Vec<u64> {
        assert!(self.len() <= 64);
        self.out
            .iter()
            .map(|succ| succ.iter().fold(0u64, |m, &w| m | (1 << w)))
            .collect()
    }
}

/// Non-blank lines split into whitespace tokens, comments removed, with
/// 1-based line numbers.
pub(crate) fn tokenize(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

impl FromStr for Digraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Digraph::parse(s)
    }
}

/// `.dg` serialization: isolated vertices first, then edges, both sorted.
impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 0..self.len() {
            if self.out[v].is_empty() && self.inn[v].is_empty() {
                writeln!(f, "v {}", self.names[v])?;
            }
        }
        for (u, v) in self.edges() {
            writeln!(f, "e {} {}", self.names[u], self.names[v])?;
        }
        Ok(())
    }
}
