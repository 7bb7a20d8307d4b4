//! Exact DAG-depth by recursion over induced subdigraphs, memoized on vertex
//! subsets.
//!
//! For a vertex set `S`:
//! * `|S| = 1` gives 1;
//! * if `S` is a single reachable fragment, `1 + min_v ddp(S - v)`;
//! * otherwise the maximum over the reachable fragments of `S`.

use std::collections::{BTreeSet, HashMap};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

pub const DEFAULT_SOLVER_LIMIT: usize = 20;

/// An induced subdigraph of the ambient digraph, one bit per vertex in
/// canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetKey(pub u64);

impl SubsetKey {
    pub fn full(n: usize) -> Self {
        assert!(n <= 64);
        SubsetKey(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn singleton(v: usize) -> Self {
        SubsetKey(1 << v)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn without(self, v: usize) -> Self {
        SubsetKey(self.0 & !(1 << v))
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        bits(self.0)
    }
}

pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let v = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(v)
    })
}

/// Vertices reachable from `from` inside `allowed` (`from` itself included).
pub(crate) fn reach_mask(out: &[u64], from: usize, allowed: u64) -> u64 {
    let mut seen = 1u64 << from;
    let mut frontier = seen;
    while frontier != 0 {
        let next = bits(frontier).fold(0, |m, v| m | out[v]) & allowed & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

pub(crate) fn check_limit(what: &'static str, graph: &Digraph, limit: usize) -> Result<()> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if graph.len() > limit.min(64) {
        return Err(Error::LimitExceeded {
            what,
            vertices: graph.len(),
            limit: limit.min(64),
        });
    }
    Ok(())
}

pub struct DdpSolver<'g> {
    graph: &'g Digraph,
    out: Vec<u64>,
    memo: HashMap<SubsetKey, u32>,
}

impl<'g> DdpSolver<'g> {
    pub fn new(graph: &'g Digraph, limit: usize) -> Result<Self> {
        check_limit("solver", graph, limit)?;
        Ok(DdpSolver {
            graph,
            out: graph.out_masks(),
            memo: HashMap::new(),
        })
    }

    pub fn graph(&self) -> &'g Digraph {
        self.graph
    }

    pub fn full(&self) -> SubsetKey {
        SubsetKey::full(self.graph.len())
    }

    pub fn ddp(&mut self) -> u32 {
        self.ddp_of(self.full())
    }

    /// Reachable fragments of the induced subgraph on `key`, ordered by
    /// their smallest source.
    pub fn fragments_of(&self, key: SubsetKey) -> Vec<SubsetKey> {
        let reach: Vec<(usize, u64)> = key
            .iter()
            .map(|v| (v, reach_mask(&self.out, v, key.0)))
            .collect();
        if let Some(&(_, r)) = reach.iter().find(|&&(_, r)| r == key.0) {
            return vec![SubsetKey(r)];
        }
        let mut kept: Vec<SubsetKey> = Vec::new();
        for &(_, r) in &reach {
            let dominated = reach.iter().any(|&(_, other)| r != other && r & other == r);
            if !dominated && !kept.contains(&SubsetKey(r)) {
                kept.push(SubsetKey(r));
            }
        }
        kept
    }

    pub fn ddp_of(&mut self, key: SubsetKey) -> u32 {
        debug_assert!(!key.is_empty());
        if key.len() == 1 {
            return 1;
        }
        if let Some(&d) = self.memo.get(&key) {
            return d;
        }
        let frags = self.fragments_of(key);
        let d = if frags.len() == 1 {
            1 + key
                .iter()
                .map(|v| self.ddp_of(key.without(v)))
                .min()
                .unwrap()
        } else {
            frags.into_iter().map(|f| self.ddp_of(f)).max().unwrap()
        };
        self.memo.insert(key, d);
        d
    }

    /// All vertices `v` minimizing `ddp(key - v)`, in canonical order. `key`
    /// must be a single fragment with more than one vertex.
    pub fn best_roots_of(&mut self, key: SubsetKey) -> Result<Vec<usize>> {
        if key.len() < 2 || self.fragments_of(key).len() != 1 {
            return Err(Error::NotSingleFragment);
        }
        let scored: Vec<(usize, u32)> = key
            .iter()
            .map(|v| (v, self.ddp_of(key.without(v))))
            .collect();
        let best = scored.iter().map(|&(_, d)| d).min().unwrap();
        Ok(scored
            .into_iter()
            .filter(|&(_, d)| d == best)
            .map(|(v, _)| v)
            .collect())
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

pub fn ddp(graph: &Digraph) -> Result<u32> {
    ddp_with_limit(graph, DEFAULT_SOLVER_LIMIT)
}

pub fn ddp_with_limit(graph: &Digraph, limit: usize) -> Result<u32> {
    Ok(DdpSolver::new(graph, limit)?.ddp())
}

pub fn best_roots(graph: &Digraph) -> Result<BTreeSet<String>> {
    let mut solver = DdpSolver::new(graph, DEFAULT_SOLVER_LIMIT)?;
    let full = solver.full();
    Ok(solver
        .best_roots_of(full)?
        .into_iter()
        .map(|v| graph.name(v).to_string())
        .collect())
}
