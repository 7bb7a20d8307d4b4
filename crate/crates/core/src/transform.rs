//! Merging copies in a decomposition, greedy size reduction, and the closure
//! of a valid decomposition.

use crate::decomposition::{check_valid_with, CoverIndex, Decomposition, Validity};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::par::Exec;

/// Outcome of the four merge conditions for a pair of copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeVerdict {
    pub same_org: bool,
    pub stays_dag: bool,
    pub keeps_cover: bool,
    pub keeps_depth: bool,
}

impl MergeVerdict {
    pub fn mergeable(&self) -> bool {
        self.same_org && self.stays_dag && self.keeps_cover
    }

    pub fn optimally_mergeable(&self) -> bool {
        self.mergeable() && self.keeps_depth
    }
}

/// `P` with `b` folded into `a`: in- and out-edges are unioned and any edge
/// between the two is dropped. The result may be cyclic.
struct Merged {
    dag: Digraph,
    org: Vec<String>,
}

fn merge_raw(dec: &Decomposition, a: usize, b: usize) -> Merged {
    let p = dec.dag();
    let remap = |x: usize| {
        let x = if x == b { a } else { x };
        if x > b {
            x - 1
        } else {
            x
        }
    };
    let keep = (0..p.len()).filter(|&x| x != b);
    let names: Vec<String> = keep.clone().map(|x| p.name(x).to_string()).collect();
    let org: Vec<String> = keep.map(|x| dec.org(x).to_string()).collect();
    let mut out = vec![Vec::new(); names.len()];
    for (x, y) in p.edges() {
        let (x, y) = (remap(x), remap(y));
        if x != y {
            out[x].push(y);
        }
    }
    Merged {
        dag: Digraph::from_adjacency(names, out),
        org,
    }
}

fn pair(dec: &Decomposition, a: &str, b: &str) -> Result<(usize, usize)> {
    let (ia, ib) = (dec.copy_index(a)?, dec.copy_index(b)?);
    if ia == ib {
        return Err(Error::SelfMerge(a.to_string()));
    }
    Ok((ia, ib))
}

/// Merges copy `b` into copy `a`; the merged copy keeps `a`'s id. No merge
/// condition beyond equal originals is checked, but a merge that would
/// close a cycle cannot produce a decomposition and is refused.
pub fn merge_pair(dec: &Decomposition, a: &str, b: &str) -> Result<Decomposition> {
    let (ia, ib) = pair(dec, a, b)?;
    if dec.org(ia) != dec.org(ib) {
        return Err(Error::OrgMismatch {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let merged = merge_raw(dec, ia, ib);
    Decomposition::new(merged.dag, merged.org).map_err(|_| Error::MergeCreatesCycle {
        a: a.to_string(),
        b: b.to_string(),
    })
}

fn cover_holds(graph: &Digraph, dag: &Digraph, org: &[String], exec: Exec) -> Result<bool> {
    let org_idx = org
        .iter()
        .map(|o| graph.vertex(o))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverIndex::new(dag, &org_idx, graph.len(), exec)
        .first_failure(graph)
        .is_none())
}

/// Evaluates every merge condition, including the later ones when an
/// earlier one already fails.
pub fn merge_verdict(
    graph: &Digraph,
    dec: &Decomposition,
    a: &str,
    b: &str,
) -> Result<MergeVerdict> {
    dec.bind(graph)?;
    let (ia, ib) = pair(dec, a, b)?;
    let merged = merge_raw(dec, ia, ib);
    let depth = merged.dag.dag_depth_and_levels().ok().map(|d| d.depth);
    Ok(MergeVerdict {
        same_org: dec.org(ia) == dec.org(ib),
        stays_dag: depth.is_some(),
        keeps_cover: cover_holds(graph, &merged.dag, &merged.org, Exec::default())?,
        keeps_depth: depth.is_some_and(|d| d <= dec.depth()),
    })
}

fn require_valid(graph: &Digraph, dec: &Decomposition, exec: Exec) -> Result<()> {
    match check_valid_with(graph, dec, exec)? {
        Validity::Valid => Ok(()),
        Validity::Invalid(v) => Err(Error::InvalidDecomposition(Box::new(v))),
    }
}

pub fn reduce(graph: &Digraph, dec: &Decomposition) -> Result<Decomposition> {
    reduce_with(graph, dec, Exec::default())
}

/// Greedy fixpoint: scan same-original pairs ordered by (original, level,
/// copy-id), merge the first optimally mergeable one, rescan. Stops when no
/// pair qualifies.
pub fn reduce_with(graph: &Digraph, dec: &Decomposition, exec: Exec) -> Result<Decomposition> {
    require_valid(graph, dec, exec)?;
    let mut current = dec.clone();
    'scan: loop {
        let depth = current.dag().dag_depth_and_levels().expect("acyclic");
        let mut order: Vec<usize> = (0..current.len()).collect();
        order.sort_by(|&x, &y| {
            (current.org(x), depth.level[x], x).cmp(&(current.org(y), depth.level[y], y))
        });
        for (i, &a) in order.iter().enumerate() {
            for &b in order[i + 1..]
                .iter()
                .take_while(|&&b| current.org(b) == current.org(a))
            {
                let p = current.dag();
                if p.reach_within(a, None).contains(b) || p.reach_within(b, None).contains(a) {
                    continue;
                }
                let merged = merge_raw(&current, a, b);
                let new_depth = merged.dag.dag_depth_and_levels().expect("acyclic").depth;
                if new_depth > depth.depth || !cover_holds(graph, &merged.dag, &merged.org, exec)? {
                    continue;
                }
                current = Decomposition::new(merged.dag, merged.org)?;
                continue 'scan;
            }
        }
        return Ok(current);
    }
}

pub fn closure(graph: &Digraph, dec: &Decomposition) -> Result<Digraph> {
    closure_with(graph, dec, Exec::default())
}

/// The unique maximal digraph on `V(graph)` for which `dec` stays valid: an
/// edge `(u, v)` is present iff every copy of `u` has a copy of `v` strictly
/// below it or has a copy of `v` on every root path. The condition reads only
/// `(P, org)`, so one pass over the ordered pairs suffices.
pub fn closure_with(graph: &Digraph, dec: &Decomposition, exec: Exec) -> Result<Digraph> {
    require_valid(graph, dec, exec)?;
    let org = dec.bind(graph)?;
    let index = CoverIndex::new(dec.dag(), &org, graph.len(), exec);
    let mut copies = vec![Vec::new(); graph.len()];
    for (c, &v) in org.iter().enumerate() {
        copies[v].push(c);
    }
    let out = exec.map_range(graph.len(), |u| {
        (0..graph.len())
            .filter(|&v| v != u && copies[u].iter().all(|&c| index.covers(c, v)))
            .collect()
    });
    Ok(Digraph::from_adjacency(graph.names().to_vec(), out))
}

pub fn is_partial_closure(
    graph: &Digraph,
    dec: &Decomposition,
    candidate: &Digraph,
) -> Result<bool> {
    if graph.names() != candidate.names() {
        return Err(Error::VertexSetMismatch);
    }
    if !graph.edges().all(|(u, v)| candidate.has_edge(u, v)) {
        return Ok(false);
    }
    Ok(check_valid_with(candidate, dec, Exec::default())?.is_valid())
}
