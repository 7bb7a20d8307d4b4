//! DAG-depth decompositions: the `(P, org)` pair, the `.dec` text format, the
//! constructive builder and the Neighbor cover validity check.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::ddp::{DdpSolver, SubsetKey, DEFAULT_SOLVER_LIMIT};
use crate::digraph::{check_name, tokenize, Digraph};
use crate::error::{Error, Result};
use crate::par::Exec;

/// A DAG `P` over copy-ids together with the map `org` from copies to
/// vertices of the decomposed digraph.
///
/// Copies are addressed by their index in `P`, which follows the
/// lexicographic order of copy-ids. `org` is stored by name; surjectivity
/// onto a concrete digraph is checked by [`Decomposition::bind`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    dag: Digraph,
    org: Vec<String>,
}

/// Certificate that the Neighbor cover condition fails at `copy` for the
/// out-neighbour `neighbor` of `original`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub copy: String,
    pub original: String,
    pub neighbor: String,
    /// Root-to-`copy` path in `P` that avoids every copy of `neighbor`.
    pub witness_path: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(Violation),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Validity::Valid => None,
            Validity::Invalid(v) => Some(v),
        }
    }
}

impl Decomposition {
    /// `org[i]` is the original of copy `i` of `dag`.
    pub fn new(dag: Digraph, org: Vec<String>) -> Result<Self> {
        assert_eq!(dag.len(), org.len(), "org must cover every copy");
        for o in &org {
            check_name(o)?;
        }
        if dag.topological_order().is_none() {
            return Err(Error::NotADag);
        }
        Ok(Decomposition { dag, org })
    }

    /// Builds from `(copy-id, original)` declarations and copy-id edges.
    pub fn from_parts<C, E, S, T, U>(copies: C, edges: E) -> Result<Self>
    where
        C: IntoIterator<Item = (S, T)>,
        E: IntoIterator<Item = (U, U)>,
        S: Into<String>,
        T: Into<String>,
        U: Into<String>,
    {
        let mut org_of: BTreeMap<String, String> = BTreeMap::new();
        for (id, o) in copies {
            let (id, o) = (id.into(), o.into());
            check_name(&id)?;
            check_name(&o)?;
            if let Some(prev) = org_of.insert(id.clone(), o.clone()) {
                if prev != o {
                    return Err(Error::DuplicateCopy(id));
                }
            }
        }
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            for id in [&a, &b] {
                if !org_of.contains_key(id) {
                    return Err(Error::UnknownCopy(id.clone()));
                }
            }
            pairs.push((a, b));
        }
        let dag = Digraph::new(org_of.keys().cloned(), pairs)?;
        let org = org_of.into_values().collect();
        Decomposition::new(dag, org)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut copies: Vec<(String, String)> = Vec::new();
        let mut declared: BTreeMap<String, String> = BTreeMap::new();
        let mut edges = Vec::new();
        for (line_no, tokens) in tokenize(text) {
            let line_err = |e: Error| Error::Parse {
                line: line_no,
                message: e.to_string(),
            };
            match tokens.as_slice() {
                ["n", id, o] => {
                    check_name(id).map_err(line_err)?;
                    check_name(o).map_err(line_err)?;
                    if let Some(prev) = declared.insert(id.to_string(), o.to_string()) {
                        if prev != *o {
                            return Err(line_err(Error::DuplicateCopy(id.to_string())));
                        }
                    }
                    copies.push((id.to_string(), o.to_string()));
                }
                ["e", a, b] => {
                    for id in [a, b] {
                        if !declared.contains_key(*id) {
                            return Err(line_err(Error::UnknownCopy(id.to_string())));
                        }
                    }
                    if a == b {
                        return Err(line_err(Error::SelfLoop(a.to_string())));
                    }
                    edges.push((a.to_string(), b.to_string()));
                }
                ["n", ..] | ["e", ..] => {
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
        Decomposition::from_parts(copies, edges)
    }

    pub fn dag(&self) -> &Digraph {
        &self.dag
    }

    pub fn len(&self) -> usize {
        self.dag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dag.is_empty()
    }

    pub fn copy_id(&self, copy: usize) -> &str {
        self.dag.name(copy)
    }

    pub fn copy_index(&self, id: &str) -> Result<usize> {
        self.dag
            .index_of(id)
            .ok_or_else(|| Error::UnknownCopy(id.to_string()))
    }

    pub fn org(&self, copy: usize) -> &str {
        &self.org[copy]
    }

    pub fn orgs(&self) -> &[String] {
        &self.org
    }

    pub fn copies_of<'a>(&'a self, vertex: &'a str) -> impl Iterator<Item = usize> + 'a {
        (0..self.len()).filter(move |&c| self.org[c] == vertex)
    }

    /// Vertex count of the longest path in `P`.
    pub fn depth(&self) -> usize {
        self.dag
            .dag_depth_and_levels()
            .expect("decomposition is acyclic")
            .depth
    }

    /// Resolves `org` against `graph`: returns the original's index for each
    /// copy, checking the image lies in `V(graph)` and covers all of it.
    pub fn bind(&self, graph: &Digraph) -> Result<Vec<usize>> {
        let mut hit = vec![false; graph.len()];
        let mut org_idx = Vec::with_capacity(self.len());
        for (c, o) in self.org.iter().enumerate() {
            let v = graph.index_of(o).ok_or_else(|| Error::OrgOutsideGraph {
                copy: self.copy_id(c).to_string(),
                org: o.clone(),
            })?;
            hit[v] = true;
            org_idx.push(v);
        }
        if let Some(v) = hit.iter().position(|h| !h) {
            return Err(Error::OrgNotSurjective(graph.name(v).to_string()));
        }
        Ok(org_idx)
    }
}

impl FromStr for Decomposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Decomposition::parse(s)
    }
}

/// `.dec` serialization: every copy, then every edge, sorted by copy-id.
impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in 0..self.len() {
            writeln!(f, "n {} {}", self.copy_id(c), self.org[c])?;
        }
        for (a, b) in self.dag.edges() {
            writeln!(f, "e {} {}", self.copy_id(a), self.copy_id(b))?;
        }
        Ok(())
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "copy={} original={} neighbor={} witness={}",
            self.copy,
            self.original,
            self.neighbor,
            self.witness_path.join(",")
        )
    }
}

/// Neighbor cover queries over `(P, org)` for a fixed digraph. `P` may be any
/// digraph here, cyclic ones included, so merge candidates can be inspected
/// before they are known to be DAGs.
pub(crate) struct CoverIndex<'a> {
    dag: &'a Digraph,
    org: &'a [usize],
    roots: Vec<usize>,
    /// Originals having a copy reachable from the copy by a path of length >= 1.
    strict_desc_orgs: Vec<FixedBitSet>,
    /// Copies reachable from a root while avoiding every copy of the vertex.
    avoid_reach: Vec<FixedBitSet>,
}

impl<'a> CoverIndex<'a> {
    pub(crate) fn new(dag: &'a Digraph, org: &'a [usize], graph_len: usize, exec: Exec) -> Self {
        let roots: Vec<usize> = (0..dag.len()).filter(|&c| dag.in_degree(c) == 0).collect();
        let strict_desc_orgs = exec.map_range(dag.len(), |c| {
            let mut orgs = FixedBitSet::with_capacity(graph_len);
            let mut seen = FixedBitSet::with_capacity(dag.len());
            let mut stack: Vec<usize> = dag.out_neighbors(c).to_vec();
            while let Some(x) = stack.pop() {
                if seen.put(x) {
                    continue;
                }
                orgs.insert(org[x]);
                stack.extend_from_slice(dag.out_neighbors(x));
            }
            orgs
        });
        let avoid_reach = exec.map_range(graph_len, |v| {
            let mut seen = FixedBitSet::with_capacity(dag.len());
            let mut stack: Vec<usize> = roots.iter().copied().filter(|&r| org[r] != v).collect();
            for &r in &stack {
                seen.insert(r);
            }
            while let Some(x) = stack.pop() {
                for &y in dag.out_neighbors(x) {
                    if org[y] != v && !seen.put(y) {
                        stack.push(y);
                    }
                }
            }
            seen
        });
        CoverIndex {
            dag,
            org,
            roots,
            strict_desc_orgs,
            avoid_reach,
        }
    }

    /// Whether copy `c` satisfies the cover requirement for vertex `v`:
    /// a copy of `v` lies strictly below `c`, or every root path to `c`
    /// meets a copy of `v`.
    pub(crate) fn covers(&self, c: usize, v: usize) -> bool {
        self.strict_desc_orgs[c].contains(v) || !self.avoid_reach[v].contains(c)
    }

    /// First failing `(copy, neighbor)` pair in canonical order.
    pub(crate) fn first_failure(&self, graph: &Digraph) -> Option<(usize, usize)> {
        (0..self.dag.len()).find_map(|c| {
            graph
                .out_neighbors(self.org[c])
                .iter()
                .find(|&&u| !self.covers(c, u))
                .map(|&u| (c, u))
        })
    }

    /// Shortest root-to-`target` path avoiding copies of `v`, ties broken
    /// towards smaller copy indices.
    pub(crate) fn witness_path(&self, target: usize, v: usize) -> Option<Vec<usize>> {
        let n = self.dag.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = FixedBitSet::with_capacity(n);
        let mut queue = std::collections::VecDeque::new();
        for &r in &self.roots {
            if self.org[r] != v {
                seen.insert(r);
                queue.push_back(r);
            }
        }
        while let Some(x) = queue.pop_front() {
            if x == target {
                let mut path = vec![x];
                let mut cur = x;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &y in self.dag.out_neighbors(x) {
                if self.org[y] != v && !seen.put(y) {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

pub fn check_valid(graph: &Digraph, dec: &Decomposition) -> Result<Validity> {
    check_valid_with(graph, dec, Exec::default())
}

pub fn check_valid_with(graph: &Digraph, dec: &Decomposition, exec: Exec) -> Result<Validity> {
    let org = dec.bind(graph)?;
    let index = CoverIndex::new(dec.dag(), &org, graph.len(), exec);
    Ok(match index.first_failure(graph) {
        None => Validity::Valid,
        Some((c, u)) => {
            let path = index
                .witness_path(c, u)
                .expect("a failing copy is reachable while avoiding the neighbour");
            Validity::Invalid(Violation {
                copy: dec.copy_id(c).to_string(),
                original: dec.org(c).to_string(),
                neighbor: graph.name(u).to_string(),
                witness_path: path
                    .into_iter()
                    .map(|x| dec.copy_id(x).to_string())
                    .collect(),
            })
        }
    })
}

impl Violation {
    /// Independently re-establishes that both cover clauses fail.
    pub fn recheck(&self, graph: &Digraph, dec: &Decomposition) -> bool {
        let Ok(copy) = dec.copy_index(&self.copy) else {
            return false;
        };
        let (Some(orig), Some(nb)) = (
            graph.index_of(&self.original),
            graph.index_of(&self.neighbor),
        ) else {
            return false;
        };
        if dec.org(copy) != self.original || !graph.has_edge(orig, nb) {
            return false;
        }
        let Ok(path) = self
            .witness_path
            .iter()
            .map(|id| dec.copy_index(id))
            .collect::<Result<Vec<_>>>()
        else {
            return false;
        };
        let p = dec.dag();
        let well_formed = path.first().is_some_and(|&r| p.in_degree(r) == 0)
            && path.last() == Some(&copy)
            && path.windows(2).all(|w| p.has_edge(w[0], w[1]))
            && path.iter().all(|&x| dec.org(x) != self.neighbor);
        let mut below = p.reach_within(copy, None);
        below.set(copy, false);
        well_formed && below.ones().all(|x| dec.org(x) != self.neighbor)
    }
}

pub fn is_optimal(graph: &Digraph, dec: &Decomposition) -> Result<bool> {
    dec.bind(graph)?;
    Ok(dec.depth() as u32 == crate::ddp::ddp(graph)?)
}

pub fn build_decomposition(graph: &Digraph) -> Result<Decomposition> {
    build_decomposition_with_limit(graph, DEFAULT_SOLVER_LIMIT)
}

/// Constructive decomposition of depth `ddp(graph)`.
///
/// A single vertex becomes one copy. Otherwise each reachable fragment picks
/// its smallest best root; fragments that picked the same root share one copy
/// of it, whose children are the roots of the decomposition of the union of
/// those fragments minus the root. Fragments with different roots stay
/// disjoint, so shared vertices are duplicated.
///
/// Copy-ids are construction-order integers zero-padded to a common width,
/// so lexicographic and construction order agree.
pub fn build_decomposition_with_limit(graph: &Digraph, limit: usize) -> Result<Decomposition> {
    let mut builder = Builder {
        solver: DdpSolver::new(graph, limit)?,
        org: Vec::new(),
        edges: Vec::new(),
    };
    let full = builder.solver.full();
    builder.build(full);
    let width = (builder.org.len().max(1) - 1).to_string().len();
    let id = |i: usize| format!("{i:0width$}");
    let copies: Vec<(String, String)> = builder
        .org
        .iter()
        .enumerate()
        .map(|(i, &v)| (id(i), graph.name(v).to_string()))
        .collect();
    let edges: Vec<(String, String)> = builder.edges.iter().map(|&(a, b)| (id(a), id(b))).collect();
    Decomposition::from_parts(copies, edges)
}

struct Builder<'g> {
    solver: DdpSolver<'g>,
    org: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl Builder<'_> {
    /// Decomposes the induced subgraph on `key`, returning its root copies.
    fn build(&mut self, key: SubsetKey) -> Vec<usize> {
        let mut groups: BTreeMap<usize, u64> = BTreeMap::new();
        for frag in self.solver.fragments_of(key) {
            let root = if frag.len() == 1 {
                frag.first().unwrap()
            } else {
                self.solver.best_roots_of(frag).expect("fragment")[0]
            };
            *groups.entry(root).or_default() |= frag.0;
        }
        let mut roots = Vec::with_capacity(groups.len());
        for (root, union) in groups {
            let copy = self.org.len();
            self.org.push(root);
            let rest = SubsetKey(union).without(root);
            if !rest.is_empty() {
                for child in self.build(rest) {
                    self.edges.push((copy, child));
                }
            }
            roots.push(copy);
        }
        roots
    }
}
