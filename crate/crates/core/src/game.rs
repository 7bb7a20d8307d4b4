//! The lift-free cops-and-robber game on digraphs.
//!
//! The robber is visible and infinitely fast. It moves along directed edges
//! through uncovered vertices and may run through a vertex a cop is about to
//! land on, but may not stop there. Cops are never lifted.
//!
//! One round of a decomposition-guided play:
//! 1. the robber relocates anywhere it can reach;
//! 2. the cop player picks a legal copy `w` of `P` for the robber's position;
//! 3. the target `org(w)` is announced;
//! 4. the robber relocates, avoiding the target as an end point;
//! 5. the target is covered, or nothing happens if it already was;
//! 6. the robber is caught if step 4 left it nowhere to go.
//!
//! Every vertex the robber could reach in step 1 of the next round it could
//! already reach in step 4, so searches only branch on the step 4 move.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::ddp::{bits, check_limit, reach_mask};
use crate::decomposition::Decomposition;
use crate::digraph::{tokenize, Digraph};
use crate::error::{Error, Result};
use crate::par::Exec;

pub const DEFAULT_VERIFIER_LIMIT: usize = 12;
pub const DEFAULT_ORACLE_LIMIT: usize = 8;

/// Position of a play between rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub covered: BTreeSet<String>,
    pub robber: String,
    /// Copy of `P` the latest cop was placed (or skipped) because of.
    pub cursor: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    RobberMove(String),
    CopPlace { copy: String, vertex: String },
    CopSkip { copy: String },
    Capture,
    Stuck,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace(pub Vec<TraceEvent>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyReport {
    Win { max_cops: usize },
    Lose { counterexample: Trace },
}

impl VerifyReport {
    pub fn is_win(&self) -> bool {
        matches!(self, VerifyReport::Win { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlayOutcome {
    Captured { cops: usize },
    Stuck,
}

/// Result of re-running a trace under the game rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub outcome: PlayOutcome,
    pub final_state: GameState,
    pub cursor_path: Vec<String>,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::RobberMove(v) => write!(f, "R {v}"),
            TraceEvent::CopPlace { copy, vertex } => write!(f, "C {copy} {vertex}"),
            TraceEvent::CopSkip { copy } => write!(f, "S {copy}"),
            TraceEvent::Capture => write!(f, "X"),
            TraceEvent::Stuck => write!(f, "! stuck"),
        }
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ev in &self.0 {
            writeln!(f, "{ev}")?;
        }
        Ok(())
    }
}

impl FromStr for Trace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut events = Vec::new();
        for (line, tokens) in tokenize(s) {
            let ev = match tokens.as_slice() {
                ["R", v] => TraceEvent::RobberMove(v.to_string()),
                ["C", c, v] => TraceEvent::CopPlace {
                    copy: c.to_string(),
                    vertex: v.to_string(),
                },
                ["S", c] => TraceEvent::CopSkip {
                    copy: c.to_string(),
                },
                ["X"] => TraceEvent::Capture,
                ["!", "stuck"] => TraceEvent::Stuck,
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("bad trace event `{}`", tokens.join(" ")),
                    })
                }
            };
            events.push(ev);
        }
        Ok(Trace(events))
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyReport::Win { max_cops } => writeln!(f, "WIN cops={max_cops}"),
            VerifyReport::Lose { counterexample } => write!(f, "LOSE\n{counterexample}"),
        }
    }
}

/// Where the robber can end up from `pos` when a cop is announced on
/// `target`: everything reachable through uncovered vertices, except the
/// target. An empty set means the placement catches the robber.
pub fn robber_options(
    graph: &Digraph,
    covered: &BTreeSet<String>,
    pos: &str,
    target: &str,
) -> Result<BTreeSet<String>> {
    let pos = graph.vertex(pos)?;
    let target = graph.vertex(target)?;
    let mut free = FixedBitSet::with_capacity(graph.len());
    free.insert_range(..);
    for v in covered {
        free.set(graph.vertex(v)?, false);
    }
    if !free.contains(pos) {
        return Err(Error::IllegalMove {
            turn: 0,
            reason: format!("robber stands on covered vertex `{}`", graph.name(pos)),
        });
    }
    let mut reach = graph.reach_within(pos, Some(&free));
    reach.set(target, false);
    Ok(reach.ones().map(|v| graph.name(v).to_string()).collect())
}

/// Copies the strategy may place the next cop because of: the roots of `P`
/// before the first placement, the children of `cursor` afterwards, keeping
/// those with a path (possibly empty) to a copy of the robber's vertex.
pub fn legal_cop_choices(
    dec: &Decomposition,
    cursor: Option<&str>,
    robber: &str,
) -> Result<Vec<String>> {
    let p = dec.dag();
    let candidates: Vec<usize> = match cursor {
        None => (0..p.len()).filter(|&c| p.in_degree(c) == 0).collect(),
        Some(id) => p.out_neighbors(dec.copy_index(id)?).to_vec(),
    };
    Ok(candidates
        .into_iter()
        .filter(|&c| p.reach_within(c, None).ones().any(|x| dec.org(x) == robber))
        .map(|c| dec.copy_id(c).to_string())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ev {
    Robber(usize),
    Place(usize, usize),
    Skip(usize),
    Capture,
    Stuck,
}

/// Index-level view of `(D, P, org)` shared by the searches.
struct Board<'a> {
    graph: &'a Digraph,
    dec: &'a Decomposition,
    out: Vec<u64>,
    org: Vec<usize>,
    roots: Vec<usize>,
    /// Originals with a copy reachable from each copy, the copy included.
    reaches: Vec<u64>,
}

impl<'a> Board<'a> {
    fn new(graph: &'a Digraph, dec: &'a Decomposition) -> Result<Self> {
        let org = dec.bind(graph)?;
        let p = dec.dag();
        let order = p.topological_order().expect("decomposition is acyclic");
        let mut reaches = vec![0u64; p.len()];
        for &c in order.iter().rev() {
            reaches[c] = p
                .out_neighbors(c)
                .iter()
                .fold(1u64 << org[c], |m, &x| m | reaches[x]);
        }
        Ok(Board {
            graph,
            dec,
            out: graph.out_masks(),
            org,
            roots: (0..p.len()).filter(|&c| p.in_degree(c) == 0).collect(),
            reaches,
        })
    }

    fn legal(&self, cursor: Option<usize>, robber: usize) -> Vec<usize> {
        let candidates = match cursor {
            None => &self.roots[..],
            Some(c) => self.dec.dag().out_neighbors(c),
        };
        candidates
            .iter()
            .copied()
            .filter(|&c| self.reaches[c] >> robber & 1 == 1)
            .collect()
    }

    fn event(&self, ev: Ev) -> TraceEvent {
        let copy = |c: usize| self.dec.copy_id(c).to_string();
        let vertex = |v: usize| self.graph.name(v).to_string();
        match ev {
            Ev::Robber(v) => TraceEvent::RobberMove(vertex(v)),
            Ev::Place(c, v) => TraceEvent::CopPlace {
                copy: copy(c),
                vertex: vertex(v),
            },
            Ev::Skip(c) => TraceEvent::CopSkip { copy: copy(c) },
            Ev::Capture => TraceEvent::Capture,
            Ev::Stuck => TraceEvent::Stuck,
        }
    }

    fn trace(&self, events: &[Ev]) -> Trace {
        Trace(events.iter().map(|&e| self.event(e)).collect())
    }
}

#[derive(Debug, Clone)]
enum Node {
    Win(usize),
    /// Shortest losing continuation from this state.
    Lose(Vec<Ev>),
}

type StateKey = (u64, usize, Option<usize>);

struct Verifier<'b, 'a> {
    board: &'b Board<'a>,
    memo: HashMap<StateKey, Node>,
}

impl Verifier<'_, '_> {
    /// Value of the state where the robber stands on `robber` and the cop
    /// player is to choose. Both sides are universally quantified: the state
    /// is winning only if every legal cop choice wins against every robber
    /// reply.
    fn eval(&mut self, covered: u64, robber: usize, cursor: Option<usize>) -> Node {
        let key = (covered, robber, cursor);
        if let Some(n) = self.memo.get(&key) {
            return n.clone();
        }
        let board = self.board;
        let choices = board.legal(cursor, robber);
        let node = if choices.is_empty() {
            Node::Lose(vec![Ev::Stuck])
        } else {
            let mut max_cops = 0;
            let mut lose: Option<Vec<Ev>> = None;
            let reach = reach_mask(&board.out, robber, !covered);
            for w in choices {
                let t = board.org[w];
                let (step, next_cov) = if covered >> t & 1 == 1 {
                    (Ev::Skip(w), covered)
                } else {
                    (Ev::Place(w, t), covered | 1 << t)
                };
                let options = reach & !(1u64 << t);
                if options == 0 {
                    max_cops = max_cops.max(next_cov.count_ones() as usize);
                    continue;
                }
                for r2 in bits(options) {
                    match self.eval(next_cov, r2, Some(w)) {
                        Node::Win(k) => max_cops = max_cops.max(k),
                        Node::Lose(rest) => {
                            let extra = 1 + usize::from(r2 != robber);
                            if lose.as_ref().is_none_or(|l| extra + rest.len() < l.len()) {
                                let mut seq = Vec::with_capacity(extra + rest.len());
                                seq.push(step);
                                if r2 != robber {
                                    seq.push(Ev::Robber(r2));
                                }
                                seq.extend(rest);
                                lose = Some(seq);
                            }
                        }
                    }
                }
            }
            match lose {
                Some(seq) => Node::Lose(seq),
                None => Node::Win(max_cops),
            }
        };
        self.memo.insert(key, node.clone());
        node
    }
}

pub fn verify_strategy(graph: &Digraph, dec: &Decomposition) -> Result<VerifyReport> {
    verify_strategy_with(graph, dec, DEFAULT_VERIFIER_LIMIT, Exec::default())
}

/// Exhaustively plays every rule-compliant strategy derived from `dec`
/// against every robber. Returns the largest number of cops any play used,
/// or the shortest losing play (ties go to the canonically first).
pub fn verify_strategy_with(
    graph: &Digraph,
    dec: &Decomposition,
    limit: usize,
    exec: Exec,
) -> Result<VerifyReport> {
    check_limit("verifier", graph, limit)?;
    let board = Board::new(graph, dec)?;
    let starts: Vec<usize> = (0..graph.len()).collect();
    let per_start: Vec<Node> = match exec {
        Exec::Sequential => {
            let mut v = Verifier {
                board: &board,
                memo: HashMap::new(),
            };
            starts.iter().map(|&s| v.eval(0, s, None)).collect()
        }
        Exec::Parallel => exec.map(&starts, |&s| {
            Verifier {
                board: &board,
                memo: HashMap::new(),
            }
            .eval(0, s, None)
        }),
    };
    let mut max_cops = 0;
    let mut lose: Option<Vec<Ev>> = None;
    for (s, node) in per_start.into_iter().enumerate() {
        match node {
            Node::Win(k) => max_cops = max_cops.max(k),
            Node::Lose(rest) => {
                if lose.as_ref().is_none_or(|l| rest.len() + 1 < l.len()) {
                    let mut seq = vec![Ev::Robber(s)];
                    seq.extend(rest);
                    lose = Some(seq);
                }
            }
        }
    }
    Ok(match lose {
        Some(seq) => VerifyReport::Lose {
            counterexample: board.trace(&seq),
        },
        None => {
            debug_assert!(max_cops <= dec.depth());
            VerifyReport::Win { max_cops }
        }
    })
}

pub fn copnumber_bruteforce(graph: &Digraph) -> Result<usize> {
    copnumber_bruteforce_with(graph, DEFAULT_ORACLE_LIMIT, Exec::default())
}

/// Smallest `k` such that some unrestricted lift-free cop strategy catches
/// every robber with at most `k` placements.
pub fn copnumber_bruteforce_with(graph: &Digraph, limit: usize, exec: Exec) -> Result<usize> {
    check_limit("oracle", graph, limit)?;
    let out = graph.out_masks();
    let n = graph.len();
    let values = exec.map_range(n, |s| {
        let mut memo = HashMap::new();
        cops_needed(&out, n, 0, s, &mut memo)
    });
    Ok(values.into_iter().max().unwrap())
}

fn cops_needed(
    out: &[u64],
    n: usize,
    covered: u64,
    robber: usize,
    memo: &mut HashMap<(u64, usize), usize>,
) -> usize {
    if let Some(&k) = memo.get(&(covered, robber)) {
        return k;
    }
    let reach = reach_mask(out, robber, !covered);
    let mut best = usize::MAX;
    for t in (0..n).filter(|&t| covered >> t & 1 == 0) {
        let options = reach & !(1u64 << t);
        let k = if options == 0 {
            1
        } else {
            1 + bits(options)
                .map(|r| cops_needed(out, n, covered | 1 << t, r, memo))
                .max()
                .unwrap()
        };
        best = best.min(k);
        if best == 1 {
            break;
        }
    }
    memo.insert((covered, robber), best);
    best
}

/// Plays one game. Cops follow the smallest legal copy-id. `script[0]` is the
/// robber's start and `script[k]` its destination after the `k`-th cop
/// announcement; missing entries mean "stay if allowed, otherwise the
/// smallest available vertex".
pub fn run_trace<S: AsRef<str>>(
    graph: &Digraph,
    dec: &Decomposition,
    script: &[S],
) -> Result<Trace> {
    check_limit("verifier", graph, 64)?;
    let board = Board::new(graph, dec)?;
    let start = script.first().ok_or(Error::IllegalMove {
        turn: 0,
        reason: "script needs a start vertex".into(),
    })?;
    let mut robber = graph
        .vertex(start.as_ref())
        .map_err(|e| Error::IllegalMove {
            turn: 0,
            reason: e.to_string(),
        })?;
    let mut events = vec![Ev::Robber(robber)];
    let mut covered = 0u64;
    let mut cursor = None;
    let mut turn = 1;
    loop {
        let Some(&w) = board.legal(cursor, robber).first() else {
            events.push(Ev::Stuck);
            break;
        };
        let t = board.org[w];
        let options = reach_mask(&board.out, robber, !covered) & !(1u64 << t);
        if covered >> t & 1 == 1 {
            events.push(Ev::Skip(w));
        } else {
            events.push(Ev::Place(w, t));
            covered |= 1 << t;
            if options == 0 {
                events.push(Ev::Capture);
                break;
            }
        }
        let next = match script.get(turn) {
            Some(name) => {
                let v = graph
                    .vertex(name.as_ref())
                    .map_err(|e| Error::IllegalMove {
                        turn,
                        reason: e.to_string(),
                    })?;
                if options >> v & 1 == 0 {
                    return Err(Error::IllegalMove {
                        turn,
                        reason: format!("robber cannot reach `{}`", graph.name(v)),
                    });
                }
                v
            }
            None if options >> robber & 1 == 1 => robber,
            None => options.trailing_zeros() as usize,
        };
        if next != robber {
            events.push(Ev::Robber(next));
            robber = next;
        }
        cursor = Some(w);
        turn += 1;
    }
    if script.len() > turn {
        return Err(Error::IllegalMove {
            turn,
            reason: "game is over but the script has more moves".into(),
        });
    }
    Ok(board.trace(&events))
}

/// Checks that `trace` is a legal decomposition-guided play and returns how
/// it ends. Cop choices are taken from the trace, so any compliant strategy
/// can be replayed.
pub fn replay(graph: &Digraph, dec: &Decomposition, trace: &Trace) -> Result<Replay> {
    check_limit("verifier", graph, 64)?;
    let board = Board::new(graph, dec)?;
    let bad = |index: usize, reason: String| Error::BadTrace { index, reason };
    let vertex = |i: usize, name: &str| graph.vertex(name).map_err(|e| bad(i, e.to_string()));
    let events = &trace.0;
    let Some(TraceEvent::RobberMove(start)) = events.first() else {
        return Err(bad(0, "trace must start with the robber's position".into()));
    };
    let mut robber = vertex(0, start)?;
    let mut covered = 0u64;
    let mut cursor: Option<usize> = None;
    let mut cursor_path = Vec::new();
    // Robber destinations allowed right now; `None` at a cop decision point.
    let mut pending: Option<u64> = None;
    let mut i = 1;
    let outcome = loop {
        let Some(ev) = events.get(i) else {
            return Err(bad(i, "trace ends without capture or stuck".into()));
        };
        match ev {
            TraceEvent::RobberMove(name) => {
                let v = vertex(i, name)?;
                let Some(opts) = pending.take() else {
                    return Err(bad(i, "robber moves twice".into()));
                };
                if v == robber || opts >> v & 1 == 0 {
                    return Err(bad(i, format!("robber cannot move to `{name}`")));
                }
                robber = v;
            }
            TraceEvent::CopPlace { copy, .. } | TraceEvent::CopSkip { copy } => {
                if let Some(opts) = pending.take() {
                    if opts >> robber & 1 == 0 {
                        return Err(bad(i, "robber had to leave the announced vertex".into()));
                    }
                }
                let w = dec.copy_index(copy).map_err(|e| bad(i, e.to_string()))?;
                if !board.legal(cursor, robber).contains(&w) {
                    return Err(bad(i, format!("copy `{copy}` is not a legal choice")));
                }
                let t = board.org[w];
                let already = covered >> t & 1 == 1;
                match ev {
                    TraceEvent::CopPlace { vertex: v, .. } => {
                        if already || graph.name(t) != v {
                            return Err(bad(i, format!("cannot place a cop on `{v}` here")));
                        }
                    }
                    _ if !already => {
                        return Err(bad(i, "skip on an uncovered vertex".into()));
                    }
                    _ => {}
                }
                let options = reach_mask(&board.out, robber, !covered) & !(1u64 << t);
                covered |= 1 << t;
                cursor = Some(w);
                cursor_path.push(copy.clone());
                pending = Some(options);
            }
            TraceEvent::Capture => {
                if pending != Some(0) || !matches!(events[i - 1], TraceEvent::CopPlace { .. }) {
                    return Err(bad(i, "robber is not caught".into()));
                }
                break PlayOutcome::Captured {
                    cops: covered.count_ones() as usize,
                };
            }
            TraceEvent::Stuck => {
                if let Some(opts) = pending.take() {
                    if opts >> robber & 1 == 0 {
                        return Err(bad(i, "robber had to leave the announced vertex".into()));
                    }
                }
                if !board.legal(cursor, robber).is_empty() {
                    return Err(bad(i, "strategy is not stuck".into()));
                }
                break PlayOutcome::Stuck;
            }
        }
        i += 1;
    };
    if i + 1 != events.len() {
        return Err(bad(i + 1, "events after the end of the game".into()));
    }
    Ok(Replay {
        outcome,
        final_state: GameState {
            covered: bits(covered).map(|v| graph.name(v).to_string()).collect(),
            robber: graph.name(robber).to_string(),
            cursor: cursor.map(|c| dec.copy_id(c).to_string()),
        },
        cursor_path,
    })
}
