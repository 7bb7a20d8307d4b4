//! DAG-depth of directed graphs and DAG-depth decompositions.
//!
//! A DAG-depth decomposition `(P, org)` of a digraph `D` is a DAG `P` of
//! copies with a surjective map `org` onto `V(D)`. A valid decomposition is a
//! winning game plan for the cop player in the lift-free cops-and-robber
//! game, using at most `depth(P)` cops.
//!
//! * [`digraph`]: graphs, the `.dg` format, reachable fragments, DAG queries.
//! * [`ddp`]: exact DAG-depth with subset memoization.
//! * [`decomposition`]: the builder, the `.dec` format and validity checks.
//! * [`game`]: exhaustive strategy verification and a cop-number oracle.
//! * [`transform`]: merging copies, greedy reduction, closures.
//!
//! Independent work items (robber starts, closure rows, per-copy cover
//! queries) run on rayon when the `parallel` feature is on; see [`par`].

pub mod cli;
pub mod ddp;
pub mod decomposition;
pub mod digraph;
pub mod dot;
pub mod error;
pub mod game;
pub mod gen;
pub mod par;
pub mod transform;

pub use ddp::{best_roots, ddp, ddp_with_limit, DdpSolver, SubsetKey};
pub use decomposition::{
    build_decomposition, build_decomposition_with_limit, check_valid, check_valid_with, is_optimal,
    Decomposition, Validity, Violation,
};
pub use digraph::{DagDepth, DagStructure, Digraph, Fragment};
pub use error::{Error, Result};
pub use game::{
    copnumber_bruteforce, copnumber_bruteforce_with, legal_cop_choices, replay, robber_options,
    run_trace, verify_strategy, verify_strategy_with, GameState, PlayOutcome, Replay, Trace,
    TraceEvent, VerifyReport,
};
pub use par::Exec;
pub use transform::{
    closure, closure_with, is_partial_closure, merge_pair, merge_verdict, reduce, reduce_with,
    MergeVerdict,
};
