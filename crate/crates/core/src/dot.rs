//! Graphviz DOT export.

use std::fmt::Write;

use crate::decomposition::Decomposition;
use crate::digraph::Digraph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn digraph_to_dot(graph: &Digraph) -> String {
    let mut s = String::from("digraph D {\n");
    for name in graph.names() {
        writeln!(s, "  {};", quote(name)).unwrap();
    }
    for (u, v) in graph.edge_names() {
        writeln!(s, "  {} -> {};", quote(u), quote(v)).unwrap();
    }
    s.push_str("}\n");
    s
}

/// Copies are labelled `<copy-id>:<original>` so duplicates stay apart.
pub fn decomposition_to_dot(dec: &Decomposition) -> String {
    let mut s = String::from("digraph P {\n");
    for c in 0..dec.len() {
        let id = dec.copy_id(c);
        let label = format!("{id}:{}", dec.org(c));
        writeln!(s, "  {} [label={}];", quote(id), quote(&label)).unwrap();
    }
    for (a, b) in dec.dag().edge_names() {
        writeln!(s, "  {} -> {};", quote(a), quote(b)).unwrap();
    }
    s.push_str("}\n");
    s
}
