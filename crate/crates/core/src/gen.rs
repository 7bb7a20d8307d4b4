//! Fixture digraph generators.

use crate::digraph::Digraph;
use crate::error::{Error, Result};

pub const FAMILIES: [&str; 5] = ["expo", "fig1", "fig2", "path", "bicomplete"];

/// Generates a named family. `fig1` and `fig2` take no size parameter; the
/// others require `n >= 1`.
pub fn generate(family: &str, n: Option<usize>) -> Result<Digraph> {
    match (family, n) {
        ("fig1", None) => Ok(figure1()),
        ("fig2", None) => Ok(figure2()),
        ("fig1" | "fig2", Some(_)) => Err(Error::BadParams(format!("`{family}` takes no size"))),
        ("expo", Some(n)) => expo(n),
        ("path", Some(n)) => path(n),
        ("bicomplete", Some(n)) => bicomplete(n),
        ("expo" | "path" | "bicomplete", None) => {
            Err(Error::BadParams(format!("`{family}` needs a size n >= 1")))
        }
        _ => Err(Error::BadParams(format!(
            "unknown family `{family}` (expected one of {})",
            FAMILIES.join(", ")
        ))),
    }
}

fn positive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::BadParams("size must be at least 1".into()));
    }
    Ok(())
}

/// Two interleaved chains `a1..an`, `b1..bn` with an edge from every
/// `x_i` to every `y_j`, `i < j`. Its unmerged optimal decomposition has
/// `2^(n+1) - 2` copies.
pub fn expo(n: usize) -> Result<Digraph> {
    positive(n)?;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=n {
        vertices.push(format!("a{i}"));
        vertices.push(format!("b{i}"));
        for j in i + 1..=n {
            for x in ["a", "b"] {
                for y in ["a", "b"] {
                    edges.push((format!("{x}{i}"), format!("{y}{j}")));
                }
            }
        }
    }
    Digraph::new(vertices, edges)
}

pub fn figure1() -> Digraph {
    Digraph::new(
        Vec::<&str>::new(),
        [
            ("A", "C"),
            ("B", "C"),
            ("C", "D"),
            ("D", "C"),
            ("E", "D"),
            ("F", "D"),
        ],
    )
    .unwrap()
}

pub fn figure2() -> Digraph {
    Digraph::new(
        Vec::<&str>::new(),
        [
            ("A", "B"),
            ("B", "E"),
            ("C", "D"),
            ("D", "G"),
            ("E", "F"),
            ("F", "E"),
            ("G", "F"),
            ("F", "G"),
            ("G", "H"),
            ("H", "G"),
            ("I", "H"),
            ("H", "I"),
            ("I", "J"),
            ("J", "I"),
            ("E", "J"),
            ("J", "E"),
        ],
    )
    .unwrap()
}

/// `v1 -> v2 -> ... -> vn`.
pub fn path(n: usize) -> Result<Digraph> {
    positive(n)?;
    Digraph::new(
        (1..=n).map(|i| format!("v{i}")),
        (1..n).map(|i| (format!("v{i}"), format!("v{}", i + 1))),
    )
}

/// All arcs in both directions on `v1..vn`.
pub fn bicomplete(n: usize) -> Result<Digraph> {
    positive(n)?;
    let edges = (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| (format!("v{i}"), format!("v{j}")));
    Digraph::new((1..=n).map(|i| format!("v{i}")), edges)
}
