#![allow(dead_code)]

use std::path::PathBuf;

use dagdepth::{Decomposition, Digraph};
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn graph(name: &str) -> Digraph {
    fixture(name).parse().unwrap()
}

pub fn dec(name: &str) -> Decomposition {
    fixture(name).parse().unwrap()
}

pub fn vertex_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Digraph on `v0..v{n-1}` whose arcs are the set bits of `mask` over the
/// `n * (n - 1)` ordered pairs.
pub fn digraph_from_mask(n: usize, mask: u64) -> Digraph {
    let names = vertex_names(n);
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                if mask >> bit & 1 == 1 {
                    edges.push((names[u].clone(), names[v].clone()));
                }
                bit += 1;
            }
        }
    }
    Digraph::new(names, edges).unwrap()
}

pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, density: f64) -> Digraph {
    let names = vertex_names(n);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(density) {
                edges.push((names[u].clone(), names[v].clone()));
            }
        }
    }
    Digraph::new(names, edges).unwrap()
}

/// Drops the edge with the given position in `P`'s edge list.
pub fn delete_edge(dec: &Decomposition, k: usize) -> Decomposition {
    let copies: Vec<(String, String)> = (0..dec.len())
        .map(|c| (dec.copy_id(c).to_string(), dec.org(c).to_string()))
        .collect();
    let edges: Vec<(String, String)> = dec
        .dag()
        .edge_names()
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, (a, b))| (a.to_string(), b.to_string()))
        .collect();
    Decomposition::from_parts(copies, edges).unwrap()
}

/// Textbook recursion over explicit vertex lists, without memoization and
/// without any library graph algorithm.
pub fn plain_ddp(g: &Digraph) -> u32 {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    plain_ddp_on(&(0..g.len()).collect::<Vec<_>>(), &edges)
}

fn plain_reach(vertices: &[usize], edges: &[(usize, usize)], from: usize) -> Vec<usize> {
    let mut seen = vec![from];
    let mut i = 0;
    while i < seen.len() {
        let u = seen[i];
        for &(a, b) in edges {
            if a == u && vertices.contains(&b) && !seen.contains(&b) {
                seen.push(b);
            }
        }
        i += 1;
    }
    seen.sort_unstable();
    seen
}

fn plain_ddp_on(vertices: &[usize], edges: &[(usize, usize)]) -> u32 {
    if vertices.len() == 1 {
        return 1;
    }
    let reach: Vec<Vec<usize>> = vertices
        .iter()
        .map(|&v| plain_reach(vertices, edges, v))
        .collect();
    if reach.iter().any(|r| r.len() == vertices.len()) {
        return 1 + vertices
            .iter()
            .map(|&v| {
                let rest: Vec<usize> = vertices.iter().copied().filter(|&x| x != v).collect();
                plain_ddp_on(&rest, edges)
            })
            .min()
            .unwrap();
    }
    reach
        .iter()
        .filter(|r| {
            !reach
                .iter()
                .any(|o| o.len() > r.len() && r.iter().all(|x| o.contains(x)))
        })
        .map(|r| plain_ddp_on(r, edges))
        .max()
        .unwrap()
}

pub struct CliRun {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(args: &[&str], stdin: &str) -> CliRun {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("dagdepth").chain(args.iter().copied());
    let code = dagdepth::cli::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    CliRun {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// One golden CLI invocation. Arguments ending in `.dg` or `.dec` name fixtures.
pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        name: "fig1_ddp",
        args: &["ddp", "fig1.dg"],
        code: 0,
    },
    GoldenCase {
        name: "fig1_decompose",
        args: &["decompose", "fig1.dg"],
        code: 0,
    },
    GoldenCase {
        name: "fig1_decompose_reduce",
        args: &["decompose", "--reduce", "fig1.dg"],
        code: 0,
    },
    GoldenCase {
        name: "fig1_validate",
        args: &["validate", "fig1.dg", "fig1.dec"],
        code: 0,
    },
    GoldenCase {
        name: "fig1_verify",
        args: &["verify", "fig1.dg", "fig1.dec"],
        code: 0,
    },
    GoldenCase {
        name: "fig1_broken_validate",
        args: &["validate", "fig1.dg", "fig1_broken.dec"],
        code: 2,
    },
    GoldenCase {
        name: "fig1_broken_verify",
        args: &["verify", "fig1.dg", "fig1_broken.dec"],
        code: 2,
    },
    GoldenCase {
        name: "fig1_merge_c",
        args: &["merge", "fig1.dg", "fig1.dec", "--pair", "0", "5"],
        code: 2,
    },
    GoldenCase {
        name: "fig1_merge_d",
        args: &["merge", "fig1.dg", "fig1.dec", "--pair", "3", "4"],
        code: 2,
    },
    GoldenCase {
        name: "fig1_reduce",
        args: &["reduce", "fig1.dg", "fig1.dec"],
        code: 0,
    },
    GoldenCase {
        name: "fig1_closure",
        args: &["closure", "fig1.dg", "fig1.dec"],
        code: 0,
    },
    GoldenCase {
        name: "fig1_copnumber",
        args: &["copnumber", "fig1.dg"],
        code: 0,
    },
    GoldenCase {
        name: "fig1_dot_dg",
        args: &["export-dot", "fig1.dg"],
        code: 0,
    },
    GoldenCase {
        name: "fig1_dot_dec",
        args: &["export-dot", "fig1.dec"],
        code: 0,
    },
    GoldenCase {
        name: "fig2_ddp",
        args: &["ddp", "fig2.dg"],
        code: 0,
    },
    GoldenCase {
        name: "fig2_decompose",
        args: &["decompose", "fig2.dg"],
        code: 0,
    },
    GoldenCase {
        name: "fig2_validate",
        args: &["validate", "fig2.dg", "fig2.dec"],
        code: 0,
    },
    GoldenCase {
        name: "fig2_verify",
        args: &["verify", "fig2.dg", "fig2.dec"],
        code: 0,
    },
    GoldenCase {
        name: "fig2_reduce",
        args: &["reduce", "fig2.dg", "fig2.dec"],
        code: 0,
    },
    GoldenCase {
        name: "fig2_closure",
        args: &["closure", "fig2.dg", "fig2.dec"],
        code: 0,
    },
    GoldenCase {
        name: "fig2_copnumber",
        args: &["--limit", "10", "copnumber", "fig2.dg"],
        code: 0,
    },
    GoldenCase {
        name: "fig2_dot_dg",
        args: &["export-dot", "fig2.dg"],
        code: 0,
    },
    GoldenCase {
        name: "fig2_dot_dec",
        args: &["export-dot", "fig2.dec"],
        code: 0,
    },
    GoldenCase {
        name: "chain_closure",
        args: &["closure", "chain.dg", "chain.dec"],
        code: 0,
    },
    GoldenCase {
        name: "chain_verify",
        args: &["verify", "chain.dg", "chain.dec"],
        code: 0,
    },
    GoldenCase {
        name: "expo3_ddp",
        args: &["ddp", "expo3.dg"],
        code: 0,
    },
    GoldenCase {
        name: "expo3_decompose",
        args: &["decompose", "expo3.dg"],
        code: 0,
    },
    GoldenCase {
        name: "expo3_decompose_reduce",
        args: &["decompose", "--reduce", "expo3.dg"],
        code: 0,
    },
    GoldenCase {
        name: "path7_ddp",
        args: &["ddp", "path7.dg"],
        code: 0,
    },
    GoldenCase {
        name: "path7_decompose",
        args: &["decompose", "path7.dg"],
        code: 0,
    },
    GoldenCase {
        name: "bicomplete4_ddp",
        args: &["ddp", "bicomplete4.dg"],
        code: 0,
    },
    GoldenCase {
        name: "bicomplete4_copnumber",
        args: &["copnumber", "bicomplete4.dg"],
        code: 0,
    },
    GoldenCase {
        name: "gen_expo2",
        args: &["gen", "expo", "2"],
        code: 0,
    },
    GoldenCase {
        name: "gen_fig1",
        args: &["gen", "fig1"],
        code: 0,
    },
    GoldenCase {
        name: "gen_path3",
        args: &["gen", "path", "3"],
        code: 0,
    },
];

impl GoldenCase {
    pub fn run(&self) -> CliRun {
        let args: Vec<String> = self
            .args
            .iter()
            .map(|a| {
                if a.ends_with(".dg") || a.ends_with(".dec") {
                    fixture_path(a).to_string_lossy().into_owned()
                } else {
                    a.to_string()
                }
            })
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        run_cli(&args, "")
    }

    pub fn golden_path(&self) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(format!("{}.out", self.name))
    }
}
