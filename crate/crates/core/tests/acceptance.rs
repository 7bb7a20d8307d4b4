//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p dagdepth --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{
    delete_edge, digraph_from_mask, fixture, graph, plain_ddp, random_digraph, GOLDEN_CASES,
};
use dagdepth::{
    build_decomposition, check_valid, closure, copnumber_bruteforce, ddp, gen, is_optimal,
    is_partial_closure, reduce, replay, verify_strategy, Decomposition, Digraph, PlayOutcome,
    VerifyReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Sorted `(org, sorted child orgs)` per copy; equal for decompositions that
/// differ only in copy ids.
fn shape(dec: &Decomposition) -> Vec<(String, Vec<String>)> {
    let mut s: Vec<_> = (0..dec.len())
        .map(|c| {
            let mut kids: Vec<String> = dec
                .dag()
                .out_neighbors(c)
                .iter()
                .map(|&k| dec.org(k).to_string())
                .collect();
            kids.sort();
            (dec.org(c).to_string(), kids)
        })
        .collect();
    s.sort();
    s
}

fn figure_one() -> Outcome {
    let g = graph("fig1.dg");
    ensure!(ddp(&g).unwrap() == 2, "ddp != 2");
    let dec = build_decomposition(&g).unwrap();
    ensure!(
        dec.depth() == 2 && dec.len() == 8,
        "depth {} size {}",
        dec.depth(),
        dec.len()
    );
    let strs = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let mut want = vec![
        ("A".to_string(), vec![]),
        ("B".to_string(), vec![]),
        ("C".to_string(), strs(&["A", "B", "D"])),
        ("C".to_string(), vec![]),
        ("D".to_string(), strs(&["C", "E", "F"])),
        ("D".to_string(), vec![]),
        ("E".to_string(), vec![]),
        ("F".to_string(), vec![]),
    ];
    want.sort();
    ensure!(shape(&dec) == want, "shape {:?}", shape(&dec));
    let report = verify_strategy(&g, &dec).unwrap();
    ensure!(report.to_string() == "WIN cops=2\n", "{report}");
    Ok("ddp=2, 8 copies of depth 2, WIN cops=2".into())
}

fn figure_two() -> Outcome {
    let g = graph("fig2.dg");
    let dec: Decomposition = fixture("fig2.dec").parse().unwrap();
    ensure!(ddp(&g).unwrap() == 4, "ddp != 4");
    ensure!(
        check_valid(&g, &dec).unwrap().is_valid(),
        "figure decomposition invalid"
    );
    ensure!(
        is_optimal(&g, &dec).unwrap(),
        "figure decomposition not optimal"
    );
    let report = verify_strategy(&g, &dec).unwrap();
    ensure!(report.to_string() == "WIN cops=4\n", "{report}");
    Ok("ddp=4, valid, optimal, WIN cops=4".into())
}

fn exponential_family() -> Outcome {
    for n in 1..=6 {
        let g = gen::expo(n).unwrap();
        ensure!(ddp(&g).unwrap() as usize == n, "n={n}: ddp");
        let dec = build_decomposition(&g).unwrap();
        ensure!(
            dec.len() == (1 << (n + 1)) - 2,
            "n={n}: builder size {}",
            dec.len()
        );
        let r = reduce(&g, &dec).unwrap();
        ensure!(r.len() == 2 * n, "n={n}: reduced size {}", r.len());
        ensure!(
            check_valid(&g, &r).unwrap().is_valid(),
            "n={n}: reduced invalid"
        );
        ensure!(r.depth() == n, "n={n}: reduced depth {}", r.depth());
    }
    Ok("n=1..6: ddp=n, 2^(n+1)-2 copies, reduced to 2n".into())
}

fn oracle_equivalence() -> Outcome {
    let mut exhaustive = 0;
    for n in 1..=4usize {
        for mask in 0..1u64 << (n * (n - 1)) {
            let g = digraph_from_mask(n, mask);
            let (d, k) = (ddp(&g).unwrap() as usize, copnumber_bruteforce(&g).unwrap());
            ensure!(d == k, "ddp {d} != cop number {k} on\n{g}");
            exhaustive += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let n = rng.gen_range(5..=7);
        let density = rng.gen_range(0.1..0.6);
        let g = random_digraph(&mut rng, n, density);
        let (d, k) = (ddp(&g).unwrap() as usize, copnumber_bruteforce(&g).unwrap());
        ensure!(d == k, "ddp {d} != cop number {k} on\n{g}");
    }
    Ok(format!("{exhaustive} exhaustive + 200 random digraphs"))
}

fn validity_and_verification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut built, mut failing) = (0, 0);
    while built < 100 || failing < 100 {
        let n = rng.gen_range(2..=7);
        let density = rng.gen_range(0.1..0.6);
        let g = random_digraph(&mut rng, n, density);
        let dec = build_decomposition(&g).unwrap();
        ensure!(
            check_valid(&g, &dec).unwrap().is_valid(),
            "builder output invalid on\n{g}"
        );
        ensure!(
            verify_strategy(&g, &dec).unwrap().is_win(),
            "builder output loses on\n{g}"
        );
        built += 1;
        for k in 0..dec.dag().edge_count() {
            let mutated = delete_edge(&dec, k);
            if check_valid(&g, &mutated).unwrap().is_valid() {
                continue;
            }
            match verify_strategy(&g, &mutated).unwrap() {
                VerifyReport::Win { .. } => {
                    return Err(format!("invalid mutation wins on\n{g}\n{mutated}"))
                }
                VerifyReport::Lose { counterexample } => {
                    let end = replay(&g, &mutated, &counterexample).unwrap();
                    ensure!(
                        end.outcome == PlayOutcome::Stuck,
                        "trace does not replay to stuck"
                    );
                }
            }
            failing += 1;
        }
    }
    Ok(format!(
        "{built} built WIN, {failing} failing mutations LOSE with replayable trace"
    ))
}

fn check_closure(g: &Digraph, dec: &Decomposition) -> Result<(), String> {
    let c = closure(g, dec).unwrap();
    ensure!(
        closure(&c, dec).unwrap() == c,
        "closure not idempotent on\n{g}"
    );
    ensure!(
        is_partial_closure(g, dec, &c).unwrap(),
        "closure not a partial closure on\n{g}"
    );
    for u in 0..c.len() {
        for v in 0..c.len() {
            if u != v && !c.has_edge(u, v) {
                let bigger = c.with_edge(u, v).unwrap();
                ensure!(
                    !is_partial_closure(g, dec, &bigger).unwrap(),
                    "closure not maximal on\n{g}"
                );
            }
        }
    }
    Ok(())
}

fn closure_suite() -> Outcome {
    let fig1 = graph("fig1.dg");
    let fig1_dec: Decomposition = fixture("fig1.dec").parse().unwrap();
    ensure!(
        closure(&fig1, &fig1_dec).unwrap() == fig1,
        "fig1 closure differs"
    );
    let chain = graph("chain.dg");
    let chain_dec: Decomposition = fixture("chain.dec").parse().unwrap();
    ensure!(
        closure(&chain, &chain_dec).unwrap().to_string() == "e u v\ne v u\n",
        "chain closure differs"
    );
    for (g, d) in [
        ("fig1.dg", "fig1.dec"),
        ("fig2.dg", "fig2.dec"),
        ("chain.dg", "chain.dec"),
    ] {
        check_closure(&graph(g), &fixture(d).parse().unwrap())?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let n = rng.gen_range(2..=6);
        let density = rng.gen_range(0.05..0.4);
        let g = random_digraph(&mut rng, n, density);
        check_closure(&g, &build_decomposition(&g).unwrap())?;
    }
    Ok("figure and chain closures exact; idempotent and maximal on 3 fixtures + 100 random".into())
}

fn derived_values() -> Outcome {
    let path = gen::path(7).unwrap();
    ensure!(ddp(&path).unwrap() == 3 && plain_ddp(&path) == 3, "path7");
    for n in 1..=5 {
        let g = gen::bicomplete(n).unwrap();
        let (d, p) = (ddp(&g).unwrap() as usize, plain_ddp(&g) as usize);
        ensure!(d == n && p == n, "bicomplete {n}: {d} / {p}");
    }
    Ok("path7=3, bicomplete n=n for n<=5, both agree with the plain recursion".into())
}

fn determinism() -> Outcome {
    for case in GOLDEN_CASES {
        let (a, b) = (case.run(), case.run());
        ensure!(
            a.code == b.code && a.stdout == b.stdout && a.stderr == b.stderr,
            "{} differs",
            case.name
        );
        let golden = std::fs::read_to_string(case.golden_path()).map_err(|e| e.to_string())?;
        ensure!(
            a.stdout == golden,
            "{} differs from its golden file",
            case.name
        );
    }
    Ok(format!(
        "{} commands byte-identical and matching goldens",
        GOLDEN_CASES.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("figure 1 fixture", figure_one, Duration::from_secs(1)),
        ("figure 2 fixture", figure_two, Duration::from_secs(1)),
        (
            "exponential family",
            exponential_family,
            Duration::from_secs(5),
        ),
        (
            "ddp equals cop number",
            oracle_equivalence,
            Duration::from_secs(600),
        ),
        (
            "validity matches verification",
            validity_and_verification,
            Duration::from_secs(300),
        ),
        ("closure", closure_suite, Duration::from_secs(120)),
        ("derived values", derived_values, Duration::from_secs(1)),
        ("CLI determinism", determinism, Duration::from_secs(600)),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check, bound)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > bound => Err(format!("took {elapsed:.2?}, bound {bound:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
