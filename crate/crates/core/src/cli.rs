//! The `dagdepth` command line.
//!
//! Exit status: 0 on success, a valid decomposition or a winning strategy;
//! 2 on an invalid decomposition or a losing strategy (the witness goes to
//! stdout); 1 on usage, parse, I/O or limit errors.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::ddp::{ddp_with_limit, DEFAULT_SOLVER_LIMIT};
use crate::decomposition::{build_decomposition_with_limit, check_valid, Decomposition, Validity};
use crate::digraph::Digraph;
use crate::dot::{decomposition_to_dot, digraph_to_dot};
use crate::error::Error;
use crate::game::{
    copnumber_bruteforce_with, verify_strategy_with, VerifyReport, DEFAULT_ORACLE_LIMIT,
    DEFAULT_VERIFIER_LIMIT,
};
use crate::gen;
use crate::par::Exec;
use crate::transform::{closure, merge_pair, merge_verdict, reduce};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dagdepth",
    version,
    about = "DAG-depth, DAG-depth decompositions and lift-free cops-and-robber strategies"
)]
struct Cli {
    /// Vertex limit for the exact solver, the strategy verifier or the cop-number oracle.
    #[arg(long, global = true, value_name = "N")]
    limit: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the DAG-depth of a digraph.
    Ddp { graph: String },
    /// Build an optimal decomposition.
    Decompose {
        graph: String,
        /// Greedily merge optimally mergeable copies afterwards.
        #[arg(long)]
        reduce: bool,
        #[arg(short = 'o', value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Check the Neighbor cover condition.
    Validate { graph: String, dec: String },
    /// Exhaustively verify the cop strategy a decomposition describes.
    Verify { graph: String, dec: String },
    /// Report the merge conditions for two copies and print the merged decomposition.
    Merge {
        graph: String,
        dec: String,
        #[arg(long, num_args = 2, value_names = ["ID", "ID"], required = true)]
        pair: Vec<String>,
    },
    /// Greedily merge optimally mergeable copies.
    Reduce { graph: String, dec: String },
    /// Print the closure of a valid decomposition.
    Closure {
        graph: String,
        dec: String,
        #[arg(short = 'o', value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Lift-free cop number by unrestricted game search.
    Copnumber { graph: String },
    /// Generate a fixture digraph: expo N, fig1, fig2, path N, bicomplete N.
    Gen {
        family: String,
        n: Option<usize>,
        #[arg(short = 'o', value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Convert a .dg or .dec file to Graphviz DOT.
    ExportDot { file: String },
}

struct Failure(String);

impl Failure {
    fn at(path: &str, e: Error) -> Self {
        Failure(format!("{path}: {e}"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, Failure> {
        if path == "-" {
            if self.stdin_used {
                return Err(Failure("stdin can only be read once".into()));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure(format!("<stdin>: {e}")))?;
            return Ok(s);
        }
        fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))
    }

    fn graph(&mut self, path: &str) -> Result<Digraph, Failure> {
        let text = self.read(path)?;
        Digraph::parse(&text).map_err(|e| Failure::at(path, e))
    }

    fn dec(&mut self, path: &str) -> Result<Decomposition, Failure> {
        let text = self.read(path)?;
        Decomposition::parse(&text).map_err(|e| Failure::at(path, e))
    }
}

fn emit(out: &mut dyn Write, target: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match target {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
        }
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure(e.to_string())),
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let mut io = Io {
        stdin,
        stdin_used: false,
    };
    match dispatch(cli, &mut io, stdout) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn rejected(out: &mut dyn Write, text: &str) -> Result<i32, Failure> {
    emit(out, &None, text)?;
    Ok(EXIT_REJECTED)
}

fn dispatch(cli: Cli, io: &mut Io<'_>, out: &mut dyn Write) -> Result<i32, Failure> {
    let limit = cli.limit;
    match cli.command {
        Command::Ddp { graph } => {
            let g = io.graph(&graph)?;
            let d = ddp_with_limit(&g, limit.unwrap_or(DEFAULT_SOLVER_LIMIT))?;
            emit(out, &None, &format!("{d}\n"))?;
        }
        Command::Decompose {
            graph,
            reduce: do_reduce,
            output,
        } => {
            let g = io.graph(&graph)?;
            let mut dec =
                build_decomposition_with_limit(&g, limit.unwrap_or(DEFAULT_SOLVER_LIMIT))?;
            if do_reduce {
                dec = reduce(&g, &dec)?;
            }
            emit(out, &output, &dec.to_string())?;
        }
        Command::Validate { graph, dec } => {
            let g = io.graph(&graph)?;
            let d = io.dec(&dec)?;
            match check_valid(&g, &d)? {
                Validity::Valid => emit(out, &None, "VALID\n")?,
                Validity::Invalid(v) => return rejected(out, &format!("INVALID {v}\n")),
            }
        }
        Command::Verify { graph, dec } => {
            let g = io.graph(&graph)?;
            let d = io.dec(&dec)?;
            let report = verify_strategy_with(
                &g,
                &d,
                limit.unwrap_or(DEFAULT_VERIFIER_LIMIT),
                Exec::default(),
            )?;
            let text = report.to_string();
            if matches!(report, VerifyReport::Lose { .. }) {
                return rejected(out, &text);
            }
            emit(out, &None, &text)?;
        }
        Command::Merge { graph, dec, pair } => {
            let g = io.graph(&graph)?;
            let d = io.dec(&dec)?;
            let (a, b) = (&pair[0], &pair[1]);
            let v = merge_verdict(&g, &d, a, b)?;
            let mut text = format!(
                "# same_org={} stays_dag={} keeps_cover={} keeps_depth={}\n",
                v.same_org, v.stays_dag, v.keeps_cover, v.keeps_depth
            );
            if v.same_org && v.stays_dag {
                text.push_str(&merge_pair(&d, a, b)?.to_string());
            }
            if !v.optimally_mergeable() {
                return rejected(out, &text);
            }
            emit(out, &None, &text)?;
        }
        Command::Reduce { graph, dec } => {
            let g = io.graph(&graph)?;
            let d = io.dec(&dec)?;
            match reduce(&g, &d) {
                Ok(r) => emit(out, &None, &r.to_string())?,
                Err(Error::InvalidDecomposition(v)) => {
                    return rejected(out, &format!("INVALID {v}\n"))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Closure { graph, dec, output } => {
            let g = io.graph(&graph)?;
            let d = io.dec(&dec)?;
            match closure(&g, &d) {
                Ok(c) => emit(out, &output, &c.to_string())?,
                Err(Error::InvalidDecomposition(v)) => {
                    return rejected(out, &format!("INVALID {v}\n"))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Copnumber { graph } => {
            let g = io.graph(&graph)?;
            let k = copnumber_bruteforce_with(
                &g,
                limit.unwrap_or(DEFAULT_ORACLE_LIMIT),
                Exec::default(),
            )?;
            emit(out, &None, &format!("{k}\n"))?;
        }
        Command::Gen { family, n, output } => {
            let g = gen::generate(&family, n)?;
            emit(out, &output, &g.to_string())?;
        }
        Command::ExportDot { file } => {
            let text = io.read(&file)?;
            let dot = if looks_like_dec(&file, &text) {
                decomposition_to_dot(
                    &Decomposition::parse(&text).map_err(|e| Failure::at(&file, e))?,
                )
            } else {
                digraph_to_dot(&Digraph::parse(&text).map_err(|e| Failure::at(&file, e))?)
            };
            emit(out, &None, &dot)?;
        }
    }
    Ok(EXIT_OK)
}

/// `.dec` by extension, otherwise by the presence of `n` declarations.
fn looks_like_dec(path: &str, text: &str) -> bool {
    if path.ends_with(".dec") {
        return true;
    }
    if path.ends_with(".dg") {
        return false;
    }
    crate::digraph::tokenize(text).any(|(_, t)| t[0] == "n")
}
