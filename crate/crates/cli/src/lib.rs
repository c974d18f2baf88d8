//! `ualg` command-line front end. [`run`] parses arguments, executes one
//! subcommand against the corpus registry and renders its [`Report`].
//!
//! Exit codes: 0 when every theorem-instance check holds, 1 when one fails,
//! 2 for usage errors and 3 for input errors (bad files, unknown names,
//! violated preconditions, exhausted budgets).

mod commands;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use ualg::congruence::DEFAULT_RELATION_CARRIER;
use ualg::Registry;

pub use report::{Check, CheckKind, Fact, Report};

#[derive(Debug, Parser)]
#[command(name = "ualg", version, about = "Finite-model workbench for topological universal algebra")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include the elapsed time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Extra DSL files loaded on top of the builtin corpus, in order.
    #[arg(long = "corpus", global = true, value_name = "PATH")]
    pub corpus: Vec<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LemmaArg {
    Five,
    SplitFive,
    Nine,
    BarrKock,
    ThirdIso,
    Factorization,
    Epi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CounterexampleArg {
    TopNotRegular,
    M2NotMaltsev,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a DSL file and verify every declaration in it.
    Check { path: PathBuf },
    /// Evaluate a term; variables take values from --env in order of first
    /// occurrence.
    Eval {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        term: String,
        #[arg(long, value_delimiter = ',')]
        env: Vec<usize>,
    },
    /// Check an equation, or the axioms of a theory, exhaustively.
    Satisfies {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        equation: Option<String>,
        #[arg(long, conflicts_with = "equation")]
        theory: Option<String>,
    },
    /// Verify a homomorphism, or enumerate all of them between two algebras.
    Hom {
        #[arg(long, conflicts_with_all = ["from", "to", "map"])]
        name: Option<String>,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
        #[arg(long, value_delimiter = ',', requires = "from")]
        map: Option<Vec<usize>>,
        #[arg(long, requires = "from", conflicts_with = "map")]
        enumerate: bool,
    },
    /// Build a product and check projections and the pairing property.
    Product {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Kernel pair of a homomorphism and its relation flags.
    KernelPair {
        #[arg(long)]
        hom: String,
    },
    /// The congruence generated by pairs, or all congruences.
    Congruence {
        #[arg(long)]
        algebra: String,
        /// Pairs as `0:1,2:3`.
        #[arg(long)]
        pairs: Option<String>,
    },
    /// Quotient by a congruence given as block labels or as a kernel pair.
    Quotient {
        #[arg(long, required_unless_present = "hom")]
        algebra: Option<String>,
        #[arg(long, value_delimiter = ',', required_unless_present = "hom")]
        labels: Option<Vec<usize>>,
        #[arg(long, conflicts_with_all = ["algebra", "labels"])]
        hom: Option<String>,
    },
    /// Regular epi / mono factorization of a homomorphism.
    Factorize {
        #[arg(long, required_unless_present = "all")]
        hom: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Do all pairs of congruences permute?
    Permute {
        #[arg(long)]
        algebra: String,
    },
    /// Is every compatible reflexive relation an equivalence?
    ReflexiveEq {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = DEFAULT_RELATION_CARRIER)]
        max_carrier: usize,
    },
    /// Generate the clone of term operations of a given arity.
    Clone {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// List every function with a witnessing term.
        #[arg(long)]
        list: bool,
    },
    /// Search the ternary clone for a Maltsev operation.
    Maltsev {
        #[arg(long, required_unless_present = "all")]
        algebra: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Check the registered protomodularity witness of a theory.
    Protomodular {
        #[arg(long, default_value = "Grp")]
        theory: String,
        #[arg(long)]
        algebra: Option<String>,
        /// Search for a witness with at most this many binary terms.
        #[arg(long, requires = "algebra")]
        search: Option<usize>,
    },
    /// Continuity of the operations and the topological-algebra checks.
    Topcheck {
        #[arg(long, required_unless_present = "all")]
        topology: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Separation axioms of a space.
    Sep {
        #[arg(long, required_unless_present = "space")]
        topology: Option<String>,
        #[arg(long, conflicts_with = "topology")]
        space: Option<String>,
    },
    /// Quotient topology along a map, and the quotient-map round trip.
    QuotientTop {
        #[arg(long, required_unless_present = "space")]
        topology: Option<String>,
        #[arg(long, conflicts_with = "topology")]
        space: Option<String>,
        #[arg(long, value_delimiter = ',')]
        map: Vec<usize>,
    },
    /// Continuity and openness of a homomorphism between topological algebras.
    OpenMap {
        #[arg(long)]
        hom: String,
        #[arg(long)]
        dom: String,
        #[arg(long)]
        cod: String,
    },
    /// Semidirect product of a registered action.
    Semidirect {
        #[arg(long, required_unless_present = "all")]
        action: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Is `sub` a complement of the normal subgroup `normal`?
    Complement {
        #[arg(long)]
        algebra: String,
        #[arg(long, value_delimiter = ',')]
        normal: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        sub: Vec<usize>,
    },
    /// Point to action to point, and the split-exact factorization.
    PointRoundtrip {
        #[arg(long, required_unless_present = "all")]
        point: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Rebuild a split point on kernel × base and transport the topology.
    Reconstruct {
        #[arg(long)]
        point: String,
        /// Topology on the total algebra: a registered name, `discrete` or
        /// `indiscrete`.
        #[arg(long, default_value = "discrete")]
        top_a: String,
        #[arg(long, default_value = "discrete")]
        top_b: String,
    },
    /// Seeded random instance harness for a diagram lemma.
    Lemma {
        kind: LemmaArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Reproduce a counterexample.
    Counterexample { which: CounterexampleArg },
    /// List the registry and run its invariant sweep.
    Corpus {
        /// One line per swept entry.
        #[arg(long)]
        verbose: bool,
        /// Print the builtin DSL source instead.
        #[arg(long)]
        source: bool,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::error(code, text)
            };
        }
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).join(" ");
    let start = Instant::now();
    let mut registry = match Registry::builtin() {
        Ok(r) => r,
        Err(e) => return Outcome::error(3, format!("error: {e}\n")),
    };
    for path in &cli.corpus {
        if let Err(e) = registry.extend(path) {
            return Outcome::error(3, format!("error: {}: {e}\n", path.display()));
        }
    }
    let mut report = match commands::execute(&registry, &cli.command, echo) {
        Ok(r) => r,
        Err(e) => return Outcome::error(3, format!("error: {e}\n")),
    };
    if cli.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Outcome {
        code: i32::from(report.failed()),
        stdout: if cli.json { report.to_json() } else { report.to_text() },
        stderr: String::new(),
    }
}
