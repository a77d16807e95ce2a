mod commands;
mod input;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coreprod::mountain::FamilyMode;
use coreprod::search::{DEFAULT_MAX_VERTICES, DEFAULT_NODE_BUDGET};

/// Exit status for usage and input errors; 0, 1 and 2 carry verdicts.
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "coreprod",
    version,
    about = "Homomorphisms, cores and tensor products of small digraphs",
    after_help = "Exit status: 0 true / certified, 1 false, 2 inconclusive (budget ran out), 3 error.\n\
                  Digraph arguments are files in the text format or inline literals:\n  \
                  mountain:3,1@k=3  word:U D U@k=3  cycle:N  dipath:N  complete:N  empty:N  cone:<literal>"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Search nodes allowed per connected component of each homomorphism query.
    #[arg(long, global = true, env = "COREPROD_BUDGET_NODES", default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget_nodes: u64,
    /// Largest product any command may build.
    #[arg(long, global = true, env = "COREPROD_MAX_VERTICES", default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
    /// Print the JSON run report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Also write the JSON run report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Add wall-clock time to the report (makes output vary between runs).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand)]
pub enum Command {
    /// Parse a digraph and print it in canonical form with its flags.
    Parse { input: String },
    /// Tensor product of two or more digraphs.
    Product {
        #[arg(required = true)]
        inputs: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Core of a digraph with a retraction onto it.
    Core {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the retract and core vertices as JSON.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Whether a digraph is a core.
    IsCore { input: String },
    /// Search for a homomorphism.
    Hom {
        source: String,
        target: String,
        /// Fix a source vertex: `u=v`.
        #[arg(long, value_parser = parse_pin)]
        pin: Vec<(usize, usize)>,
        /// Target vertex no source vertex may use.
        #[arg(long)]
        avoid: Vec<usize>,
    },
    /// Whether every homomorphism of the product onto either factor is onto.
    Orthogonal { left: String, right: String },
    /// Shrink two digraphs to induced subgraphs that are orthogonal.
    Orthogonalize {
        left: String,
        right: String,
        /// Write `<prefix>.left.dg` and `<prefix>.right.dg`.
        #[arg(long)]
        output_prefix: Option<PathBuf>,
    },
    /// Mountain sequences.
    #[command(subcommand)]
    Mountains(MountainsCommand),
    /// Check the conditions behind the product theorems.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Gadget graphs.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Graphviz export.
    ExportDot {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "G")]
        name: String,
    },
}

#[derive(Subcommand)]
pub enum MountainsCommand {
    /// Strictly decreasing mountain sequences of a given height and peak count.
    Gen {
        #[arg(long = "h")]
        height: usize,
        #[arg(long = "l")]
        peaks: usize,
        #[arg(long, value_enum, default_value_t = Mode::TopPeakFixed)]
        mode: Mode,
    },
    /// The separating sequence of a decreasing mountain.
    Omega { sequence: String },
}

#[derive(Subcommand)]
pub enum VerifyCommand {
    /// Hypotheses and conclusion for the product of two cones.
    TwoCone {
        #[arg(long = "g")]
        left: String,
        #[arg(long = "h")]
        right: String,
    },
    /// Sufficient conditions for a product of cones over a family to be a core.
    Vsc(VscArgs),
    /// Digraph homomorphisms against homomorphisms of their gadget graphs.
    Gadget {
        #[arg(long)]
        d1: String,
        #[arg(long)]
        d2: String,
    },
    /// Separator sequences and independence for a decreasing mountain family.
    MountainFamily {
        #[arg(long = "h")]
        height: usize,
        #[arg(long = "l")]
        peaks: usize,
        #[arg(long, value_enum, default_value_t = Mode::TopPeakFixed)]
        mode: Mode,
    },
    /// Lattice laws on random sums of bounded paths.
    Lattice {
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Largest element, in vertices.
        #[arg(long, default_value_t = 10)]
        max_order: usize,
    },
}

#[derive(Args)]
pub struct VscArgs {
    /// A generated family instead of explicit members.
    #[arg(long, value_enum, conflicts_with = "member")]
    pub family: Option<FamilyKind>,
    #[arg(long = "h", requires = "family")]
    pub height: Option<usize>,
    #[arg(long = "l", requires = "family")]
    pub peaks: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::TopPeakFixed)]
    pub mode: Mode,
    /// Family member (repeat).
    #[arg(long)]
    pub member: Vec<String>,
    /// Map the other factors onto the apex digon instead of searching into the cone.
    #[arg(long)]
    pub digon_shortcut: bool,
    /// Also test coreness of the cone product directly up to this many vertices.
    #[arg(long, default_value_t = coreprod::orthogonal::DEFAULT_DIRECT_CHECK_LIMIT)]
    pub direct_check_limit: usize,
}

#[derive(Subcommand)]
pub enum GadgetCommand {
    /// Replace every arc by a copy of the K2-join-C5 gadget.
    Build {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the block layout as JSON.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    TopPeakFixed,
    AllPeaks,
}

impl From<Mode> for FamilyMode {
    fn from(m: Mode) -> FamilyMode {
        match m {
            Mode::TopPeakFixed => FamilyMode::TopPeakFixed,
            Mode::AllPeaks => FamilyMode::AllPeaks,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FamilyKind {
    /// Decreasing mountains.
    Dm,
}

fn parse_pin(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once('=').ok_or_else(|| format!("expected u=v, got {s:?}"))?;
    let n = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((n(u)?, n(v)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(cli, args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
