mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Workbench for PCSP(1in3, B) with symmetric ternary targets.
#[derive(Parser, Debug)]
#[command(name = "pcsp", version)]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel jobs (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Abort long searches after this many seconds (exit 2).
    #[arg(long, global = true, value_name = "SECS")]
    pub time_budget: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect or classify a template (name or structure file).
    #[command(subcommand)]
    Template(TemplateCmd),
    /// Homomorphism order queries.
    #[command(subcommand)]
    Hom(HomCmd),
    /// Polymorphism search, enumeration and verification.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Bounded-arity lemma and selector suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Colour an instance (file or stdin) through a tractable relaxation.
    Solve {
        target: String,
        file: Option<String>,
        #[arg(long, value_enum, default_value = "t2")]
        prefer: Prefer,
    },
    /// Planted 1in3 instance; the witness follows as `# v <var> <bit>` lines.
    Gen { nv: usize, ne: usize, seed: u64 },
}

#[derive(Subcommand, Debug)]
pub enum TemplateCmd {
    Show { template: String },
    Classify { template: String },
}

#[derive(Subcommand, Debug)]
pub enum HomCmd {
    Compare {
        a: String,
        b: String,
    },
    /// Hasse diagram of hom-equivalence classes as DOT.
    Lattice {
        /// Named three-element templates (default).
        #[arg(long, conflicts_with = "all3")]
        named3: bool,
        /// All 1023 symmetric ternary structures on three elements.
        #[arg(long)]
        all3: bool,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Order {
    Lowest,
    MinDomain,
}

#[derive(clap::Args, Debug)]
pub struct SearchFlags {
    /// Try every colour for the first decision.
    #[arg(long)]
    pub no_wlog: bool,
    #[arg(long)]
    pub no_probing: bool,
    #[arg(long, value_enum, default_value = "lowest")]
    pub order: Order,
    /// Write the full search trace (JSON) to this file.
    #[arg(long)]
    pub trace: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum PolyCmd {
    /// Symmetric polymorphism of arity n.
    SearchSym {
        source: String,
        target: String,
        n: usize,
        #[command(flatten)]
        flags: SearchFlags,
    },
    /// Block-symmetric polymorphism with blocks (k1, k2).
    SearchBlock {
        source: String,
        target: String,
        k1: usize,
        k2: usize,
        #[command(flatten)]
        flags: SearchFlags,
    },
    /// Stream all polymorphisms of arity n.
    Enumerate {
        source: String,
        target: String,
        n: usize,
        /// Print only the count.
        #[arg(long)]
        count: bool,
        /// Allow arities above the default cap.
        #[arg(long)]
        force: bool,
    },
    /// Check a table file, or replay the seeded CHplus propagation at arity 23.
    Verify {
        #[arg(long, conflicts_with_all = ["table", "target"])]
        appendix_b: bool,
        /// A `poly`, `sym` or `block` table file.
        #[arg(long, requires = "target")]
        table: Option<String>,
        #[arg(long)]
        target: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Properties stated for the template (or one chosen with --property).
    Lemmas {
        template: String,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        #[arg(long)]
        property: Option<String>,
        #[arg(long)]
        force: bool,
    },
    /// Selector totality and the chain condition.
    Selector {
        /// Template name, or a selector id such as SEL_T1.
        template: String,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        #[arg(long)]
        selector: Option<String>,
        #[arg(long)]
        force: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Prefer {
    T2,
    Nae,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
