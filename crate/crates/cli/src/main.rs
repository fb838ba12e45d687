mod commands;

use chainlat::{Budgets, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "chainlat", version, about = "Chain algebras of finite distributive lattices")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Overrides for the enumeration budgets. Unset flags fall back to
/// `CHAINLAT_BUDGET_*` and then to the library defaults.
#[derive(Args, Debug)]
struct BudgetArgs {
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    budget_ideals: Option<u64>,
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    budget_chains: Option<u64>,
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    budget_degree: Option<u64>,
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    budget_fiber_nodes: Option<u64>,
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    budget_syt_cells: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lattice of order ideals with ranks, covers and grid coordinates.
    Lattice {
        poset: PathBuf,
        /// Print the Hasse diagram as Graphviz DOT instead.
        #[arg(long)]
        dot: bool,
    },
    /// Maximal chains and the exchange graph.
    Chains { poset: PathBuf },
    /// Krull dimension by formula and by exponent rank.
    Dim { poset: PathBuf },
    /// Width, planarity and cell count.
    Planar { poset: PathBuf },
    /// Sortability of the chain monomials and their sorting relations.
    Sortable { poset: PathBuf },
    /// Hilbert series of the chain algebra.
    Hilbert {
        poset: PathBuf,
        /// Cross-check series coefficients of degree 1..=K against path and fiber counts.
        #[arg(long, value_name = "K")]
        oracle: Option<usize>,
        /// Compare purity of the cell poset with symmetry of the h-vector.
        #[arg(long)]
        gorenstein: bool,
        /// Degrees of graded dimensions reported for non-planar lattices.
        #[arg(long, value_name = "D")]
        max_degree: Option<usize>,
    },
    /// Minimal generators of the toric ideal up to a degree.
    Toric {
        poset: PathBuf,
        #[arg(long, value_name = "D")]
        max_degree: Option<usize>,
        /// Check that the sorting relations form a reduced Gröbner basis (planar only).
        #[arg(long)]
        certify_gb: bool,
        /// Report generators with a non-squarefree side.
        #[arg(long)]
        squarefree_report: bool,
    },
    /// Degree-n witness binomial from an induced cycle.
    CycleWitness {
        poset: PathBuf,
        /// Read the cycle from a file instead of building it from an antichain.
        #[arg(long, value_name = "FILE")]
        cycle: Option<PathBuf>,
        /// Rank of the lower level for the induced-cycle search.
        #[arg(long, value_name = "A")]
        rank: Option<usize>,
        /// Search exhaustively for a longer induced cycle and verify it.
        #[arg(long)]
        search_longer: bool,
    },
    /// Sorting relations of the Hibi monomials.
    HibiSort { poset: PathBuf },
    /// Run the check battery on all posets up to a size.
    Corpus {
        #[arg(long, default_value_t = 5, value_name = "N")]
        max_size: usize,
        /// Include one entry per poset in the report.
        #[arg(long)]
        details: bool,
    },
}

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn env_budget(var: &str) -> Result<Option<u64>, Failure> {
    match std::env::var(var) {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Input(format!("{var}: expected a positive integer, got `{v}`"))),
        },
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::Input(format!("{var}: {e}"))),
    }
}

fn budgets(args: &BudgetArgs) -> Result<Budgets, Failure> {
    let mut b = Budgets::default();
    let fields: [(&mut usize, Option<u64>, &str); 5] = [
        (&mut b.max_ideals, args.budget_ideals, "CHAINLAT_BUDGET_IDEALS"),
        (&mut b.max_chains, args.budget_chains, "CHAINLAT_BUDGET_CHAINS"),
        (&mut b.max_degree, args.budget_degree, "CHAINLAT_BUDGET_DEGREE"),
        (&mut b.max_fiber_nodes, args.budget_fiber_nodes, "CHAINLAT_BUDGET_FIBER_NODES"),
        (&mut b.max_syt_cells, args.budget_syt_cells, "CHAINLAT_BUDGET_SYT_CELLS"),
    ];
    for (field, flag, var) in fields {
        if let Some(n) = flag.or(env_budget(var)?) {
            *field = usize::try_from(n).unwrap_or(usize::MAX);
        }
    }
    Ok(b)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = budgets(&cli.budgets).and_then(|b| commands::run(&cli.command, &b));
    let (report, code) = match result {
        Ok(r) => (Some(r), 0),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            (None, 1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            (None, 2)
        }
    };
    if let Some(r) = report {
        match cli.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("JSON values serialize")),
            Format::Text => print!("{}", r.text),
        }
        if let Some(msg) = r.failed {
            eprintln!("check failed: {msg}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}
