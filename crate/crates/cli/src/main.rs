use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use latop_cli::commands::{self, GlobalOpts};
use latop_cli::doc;
use latop_cli::report::Outcome;
use latop_cli::verify;
use latop_core::atomic::AtomicityMode;
use latop_core::operator::OpLatticeKind;

#[derive(Parser)]
#[command(
    name = "latop",
    version,
    about = "Exact calculus for orthogonally additive and atomic operators on finite vector-lattice models"
)]
struct Cli {
    /// Emit the machine-readable report instead of the human rendering
    #[arg(long, global = true)]
    machine: bool,

    /// Seed for all sampled checks
    #[arg(long, global = true, default_value_t = latop_core::sample::DEFAULT_SEED)]
    seed: u64,

    /// Cap on |supp(x)| for fragment/decomposition enumeration
    #[arg(long, global = true, default_value_t = latop_core::DEFAULT_SUPPORT_CAP)]
    support_cap: usize,

    /// Cap on the point count for exhaustive (full-mode) algebra checks
    #[arg(long, global = true, default_value_t = latop_core::DEFAULT_ALGEBRA_CAP)]
    algebra_cap: usize,

    /// Cap on the point count for set-partition enumeration
    #[arg(long, global = true, default_value_t = latop_core::DEFAULT_PARTITION_CAP)]
    partition_cap: usize,

    /// Number of rational grid points for kernel sampling
    #[arg(long, global = true, default_value_t = 201)]
    grid_points: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that an operator is atomic subordinate to a homomorphism
    CheckAtomic {
        workspace: PathBuf,
        #[arg(long)]
        op: String,
        #[arg(long)]
        hom: String,
        /// singleton | full
        #[arg(long, default_value = "singleton")]
        mode: String,
    },
    /// Band projection of a positive operator onto the atomic band
    Project {
        workspace: PathBuf,
        #[arg(long)]
        op: String,
        #[arg(long)]
        hom: String,
        /// Verify the closed form against all set partitions of the identity
        #[arg(long)]
        verify_partitions: bool,
    },
    /// Operator lattice operations evaluated at an element
    Lattice {
        workspace: PathBuf,
        /// join | meet | pos | neg | mod
        #[arg(long)]
        kind: String,
        #[arg(long)]
        op: String,
        #[arg(long)]
        op2: Option<String>,
        /// Element at which to evaluate
        #[arg(long)]
        at: String,
        /// Also compute the supremum over disjoint decompositions
        #[arg(long)]
        oracle: bool,
        /// Homomorphism to check subordination against (default: scan all)
        #[arg(long)]
        hom: Option<String>,
    },
    /// Factor an atomic operator through a shift: T = T_N ∘ S_Φ
    Factor {
        workspace: PathBuf,
        #[arg(long)]
        op: String,
        #[arg(long)]
        hom: String,
        /// Grid size for the kernel recovery report
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Minimal extension of a positive map from a lateral ideal
    Extend {
        workspace: PathBuf,
        /// Operator providing the partial map's action
        #[arg(long)]
        map: String,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        at: String,
    },
    /// Enumerate the fragments of an element
    Fragments {
        workspace: PathBuf,
        #[arg(long)]
        element: String,
    },
    /// Convergence-in-measure metric between two elements
    Metric {
        workspace: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Run property suites and print a pass/fail matrix
    VerifyAll {
        workspace: PathBuf,
        /// all | lattice | operators | atomic | projection | factorization | extension
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn parse_kind(kind: &str) -> Result<OpLatticeKind> {
    Ok(match kind {
        "join" => OpLatticeKind::Join,
        "meet" => OpLatticeKind::Meet,
        "pos" => OpLatticeKind::Pos,
        "neg" => OpLatticeKind::Neg,
        "mod" => OpLatticeKind::Modulus,
        other => bail!("unknown lattice kind `{other}` (join|meet|pos|neg|mod)"),
    })
}

fn parse_mode(mode: &str) -> Result<AtomicityMode> {
    Ok(match mode {
        "singleton" => AtomicityMode::Singleton,
        "full" => AtomicityMode::Full,
        other => bail!("unknown mode `{other}` (singleton|full)"),
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let opts = GlobalOpts {
        seed: cli.seed,
        support_cap: cli.support_cap,
        algebra_cap: cli.algebra_cap,
        partition_cap: cli.partition_cap,
        grid_points: cli.grid_points,
    };
    match &cli.command {
        Command::CheckAtomic {
            workspace,
            op,
            hom,
            mode,
        } => {
            let ws = doc::load_workspace_file(workspace, opts.seed)?;
            commands::check_atomic(&ws, op, hom, parse_mode(mode)?, &opts)
        }
        Command::Project {
            workspace,
            op,
            hom,
            verify_partitions,
        } => {
            let ws = doc::load_workspace_file(workspace, opts.seed)?;
            commands::project(&ws, op, hom, *verify_partitions, &opts)
        }
        Command::Lattice {
            workspace,
            kind,
            op,
            op2,
            at,
            oracle,
            hom,
        } => {
            let ws = doc::load_workspace_file(workspace, opts.seed)?;
            commands::lattice(
                &ws,
                parse_kind(kind)?,
                op,
                op2.as_deref(),
                at,
                *oracle,
                hom.as_deref(),
                &opts,
            )
        }
        Command::Factor {
            workspace,
            op,
            hom,
            grid,
        } => {
            let ws = doc::load_workspace_file(workspace, opts.seed)?;
            commands::factor(&ws, op, hom, *grid, &opts)
        }
        Command::Extend {
            workspace,
            map,
            ideal,
            at,
        } => {
            let ws = doc::load_workspace_file(workspace, opts.seed)?;
            commands::extend(&ws, map, ideal, at, &opts)
        }
        Command::Fragments { workspace, element } => {
            let ws = doc::load_workspace_file(workspace, opts.seed)?;
            commands::fragments_cmd(&ws, element, &opts)
        }
        Command::Metric { workspace, f, g } => {
            let ws = doc::load_workspace_file(workspace, opts.seed)?;
            commands::metric(&ws, f, g, &opts)
        }
        Command::VerifyAll { workspace, suite } => {
            let ws = doc::load_workspace_file(workspace, opts.seed)?;
            verify::verify_all(&ws, suite, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if cli.machine {
                print!("{}", outcome.machine);
            } else {
                print!("{}", outcome.human);
            }
            ExitCode::from(outcome.exit.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
