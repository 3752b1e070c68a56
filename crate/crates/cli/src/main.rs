use bfcg_cli::{run, Check, RunConfig, CHECK_ORDER};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bfcg", version, about = "BFCG crossed-module, lattice and canonical checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Builtin module name (default: adjoint(su2) and vector_poincare).
    #[arg(long, global = true)]
    module: Option<String>,
    /// Crossed-module spec file; overrides --module.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Comma-separated lattice sizes for every check; refinement checks need
    /// three. Default: 8,16,32, and 16,32,64 for offshell.
    #[arg(long, global = true, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Lattice spacing at the first size (default 2π/n).
    #[arg(long, global = true)]
    a: Option<f64>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Tolerance override for exact-class checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    Validate,
    Curvature,
    GaugeCheck,
    Bianchi,
    Eom,
    Algebra,
    Consistency,
    Offshell,
    Dof {
        #[arg(long, requires = "q")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        q: Option<u64>,
    },
    FullReport,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (checks, dims): (Vec<Check>, _) = match cli.command {
        Command::Validate => (vec![Check::Validate], None),
        Command::Curvature => (vec![Check::Curvature], None),
        Command::GaugeCheck => (vec![Check::GaugeCheck], None),
        Command::Bianchi => (vec![Check::Bianchi], None),
        Command::Eom => (vec![Check::Eom], None),
        Command::Algebra => (vec![Check::Algebra], None),
        Command::Consistency => (vec![Check::Consistency], None),
        Command::Offshell => (vec![Check::Offshell], None),
        Command::Dof { p, q } => (vec![Check::Dof], p.zip(q)),
        Command::FullReport => (CHECK_ORDER.to_vec(), None),
    };
    let cfg = RunConfig {
        module: cli.module,
        spec: cli.spec,
        ns: cli.n,
        a: cli.a,
        seed: cli.seed,
        tol: cli.tol,
        dims,
    };
    let outcome = match run(&checks, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.report) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.report),
    }
    ExitCode::from(outcome.code as u8)
}
