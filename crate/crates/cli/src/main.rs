//! `pencildist` command-line front end.

mod output;
mod run;
mod table5;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pencildist::{DhKind, StructureTag};

#[derive(Parser, Debug)]
#[command(
    name = "pencildist",
    version,
    about = "Structured distances to singularity for matrix pencils"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a distance or a lower bound for an input file.
    Distance {
        #[command(subcommand)]
        which: DistanceCmd,
    },
    /// Recompute the DH example table for the three choices of E.
    #[command(name = "reproduce-table5")]
    ReproduceTable5 {
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Write a random structured instance as JSON.
    Generate(GenerateArgs),
    /// Re-check a stored report: common-null residual, norm and structure.
    Verify { report: PathBuf },
}

#[derive(Subcommand, Debug)]
enum DistanceCmd {
    /// Distance to a common null space of a pencil.
    NullSpace(CommonArgs),
    /// Distance to a common null space of a DH triple.
    Dh {
        #[arg(long, default_value = "jre")]
        kind: DhKind,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Distance to a common null space of a matrix polynomial.
    Poly(CommonArgs),
    /// Lower bound on the distance to singularity from backward errors.
    LowerBound {
        /// JSON array of `[re, im]` points.
        #[arg(long)]
        lambda_file: Option<PathBuf>,
        #[arg(long)]
        lambda_count: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Input JSON file.
    pub file: PathBuf,
    /// Override the structure tag stored in the file.
    #[arg(long)]
    pub tag: Option<StructureTag>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rank tolerance for kernel computations.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include the optimal perturbations in the output.
    #[arg(long)]
    pub emit_perturbations: bool,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub tag: StructureTag,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Polynomial degree; omit for a pencil.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Rank of R for DH triples.
    #[arg(long)]
    pub rank_r: Option<usize>,
    /// Rank of E for DH triples.
    #[arg(long)]
    pub rank_e: Option<usize>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

fn init_threads() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("PENCILDIST_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let result = match cli.command {
        Command::Distance { which } => match which {
            DistanceCmd::NullSpace(c) => run::null_space(&c),
            DistanceCmd::Dh { kind, common } => run::dh(&common, kind),
            DistanceCmd::Poly(c) => run::poly(&c),
            DistanceCmd::LowerBound {
                lambda_file,
                lambda_count,
                common,
            } => run::lower_bound(&common, lambda_file.as_deref(), lambda_count),
        },
        Command::ReproduceTable5 { format } => table5::run(format),
        Command::Generate(g) => run::generate(&g),
        Command::Verify { report } => run::verify(&report),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut msg = e.to_string();
            for cause in e.chain().skip(1) {
                let c = cause.to_string();
                if !msg.contains(&c) {
                    msg = format!("{msg}: {c}");
                }
            }
            eprintln!("error: {msg}");
            ExitCode::from(run::exit_code(&e))
        }
    }
}
