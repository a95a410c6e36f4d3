mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;
use symgal_core::ratsolve::SolveOptions;

/// Polynomial symmetries, eigenrings and Galois-group constraints of linear
/// differential systems y' = A(x) y over Q(x).
#[derive(Debug, Parser)]
#[command(name = "symgal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report: symmetries per degree, eigenring, Galois constraints.
    Analyze {
        #[command(flatten)]
        input: SystemArgs,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        /// Size of the coefficient range searched for an eigenring witness.
        #[arg(long, default_value_t = 3)]
        budget: u32,
    },
    /// Print the Lie–Vessiot matrix of a degree.
    Lvmatrix {
        #[command(flatten)]
        input: SystemArgs,
        #[arg(long)]
        degree: u32,
    },
    /// Rational solutions of the system.
    Ratsols {
        #[command(flatten)]
        input: SystemArgs,
    },
    /// Rational solutions of B' = AB - BA with their eigenvalue structure.
    Eigenring {
        #[command(flatten)]
        input: SystemArgs,
        #[arg(long, default_value_t = 3)]
        budget: u32,
    },
    /// Basis of the homogeneous polynomial symmetries of one degree.
    Symmetries {
        #[command(flatten)]
        input: SystemArgs,
        #[arg(long)]
        degree: u32,
    },
    /// Decide whether a vertical field commutes with the system's connection field.
    CheckSymmetry {
        #[command(flatten)]
        input: SystemArgs,
        /// Field document (path or inline JSON).
        #[arg(long)]
        field: String,
        /// Allow y-denominators and check the Maclaurin components up to this order.
        #[arg(long)]
        maclaurin: Option<u32>,
    },
    /// Decide whether a constant matrix maps a constant field to itself.
    Stabilizer {
        /// Field document (path or inline JSON).
        #[arg(long)]
        field: String,
        /// Square matrix as JSON rows (path or inline JSON).
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// System document (path or inline JSON).
    system: String,
    /// Replace the fallback pole-order bound at irregular singularities.
    #[arg(long)]
    pole_bound: Option<u32>,
    /// Replace the fallback degree allowance at infinity.
    #[arg(long)]
    inf_bound: Option<u32>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("symgal: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let bits = commands::coeff_bits_from_env()?;
    let (out, dest) = match cli.command {
        Command::Analyze {
            input,
            max_degree,
            budget,
        } => {
            let ctx = commands::Context::load(&input.system, input.options(bits))?;
            (commands::analyze(&ctx, max_degree, budget)?, input.output)
        }
        Command::Lvmatrix { input, degree } => {
            let ctx = commands::Context::load(&input.system, input.options(bits))?;
            (commands::lvmatrix(&ctx, degree), input.output)
        }
        Command::Ratsols { input } => {
            let ctx = commands::Context::load(&input.system, input.options(bits))?;
            (commands::ratsols(&ctx)?, input.output)
        }
        Command::Eigenring { input, budget } => {
            let ctx = commands::Context::load(&input.system, input.options(bits))?;
            (commands::eigenring(&ctx, budget)?, input.output)
        }
        Command::Symmetries { input, degree } => {
            let ctx = commands::Context::load(&input.system, input.options(bits))?;
            (commands::symmetries(&ctx, degree)?, input.output)
        }
        Command::CheckSymmetry {
            input,
            field,
            maclaurin,
        } => {
            let ctx = commands::Context::load(&input.system, input.options(bits))?;
            let field = commands::read_document(&field)?;
            (commands::check_symmetry(&ctx, &field, maclaurin)?, input.output)
        }
        Command::Stabilizer {
            field,
            matrix,
            output,
        } => {
            let field = commands::read_document(&field)?;
            let matrix = commands::read_document(&matrix)?;
            (commands::stabilizer(&field, &matrix)?, output)
        }
    };
    let text = match dest.format {
        Format::Json => symgal_core::expr_io::canonical_json(&out.json),
        Format::Text => out.text,
    };
    commands::emit(&text, dest.output.as_deref())
}

impl SystemArgs {
    fn options(&self, max_coeff_bits: Option<u64>) -> SolveOptions {
        SolveOptions {
            pole_bound: self.pole_bound,
            inf_bound: self.inf_bound,
            max_coeff_bits,
        }
    }
}
