#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod plot;

use commands::{GenerateArgs, Outcome, PersistArgs, PlotArgs, SparsifyArgs, TreeArgs, VerifyArgs};

/// Sparse Rips persistence with certified error boxes.
#[derive(Parser)]
#[command(name = "ripsparse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and tighten a cover tree of the input.
    Tree(TreeArgs),
    /// Emit the sparse edge list for a tree and precision.
    Sparsify(SparsifyArgs),
    /// Compute the persistence diagram of a sparse or full input.
    Persist(PersistArgs),
    /// Draw an approximate diagram as SVG.
    Plot(PlotArgs),
    /// Check a sparse diagram against a full one.
    Verify(VerifyArgs),
    /// Write a seeded sample point set.
    Generate(GenerateArgs),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<ripsparse::Error>() {
        Some(ripsparse::Error::ResourceLimit { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tree(args) => commands::tree(&args),
        Command::Sparsify(args) => commands::sparsify(&args),
        Command::Persist(args) => commands::persist(&args),
        Command::Plot(args) => commands::plot(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Generate(args) => commands::generate(&args),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            if let Some(ripsparse::Error::ResourceLimit { .. }) = err.downcast_ref::<ripsparse::Error>() {
                eprintln!(
                    "hint: raise {} or rerun with --export-only and hand the sparse file to an external engine",
                    commands::MAX_SIMPLICES_ENV
                );
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
