//! `horolab`: runs the toolkit's pipelines from the command line and writes
//! JSON reports and CSV plot data.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::manifest::{emit, render_error, RunManifest};

#[derive(Parser)]
#[command(name = "horolab", version, about = "Exact and numerical experiments with linear differential systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
pub(crate) struct Output {
    /// Directory for `<subcommand>.json` and `.csv`; stdout when absent.
    #[arg(long)]
    pub(crate) out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Local series solutions of a system at a point.
    Solve(commands::SolveArgs),
    /// Per-prime slope certificate for the coefficients of a germ.
    CertifyLg(commands::CertifyArgs),
    /// Small integer section with prescribed vanishing at the given points.
    Construct(commands::ConstructArgs),
    /// Derivative tower of a constructed section: rank, vanishing orders,
    /// measured constant and a non-vanishing wedge.
    ZeroLemma(commands::ZeroLemmaArgs),
    /// Characteristic, counting and proximity functions of an entire map.
    Growth(commands::GrowthArgs),
    /// Integer polynomial relations among real constants.
    Independence(commands::IndependenceArgs),
    /// Integrability and monodromy conjugacy for a family read from JSON.
    Isomono(commands::IsomonoArgs),
    /// The two-parameter family as printed and its corrected form, checked
    /// side by side.
    #[command(name = "example-1-3")]
    Example13(commands::ExampleArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::CertifyLg(_) => "certify-lg",
            Command::Construct(_) => "construct",
            Command::ZeroLemma(_) => "zero-lemma",
            Command::Growth(_) => "growth",
            Command::Independence(_) => "independence",
            Command::Isomono(_) => "isomono",
            Command::Example13(_) => "example-1-3",
        }
    }
}

/// Honours `HOROLAB_THREADS` by sizing the global rayon pool.
fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("HOROLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("HOROLAB_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut manifest = RunManifest::new(cli.command.name());
    let result = configure_threads()
        .map_err(|m| ("configuration".to_string(), m))
        .and_then(|()| {
            let (artifacts, out) = match &cli.command {
                Command::Solve(a) => (commands::solve(a, &mut manifest), &a.output.out),
                Command::CertifyLg(a) => (commands::certify(a, &mut manifest), &a.output.out),
                Command::Construct(a) => (commands::construct(a, &mut manifest), &a.output.out),
                Command::ZeroLemma(a) => (commands::zero_lemma(a, &mut manifest), &a.output.out),
                Command::Growth(a) => (commands::growth(a, &mut manifest), &a.output.out),
                Command::Independence(a) => (commands::independence(a, &mut manifest), &a.output.out),
                Command::Isomono(a) => (commands::isomono(a, &mut manifest), &a.output.out),
                Command::Example13(a) => (commands::example(a, &mut manifest), &a.output.out),
            };
            let artifacts = artifacts.map_err(|e| (e.kind(), e.to_string()))?;
            emit(manifest.clone(), artifacts, out.as_deref()).map_err(|m| ("io".to_string(), m))
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((kind, message)) => {
            print!("{}", render_error(&manifest, &kind, message));
            ExitCode::FAILURE
        }
    }
}
