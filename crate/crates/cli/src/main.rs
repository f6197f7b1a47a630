use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gabortile_cli::scene::Scene;
use gabortile_cli::{
    cmd_adjoint, cmd_canonicalize, cmd_check, cmd_classify_exp, cmd_construct_window,
    cmd_decompose, cmd_dual, cmd_multitile, cmd_octagon, cmd_solve_shift, CliError, CommandOutput,
    Outcome,
};

/// Exact decision procedures for Gabor orthonormal bases over rational
/// time-frequency lattices: verdicts with certificates, tiling
/// decompositions, exponential-completeness classification, window
/// construction, and the octagon refutation pipeline.
#[derive(Parser)]
#[command(name = "gabortile", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SceneArgs {
    /// JSON scene file.
    #[arg(long)]
    scene: PathBuf,
    /// Write an SVG rendering here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Emit compact single-line JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OctagonArgs {
    /// Largest diagonal parameter to refute.
    #[arg(long, default_value_t = 50)]
    max_param: u64,
    /// Write an SVG rendering here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Emit compact single-line JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical lower-triangular generator of the scene lattice.
    Canonicalize(SceneArgs),
    /// Dual lattice (canonicalized).
    Dual(SceneArgs),
    /// Adjoint time-frequency lattice (canonicalized).
    Adjoint(SceneArgs),
    /// Orthonormality verdict with certificate and structure report.
    Check(SceneArgs),
    /// Multi-tiling level of the window (box union or polygon) under the lattice.
    Multitile(SceneArgs),
    /// Shift-class and fundamental-domain decompositions of a multi-tile.
    Decompose(SceneArgs),
    /// Solve for admissible shift blocks in the factorizable case.
    SolveShift(SceneArgs),
    /// Exponential-completeness classification of the scene's matrix_b.
    ClassifyExp(SceneArgs),
    /// Construct and certify a window for an upper-triangular lattice.
    ConstructWindow(SceneArgs),
    /// Bounded octagon refutation report.
    Octagon(OctagonArgs),
}

fn load(args: &SceneArgs) -> Result<Scene, CliError> {
    Scene::from_file(&args.scene).map_err(|e| CliError {
        message: format!(
            "parse error at line {}, column {}: {}",
            e.line, e.column, e.message
        ),
        outcome: Outcome::InputError,
    })
}

fn dispatch(cli: &Cli) -> Result<(CommandOutput, Option<PathBuf>, bool), CliError> {
    match &cli.command {
        Command::Canonicalize(a) => Ok((cmd_canonicalize(&load(a)?)?, a.svg.clone(), a.json)),
        Command::Dual(a) => Ok((cmd_dual(&load(a)?)?, a.svg.clone(), a.json)),
        Command::Adjoint(a) => Ok((cmd_adjoint(&load(a)?)?, a.svg.clone(), a.json)),
        Command::Check(a) => Ok((
            cmd_check(&load(a)?, a.svg.is_some())?,
            a.svg.clone(),
            a.json,
        )),
        Command::Multitile(a) => Ok((cmd_multitile(&load(a)?)?, a.svg.clone(), a.json)),
        Command::Decompose(a) => Ok((
            cmd_decompose(&load(a)?, a.svg.is_some())?,
            a.svg.clone(),
            a.json,
        )),
        Command::SolveShift(a) => Ok((cmd_solve_shift(&load(a)?)?, a.svg.clone(), a.json)),
        Command::ClassifyExp(a) => Ok((cmd_classify_exp(&load(a)?)?, a.svg.clone(), a.json)),
        Command::ConstructWindow(a) => Ok((
            cmd_construct_window(&load(a)?, a.svg.is_some())?,
            a.svg.clone(),
            a.json,
        )),
        Command::Octagon(a) => Ok((
            cmd_octagon(a.max_param, a.svg.is_some())?,
            a.svg.clone(),
            a.json,
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok((output, svg_path, compact)) => {
            if let (Some(path), Some(svg)) = (svg_path, &output.svg) {
                if let Err(e) = std::fs::write(&path, svg) {
                    eprintln!("{{\"error\":\"cannot write {}: {e}\"}}", path.display());
                    return ExitCode::from(2);
                }
            }
            let rendered = if compact {
                serde_json::to_string(&output.json)
            } else {
                serde_json::to_string_pretty(&output.json)
            }
            .expect("valid JSON");
            println!("{rendered}");
            ExitCode::from(output.outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.message }));
            ExitCode::from(e.outcome.exit_code() as u8)
        }
    }
}
