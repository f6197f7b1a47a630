//! Scene-file model, command implementations, and SVG rendering for the
//! `gabortile` command-line tool. The binary in `main.rs` is a thin argument
//! parser around [`run_command`].

pub mod scene;
pub mod svg;

use serde::Serialize;
use serde_json::Value;

use gabortile::{
    admissible_shift_solver, certify_construction, classify_2x2, construct_window, expcomplete_1d,
    fd_decomposition, gabor_check, incompleteness_witness, ks_decomposition,
    multitile_level_direct, multitile_level_fourier, multitile_verify_arrangement,
    octagon_pipeline, prop_g_test, structure_report, Error as CoreError, ExpStatus, GaborSpec,
    RatLattice, Verdict,
};

use scene::Scene;

/// How a run ended, mapped onto the exit-code contract: definite verdicts
/// (including negative ones) exit 0, input errors 2, inconclusive searches 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Definite,
    InputError,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Definite => 0,
            Outcome::InputError => 2,
            Outcome::Inconclusive => 3,
        }
    }
}

pub struct CommandOutput {
    pub json: Value,
    pub outcome: Outcome,
    pub svg: Option<String>,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    #[serde(flatten)]
    body: T,
}

fn envelope<T: Serialize>(command: &'static str, body: T) -> Value {
    serde_json::to_value(Envelope {
        tool: "gabortile",
        version: env!("CARGO_PKG_VERSION"),
        command,
        body,
    })
    .expect("command outputs serialize")
}

pub struct CliError {
    pub message: String,
    pub outcome: Outcome,
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError {
            message: e.to_string(),
            outcome: Outcome::InputError,
        }
    }
}

pub type CliResult = Result<CommandOutput, CliError>;

fn need<T>(field: Option<T>, name: &str) -> Result<T, CliError> {
    field.ok_or_else(|| CliError {
        message: format!("scene is missing the required field `{name}`"),
        outcome: Outcome::InputError,
    })
}

fn spec_from_scene(scene: &Scene) -> Result<GaborSpec, CliError> {
    let window = need(scene.window.clone(), "window")?;
    let lattice = need(scene.lattice.clone(), "lattice")?;
    let lat = RatLattice::new(lattice.generator)?;
    let mut spec = GaborSpec::new(window, lat)?;
    if let Some(split) = lattice.block_split {
        if 2 * split != spec.lattice.dim() {
            return Err(CliError {
                message: format!(
                    "block_split {} does not halve the lattice dimension {}",
                    split,
                    spec.lattice.dim()
                ),
                outcome: Outcome::InputError,
            });
        }
        spec.block_split = split;
    }
    Ok(spec)
}

fn lattice_from_scene(scene: &Scene) -> Result<RatLattice, CliError> {
    let lattice = need(scene.lattice.clone(), "lattice")?;
    Ok(RatLattice::new(lattice.generator)?)
}

pub fn cmd_canonicalize(scene: &Scene) -> CliResult {
    let lattice = lattice_from_scene(scene)?;
    #[derive(Serialize)]
    struct Out {
        lattice: RatLattice,
        density: gabortile::Rat,
    }
    let canonical = lattice.canonicalize();
    let density = canonical.density();
    Ok(CommandOutput {
        json: envelope(
            "canonicalize",
            Out {
                lattice: canonical,
                density,
            },
        ),
        outcome: Outcome::Definite,
        svg: None,
    })
}

pub fn cmd_dual(scene: &Scene) -> CliResult {
    let lattice = lattice_from_scene(scene)?;
    #[derive(Serialize)]
    struct Out {
        lattice: RatLattice,
    }
    Ok(CommandOutput {
        json: envelope(
            "dual",
            Out {
                lattice: lattice.dual().canonicalize(),
            },
        ),
        outcome: Outcome::Definite,
        svg: None,
    })
}

pub fn cmd_adjoint(scene: &Scene) -> CliResult {
    let lattice = lattice_from_scene(scene)?;
    #[derive(Serialize)]
    struct Out {
        lattice: RatLattice,
    }
    Ok(CommandOutput {
        json: envelope(
            "adjoint",
            Out {
                lattice: lattice.adjoint()?.canonicalize(),
            },
        ),
        outcome: Outcome::Definite,
        svg: None,
    })
}

pub fn cmd_check(scene: &Scene, want_svg: bool) -> CliResult {
    let spec = spec_from_scene(scene)?;
    let mut verdict = gabor_check(&spec)?;
    if verdict.is_orthonormal() {
        verdict.structure = Some(structure_report(&spec, &verdict)?);
    }
    let svg = want_svg
        .then(|| svg::render_verdict(&spec, &verdict))
        .flatten();
    #[derive(Serialize)]
    struct Out {
        verdict: Verdict,
    }
    Ok(CommandOutput {
        json: envelope("check", Out { verdict }),
        outcome: Outcome::Definite,
        svg,
    })
}

pub fn cmd_multitile(scene: &Scene) -> CliResult {
    #[derive(Serialize)]
    struct Out {
        level: Option<u64>,
        agreement: Option<bool>,
        mismatch: Option<gabortile::MultitileCheck>,
    }
    let lattice = lattice_from_scene(scene)?;
    if let Some(polygon) = &scene.polygon {
        let check = multitile_verify_arrangement(polygon, &lattice.canonicalize())?;
        let level = check.level();
        return Ok(CommandOutput {
            json: envelope(
                "multitile",
                Out {
                    level,
                    agreement: None,
                    mismatch: level.is_none().then_some(check),
                },
            ),
            outcome: Outcome::Definite,
            svg: None,
        });
    }
    let window = need(scene.window.clone(), "window or polygon")?;
    let direct = multitile_level_direct(&window, &lattice)?;
    let fourier = multitile_level_fourier(&window, &lattice)?;
    Ok(CommandOutput {
        json: envelope(
            "multitile",
            Out {
                level: direct,
                agreement: Some(direct == fourier),
                mismatch: None,
            },
        ),
        outcome: Outcome::Definite,
        svg: None,
    })
}

pub fn cmd_decompose(scene: &Scene, want_svg: bool) -> CliResult {
    let window = need(scene.window.clone(), "window")?;
    let lattice = lattice_from_scene(scene)?;
    let level = multitile_level_direct(&window, &lattice)?.ok_or(CoreError::NotAMultiTile)?;
    let classes = ks_decomposition(&window, &lattice)?;
    let domains = fd_decomposition(&window, &lattice)?;
    #[derive(Serialize)]
    struct ClassOut {
        shifts: Vec<gabortile::RatVec>,
        region: gabortile::BoxSet,
    }
    #[derive(Serialize)]
    struct Out {
        level: u64,
        classes: Vec<ClassOut>,
        fundamental_domains: Vec<gabortile::BoxSet>,
    }
    let svg = want_svg.then(|| svg::render_boxsets(&domains)).flatten();
    Ok(CommandOutput {
        json: envelope(
            "decompose",
            Out {
                level,
                classes: classes
                    .into_iter()
                    .map(|c| ClassOut {
                        shifts: c.shifts,
                        region: c.region,
                    })
                    .collect(),
                fundamental_domains: domains,
            },
        ),
        outcome: Outcome::Definite,
        svg,
    })
}

pub fn cmd_solve_shift(scene: &Scene) -> CliResult {
    let window = need(scene.window.clone(), "window")?;
    let a = need(scene.matrix_a.clone(), "matrix_a")?;
    let b = need(scene.matrix_b.clone(), "matrix_b")?;
    let solution = admissible_shift_solver(&window, &a, &b)?;
    #[derive(Serialize)]
    struct Out {
        solution: gabortile::ShiftSolution,
    }
    Ok(CommandOutput {
        json: envelope("solve-shift", Out { solution }),
        outcome: Outcome::Definite,
        svg: None,
    })
}

pub fn cmd_classify_exp(scene: &Scene) -> CliResult {
    let b = need(scene.matrix_b.clone(), "matrix_b")?;
    #[derive(Serialize)]
    struct Out {
        classification: Option<gabortile::ExpClassification>,
        row_test: Option<(usize, String)>,
        witness: Option<gabortile::RatVec>,
        conclusive: bool,
    }
    // Dimension 1 and determinant-±1 2×2 inputs are fully classified;
    // otherwise the sufficient row test plus bounded witness search may or
    // may not settle the instance.
    if b.rows() == 1 && b.cols() == 1 {
        let cls = expcomplete_1d(&b[(0, 0)])?;
        return Ok(CommandOutput {
            json: envelope(
                "classify-exp",
                Out {
                    classification: Some(cls),
                    row_test: None,
                    witness: None,
                    conclusive: true,
                },
            ),
            outcome: Outcome::Definite,
            svg: None,
        });
    }
    if b.rows() == 2 && b.cols() == 2 {
        if let Ok(cls) = classify_2x2(&b) {
            return Ok(CommandOutput {
                json: envelope(
                    "classify-exp",
                    Out {
                        classification: Some(cls),
                        row_test: None,
                        witness: None,
                        conclusive: true,
                    },
                ),
                outcome: Outcome::Definite,
                svg: None,
            });
        }
    }
    let row_test = prop_g_test(&b)?.map(|(k, p)| (k, p.to_string()));
    let unit = gabortile::BoxSet::unit_cube(b.rows());
    // The grid is exponential in the dimension; shrink it accordingly.
    let (dens, norm) = if b.rows() <= 2 { (6, 4) } else { (2, 1) };
    let witness = incompleteness_witness(&b, &unit, dens, norm)?;
    let conclusive = witness.is_some() || row_test.is_some();
    let outcome = if conclusive {
        Outcome::Definite
    } else {
        Outcome::Inconclusive
    };
    Ok(CommandOutput {
        json: envelope(
            "classify-exp",
            Out {
                classification: None,
                row_test,
                witness,
                conclusive,
            },
        ),
        outcome,
        svg: None,
    })
}

pub fn cmd_construct_window(scene: &Scene, want_svg: bool) -> CliResult {
    let a = need(scene.matrix_a.clone(), "matrix_a")?;
    let d = need(scene.matrix_d.clone(), "matrix_d")?;
    let construction = construct_window(&a, &d)?;
    let verdict = certify_construction(&construction)?;
    #[derive(Serialize)]
    struct Out {
        construction: gabortile::WindowConstruction,
        verdict: Verdict,
    }
    let svg = want_svg
        .then(|| svg::render_boxsets(std::slice::from_ref(&construction.window)))
        .flatten();
    Ok(CommandOutput {
        json: envelope(
            "construct-window",
            Out {
                construction,
                verdict,
            },
        ),
        outcome: Outcome::Definite,
        svg,
    })
}

pub fn cmd_octagon(max_param: u64, want_svg: bool) -> CliResult {
    let report = octagon_pipeline(max_param)?;
    #[derive(Serialize)]
    struct Out {
        report: gabortile::OctagonReport,
    }
    let svg = want_svg.then(|| svg::render_octagon(&report)).flatten();
    Ok(CommandOutput {
        json: envelope("octagon", Out { report }),
        outcome: Outcome::Definite,
        svg,
    })
}

/// Expose the exponential-completeness status through the classify command's
/// body for tests.
pub fn classification_status(v: &Value) -> Option<ExpStatus> {
    match v.pointer("/classification/status")?.as_str()? {
        "COMPLETE" => Some(ExpStatus::Complete),
        "INCOMPLETE" => Some(ExpStatus::Incomplete),
        _ => None,
    }
}
