//! Command-line front end: gate files, discrimination reports, simulation,
//! randomized self-checks and hull figures.

pub mod files;
pub mod report;
pub mod selfcheck;
pub mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unidisc::canonical::{build_ud, classify, extract_interaction, relative_phases_tol, MAGIC_DIAGONAL_TOL};
use unidisc::discrimination::{construct_probe_with, discriminate_with, error_probability};
use unidisc::oracle::helstrom_simulate;
use unidisc::{GateClass, InteractionVector, PhaseSet, Tolerances};

use files::{load_gate, to_json, Gate, MatrixFile, ProbeDocument};
use report::{ReportDocument, TOOL_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Largest simulation z-score still counted as agreement.
pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] unidisc::Error),
}

impl CliError {
    pub fn in_file(self, path: &Path) -> Self {
        CliError::Input(format!("{}: {self}", path.display()))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "unidisc",
    version,
    about = "Discriminate two-qubit entangling unitaries with a single query"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the matrix of U_d for an interaction vector
    BuildUd {
        /// Comma-separated α_x,α_y,α_z with π/4 ≥ α_x ≥ α_y ≥ α_z ≥ 0
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        alpha: Vec<f64>,
        /// Read --alpha in degrees
        #[arg(long)]
        degrees: bool,
        #[arg(long)]
        label: Option<String>,
        /// Output file; stdout if omitted
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the interaction content of a gate
    Decompose { input: PathBuf },
    /// Report fidelity, error probability and an optimal product probe
    Discriminate {
        u1: PathBuf,
        u2: PathBuf,
        /// Prior probability of the first gate
        #[arg(long, default_value_t = 0.5)]
        p1: f64,
        #[arg(long)]
        probe_out: Option<PathBuf>,
        #[arg(long)]
        svg_out: Option<PathBuf>,
        /// Magic-basis off-diagonal tolerance for the inputs
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Sample the optimal measurement on the constructed probe
    Simulate {
        u1: PathBuf,
        u2: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        p1: f64,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compare analytic results with brute-force searches on random gates
    Selfcheck {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Draw the hull of the relative phases as SVG
    Figure {
        /// Gate files; omit when --omega is given
        gates: Vec<PathBuf>,
        /// Comma-separated relative phases ω_1..ω_4
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        omega: Option<Vec<f64>>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeDocument {
    pub version: String,
    pub label: Option<String>,
    pub alpha: [f64; 3],
    pub lambda: [f64; 4],
    pub class: String,
    pub global_phase: f64,
    pub mirrored: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationDocument {
    pub version: String,
    pub labels: [Option<String>; 2],
    pub p1: f64,
    pub shots: u64,
    pub seed: u64,
    pub errors: u64,
    pub empirical_rate: f64,
    pub std_error: f64,
    pub analytic_error_probability: f64,
    pub z_score: f64,
    pub fallback_used: bool,
}

fn tolerances(tol: Option<f64>) -> Result<Tolerances, CliError> {
    let mut t = Tolerances::default();
    if let Some(v) = tol {
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Input(format!("--tol must be positive, got {v}")));
        }
        t.magic_diagonal = v;
    }
    Ok(t)
}

fn check_prior(p1: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&p1) {
        Ok(())
    } else {
        Err(CliError::Input(format!("--p1 must lie in [0, 1], got {p1}")))
    }
}

fn load_pair(u1: &Path, u2: &Path) -> Result<(Gate, Gate), CliError> {
    Ok((load_gate(u1)?, load_gate(u2)?))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}

/// z-score of the observed rate against `analytic`, using the binomial
/// standard error under the analytic rate.
pub fn z_score(empirical: f64, analytic: f64, shots: u64) -> f64 {
    let se = (analytic * (1.0 - analytic) / shots as f64).sqrt();
    if se > 0.0 {
        (empirical - analytic) / se
    } else if (empirical - analytic).abs() <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Runs one subcommand, writing its report to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::BuildUd {
            alpha,
            degrees,
            label,
            output,
        } => {
            if alpha.len() != 3 {
                return Err(CliError::Input(format!("--alpha needs 3 values, got {}", alpha.len())));
            }
            let a: Vec<f64> = if *degrees {
                alpha.iter().map(|x| x.to_radians()).collect()
            } else {
                alpha.clone()
            };
            let d = InteractionVector::new(a[0], a[1], a[2])?;
            let doc = MatrixFile::from_matrix(&build_ud(&d), label.clone()).to_json();
            match output {
                Some(path) => files::write(path, &doc)?,
                None => emit(out, &doc)?,
            }
            Ok(EXIT_OK)
        }
        Command::Decompose { input } => {
            let gate = load_gate(input)?;
            let found = extract_interaction(&gate.matrix)?;
            let doc = DecomposeDocument {
                version: TOOL_VERSION.into(),
                label: gate.label,
                alpha: found.vector.as_array(),
                lambda: found.raw_phases.0,
                class: match classify(&found.vector) {
                    GateClass::Identity => "identity",
                    GateClass::Swap => "swap",
                    GateClass::Entangling => "entangling",
                }
                .into(),
                global_phase: found.global_phase,
                mirrored: found.mirrored,
            };
            emit(out, &to_json(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Discriminate {
            u1,
            u2,
            p1,
            probe_out,
            svg_out,
            tol,
        } => {
            check_prior(*p1)?;
            let tol = tolerances(*tol)?;
            let (g1, g2) = load_pair(u1, u2)?;
            let report = discriminate_with(&g1.matrix, &g2.matrix, *p1, &tol)?;
            let doc = ReportDocument::new(&report, [g1.label, g2.label]);
            if let Some(path) = probe_out {
                files::write(path, &to_json(&ProbeDocument::from(&report.probe)))?;
            }
            if let Some(path) = svg_out {
                files::write(path, &svg::render_hull_svg(&report.omega))?;
            }
            emit(out, &to_json(&doc))?;
            Ok(if report.perfectly_distinguishable {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Simulate {
            u1,
            u2,
            p1,
            shots,
            seed,
            tol,
        } => {
            check_prior(*p1)?;
            if *shots == 0 {
                return Err(CliError::Input("--shots must be at least 1".into()));
            }
            let tol = tolerances(*tol)?;
            let (g1, g2) = load_pair(u1, u2)?;
            let omega = relative_phases_tol(&g1.matrix, &g2.matrix, tol.magic_diagonal)?;
            let built = construct_probe_with(&omega, &tol)?;
            let outcome = helstrom_simulate(&g1.matrix, &g2.matrix, &built.probe, *p1, *shots, *seed)?;
            let analytic = error_probability(built.achieved.min(1.0), *p1, 1.0 - *p1)?;
            let z = z_score(outcome.empirical_rate, analytic, *shots);
            let doc = SimulationDocument {
                version: TOOL_VERSION.into(),
                labels: [g1.label, g2.label],
                p1: *p1,
                shots: *shots,
                seed: *seed,
                errors: outcome.errors,
                empirical_rate: outcome.empirical_rate,
                std_error: outcome.std_error,
                analytic_error_probability: analytic,
                z_score: z,
                fallback_used: built.fallback_used,
            };
            emit(out, &to_json(&doc))?;
            Ok(if z.abs() <= Z_LIMIT { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Selfcheck { trials, seed } => {
            if *trials == 0 {
                return Err(CliError::Input("--trials must be at least 1".into()));
            }
            let summary = selfcheck::run(*trials, *seed);
            let mut text = String::new();
            for t in &summary.trials {
                text.push_str(&t.line());
                text.push('\n');
            }
            let failures = summary.failures();
            text.push_str(&format!(
                "trials {} passed {} failed {}\n",
                summary.trials.len(),
                summary.trials.len() - failures.len(),
                failures.len()
            ));
            text.push_str(&format!(
                "worst extract={:.3e} probe={:.3e} concurrence={:.3e} product={:.3e} general={:.3e}\n",
                summary.worst(|t| t.extract),
                summary.worst(|t| t.probe_gap),
                summary.worst(|t| t.concurrence),
                summary.worst(|t| t.product_oracle),
                summary.worst(|t| t.general_oracle),
            ));
            for f in &failures {
                text.push_str(&format!("replay: unidisc selfcheck --trials 1 --seed {}\n", f.seed));
            }
            emit(out, &text)?;
            Ok(if failures.is_empty() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Figure {
            gates,
            omega,
            tol,
            output,
        } => {
            let phases = match (omega, gates.as_slice()) {
                (Some(w), []) => {
                    let arr: [f64; 4] = w
                        .as_slice()
                        .try_into()
                        .map_err(|_| CliError::Input(format!("--omega needs 4 values, got {}", w.len())))?;
                    PhaseSet::new(arr)?
                }
                (None, [u1, u2]) => {
                    let tol = tol.unwrap_or(MAGIC_DIAGONAL_TOL);
                    let (g1, g2) = load_pair(u1, u2)?;
                    relative_phases_tol(&g1.matrix, &g2.matrix, tol)?
                }
                _ => {
                    return Err(CliError::Input(
                        "figure needs either --omega or exactly two gate files".into(),
                    ))
                }
            };
            files::write(output, &svg::render_hull_svg(&phases))?;
            Ok(EXIT_OK)
        }
    }
}
