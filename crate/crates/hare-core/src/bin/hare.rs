//! Command-line front end: reads JSON problem files, dispatches to the
//! library, and emits machine-readable JSON reports on standard output.
//!
//! Exit codes: 0 success (or in-family verdict), 1 reported negative (no
//! Stein solution / spurious verdict), 2 input error, 3 not a solution.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hare_core::io::{
    matrix_rows, to_json_string, ClassificationSection, FamiliesSection, FamilySolutionSection,
    ProblemFile, Report, SolutionFile, SteinSection, VerifySection,
};
use hare_core::{
    classify_solution, default_delta_samples, enumerate_families, enumerate_invariant_subspaces,
    hare_residual, solve_stein_set, stein_residual, theorem4_guarantee, Classification,
    Completeness, HareProblem, Result,
};

#[derive(Parser)]
#[command(
    name = "hare",
    version,
    about = "Families of solutions of homogeneous algebraic Riccati equations"
)]
struct Cli {
    /// Override the residual tolerance from the problem file.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, reciprocal pairs, unmixing and reachability analysis.
    Spectrum {
        /// Problem file (JSON with fields A, B, optional R).
        file: PathBuf,
    },
    /// Solve the Stein equation: particular solution and homogeneous kernel.
    Stein { file: PathBuf },
    /// Enumerate solution families over sampled Stein solutions.
    Families {
        file: PathBuf,
        /// Number of random kernel-coefficient samples.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        /// Sampling seed; overrides the problem file's seed field.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classify a candidate solution: in-family, spurious, or not a solution.
    Classify {
        file: PathBuf,
        /// Candidate matrix file (bare rows or {"Q": rows}).
        #[arg(long)]
        solution: PathBuf,
    },
    /// Evaluate the Riccati residual of a candidate solution.
    Verify {
        file: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
}

/// Verdict-determined exit codes.
const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_NOT_A_SOLUTION: u8 = 3;

fn base_report(command: &str, prob: &HareProblem) -> Report {
    let mut warnings = Vec::new();
    if !prob.reachable() {
        warnings.push(
            "(A, B) is not reachable: Stein solutions may be singular and the \
             nonsingularity guarantees do not apply"
                .to_string(),
        );
    }
    Report {
        command: command.to_string(),
        tolerances: *prob.tolerances(),
        spectrum: prob.spectrum().clone(),
        reachable: prob.reachable(),
        theorem4_guarantee: theorem4_guarantee(prob),
        warnings,
        stein: None,
        families: None,
        classification: None,
        verification: None,
    }
}

fn cmd_spectrum(file: &PathBuf, tol_override: Option<f64>) -> Result<(Report, u8)> {
    let prob = ProblemFile::from_path(file)?.build(tol_override)?;
    Ok((base_report("spectrum", &prob), EXIT_OK))
}

fn cmd_stein(file: &PathBuf, tol_override: Option<f64>) -> Result<(Report, u8)> {
    let prob = ProblemFile::from_path(file)?.build(tol_override)?;
    let set = solve_stein_set(&prob, prob.tolerances());
    let mut report = base_report("stein", &prob);
    let (section, code) = if set.exists {
        let (_, residual_norm) = stein_residual(&prob, &set.particular)?;
        (
            SteinSection {
                exists: true,
                particular: Some(matrix_rows(set.particular.matrix())),
                kernel_dim: set.kernel_dim(),
                delta_basis: set
                    .delta_basis
                    .iter()
                    .map(|d| matrix_rows(d.matrix()))
                    .collect(),
                residual_norm: Some(residual_norm),
            },
            EXIT_OK,
        )
    } else {
        (
            SteinSection {
                exists: false,
                particular: None,
                kernel_dim: 0,
                delta_basis: Vec::new(),
                residual_norm: None,
            },
            EXIT_NEGATIVE,
        )
    };
    report.stein = Some(section);
    Ok((report, code))
}

fn cmd_families(
    file: &PathBuf,
    samples: usize,
    seed_flag: Option<u64>,
    tol_override: Option<f64>,
) -> Result<(Report, u8)> {
    let parsed = ProblemFile::from_path(file)?;
    let prob = parsed.build(tol_override)?;
    let tol = *prob.tolerances();
    let seed = seed_flag.or(parsed.seed).unwrap_or(0);
    let set = solve_stein_set(&prob, &tol);
    let mut report = base_report("families", &prob);
    if !set.exists {
        report
            .warnings
            .push("the Stein equation has no solution; no families exist".into());
        report.families = Some(FamiliesSection {
            lattice_size: 0,
            lattice_complete: false,
            sample_count: 0,
            solution_count: 0,
            solutions: Vec::new(),
        });
        return Ok((report, EXIT_NEGATIVE));
    }
    let lattice = enumerate_invariant_subspaces(prob.a(), &tol)?;
    if lattice.completeness == Completeness::UserSuppliedOnly {
        report.warnings.push(
            "A is derogatory or its invariant subspaces could not be certified; only the \
             trivial subspaces are enumerated and the solution list is incomplete"
                .into(),
        );
    }
    let coeff_samples = default_delta_samples(set.kernel_dim(), samples, seed);
    let solutions = enumerate_families(&prob, &set, &lattice, &coeff_samples, &tol)?;
    report.families = Some(FamiliesSection {
        lattice_size: lattice.len(),
        lattice_complete: lattice.completeness == Completeness::Complete,
        sample_count: coeff_samples.len(),
        solution_count: solutions.len(),
        solutions: solutions
            .iter()
            .map(|s| FamilySolutionSection {
                q: matrix_rows(s.q.matrix()),
                kernel_dim: s.subspace.dim(),
                residual_norm: s.residual_norm,
                delta_coeffs: s.source_delta_coeffs.clone(),
            })
            .collect(),
    });
    Ok((report, EXIT_OK))
}

fn cmd_classify(
    file: &PathBuf,
    solution: &PathBuf,
    tol_override: Option<f64>,
) -> Result<(Report, u8)> {
    let prob = ProblemFile::from_path(file)?.build(tol_override)?;
    let tol = *prob.tolerances();
    let q = SolutionFile::from_path(solution)?.build(prob.dim(), &tol)?;
    let mut report = base_report("classify", &prob);
    let (section, code) = match classify_solution(&prob, &q, &tol)? {
        Classification::InFamily { witness, subspace } => (
            ClassificationSection {
                verdict: "in-family".into(),
                witness: Some(matrix_rows(witness.matrix())),
                kernel_dim: Some(subspace.dim()),
                extension_residual: None,
                extension_residual_norm: None,
                hare_residual_norm: None,
            },
            EXIT_OK,
        ),
        Classification::Spurious {
            extension_residual,
            residual_norm,
        } => (
            ClassificationSection {
                verdict: "spurious".into(),
                witness: None,
                kernel_dim: None,
                extension_residual: Some(matrix_rows(extension_residual.matrix())),
                extension_residual_norm: Some(residual_norm),
                hare_residual_norm: None,
            },
            EXIT_NEGATIVE,
        ),
        Classification::NotASolution { hare_residual_norm } => (
            ClassificationSection {
                verdict: "not-a-solution".into(),
                witness: None,
                kernel_dim: None,
                extension_residual: None,
                extension_residual_norm: None,
                hare_residual_norm: Some(hare_residual_norm),
            },
            EXIT_NOT_A_SOLUTION,
        ),
    };
    report.classification = Some(section);
    Ok((report, code))
}

fn cmd_verify(
    file: &PathBuf,
    solution: &PathBuf,
    tol_override: Option<f64>,
) -> Result<(Report, u8)> {
    let prob = ProblemFile::from_path(file)?.build(tol_override)?;
    let tol = *prob.tolerances();
    let q = SolutionFile::from_path(solution)?.build(prob.dim(), &tol)?;
    let mut report = base_report("verify", &prob);
    let (residual_norm, passes) = match hare_residual(&prob, &q) {
        Ok((_, norm)) => (norm, norm <= tol.resid_cut(q.norm())),
        Err(hare_core::Error::IndefiniteInnerTerm { .. }) => (f64::INFINITY, false),
        Err(e) => return Err(e),
    };
    report.verification = Some(VerifySection {
        residual_norm,
        is_solution: passes,
    });
    Ok((report, if passes { EXIT_OK } else { EXIT_NOT_A_SOLUTION }))
}

fn run(cli: &Cli) -> Result<(Report, u8)> {
    match &cli.command {
        Command::Spectrum { file } => cmd_spectrum(file, cli.tol),
        Command::Stein { file } => cmd_stein(file, cli.tol),
        Command::Families {
            file,
            samples,
            seed,
        } => cmd_families(file, *samples, *seed, cli.tol),
        Command::Classify { file, solution } => cmd_classify(file, solution, cli.tol),
        Command::Verify { file, solution } => cmd_verify(file, solution, cli.tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, code)) => match to_json_string(&report) {
            Ok(text) => {
                println!("{text}");
                ExitCode::from(code)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_INPUT_ERROR)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
