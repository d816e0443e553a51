//! dbvp: exact analysis and solution of two-point boundary value problems
//! for singular linear discrete-time systems F·Y(k+1) = G·Y(k).
//!
//! Exit codes: 0 success (any classification, oracle Match or
//! PaperDivergence), 1 usage, 2 parse or dimension error, 3 method
//! precondition violation, 4 oracle mismatch, 5 internal consistency
//! failure.

mod doc;

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use descriptor_bvp::bvp::{boundary_operator, classify_bvp, solve_unique, Classification};
use descriptor_bvp::optimal::{optimal_bvp, residual_report, OptimalMethod, OptimalOptions};
use descriptor_bvp::oracle::{anticipation_depth, compare, Agreement};
use descriptor_bvp::pencil::{finite_part, kronecker_structure};
use descriptor_bvp::{Error, Rational};

use doc::ResultDocument;

#[derive(Parser)]
#[command(
    name = "dbvp",
    version,
    about = "Exact solver for boundary value problems of singular linear discrete-time systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the Kronecker invariant structure of the pencil s·F - G
    Analyze {
        /// Problem file (JSON)
        file: PathBuf,
    },
    /// Classify the boundary value problem and emit its solution
    Solve {
        /// Problem file (JSON)
        file: PathBuf,
        /// Emit the unique trajectory up to this step (default kN)
        #[arg(long = "trajectory-to", value_name = "K")]
        trajectory_to: Option<i64>,
        /// Output format; csv renders the unique trajectory only
        #[arg(long, value_enum, default_value_t = Format::Document)]
        format: Format,
    },
    /// Select an optimal surrogate state when the problem has no or
    /// infinitely many solutions
    Optimal {
        /// Problem file (JSON)
        file: PathBuf,
        /// Selection method
        #[arg(long, value_enum)]
        method: Method,
        /// Regularization scale as a rational string (tikhonov only)
        #[arg(long, value_name = "R")]
        theta: Option<String>,
        /// JSON matrix file overriding the regularizer E (tikhonov only)
        #[arg(long = "E", value_name = "FILE")]
        e_file: Option<PathBuf>,
    },
    /// Cross-check the structured resolution against the unrolled
    /// recursion
    Check {
        /// Problem file (JSON)
        file: PathBuf,
        /// Unroll horizon (default: the structural minimum)
        #[arg(long, value_name = "H")]
        horizon: Option<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Document,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Lsq,
    Tikhonov,
    Pinv,
    Minnorm,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if informational { 0 } else { 1 };
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::OracleMismatch) => 4,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Usage { .. } => 1,
                Error::Parse { .. } | Error::Dimension { .. } => 2,
                Error::Precondition { .. } => 3,
                Error::Internal { .. } => 5,
            }
        }
    }
}

enum Outcome {
    Success,
    OracleMismatch,
}

fn dispatch(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Analyze { file } => {
            print!("{}", cmd_analyze(&file)?.render());
            Ok(Outcome::Success)
        }
        Command::Solve { file, trajectory_to, format } => {
            print!("{}", cmd_solve(&file, trajectory_to, format)?);
            Ok(Outcome::Success)
        }
        Command::Optimal { file, method, theta, e_file } => {
            print!("{}", cmd_optimal(&file, method, theta, e_file)?.render());
            Ok(Outcome::Success)
        }
        Command::Check { file, horizon } => {
            let (document, agreement) = cmd_check(&file, horizon)?;
            print!("{}", document.render());
            Ok(if agreement == Agreement::Mismatch {
                Outcome::OracleMismatch
            } else {
                Outcome::Success
            })
        }
    }
}

fn cmd_analyze(path: &Path) -> Result<ResultDocument, Error> {
    let file = doc::load_problem_file(path)?;
    let (pencil, sectors) = doc::pencil_from_file(&file)?;
    let structure = kronecker_structure(&pencil)?;
    Ok(ResultDocument {
        sectors,
        invariants: Some(doc::invariants_section(&pencil, &structure)),
        ..ResultDocument::default()
    })
}

fn cmd_solve(path: &Path, trajectory_to: Option<i64>, format: Format) -> Result<String, Error> {
    let file = doc::load_problem_file(path)?;
    let (problem, sectors) = doc::problem_from_file(&file)?;
    let structure = kronecker_structure(&problem.pencil)?;
    let finite = finite_part(&structure, &problem.pencil)?;
    let k = boundary_operator(&problem, &finite)?;
    let resolution = classify_bvp(&problem, &structure, &k)?;

    let mut document = ResultDocument {
        sectors,
        invariants: Some(doc::invariants_section(&problem.pencil, &structure)),
        classification: Some(doc::classification_name(resolution.classification)),
        diagnostics: Some(doc::diagnostics_section(&resolution)),
        ..ResultDocument::default()
    };
    match resolution.classification {
        Classification::NoSolutionSingularStructure => {
            document.free_components = Some(doc::free_component_docs(&resolution.free_components));
        }
        Classification::NoSolutionBoundary => {}
        Classification::Unique => {
            let k_end = trajectory_to.unwrap_or(problem.k_n);
            let trajectory = solve_unique(&problem, &finite, &resolution, k_end)?;
            if format == Format::Csv {
                return Ok(doc::trajectory_csv(&trajectory));
            }
            document.trajectory = Some(doc::trajectory_doc(&trajectory));
        }
        Classification::Infinite => {
            document.family = doc::family_doc(&resolution);
        }
    }
    if format == Format::Csv {
        return Err(Error::Usage {
            context: "solve",
            reason: format!(
                "csv renders the unique trajectory only; this problem is {}",
                doc::classification_name(resolution.classification)
            ),
        });
    }
    Ok(document.render())
}

fn cmd_optimal(
    path: &Path,
    method: Method,
    theta: Option<String>,
    e_file: Option<PathBuf>,
) -> Result<ResultDocument, Error> {
    let method = match method {
        Method::Lsq => OptimalMethod::LeastSquares,
        Method::Tikhonov => OptimalMethod::Regularized,
        Method::Pinv => OptimalMethod::Pseudoinverse,
        Method::Minnorm => OptimalMethod::MinimumNorm,
    };
    if method != OptimalMethod::Regularized && (theta.is_some() || e_file.is_some()) {
        return Err(Error::Usage {
            context: "optimal",
            reason: "--theta and --E apply only to the tikhonov method".to_string(),
        });
    }
    let theta = theta
        .map(|text| {
            Rational::from_str(&text).map_err(|e| Error::Usage {
                context: "optimal",
                reason: format!("cannot parse theta {text:?} as a rational: {e}"),
            })
        })
        .transpose()?;
    let e = e_file.map(|p| doc::load_matrix_file(&p, "E")).transpose()?;

    let file = doc::load_problem_file(path)?;
    let (problem, sectors) = doc::problem_from_file(&file)?;
    let structure = kronecker_structure(&problem.pencil)?;
    let finite = finite_part(&structure, &problem.pencil)?;
    let k = boundary_operator(&problem, &finite)?;
    let resolution = classify_bvp(&problem, &structure, &k)?;
    let options = OptimalOptions { theta, e };
    let solution = optimal_bvp(&problem, &finite, &resolution, method, &options)?;
    let report = residual_report(&k, &problem.d, &solution.state_c)?;
    Ok(ResultDocument {
        sectors,
        invariants: Some(doc::invariants_section(&problem.pencil, &structure)),
        classification: Some(doc::classification_name(resolution.classification)),
        diagnostics: Some(doc::diagnostics_section(&resolution)),
        optimal: Some(doc::optimal_section(&solution, &report)),
        ..ResultDocument::default()
    })
}

fn cmd_check(
    path: &Path,
    horizon: Option<usize>,
) -> Result<(ResultDocument, Agreement), Error> {
    let file = doc::load_problem_file(path)?;
    let (problem, sectors) = doc::problem_from_file(&file)?;
    let structure = kronecker_structure(&problem.pencil)?;
    let finite = finite_part(&structure, &problem.pencil)?;
    let k = boundary_operator(&problem, &finite)?;
    let resolution = classify_bvp(&problem, &structure, &k)?;
    let depth = anticipation_depth(&structure);
    let span = (problem.k_n - problem.k0) as usize;
    let horizon = horizon.unwrap_or(span + depth);
    let report = compare(&problem, &structure, &resolution, horizon)?;
    let document = ResultDocument {
        sectors,
        invariants: Some(doc::invariants_section(&problem.pencil, &structure)),
        classification: Some(doc::classification_name(resolution.classification)),
        oracle: Some(doc::oracle_section(&report, horizon, depth)),
        ..ResultDocument::default()
    };
    Ok((document, report.agreement))
}
