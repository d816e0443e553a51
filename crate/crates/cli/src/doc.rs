//! Problem-file parsing and result-document serialization.
//!
//! One self-describing JSON format covers input and output. Every scalar
//! travels as an exact string in the grammar `integer | a/b | a/b+c/d i`
//! (bare JSON integers are also accepted on input); no floating point
//! value ever appears in a document. Output struct fields are declared in
//! the order they must serialize in, which makes repeated runs
//! byte-identical.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use descriptor_bvp::bvp::{
    BvpProblem, BvpResolution, Classification, FiredCondition, FreeComponent, SubsystemKind,
    Trajectory,
};
use descriptor_bvp::leontief::{build_pencil, LeontiefModel};
use descriptor_bvp::optimal::{OptimalMethod, OptimalSolution, ResidualReport};
use descriptor_bvp::oracle::{Agreement, OracleClass, OracleReport};
use descriptor_bvp::pencil::{
    classify_pencil, normal_rank, KroneckerStructure, MatrixPencil, PencilClass,
};
use descriptor_bvp::{Error, Matrix, Scalar};

// ---------------------------------------------------------------------
// Input side
// ---------------------------------------------------------------------

/// A matrix entry or boundary value: a bare integer or an exact scalar
/// string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RawScalar {
    Integer(i64),
    Text(String),
}

impl RawScalar {
    fn to_scalar(&self, position: String) -> Result<Scalar, Error> {
        match self {
            RawScalar::Integer(n) => Ok(Scalar::from_integer(*n)),
            RawScalar::Text(text) => Scalar::parse(text).map_err(|inner| Error::Parse {
                text: position,
                reason: inner.to_string(),
            }),
        }
    }
}

pub type RawMatrix = Vec<Vec<RawScalar>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeontiefSection {
    #[serde(rename = "M")]
    pub m: RawMatrix,
    #[serde(rename = "Fcap")]
    pub fcap: RawMatrix,
    pub sectors: Option<Vec<String>>,
}

/// The on-disk problem document. `F`/`G` and `leontief` are alternative
/// ways to define the system pair; boundary data is only required by the
/// commands that use it.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "F")]
    pub f: Option<RawMatrix>,
    #[serde(rename = "G")]
    pub g: Option<RawMatrix>,
    #[serde(rename = "A")]
    pub a: Option<RawMatrix>,
    #[serde(rename = "B")]
    pub b: Option<RawMatrix>,
    #[serde(rename = "D")]
    pub d: Option<Vec<RawScalar>>,
    pub k0: Option<i64>,
    #[serde(rename = "kN")]
    pub k_n: Option<i64>,
    pub leontief: Option<LeontiefSection>,
}

pub fn load_problem_file(path: &Path) -> Result<ProblemFile, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
        text: path.display().to_string(),
        reason: e.to_string(),
    })?;
    // serde_json errors carry line and column positions.
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        text: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Parse a bare JSON array-of-arrays of scalars (used for `--E`).
pub fn load_matrix_file(path: &Path, name: &str) -> Result<Matrix, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
        text: path.display().to_string(),
        reason: e.to_string(),
    })?;
    let raw: RawMatrix = serde_json::from_str(&text).map_err(|e| Error::Parse {
        text: path.display().to_string(),
        reason: e.to_string(),
    })?;
    to_matrix(&raw, name)
}

pub fn to_matrix(raw: &RawMatrix, name: &str) -> Result<Matrix, Error> {
    let mut rows = Vec::with_capacity(raw.len());
    for (i, raw_row) in raw.iter().enumerate() {
        let mut row = Vec::with_capacity(raw_row.len());
        for (j, entry) in raw_row.iter().enumerate() {
            row.push(entry.to_scalar(format!("{name}[{i}][{j}]"))?);
        }
        rows.push(row);
    }
    Matrix::from_rows(rows).map_err(|e| Error::Parse {
        text: name.to_string(),
        reason: e.to_string(),
    })
}

fn to_vector(raw: &[RawScalar], name: &str) -> Result<Vec<Scalar>, Error> {
    raw.iter()
        .enumerate()
        .map(|(i, entry)| entry.to_scalar(format!("{name}[{i}]")))
        .collect()
}

fn missing(key: &str) -> Error {
    Error::Parse {
        text: "problem file".to_string(),
        reason: format!("missing required key {key}"),
    }
}

/// The system pair, from either explicit F/G or a Leontief section, plus
/// sector names when the model supplied them.
pub fn pencil_from_file(file: &ProblemFile) -> Result<(MatrixPencil, Option<Vec<String>>), Error> {
    match (&file.f, &file.g, &file.leontief) {
        (None, None, Some(section)) => {
            let model = LeontiefModel::new(
                to_matrix(&section.m, "M")?,
                to_matrix(&section.fcap, "Fcap")?,
                section.sectors.clone().unwrap_or_default(),
            )?;
            let sectors = (!model.sector_names.is_empty()).then(|| model.sector_names.clone());
            Ok((build_pencil(&model)?, sectors))
        }
        (Some(f), Some(g), None) => {
            Ok((MatrixPencil::new(to_matrix(f, "F")?, to_matrix(g, "G")?)?, None))
        }
        (None, None, None) => Err(missing("F and G (or a leontief section)")),
        (_, _, Some(_)) => Err(Error::Parse {
            text: "problem file".to_string(),
            reason: "give either F and G or a leontief section, not both".to_string(),
        }),
        _ => Err(missing(if file.f.is_none() { "F" } else { "G" })),
    }
}

/// The full boundary value problem; requires A, B, D, k0, kN.
pub fn problem_from_file(file: &ProblemFile) -> Result<(BvpProblem, Option<Vec<String>>), Error> {
    let (pencil, sectors) = pencil_from_file(file)?;
    let a = to_matrix(file.a.as_ref().ok_or_else(|| missing("A"))?, "A")?;
    let b = to_matrix(file.b.as_ref().ok_or_else(|| missing("B"))?, "B")?;
    let d = to_vector(file.d.as_ref().ok_or_else(|| missing("D"))?, "D")?;
    let k0 = file.k0.ok_or_else(|| missing("k0"))?;
    let k_n = file.k_n.ok_or_else(|| missing("kN"))?;
    Ok((BvpProblem::new(pencil, a, b, d, k0, k_n)?, sectors))
}

// ---------------------------------------------------------------------
// Output side
// ---------------------------------------------------------------------

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DivisorDoc {
    /// Coefficients of the monic base polynomial, constant term first.
    pub base_coefficients: Vec<String>,
    /// The eigenvalue when the base is linear.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
    pub power: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantsSection {
    pub rows: usize,
    pub cols: usize,
    pub normal_rank: usize,
    pub pencil_class: &'static str,
    pub finite_divisors: Vec<DivisorDoc>,
    pub infinite_degrees: Vec<usize>,
    pub column_minimal_indices: Vec<usize>,
    pub row_minimal_indices: Vec<usize>,
    pub finite_dimension: usize,
    pub nilpotent_dimension: usize,
    pub zero_block_rows: usize,
    pub zero_block_cols: usize,
}

pub fn invariants_section(
    pencil: &MatrixPencil,
    structure: &KroneckerStructure,
) -> InvariantsSection {
    InvariantsSection {
        rows: pencil.rows(),
        cols: pencil.cols(),
        normal_rank: normal_rank(pencil),
        pencil_class: match classify_pencil(pencil) {
            PencilClass::Regular => "Regular",
            PencilClass::Singular => "Singular",
        },
        finite_divisors: structure
            .finite_divisors
            .iter()
            .map(|d| DivisorDoc {
                base_coefficients: strings(d.base.coeffs()),
                root: d.linear_root().map(|r| r.to_string()),
                power: d.power,
            })
            .collect(),
        infinite_degrees: structure.infinite_degrees.clone(),
        column_minimal_indices: structure.cmi.clone(),
        row_minimal_indices: structure.rmi.clone(),
        finite_dimension: structure.p,
        nilpotent_dimension: structure.q,
        zero_block_rows: structure.h(),
        zero_block_cols: structure.g(),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagnosticsSection {
    pub fired: &'static str,
    pub vacuous_square_case_noted: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FreeComponentDoc {
    pub kind: &'static str,
    pub state_start: usize,
    pub state_end: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyDoc {
    /// One boundary state solving K·Z = D, in finite-part coordinates.
    pub particular: Vec<String>,
    /// Basis of the homogeneous solutions; the family is particular plus
    /// any combination of these.
    pub kernel_basis: Vec<Vec<String>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrajectoryDoc {
    pub k0: i64,
    pub values: Vec<Vec<String>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OptimalSection {
    pub method: &'static str,
    /// The selected boundary state Ĉ in finite-part coordinates.
    pub state_c: Vec<String>,
    pub residual_norm_squared: String,
    /// The boundary vector the selection attains, D̂ = K·Ĉ.
    pub boundary_attained: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    pub spectral_warning: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleSection {
    pub horizon: usize,
    pub anticipation_depth: usize,
    pub oracle_classification: &'static str,
    pub structured_classification: &'static str,
    pub agreement: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TrajectoryDoc>,
}

/// Every command renders one of these; sections it did not compute stay
/// absent. Field declaration order is the serialization order.
#[derive(Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sectors: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free_components: Option<Vec<FreeComponentDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectoryDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal: Option<OptimalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

impl ResultDocument {
    pub fn render(&self) -> String {
        let mut out = serde_json::to_string_pretty(self)
            .expect("result documents contain no non-serializable values");
        out.push('\n');
        out
    }
}

pub fn classification_name(c: Classification) -> &'static str {
    match c {
        Classification::NoSolutionSingularStructure => "NoSolutionSingularStructure",
        Classification::NoSolutionBoundary => "NoSolutionBoundary",
        Classification::Unique => "Unique",
        Classification::Infinite => "Infinite",
    }
}

fn oracle_class_name(c: OracleClass) -> &'static str {
    match c {
        OracleClass::Empty => "Empty",
        OracleClass::Unique => "Unique",
        OracleClass::Infinite => "Infinite",
    }
}

fn agreement_name(a: Agreement) -> &'static str {
    match a {
        Agreement::Match => "Match",
        Agreement::PaperDivergence => "PaperDivergence",
        Agreement::Mismatch => "Mismatch",
    }
}

fn fired_name(f: FiredCondition) -> &'static str {
    match f {
        FiredCondition::ColumnMinimalIndicesPresent => "ColumnMinimalIndicesPresent",
        FiredCondition::BoundaryVectorOutsideColumnSpan => "BoundaryVectorOutsideColumnSpan",
        FiredCondition::OperatorFullColumnRank => "OperatorFullColumnRank",
        FiredCondition::OperatorRankDeficient => "OperatorRankDeficient",
    }
}

fn kind_name(k: SubsystemKind) -> &'static str {
    match k {
        SubsystemKind::RegularFinite => "RegularFinite",
        SubsystemKind::Nilpotent => "Nilpotent",
        SubsystemKind::ColumnMinimal => "ColumnMinimal",
        SubsystemKind::RowMinimal => "RowMinimal",
        SubsystemKind::ZeroBlock => "ZeroBlock",
    }
}

pub fn method_name(m: OptimalMethod) -> &'static str {
    match m {
        OptimalMethod::LeastSquares => "lsq",
        OptimalMethod::Regularized => "tikhonov",
        OptimalMethod::Pseudoinverse => "pinv",
        OptimalMethod::MinimumNorm => "minnorm",
    }
}

pub fn diagnostics_section(resolution: &BvpResolution) -> DiagnosticsSection {
    DiagnosticsSection {
        fired: fired_name(resolution.diagnostics.fired),
        vacuous_square_case_noted: resolution.diagnostics.vacuous_square_case_noted,
    }
}

pub fn free_component_docs(components: &[FreeComponent]) -> Vec<FreeComponentDoc> {
    components
        .iter()
        .map(|c| FreeComponentDoc {
            kind: kind_name(c.kind),
            state_start: c.state_range.start,
            state_end: c.state_range.end,
        })
        .collect()
}

pub fn trajectory_doc(t: &Trajectory) -> TrajectoryDoc {
    TrajectoryDoc { k0: t.k0, values: t.values.iter().map(|v| strings(v)).collect() }
}

pub fn family_doc(resolution: &BvpResolution) -> Option<FamilyDoc> {
    resolution.family.as_ref().map(|f| FamilyDoc {
        particular: strings(&f.particular),
        kernel_basis: f.kernel_basis.iter().map(|v| strings(v)).collect(),
    })
}

pub fn optimal_section(solution: &OptimalSolution, report: &ResidualReport) -> OptimalSection {
    OptimalSection {
        method: method_name(solution.method),
        state_c: strings(&solution.state_c),
        residual_norm_squared: solution.residual_norm_squared.to_string(),
        boundary_attained: strings(&report.boundary_attained),
        theta: solution.regularizer.as_ref().map(|r| r.theta.to_string()),
        spectral_warning: solution.spectral_warning,
    }
}

pub fn oracle_section(report: &OracleReport, horizon: usize, depth: usize) -> OracleSection {
    OracleSection {
        horizon,
        anticipation_depth: depth,
        oracle_classification: oracle_class_name(report.oracle_classification),
        structured_classification: classification_name(report.structured_classification),
        agreement: agreement_name(report.agreement),
        witness: report.witness.as_ref().map(trajectory_doc),
    }
}

/// CSV rendering of a trajectory: header `k,y1,...,ym`, one row per step,
/// exact scalar strings (the scalar grammar never contains a comma).
pub fn trajectory_csv(t: &Trajectory) -> String {
    let width = t.values.first().map_or(0, Vec::len);
    let mut out = String::from("k");
    for j in 1..=width {
        out.push_str(&format!(",y{j}"));
    }
    out.push('\n');
    for (offset, row) in t.values.iter().enumerate() {
        out.push_str(&(t.k0 + offset as i64).to_string());
        for entry in row {
            out.push(',');
            out.push_str(&entry.to_string());
        }
        out.push('\n');
    }
    out
}
