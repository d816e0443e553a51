//! Boundary value problems for the singular system F·Y(k+1) = G·Y(k) with
//! two-point boundary condition A·Y(k0) + B·Y(kN) = D.
//!
//! In the coordinates Z = Q⁻¹-ish of the Kronecker form the system splits
//! into independent subsystems with closed-form solution rules; all
//! nontrivial dynamics live in the finite regular part, where the boundary
//! condition contracts to the p-dimensional linear system K·Z0 = D with
//! K = A·Qp + B·Qp·W^(kN-k0). Classification and solving reduce to exact
//! linear algebra on K.

use std::ops::Range;

use crate::error::Error;
use crate::linalg::{matrix_power, rank, solve_general, SolutionSet};
use crate::matrix::Matrix;
use crate::pencil::{FiniteRegularPart, KroneckerStructure, MatrixPencil};
use crate::scalar::Scalar;

/// The full problem statement: recurrence matrices, boundary matrices,
/// boundary vector, and window [k0, kN].
#[derive(Clone, Debug)]
pub struct BvpProblem {
    pub pencil: MatrixPencil,
    pub a: Matrix,
    pub b: Matrix,
    pub d: Vec<Scalar>,
    pub k0: i64,
    pub k_n: i64,
}

impl BvpProblem {
    pub fn new(
        pencil: MatrixPencil,
        a: Matrix,
        b: Matrix,
        d: Vec<Scalar>,
        k0: i64,
        k_n: i64,
    ) -> Result<Self, Error> {
        let m = pencil.cols();
        if a.cols() != m || b.cols() != m {
            return Err(Error::dim(
                "boundary value problem",
                format!(
                    "A has {} and B has {} columns for a state dimension of {m}",
                    a.cols(),
                    b.cols()
                ),
            ));
        }
        if a.rows() != b.rows() || a.rows() != d.len() {
            return Err(Error::dim(
                "boundary value problem",
                format!(
                    "A has {} rows, B has {} rows, D has length {}",
                    a.rows(),
                    b.rows(),
                    d.len()
                ),
            ));
        }
        if k_n <= k0 {
            return Err(Error::dim(
                "boundary value problem",
                format!("window [{k0}, {k_n}] must satisfy kN > k0"),
            ));
        }
        Ok(BvpProblem { pencil, a, b, d, k0, k_n })
    }

    /// Number of boundary equations.
    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// State dimension m.
    pub fn state_dim(&self) -> usize {
        self.pencil.cols()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsystemKind {
    RegularFinite,
    Nilpotent,
    ColumnMinimal,
    RowMinimal,
    ZeroBlock,
}

/// Closed-form behavior of one subsystem's state coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionRule {
    /// Z_k = W^(k-k0)·Z_{k0}: the finite regular dynamics.
    PowerPropagation,
    /// Z_k = 0 for all k: forced by nilpotent and row-minimal blocks.
    IdenticallyZero,
    /// Z_k is an arbitrary sequence: column-minimal and zero blocks
    /// constrain nothing (or less than they have unknowns).
    Arbitrary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystem {
    pub kind: SubsystemKind,
    /// Coordinate range within the transformed state Z (Y = Q·Z).
    pub state_range: Range<usize>,
    pub rule: SolutionRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemDecomposition {
    pub blocks: Vec<Subsystem>,
}

/// Splits the transformed state into its independent subsystems with their
/// solution rules. Finite blocks merge into one power-propagation range and
/// infinite blocks into one forced-zero range; each nonzero minimal index
/// keeps its own block; the zero block collects the unconstrained
/// coordinates.
pub fn decompose(
    pencil: &MatrixPencil,
    structure: &KroneckerStructure,
) -> SubsystemDecomposition {
    debug_assert_eq!(structure.q_transform.rows(), pencil.cols());
    let mut blocks = Vec::new();
    if structure.p > 0 {
        blocks.push(Subsystem {
            kind: SubsystemKind::RegularFinite,
            state_range: structure.q_partition.finite.clone(),
            rule: SolutionRule::PowerPropagation,
        });
    }
    if structure.q > 0 {
        blocks.push(Subsystem {
            kind: SubsystemKind::Nilpotent,
            state_range: structure.q_partition.infinite.clone(),
            rule: SolutionRule::IdenticallyZero,
        });
    }
    let mut offset = structure.q_partition.column_minimal.start;
    for &e in structure.cmi.iter().filter(|&&e| e > 0) {
        blocks.push(Subsystem {
            kind: SubsystemKind::ColumnMinimal,
            state_range: offset..offset + e + 1,
            rule: SolutionRule::Arbitrary,
        });
        offset += e + 1;
    }
    let mut offset = structure.q_partition.row_minimal.start;
    for &z in structure.rmi.iter().filter(|&&z| z > 0) {
        blocks.push(Subsystem {
            kind: SubsystemKind::RowMinimal,
            state_range: offset..offset + z,
            rule: SolutionRule::IdenticallyZero,
        });
        offset += z;
    }
    if structure.g() > 0 || structure.h() > 0 {
        blocks.push(Subsystem {
            kind: SubsystemKind::ZeroBlock,
            state_range: structure.q_partition.zero.clone(),
            rule: SolutionRule::Arbitrary,
        });
    }
    SubsystemDecomposition { blocks }
}

/// The boundary operator K = A·Qp + B·Qp·W^(kN-k0): the n x p matrix whose
/// linear system in Z_{k0} carries the entire boundary value problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryOperator {
    pub k: Matrix,
}

pub fn boundary_operator(
    problem: &BvpProblem,
    finite: &FiniteRegularPart,
) -> Result<BoundaryOperator, Error> {
    if finite.qp.rows() != problem.state_dim() {
        return Err(Error::dim(
            "boundary operator",
            format!(
                "finite basis has {} rows for state dimension {}",
                finite.qp.rows(),
                problem.state_dim()
            ),
        ));
    }
    let steps = (problem.k_n - problem.k0) as u64;
    let w_pow = matrix_power(&finite.w, steps)?;
    let k = problem.a.mul(&finite.qp)?.add(&problem.b.mul(&finite.qp)?.mul(&w_pow)?)?;
    Ok(BoundaryOperator { k })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// The pencil has column minimal indices; the solver declares the
    /// problem unsolvable and reports the unconstrained components.
    NoSolutionSingularStructure,
    /// D is outside the column span of K.
    NoSolutionBoundary,
    Unique,
    Infinite,
}

/// The one decision that produced the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiredCondition {
    ColumnMinimalIndicesPresent,
    BoundaryVectorOutsideColumnSpan,
    OperatorFullColumnRank,
    OperatorRankDeficient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub fired: FiredCondition,
    /// true when n = p and rank(K) = p: the square full-rank case in which
    /// an inconsistent-boundary branch can never fire (its preconditions
    /// are mutually exclusive), noted so the dead branch stays visible.
    pub vacuous_square_case_noted: bool,
}

/// A state coordinate range the equations leave arbitrary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComponent {
    pub kind: SubsystemKind,
    pub state_range: Range<usize>,
}

/// Affine description of all boundary states when K·Z = D has many
/// solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFamily {
    pub particular: Vec<Scalar>,
    pub kernel_basis: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
pub struct BvpResolution {
    pub classification: Classification,
    /// Z_{k0} when the classification is Unique.
    pub unique_state: Option<Vec<Scalar>>,
    /// All boundary states when the classification is Infinite.
    pub family: Option<SolutionFamily>,
    pub diagnostics: Diagnostics,
    /// Populated when column minimal indices exist: the coordinates the
    /// recurrence never constrains.
    pub free_components: Vec<FreeComponent>,
}

/// Classifies the problem. Decision order: column minimal indices present
/// (the right null space of the pencil is nontrivial) → no solution with
/// the free components reported; then D ∉ colspan(K) → no solution; then
/// rank(K) = p → unique; otherwise infinitely many.
pub fn classify_bvp(
    problem: &BvpProblem,
    structure: &KroneckerStructure,
    k: &BoundaryOperator,
) -> Result<BvpResolution, Error> {
    let p = structure.p;
    if k.k.rows() != problem.n() || k.k.cols() != p {
        return Err(Error::dim(
            "classification",
            format!(
                "operator is {}x{} but the problem has n = {} and p = {p}",
                k.k.rows(),
                k.k.cols(),
                problem.n()
            ),
        ));
    }
    if !structure.cmi.is_empty() {
        let decomposition = decompose(&problem.pencil, structure);
        let free_components = decomposition
            .blocks
            .into_iter()
            .filter(|b| b.rule == SolutionRule::Arbitrary)
            .map(|b| FreeComponent { kind: b.kind, state_range: b.state_range })
            .collect();
        return Ok(BvpResolution {
            classification: Classification::NoSolutionSingularStructure,
            unique_state: None,
            family: None,
            diagnostics: Diagnostics {
                fired: FiredCondition::ColumnMinimalIndicesPresent,
                vacuous_square_case_noted: false,
            },
            free_components,
        });
    }

    let rank_k = rank(&k.k);
    let vacuous_square_case_noted = problem.n() == p && rank_k == p;
    let (classification, unique_state, family, fired) = match solve_general(&k.k, &problem.d)? {
        SolutionSet::Empty => (
            Classification::NoSolutionBoundary,
            None,
            None,
            FiredCondition::BoundaryVectorOutsideColumnSpan,
        ),
        SolutionSet::Unique { particular } => (
            Classification::Unique,
            Some(particular),
            None,
            FiredCondition::OperatorFullColumnRank,
        ),
        SolutionSet::Affine { particular, kernel_basis } => (
            Classification::Infinite,
            None,
            Some(SolutionFamily { particular, kernel_basis }),
            FiredCondition::OperatorRankDeficient,
        ),
    };
    Ok(BvpResolution {
        classification,
        unique_state,
        family,
        diagnostics: Diagnostics { fired, vacuous_square_case_noted },
        free_components: Vec::new(),
    })
}

/// An exact trajectory Y_{k0}..Y_{kEnd}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub k0: i64,
    pub values: Vec<Vec<Scalar>>,
}

impl Trajectory {
    pub fn k_end(&self) -> i64 {
        self.k0 + self.values.len() as i64 - 1
    }

    pub fn value_at(&self, k: i64) -> Option<&Vec<Scalar>> {
        if k < self.k0 {
            return None;
        }
        self.values.get((k - self.k0) as usize)
    }
}

fn apply(m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    m.mul(&Matrix::column_vector(v.to_vec())).expect("conformable by construction").into_column()
}

/// Y_k = Qp·W^(k-k0)·Z for k = k0..kEnd, generated by repeated
/// multiplication so no power beyond kEnd is ever formed.
pub(crate) fn generate(finite: &FiniteRegularPart, z: &[Scalar], k0: i64, k_end: i64) -> Trajectory {
    let mut z_k = z.to_vec();
    let mut values = Vec::with_capacity((k_end - k0 + 1) as usize);
    for k in k0..=k_end {
        values.push(apply(&finite.qp, &z_k));
        if k < k_end {
            z_k = apply(&finite.w, &z_k);
        }
    }
    Trajectory { k0, values }
}

pub fn solve_unique(
    problem: &BvpProblem,
    finite: &FiniteRegularPart,
    resolution: &BvpResolution,
    k_end: i64,
) -> Result<Trajectory, Error> {
    let Some(z0) = resolution.unique_state.as_ref() else {
        return Err(Error::usage(
            "solve_unique",
            format!("classification is {:?}, not Unique", resolution.classification),
        ));
    };
    if k_end < problem.k0 {
        return Err(Error::usage(
            "solve_unique",
            format!("kEnd = {k_end} precedes k0 = {}", problem.k0),
        ));
    }
    Ok(generate(finite, z0, problem.k0, k_end))
}

/// One trajectory per parameter vector c: Z = particular + Σ c_i·kernel_i.
pub fn sample_family(
    problem: &BvpProblem,
    finite: &FiniteRegularPart,
    resolution: &BvpResolution,
    parameter_values: &[Vec<Scalar>],
    k_end: i64,
) -> Result<Vec<Trajectory>, Error> {
    let Some(family) = resolution.family.as_ref() else {
        return Err(Error::usage(
            "sample_family",
            format!("classification is {:?}, not Infinite", resolution.classification),
        ));
    };
    if k_end < problem.k0 {
        return Err(Error::usage(
            "sample_family",
            format!("kEnd = {k_end} precedes k0 = {}", problem.k0),
        ));
    }
    let kdim = family.kernel_basis.len();
    let mut out = Vec::with_capacity(parameter_values.len());
    for c in parameter_values {
        if c.len() != kdim {
            return Err(Error::dim(
                "sample_family",
                format!("parameter vector has length {} for kernel dimension {kdim}", c.len()),
            ));
        }
        let mut z = family.particular.clone();
        for (ci, basis_vec) in c.iter().zip(&family.kernel_basis) {
            for (zj, bj) in z.iter_mut().zip(basis_vec) {
                *zj = &*zj + &(ci * bj);
            }
        }
        out.push(generate(finite, &z, problem.k0, k_end));
    }
    Ok(out)
}

/// Direct substitution check: F·Y_{k+1} = G·Y_k for every consecutive pair
/// in the trajectory and A·Y_{k0} + B·Y_{kN} = D, all exact.
pub fn verify_trajectory(problem: &BvpProblem, trajectory: &Trajectory) -> Result<bool, Error> {
    if trajectory.k0 != problem.k0 || trajectory.k_end() < problem.k_n {
        return Err(Error::dim(
            "trajectory verification",
            format!(
                "trajectory spans [{}, {}] but the problem needs [{}, {}]",
                trajectory.k0,
                trajectory.k_end(),
                problem.k0,
                problem.k_n
            ),
        ));
    }
    for pair in trajectory.values.windows(2) {
        let lhs = apply(problem.pencil.f(), &pair[1]);
        let rhs = apply(problem.pencil.g(), &pair[0]);
        if lhs != rhs {
            return Ok(false);
        }
    }
    let y0 = trajectory.value_at(problem.k0).expect("span checked");
    let yn = trajectory.value_at(problem.k_n).expect("span checked");
    let mut boundary = apply(&problem.a, y0);
    let b_yn = apply(&problem.b, yn);
    for (lhs, rhs) in boundary.iter_mut().zip(b_yn) {
        *lhs = &*lhs + &rhs;
    }
    Ok(boundary == problem.d)
}
