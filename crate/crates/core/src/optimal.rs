//! Optimal trajectory selections when the boundary value problem has no
//! solution (least squares, Tikhonov regularization) or infinitely many
//! (pseudoinverse, minimum norm, regularization).
//!
//! All selections are certified by algebraic identities in exact
//! arithmetic: normal equations for least squares, stationarity for the
//! regularized selection, the Penrose identities behind the pseudoinverse,
//! and row-space membership for minimum norm. The only floating point in
//! the module is the advisory spectral-radius estimate behind
//! `spectral_warning`, which never influences a computed value.

use num_traits::{ToPrimitive, Zero};

use crate::bvp::{BoundaryOperator, BvpProblem, BvpResolution, Classification, Trajectory};
use crate::error::Error;
use crate::linalg::{invert, pseudoinverse, rank};
use crate::matrix::Matrix;
use crate::pencil::FiniteRegularPart;
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};
use crate::smith::{invariant_factors, PolyMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimalMethod {
    LeastSquares,
    Regularized,
    Pseudoinverse,
    MinimumNorm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularizer {
    pub e: Matrix,
    pub theta: Rational,
}

/// A selected boundary state Ĉ with its exact residual; trajectories are
/// generated on demand as Ŷ_k = Qp·W^(k-k0)·Ĉ.
#[derive(Clone, Debug)]
pub struct OptimalSolution {
    pub method: OptimalMethod,
    pub state_c: Vec<Scalar>,
    /// ‖D - K·Ĉ‖₂², exact.
    pub residual_norm_squared: Rational,
    /// Present iff method = Regularized.
    pub regularizer: Option<Regularizer>,
    /// Advisory: true when the finite dynamics map has spectral radius
    /// at least 1, so the optimality statements' contraction hypothesis
    /// fails. Set by [`optimal_bvp`]; the standalone constructors leave it
    /// false because they never see the dynamics matrix.
    pub spectral_warning: bool,
}

impl OptimalSolution {
    /// Ŷ_k = Qp·W^(k-k0)·Ĉ for k = k0..kEnd.
    pub fn trajectory(
        &self,
        finite: &FiniteRegularPart,
        k0: i64,
        k_end: i64,
    ) -> Result<Trajectory, Error> {
        if k_end < k0 {
            return Err(Error::usage(
                "optimal trajectory",
                format!("kEnd = {k_end} precedes k0 = {k0}"),
            ));
        }
        if finite.qp.cols() != self.state_c.len() {
            return Err(Error::dim(
                "optimal trajectory",
                format!(
                    "state has length {} for a finite part of dimension {}",
                    self.state_c.len(),
                    finite.qp.cols()
                ),
            ));
        }
        Ok(crate::bvp::generate(finite, &self.state_c, k0, k_end))
    }
}

/// Exact residual data for a candidate boundary state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    /// ‖D - K·C‖₂², exact.
    pub residual_norm_squared: Rational,
    /// The attained boundary vector D̂ = K·C.
    pub boundary_attained: Vec<Scalar>,
}

pub fn residual_report(
    k: &BoundaryOperator,
    d: &[Scalar],
    c: &[Scalar],
) -> Result<ResidualReport, Error> {
    if k.k.rows() != d.len() || k.k.cols() != c.len() {
        return Err(Error::dim(
            "residual report",
            format!(
                "operator is {}x{} with |D| = {} and |C| = {}",
                k.k.rows(),
                k.k.cols(),
                d.len(),
                c.len()
            ),
        ));
    }
    let attained = k.k.mul(&Matrix::column_vector(c.to_vec()))?.into_column();
    let mut norm = Rational::zero();
    for (di, ai) in d.iter().zip(&attained) {
        norm += (di - ai).norm_sqr();
    }
    Ok(ResidualReport { residual_norm_squared: norm, boundary_attained: attained })
}

fn mat_vec(m: &Matrix, v: &[Scalar]) -> Result<Vec<Scalar>, Error> {
    Ok(m.mul(&Matrix::column_vector(v.to_vec()))?.into_column())
}

fn build(
    method: OptimalMethod,
    k: &BoundaryOperator,
    d: &[Scalar],
    state_c: Vec<Scalar>,
    regularizer: Option<Regularizer>,
) -> Result<OptimalSolution, Error> {
    let report = residual_report(k, d, &state_c)?;
    Ok(OptimalSolution {
        method,
        state_c,
        residual_norm_squared: report.residual_norm_squared,
        regularizer,
        spectral_warning: false,
    })
}

/// Ĉ = (K*K)⁻¹K*D: the unique minimizer of ‖D - K·C‖₂ for a full-column-
/// rank K with more rows than columns. The normal equations
/// K*(D - K·Ĉ) = 0 certify the output.
pub fn least_squares(k: &BoundaryOperator, d: &[Scalar]) -> Result<OptimalSolution, Error> {
    check_d(k, d)?;
    let (n, p) = (k.k.rows(), k.k.cols());
    if p >= n || rank(&k.k) != p {
        return Err(Error::precondition(
            "least_squares",
            "the boundary operator must be tall with full column rank; use the regularized method otherwise",
        ));
    }
    let k_star = k.k.conj_transpose();
    let gram = k_star.mul(&k.k)?;
    let inv = invert(&gram)?.expect("Gram matrix of a full-column-rank operator is invertible");
    let c = inv.mul(&k_star)?.mul(&Matrix::column_vector(d.to_vec()))?.into_column();
    debug_assert!({
        let residual: Vec<Scalar> = d
            .iter()
            .zip(mat_vec(&k.k, &c)?)
            .map(|(di, kci)| di - &kci)
            .collect();
        mat_vec(&k_star, &residual)?.iter().all(Scalar::is_zero)
    });
    build(OptimalMethod::LeastSquares, k, d, c, None)
}

/// Ĉ = (K*K + E*E)⁻¹K*D: the Tikhonov-regularized selection, defined for
/// any K once E makes the stationarity matrix invertible. The identity
/// (K*K + E*E)·Ĉ = K*D certifies the output.
pub fn regularized(
    k: &BoundaryOperator,
    d: &[Scalar],
    e: &Matrix,
    theta: Rational,
) -> Result<OptimalSolution, Error> {
    check_d(k, d)?;
    let p = k.k.cols();
    if e.cols() != p {
        return Err(Error::dim(
            "regularized",
            format!("E has {} columns but the operator has {p}", e.cols()),
        ));
    }
    let k_star = k.k.conj_transpose();
    let stationarity = k_star.mul(&k.k)?.add(&e.conj_transpose().mul(e)?)?;
    let Some(inv) = invert(&stationarity)? else {
        return Err(Error::precondition(
            "regularized",
            "K*K + E*E is singular; choose a regularizer E with trivial kernel intersection",
        ));
    };
    let c = inv.mul(&k_star)?.mul(&Matrix::column_vector(d.to_vec()))?.into_column();
    let regularizer = Some(Regularizer { e: e.clone(), theta });
    build(OptimalMethod::Regularized, k, d, c, regularizer)
}

/// Ĉ = K†·D. For consistent systems this is the minimum-norm solution;
/// for inconsistent ones the minimum-norm least-squares selection. Defined
/// for every K, including 0.
pub fn pinv_solution(k: &BoundaryOperator, d: &[Scalar]) -> Result<OptimalSolution, Error> {
    check_d(k, d)?;
    let c = pseudoinverse(&k.k).mul(&Matrix::column_vector(d.to_vec()))?.into_column();
    build(OptimalMethod::Pseudoinverse, k, d, c, None)
}

/// Ĉ = K*(K·K*)⁻¹D for a wide full-row-rank K: the smallest solution of
/// K·C = D, certified by K·Ĉ = D and Ĉ ∈ rowspace(K) (Ĉ = K*·y with
/// y = (K·K*)⁻¹D computed exactly).
pub fn min_norm(k: &BoundaryOperator, d: &[Scalar]) -> Result<OptimalSolution, Error> {
    check_d(k, d)?;
    let (n, p) = (k.k.rows(), k.k.cols());
    if n >= p || rank(&k.k) != n {
        return Err(Error::precondition(
            "min_norm",
            "the boundary operator must be wide with full row rank; use the pseudoinverse method otherwise",
        ));
    }
    let k_star = k.k.conj_transpose();
    let gram = k.k.mul(&k_star)?;
    let inv = invert(&gram)?.expect("Gram matrix of a full-row-rank operator is invertible");
    let y = inv.mul(&Matrix::column_vector(d.to_vec()))?;
    let c = k_star.mul(&y)?.into_column();
    debug_assert_eq!(mat_vec(&k.k, &c)?, d.to_vec());
    build(OptimalMethod::MinimumNorm, k, d, c, None)
}

fn check_d(k: &BoundaryOperator, d: &[Scalar]) -> Result<(), Error> {
    if k.k.rows() != d.len() {
        return Err(Error::dim(
            "optimal selection",
            format!("operator has {} rows but D has length {}", k.k.rows(), d.len()),
        ));
    }
    Ok(())
}

/// Caller-facing knobs for [`optimal_bvp`]: theta scales the default
/// regularizer E = theta·I, and an explicit E replaces it entirely.
#[derive(Clone, Debug, Default)]
pub struct OptimalOptions {
    pub theta: Option<Rational>,
    pub e: Option<Matrix>,
}

/// Method dispatch for a classified problem. Inconsistent boundaries take
/// least squares (full column rank) or regularization; infinite solution
/// sets take the pseudoinverse, minimum-norm, or regularized selection.
/// Anything else is a usage error. The result carries spectral_warning
/// computed from the finite dynamics map.
pub fn optimal_bvp(
    problem: &BvpProblem,
    finite: &FiniteRegularPart,
    resolution: &BvpResolution,
    method: OptimalMethod,
    options: &OptimalOptions,
) -> Result<OptimalSolution, Error> {
    match resolution.classification {
        Classification::Unique => {
            return Err(Error::usage(
                "optimal_bvp",
                "the problem has a unique solution; there is nothing to optimize",
            ));
        }
        Classification::NoSolutionSingularStructure => {
            return Err(Error::precondition(
                "optimal_bvp",
                "optimal selections require a pencil without column minimal indices",
            ));
        }
        Classification::NoSolutionBoundary => {
            if !matches!(method, OptimalMethod::LeastSquares | OptimalMethod::Regularized) {
                return Err(Error::usage(
                    "optimal_bvp",
                    format!(
                        "{method:?} does not apply to an inconsistent boundary; use LeastSquares or Regularized"
                    ),
                ));
            }
        }
        Classification::Infinite => {
            if !matches!(
                method,
                OptimalMethod::Pseudoinverse | OptimalMethod::MinimumNorm | OptimalMethod::Regularized
            ) {
                return Err(Error::usage(
                    "optimal_bvp",
                    format!(
                        "{method:?} does not apply to an infinite solution set; use Pseudoinverse, MinimumNorm, or Regularized"
                    ),
                ));
            }
        }
    }
    let k = crate::bvp::boundary_operator(problem, finite)?;
    let mut solution = match method {
        OptimalMethod::LeastSquares => least_squares(&k, &problem.d)?,
        OptimalMethod::Regularized => {
            let theta = options.theta.clone().unwrap_or_else(default_theta);
            let e = match &options.e {
                Some(e) => e.clone(),
                None => Matrix::identity(k.k.cols())
                    .scale(&Scalar::from_rational(theta.clone())),
            };
            regularized(&k, &problem.d, &e, theta)?
        }
        OptimalMethod::Pseudoinverse => pinv_solution(&k, &problem.d)?,
        OptimalMethod::MinimumNorm => min_norm(&k, &problem.d)?,
    };
    solution.spectral_warning = spectral_radius_at_least_one(&finite.w);
    Ok(solution)
}

pub fn default_theta() -> Rational {
    Rational::new(1.into(), 1000.into())
}

/// true when some eigenvalue of w has modulus >= 1. Exact for eigenvalues
/// of rational linear factors; root-free factors fall back to a floating
/// Durand-Kerner estimate (advisory, biased toward warning).
pub fn spectral_radius_at_least_one(w: &Matrix) -> bool {
    if w.rows() == 0 {
        return false;
    }
    let one = Rational::new(1.into(), 1.into());
    let factors = invariant_factors(&PolyMatrix::from_pencil(&Matrix::identity(w.rows()), w));
    for factor in factors {
        if factor.is_constant() {
            continue;
        }
        let (roots, rest) = factor.linear_roots();
        if roots.iter().any(|(root, _)| root.norm_sqr() >= one) {
            return true;
        }
        if let Some(deg) = rest.degree() {
            if deg >= 1 && float_root_modulus_max(&rest) >= 1.0 - 1e-9 {
                return true;
            }
        }
    }
    false
}

/// Largest root modulus of a monic polynomial, estimated by Durand-Kerner
/// iteration in f64. Used only for the advisory spectral warning.
fn float_root_modulus_max(poly: &Poly) -> f64 {
    let monic = poly.monic();
    let n = monic.degree().expect("nonconstant by caller check");
    let coeffs: Vec<(f64, f64)> = (0..=n).map(|k| scalar_to_f64(&monic.coeff(k))).collect();
    let eval = |x: (f64, f64)| -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = c_add(c_mul(acc, x), *c);
        }
        acc
    };
    // Standard non-real, non-unit-modulus starting points.
    let seed = (0.4, 0.9);
    let mut xs: Vec<(f64, f64)> = Vec::with_capacity(n);
    let mut cur = (1.0, 0.0);
    for _ in 0..n {
        cur = c_mul(cur, seed);
        xs.push(cur);
    }
    for _ in 0..200 {
        let mut next = xs.clone();
        for i in 0..n {
            let mut denom = (1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom = c_mul(denom, c_sub(xs[i], xs[j]));
                }
            }
            if c_abs(denom) > 1e-300 {
                next[i] = c_sub(xs[i], c_div(eval(xs[i]), denom));
            }
        }
        xs = next;
    }
    xs.iter().map(|&x| c_abs(x)).fold(0.0, f64::max)
}

fn scalar_to_f64(s: &Scalar) -> (f64, f64) {
    (s.re.to_f64().unwrap_or(f64::NAN), s.im.to_f64().unwrap_or(f64::NAN))
}

fn c_add(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 + b.0, a.1 + b.1)
}

fn c_sub(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}

fn c_mul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn c_div(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let denom = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / denom, (a.1 * b.0 - a.0 * b.1) / denom)
}

fn c_abs(a: (f64, f64)) -> f64 {
    a.0.hypot(a.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example2_pencil;
    use crate::bvp::{boundary_operator, classify_bvp, BvpProblem};
    use crate::linalg::column_space_contains;
    use crate::pencil::{finite_part, kronecker_structure, MatrixPencil};
    use num_traits::Zero;

    fn scalars(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_integer(x)).collect()
    }

    fn op(rows: &[&[i64]]) -> BoundaryOperator {
        BoundaryOperator { k: Matrix::from_i64(rows) }
    }

    fn rational(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// The rank-1 boundary operator and vector used by the infinite-family
    /// walkthrough: equal columns spanned by u = (0,1,0,1,-1).
    fn rank_one_pair() -> (BoundaryOperator, Vec<Scalar>) {
        (
            op(&[&[0, 0], &[1, 1], &[0, 0], &[1, 1], &[-1, -1]]),
            scalars(&[0, 1, 0, 1, -1]),
        )
    }

    #[test]
    fn least_squares_average() {
        let sol = least_squares(&op(&[&[1], &[1]]), &scalars(&[0, 2])).unwrap();
        assert_eq!(sol.state_c, scalars(&[1]));
        assert_eq!(sol.residual_norm_squared, rational(2, 1));
    }

    #[test]
    fn least_squares_consistent_has_zero_residual() {
        let sol =
            least_squares(&op(&[&[1, 0], &[0, 1], &[1, 1]]), &scalars(&[1, 2, 3])).unwrap();
        assert_eq!(sol.state_c, scalars(&[1, 2]));
        assert!(sol.residual_norm_squared.is_zero());
    }

    #[test]
    fn least_squares_hand_normal_equations() {
        let sol =
            least_squares(&op(&[&[1, 0], &[0, 1], &[1, 1]]), &scalars(&[1, 1, 1])).unwrap();
        assert_eq!(sol.state_c, vec![Scalar::ratio(2, 3), Scalar::ratio(2, 3)]);
    }

    #[test]
    fn least_squares_rejects_rank_deficiency_and_wide_shapes() {
        let (k, d) = rank_one_pair();
        assert!(matches!(least_squares(&k, &d), Err(Error::Precondition { .. })));
        assert!(matches!(
            least_squares(&op(&[&[1, 2]]), &scalars(&[1])),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn regularized_zero_operator() {
        let sol = regularized(
            &op(&[&[0]]),
            &scalars(&[5]),
            &Matrix::identity(1),
            rational(1, 1),
        )
        .unwrap();
        assert_eq!(sol.state_c, scalars(&[0]));
        assert_eq!(sol.residual_norm_squared, rational(25, 1));
        assert!(sol.regularizer.is_some());
    }

    #[test]
    fn regularized_scalar_stationarity() {
        let theta = rational(1, 10);
        let e = Matrix::identity(1).scale(&Scalar::ratio(1, 10));
        let sol = regularized(&op(&[&[1], &[1]]), &scalars(&[0, 2]), &e, theta).unwrap();
        assert_eq!(sol.state_c, vec![Scalar::from_rational(rational(200, 201))]);
    }

    #[test]
    fn regularized_rank_one_walkthrough() {
        // (K*K + theta^2 I)C = K*D with theta = 1/1000 gives both
        // components 3/(6 + 10^-6) = 3000000/6000001.
        let (k, d) = rank_one_pair();
        let theta = default_theta();
        let e = Matrix::identity(2).scale(&Scalar::from_rational(theta.clone()));
        let sol = regularized(&k, &d, &e, theta).unwrap();
        let expected = Scalar::from_rational(rational(3000000, 6000001));
        assert_eq!(sol.state_c, vec![expected.clone(), expected]);
        // Stationarity holds exactly.
        let k_star = k.k.conj_transpose();
        let lhs = k_star
            .mul(&k.k)
            .unwrap()
            .add(&sol.regularizer.as_ref().unwrap().e.conj_transpose().mul(&sol.regularizer.as_ref().unwrap().e).unwrap())
            .unwrap()
            .mul(&Matrix::column_vector(sol.state_c.clone()))
            .unwrap();
        let rhs = k_star.mul(&Matrix::column_vector(d.clone())).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn regularized_rejects_singular_stationarity() {
        assert!(matches!(
            regularized(&op(&[&[0]]), &scalars(&[1]), &Matrix::zeros(1, 1), rational(0, 1)),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn pseudoinverse_selection() {
        // Invertible K: plain solve.
        let sol = pinv_solution(&op(&[&[2, 0], &[0, 4]]), &scalars(&[2, 2])).unwrap();
        assert_eq!(sol.state_c, vec![Scalar::from_integer(1), Scalar::ratio(1, 2)]);
        // Rank-1 walkthrough: C = (1/2, 1/2) with zero residual.
        let (k, d) = rank_one_pair();
        let sol = pinv_solution(&k, &d).unwrap();
        assert_eq!(sol.state_c, vec![Scalar::ratio(1, 2), Scalar::ratio(1, 2)]);
        assert!(sol.residual_norm_squared.is_zero());
        // Zero operator: zero selection, full residual.
        let sol = pinv_solution(&op(&[&[0], &[0]]), &scalars(&[3, 4])).unwrap();
        assert_eq!(sol.state_c, scalars(&[0]));
        assert_eq!(sol.residual_norm_squared, rational(25, 1));
    }

    #[test]
    fn minimum_norm_selections() {
        let sol = min_norm(&op(&[&[1, 1]]), &scalars(&[2])).unwrap();
        assert_eq!(sol.state_c, scalars(&[1, 1]));
        let sol = min_norm(&op(&[&[1, 0, 0]]), &scalars(&[3])).unwrap();
        assert_eq!(sol.state_c, scalars(&[3, 0, 0]));
        let sol = min_norm(&op(&[&[1, 2]]), &scalars(&[5])).unwrap();
        assert_eq!(sol.state_c, scalars(&[1, 2]));
        assert!(sol.residual_norm_squared.is_zero());
    }

    #[test]
    fn minimum_norm_membership_and_preconditions() {
        let k = op(&[&[1, 2, 3], &[0, 1, 1]]);
        let d = scalars(&[6, 2]);
        let sol = min_norm(&k, &d).unwrap();
        // K·C = D and C lies in the row space (C = K*·y is solvable).
        let kc = k.k.mul(&Matrix::column_vector(sol.state_c.clone())).unwrap().into_column();
        assert_eq!(kc, d);
        assert!(column_space_contains(&k.k.conj_transpose(), &sol.state_c).unwrap());
        // Tall and rank-deficient shapes are rejected.
        assert!(matches!(
            min_norm(&op(&[&[1], &[1]]), &scalars(&[1, 1])),
            Err(Error::Precondition { .. })
        ));
        assert!(matches!(
            min_norm(&op(&[&[1, 1], &[2, 2]]), &scalars(&[1, 2])),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn residual_reports() {
        let k = op(&[&[1], &[1]]);
        let d = scalars(&[0, 2]);
        let r = residual_report(&k, &d, &scalars(&[1])).unwrap();
        assert_eq!(r.residual_norm_squared, rational(2, 1));
        assert_eq!(r.boundary_attained, scalars(&[1, 1]));
        let r = residual_report(&k, &d, &scalars(&[0])).unwrap();
        assert_eq!(r.residual_norm_squared, rational(4, 1));
        let consistent = residual_report(&op(&[&[1]]), &scalars(&[7]), &scalars(&[7])).unwrap();
        assert!(consistent.residual_norm_squared.is_zero());
    }

    #[test]
    fn spectral_radius_checks() {
        // diag(1, 2): radius 2.
        assert!(spectral_radius_at_least_one(&Matrix::from_i64(&[&[1, 0], &[0, 2]])));
        // Scaled rotation of modulus sqrt(1/2) < 1 with no rational
        // eigenvalues: exercises the float fallback.
        let half = Matrix::from_rows(vec![
            vec![Scalar::ratio(1, 2), Scalar::ratio(-1, 2)],
            vec![Scalar::ratio(1, 2), Scalar::ratio(1, 2)],
        ])
        .unwrap();
        assert!(!spectral_radius_at_least_one(&half));
        // Plain rotation: complex eigenvalues of modulus exactly 1.
        assert!(spectral_radius_at_least_one(&Matrix::from_i64(&[&[0, -1], &[1, 0]])));
        // Contraction.
        let c = Matrix::from_rows(vec![vec![Scalar::ratio(1, 3)]]).unwrap();
        assert!(!spectral_radius_at_least_one(&c));
        // Empty dynamics.
        assert!(!spectral_radius_at_least_one(&Matrix::zeros(0, 0)));
    }


    #[test]
    fn dispatch_on_infinite_problem() {
        // Boundary pair that collapses the finite directions onto one
        // column: infinitely many solutions, dispatched to pinv.
        let problem = BvpProblem::new(
            example2_pencil(),
            Matrix::from_i64(&[
                &[1, 0, 0, 0, 0],
                &[1, 1, 0, 0, 0],
                &[1, 0, 0, 0, 0],
                &[1, 1, 0, 1, 1],
                &[1, -1, 0, 2, 2],
            ]),
            Matrix::zeros(5, 5),
            scalars(&[0, 1, 0, 1, -1]),
            0,
            100,
        )
        .unwrap();
        let s = kronecker_structure(&problem.pencil).unwrap();
        let finite = finite_part(&s, &problem.pencil).unwrap();
        let k = boundary_operator(&problem, &finite).unwrap();
        let res = classify_bvp(&problem, &s, &k).unwrap();
        assert_eq!(res.classification, Classification::Infinite);

        let sol = optimal_bvp(&problem, &finite, &res, OptimalMethod::Pseudoinverse, &OptimalOptions::default())
            .unwrap();
        assert_eq!(sol.state_c, vec![Scalar::ratio(1, 2), Scalar::ratio(1, 2)]);
        assert!(sol.residual_norm_squared.is_zero());
        // W = diag(1,2) violates the contraction hypothesis.
        assert!(sol.spectral_warning);

        // Regularized goes through with the default theta and satisfies
        // stationarity exactly.
        let sol = optimal_bvp(&problem, &finite, &res, OptimalMethod::Regularized, &OptimalOptions::default())
            .unwrap();
        let expected = Scalar::from_rational(rational(3000000, 6000001));
        assert_eq!(sol.state_c, vec![expected.clone(), expected]);

        // Least squares is the wrong tool for an infinite solution set.
        assert!(matches!(
            optimal_bvp(&problem, &finite, &res, OptimalMethod::LeastSquares, &OptimalOptions::default()),
            Err(Error::Usage { .. })
        ));
    }

    #[test]
    fn dispatch_on_unique_problem_is_an_error() {
        let problem = BvpProblem::new(
            example2_pencil(),
            Matrix::identity(5),
            Matrix::zeros(5, 5),
            scalars(&[0, -1, 0, 1, -1]),
            0,
            100,
        )
        .unwrap();
        let s = kronecker_structure(&problem.pencil).unwrap();
        let finite = finite_part(&s, &problem.pencil).unwrap();
        let k = boundary_operator(&problem, &finite).unwrap();
        let res = classify_bvp(&problem, &s, &k).unwrap();
        assert!(matches!(
            optimal_bvp(&problem, &finite, &res, OptimalMethod::Pseudoinverse, &OptimalOptions::default()),
            Err(Error::Usage { .. })
        ));
    }

    #[test]
    fn dispatch_on_inconsistent_boundary() {
        // First coordinate of every trajectory is 0; demanding 1 there
        // leaves least squares as the sanctioned method.
        let problem = BvpProblem::new(
            example2_pencil(),
            Matrix::identity(5),
            Matrix::zeros(5, 5),
            scalars(&[1, 0, 0, 0, 0]),
            0,
            10,
        )
        .unwrap();
        let s = kronecker_structure(&problem.pencil).unwrap();
        let finite = finite_part(&s, &problem.pencil).unwrap();
        let k = boundary_operator(&problem, &finite).unwrap();
        let res = classify_bvp(&problem, &s, &k).unwrap();
        assert_eq!(res.classification, Classification::NoSolutionBoundary);
        let sol = optimal_bvp(&problem, &finite, &res, OptimalMethod::LeastSquares, &OptimalOptions::default())
            .unwrap();
        // Normal equations certified inside; residual must be positive.
        assert!(!sol.residual_norm_squared.is_zero());
        assert!(sol.spectral_warning);
        assert!(matches!(
            optimal_bvp(&problem, &finite, &res, OptimalMethod::MinimumNorm, &OptimalOptions::default()),
            Err(Error::Usage { .. })
        ));
    }

    #[test]
    fn optimal_trajectory_generation() {
        let (k, d) = rank_one_pair();
        let sol = pinv_solution(&k, &d).unwrap();
        let pencil = example2_pencil();
        let s = kronecker_structure(&pencil).unwrap();
        let finite = finite_part(&s, &pencil).unwrap();
        let traj = sol.trajectory(&finite, 0, 3).unwrap();
        assert_eq!(traj.values.len(), 4);
        // Y_0 = Qp·(1/2,1/2) = (0, 1, 0, 1/2, -1/2).
        assert_eq!(
            traj.values[0],
            vec![
                Scalar::from_integer(0),
                Scalar::from_integer(1),
                Scalar::from_integer(0),
                Scalar::ratio(1, 2),
                Scalar::ratio(-1, 2)
            ]
        );
        assert!(sol.trajectory(&finite, 0, -1).is_err());
    }
}
