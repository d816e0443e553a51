//! Exact dense linear algebra: rank, solve, nullspace, powers, pseudoinverse.
//!
//! Every decision procedure here reduces to fraction-free Gaussian
//! elimination (Bareiss one-step scheme) over the Gaussian integers. Rows
//! are first scaled by the least common multiple of their entry
//! denominators, which changes neither rank nor solution sets; elimination
//! then stays in big integers, and the Bareiss update
//!
//! ```text
//! a[i][j] <- (piv * a[i][j] - a[i][c] * a[r][j]) / prev
//! ```
//!
//! divides exactly by Sylvester's determinant identity, keeping entry
//! growth polynomial instead of exponential. Rank decisions are exact zero
//! tests on big integers; there are no tolerances anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Solutions of a linear system M x = b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionSet {
    /// b is outside the column space of M.
    Empty,
    /// Exactly one solution.
    Unique { particular: Vec<Scalar> },
    /// particular + span(kernel_basis); the basis is linearly independent
    /// and nonempty.
    Affine { particular: Vec<Scalar>, kernel_basis: Vec<Vec<Scalar>> },
}

impl SolutionSet {
    pub fn particular(&self) -> Option<&[Scalar]> {
        match self {
            SolutionSet::Empty => None,
            SolutionSet::Unique { particular } => Some(particular),
            SolutionSet::Affine { particular, .. } => Some(particular),
        }
    }

    pub fn kernel_basis(&self) -> &[Vec<Scalar>] {
        match self {
            SolutionSet::Affine { kernel_basis, .. } => kernel_basis,
            _ => &[],
        }
    }
}

/// Gaussian integer a + b·i. The elimination working type.
#[derive(Clone, PartialEq, Eq)]
struct Gi {
    re: BigInt,
    im: BigInt,
}

impl Gi {
    fn zero() -> Self {
        Gi { re: BigInt::zero(), im: BigInt::zero() }
    }

    fn one() -> Self {
        Gi { re: BigInt::one(), im: BigInt::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &Gi) -> Gi {
        Gi {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &Gi) -> Gi {
        Gi { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    /// Exact quotient self / d in the Gaussian integers. The Bareiss scheme
    /// guarantees divisibility; a nonzero remainder means the elimination
    /// state is corrupt, which is unrecoverable.
    fn exact_div(&self, d: &Gi) -> Gi {
        let n = &d.re * &d.re + &d.im * &d.im;
        assert!(!n.is_zero(), "exact_div: zero divisor");
        let num = self.mul(&Gi { re: d.re.clone(), im: -d.im.clone() });
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        assert!(rr.is_zero() && ri.is_zero(), "exact_div: inexact quotient; elimination state corrupt");
        Gi { re: qr, im: qi }
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::new(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        )
    }
}

/// Row echelon form produced by fraction-free elimination.
struct Echelon {
    rows: Vec<Vec<Gi>>,
    /// Pivot column of each pivot row, strictly increasing; length = rank.
    pivots: Vec<usize>,
}

impl Echelon {
    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn is_pivot_col(&self, c: usize) -> bool {
        self.pivots.binary_search(&c).is_ok()
    }
}

/// Scales each row to Gaussian integers by its denominator lcm, then runs
/// Bareiss elimination with first-nonzero row pivoting and column skipping.
fn echelon(m: &Matrix) -> Echelon {
    let (nrows, ncols) = (m.rows(), m.cols());
    let mut rows: Vec<Vec<Gi>> = (0..nrows)
        .map(|i| {
            let mut l = BigInt::one();
            for v in m.row(i) {
                l = l.lcm(v.re.denom());
                l = l.lcm(v.im.denom());
            }
            let lr = BigRational::from_integer(l);
            m.row(i)
                .iter()
                .map(|v| {
                    let re = &v.re * &lr;
                    let im = &v.im * &lr;
                    debug_assert!(re.is_integer() && im.is_integer());
                    Gi { re: re.to_integer(), im: im.to_integer() }
                })
                .collect()
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prev = Gi::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (top, below) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = pivot_row[c].clone();
        for row in below.iter_mut() {
            if row[c].is_zero() {
                // Still rescale so the whole row stays a minor of fixed
                // order; otherwise later exact divisions can fail.
                for j in (c + 1)..ncols {
                    if !row[j].is_zero() {
                        row[j] = piv.mul(&row[j]).exact_div(&prev);
                    }
                }
                continue;
            }
            let lead = row[c].clone();
            for j in (c + 1)..ncols {
                let t = piv.mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                row[j] = t.exact_div(&prev);
            }
            row[c] = Gi::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots }
}

/// Back-substitution over the exact rationals on an echelon whose pivots
/// all lie in the first `ncols` columns. Free variables are zero except the
/// optional `free_one` column, which is set to 1; `rhs_col` selects an
/// augmented right-hand-side column (absent for homogeneous systems).
fn back_substitute(
    ech: &Echelon,
    ncols: usize,
    rhs_col: Option<usize>,
    free_one: Option<usize>,
) -> Vec<Scalar> {
    let mut x = vec![Scalar::zero(); ncols];
    if let Some(f) = free_one {
        x[f] = Scalar::one();
    }
    for idx in (0..ech.rank()).rev() {
        let c = ech.pivots[idx];
        debug_assert!(c < ncols);
        let row = &ech.rows[idx];
        let mut acc = match rhs_col {
            Some(b) => row[b].to_scalar(),
            None => Scalar::zero(),
        };
        for j in (c + 1)..ncols {
            if !x[j].is_zero() && !row[j].is_zero() {
                acc = &acc - &(&row[j].to_scalar() * &x[j]);
            }
        }
        x[c] = &acc / &row[c].to_scalar();
    }
    x
}

fn kernel_from_echelon(ech: &Echelon, ncols: usize) -> Vec<Vec<Scalar>> {
    (0..ncols)
        .filter(|&c| !ech.is_pivot_col(c))
        .map(|f| back_substitute(ech, ncols, None, Some(f)))
        .collect()
}

/// Exact rank over the Gaussian rationals.
pub fn rank(m: &Matrix) -> usize {
    echelon(m).rank()
}

/// Complete solution set of M x = b.
pub fn solve_general(m: &Matrix, b: &[Scalar]) -> Result<SolutionSet, Error> {
    if b.len() != m.rows() {
        return Err(Error::dim(
            "linear solve",
            format!("matrix has {} rows but right-hand side has {} entries", m.rows(), b.len()),
        ));
    }
    let aug = m.hstack(&Matrix::column_vector(b.to_vec()))?;
    let ech = echelon(&aug);
    let ncols = m.cols();
    if ech.pivots.iter().any(|&c| c >= ncols) {
        return Ok(SolutionSet::Empty);
    }
    let particular = back_substitute(&ech, ncols, Some(ncols), None);
    debug_assert!(check_product(m, &particular, b));
    if ech.rank() == ncols {
        Ok(SolutionSet::Unique { particular })
    } else {
        Ok(SolutionSet::Affine { particular, kernel_basis: kernel_from_echelon(&ech, ncols) })
    }
}

fn check_product(m: &Matrix, x: &[Scalar], b: &[Scalar]) -> bool {
    let mx = m.mul(&Matrix::column_vector(x.to_vec())).unwrap();
    mx.into_column() == b
}

/// Basis of {x : M x = 0}; length = cols - rank(M).
pub fn nullspace_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    let ech = echelon(m);
    kernel_from_echelon(&ech, m.cols())
}

/// true iff b lies in the column space of M, i.e. rank([M | b]) = rank(M).
pub fn column_space_contains(m: &Matrix, b: &[Scalar]) -> Result<bool, Error> {
    if b.len() != m.rows() {
        return Err(Error::dim(
            "column space test",
            format!("matrix has {} rows but vector has {} entries", m.rows(), b.len()),
        ));
    }
    let aug = m.hstack(&Matrix::column_vector(b.to_vec()))?;
    let ech = echelon(&aug);
    Ok(ech.pivots.iter().all(|&c| c < m.cols()))
}

/// Particular solution X of M X = rhs with free variables zero, or None
/// when some right-hand-side column is outside the column space.
pub fn solve_matrix(m: &Matrix, rhs: &Matrix) -> Result<Option<Matrix>, Error> {
    if rhs.rows() != m.rows() {
        return Err(Error::dim(
            "matrix solve",
            format!("matrix has {} rows but right-hand side has {}", m.rows(), rhs.rows()),
        ));
    }
    let aug = m.hstack(rhs)?;
    let ech = echelon(&aug);
    let ncols = m.cols();
    if ech.pivots.iter().any(|&c| c >= ncols) {
        return Ok(None);
    }
    let mut x = Matrix::zeros(ncols, rhs.cols());
    for j in 0..rhs.cols() {
        let col = back_substitute(&ech, ncols, Some(ncols + j), None);
        for (i, v) in col.into_iter().enumerate() {
            x[(i, j)] = v;
        }
    }
    Ok(Some(x))
}

/// Inverse of a square matrix; None when singular.
pub fn invert(m: &Matrix) -> Result<Option<Matrix>, Error> {
    if !m.is_square() {
        return Err(Error::dim("matrix inverse", format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    let aug = m.hstack(&Matrix::identity(n))?;
    let ech = echelon(&aug);
    if ech.rank() != n || ech.pivots.iter().any(|&c| c >= n) {
        return Ok(None);
    }
    let mut inv = Matrix::zeros(n, n);
    for j in 0..n {
        let col = back_substitute(&ech, n, Some(n + j), None);
        for (i, v) in col.into_iter().enumerate() {
            inv[(i, j)] = v;
        }
    }
    Ok(Some(inv))
}

/// Exact determinant of a square matrix.
///
/// Rows are scaled to Gaussian integers by their denominator lcms (the
/// product of the scales divides back out at the end), then one-step
/// Bareiss elimination runs to completion: the final pivot equals the
/// determinant of the integer matrix up to the parity of the row swaps.
/// A pivot column with no nonzero candidate short-circuits to zero.
pub fn determinant(m: &Matrix) -> Result<Scalar, Error> {
    if !m.is_square() {
        return Err(Error::dim("determinant", format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Scalar::one());
    }
    let mut scale = BigInt::one();
    let mut rows: Vec<Vec<Gi>> = (0..n)
        .map(|i| {
            let mut l = BigInt::one();
            for v in m.row(i) {
                l = l.lcm(v.re.denom());
                l = l.lcm(v.im.denom());
            }
            scale *= &l;
            let lr = BigRational::from_integer(l);
            m.row(i)
                .iter()
                .map(|v| {
                    let re = &v.re * &lr;
                    let im = &v.im * &lr;
                    debug_assert!(re.is_integer() && im.is_integer());
                    Gi { re: re.to_integer(), im: im.to_integer() }
                })
                .collect()
        })
        .collect();

    let mut prev = Gi::one();
    let mut negate = false;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
            return Ok(Scalar::zero());
        };
        if p != c {
            rows.swap(c, p);
            negate = !negate;
        }
        let (top, below) = rows.split_at_mut(c + 1);
        let pivot_row = &top[c];
        let piv = pivot_row[c].clone();
        for row in below.iter_mut() {
            let lead = row[c].clone();
            for j in (c + 1)..n {
                let t = piv.mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                row[j] = t.exact_div(&prev);
            }
            row[c] = Gi::zero();
        }
        prev = piv;
    }
    let sign = if negate { -BigInt::one() } else { BigInt::one() };
    Ok(&prev.to_scalar() * &Scalar::from_rational(BigRational::new(sign, scale)))
}

/// Exact M^e by binary exponentiation; M^0 is the identity.
pub fn matrix_power(m: &Matrix, e: u64) -> Result<Matrix, Error> {
    if !m.is_square() {
        return Err(Error::dim("matrix power", format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let mut result = Matrix::identity(m.rows());
    let mut base = m.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base).expect("square product");
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base).expect("square product");
        }
    }
    Ok(result)
}

/// Moore-Penrose pseudoinverse, exact.
///
/// Uses a rank factorization K = C R with C the pivot columns of K (full
/// column rank) and R the coordinates of K's columns in that basis (full
/// row rank); then K† = R* (R R*)^{-1} (C* C)^{-1} C*, which satisfies all
/// four Penrose identities. The two Gram matrices are invertible because C
/// and R* have full column rank over the complex rationals.
pub fn pseudoinverse(k: &Matrix) -> Matrix {
    let ech = echelon(k);
    let r = ech.rank();
    if r == 0 {
        return Matrix::zeros(k.cols(), k.rows());
    }
    let c = k.select_columns(&ech.pivots);
    let rr = solve_matrix(&c, k)
        .expect("dimensions match by construction")
        .expect("pivot columns span the column space");
    let c_star = c.conj_transpose();
    let r_star = rr.conj_transpose();
    let gram_c = invert(&c_star.mul(&c).unwrap())
        .unwrap()
        .expect("C has full column rank");
    let gram_r = invert(&rr.mul(&r_star).unwrap())
        .unwrap()
        .expect("R has full row rank");
    r_star.mul(&gram_r).unwrap().mul(&gram_c).unwrap().mul(&c_star).unwrap()
}
