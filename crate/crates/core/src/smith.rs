//! Smith normal form of polynomial matrices over the Gaussian rationals.
//!
//! `invariant_factors` reduces a matrix of polynomials by elementary row
//! and column operations to diagonal form d_1 | d_2 | ... | d_rho (monic,
//! each dividing the next), where rho is the rank over the rational
//! function field. The transforms are unimodular, so the diagonal is a
//! complete invariant of equivalence; this is the engine for reading
//! elementary divisors off a pencil:
//!
//! - finite divisors of s·F - G are the irreducible-power factors of its
//!   nonconstant invariant factors;
//! - infinite divisor degrees of s·F - G are the multiplicities of the
//!   root t = 0 in the invariant factors of the reversed pencil t·G - F.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Dense matrix of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    /// The pencil s·F - G as a polynomial matrix.
    pub fn from_pencil(f: &Matrix, g: &Matrix) -> Self {
        assert_eq!((f.rows(), f.cols()), (g.rows(), g.cols()), "pencil dimension mismatch");
        let mut out = PolyMatrix::zeros(f.rows(), f.cols());
        for i in 0..f.rows() {
            for j in 0..f.cols() {
                out.set(i, j, Poly::from_coeffs(vec![-&g[(i, j)], f[(i, j)].clone()]));
            }
        }
        out
    }

    /// The reversed pencil t·G - F, whose behavior at t = 0 encodes the
    /// structure of s·F - G at infinity.
    pub fn from_reversed_pencil(f: &Matrix, g: &Matrix) -> Self {
        PolyMatrix::from_pencil(g, f)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.data[i * self.cols + j] = v;
    }

    /// Evaluate entrywise at a scalar point.
    pub fn eval(&self, at: &Scalar) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.get(i, j).eval(at);
            }
        }
        out
    }
}

/// Monic invariant factors d_1 | d_2 | ... | d_rho of the matrix; their
/// count rho is the rank over the rational function field. Constant
/// factors are reported as 1.
pub fn invariant_factors(m: &PolyMatrix) -> Vec<Poly> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<Poly>> = (0..rows)
        .map(|i| (0..cols).map(|j| m.get(i, j).clone()).collect())
        .collect();
    for row in a.iter_mut() {
        normalize_row(row);
    }

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_degree_pivot(&a, t) else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);

        loop {
            if clear_column(&mut a, t) || clear_row(&mut a, t) {
                // A division left a lower-degree remainder which is now the
                // pivot; reduce again.
                continue;
            }
            if fix_divisibility(&mut a, t) {
                continue;
            }
            break;
        }
        a[t][t] = a[t][t].monic();
        t += 1;
    }

    // Divisibility d_k | d_{k+1} is forced by the sweep; assert it because
    // every downstream structure count depends on it.
    for k in 1..t {
        let (prev, cur) = (&a[k - 1][k - 1], &a[k][k]);
        assert!(prev.divides(cur), "invariant factor chain broken at {k}");
    }
    (0..t).map(|k| a[k][k].clone()).collect()
}

/// Accumulates the rational content (numerator gcd over denominator lcm)
/// of a coefficient into `acc`.
fn fold_content(acc: &mut Option<(BigInt, BigInt)>, r: &BigRational) {
    if r.is_zero() {
        return;
    }
    let num = r.numer().abs();
    let den = r.denom().clone();
    match acc {
        None => *acc = Some((num, den)),
        Some((n, d)) => {
            *n = n.gcd(&num);
            *d = d.lcm(&den);
        }
    }
}

/// Reciprocal of the joint rational content of the given polynomials, or
/// None when they are all zero.
fn content_reciprocal(polys: &[&Poly]) -> Option<Scalar> {
    let mut acc: Option<(BigInt, BigInt)> = None;
    for p in polys {
        for c in p.coeffs() {
            fold_content(&mut acc, &c.re);
            fold_content(&mut acc, &c.im);
        }
    }
    let (num, den) = acc?;
    Some(Scalar::from_rational(BigRational::new(den, num)))
}

/// Divides a row by its rational content. Scaling a row by a nonzero
/// constant is unimodular over the polynomial ring, so invariant factors
/// are unchanged; without this the elimination's coefficients swell
/// exponentially.
fn normalize_row(row: &mut [Poly]) {
    let refs: Vec<&Poly> = row.iter().collect();
    if let Some(scale) = content_reciprocal(&refs) {
        for p in row.iter_mut() {
            *p = p.scale(&scale);
        }
    }
}

/// Column analogue of [`normalize_row`].
fn normalize_col(a: &mut [Vec<Poly>], j: usize) {
    let refs: Vec<&Poly> = a.iter().map(|row| &row[j]).collect();
    if let Some(scale) = content_reciprocal(&refs) {
        for row in a.iter_mut() {
            row[j] = row[j].scale(&scale);
        }
    }
}

fn min_degree_pivot(a: &[Vec<Poly>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if let Some(d) = v.degree() {
                if best.map_or(true, |(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn swap_cols(a: &mut [Vec<Poly>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// Eliminates column t below the pivot. Returns true when a nonzero
/// remainder was swapped into the pivot position (degree dropped).
fn clear_column(a: &mut Vec<Vec<Poly>>, t: usize) -> bool {
    let rows = a.len();
    for i in (t + 1)..rows {
        if a[i][t].is_zero() {
            continue;
        }
        let (q, r) = a[i][t].div_rem(&a[t][t]);
        let cols = a[i].len();
        for j in t..cols {
            let sub = q.mul(&a[t][j]);
            a[i][j] = a[i][j].sub(&sub);
        }
        normalize_row(&mut a[i]);
        if !r.is_zero() {
            a.swap(i, t);
            return true;
        }
    }
    false
}

/// Eliminates row t right of the pivot; column t below the pivot is
/// already zero, so these column operations leave it zero.
fn clear_row(a: &mut Vec<Vec<Poly>>, t: usize) -> bool {
    let rows = a.len();
    let cols = a[0].len();
    for j in (t + 1)..cols {
        if a[t][j].is_zero() {
            continue;
        }
        let (q, r) = a[t][j].div_rem(&a[t][t]);
        for i in t..rows {
            let sub = q.mul(&a[i][t]);
            a[i][j] = a[i][j].sub(&sub);
        }
        normalize_col(a, j);
        if !r.is_zero() {
            swap_cols(a, t, j);
            return true;
        }
    }
    false
}

/// When some trailing entry is not divisible by the pivot, folds its row
/// into row t so the next reduction pass shrinks the pivot degree.
/// Returns true when a fix was applied.
fn fix_divisibility(a: &mut [Vec<Poly>], t: usize) -> bool {
    let rows = a.len();
    let cols = a[0].len();
    for i in (t + 1)..rows {
        for j in (t + 1)..cols {
            if !a[t][t].divides(&a[i][j]) {
                for jj in t..cols {
                    let add = a[i][jj].clone();
                    a[t][jj] = a[t][jj].add(&add);
                }
                normalize_row(&mut a[t]);
                return true;
            }
        }
    }
    false
}
