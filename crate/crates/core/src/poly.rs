//! Univariate polynomials over the Gaussian rationals.
//!
//! Coefficients are stored in ascending order; the zero polynomial is the
//! empty coefficient list and every nonzero polynomial has a nonzero
//! leading coefficient. This module supplies the polynomial arithmetic
//! behind invariant-factor computation: exact division with remainder,
//! monic gcd, squarefree decomposition, and linear-root extraction.
//!
//! Root extraction is deliberately scoped: degree-1 factors always split;
//! rational roots of real-coefficient polynomials come from the rational
//! root theorem (after clearing denominators); rational roots of
//! complex-coefficient polynomials come from gcd of the real and imaginary
//! coefficient parts. Anything root-free under these rules stays symbolic,
//! and downstream code realizes it as a companion block, which preserves
//! every solution formula.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The variable s.
    pub fn s() -> Self {
        Poly::from_coeffs(vec![Scalar::zero(), Scalar::one()])
    }

    /// s - root, the monic linear polynomial vanishing at `root`.
    pub fn linear_from_root(root: &Scalar) -> Self {
        Poly::from_coeffs(vec![-root, Scalar::one()])
    }

    /// Ascending coefficients; trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_real)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &Scalar) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiply by s^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * &Scalar::from_integer(k as i64 + 1))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading().inv())
    }

    /// Euclidean division: self = q·d + r with deg r < deg d.
    /// The divisor must be nonzero; a zero divisor is a caller bug.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let d_deg = d.degree().unwrap();
        let d_lead = d.leading();
        let mut r = self.clone();
        let mut q = vec![Scalar::zero(); self.coeffs.len().saturating_sub(d_deg)];
        while let Some(r_deg) = r.degree() {
            if r_deg < d_deg {
                break;
            }
            let k = r_deg - d_deg;
            let c = &r.leading() / &d_lead;
            q[k] = &q[k] + &c;
            r = r.sub(&d.scale(&c).shift_up(k));
        }
        (Poly::from_coeffs(q), r)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut x = a.monic();
        let mut y = b.monic();
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            // Renormalizing each remainder keeps coefficient growth tame.
            y = r.monic();
        }
        x
    }

    /// Multiplicity of the root s = 0 (count of trailing zero
    /// coefficients); 0 for the zero polynomial.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Squarefree decomposition: self = lead · Π part_i ^ mult_i with the
    /// parts monic, squarefree, pairwise coprime; returned ascending by
    /// multiplicity. Constants decompose to an empty list.
    pub fn squarefree_parts(&self) -> Vec<(Poly, usize)> {
        if self.is_constant() {
            return Vec::new();
        }
        let f = self.monic();
        let g = Poly::gcd(&f, &f.derivative());
        if g.is_constant() {
            return vec![(f, 1)];
        }
        let mut out = Vec::new();
        let mut c = f.div_rem(&g).0;
        let mut g = g;
        let mut i = 1;
        while !c.is_constant() {
            let y = Poly::gcd(&g, &c);
            let z = c.div_rem(&y).0;
            if !z.is_constant() {
                out.push((z.monic(), i));
            }
            g = g.div_rem(&y).0;
            c = y;
            i += 1;
        }
        out
    }

    /// Extracts every linear factor this module's root search can find and
    /// returns the (root, multiplicity) list sorted by (re, im) together
    /// with the monic root-free remainder.
    pub fn linear_roots(&self) -> (Vec<(Scalar, usize)>, Poly) {
        if self.is_constant() {
            return (Vec::new(), if self.is_zero() { Poly::zero() } else { Poly::one() });
        }
        let mut f = self.monic();
        let mut roots: Vec<(Scalar, usize)> = Vec::new();

        let k = f.zero_root_multiplicity();
        if k > 0 {
            roots.push((Scalar::zero(), k));
            f = Poly::from_coeffs(f.coeffs[k..].to_vec());
        }

        loop {
            match f.degree() {
                None | Some(0) => break,
                Some(1) => {
                    // Monic s + c0: root is -c0.
                    let root = -f.coeff(0);
                    add_root(&mut roots, root, 1);
                    f = Poly::one();
                    break;
                }
                Some(_) => {}
            }
            let mut progressed = false;
            for cand in f.rational_root_candidates() {
                let mut mult = 0;
                loop {
                    let lin = Poly::linear_from_root(&cand);
                    let (q, r) = f.div_rem(&lin);
                    if !r.is_zero() {
                        break;
                    }
                    f = q;
                    mult += 1;
                }
                if mult > 0 {
                    add_root(&mut roots, cand, mult);
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
        roots.sort_by(|a, b| a.0.lex_cmp(&b.0));
        (roots, f.monic())
    }

    /// Candidate rational roots. For real coefficients these come from the
    /// rational root theorem on the denominator-cleared integer
    /// coefficients; for complex coefficients a rational root must be a
    /// common root of the real and imaginary coefficient parts, so
    /// candidates come from their gcd.
    fn rational_root_candidates(&self) -> Vec<Scalar> {
        if self.is_constant() {
            return Vec::new();
        }
        if !self.is_real() {
            let re = Poly::from_coeffs(
                self.coeffs.iter().map(|c| Scalar::from_rational(c.re.clone())).collect(),
            );
            let im = Poly::from_coeffs(
                self.coeffs.iter().map(|c| Scalar::from_rational(c.im.clone())).collect(),
            );
            let g = Poly::gcd(&re, &im);
            return if g.is_constant() { Vec::new() } else { g.rational_root_candidates() };
        }
        // Clear denominators to integer coefficients.
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.re.denom());
        }
        let lr = BigRational::from_integer(l);
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (&c.re * &lr).to_integer()).collect();
        let lead = ints.last().unwrap().clone();
        let Some(constant) = ints.iter().find(|v| !v.is_zero()).cloned() else {
            return Vec::new();
        };
        let mut cands: BTreeSet<Rational> = BTreeSet::new();
        for p in positive_divisors(&constant.abs()) {
            for q in positive_divisors(&lead.abs()) {
                let r = Rational::new(p.clone(), q);
                cands.insert(-&r);
                cands.insert(r);
            }
        }
        cands
            .into_iter()
            .map(Scalar::from_rational)
            .filter(|c| self.eval(c).is_zero())
            .collect()
    }
}

fn add_root(roots: &mut Vec<(Scalar, usize)>, root: Scalar, mult: usize) {
    if let Some(entry) = roots.iter_mut().find(|(r, _)| *r == root) {
        entry.1 += mult;
    } else {
        roots.push((root, mult));
    }
}

/// All positive divisors of |n| by trial-division factorization; n must be
/// nonzero. Exponential in the number of prime factors, which is fine at
/// the intended scale (constant terms of small elimination polynomials).
fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    assert!(!n.is_zero(), "divisors of zero");
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            let mut e = 0;
            while n.is_multiple_of(&p) {
                n /= &p;
                e += 1;
            }
            factors.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { BigInt::one() } else { BigInt::from(2) };
    }
    if n > BigInt::one() {
        factors.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}

impl fmt::Display for Poly {
    /// Algebraic form in descending powers, e.g. `s^2-3s+2`, `(0+1i)s-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_real() && c.re.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{sign}")?;
            }
            let coeff_text = if mag.is_real() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            match k {
                0 => write!(f, "{coeff_text}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{coeff_text}")?;
                    }
                    if k == 1 {
                        write!(f, "s")?;
                    } else {
                        write!(f, "s^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
