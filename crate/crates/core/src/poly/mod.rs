//! Sparse multivariate polynomials over a generic scalar.
//!
//! A [`Poly`] is a map from exponent vectors to nonzero coefficients. Terms
//! are kept in a `BTreeMap` under graded-lexicographic order, so equality is
//! structural and printing is deterministic (highest term first).

mod eps;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;
use thiserror::Error;

use crate::scalar::{Scalar, ToFloat};
use crate::xlinalg::Matrix;

pub use eps::EpsForm;
pub use parse::{parse_form, parse_form_infer, ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("substitution matrix is {rows}x{cols}, expected {arity}x{arity}")]
    DimensionMismatch { rows: usize, cols: usize, arity: usize },
    #[error("point has {found} coordinates, expected {arity}")]
    PointLength { found: usize, arity: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, PolyError>;

/// Exponent vector of a monomial; its length is the ambient arity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, index: usize) -> Self {
        let mut e = vec![0; arity];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// first variable, and so on.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `degree` in `arity` variables, highest first.
pub fn monomials_of_degree(arity: usize, degree: u32) -> Vec<Monomial> {
    fn rec(arity: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == arity {
            prefix.push(remaining);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(arity, remaining - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if arity == 0 {
        return out;
    }
    rec(arity, degree, &mut Vec::with_capacity(arity), &mut out);
    out
}

/// Sparse polynomial in `arity` variables.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<T> {
    arity: usize,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> Poly<T> {
    pub fn zero(arity: usize) -> Self {
        Poly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: T) -> Self {
        Self::monomial(Monomial::one(arity), c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, T::one())
    }

    /// The coordinate function `x_index`.
    pub fn var(arity: usize, index: usize) -> Self {
        Self::monomial(Monomial::var(arity, index), T::one())
    }

    pub fn monomial(m: Monomial, c: T) -> Self {
        let mut p = Self::zero(m.arity());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Monomial, T)>) -> Self {
        let mut p = Self::zero(arity);
        for (m, c) in terms {
            assert_eq!(m.arity(), arity, "exponent vector length must equal arity");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from highest to lowest in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeff_of(&self, exponents: &[u32]) -> T {
        self.coeff(&Monomial(exponents.to_vec()))
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        if self.is_zero() || !self.is_homogeneous() {
            None
        } else {
            self.degree()
        }
    }

    /// Constant term value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<T> {
        match self.degree() {
            None => Some(T::zero()),
            Some(0) => Some(self.coeff(&Monomial::one(self.arity))),
            Some(_) => None,
        }
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::from_terms(self.arity, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map_coeffs(|c| c.clone() * s.clone())
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(PolyError::ArityMismatch {
                left: self.arity,
                right: other.arity,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.arity);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative with respect to `x_index`.
    pub fn derivative(&self, index: usize) -> Result<Self> {
        if index >= self.arity {
            return Err(PolyError::IndexOutOfRange {
                index,
                arity: self.arity,
            });
        }
        Ok(self.derivative_unchecked(index))
    }

    fn derivative_unchecked(&self, index: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.0[index];
            if e == 0 {
                return None;
            }
            let mut exps = m.0.clone();
            exps[index] -= 1;
            Some((Monomial(exps), c.clone() * T::from_i64(i64::from(e))))
        });
        Self::from_terms(self.arity, terms)
    }

    /// Iterated partial derivative; the order of `indices` is irrelevant.
    pub fn partial(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&index) = indices.iter().find(|&&i| i >= self.arity) {
            return Err(PolyError::IndexOutOfRange {
                index,
                arity: self.arity,
            });
        }
        Ok(indices.iter().fold(self.clone(), |acc, &i| acc.derivative_unchecked(i)))
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.arity).map(|i| self.derivative_unchecked(i)).collect()
    }

    /// Exact evaluation at a point with coordinates in the coefficient scalar.
    pub fn evaluate(&self, point: &[T]) -> Result<T> {
        if point.len() != self.arity {
            return Err(PolyError::PointLength {
                found: point.len(),
                arity: self.arity,
            });
        }
        let max_exp: Vec<u32> = (0..self.arity)
            .map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
            .collect();
        // powers[i][e] = point[i]^e
        let powers: Vec<Vec<T>> = point
            .iter()
            .zip(&max_exp)
            .map(|(x, &top)| {
                let mut v = Vec::with_capacity(top as usize + 1);
                v.push(T::one());
                for e in 1..=top as usize {
                    let next = v[e - 1].clone() * x.clone();
                    v.push(next);
                }
                v
            })
            .collect();
        Ok(self.terms.iter().fold(T::zero(), |acc, (m, c)| {
            let term =
                m.0.iter()
                    .enumerate()
                    .fold(c.clone(), |t, (i, &e)| t * powers[i][e as usize].clone());
            acc + term
        }))
    }

    /// `f(A x)`: variable `x_i` is replaced by `sum_j A[i][j] x_j`.
    pub fn linear_substitute(&self, a: &Matrix<T>) -> Result<Self> {
        if a.rows() != self.arity || a.cols() != self.arity {
            return Err(PolyError::DimensionMismatch {
                rows: a.rows(),
                cols: a.cols(),
                arity: self.arity,
            });
        }
        let n = self.arity;
        let images: Vec<Self> = (0..n)
            .map(|i| Self::from_terms(n, (0..n).map(|j| (Monomial::var(n, j), a.get(i, j).clone()))))
            .collect();
        Ok(self.compose(&images))
    }

    /// Substitutes polynomial `images[i]` (all of one common arity) for `x_i`.
    pub fn compose(&self, images: &[Self]) -> Self {
        assert_eq!(images.len(), self.arity, "one image per variable");
        let target = images.first().map_or(0, |p| p.arity);
        let mut cache: Vec<Vec<Self>> = images.iter().map(|p| vec![Self::one(p.arity)]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                term = &term * &cache[i][e as usize];
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        out
    }

    /// Re-embeds into `arity` variables, sending `x_i` to `x_{mapping[i]}`.
    pub fn embed(&self, arity: usize, mapping: &[usize]) -> Self {
        assert_eq!(mapping.len(), self.arity);
        Self::from_terms(
            arity,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; arity];
                for (i, &k) in m.0.iter().enumerate() {
                    e[mapping[i]] += k;
                }
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Coefficients on the given monomial basis.
    pub fn coefficient_vector(&self, basis: &[Monomial]) -> Vec<T> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    /// Splits by the exponent of `x_index`: `result[a]` collects the terms with
    /// `x_index^a`, keeping that factor.
    pub fn grade_by_variable(&self, index: usize) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.0[index])
                .or_insert_with(|| Self::zero(self.arity))
                .add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<T: Scalar + ToFloat> Poly<T> {
    pub fn to_f64(&self) -> Poly<f64> {
        self.map_coeffs(ToFloat::to_float)
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Poly<T> {
        self.try_add(rhs).expect("polynomial arity mismatch")
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Poly<T> {
        self.try_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        self.try_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<T: Scalar> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

/// Variable names: `x, y, z` for arity up to 3, otherwise `x0 .. x{n-1}`.
pub fn variable_name(arity: usize, index: usize) -> String {
    if arity <= 3 {
        ["x", "y", "z"][index].to_string()
    } else {
        format!("x{index}")
    }
}

impl<T> fmt::Display for Poly<T>
where
    T: Scalar + Signed + fmt::Display,
{
    /// Canonical text: graded-lex descending, explicit `*` and `^`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (k, negative) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            let mut factors = Vec::new();
            if m.degree() == 0 || !magnitude.is_one() {
                factors.push(magnitude.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(variable_name(self.arity, i)),
                    _ => factors.push(format!("{}^{}", variable_name(self.arity, i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn p(s: &str, n: usize) -> Poly<Rational> {
        parse_form(s, n).unwrap()
    }

    #[test]
    fn grlex_order_prints_highest_first() {
        let f = p("x*y*z*(x+y+z)", 3);
        assert_eq!(f.to_string(), "x^2*y*z + x*y^2*z + x*y*z^2");
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.homogeneous_degree(), Some(4));
    }

    #[test]
    fn monomial_basis_sizes() {
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        let b = monomials_of_degree(2, 2);
        assert_eq!(b[0].exponents(), &[2, 0]);
        assert_eq!(b[2].exponents(), &[0, 2]);
    }

    #[test]
    fn algebra_examples() {
        let a = p("x+y", 2);
        let b = p("x-y", 2);
        assert_eq!(&a * &b, p("x^2-y^2", 2));
        assert_eq!(p("x+z", 3).pow(3), p("x^3+3*x^2*z+3*x*z^2+z^3", 3));
        assert!((&a - &a).is_zero());
        assert_eq!(
            a.try_add(&p("x", 3)),
            Err(PolyError::ArityMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn derivative_examples() {
        let f = p("x*y*z*(x+y+z)", 3);
        assert_eq!(f.partial(&[0, 1, 2]).unwrap(), p("2*x+2*y+2*z", 3));
        assert!(p("7", 3).derivative(1).unwrap().is_zero());
        assert!(matches!(
            f.derivative(3),
            Err(PolyError::IndexOutOfRange { index: 3, arity: 3 })
        ));
    }

    #[test]
    fn euler_identity_on_quartic() {
        let f = p("x*y*z*(x+y+z)", 3);
        let euler = (0..3).fold(Poly::zero(3), |acc, i| {
            &acc + &(&Poly::var(3, i) * &f.derivative(i).unwrap())
        });
        assert_eq!(euler, f.scale(&int(4)));
    }

    #[test]
    fn substitution_examples() {
        let f = p("x^2-y^2", 2);
        let swap = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(f.linear_substitute(&swap).unwrap(), p("y^2-x^2", 2));
        assert_eq!(f.linear_substitute(&Matrix::identity(2)).unwrap(), f);
        // z -> x + (c b / 3) z with c b = 3/2
        let z3 = p("z^3", 3);
        let a = Matrix::from_rows(vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(1), int(0), rat(1, 2)],
        ])
        .unwrap();
        assert_eq!(z3.linear_substitute(&a).unwrap(), p("(x+1/2*z)^3", 3));
        assert!(matches!(
            f.linear_substitute(&Matrix::identity(3)),
            Err(PolyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn evaluation_examples() {
        let f = p("x*y*z*(x+y+z)", 3);
        assert_eq!(f.evaluate(&[int(1), int(1), int(1)]).unwrap(), int(3));
        assert_eq!(f.evaluate(&[int(0), int(0), int(0)]).unwrap(), int(0));
        let c = p("(x0^2+x1^2-x2^2-x3^2)*x3", 4);
        assert_eq!(c.evaluate(&[int(0), int(0), int(2), int(-1)]).unwrap(), int(5));
        let fl = f.to_f64();
        assert!((fl.evaluate(&[0.5, 1.0, 2.0]).unwrap() - 3.5).abs() < 1e-12);
        assert!(matches!(
            f.evaluate(&[int(1)]),
            Err(PolyError::PointLength { found: 1, arity: 3 })
        ));
    }

    #[test]
    fn grading_by_z() {
        let g = p("x^2*z + y*z^2 + x^3 + z^3", 3);
        let parts = g.grade_by_variable(2);
        assert_eq!(parts.len(), 4);
        assert_eq!(parts[&2], p("y*z^2", 3));
    }
}
