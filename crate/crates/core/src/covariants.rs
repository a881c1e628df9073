//! Classical covariants of forms.
//!
//! The Aronhold invariant of a ternary cubic is a quartic polynomial in ten
//! coefficients. [`AronholdCoefficients::evaluate`] transcribes it once, over
//! any coefficient ring; the cubic invariant feeds it the normalised cubic
//! coefficients, and the Clebsch covariant feeds it third partial derivatives
//! (`a3 = f_zzz`, `a2 = f_xzz`, ..., `d0 = f_yyy`). With this normalisation
//! `S(cubic) = 2^4 3^4 * Aronhold(cubic)`.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::poly::{EpsForm, Monomial, Poly, PolyError};
use crate::scalar::{int, Rational, Scalar};
use crate::{Form, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CovariantError {
    #[error("expected arity {expected}, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("form is not homogeneous (or is zero)")]
    NotHomogeneous,
    #[error("expected degree {expected}, got {found}")]
    WrongDegree { expected: String, found: u32 },
    #[error("transformation matrix is singular")]
    SingularTransform,
    #[error("neither f_yz = 0 nor f_yy = 0 holds")]
    NoStructuralCase,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub type Result<T> = std::result::Result<T, CovariantError>;

/// Ring operations needed by the Aronhold formula.
pub trait AronholdRing: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn times(&self, k: i64) -> Self;
}

impl AronholdRing for Rational {
    fn times(&self, k: i64) -> Self {
        self * int(k)
    }
}

impl<T: Scalar> AronholdRing for Poly<T> {
    fn times(&self, k: i64) -> Self {
        self.scale(&T::from_i64(k))
    }
}

impl<T: Scalar> AronholdRing for EpsForm<T> {
    fn times(&self, k: i64) -> Self {
        self.scale(&T::from_i64(k))
    }
}

/// The ten coefficients of the Aronhold formula, in either reading.
#[derive(Clone, Debug, PartialEq)]
pub struct AronholdCoefficients<R> {
    pub a3: R,
    pub a2: R,
    pub b2: R,
    pub a1: R,
    pub b1: R,
    pub c1: R,
    pub a0: R,
    pub b0: R,
    pub c0: R,
    pub d0: R,
}

impl<R: AronholdRing> AronholdCoefficients<R> {
    /// Builds the coefficients from a third-derivative oracle `third(i, j, k)`
    /// with variables numbered `x = 0, y = 1, z = 2`.
    pub fn from_third_partials(mut third: impl FnMut(usize, usize, usize) -> R) -> Self {
        AronholdCoefficients {
            a3: third(2, 2, 2),
            a2: third(0, 2, 2),
            b2: third(1, 2, 2),
            a1: third(0, 0, 2),
            b1: third(0, 1, 2),
            c1: third(1, 1, 2),
            a0: third(0, 0, 0),
            b0: third(0, 0, 1),
            c0: third(0, 1, 1),
            d0: third(1, 1, 1),
        }
    }

    /// The Aronhold formula (sign convention with `+(b0 b2 - b1^2)^2`).
    pub fn evaluate(&self) -> R {
        let AronholdCoefficients {
            a3,
            a2,
            b2,
            a1,
            b1,
            c1,
            a0,
            b0,
            c0,
            d0,
        } = self.clone();
        let sq = |r: &R| r.clone() * r.clone();
        let a0a2_a1a1 = a0.clone() * a2.clone() - sq(&a1);
        let a0a3_a1a2 = a0.clone() * a3.clone() - a1.clone() * a2.clone();
        let a1a3_a2a2 = a1.clone() * a3.clone() - sq(&a2);
        let b0b2_b1b1 = b0.clone() * b2.clone() - sq(&b1);

        let mut s = a0a3_a1a2.clone() * c0.clone() * c1.clone() - a0a2_a1a1.clone() * sq(&c1);
        s = s - a1a3_a2a2.clone() * sq(&c0);
        s = s - sq(&b0) * a3.clone() * c1.clone();
        s = s + b0.clone() * b1.clone() * ((a2.clone() * c1.clone()).times(3) + a3.clone() * c0.clone());
        s = s - (b0.clone() * b2.clone() + sq(&b1).times(2)) * (a1.clone() * c1.clone() + a2.clone() * c0.clone());
        s = s + b1.clone() * b2.clone() * (a0.clone() * c1.clone() + (a1.clone() * c0.clone()).times(3));
        s = s - sq(&b2) * a0.clone() * c0.clone();
        s = s + d0 * (b0 * a1a3_a2a2 - b1 * a0a3_a1a2 + b2 * a0a2_a1a1);
        s + sq(&b0b2_b1b1)
    }
}

impl AronholdCoefficients<Rational> {
    /// Reads the coefficients off a ternary cubic written as
    /// `a3 z^3 + 3(a2 x + b2 y) z^2 + 3(a1 x^2 + 2 b1 x y + c1 y^2) z
    ///  + a0 x^3 + 3 b0 x^2 y + 3 c0 x y^2 + d0 y^3`.
    pub fn from_cubic(f: &Form) -> Result<Self> {
        check_ternary(f)?;
        if !f.is_zero() && f.homogeneous_degree() != Some(3) {
            return Err(match f.homogeneous_degree() {
                Some(d) => CovariantError::WrongDegree {
                    expected: "3".into(),
                    found: d,
                },
                None => CovariantError::NotHomogeneous,
            });
        }
        let c = |e: [u32; 3], div: i64| f.coeff_of(&e) / int(div);
        Ok(AronholdCoefficients {
            a3: c([0, 0, 3], 1),
            a2: c([1, 0, 2], 3),
            b2: c([0, 1, 2], 3),
            a1: c([2, 0, 1], 3),
            b1: c([1, 1, 1], 6),
            c1: c([0, 2, 1], 3),
            a0: c([3, 0, 0], 1),
            b0: c([2, 1, 0], 3),
            c0: c([1, 2, 0], 3),
            d0: c([0, 3, 0], 1),
        })
    }

    /// Inverse of [`Self::from_cubic`].
    pub fn to_cubic(&self) -> Form {
        let t = |e: [u32; 3], c: &Rational, mult: i64| (Monomial::new(e.to_vec()), c * int(mult));
        Form::from_terms(
            3,
            [
                t([0, 0, 3], &self.a3, 1),
                t([1, 0, 2], &self.a2, 3),
                t([0, 1, 2], &self.b2, 3),
                t([2, 0, 1], &self.a1, 3),
                t([1, 1, 1], &self.b1, 6),
                t([0, 2, 1], &self.c1, 3),
                t([3, 0, 0], &self.a0, 1),
                t([2, 1, 0], &self.b0, 3),
                t([1, 2, 0], &self.c0, 3),
                t([0, 3, 0], &self.d0, 1),
            ],
        )
    }
}

impl AronholdCoefficients<Form> {
    pub fn third_derivatives(f: &Form) -> Result<Self> {
        check_ternary(f)?;
        Ok(Self::from_third_partials(|i, j, k| {
            f.partial(&[i, j, k]).expect("indices < 3")
        }))
    }
}

fn check_ternary(f: &Form) -> Result<()> {
    if f.arity() == 3 {
        Ok(())
    } else {
        Err(CovariantError::WrongArity {
            expected: 3,
            found: f.arity(),
        })
    }
}

/// Symbolic matrix of second partials.
pub fn hessian_matrix(f: &Form) -> Vec<Vec<Form>> {
    let n = f.arity();
    let grad = f.gradient();
    (0..n)
        .map(|i| (0..n).map(|j| grad[i].derivative(j).expect("j < n")).collect())
        .collect()
}

/// Determinant of a small symbolic matrix by cofactor expansion along the
/// first row.
pub fn symbolic_determinant(m: &[Vec<Form>], arity: usize) -> Form {
    fn rec(m: &[Vec<Form>], rows: &[usize], cols: &[usize], arity: usize) -> Form {
        if rows.is_empty() {
            return Form::one(arity);
        }
        let r = rows[0];
        let mut acc = Form::zero(arity);
        for (k, &c) in cols.iter().enumerate() {
            if m[r][c].is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = rec(m, &rows[1..], &sub_cols, arity);
            let term = &m[r][c] * &minor;
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
    let n = m.len();
    let idx: Vec<usize> = (0..n).collect();
    rec(m, &idx, &idx, arity)
}

/// Hessian determinant `H(f) = det(d^2 f / dx_i dx_j)`.
pub fn hessian_det(f: &Form) -> Form {
    symbolic_determinant(&hessian_matrix(f), f.arity())
}

/// Aronhold invariant of a ternary cubic.
pub fn aronhold_invariant(f: &Form) -> Result<Rational> {
    Ok(AronholdCoefficients::from_cubic(f)?.evaluate())
}

/// Clebsch covariant `S(f)` of a ternary form of degree `d >= 3`; a form of
/// degree `4(d - 3)` or zero.
pub fn clebsch_covariant(f: &Form) -> Result<Form> {
    check_ternary(f)?;
    let d = f.homogeneous_degree().ok_or(CovariantError::NotHomogeneous)?;
    if d < 3 {
        return Err(CovariantError::WrongDegree {
            expected: ">= 3".into(),
            found: d,
        });
    }
    Ok(AronholdCoefficients::third_derivatives(f)?.evaluate())
}

/// Result of checking `H(fA) = H(f)(A x) det(A)^2` and
/// `S(fA) = S(f)(A x) det(A)^4`.
#[derive(Clone, Debug)]
pub struct EquivarianceReport {
    pub determinant: Rational,
    pub hessian_residual: Form,
    pub clebsch_residual: Option<Form>,
}

impl EquivarianceReport {
    pub fn hessian_holds(&self) -> bool {
        self.hessian_residual.is_zero()
    }

    /// `true` when the Clebsch identity holds (vacuous below degree 3).
    pub fn clebsch_holds(&self) -> bool {
        self.clebsch_residual.as_ref().is_none_or(Form::is_zero)
    }

    pub fn passed(&self) -> bool {
        self.hessian_holds() && self.clebsch_holds()
    }
}

pub fn equivariance_check(f: &Form, a: &RationalMatrix) -> Result<EquivarianceReport> {
    check_ternary(f)?;
    let det = a.determinant().map_err(|_| {
        CovariantError::Poly(PolyError::DimensionMismatch {
            rows: a.rows(),
            cols: a.cols(),
            arity: 3,
        })
    })?;
    if det.is_zero() {
        return Err(CovariantError::SingularTransform);
    }
    let fa = f.linear_substitute(a)?;
    let det2 = &det * &det;
    let h_lhs = hessian_det(&fa);
    let h_rhs = hessian_det(f).linear_substitute(a)?.scale(&det2);
    let clebsch_residual = match f.homogeneous_degree() {
        Some(d) if d >= 3 => {
            let s_lhs = clebsch_covariant(&fa)?;
            let s_rhs = clebsch_covariant(f)?.linear_substitute(a)?.scale(&(&det2 * &det2));
            Some(&s_lhs - &s_rhs)
        }
        _ => None,
    };
    Ok(EquivarianceReport {
        determinant: det,
        hessian_residual: &h_lhs - &h_rhs,
        clebsch_residual,
    })
}

/// The structural hypotheses under which the Clebsch formula collapses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StructuralCase {
    /// `f_yz = 0`, i.e. `f = alpha(x, y) + beta(x, z)`:
    /// `S = (a1 a3 - a2^2)(d0 b0 - c0^2)`.
    MixedYzVanishes,
    /// `f_yy = 0`, i.e. `f = alpha(x, z) + beta(x, z) y`:
    /// `S = (b0 b2 - b1^2)^2`.
    PureYyVanishes,
}

#[derive(Clone, Debug)]
pub struct SimplifiedClebschCheck {
    pub case: StructuralCase,
    pub full: Form,
    pub simplified: Form,
}

impl SimplifiedClebschCheck {
    pub fn holds(&self) -> bool {
        self.full == self.simplified
    }
}

/// Checks every simplified Clebsch formula whose hypothesis `f` satisfies.
pub fn simplified_clebsch_cases(f: &Form) -> Result<Vec<SimplifiedClebschCheck>> {
    let full = clebsch_covariant(f)?;
    let c = AronholdCoefficients::third_derivatives(f)?;
    let mut out = Vec::new();
    if f.partial(&[1, 2])?.is_zero() {
        let simplified = &(&(&c.a1 * &c.a3) - &(&c.a2 * &c.a2)) * &(&(&c.d0 * &c.b0) - &(&c.c0 * &c.c0));
        out.push(SimplifiedClebschCheck {
            case: StructuralCase::MixedYzVanishes,
            full: full.clone(),
            simplified,
        });
    }
    if f.partial(&[1, 1])?.is_zero() {
        let inner = &(&c.b0 * &c.b2) - &(&c.b1 * &c.b1);
        out.push(SimplifiedClebschCheck {
            case: StructuralCase::PureYyVanishes,
            full,
            simplified: &inner * &inner,
        });
    }
    if out.is_empty() {
        return Err(CovariantError::NoStructuralCase);
    }
    Ok(out)
}

/// Outcome of the binary degeneracy test.
#[derive(Clone, Debug, PartialEq)]
pub enum BinaryDegeneracy {
    /// The binary Hessian `h_xx h_yy - h_xy^2` is a nonzero polynomial.
    NotDegenerate { hessian: Form },
    /// `h = coefficient * linear^exponent`.
    PowerOfLinear {
        coefficient: Rational,
        linear: Form,
        exponent: u32,
    },
}

impl BinaryDegeneracy {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, BinaryDegeneracy::PowerOfLinear { .. })
    }
}

/// Decides whether the binary Hessian of `h` vanishes identically and, if so,
/// writes `h = c (x + t y)^d` (or `c y^d`) with rational `c, t`.
pub fn binary_power_of_linear(h: &Form) -> Result<BinaryDegeneracy> {
    if h.arity() != 2 {
        return Err(CovariantError::WrongArity {
            expected: 2,
            found: h.arity(),
        });
    }
    let d = h.homogeneous_degree().ok_or(CovariantError::NotHomogeneous)?;
    if d == 0 {
        return Err(CovariantError::WrongDegree {
            expected: ">= 1".into(),
            found: 0,
        });
    }
    let hessian = hessian_det(h);
    if !hessian.is_zero() {
        return Ok(BinaryDegeneracy::NotDegenerate { hessian });
    }
    let lead = h.coeff_of(&[d, 0]);
    let (coefficient, linear) = if lead.is_zero() {
        (h.coeff_of(&[0, d]), Form::var(2, 1))
    } else {
        let t = h.coeff_of(&[d - 1, 1]) / (&lead * int(i64::from(d)));
        (lead, &Form::var(2, 0) + &Form::var(2, 1).scale(&t))
    };
    debug_assert_eq!(&linear.pow(d).scale(&coefficient), h);
    Ok(BinaryDegeneracy::PowerOfLinear {
        coefficient,
        linear,
        exponent: d,
    })
}

/// Constant value of `S` for a cubic, or `None` if `S` is not constant.
pub fn clebsch_constant(f: &Form) -> Result<Option<Rational>> {
    Ok(clebsch_covariant(f)?.as_constant())
}

/// `2^4 3^4`, the ratio `S(cubic) / Aronhold(cubic)`.
pub fn clebsch_aronhold_ratio() -> Rational {
    int(1296)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_form;
    use crate::scalar::rat;
    use crate::xlinalg::Matrix;

    fn p3(s: &str) -> Form {
        parse_form(s, 3).unwrap()
    }

    #[test]
    fn hessian_of_quartic_example() {
        let f = p3("x*y*z*(x+y+z)");
        assert_eq!(hessian_det(&f), p3("6*x*y*z*(x+y+z)*(x^2+y^2+z^2+x*y+x*z+y*z)"));
    }

    #[test]
    fn hessian_of_cubic_examples() {
        let g = p3("(x^2-y^2-z^2)*z");
        assert_eq!(hessian_det(&g), p3("8*z*(x^2-y^2+3*z^2)"));
        let f4 = parse_form("(x0^2+x1^2-x2^2-x3^2)*x3", 4).unwrap();
        assert_eq!(
            hessian_det(&f4),
            parse_form("16*x3^2*(x0^2+x1^2-x2^2+3*x3^2)", 4).unwrap()
        );
    }

    #[test]
    fn aronhold_examples() {
        assert_eq!(aronhold_invariant(&p3("x^3+y^3+z^3")).unwrap(), int(0));
        assert_eq!(aronhold_invariant(&p3("x^3")).unwrap(), int(0));
        // (x^2 - y^2 - z^2) z: a3 = -1, a1 = 1/3, c1 = -1/3
        assert_eq!(aronhold_invariant(&p3("(x^2-y^2-z^2)*z")).unwrap(), rat(1, 81));
        assert!(matches!(
            aronhold_invariant(&p3("x^4")),
            Err(CovariantError::WrongDegree { .. })
        ));
        assert!(matches!(
            aronhold_invariant(&parse_form("x^3", 2).unwrap()),
            Err(CovariantError::WrongArity { .. })
        ));
    }

    #[test]
    fn cubic_reading_round_trips() {
        let f = p3("2*x^3 - x^2*y + 5*x*y*z + 7*z^3 - 3*y^2*z + x*z^2");
        let c = AronholdCoefficients::from_cubic(&f).unwrap();
        assert_eq!(c.to_cubic(), f);
    }

    #[test]
    fn clebsch_examples() {
        let f = p3("x*y*z*(x+y+z)");
        let expected = p3(
            "16*(x^4+2*x^3*y+3*x^2*y^2+2*x*y^3+y^4+2*x^3*z+7*x^2*y*z+7*x*y^2*z+2*y^3*z\
             +3*x^2*z^2+3*y^2*z^2+7*x*y*z^2+2*x*z^3+2*y*z^3+z^4)",
        );
        assert_eq!(clebsch_covariant(&f).unwrap(), expected);
        assert_eq!(clebsch_constant(&p3("(x^2-y^2-z^2)*z")).unwrap(), Some(int(16)));
        let maschke = p3("x^6+y^6+z^6-10*(x^3*y^3+y^3*z^3+z^3*x^3)");
        assert!(clebsch_covariant(&maschke).unwrap().is_zero());
        assert!(matches!(
            clebsch_covariant(&p3("x^2")),
            Err(CovariantError::WrongDegree { .. })
        ));
    }

    #[test]
    fn quartic_master_identity() {
        let f = p3("x*y*z*(x+y+z)");
        let q = p3("x^2+y^2+z^2+x*y+x*z+y*z");
        let lhs = &clebsch_covariant(&f).unwrap() - &(&q * &q).scale(&int(16));
        assert_eq!(lhs, f.scale(&int(48)));
    }

    #[test]
    fn equivariance_with_diagonal_scaling() {
        let f = p3("x^4 + 3*x^2*y*z - y^3*z + 2*z^4 + x*y^2*z");
        let a = Matrix::diagonal(&[int(2), int(1), int(1)]);
        let r = equivariance_check(&f, &a).unwrap();
        assert_eq!(r.determinant, int(2));
        assert!(r.passed());
        let singular = Matrix::diagonal(&[int(0), int(1), int(1)]);
        assert_eq!(
            equivariance_check(&f, &singular).unwrap_err(),
            CovariantError::SingularTransform
        );
    }

    #[test]
    fn simplified_cases() {
        let f = p3("x^4 + 2*x^3*y - x*y^3 + y^4 + 3*x^2*z^2 - x*z^3 + 5*z^4");
        let checks = simplified_clebsch_cases(&f).unwrap();
        assert_eq!(checks.len(), 1);
        assert_eq!(checks[0].case, StructuralCase::MixedYzVanishes);
        assert!(checks[0].holds());

        let g = p3("x^4 - x^2*z^2 + 2*z^4 + (x^3 - 2*x*z^2 + z^3)*y");
        let checks = simplified_clebsch_cases(&g).unwrap();
        assert_eq!(checks[0].case, StructuralCase::PureYyVanishes);
        assert!(checks.iter().all(SimplifiedClebschCheck::holds));

        let both = simplified_clebsch_cases(&p3("x^4+z^4")).unwrap();
        assert_eq!(both.len(), 2);
        assert!(both.iter().all(|c| c.holds() && c.full.is_zero()));

        assert_eq!(
            simplified_clebsch_cases(&p3("x*y*z*(x+y+z)")).unwrap_err(),
            CovariantError::NoStructuralCase
        );
    }

    #[test]
    fn binary_power_examples() {
        let p2 = |s: &str| parse_form(s, 2).unwrap();
        assert!(!binary_power_of_linear(&p2("x^2*y^2")).unwrap().is_degenerate());
        match binary_power_of_linear(&p2("(x+2*y)^3")).unwrap() {
            BinaryDegeneracy::PowerOfLinear {
                coefficient,
                linear,
                exponent,
            } => {
                assert_eq!(coefficient, int(1));
                assert_eq!(linear, p2("x+2*y"));
                assert_eq!(exponent, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        match binary_power_of_linear(&p2("-5*y^4")).unwrap() {
            BinaryDegeneracy::PowerOfLinear {
                coefficient, linear, ..
            } => {
                assert_eq!(coefficient, int(-5));
                assert_eq!(linear, p2("y"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(binary_power_of_linear(&p2("x^3")).unwrap().is_degenerate());
        assert!(binary_power_of_linear(&p3("x^3")).is_err());
    }
}
