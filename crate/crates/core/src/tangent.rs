//! First-order deformations of the locus `{S(f) = 0}` along `alpha(x, y) + z^d`.
//!
//! Writing `A = a112 a222 - a122^2`, `B = a112 a122 - a111 a222` and
//! `C = a111 a122 - a112^2` for the third partials `a_ijk` of a binary form
//! `alpha` of degree `d`, the operator
//!
//! ```text
//! T(alpha, h) = h_11 A + h_12 B + h_22 C
//! ```
//!
//! governs the variation of the Clebsch covariant:
//!
//! ```text
//! S(alpha + z^d + eps g) = eps d (d-1) (d-2) z^(d-3) (g_113 A + g_123 B + g_223 C)   mod eps^2
//! ```
//!
//! At `alpha = C(d,2) x^(d-2) y^2` the operator is diagonal on monomials:
//! `T(alpha, x^i y^j) = -d^2 (d-1)^2 (d-2)^2 lambda(i, j) x^(i+2d-8) y^j` with
//! `lambda(i, j) = i(i-1) - (d-3) i j + (d-2)(d-3) j (j-1) / 2`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::covariants::{AronholdCoefficients, CovariantError};
use crate::poly::{monomials_of_degree, Monomial, PolyError};
use crate::scalar::{int, Rational};
use crate::{EpsForm, Form, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TangentError {
    #[error("expected arity {expected}, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("form must be homogeneous and nonzero")]
    NotHomogeneous,
    #[error("expected degree {expected}, got {found}")]
    WrongDegree { expected: u32, found: u32 },
    #[error("degree {found} is below the minimum {min}")]
    DegreeTooLow { min: u32, found: u32 },
    #[error("the two routes to the variation disagree")]
    RouteMismatch { direct: Box<Form>, closed: Box<Form> },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Covariant(#[from] CovariantError),
}

pub type Result<T> = std::result::Result<T, TangentError>;

fn check_arity(f: &Form, expected: usize) -> Result<()> {
    if f.arity() == expected {
        Ok(())
    } else {
        Err(TangentError::WrongArity {
            expected,
            found: f.arity(),
        })
    }
}

fn form_degree(f: &Form) -> Result<u32> {
    f.homogeneous_degree().ok_or(TangentError::NotHomogeneous)
}

/// The coefficient forms `A, B, C` of `T(alpha, .)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TCoefficients {
    pub a: Form,
    pub b: Form,
    pub c: Form,
}

impl TCoefficients {
    pub fn of(alpha: &Form) -> Result<Self> {
        check_arity(alpha, 2)?;
        let t = |idx: &[usize]| alpha.partial(idx);
        let (a111, a112, a122, a222) = (t(&[0, 0, 0])?, t(&[0, 0, 1])?, t(&[0, 1, 1])?, t(&[1, 1, 1])?);
        Ok(TCoefficients {
            a: &(&a112 * &a222) - &(&a122 * &a122),
            b: &(&a112 * &a122) - &(&a111 * &a222),
            c: &(&a111 * &a122) - &(&a112 * &a112),
        })
    }

    fn embedded(&self, arity: usize) -> TCoefficients {
        let map = [0, 1];
        TCoefficients {
            a: self.a.embed(arity, &map),
            b: self.b.embed(arity, &map),
            c: self.c.embed(arity, &map),
        }
    }

    /// `h_11 A + h_12 B + h_22 C` for `h` of arity 2 or 3 (derivatives in the
    /// first two variables).
    fn apply(&self, h: &Form) -> Result<Form> {
        let coeffs = if h.arity() == self.a.arity() {
            self.clone()
        } else {
            self.embedded(h.arity())
        };
        Ok(
            &(&(&h.partial(&[0, 0])? * &coeffs.a) + &(&h.partial(&[0, 1])? * &coeffs.b))
                + &(&h.partial(&[1, 1])? * &coeffs.c),
        )
    }
}

/// `T(alpha, h)` for binary forms.
pub fn t_operator(alpha: &Form, h: &Form) -> Result<Form> {
    check_arity(h, 2)?;
    TCoefficients::of(alpha)?.apply(h)
}

#[derive(Clone, Debug, Serialize)]
pub struct VariationResult {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub base: Form,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub direction: Form,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub variation: Form,
}

/// `alpha(x, y) + z^d` as a ternary form.
pub fn ternary_base(alpha: &Form) -> Result<Form> {
    check_arity(alpha, 2)?;
    let d = form_degree(alpha)?;
    Ok(&alpha.embed(3, &[0, 1]) + &Form::var(3, 2).pow(d))
}

fn check_variation_inputs(alpha: &Form, g: &Form) -> Result<u32> {
    check_arity(alpha, 2)?;
    check_arity(g, 3)?;
    let d = form_degree(alpha)?;
    if d < 4 {
        return Err(TangentError::DegreeTooLow { min: 4, found: d });
    }
    if !g.is_zero() {
        let dg = form_degree(g)?;
        if dg != d {
            return Err(TangentError::WrongDegree { expected: d, found: dg });
        }
    }
    Ok(d)
}

/// `eps`-coefficient of `S(alpha + z^d + eps g)` through the full Clebsch
/// formula over dual numbers.
pub fn variation_direct(alpha: &Form, g: &Form) -> Result<Form> {
    check_variation_inputs(alpha, g)?;
    let f = EpsForm::new(ternary_base(alpha)?, g.clone())?;
    let coeffs = AronholdCoefficients::from_third_partials(|i, j, k| f.partial(&[i, j, k]).expect("indices < 3"));
    Ok(coeffs.evaluate().into_parts().1)
}

/// Precomputed closed form `d (d-1) (d-2) z^(d-3) (g_113 A + g_123 B + g_223 C)`.
#[derive(Clone, Debug)]
pub struct Linearization {
    degree: u32,
    coeffs: TCoefficients,
    prefactor: Form,
}

impl Linearization {
    pub fn new(alpha: &Form) -> Result<Self> {
        check_arity(alpha, 2)?;
        let d = form_degree(alpha)?;
        if d < 4 {
            return Err(TangentError::DegreeTooLow { min: 4, found: d });
        }
        let k = i64::from(d);
        Ok(Linearization {
            degree: d,
            coeffs: TCoefficients::of(alpha)?.embedded(3),
            prefactor: Form::var(3, 2).pow(d - 3).scale(&int(k * (k - 1) * (k - 2))),
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn apply(&self, g: &Form) -> Result<Form> {
        check_arity(g, 3)?;
        let gz = g.derivative(2)?;
        Ok(&self.prefactor * &self.coeffs.apply(&gz)?)
    }
}

pub fn variation_closed(alpha: &Form, g: &Form) -> Result<Form> {
    check_variation_inputs(alpha, g)?;
    Linearization::new(alpha)?.apply(g)
}

/// The variation of `S` at `alpha + z^d` in direction `g`, computed both ways.
pub fn first_variation_clebsch(alpha: &Form, g: &Form) -> Result<VariationResult> {
    let direct = variation_direct(alpha, g)?;
    let closed = variation_closed(alpha, g)?;
    if direct != closed {
        return Err(TangentError::RouteMismatch {
            direct: Box::new(direct),
            closed: Box::new(closed),
        });
    }
    Ok(VariationResult {
        base: ternary_base(alpha)?,
        direction: g.clone(),
        variation: direct,
    })
}

/// Basis of `{h : T(alpha, h) = 0}` among binary forms of degree `r`.
#[derive(Clone, Debug, Serialize)]
pub struct KernelBasis {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub alpha: Form,
    pub degree: u32,
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub basis: Vec<Form>,
}

impl KernelBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of a linear map given on a monomial basis, with outputs read on the
/// union of output monomials.
fn kernel_on_basis(domain: &[Monomial], images: &[Form]) -> (usize, Vec<Vec<Rational>>) {
    let rows: BTreeSet<Monomial> = images
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()).collect::<Vec<_>>())
        .collect();
    let rows: Vec<Monomial> = rows.into_iter().collect();
    if rows.is_empty() {
        let id = (0..domain.len())
            .map(|k| {
                (0..domain.len())
                    .map(|i| if i == k { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        return (0, id);
    }
    let m = RationalMatrix::from_fn(rows.len(), domain.len(), |r, c| images[c].coeff(&rows[r]));
    (m.rank(), m.nullspace())
}

pub fn kernel_of_t(alpha: &Form, r: u32) -> Result<KernelBasis> {
    let coeffs = TCoefficients::of(alpha)?;
    form_degree(alpha)?;
    let domain = monomials_of_degree(2, r);
    let images = domain
        .iter()
        .map(|m| coeffs.apply(&Form::monomial(m.clone(), Rational::one())))
        .collect::<Result<Vec<_>>>()?;
    let (_, null) = kernel_on_basis(&domain, &images);
    let basis = null
        .into_iter()
        .map(|v| Form::from_terms(2, domain.iter().cloned().zip(v)))
        .collect();
    Ok(KernelBasis {
        alpha: alpha.clone(),
        degree: r,
        basis,
    })
}

/// `C(d, 2) x^(d-2) y^2`.
pub fn witness_alpha(d: u32) -> Form {
    let k = i64::from(d);
    Form::monomial(Monomial::new(vec![d - 2, 2]), int(k * (k - 1) / 2))
}

/// `-d^2 (d-1)^2 (d-2)^2`, the factor relating `T` at the witness to the
/// monomial eigenvalues.
pub fn witness_factor(d: u32) -> Rational {
    let k = i64::from(d);
    int(-(k * (k - 1) * (k - 2)).pow(2))
}

pub fn monomial_eigenvalue(d: u32, i: u32, j: u32) -> i64 {
    let (d, i, j) = (i64::from(d), i64::from(i), i64::from(j));
    i * (i - 1) - (d - 3) * i * j + (d - 2) * (d - 3) * j * (j - 1) / 2
}

/// Discriminant in `i` of `lambda(i, j) = 0` for fixed `j`.
pub fn eigenvalue_discriminant(d: u32, j: u32) -> i64 {
    let (d, j) = (i64::from(d), i64::from(j));
    1 - (d - 1) * (d - 3) * j * (j - 2)
}

/// The six exponent pairs where the eigenvalue vanishes.
pub fn expected_zero_set(d: u32) -> BTreeSet<(u32, u32)> {
    [(0, 0), (1, 0), (0, 1), (d - 2, 1), (d - 3, 2), (d - 2, 2)]
        .into_iter()
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub i: u32,
    pub j: u32,
    pub eigenvalue: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumTable {
    pub degree: u32,
    pub entries: Vec<SpectrumEntry>,
    pub zero_set: BTreeSet<(u32, u32)>,
    /// `(j, discriminant)` for `j = 0..=d`.
    pub discriminants: Vec<(u32, i64)>,
}

impl SpectrumTable {
    pub fn zero_set_matches(&self) -> bool {
        self.zero_set == expected_zero_set(self.degree)
    }

    pub fn discriminants_negative_from_three(&self) -> bool {
        self.discriminants
            .iter()
            .filter(|(j, _)| *j >= 3)
            .all(|(_, disc)| *disc < 0)
    }

    pub fn eigenvalue(&self, i: u32, j: u32) -> Option<i64> {
        self.entries.iter().find(|e| e.i == i && e.j == j).map(|e| e.eigenvalue)
    }
}

/// Eigenvalues for all `i + j <= d`.
pub fn monomial_spectrum(d: u32) -> Result<SpectrumTable> {
    if d < 4 {
        return Err(TangentError::DegreeTooLow { min: 4, found: d });
    }
    let mut entries = Vec::new();
    let mut zero_set = BTreeSet::new();
    for total in 0..=d {
        for j in 0..=total {
            let i = total - j;
            let eigenvalue = monomial_eigenvalue(d, i, j);
            if eigenvalue == 0 {
                zero_set.insert((i, j));
            }
            entries.push(SpectrumEntry { i, j, eigenvalue });
        }
    }
    Ok(SpectrumTable {
        degree: d,
        entries,
        zero_set,
        discriminants: (0..=d).map(|j| (j, eigenvalue_discriminant(d, j))).collect(),
    })
}

/// Kernel dimensions of `T(alpha, .)` in each degree `0..=d` that a very
/// general `alpha` of degree `d` is expected to have: `1, 2, 0, ..., 0, 2, 1`.
pub fn expected_kernel_dimensions(d: u32) -> Vec<usize> {
    (0..=d)
        .map(|r| match r {
            0 => 1,
            1 => 2,
            r if r == d - 1 => 2,
            r if r == d => 1,
            _ => 0,
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ZariskiReport {
    pub degree: u32,
    /// Number of forms in the explicit list (`d + 6`).
    pub listed: usize,
    pub explicit_span_dimension: usize,
    /// Dimension of the kernel of `g -> variation(alpha, g)` on ternary forms
    /// of degree `d`.
    pub linearization_kernel_dimension: usize,
    pub ambient_dimension: usize,
    /// The listed forms are linearly dependent.
    pub degenerate: bool,
    /// Every listed form has zero variation.
    pub span_in_kernel: bool,
}

impl ZariskiReport {
    pub fn dimensions_equal(&self) -> bool {
        self.explicit_span_dimension == self.linearization_kernel_dimension
    }

    pub fn certifies(&self) -> bool {
        !self.degenerate && self.span_in_kernel && self.dimensions_equal()
    }
}

/// `x^d, ..., y^d, alpha_x z, alpha_y z, x z^(d-1), y z^(d-1), z^d`.
pub fn explicit_tangent_forms(alpha: &Form) -> Result<Vec<Form>> {
    check_arity(alpha, 2)?;
    let d = form_degree(alpha)?;
    let z = Form::var(3, 2);
    let mut forms: Vec<Form> = monomials_of_degree(2, d)
        .into_iter()
        .map(|m| Form::monomial(m, Rational::one()).embed(3, &[0, 1]))
        .collect();
    for k in 0..2 {
        forms.push(&alpha.derivative(k)?.embed(3, &[0, 1]) * &z);
    }
    forms.push(&Form::var(3, 0) * &z.pow(d - 1));
    forms.push(&Form::var(3, 1) * &z.pow(d - 1));
    forms.push(z.pow(d));
    Ok(forms)
}

pub fn zariski_tangent_compare(alpha: &Form) -> Result<ZariskiReport> {
    let lin = Linearization::new(alpha)?;
    let d = lin.degree();
    let basis = monomials_of_degree(3, d);
    let listed = explicit_tangent_forms(alpha)?;
    let span = RationalMatrix::from_fn(basis.len(), listed.len(), |r, c| listed[c].coeff(&basis[r]));
    let explicit_span_dimension = span.rank();
    let span_in_kernel = listed
        .iter()
        .map(|g| lin.apply(g).map(|v| v.is_zero()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    let images = basis
        .iter()
        .map(|m| lin.apply(&Form::monomial(m.clone(), Rational::one())))
        .collect::<Result<Vec<_>>>()?;
    let (rank, _) = kernel_on_basis(&basis, &images);
    Ok(ZariskiReport {
        degree: d,
        listed: listed.len(),
        degenerate: explicit_span_dimension < listed.len(),
        explicit_span_dimension,
        linearization_kernel_dimension: basis.len() - rank,
        ambient_dimension: basis.len(),
        span_in_kernel,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureExpansion {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub alpha: Form,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub b: Rational,
    /// `c * F` has no `c^0` term, so `F` has no negative powers of `c`.
    pub negative_powers_cancel: bool,
    /// Ternary coefficients of `c^0, c^1, ..., c^(d-1)` in `F`.
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub coefficients: Vec<Form>,
    pub constant_term_matches: bool,
}

impl ClosureExpansion {
    pub fn passed(&self) -> bool {
        self.negative_powers_cancel && self.constant_term_matches
    }
}

/// Expands `F(c) = -x^d / c + alpha(x, y) + (x + c b z / d)^d / c` in powers
/// of `c`, with `c` handled as a fourth variable after multiplying by `c`.
/// `alpha` must be zero or homogeneous of degree `d`.
pub fn closure_limit_expand(alpha: &Form, d: u32, b: &Rational) -> Result<ClosureExpansion> {
    check_arity(alpha, 2)?;
    if !alpha.is_zero() {
        let found = form_degree(alpha)?;
        if found != d {
            return Err(TangentError::WrongDegree { expected: d, found });
        }
    }
    if d < 2 {
        return Err(TangentError::DegreeTooLow { min: 2, found: d });
    }
    let var = |i| Form::var(4, i);
    let c = var(3);
    let shift = &var(0) + &(&(&c * &var(2)) * &Form::constant(4, b / int(i64::from(d))));
    let c_f = &(&(-var(0).pow(d)) + &(&c * &alpha.embed(4, &[0, 1]))) + &shift.pow(d);
    let graded = c_f.grade_by_variable(3);
    let drop_c = [Form::var(3, 0), Form::var(3, 1), Form::var(3, 2), Form::one(3)];
    let coefficients: Vec<Form> = (1..=d)
        .map(|k| graded.get(&k).map_or_else(|| Form::zero(3), |p| p.compose(&drop_c)))
        .collect();
    let expected = &alpha.embed(3, &[0, 1]) + &(&Form::var(3, 0).pow(d - 1) * &Form::var(3, 2)).scale(b);
    Ok(ClosureExpansion {
        alpha: alpha.clone(),
        b: b.clone(),
        negative_powers_cancel: graded.get(&0).is_none_or(Form::is_zero),
        constant_term_matches: coefficients[0] == expected,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_form;
    use crate::scalar::rat;

    fn bin(s: &str) -> Form {
        parse_form(s, 2).unwrap()
    }

    fn ter(s: &str) -> Form {
        parse_form(s, 3).unwrap()
    }

    #[test]
    fn t_annihilates_low_degree_and_alpha() {
        let alpha = bin("x^5 - 2*x^3*y^2 + 3*x*y^4 + y^5");
        for h in ["1", "x", "y"] {
            assert!(t_operator(&alpha, &bin(h)).unwrap().is_zero());
        }
        for h in [
            alpha.clone(),
            alpha.derivative(0).unwrap(),
            alpha.derivative(1).unwrap(),
        ] {
            assert!(t_operator(&alpha, &h).unwrap().is_zero());
        }
        assert!(t_operator(&alpha, &ter("x")).is_err());
    }

    #[test]
    fn t_at_witness_example() {
        let alpha = witness_alpha(4);
        assert_eq!(alpha, bin("6*x^2*y^2"));
        let t = t_operator(&alpha, &bin("y^3")).unwrap();
        assert_eq!(t, bin("-3456*y^3"));
        assert_eq!(monomial_eigenvalue(4, 0, 3), 6);
        assert_eq!(t, bin("y^3").scale(&(witness_factor(4) * int(6))));
    }

    #[test]
    fn variation_examples() {
        let alpha = bin("6*x^2*y^2");
        let v = first_variation_clebsch(&alpha, &ter("y^3*z")).unwrap();
        assert_eq!(v.variation, ter("-82944*y^3*z"));
        assert!(first_variation_clebsch(&alpha, &ter("z^4"))
            .unwrap()
            .variation
            .is_zero());
        let flat = alpha.embed(3, &[0, 1]);
        assert!(first_variation_clebsch(&alpha, &flat).unwrap().variation.is_zero());
        assert!(first_variation_clebsch(&alpha, &ter("x^3")).is_err());
        assert!(first_variation_clebsch(&bin("x^3"), &ter("x^3")).is_err());
    }

    #[test]
    fn variation_routes_agree_on_mixed_direction() {
        let alpha = bin("x^5 + 2*x^2*y^3 - y^5");
        let g = ter("x^2*y*z^2 - 3*x*z^4 + y^4*z + 7*x^3*y*z");
        first_variation_clebsch(&alpha, &g).unwrap();
    }

    #[test]
    fn kernels_at_witness() {
        assert_eq!(kernel_of_t(&witness_alpha(5), 2).unwrap().dimension(), 0);
        let k = kernel_of_t(&witness_alpha(4), 3).unwrap();
        assert_eq!(k.dimension(), 2);
        let k = kernel_of_t(&witness_alpha(6), 6).unwrap();
        assert_eq!(k.basis, vec![parse_form("x^4*y^2", 2).unwrap()]);
    }

    #[test]
    fn spectrum_d4() {
        let s = monomial_spectrum(4).unwrap();
        assert_eq!(s.eigenvalue(2, 1), Some(0));
        assert_eq!(s.eigenvalue(1, 2), Some(0));
        assert_eq!(s.eigenvalue(2, 2), Some(0));
        assert_eq!(s.eigenvalue(0, 3), Some(6));
        assert_eq!(s.discriminants[3], (3, -8));
        assert!(s.zero_set_matches());
        assert!(monomial_spectrum(3).is_err());
    }

    #[test]
    fn zariski_witness_and_degenerate() {
        let r = zariski_tangent_compare(&witness_alpha(4)).unwrap();
        assert_eq!((r.explicit_span_dimension, r.linearization_kernel_dimension), (10, 10));
        assert!(r.certifies());
        let r = zariski_tangent_compare(&bin("x^4")).unwrap();
        assert!(r.degenerate);
    }

    #[test]
    fn closure_examples() {
        let e = closure_limit_expand(&Form::zero(2), 3, &int(3)).unwrap();
        assert!(e.passed());
        assert_eq!(e.coefficients, vec![ter("3*x^2*z"), ter("3*x*z^2"), ter("z^3")]);
        let e = closure_limit_expand(&bin("y^4"), 4, &int(4)).unwrap();
        assert!(e.passed());
        assert_eq!(e.coefficients[0], ter("y^4 + 4*x^3*z"));
        assert!(closure_limit_expand(&bin("y^4"), 3, &int(4)).is_err());
        let e = closure_limit_expand(&bin("x*y"), 2, &rat(0, 1)).unwrap();
        assert!(e.passed());
        assert!(e.coefficients[1].is_zero());
    }
}
