//! Invariants of the polynomial and matrix layers.

use hessform_core::poly::monomials_of_degree;
use hessform_core::scalar::{int, rat};
use hessform_core::{parse_form, Form, Rational, RationalMatrix, Signature};
use num_traits::Zero;
use proptest::prelude::*;

fn form_from(arity: usize, degree: u32, coeffs: &[i64]) -> Form {
    let basis = monomials_of_degree(arity, degree);
    Form::from_terms(arity, basis.into_iter().zip(coeffs.iter().map(|&c| int(c))))
}

/// Homogeneous form of the given shape with small integer coefficients.
fn form_strategy(arity: usize, degree: u32) -> impl Strategy<Value = Form> {
    let n = monomials_of_degree(arity, degree).len();
    prop::collection::vec(-5i64..=5, n).prop_map(move |c| form_from(arity, degree, &c))
}

/// Inhomogeneous polynomial of degree at most 3 in two variables.
fn poly_strategy() -> impl Strategy<Value = Form> {
    (
        form_strategy(2, 0),
        form_strategy(2, 1),
        form_strategy(2, 2),
        form_strategy(2, 3),
    )
        .prop_map(|(a, b, c, d)| &(&(&a + &b) + &c) + &d)
}

fn matrix_strategy(n: usize, bound: i64) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-bound..=bound, n * n)
        .prop_map(move |v| RationalMatrix::new(n, n, v.into_iter().map(int).collect()).unwrap())
}

fn symmetric_strategy(n: usize) -> impl Strategy<Value = RationalMatrix> {
    matrix_strategy(n, 4).prop_map(|m| m.try_add(&m.transpose()).unwrap())
}

fn invertible_strategy(n: usize) -> impl Strategy<Value = RationalMatrix> {
    matrix_strategy(n, 3).prop_filter("invertible", |m| !m.determinant().unwrap().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a - &a, Form::zero(2));
        prop_assert_eq!(&a * &Form::one(2), a.clone());
    }

    #[test]
    fn derivatives_commute_and_obey_leibniz(a in poly_strategy(), b in poly_strategy()) {
        prop_assert_eq!(a.partial(&[0, 1]).unwrap(), a.partial(&[1, 0]).unwrap());
        let lhs = (&a * &b).derivative(0).unwrap();
        let rhs = &(&a.derivative(0).unwrap() * &b) + &(&a * &b.derivative(0).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_identity(d in 1u32..6, seed in 0usize..1000) {
        let n = monomials_of_degree(3, d).len();
        let coeffs: Vec<i64> = (0..n).map(|k| ((k * 7 + seed) % 11) as i64 - 5).collect();
        let f = form_from(3, d, &coeffs);
        let mut euler = Form::zero(3);
        for i in 0..3 {
            euler = &euler + &(&Form::var(3, i) * &f.derivative(i).unwrap());
        }
        prop_assert_eq!(euler, f.scale(&int(i64::from(d))));
    }

    #[test]
    fn print_parse_round_trip(f in form_strategy(3, 3), g in poly_strategy(), k in -7i64..7, q in 1i64..6) {
        let f = &f + &Form::var(3, 0).scale(&rat(k, q));
        prop_assert_eq!(parse_form(&f.to_string(), 3).unwrap(), f.clone());
        prop_assert_eq!(parse_form(&g.to_string(), 2).unwrap(), g.clone());
    }

    #[test]
    fn substitution_respects_products(f in form_strategy(3, 2), g in form_strategy(3, 1), a in matrix_strategy(3, 3)) {
        let lhs = (&f * &g).linear_substitute(&a).unwrap();
        let rhs = &f.linear_substitute(&a).unwrap() * &g.linear_substitute(&a).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly_strategy(), b in poly_strategy(), x in -5i64..5, y in -5i64..5) {
        let p = [int(x), rat(y, 3)];
        prop_assert_eq!((&a * &b).evaluate(&p).unwrap(), a.evaluate(&p).unwrap() * b.evaluate(&p).unwrap());
        prop_assert_eq!((&a + &b).evaluate(&p).unwrap(), a.evaluate(&p).unwrap() + b.evaluate(&p).unwrap());
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix_strategy(3, 5), b in matrix_strategy(3, 5)) {
        let ab = a.try_mul(&b).unwrap();
        prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
    }

    #[test]
    fn signature_is_a_congruence_invariant(m in symmetric_strategy(4), p in invertible_strategy(4)) {
        let congruent = p.transpose().try_mul(&m).unwrap().try_mul(&p).unwrap();
        let s = m.signature().unwrap();
        prop_assert_eq!(congruent.signature().unwrap(), s);
        prop_assert_eq!(s.dimension(), 4);
        prop_assert_eq!(s.zeros, 4 - m.rank());
    }

    #[test]
    fn signature_of_diagonal_counts_signs(entries in prop::collection::vec(-3i64..=3, 1..6)) {
        let d = RationalMatrix::diagonal(&entries.iter().map(|&e| int(e)).collect::<Vec<_>>());
        let expected = Signature::new(
            entries.iter().filter(|&&e| e > 0).count(),
            entries.iter().filter(|&&e| e < 0).count(),
            entries.iter().filter(|&&e| e == 0).count(),
        );
        prop_assert_eq!(d.signature().unwrap(), expected);
    }

    #[test]
    fn cayley_hamilton(m in matrix_strategy(4, 4)) {
        let coeffs = m.characteristic_polynomial().unwrap();
        prop_assert_eq!(coeffs.len(), 5);
        let mut acc = RationalMatrix::zeros(4, 4);
        let mut power = RationalMatrix::identity(4);
        for c in &coeffs {
            acc = acc.try_add(&power.scale(c)).unwrap();
            power = power.try_mul(&m).unwrap();
        }
        prop_assert!(acc.is_zero());
        // constant term is (-1)^n det
        prop_assert_eq!(coeffs[0].clone(), m.determinant().unwrap());
    }

    #[test]
    fn nullspace_is_the_kernel(m in prop::collection::vec(-2i64..=2, 12)) {
        let m = RationalMatrix::new(3, 4, m.into_iter().map(int).collect()).unwrap();
        let null = m.nullspace();
        prop_assert_eq!(null.len(), 4 - m.rank());
        for v in &null {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_is_two_sided(a in invertible_strategy(3)) {
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.try_mul(&inv).unwrap(), RationalMatrix::identity(3));
        prop_assert_eq!(inv.try_mul(&a).unwrap(), RationalMatrix::identity(3));
        prop_assert_eq!(inv.determinant().unwrap() * a.determinant().unwrap(), int(1));
    }
}

#[test]
fn determinant_sign_matches_lorentzian_signature() {
    // a (1, 2) symmetric 3x3 matrix has positive determinant
    let m = RationalMatrix::diagonal(&[int(2), int(-1), int(-3)]);
    assert_eq!(m.signature().unwrap(), Signature::new(1, 2, 0));
    assert!(m.determinant().unwrap() > Rational::zero());
}
