//! Invariants of covariants, curvature, cones and the deformation operator.

use hessform_core::cones::{classify_point, sample_cone, ConeKind, SamplingBox};
use hessform_core::covariants::{aronhold_invariant, clebsch_covariant, equivariance_check, hessian_det};
use hessform_core::curvature::{theorem_curv_check, CurvatureError, HessianGeometry, PlaneSpec};
use hessform_core::poly::monomials_of_degree;
use hessform_core::scalar::{int, rat, rational_powi};
use hessform_core::tangent::{first_variation_clebsch, t_operator, variation_closed};
use hessform_core::{parse_form, Form, Rational, RationalMatrix, Signature};
use num_traits::Zero;
use proptest::prelude::*;

fn form_strategy(arity: usize, degree: u32, bound: i64) -> impl Strategy<Value = Form> {
    let basis = monomials_of_degree(arity, degree);
    prop::collection::vec(-bound..=bound, basis.len())
        .prop_map(move |c| Form::from_terms(arity, basis.clone().into_iter().zip(c.into_iter().map(int))))
}

fn nonzero_form(arity: usize, degree: u32, bound: i64) -> impl Strategy<Value = Form> {
    form_strategy(arity, degree, bound).prop_filter("nonzero", |f| !f.is_zero())
}

fn point_strategy(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-12i64..=12, 1i64..=4), n).prop_map(|v| v.into_iter().map(|(p, q)| rat(p, q)).collect())
}

fn invertible_strategy() -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-2i64..=2, 9)
        .prop_map(|v| RationalMatrix::new(3, 3, v.into_iter().map(int).collect()).unwrap())
        .prop_filter("invertible", |m| !m.determinant().unwrap().is_zero())
}

fn quartic() -> Form {
    parse_form("x*y*z*(x+y+z)", 3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn clebsch_has_degree_4d_minus_12(f in nonzero_form(3, 4, 4)) {
        let s = clebsch_covariant(&f).unwrap();
        prop_assert!(s.is_zero() || s.homogeneous_degree() == Some(4));
        let h = hessian_det(&f);
        prop_assert!(h.is_zero() || h.homogeneous_degree() == Some(6));
    }

    #[test]
    fn clebsch_of_cubic_is_1296_aronhold(f in form_strategy(3, 3, 6)) {
        let s = clebsch_covariant(&f).unwrap();
        prop_assert_eq!(s.as_constant(), Some(aronhold_invariant(&f).unwrap() * int(1296)));
    }

    #[test]
    fn covariants_are_equivariant(f in nonzero_form(3, 3, 4), a in invertible_strategy()) {
        let r = equivariance_check(&f, &a).unwrap();
        prop_assert!(r.passed());
    }

    #[test]
    fn metric_scales_with_degree_minus_two(f in nonzero_form(3, 4, 3), p in point_strategy(3), lam in 1i64..5) {
        let geo = HessianGeometry::new(&f).unwrap();
        let lam = rat(lam, 2);
        let scaled: Vec<Rational> = p.iter().map(|c| c * &lam).collect();
        prop_assert_eq!(geo.metric_matrix(&scaled).unwrap(), geo.metric_matrix(&p).unwrap().scale(&(&lam * &lam)));
    }

    #[test]
    fn christoffel_symbols_are_symmetric(f in nonzero_form(3, 3, 5), p in point_strategy(3)) {
        let c = HessianGeometry::new(&f).unwrap().christoffel_at(&p).unwrap();
        for (i, j, k) in [(0, 1, 2), (0, 0, 1), (1, 2, 2)] {
            prop_assert_eq!(c.get(i, j, k), c.get(j, k, i));
            prop_assert_eq!(c.get(i, j, k), c.get(k, j, i));
        }
    }

    /// `curvature_at` rejects any tensor that breaks an index symmetry or
    /// the first Bianchi identity.
    #[test]
    fn tensor_symmetries_hold(f in nonzero_form(4, 3, 3), p in point_strategy(4)) {
        match HessianGeometry::new(&f).unwrap().curvature_at(&p) {
            Ok(r) => prop_assert!(r.symmetry_violation().is_none()),
            Err(CurvatureError::DegenerateMetric) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn sectional_curvature_is_basis_independent_and_scales(
        f in nonzero_form(3, 4, 3), p in point_strategy(3), u in point_strategy(3), v in point_strategy(3),
    ) {
        let geo = HessianGeometry::new(&f).unwrap();
        let plane = PlaneSpec::new(u.clone(), v.clone());
        let Ok(k) = geo.sectional_curvature(&p, &plane) else { return Ok(()); };
        let sum: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let twice: Vec<Rational> = v.iter().map(|b| b * int(2)).collect();
        prop_assert_eq!(geo.sectional_curvature(&p, &PlaneSpec::new(sum, twice)).unwrap(), k.clone());
        for c in [int(2), int(3), rat(1, 2)] {
            let cp: Vec<Rational> = p.iter().map(|x| x * &c).collect();
            let kc = geo.sectional_curvature(&cp, &plane).unwrap();
            prop_assert_eq!(kc * rational_powi(&c, 4), k.clone());
        }
    }

    #[test]
    fn binary_sums_are_flat(a in nonzero_form(2, 4, 4), b in nonzero_form(2, 4, 4), p in point_strategy(4)) {
        let f = &a.embed(4, &[0, 1]) + &b.embed(4, &[2, 3]);
        match HessianGeometry::new(&f).unwrap().curvature_at(&p) {
            Ok(r) => prop_assert!(r.is_zero()),
            Err(CurvatureError::DegenerateMetric) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn tensor_and_covariant_routes_agree(f in nonzero_form(3, 4, 3), p in point_strategy(3)) {
        if let Ok(rep) = theorem_curv_check(&f, &[p]) {
            prop_assert!(rep.all_agree());
        }
    }

    #[test]
    fn cone_classification_is_ray_invariant(p in point_strategy(3)) {
        prop_assume!(p.iter().any(|c| !c.is_zero()));
        let f = quartic();
        let base = classify_point(&f, &p).unwrap();
        prop_assert!(base.is_consistent());
        prop_assert!(!base.in_index_cone || base.in_positive_cone);
        for lam in [int(2), rat(1, 3)] {
            let q: Vec<Rational> = p.iter().map(|c| c * &lam).collect();
            let c = classify_point(&f, &q).unwrap();
            prop_assert_eq!(c.in_index_cone, base.in_index_cone);
            prop_assert_eq!(c.in_positive_cone, base.in_positive_cone);
        }
    }

    #[test]
    fn t_kills_the_expected_span(alpha in nonzero_form(2, 5, 5)) {
        for h in [
            Form::one(2),
            Form::var(2, 0),
            Form::var(2, 1),
            alpha.derivative(0).unwrap(),
            alpha.derivative(1).unwrap(),
            alpha.clone(),
        ] {
            prop_assert!(t_operator(&alpha, &h).unwrap().is_zero());
        }
    }

    #[test]
    fn variation_is_linear(alpha in nonzero_form(2, 4, 4), g1 in form_strategy(3, 4, 3), g2 in form_strategy(3, 4, 3)) {
        let sum = variation_closed(&alpha, &(&g1 + &g2)).unwrap();
        let parts = &variation_closed(&alpha, &g1).unwrap() + &variation_closed(&alpha, &g2).unwrap();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn variation_shifts_z_degree(alpha in nonzero_form(2, 5, 4), g in form_strategy(3, 5, 3)) {
        let d = 5;
        for (a, part) in g.grade_by_variable(2) {
            let v = variation_closed(&alpha, &part).unwrap();
            for &e in v.grade_by_variable(2).keys() {
                prop_assert_eq!(e, a - 1 + d - 3);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn variation_routes_agree(alpha in nonzero_form(2, 4, 4), g in form_strategy(3, 4, 3)) {
        prop_assert!(first_variation_clebsch(&alpha, &g).is_ok());
    }
}

#[test]
fn index_cone_restriction_is_riemannian() {
    let f = quartic();
    let sample = sample_cone(&f, ConeKind::Index, 30, 11, SamplingBox::new(-3, 3)).unwrap();
    let geo = HessianGeometry::new(&f).unwrap();
    for c in &sample.points {
        assert_eq!(geo.restricted_signature(&c.point).unwrap(), Signature::new(2, 0, 0));
        assert_eq!(geo.metric_at(&c.point).unwrap().signature, Signature::new(2, 1, 0));
    }
}

#[test]
fn r4_cubic_index_cone_matches_description() {
    let f = parse_form("(x0^2+x1^2-x2^2-x3^2)*x3", 4).unwrap();
    let sample = sample_cone(&f, ConeKind::Index, 40, 3, SamplingBox::new(-3, 3)).unwrap();
    assert!(sample.is_complete());
    for c in &sample.points {
        let p = &c.point;
        let q = &p[0] * &p[0] + &p[1] * &p[1] - &p[2] * &p[2] + int(3) * &p[3] * &p[3];
        assert!(p[3] < Rational::zero() && q < Rational::zero());
    }
}
