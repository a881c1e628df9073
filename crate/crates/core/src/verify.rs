//! The verification suite: one registry entry per acceptance criterion, each
//! producing named pass/fail results.
//!
//! Every entry is deterministic for a given seed. Entries run in parallel but
//! the report keeps registry order.

use std::error::Error;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cones::{classify_point, cone_comparison, curvature_scan, sample_cone, ConeKind, SamplingBox, ScanMode};
use crate::covariants::{
    aronhold_invariant, binary_power_of_linear, clebsch_aronhold_ratio, clebsch_covariant, equivariance_check,
    hessian_det, simplified_clebsch_cases, BinaryDegeneracy, StructuralCase,
};
use crate::curvature::{
    fd_curvature_oracle, flatness_certificate, log_metric_product_check, theorem_curv_check, warp_scaling_check,
    CovariantCurvature, HessianGeometry, PlaneSpec,
};
use crate::poly::monomials_of_degree;
use crate::report::{CheckResult, RunReport};
use crate::sampling::{
    random_dense_form, random_form, random_invertible_matrix, random_nonzero_rational, seeded_rng, PointSampler,
};
use crate::scalar::{int, rat, rational_string, Rational};
use crate::tangent::{
    closure_limit_expand, expected_kernel_dimensions, expected_zero_set, first_variation_clebsch, kernel_of_t,
    monomial_eigenvalue, monomial_spectrum, t_operator, witness_alpha, witness_factor, zariski_tangent_compare,
};
use crate::xlinalg::Signature;
use crate::{parse_form, Form, Monomial};

pub const DEFAULT_SEED: u64 = 42;

/// Hessian identity time budget.
pub const HESSIAN_TIME_BUDGET: Duration = Duration::from_millis(100);
pub const ARONHOLD_CUBICS: usize = 100;
pub const EQUIVARIANCE_PAIRS: usize = 50;
pub const CURV_FORMS: usize = 10;
pub const CURV_POINTS: usize = 20;
pub const FD_FORMS: usize = 10;
pub const FD_STEP: f64 = 1e-4;
pub const FD_RELATIVE_TOLERANCE: f64 = 1e-5;
pub const FD_ABSOLUTE_TOLERANCE: f64 = 1e-8;
pub const FLAT_POINTS: usize = 10;
pub const QUARTIC_POSITIVE_SAMPLES: usize = 500;
pub const QUARTIC_INDEX_SAMPLES: usize = 200;
pub const CUBIC_PREDICATE_SAMPLES: u64 = 1000;
pub const CUBIC_CONE_SAMPLES: usize = 50;
pub const HYPERBOLIC_SAMPLES: usize = 20;
pub const STRUCTURED_QUARTICS: usize = 20;
pub const POWER_SAMPLES: usize = 50;
pub const CLOSURE_PER_DEGREE: usize = 5;
pub const VARIATION_PAIRS: usize = 20;
pub const ANNIHILATION_SAMPLES: usize = 50;
pub const LOG_METRIC_SAMPLES: usize = 5;
pub const LOG_METRIC_TOLERANCE: f64 = 1e-8;

type BoxError = Box<dyn Error + Send + Sync>;
type Outcome = std::result::Result<CheckResult, BoxError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown section `{0}` (known: all, {known})", known = SECTIONS.join(", "))]
    UnknownSection(String),
    #[error("unknown criterion {0} (known: 1..=15)")]
    UnknownCriterion(u32),
}

/// One registry entry.
pub struct Check {
    pub criterion: u32,
    pub section: &'static str,
    pub title: &'static str,
    run: fn(u64) -> Vec<CheckResult>,
}

impl Check {
    pub fn run(&self, seed: u64) -> Vec<CheckResult> {
        (self.run)(seed)
    }
}

pub const SECTIONS: [&str; 14] = [
    "lemma-quartic",
    "aronhold",
    "equivariance",
    "theorem-curv",
    "fd-oracle",
    "flatness",
    "oneill",
    "lemma-cubic",
    "hyperbolic",
    "theorem-four",
    "lemma-closure",
    "theorem-irred",
    "lemma-general",
    "log-metric",
];

pub static REGISTRY: [Check; 16] = [
    Check {
        criterion: 1,
        section: "lemma-quartic",
        title: "Hessian of xyz(x+y+z)",
        run: c1_quartic_hessian,
    },
    Check {
        criterion: 2,
        section: "lemma-quartic",
        title: "Clebsch covariant of xyz(x+y+z)",
        run: c2_quartic_clebsch,
    },
    Check {
        criterion: 3,
        section: "aronhold",
        title: "S(cubic) = 1296 * Aronhold(cubic)",
        run: c3_aronhold,
    },
    Check {
        criterion: 4,
        section: "equivariance",
        title: "equivariance of H and S",
        run: c4_equivariance,
    },
    Check {
        criterion: 5,
        section: "theorem-curv",
        title: "tensor and covariant K_M agree",
        run: c5_theorem_curv,
    },
    Check {
        criterion: 6,
        section: "fd-oracle",
        title: "finite-difference curvature oracle",
        run: c6_fd_oracle,
    },
    Check {
        criterion: 7,
        section: "flatness",
        title: "flat Hessian metrics",
        run: c7_flatness,
    },
    Check {
        criterion: 8,
        section: "oneill",
        title: "scaling of ambient curvature",
        run: c8_ray_scaling,
    },
    Check {
        criterion: 9,
        section: "lemma-quartic",
        title: "index cone and curvature of xyz(x+y+z)",
        run: c9_quartic_cones,
    },
    Check {
        criterion: 10,
        section: "lemma-cubic",
        title: "index cone and curvature of the cubic",
        run: c10_cubic,
    },
    Check {
        criterion: 11,
        section: "hyperbolic",
        title: "quadratic forms give K_M = -1",
        run: c11_hyperbolic,
    },
    Check {
        criterion: 12,
        section: "theorem-four",
        title: "simplified Clebsch formulas, binary powers",
        run: c12_theorem_four,
    },
    Check {
        criterion: 13,
        section: "lemma-closure",
        title: "closure family expansion",
        run: c13_closure,
    },
    Check {
        criterion: 14,
        section: "theorem-irred",
        title: "first variation and Zariski tangent space",
        run: c14_variation,
    },
    Check {
        criterion: 14,
        section: "lemma-general",
        title: "monomial spectrum and kernels of T",
        run: c14_spectrum,
    },
    Check {
        criterion: 15,
        section: "log-metric",
        title: "log-metric product isometry",
        run: c15_log_metric,
    },
];

/// Results of all registry entries for one criterion.
#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub criterion: u32,
    pub title: String,
    pub results: Vec<CheckResult>,
    pub elapsed: Duration,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        !self.results.is_empty() && self.results.iter().all(CheckResult::passed)
    }

    pub fn summary_line(&self) -> String {
        let failed: Vec<&str> = self
            .results
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.name.as_str())
            .collect();
        let mut line = format!(
            "[{}] criterion {:>2}: {} ({} checks, {} ms)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.criterion,
            self.title,
            self.results.len(),
            self.elapsed.as_millis()
        );
        if !failed.is_empty() {
            line.push_str(&format!(" failing: {}", failed.join(", ")));
        }
        line
    }
}

pub fn run_criterion(criterion: u32, seed: u64) -> Result<CriterionOutcome, VerifyError> {
    let entries: Vec<&Check> = REGISTRY.iter().filter(|c| c.criterion == criterion).collect();
    if entries.is_empty() {
        return Err(VerifyError::UnknownCriterion(criterion));
    }
    let start = Instant::now();
    let results: Vec<Vec<CheckResult>> = entries.par_iter().map(|c| c.run(seed)).collect();
    Ok(CriterionOutcome {
        criterion,
        title: entries.iter().map(|c| c.title).collect::<Vec<_>>().join("; "),
        results: results.into_iter().flatten().collect(),
        elapsed: start.elapsed(),
    })
}

/// Runs every registry entry (`selection = "all"`) or the entries of one
/// section.
pub fn run_verify_suite(selection: &str, seed: u64) -> Result<RunReport, VerifyError> {
    if selection != "all" && !SECTIONS.contains(&selection) {
        return Err(VerifyError::UnknownSection(selection.to_string()));
    }
    let start = Instant::now();
    let selected: Vec<&Check> = REGISTRY
        .iter()
        .filter(|c| selection == "all" || c.section == selection)
        .collect();
    let results: Vec<Vec<CheckResult>> = selected.par_iter().map(|c| c.run(seed)).collect();
    let mut report = RunReport::new("verify").input("section", selection).input("seed", seed);
    for r in results.into_iter().flatten() {
        report.push(r);
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

fn attempt(name: impl Into<String>, body: impl FnOnce(String) -> Outcome) -> CheckResult {
    let name = name.into();
    body(name.clone()).unwrap_or_else(|e| CheckResult::new(name, false).with_detail(format!("error: {e}")))
}

fn form(text: &str, arity: usize) -> Form {
    parse_form(text, arity).expect("built-in form parses")
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn point_text(p: &[Rational]) -> String {
    format!("({})", p.iter().map(rational_string).collect::<Vec<_>>().join(", "))
}

const QUARTIC: &str = "x*y*z*(x+y+z)";
const QUARTIC_Q: &str = "x^2+y^2+z^2+x*y+x*z+y*z";
const QUARTIC_S_OVER_16: &str = "x^4+2*x^3*y+3*x^2*y^2+2*x*y^3+y^4+2*x^3*z+7*x^2*y*z+7*x*y^2*z\
    +2*y^3*z+3*x^2*z^2+3*y^2*z^2+7*x*y*z^2+2*x*z^3+2*y*z^3+z^4";
const TERNARY_CUBIC: &str = "(x^2-y^2-z^2)*z";
const CUBIC_R4: &str = "(x0^2+x1^2-x2^2-x3^2)*x3";
const MASCHKE: &str = "x^6+y^6+z^6-10*(x^3*y^3+y^3*z^3+z^3*x^3)";
const LORENTZ: &str = "x^2-y^2-z^2";

fn quartic() -> Form {
    form(QUARTIC, 3)
}

// ---------------------------------------------------------------- 1, 2

fn c1_quartic_hessian(_seed: u64) -> Vec<CheckResult> {
    vec![attempt("quartic: H(f) = 6 f q", |name| {
        let f = quartic();
        let expected = &f * &form(QUARTIC_Q, 3).scale(&int(6));
        let start = Instant::now();
        let h = hessian_det(&f);
        let elapsed = start.elapsed();
        Ok(CheckResult::new(name, h == expected && elapsed < HESSIAN_TIME_BUDGET)
            .with_exact(h.to_string())
            .with_detail(format!("{} us", elapsed.as_micros())))
    })]
}

fn c2_quartic_clebsch(_seed: u64) -> Vec<CheckResult> {
    let f = quartic();
    let s = clebsch_covariant(&f);
    let q = form(QUARTIC_Q, 3);
    vec![
        attempt("quartic: S(f) = 16 * displayed quartic", |name| {
            let s = s.clone()?;
            let expected = form(QUARTIC_S_OVER_16, 3).scale(&int(16));
            Ok(CheckResult::new(name, s == expected && expected.num_terms() == 15).with_exact(s.to_string()))
        }),
        attempt("quartic: S(f) - 16 q^2 = 48 f", |name| {
            let diff = &s.clone()? - &(&q * &q).scale(&int(16));
            Ok(CheckResult::new(name, diff == f.scale(&int(48))).with_exact(diff.to_string()))
        }),
    ]
}

// ---------------------------------------------------------------- 3, 4

fn c3_aronhold(seed: u64) -> Vec<CheckResult> {
    let mut rng = seeded_rng(seed, 3_000);
    let cubics: Vec<Form> = (0..ARONHOLD_CUBICS)
        .map(|_| random_dense_form(&mut rng, 3, 3, 5))
        .collect();
    let ratio = clebsch_aronhold_ratio();
    let mut bad = Vec::new();
    for (k, f) in cubics.iter().enumerate() {
        let ok = match (clebsch_covariant(f), aronhold_invariant(f)) {
            (Ok(s), Ok(a)) => s.as_constant() == Some(&a * &ratio),
            _ => false,
        };
        if !ok {
            bad.push(k);
        }
    }
    vec![
        CheckResult::new(format!("{ARONHOLD_CUBICS} random cubics"), bad.is_empty())
            .with_detail(format!("mismatches at {bad:?}")),
    ]
}

fn c4_equivariance(seed: u64) -> Vec<CheckResult> {
    let mut rng = seeded_rng(seed, 4_000);
    let pairs: Vec<(Form, _)> = (0..EQUIVARIANCE_PAIRS)
        .map(|k| {
            let d = 3 + (k % 3) as u32;
            let f = random_form(&mut rng, 3, d, 4, 0.7);
            let a = random_invertible_matrix(&mut rng, 3, 2);
            (f, a)
        })
        .collect();
    let outcomes: Vec<(bool, bool)> = pairs
        .par_iter()
        .map(|(f, a)| match equivariance_check(f, a) {
            Ok(r) => (r.hessian_holds(), r.clebsch_residual.is_some() && r.clebsch_holds()),
            Err(_) => (false, false),
        })
        .collect();
    let h_bad = outcomes.iter().filter(|o| !o.0).count();
    let s_bad = outcomes.iter().filter(|o| !o.1).count();
    vec![
        CheckResult::new(
            format!("H(fA) = H(f)(Ax) det^2, {EQUIVARIANCE_PAIRS} pairs"),
            h_bad == 0,
        )
        .with_detail(format!("{h_bad} failures")),
        CheckResult::new(
            format!("S(fA) = S(f)(Ax) det^4, {EQUIVARIANCE_PAIRS} pairs"),
            s_bad == 0,
        )
        .with_detail(format!("{s_bad} failures")),
    ]
}

// ---------------------------------------------------------------- 5, 6

/// Points where `f`, `H(f)` and the level-surface curvature are all defined.
fn regular_points(f: &Form, count: usize, seed: u64) -> std::result::Result<Vec<Vec<Rational>>, BoxError> {
    let geo = HessianGeometry::new(f)?;
    let cov = CovariantCurvature::new(f)?;
    let sampler = PointSampler::new(seed, 3).with_box(-3, 3).with_max_den(3);
    let mut points = Vec::new();
    for index in 0..(count as u64) * 50 {
        if points.len() == count {
            break;
        }
        let p = sampler.point(index);
        if f.evaluate(&p)?.is_zero() || cov.hessian().evaluate(&p)?.is_zero() {
            continue;
        }
        if geo.surface_curvature(&p).is_ok() {
            points.push(p);
        }
    }
    if points.len() < count {
        return Err(format!("found only {} regular points", points.len()).into());
    }
    Ok(points)
}

fn c5_theorem_curv(seed: u64) -> Vec<CheckResult> {
    let mut rng = seeded_rng(seed, 5_000);
    let forms: Vec<Form> = (0..CURV_FORMS)
        .map(|k| random_form(&mut rng, 3, 3 + (k % 4) as u32, 3, 0.8))
        .collect();
    forms
        .par_iter()
        .enumerate()
        .map(|(k, f)| {
            let d = f.homogeneous_degree().unwrap_or(0);
            attempt(format!("random ternary form #{k} (degree {d})"), |name| {
                let points = regular_points(f, CURV_POINTS, seed.wrapping_add(k as u64))?;
                let rep = theorem_curv_check(f, &points)?;
                let bad = rep.rows.iter().filter(|r| !r.agrees()).count();
                Ok(CheckResult::new(name, bad == 0 && rep.rows.len() == CURV_POINTS)
                    .with_detail(format!("{} points, {bad} disagreements", rep.rows.len())))
            })
        })
        .collect()
}

fn fd_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| f64::from(rng.gen_range(-12..=12)) / 4.0).collect()
}

fn c6_fd_oracle(seed: u64) -> Vec<CheckResult> {
    let mut rng = seeded_rng(seed, 6_000);
    let forms: Vec<Form> = (0..FD_FORMS)
        .map(|k| random_form(&mut rng, 3 + k % 2, 3 + (k % 3) as u32, 3, 0.8))
        .collect();
    let mut out: Vec<CheckResult> = forms
        .par_iter()
        .enumerate()
        .map(|(k, f)| {
            let mut prng = seeded_rng(seed, 6_100 + k as u64);
            attempt(
                format!(
                    "random form #{k} (arity {}, degree {})",
                    f.arity(),
                    f.homogeneous_degree().unwrap_or(0)
                ),
                |name| {
                    for _ in 0..100 {
                        let p = fd_point(&mut prng, f.arity());
                        match fd_curvature_oracle(f, &p, FD_STEP) {
                            Ok(r) => {
                                return Ok(CheckResult::new(name, r.relative_deviation < FD_RELATIVE_TOLERANCE)
                                    .with_float(r.relative_deviation)
                                    .with_detail(format!("at {p:?}")))
                            }
                            Err(crate::curvature::CurvatureError::IllConditioned(_))
                            | Err(crate::curvature::CurvatureError::DegenerateMetric) => continue,
                            Err(e) => return Err(e.into()),
                        }
                    }
                    Err("no well-conditioned point found".into())
                },
            )
        })
        .collect();
    out.push(attempt("xyz(x+y+z) at (1,1,1)", |name| {
        let r = fd_curvature_oracle(&quartic(), &[1.0, 1.0, 1.0], FD_STEP)?;
        Ok(CheckResult::new(name, r.relative_deviation < FD_RELATIVE_TOLERANCE).with_float(r.relative_deviation))
    }));
    out.push(attempt("quadratic form, absolute deviation", |name| {
        let r = fd_curvature_oracle(&form("x^2-2*y^2+x*z-z^2", 3), &[1.0, 0.5, -0.25], FD_STEP)?;
        Ok(CheckResult::new(name, r.max_abs_deviation < FD_ABSOLUTE_TOLERANCE).with_float(r.max_abs_deviation))
    }));
    out
}

// ---------------------------------------------------------------- 7, 8

fn sum_of_binary_forms(rng: &mut impl Rng, arity: usize, degree: u32) -> Form {
    let mut f = Form::zero(arity);
    let mut i = 0;
    while i + 1 < arity {
        f = &f + &random_dense_form(rng, 2, degree, 4).embed(arity, &[i, i + 1]);
        i += 2;
    }
    if i < arity {
        let c = random_nonzero_rational(rng, 4, 1);
        f = &f + &Form::var(arity, i).pow(degree).scale(&c);
    }
    f
}

fn fermat(arity: usize, degree: u32) -> Form {
    let mut f = Form::var(arity, 0).pow(degree);
    for i in 1..arity {
        f = &f - &Form::var(arity, i).pow(degree);
    }
    f
}

fn c7_flatness(seed: u64) -> Vec<CheckResult> {
    let mut rng = seeded_rng(seed, 7_000);
    let mut cases: Vec<(String, Form, bool)> = Vec::new();
    for d in 3..=6 {
        cases.push((
            format!("binary form of degree {d}"),
            random_dense_form(&mut rng, 2, d, 5),
            true,
        ));
    }
    for (arity, d) in [(4, 4), (4, 5), (5, 4), (5, 3)] {
        cases.push((
            format!("sum of binary forms, arity {arity}, degree {d}"),
            sum_of_binary_forms(&mut rng, arity, d),
            true,
        ));
    }
    for (arity, d) in [(3, 3), (3, 4), (4, 3), (4, 5), (5, 4)] {
        cases.push((
            format!("Fermat form, arity {arity}, degree {d}"),
            fermat(arity, d),
            true,
        ));
    }
    cases.push(("Maschke sextic".into(), form(MASCHKE, 3), true));
    cases.push(("xyz(x+y+z) is not flat".into(), quartic(), false));
    let mut out: Vec<CheckResult> = cases
        .par_iter()
        .enumerate()
        .map(|(k, (name, f, flat))| {
            attempt(name.clone(), |name| {
                let v = flatness_certificate(f, FLAT_POINTS, seed.wrapping_add(k as u64))?;
                Ok(CheckResult::new(name, v.is_flat() == *flat).with_detail(v.explanation()))
            })
        })
        .collect();
    out.push(attempt("S(Maschke) = 0", |name| {
        let s = clebsch_covariant(&form(MASCHKE, 3))?;
        Ok(CheckResult::new(name, s.is_zero()).with_exact(s.to_string()))
    }));
    out
}

fn tangent_plane(geo: &HessianGeometry, p: &[Rational]) -> std::result::Result<PlaneSpec, BoxError> {
    let basis = geo.level_set_tangent_basis(p)?;
    Ok(PlaneSpec::new(basis[0].clone(), basis[1].clone()))
}

fn c8_ray_scaling(_seed: u64) -> Vec<CheckResult> {
    let scales = [int(2), int(3), rat(1, 2)];
    let cases = [
        ("xyz(x+y+z) at (1,1,1)", quartic(), ints(&[1, 1, 1])),
        ("(x^2-y^2-z^2)z at (0,2,-1)", form(TERNARY_CUBIC, 3), ints(&[0, 2, -1])),
        (
            "(x0^2+x1^2-x2^2-x3^2)x3 at (0,0,2,-1)",
            form(CUBIC_R4, 4),
            ints(&[0, 0, 2, -1]),
        ),
        ("x^2-y^2-z^2 at (3,1,1)", form(LORENTZ, 3), ints(&[3, 1, 1])),
    ];
    cases
        .iter()
        .map(|(name, f, p)| {
            attempt(*name, |name| {
                let geo = HessianGeometry::new(f)?;
                let plane = tangent_plane(&geo, p)?;
                let rep = warp_scaling_check(f, p, &plane, &scales)?;
                Ok(CheckResult::new(name, rep.passed()).with_rational(&rep.base_k_m))
            })
        })
        .collect()
}

// ---------------------------------------------------------------- 9, 10, 11

fn c9_quartic_cones(seed: u64) -> Vec<CheckResult> {
    let f = quartic();
    let one = ints(&[1, 1, 1]);
    vec![
        attempt("(1,1,1) is in the index cone with signature (1,2,0)", |name| {
            let c = classify_point(&f, &one)?;
            Ok(
                CheckResult::new(name, c.in_index_cone && c.hessian_signature == Signature::new(1, 2, 0))
                    .with_exact(c.hessian_signature.to_string()),
            )
        }),
        attempt(
            format!("index cone = positive cone on {QUARTIC_POSITIVE_SAMPLES} samples"),
            |name| {
                let s = sample_cone(
                    &f,
                    ConeKind::Positive,
                    QUARTIC_POSITIVE_SAMPLES,
                    seed,
                    SamplingBox::new(-3, 3),
                )?;
                let cmp = cone_comparison(&f, &s.coordinates())?;
                Ok(CheckResult::new(name, s.is_complete() && cmp.agrees())
                    .with_detail(format!("{} discrepancies", cmp.discrepancies.len())))
            },
        ),
        attempt(
            format!("K_M > 0 and H > 0 at {QUARTIC_INDEX_SAMPLES} index-cone samples"),
            |name| {
                let s = sample_cone(
                    &f,
                    ConeKind::Index,
                    QUARTIC_INDEX_SAMPLES,
                    seed ^ 0x9,
                    SamplingBox::new(-3, 3),
                )?;
                let pts = s.coordinates();
                let table = curvature_scan(&f, &pts, ScanMode::KM)?;
                let h = hessian_det(&f);
                let h_positive = pts
                    .iter()
                    .map(|p| h.evaluate(p).map(|v| v.is_positive()))
                    .collect::<std::result::Result<Vec<_>, _>>()?
                    .into_iter()
                    .all(|b| b);
                let mut r = CheckResult::new(name, s.is_complete() && table.all_positive() && h_positive);
                if let Some(m) = &table.min {
                    r = r.with_rational(m).with_detail("minimum K_M");
                }
                Ok(r)
            },
        ),
        attempt("K_M(1,1,1) = 1 by both routes", |name| {
            let tensor = HessianGeometry::new(&f)?.surface_curvature(&one)?;
            let covariant = CovariantCurvature::new(&f)?.k_m(&one)?;
            Ok(CheckResult::new(name, tensor == int(1) && covariant == int(1)).with_rational(&tensor))
        }),
    ]
}

fn cubic_index_predicate(p: &[Rational]) -> bool {
    let q = &p[0] * &p[0] + &p[1] * &p[1] - &p[2] * &p[2] + int(3) * &p[3] * &p[3];
    p[3].is_negative() && q.is_negative()
}

/// Ternary points `(x1, x2, x3)` with `(0, x1, x2, x3)` in the index cone of
/// the cubic on `R^4`.
fn slice_cone_samples(f4: &Form, count: usize, seed: u64) -> std::result::Result<Vec<Vec<Rational>>, BoxError> {
    let classifier = crate::cones::ConeClassifier::new(f4)?;
    let sampler = PointSampler::new(seed, 3).with_box(-3, 3);
    let mut out = Vec::new();
    for i in 0..(count as u64) * 200 {
        if out.len() == count {
            break;
        }
        let p = sampler.point(i);
        let mut p4 = vec![int(0)];
        p4.extend(p.iter().cloned());
        if p.iter().any(|c| !c.is_zero()) && classifier.classify(&p4)?.in_index_cone {
            out.push(p);
        }
    }
    Ok(out)
}

fn c10_cubic(seed: u64) -> Vec<CheckResult> {
    let f4 = form(CUBIC_R4, 4);
    let g = form(TERNARY_CUBIC, 3);
    vec![
        attempt(
            format!("index cone predicate on {CUBIC_PREDICATE_SAMPLES} samples"),
            |name| {
                let sampler = PointSampler::new(seed, 4).with_box(-3, 3);
                let classifier = crate::cones::ConeClassifier::new(&f4)?;
                let mismatches: usize = (0..CUBIC_PREDICATE_SAMPLES)
                    .into_par_iter()
                    .map(|i| {
                        let p = sampler.point(i);
                        match classifier.classify(&p) {
                            Ok(c) => usize::from(c.in_index_cone != cubic_index_predicate(&p)),
                            Err(_) => usize::from(cubic_index_predicate(&p)),
                        }
                    })
                    .sum();
                Ok(CheckResult::new(name, mismatches == 0).with_detail(format!("{mismatches} mismatches")))
            },
        ),
        attempt("H of the R^4 cubic = 16 x3^2 (x0^2+x1^2-x2^2+3 x3^2)", |name| {
            let h = hessian_det(&f4);
            Ok(CheckResult::new(name, h == form("16*x3^2*(x0^2+x1^2-x2^2+3*x3^2)", 4)).with_exact(h.to_string()))
        }),
        attempt("H(g) = 8 z (x^2-y^2+3 z^2)", |name| {
            let h = hessian_det(&g);
            Ok(CheckResult::new(name, h == form("8*z*(x^2-y^2+3*z^2)", 3)).with_exact(h.to_string()))
        }),
        attempt("S(g) = 16", |name| {
            let s = clebsch_covariant(&g)?;
            Ok(CheckResult::new(name, s == Form::constant(3, int(16))).with_exact(s.to_string()))
        }),
        attempt(
            format!("reduced K_M formula and positivity at {CUBIC_CONE_SAMPLES} cone samples"),
            |name| {
                let pts = slice_cone_samples(&f4, CUBIC_CONE_SAMPLES, seed)?;
                let geo = HessianGeometry::new(&g)?;
                let num = form("x^2-y^2-z^2", 3);
                let den = form("x^2-y^2+3*z^2", 3);
                let mut ok = pts.len() == CUBIC_CONE_SAMPLES;
                for p in &pts {
                    let k = geo.surface_curvature(p)?;
                    let ratio = num.evaluate(p)? / den.evaluate(p)?;
                    let formula = rat(-9, 4) + rat(9, 4) * &ratio * &ratio;
                    ok &= k == formula && k.is_positive();
                }
                Ok(CheckResult::new(name, ok).with_detail(format!("{} samples", pts.len())))
            },
        ),
        attempt("K_M(0,2,-1) = 54", |name| {
            let p = ints(&[0, 2, -1]);
            let k = HessianGeometry::new(&g)?.surface_curvature(&p)?;
            let kc = CovariantCurvature::new(&g)?.k_m(&p)?;
            Ok(CheckResult::new(name, k == int(54) && kc == int(54)).with_rational(&k))
        }),
    ]
}

fn c11_hyperbolic(seed: u64) -> Vec<CheckResult> {
    let q = form(LORENTZ, 3);
    vec![attempt(
        format!("x^2-y^2-z^2: K_M = -1 at {HYPERBOLIC_SAMPLES} samples"),
        |name| {
            let s = sample_cone(&q, ConeKind::Positive, HYPERBOLIC_SAMPLES, seed, SamplingBox::default())?;
            let table = curvature_scan(&q, &s.coordinates(), ScanMode::KM)?;
            let flat = s
                .coordinates()
                .iter()
                .map(|p| HessianGeometry::new(&q)?.curvature_at(p).map(|r| r.is_zero()))
                .collect::<std::result::Result<Vec<_>, _>>()?
                .into_iter()
                .all(|b| b);
            Ok(CheckResult::new(name, s.is_complete() && flat && table.all_equal(&int(-1))).with_rational(&int(-1)))
        },
    )]
}

// ---------------------------------------------------------------- 12, 13

fn c12_theorem_four(seed: u64) -> Vec<CheckResult> {
    let mut rng = seeded_rng(seed, 12_000);
    let mixed: Vec<Form> = (0..STRUCTURED_QUARTICS)
        .map(|_| {
            &random_dense_form(&mut rng, 2, 4, 4).embed(3, &[0, 1])
                + &random_dense_form(&mut rng, 2, 4, 4).embed(3, &[0, 2])
        })
        .collect();
    let pure: Vec<Form> = (0..STRUCTURED_QUARTICS)
        .map(|_| {
            &random_dense_form(&mut rng, 2, 4, 4).embed(3, &[0, 2])
                + &(&Form::var(3, 1) * &random_dense_form(&mut rng, 2, 3, 4).embed(3, &[0, 2]))
        })
        .collect();
    let case_holds = |f: &Form, case: StructuralCase| {
        simplified_clebsch_cases(f)
            .map(|cs| cs.iter().any(|c| c.case == case && c.holds()))
            .unwrap_or(false)
    };
    let mixed_ok = mixed
        .iter()
        .filter(|f| case_holds(f, StructuralCase::MixedYzVanishes))
        .count();
    let pure_ok = pure
        .iter()
        .filter(|f| case_holds(f, StructuralCase::PureYyVanishes))
        .count();

    let mut powers_ok = 0;
    let mut non_powers_ok = 0;
    for k in 0..POWER_SAMPLES {
        let e = 2 + (k % 5) as u32;
        let (a, b) = loop {
            let a = rng.gen_range(-3..=3);
            let b = rng.gen_range(-3..=3);
            if (a, b) != (0, 0) {
                break (int(a), int(b));
            }
        };
        let c = random_nonzero_rational(&mut rng, 5, 3);
        let linear = &Form::var(2, 0).scale(&a) + &Form::var(2, 1).scale(&b);
        let h = linear.pow(e).scale(&c);
        if let Ok(BinaryDegeneracy::PowerOfLinear {
            coefficient,
            linear,
            exponent,
        }) = binary_power_of_linear(&h)
        {
            if exponent == e && linear.pow(exponent).scale(&coefficient) == h {
                powers_ok += 1;
            }
        }
        // product of two non-proportional linear factors
        let other = loop {
            let p = rng.gen_range(-3..=3);
            let q = rng.gen_range(-3..=3);
            if int(p) * &b - int(q) * &a != int(0) {
                break &Form::var(2, 0).scale(&int(p)) + &Form::var(2, 1).scale(&int(q));
            }
        };
        let split = rng.gen_range(1..e);
        let g = (&linear.pow(split) * &other.pow(e - split)).scale(&c);
        if matches!(binary_power_of_linear(&g), Ok(BinaryDegeneracy::NotDegenerate { .. })) {
            non_powers_ok += 1;
        }
    }
    vec![
        CheckResult::new(
            format!("f_yz = 0 formula on {STRUCTURED_QUARTICS} quartics"),
            mixed_ok == STRUCTURED_QUARTICS,
        )
        .with_detail(format!("{mixed_ok} hold")),
        CheckResult::new(
            format!("f_yy = 0 formula on {STRUCTURED_QUARTICS} quartics"),
            pure_ok == STRUCTURED_QUARTICS,
        )
        .with_detail(format!("{pure_ok} hold")),
        CheckResult::new(
            format!("{POWER_SAMPLES} powers of linear forms recognised"),
            powers_ok == POWER_SAMPLES,
        )
        .with_detail(format!("{powers_ok} recognised")),
        CheckResult::new(
            format!("{POWER_SAMPLES} non-powers rejected"),
            non_powers_ok == POWER_SAMPLES,
        )
        .with_detail(format!("{non_powers_ok} rejected")),
    ]
}

fn c13_closure(seed: u64) -> Vec<CheckResult> {
    let mut rng = seeded_rng(seed, 13_000);
    let mut out = Vec::new();
    for d in 3..=6u32 {
        let mut ok = 0;
        for k in 0..CLOSURE_PER_DEGREE {
            let alpha = random_dense_form(&mut rng, 2, d, 5);
            let b = if k == 0 {
                int(0)
            } else {
                random_nonzero_rational(&mut rng, 6, 4)
            };
            if closure_limit_expand(&alpha, d, &b).map(|e| e.passed()).unwrap_or(false) {
                ok += 1;
            }
        }
        out.push(
            CheckResult::new(
                format!("degree {d}: no negative powers, c^0 = alpha + b x^(d-1) z"),
                ok == CLOSURE_PER_DEGREE,
            )
            .with_detail(format!("{ok}/{CLOSURE_PER_DEGREE}")),
        );
    }
    out.push(attempt("d = 3, b = 3, alpha = 0", |name| {
        let e = closure_limit_expand(&Form::zero(2), 3, &int(3))?;
        let expected = vec![form("3*x^2*z", 3), form("3*x*z^2", 3), form("z^3", 3)];
        Ok(CheckResult::new(name, e.passed() && e.coefficients == expected))
    }));
    out
}

// ---------------------------------------------------------------- 14

fn c14_variation(seed: u64) -> Vec<CheckResult> {
    let mut out: Vec<CheckResult> = (4..=6u32)
        .into_par_iter()
        .map(|d| {
            let mut rng = seeded_rng(seed, 14_000 + u64::from(d));
            let pairs: Vec<(Form, Form)> = (0..VARIATION_PAIRS)
                .map(|_| {
                    (
                        random_dense_form(&mut rng, 2, d, 4),
                        random_form(&mut rng, 3, d, 4, 0.5),
                    )
                })
                .collect();
            let agree = pairs
                .iter()
                .filter(|(a, g)| first_variation_clebsch(a, g).is_ok())
                .count();
            CheckResult::new(
                format!("degree {d}: dual-number and closed variations agree"),
                agree == VARIATION_PAIRS,
            )
            .with_detail(format!("{agree}/{VARIATION_PAIRS}"))
        })
        .collect();
    out.push(attempt("alpha = 6x^2y^2, g = y^3 z: variation -82944 y^3 z", |name| {
        let v = first_variation_clebsch(&witness_alpha(4), &form("y^3*z", 3))?;
        Ok(CheckResult::new(name, v.variation == form("-82944*y^3*z", 3)).with_exact(v.variation.to_string()))
    }));
    for (d, expected) in [(4u32, 10usize), (5, 11)] {
        out.push(attempt(
            format!("Zariski tangent space at C({d},2) x^{}y^2", d - 2),
            |name| {
                let r = zariski_tangent_compare(&witness_alpha(d))?;
                Ok(
                    CheckResult::new(name, r.certifies() && r.explicit_span_dimension == expected).with_detail(
                        format!(
                            "span {}, kernel {}",
                            r.explicit_span_dimension, r.linearization_kernel_dimension
                        ),
                    ),
                )
            },
        ));
    }
    out.push(attempt("alpha = x^4 flagged degenerate", |name| {
        let r = zariski_tangent_compare(&form("x^4", 2))?;
        Ok(CheckResult::new(name, r.degenerate))
    }));
    out
}

fn c14_spectrum(seed: u64) -> Vec<CheckResult> {
    let mut out: Vec<CheckResult> = (4..=9u32)
        .into_par_iter()
        .map(|d| {
            attempt(
                format!("degree {d}: spectrum, kernels and diagonal form of T"),
                |name| {
                    let spec = monomial_spectrum(d)?;
                    let alpha = witness_alpha(d);
                    let mut dims = Vec::new();
                    let mut kernel_monomials = std::collections::BTreeSet::new();
                    for r in 0..=d {
                        let k = kernel_of_t(&alpha, r)?;
                        dims.push(k.dimension());
                        for h in &k.basis {
                            if h.num_terms() != 1 {
                                return Ok(CheckResult::new(name, false).with_detail("kernel vector is not a monomial"));
                            }
                            let (m, _) = h.terms().next().expect("one term");
                            kernel_monomials.insert((m.exponents()[0], m.exponents()[1]));
                        }
                    }
                    let factor = witness_factor(d);
                    let mut diagonal = true;
                    for r in 0..=d {
                        for mono in monomials_of_degree(2, r) {
                            let (i, j) = (mono.exponents()[0], mono.exponents()[1]);
                            let t = t_operator(&alpha, &Form::monomial(mono.clone(), int(1)))?;
                            let expected = Form::monomial(Monomial::new(vec![i + 2 * d - 8, j]), int(1))
                                .scale(&(&factor * int(monomial_eigenvalue(d, i, j))));
                            diagonal &= t == expected;
                        }
                    }
                    let ok = spec.zero_set_matches()
                        && spec.discriminants_negative_from_three()
                        && dims == expected_kernel_dimensions(d)
                        && kernel_monomials == expected_zero_set(d)
                        && diagonal;
                    Ok(CheckResult::new(name, ok).with_detail(format!("kernel dimensions {dims:?}")))
                },
            )
        })
        .collect();
    let mut rng = seeded_rng(seed, 14_500);
    let mut annihilated = 0;
    for k in 0..ANNIHILATION_SAMPLES {
        let d = 4 + (k % 4) as u32;
        let alpha = random_dense_form(&mut rng, 2, d, 5);
        let span = [
            Form::one(2),
            Form::var(2, 0),
            Form::var(2, 1),
            alpha.derivative(0).expect("binary"),
            alpha.derivative(1).expect("binary"),
            alpha.clone(),
        ];
        if span
            .iter()
            .all(|h| t_operator(&alpha, h).map(|t| t.is_zero()).unwrap_or(false))
        {
            annihilated += 1;
        }
    }
    out.push(
        CheckResult::new(
            format!("T(alpha, .) kills 1, x, y, alpha_x, alpha_y, alpha for {ANNIHILATION_SAMPLES} random alpha"),
            annihilated == ANNIHILATION_SAMPLES,
        )
        .with_detail(format!("{annihilated}/{ANNIHILATION_SAMPLES}")),
    );
    out
}

// ---------------------------------------------------------------- 15

fn c15_log_metric(seed: u64) -> Vec<CheckResult> {
    let cases = [
        ("x^2-y^2-z^2", form(LORENTZ, 3), ConeKind::Positive),
        ("xyz(x+y+z)", quartic(), ConeKind::Index),
        ("(x^2-y^2-z^2)z", form(TERNARY_CUBIC, 3), ConeKind::Index),
    ];
    cases
        .iter()
        .map(|(name, f, kind)| {
            attempt(format!("{name}, {LOG_METRIC_SAMPLES} samples"), |name| {
                let s = sample_cone(f, *kind, LOG_METRIC_SAMPLES, seed, SamplingBox::new(-3, 3))?;
                let rep = log_metric_product_check(f, &s.coordinates(), LOG_METRIC_TOLERANCE)?;
                Ok(CheckResult::new(name, s.is_complete() && rep.passed())
                    .with_float(rep.max_deviation)
                    .with_detail(format!(
                        "samples {}",
                        s.coordinates()
                            .iter()
                            .map(|p| point_text(p))
                            .collect::<Vec<_>>()
                            .join(" ")
                    )))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_covers_every_criterion_and_section() {
        for c in 1..=15 {
            assert!(REGISTRY.iter().any(|e| e.criterion == c), "criterion {c}");
        }
        for s in SECTIONS {
            assert!(REGISTRY.iter().any(|e| e.section == s), "section {s}");
        }
    }

    #[test]
    fn unknown_selections_are_rejected() {
        assert_eq!(
            run_verify_suite("nope", 1).unwrap_err(),
            VerifyError::UnknownSection("nope".into())
        );
        assert!(run_criterion(16, 1).is_err());
    }

    #[test]
    fn quick_sections_pass() {
        for s in ["lemma-closure", "oneill"] {
            let rep = run_verify_suite(s, DEFAULT_SEED).unwrap();
            assert!(rep.passed(), "{}", rep.to_table());
        }
    }
}
