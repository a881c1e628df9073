//! One function per subcommand. Each returns a [`RunReport`]; the caller
//! decides how to print it.

use std::io::Write;

use hessform_core::cones::{
    classify_point, cone_comparison, curvature_scan, sample_cone, ConeKind, SamplingBox, ScanMode, ScanRow,
};
use hessform_core::covariants::{aronhold_invariant, clebsch_covariant, hessian_det};
use hessform_core::curvature::{
    covariant_k_m, fd_curvature_oracle, flatness_certificate, CurvatureError, FlatnessVerdict, HessianGeometry,
    PlaneSpec,
};
use hessform_core::report::{CheckResult, RunReport};
use hessform_core::scalar::rational_string;
use hessform_core::tangent::{
    closure_limit_expand, first_variation_clebsch, kernel_of_t, monomial_spectrum, t_operator, zariski_tangent_compare,
    TangentError,
};
use hessform_core::verify::{run_verify_suite, FD_ABSOLUTE_TOLERANCE, FD_RELATIVE_TOLERANCE, FD_STEP};
use hessform_core::{Form, Rational};
use num_traits::Zero;

use crate::input::{check_length, parse_box, parse_float_point, parse_plane, parse_point, parse_rational, read_form};
use crate::{
    ActionName, CliError, ConeAction, ConeArgs, CovariantAction, CurvatureAction, CurvatureArgs, Kind, Mode,
    TangentAction,
};

fn point_string(p: &[Rational]) -> String {
    p.iter().map(rational_string).collect::<Vec<_>>().join(",")
}

fn form_result(name: &str, f: &Form) -> CheckResult {
    CheckResult::new(name, true).with_exact(f.to_string())
}

pub fn covariant(action: CovariantAction, form: &str, arity: Option<usize>) -> Result<RunReport, CliError> {
    let f = read_form(form, arity)?;
    let mut report = RunReport::new(format!("covariant {}", action.name())).input("form", &f);
    match action {
        CovariantAction::Hessian => report.push(form_result("hessian", &hessian_det(&f))),
        CovariantAction::Aronhold => {
            report.push(CheckResult::new("aronhold", true).with_rational(&aronhold_invariant(&f)?))
        }
        CovariantAction::Clebsch => report.push(form_result("clebsch", &clebsch_covariant(&f)?)),
    }
    Ok(report)
}

fn required_point(args: &CurvatureArgs, arity: usize) -> Result<Vec<Rational>, CliError> {
    let text = args
        .point
        .as_deref()
        .ok_or_else(|| CliError::Input("--point is required".into()))?;
    let p = parse_point(text)?;
    check_length("point", &p, arity)?;
    Ok(p)
}

fn optional_plane(args: &CurvatureArgs, arity: usize) -> Result<Option<PlaneSpec>, CliError> {
    let Some(text) = args.plane.as_deref() else {
        return Ok(None);
    };
    let plane = parse_plane(text)?;
    check_length("plane vector", &plane.u, arity)?;
    check_length("plane vector", &plane.v, arity)?;
    Ok(Some(plane))
}

pub fn curvature(action: CurvatureAction, args: &CurvatureArgs, seed: u64) -> Result<RunReport, CliError> {
    let f = read_form(&args.form, args.arity)?;
    let n = f.arity();
    let mut report = RunReport::new(format!("curvature {}", action.name())).input("form", &f);
    match action {
        CurvatureAction::Tensor => {
            let p = required_point(args, n)?;
            report = report.input("point", point_string(&p));
            let r = HessianGeometry::new(&f)?.curvature_at(&p)?;
            report.push(CheckResult::new("symmetries", r.symmetry_violation().is_none()));
            for i in 0..n {
                for j in i + 1..n {
                    for k in 0..n {
                        for l in k + 1..n {
                            if (i, j) > (k, l) || r.get(i, j, k, l).is_zero() {
                                continue;
                            }
                            report.push(
                                CheckResult::new(format!("R_{i}{j}{k}{l}"), true).with_rational(r.get(i, j, k, l)),
                            );
                        }
                    }
                }
            }
            if r.is_zero() {
                report.push(CheckResult::new("tensor", true).with_exact("0"));
            }
        }
        CurvatureAction::Sectional => {
            let p = required_point(args, n)?;
            let plane = optional_plane(args, n)?.ok_or_else(|| CliError::Input("--plane is required".into()))?;
            report = report.input("point", point_string(&p)).input(
                "plane",
                format!("{}:{}", point_string(&plane.u), point_string(&plane.v)),
            );
            let k = HessianGeometry::new(&f)?.sectional_curvature(&p, &plane)?;
            report.push(CheckResult::new("K_U", true).with_rational(&k));
        }
        CurvatureAction::OnM => {
            let p = required_point(args, n)?;
            report = report.input("point", point_string(&p));
            let geo = HessianGeometry::new(&f)?;
            match optional_plane(args, n)? {
                Some(plane) => {
                    report = report.input(
                        "plane",
                        format!("{}:{}", point_string(&plane.u), point_string(&plane.v)),
                    );
                    let k = geo.sectional_curvature_on_level_set(&p, &plane)?;
                    report.push(CheckResult::new("K_M", true).with_rational(&k));
                }
                None => {
                    let k = geo.surface_curvature(&p)?;
                    report.push(CheckResult::new("K_M", true).with_rational(&k));
                    if geo.degree() >= 3 {
                        match covariant_k_m(&f, &p) {
                            Ok(c) => report.push(CheckResult::new("K_M from covariants", c == k).with_rational(&c)),
                            Err(CurvatureError::HessianVanishes) => {}
                            Err(e) => return Err(e.into()),
                        }
                    }
                }
            }
        }
        CurvatureAction::FlatCheck => {
            report = report.input("count", args.count).input("seed", seed);
            let verdict = flatness_certificate(&f, args.count, seed)?;
            let mut r = CheckResult::new("flat", verdict.is_flat());
            r = match &verdict {
                FlatnessVerdict::Flat { error_bound, .. } => {
                    r.with_float(*error_bound).with_detail(verdict.explanation())
                }
                FlatnessVerdict::NotFlat { witness, value, .. } => r.with_rational(value).with_detail(format!(
                    "{} at {}",
                    verdict.explanation(),
                    point_string(witness)
                )),
            };
            report.push(r);
        }
        CurvatureAction::FdOracle => {
            let text = args
                .point
                .as_deref()
                .ok_or_else(|| CliError::Input("--point is required".into()))?;
            let p = parse_float_point(text)?;
            check_length("point", &p, n)?;
            let step = args.step.unwrap_or(FD_STEP);
            report = report.input("point", text).input("step", step);
            let r = fd_curvature_oracle(&f, &p, step)?;
            let tolerance = if r.max_abs_exact == 0.0 {
                FD_ABSOLUTE_TOLERANCE
            } else {
                FD_RELATIVE_TOLERANCE
            };
            report.push(
                CheckResult::new("relative deviation", r.relative_deviation < tolerance)
                    .with_float(r.relative_deviation)
                    .with_detail(format!(
                        "max |R| = {:.6e}, max deviation = {:.3e}, tolerance {:.0e}",
                        r.max_abs_exact, r.max_abs_deviation, tolerance
                    )),
            );
        }
    }
    Ok(report)
}

fn sampling_box(args: &ConeArgs) -> Result<SamplingBox, CliError> {
    Ok(match args.r#box.as_deref() {
        Some(text) => {
            let (lo, hi) = parse_box(text)?;
            SamplingBox::new(lo, hi)
        }
        None => SamplingBox::default(),
    })
}

fn cone_kind(kind: Kind) -> ConeKind {
    match kind {
        Kind::Positive => ConeKind::Positive,
        Kind::Index => ConeKind::Index,
    }
}

pub fn cone(action: ConeAction, args: &ConeArgs, seed: u64, csv_out: &mut dyn Write) -> Result<RunReport, CliError> {
    let f = read_form(&args.form, args.arity)?;
    let bounds = sampling_box(args)?;
    let mut report = RunReport::new(format!("cone {}", action.name())).input("form", &f);
    if action == ConeAction::Classify {
        let text = args
            .point
            .as_deref()
            .ok_or_else(|| CliError::Input("--point is required".into()))?;
        let p = parse_point(text)?;
        check_length("point", &p, f.arity())?;
        report = report.input("point", point_string(&p));
        let c = classify_point(&f, &p)?;
        report.push(CheckResult::new("f", true).with_rational(&c.f_value));
        report.push(CheckResult::new("hessian signature", true).with_exact(c.hessian_signature.to_string()));
        report.push(CheckResult::new("positive cone", true).with_exact(c.in_positive_cone.to_string()));
        report.push(CheckResult::new("index cone", true).with_exact(c.in_index_cone.to_string()));
        return Ok(report);
    }
    let kind = match action {
        ConeAction::Compare => ConeKind::Positive,
        _ => cone_kind(args.kind),
    };
    report = report
        .input("kind", format!("{kind:?}").to_lowercase())
        .input("count", args.count)
        .input("seed", seed)
        .input("box", format!("{},{}", bounds.lo, bounds.hi));
    let sample = sample_cone(&f, kind, args.count, seed, bounds)?;
    let complete = CheckResult::new("samples", sample.is_complete())
        .with_exact(format!("{}/{}", sample.points.len(), sample.requested))
        .with_detail(format!(
            "{} draws, acceptance {:.3}",
            sample.draws,
            sample.acceptance_rate()
        ));
    report.push(complete);
    match action {
        ConeAction::Sample => {
            for (k, c) in sample.points.iter().enumerate() {
                report.push(
                    CheckResult::new(format!("point {k}"), true)
                        .with_exact(point_string(&c.point))
                        .with_detail(format!(
                            "f = {}, signature {}",
                            rational_string(&c.f_value),
                            c.hessian_signature
                        )),
                );
            }
        }
        ConeAction::Compare => {
            let cmp = cone_comparison(&f, &sample.coordinates())?;
            let mut r = CheckResult::new("positive cone inside index cone", cmp.agrees()).with_exact(format!(
                "{} of {} outside",
                cmp.discrepancies.len(),
                cmp.checked
            ));
            if let Some(first) = cmp.discrepancies.first() {
                r = r.with_detail(format!(
                    "e.g. {} with signature {}",
                    point_string(&first.point),
                    first.hessian_signature
                ));
            }
            report.push(r);
        }
        ConeAction::Scan => {
            let mode = match args.mode {
                Mode::KM => ScanMode::KM,
                Mode::Full => ScanMode::FullTensor,
            };
            report = report.input("mode", format!("{mode:?}"));
            let table = curvature_scan(&f, &sample.coordinates(), mode)?;
            let mut w = csv::Writer::from_writer(csv_out);
            w.write_record(ScanRow::CSV_HEADER)?;
            for row in &table.rows {
                w.write_record(row.csv_record())?;
            }
            w.flush()?;
            let mut min = CheckResult::new("K_M min", true);
            if let Some(m) = &table.min {
                min = min.with_rational(m);
            }
            let mut max = CheckResult::new("K_M max", true);
            if let Some(m) = &table.max {
                max = max.with_rational(m);
            }
            report.push(min);
            report.push(max);
            report.push(
                CheckResult::new("points scanned", table.skipped == 0).with_exact(format!(
                    "{} positive, {} negative, {} zero, {} skipped",
                    table.positive, table.negative, table.zero, table.skipped
                )),
            );
        }
        ConeAction::Classify => unreachable!(),
    }
    Ok(report)
}

fn binary(text: &str) -> Result<Form, CliError> {
    read_form(text, Some(2))
}

pub fn tangent(action: &TangentAction) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(format!("tangent {}", action.name()));
    match action {
        TangentAction::TOp { alpha, h } => {
            let (alpha, h) = (binary(alpha)?, binary(h)?);
            report = report.input("alpha", &alpha).input("h", &h);
            report.push(form_result("T(alpha, h)", &t_operator(&alpha, &h)?));
        }
        TangentAction::Variation { alpha, g } => {
            let (alpha, g) = (binary(alpha)?, read_form(g, Some(3))?);
            report = report.input("alpha", &alpha).input("g", &g);
            match first_variation_clebsch(&alpha, &g) {
                Ok(v) => {
                    report.push(form_result("base", &v.base));
                    report.push(form_result("variation", &v.variation));
                }
                Err(TangentError::RouteMismatch { direct, closed }) => {
                    report.push(
                        CheckResult::new("variation", false)
                            .with_exact(direct.to_string())
                            .with_detail(format!("closed form gives {closed}")),
                    );
                }
                Err(e) => return Err(e.into()),
            }
        }
        TangentAction::Kernel { alpha, degree } => {
            let alpha = binary(alpha)?;
            report = report.input("alpha", &alpha).input("degree", degree);
            let k = kernel_of_t(&alpha, *degree)?;
            report.push(CheckResult::new("dimension", true).with_exact(k.dimension().to_string()));
            for (i, b) in k.basis.iter().enumerate() {
                report.push(form_result(&format!("basis {i}"), b));
            }
        }
        TangentAction::Spectrum { degree } => {
            report = report.input("degree", degree);
            let table = monomial_spectrum(*degree)?;
            let zeros = table
                .zero_set
                .iter()
                .map(|(i, j)| format!("({i},{j})"))
                .collect::<Vec<_>>()
                .join(" ");
            report.push(CheckResult::new("zero set", table.zero_set_matches()).with_exact(zeros));
            report.push(
                CheckResult::new(
                    "discriminants negative for j >= 3",
                    table.discriminants_negative_from_three(),
                )
                .with_exact(
                    table
                        .discriminants
                        .iter()
                        .map(|(j, d)| format!("{j}:{d}"))
                        .collect::<Vec<_>>()
                        .join(" "),
                ),
            );
            for e in &table.entries {
                report.push(
                    CheckResult::new(format!("lambda({},{})", e.i, e.j), true).with_exact(e.eigenvalue.to_string()),
                );
            }
        }
        TangentAction::Zariski { alpha } => {
            let alpha = binary(alpha)?;
            report = report.input("alpha", &alpha);
            let z = zariski_tangent_compare(&alpha)?;
            report.push(
                CheckResult::new("listed forms independent", !z.degenerate)
                    .with_exact(format!("rank {} of {}", z.explicit_span_dimension, z.listed)),
            );
            report.push(CheckResult::new("listed forms in kernel", z.span_in_kernel));
            report.push(
                CheckResult::new("kernel dimension", z.dimensions_equal()).with_exact(format!(
                    "{} (ambient {})",
                    z.linearization_kernel_dimension, z.ambient_dimension
                )),
            );
        }
        TangentAction::Closure { alpha, degree, b } => {
            let alpha = binary(alpha)?;
            let b = parse_rational(b)?;
            report = report
                .input("alpha", &alpha)
                .input("degree", degree)
                .input("b", rational_string(&b));
            let e = closure_limit_expand(&alpha, *degree, &b)?;
            report.push(CheckResult::new("negative powers cancel", e.negative_powers_cancel));
            report.push(
                CheckResult::new("limit is alpha + b x^(d-1) z", e.constant_term_matches)
                    .with_exact(e.coefficients[0].to_string()),
            );
            for (k, c) in e.coefficients.iter().enumerate().skip(1) {
                report.push(form_result(&format!("c^{k}"), c));
            }
        }
    }
    Ok(report)
}

pub fn verify(section: &str, seed: u64) -> Result<RunReport, CliError> {
    Ok(run_verify_suite(section, seed)?)
}
