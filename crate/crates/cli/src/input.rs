//! Parsing of command-line values: forms, points, planes and boxes.

use std::fs;

use hessform_core::curvature::PlaneSpec;
use hessform_core::{parse_form, parse_form_infer, Form, Rational};

use crate::CliError;

/// Reads a form given inline or as `@path`. `arity` overrides inference.
pub fn read_form(arg: &str, arity: Option<usize>) -> Result<Form, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?,
        None => arg.to_string(),
    };
    let text = text.trim();
    let form = match arity {
        Some(n) => parse_form(text, n),
        None => parse_form_infer(text),
    };
    form.map_err(|e| CliError::Input(format!("cannot parse form `{text}`: {e}")))
}

pub fn parse_rational(text: &str) -> Result<Rational, CliError> {
    text.trim()
        .parse::<Rational>()
        .map_err(|_| CliError::Input(format!("`{text}` is not a rational (expected p or p/q)")))
}

/// Comma-separated rationals, e.g. `1,2,-1/3`.
pub fn parse_point(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',').map(parse_rational).collect()
}

/// Comma-separated floats; `p/q` entries are accepted and converted.
pub fn parse_float_point(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            match t.split_once('/') {
                Some((p, q)) => match (p.parse::<f64>(), q.parse::<f64>()) {
                    (Ok(p), Ok(q)) if q != 0.0 => Ok(p / q),
                    _ => Err(CliError::Input(format!("`{t}` is not a number"))),
                },
                None => t
                    .parse::<f64>()
                    .map_err(|_| CliError::Input(format!("`{t}` is not a number"))),
            }
        })
        .collect()
}

/// Two comma-separated vectors joined by `:`, e.g. `1,0,0:0,1,0`.
pub fn parse_plane(text: &str) -> Result<PlaneSpec, CliError> {
    let (u, v) = text
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("plane `{text}` must look like u1,u2,..:v1,v2,..")))?;
    Ok(PlaneSpec::new(parse_point(u)?, parse_point(v)?))
}

/// Integer bounds `a,b` with `a < b`.
pub fn parse_box(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Input(format!("box `{text}` must be two integers a,b with a < b"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a >= b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn check_length(what: &str, v: &[impl Sized], arity: usize) -> Result<(), CliError> {
    if v.len() != arity {
        return Err(CliError::Input(format!(
            "{what} has {} coordinates but the form has {arity} variables",
            v.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hessform_core::rat;

    #[test]
    fn points_and_planes() {
        assert_eq!(
            parse_point("1, -2/4,3").unwrap(),
            vec![rat(1, 1), rat(-1, 2), rat(3, 1)]
        );
        let plane = parse_plane("1,0:0,1").unwrap();
        assert_eq!(plane.v, vec![rat(0, 1), rat(1, 1)]);
        assert!(parse_plane("1,0").is_err());
        assert!(parse_point("1,a").is_err());
        assert_eq!(parse_float_point("0.5,1/4").unwrap(), vec![0.5, 0.25]);
    }

    #[test]
    fn boxes() {
        assert_eq!(parse_box("-3,3").unwrap(), (-3, 3));
        assert!(parse_box("3,3").is_err());
        assert!(parse_box("x").is_err());
    }

    #[test]
    fn forms_infer_or_take_arity() {
        assert_eq!(read_form("x^2 - y^2", None).unwrap().arity(), 2);
        assert_eq!(read_form("x^2", Some(3)).unwrap().arity(), 3);
        assert!(read_form("x^^2", None).is_err());
    }
}
