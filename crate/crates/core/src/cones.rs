//! Positive and index cones of a form, seeded cone sampling and curvature
//! scans over samples.
//!
//! The positive cone is `{f > 0}`. The index cone is the part of it where the
//! Hessian of `f` has signature `(1, n-1)`; there the scaled metric restricts
//! to a Riemannian metric on the level set `{f = 1}`.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curvature::{CurvatureError, HessianGeometry, PlaneSpec};
use crate::poly::PolyError;
use crate::sampling::PointSampler;
use crate::scalar::{rational_string, Rational, ToFloat};
use crate::xlinalg::{LinalgError, Signature};
use crate::Form;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("the zero vector is not in any cone")]
    ZeroPoint,
    #[error("sample count must be at least 1")]
    EmptyRequest,
    #[error("curvature scans of kind K_M need a ternary form, got arity {0}")]
    NotTernary(usize),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, ConeError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    Positive,
    Index,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeClassification {
    #[serde(serialize_with = "crate::report::ser_rational_vec")]
    pub point: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub f_value: Rational,
    pub hessian_signature: Signature,
    pub in_positive_cone: bool,
    pub in_index_cone: bool,
}

impl ConeClassification {
    pub fn contains(&self, kind: ConeKind) -> bool {
        match kind {
            ConeKind::Positive => self.in_positive_cone,
            ConeKind::Index => self.in_index_cone,
        }
    }

    /// Whether the flags agree with the stored value and signature.
    pub fn is_consistent(&self) -> bool {
        let n = self.point.len();
        let positive = self.f_value.is_positive();
        self.in_positive_cone == positive
            && self.in_index_cone == (positive && self.hessian_signature == Signature::new(1, n - 1, 0))
    }
}

/// Classifier with the Hessian entries precomputed.
#[derive(Clone, Debug)]
pub struct ConeClassifier {
    geometry: HessianGeometry,
}

impl ConeClassifier {
    pub fn new(f: &Form) -> Result<Self> {
        Ok(ConeClassifier {
            geometry: HessianGeometry::new(f)?,
        })
    }

    pub fn geometry(&self) -> &HessianGeometry {
        &self.geometry
    }

    pub fn classify(&self, point: &[Rational]) -> Result<ConeClassification> {
        if point.iter().all(Zero::is_zero) {
            return Err(ConeError::ZeroPoint);
        }
        let f_value = self.geometry.value(point)?;
        let hessian_signature = self.geometry.hessian_at(point)?.signature()?;
        let n = point.len();
        let in_positive_cone = f_value.is_positive();
        Ok(ConeClassification {
            point: point.to_vec(),
            in_index_cone: in_positive_cone && hessian_signature == Signature::new(1, n - 1, 0),
            in_positive_cone,
            f_value,
            hessian_signature,
        })
    }
}

pub fn classify_point(f: &Form, point: &[Rational]) -> Result<ConeClassification> {
    ConeClassifier::new(f)?.classify(point)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeSample {
    pub kind: ConeKind,
    pub seed: u64,
    pub points: Vec<ConeClassification>,
    pub draws: usize,
    pub requested: usize,
}

impl ConeSample {
    pub fn acceptance_rate(&self) -> f64 {
        if self.draws == 0 {
            0.0
        } else {
            self.points.len() as f64 / self.draws as f64
        }
    }

    pub fn is_complete(&self) -> bool {
        self.points.len() == self.requested
    }

    pub fn coordinates(&self) -> Vec<Vec<Rational>> {
        self.points.iter().map(|c| c.point.clone()).collect()
    }
}

/// Rejection-sampling limits for [`sample_cone`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingBox {
    pub lo: i64,
    pub hi: i64,
    pub max_den: i64,
    /// Draw budget as a multiple of the requested count.
    pub draws_per_point: usize,
}

impl Default for SamplingBox {
    fn default() -> Self {
        SamplingBox {
            lo: -4,
            hi: 4,
            max_den: 5,
            draws_per_point: 200,
        }
    }
}

impl SamplingBox {
    pub fn new(lo: i64, hi: i64) -> Self {
        SamplingBox {
            lo,
            hi,
            ..SamplingBox::default()
        }
    }
}

const BATCH: usize = 64;

/// Draws points from the box until `count` members of the requested cone are
/// found or the draw budget runs out. Draw `i` depends only on `(seed, i)`,
/// so the result does not depend on how batches are scheduled.
pub fn sample_cone(f: &Form, kind: ConeKind, count: usize, seed: u64, bounds: SamplingBox) -> Result<ConeSample> {
    if count == 0 {
        return Err(ConeError::EmptyRequest);
    }
    let classifier = ConeClassifier::new(f)?;
    let sampler = PointSampler::new(seed, f.arity())
        .with_box(bounds.lo, bounds.hi)
        .with_max_den(bounds.max_den);
    let budget = count.saturating_mul(bounds.draws_per_point.max(1));
    let mut points = Vec::with_capacity(count);
    let mut draws = 0;
    let mut start = 0;
    while points.len() < count && start < budget {
        let end = (start + BATCH).min(budget);
        let batch: Vec<Option<ConeClassification>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let p = sampler.point(i as u64);
                match classifier.classify(&p) {
                    Ok(c) if c.contains(kind) => Ok(Some(c)),
                    Ok(_) | Err(ConeError::ZeroPoint) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        for (offset, c) in batch.into_iter().enumerate() {
            if points.len() == count {
                break;
            }
            draws = start + offset + 1;
            if let Some(c) = c {
                points.push(c);
            }
        }
        start = end;
    }
    Ok(ConeSample {
        kind,
        seed,
        points,
        draws,
        requested: count,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeComparison {
    pub checked: usize,
    /// Positive-cone samples outside the index cone.
    pub discrepancies: Vec<ConeClassification>,
    /// Samples that were not in the positive cone at all.
    pub not_positive: usize,
}

impl ConeComparison {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty() && self.not_positive == 0
    }
}

/// Checks index-cone membership of positive-cone samples.
pub fn cone_comparison(f: &Form, samples: &[Vec<Rational>]) -> Result<ConeComparison> {
    let classifier = ConeClassifier::new(f)?;
    let classes: Vec<ConeClassification> = samples
        .par_iter()
        .map(|p| classifier.classify(p))
        .collect::<Result<_>>()?;
    let not_positive = classes.iter().filter(|c| !c.in_positive_cone).count();
    let discrepancies = classes
        .into_iter()
        .filter(|c| c.in_positive_cone && !c.in_index_cone)
        .collect();
    Ok(ConeComparison {
        checked: samples.len(),
        discrepancies,
        not_positive,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    /// Curvature of the level surface of a ternary form.
    KM,
    /// Extremes of `K_M` over the coordinate planes of a level-set tangent
    /// basis, for any arity.
    FullTensor,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    #[serde(serialize_with = "crate::report::ser_rational_vec")]
    pub point: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub f_value: Rational,
    pub hessian_signature: Signature,
    /// `K_M`, or its minimum over the tested planes.
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub k_m: Option<Rational>,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub k_m_max: Option<Rational>,
    pub error: Option<String>,
}

impl ScanRow {
    pub const CSV_HEADER: [&'static str; 7] =
        ["point", "f", "sig_pos", "sig_neg", "sig_zero", "K_M_exact", "K_M_float"];

    pub fn csv_record(&self) -> [String; 7] {
        let point = self.point.iter().map(rational_string).collect::<Vec<_>>().join(" ");
        let (exact, float) = match &self.k_m {
            Some(k) => (rational_string(k), k.to_float().to_string()),
            None => (String::new(), String::new()),
        };
        [
            point,
            rational_string(&self.f_value),
            self.hessian_signature.positives.to_string(),
            self.hessian_signature.negatives.to_string(),
            self.hessian_signature.zeros.to_string(),
            exact,
            float,
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanTable {
    pub mode: ScanMode,
    pub rows: Vec<ScanRow>,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub min: Option<Rational>,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub max: Option<Rational>,
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
    pub skipped: usize,
}

impl ScanTable {
    pub fn all_positive(&self) -> bool {
        self.skipped == 0 && self.negative == 0 && self.zero == 0 && self.positive > 0
    }

    pub fn all_equal(&self, value: &Rational) -> bool {
        self.skipped == 0
            && !self.rows.is_empty()
            && self.min.as_ref() == Some(value)
            && self.max.as_ref() == Some(value)
    }
}

fn scan_point(geo: &HessianGeometry, mode: ScanMode, point: &[Rational]) -> Result<(Rational, Rational)> {
    match mode {
        ScanMode::KM => {
            let k = geo.surface_curvature(point)?;
            Ok((k.clone(), k))
        }
        ScanMode::FullTensor => {
            let basis = geo.level_set_tangent_basis(point)?;
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            for a in 0..basis.len() {
                for b in a + 1..basis.len() {
                    let plane = PlaneSpec::new(basis[a].clone(), basis[b].clone());
                    let k = geo.sectional_curvature_on_level_set(point, &plane)?;
                    if lo.as_ref().is_none_or(|m| k < *m) {
                        lo = Some(k.clone());
                    }
                    if hi.as_ref().is_none_or(|m| k > *m) {
                        hi = Some(k);
                    }
                }
            }
            match (lo, hi) {
                (Some(lo), Some(hi)) => Ok((lo, hi)),
                _ => Err(CurvatureError::DegeneratePlane.into()),
            }
        }
    }
}

/// Exact curvature at each sample. Points where the curvature cannot be
/// formed are recorded with their error and counted as skipped.
pub fn curvature_scan(f: &Form, samples: &[Vec<Rational>], mode: ScanMode) -> Result<ScanTable> {
    if mode == ScanMode::KM && f.arity() != 3 {
        return Err(ConeError::NotTernary(f.arity()));
    }
    let classifier = ConeClassifier::new(f)?;
    let geo = classifier.geometry();
    let rows: Vec<ScanRow> = samples
        .par_iter()
        .map(|p| {
            let c = classifier.classify(p)?;
            let (k_m, k_m_max, error) = match scan_point(geo, mode, p) {
                Ok((lo, hi)) => (Some(lo), Some(hi), None),
                Err(ConeError::Curvature(e)) => (None, None, Some(e.to_string())),
                Err(e) => return Err(e),
            };
            Ok(ScanRow {
                point: c.point,
                f_value: c.f_value,
                hessian_signature: c.hessian_signature,
                k_m,
                k_m_max,
                error,
            })
        })
        .collect::<Result<_>>()?;
    let mut table = ScanTable {
        mode,
        min: None,
        max: None,
        positive: 0,
        negative: 0,
        zero: 0,
        skipped: 0,
        rows: Vec::new(),
    };
    for row in &rows {
        let (Some(lo), Some(hi)) = (&row.k_m, &row.k_m_max) else {
            table.skipped += 1;
            continue;
        };
        if lo.is_positive() {
            table.positive += 1;
        } else if lo.is_negative() {
            table.negative += 1;
        } else {
            table.zero += 1;
        }
        if table.min.as_ref().is_none_or(|m| lo < m) {
            table.min = Some(lo.clone());
        }
        if table.max.as_ref().is_none_or(|m| hi > m) {
            table.max = Some(hi.clone());
        }
    }
    table.rows = rows;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_form;
    use crate::scalar::{int, rat};

    fn p(s: &str, n: usize) -> Form {
        parse_form(s, n).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn classification_examples() {
        let f = p("x*y*z*(x+y+z)", 3);
        let c = classify_point(&f, &ints(&[1, 1, 1])).unwrap();
        assert!(c.in_index_cone);
        assert_eq!(c.hessian_signature, Signature::new(1, 2, 0));
        let c = classify_point(&f, &ints(&[1, 1, -1])).unwrap();
        assert_eq!(c.f_value, int(-1));
        assert!(!c.in_positive_cone && !c.in_index_cone);
        assert!(c.is_consistent());

        let cubic = p("(x0^2+x1^2-x2^2-x3^2)*x3", 4);
        assert!(classify_point(&cubic, &ints(&[0, 0, 2, -1])).unwrap().in_index_cone);
        assert_eq!(classify_point(&f, &ints(&[0, 0, 0])).unwrap_err(), ConeError::ZeroPoint);
    }

    #[test]
    fn classification_is_ray_invariant() {
        let f = p("x*y*z*(x+y+z)", 3);
        let x = vec![rat(1, 2), int(2), rat(-1, 3)];
        let base = classify_point(&f, &x).unwrap();
        for lam in [int(2), rat(1, 3)] {
            let y: Vec<Rational> = x.iter().map(|c| c * &lam).collect();
            let c = classify_point(&f, &y).unwrap();
            assert_eq!(c.in_index_cone, base.in_index_cone);
            assert_eq!(c.in_positive_cone, base.in_positive_cone);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_consistent() {
        let f = p("x*y*z*(x+y+z)", 3);
        let a = sample_cone(&f, ConeKind::Index, 20, 5, SamplingBox::new(-3, 3)).unwrap();
        let b = sample_cone(&f, ConeKind::Index, 20, 5, SamplingBox::new(-3, 3)).unwrap();
        assert!(a.is_complete());
        assert_eq!(a.coordinates(), b.coordinates());
        assert_eq!(a.draws, b.draws);
        for c in &a.points {
            assert!(classify_point(&f, &c.point).unwrap().in_index_cone);
        }
    }

    #[test]
    fn negative_definite_form_has_empty_positive_cone() {
        let f = p("-(x^4+y^4+z^4)", 3);
        let s = sample_cone(&f, ConeKind::Positive, 5, 1, SamplingBox::default()).unwrap();
        assert!(s.points.is_empty());
        assert_eq!(s.acceptance_rate(), 0.0);
        assert_eq!(s.draws, 1000);
    }

    #[test]
    fn comparisons() {
        let cubic = p("(x0^2+x1^2-x2^2-x3^2)*x3", 4);
        let cmp = cone_comparison(&cubic, &[ints(&[2, 0, 0, 1])]).unwrap();
        assert_eq!(cmp.discrepancies.len(), 1);
        let q = p("x^2-y^2-z^2", 3);
        let cmp = cone_comparison(&q, &[ints(&[2, 1, 0]), ints(&[-3, 1, 1])]).unwrap();
        assert!(cmp.agrees());
    }

    #[test]
    fn scans() {
        let q = p("x^2-y^2-z^2", 3);
        let pts = vec![ints(&[2, 1, 0]), ints(&[-3, 1, 1]), vec![rat(5, 2), int(1), int(-2)]];
        let t = curvature_scan(&q, &pts, ScanMode::KM).unwrap();
        assert!(t.all_equal(&int(-1)));
        let t = curvature_scan(&q, &pts, ScanMode::FullTensor).unwrap();
        assert!(t.all_equal(&int(-1)));

        let f = p("x*y*z*(x+y+z)", 3);
        let t = curvature_scan(&f, &[ints(&[1, 1, 1]), ints(&[1, 0, 0])], ScanMode::KM).unwrap();
        assert_eq!(t.skipped, 1);
        assert_eq!(t.rows[0].k_m, Some(int(1)));
        assert_eq!(
            t.rows[0].csv_record(),
            ["1 1 1", "3", "1", "2", "0", "1", "1"].map(String::from)
        );
    }
}
