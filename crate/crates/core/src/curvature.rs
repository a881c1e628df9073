//! The scaled Hessian metric of a form and its curvature.
//!
//! For a form `f` of degree `d` the metric is `g_ij = -1/(d(d-1)) f_ij`. Its
//! Christoffel symbols of the first kind are `-1/(2d(d-1)) f_ijk` and the
//! curvature tensor only involves third derivatives:
//!
//! ```text
//! R_ijkl = -1/(4 d^2 (d-1)^2) * sum_pq g^pq (f_jlp f_ikq - f_ilp f_jkq)
//! ```
//!
//! Sectional curvature of the plane spanned by `u, v` is
//! `R(u,v,u,v) / (g(u,u) g(v,v) - g(u,v)^2)`. On the level set `M = {f = 1}`
//! the curvature at the ray through `x` is `K_M = f(x) K_U(x) - d^2/4`,
//! which is homogeneous of degree 0.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::covariants::{clebsch_covariant, hessian_det, CovariantError};
use crate::poly::PolyError;
use crate::sampling::PointSampler;
use crate::scalar::{int, rational_powi, Rational, ToFloat};
use crate::xlinalg::{LinalgError, Matrix, Signature};
use crate::{FloatForm, Form, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error("form must be homogeneous and nonzero")]
    NotHomogeneous,
    #[error("degree {found} is below the minimum {min}")]
    DegreeTooLow { min: u32, found: u32 },
    #[error("expected arity {expected}, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("metric is degenerate at the point (det g = 0)")]
    DegenerateMetric,
    #[error("plane is degenerate for the metric (Gram determinant 0)")]
    DegeneratePlane,
    #[error("plane is not tangent to the level set through the point")]
    NotTangent,
    #[error("f vanishes at the point")]
    FormVanishes,
    #[error("f is not positive at a sample point")]
    NonpositiveValue,
    #[error("Hessian determinant vanishes at the point")]
    HessianVanishes,
    #[error("curvature tensor symmetry violated at {0:?}")]
    SymmetryViolation((usize, usize, usize, usize)),
    #[error("metric is ill-conditioned at the point (|det g| = {0:e})")]
    IllConditioned(f64),
    #[error("found only {found} nondegenerate sample points after {tried} draws")]
    NotEnoughSamples { found: usize, tried: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Covariant(#[from] CovariantError),
}

pub type Result<T> = std::result::Result<T, CurvatureError>;

/// The scaled Hessian metric evaluated at a rational point.
#[derive(Clone, Debug)]
pub struct MetricSample {
    pub point: Vec<Rational>,
    pub degree: u32,
    pub g: RationalMatrix,
    pub signature: Signature,
    pub nondegenerate: bool,
}

/// Two vectors spanning a 2-plane.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneSpec {
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
}

impl PlaneSpec {
    pub fn new(u: Vec<Rational>, v: Vec<Rational>) -> Self {
        PlaneSpec { u, v }
    }
}

/// Christoffel symbols of the first kind at a point, `n^3` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    n: usize,
    values: Vec<Rational>,
}

impl Christoffel {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.values[(i * self.n + j) * self.n + k]
    }

    pub fn dimension(&self) -> usize {
        self.n
    }
}

/// Exact curvature tensor `R_ijkl` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    pub point: Vec<Rational>,
    n: usize,
    components: Vec<Rational>,
}

impl CurvatureTensor {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Rational {
        &self.components[idx4(self.n, i, j, k, l)]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Zero::is_zero)
    }

    /// First nonzero component, if any.
    pub fn first_nonzero(&self) -> Option<((usize, usize, usize, usize), Rational)> {
        let n = self.n;
        self.components
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_zero())
            .map(|(flat, v)| {
                let l = flat % n;
                let k = (flat / n) % n;
                let j = (flat / (n * n)) % n;
                let i = flat / (n * n * n);
                ((i, j, k, l), v.clone())
            })
    }

    /// `R(u, v, u, v)`.
    pub fn evaluate_plane(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let n = self.n;
        let mut acc = Rational::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let uv = &u[i] * &v[j];
                for k in 0..n {
                    if u[k].is_zero() {
                        continue;
                    }
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        if r.is_zero() || v[l].is_zero() {
                            continue;
                        }
                        acc += &uv * &u[k] * &v[l] * r;
                    }
                }
            }
        }
        acc
    }

    /// Checks `R_ijkl = -R_jikl = -R_ijlk = R_klij` and the first Bianchi identity.
    pub fn symmetry_violation(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        let antisym = *r == -self.get(j, i, k, l).clone() && *r == -self.get(i, j, l, k).clone();
                        let pair = r == self.get(k, l, i, j);
                        let bianchi = (r + self.get(i, k, l, j) + self.get(i, l, j, k)).is_zero();
                        if !(antisym && pair && bianchi) {
                            return Some((i, j, k, l));
                        }
                    }
                }
            }
        }
        None
    }
}

fn idx4(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

/// A form together with its precomputed first, second and third partials.
#[derive(Clone, Debug)]
pub struct HessianGeometry {
    f: Form,
    n: usize,
    d: u32,
    gradient: Vec<Form>,
    second: Vec<Form>,
    third: Vec<Form>,
    scale: Rational,
}

impl HessianGeometry {
    pub fn new(f: &Form) -> Result<Self> {
        let d = f.homogeneous_degree().ok_or(CurvatureError::NotHomogeneous)?;
        if d < 2 {
            return Err(CurvatureError::DegreeTooLow { min: 2, found: d });
        }
        let n = f.arity();
        let gradient = f.gradient();
        let mut second = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                second.push(gradient[i].derivative(j)?);
            }
        }
        let mut third = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    third.push(second[i * n + j].derivative(k)?);
                }
            }
        }
        let dd = i64::from(d);
        Ok(HessianGeometry {
            f: f.clone(),
            n,
            d,
            gradient,
            second,
            third,
            scale: Rational::new((-1).into(), (dd * (dd - 1)).into()),
        })
    }

    pub fn form(&self) -> &Form {
        &self.f
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// `-1 / (d (d - 1))`.
    pub fn metric_scale(&self) -> &Rational {
        &self.scale
    }

    pub fn second_partial(&self, i: usize, j: usize) -> &Form {
        &self.second[i * self.n + j]
    }

    pub fn third_partial(&self, i: usize, j: usize, k: usize) -> &Form {
        &self.third[(i * self.n + j) * self.n + k]
    }

    fn check_point(&self, point: &[Rational]) -> Result<()> {
        if point.len() != self.n {
            return Err(PolyError::PointLength {
                found: point.len(),
                arity: self.n,
            }
            .into());
        }
        Ok(())
    }

    pub fn value(&self, point: &[Rational]) -> Result<Rational> {
        Ok(self.f.evaluate(point)?)
    }

    pub fn gradient_at(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.check_point(point)?;
        self.gradient.iter().map(|g| Ok(g.evaluate(point)?)).collect()
    }

    /// Unscaled Hessian matrix `f_ij` at a point.
    pub fn hessian_at(&self, point: &[Rational]) -> Result<RationalMatrix> {
        self.check_point(point)?;
        let values: Vec<Rational> = self
            .second
            .iter()
            .map(|s| s.evaluate(point))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Matrix::new(self.n, self.n, values)?)
    }

    pub fn metric_matrix(&self, point: &[Rational]) -> Result<RationalMatrix> {
        Ok(self.hessian_at(point)?.scale(&self.scale))
    }

    pub fn metric_at(&self, point: &[Rational]) -> Result<MetricSample> {
        let g = self.metric_matrix(point)?;
        let signature = g.signature()?;
        Ok(MetricSample {
            point: point.to_vec(),
            degree: self.d,
            nondegenerate: signature.zeros == 0,
            signature,
            g,
        })
    }

    fn third_at(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.check_point(point)?;
        Ok(self
            .third
            .iter()
            .map(|t| t.evaluate(point))
            .collect::<std::result::Result<_, _>>()?)
    }

    pub fn christoffel_at(&self, point: &[Rational]) -> Result<Christoffel> {
        let half = &self.scale / int(2);
        Ok(Christoffel {
            n: self.n,
            values: self.third_at(point)?.into_iter().map(|v| v * &half).collect(),
        })
    }

    pub fn curvature_at(&self, point: &[Rational]) -> Result<CurvatureTensor> {
        let g = self.metric_matrix(point)?;
        let ginv = g.inverse().map_err(|e| match e {
            LinalgError::Singular => CurvatureError::DegenerateMetric,
            other => other.into(),
        })?;
        let n = self.n;
        let f3 = self.third_at(point)?;
        let t = |a: usize, b: usize, c: usize| &f3[(a * n + b) * n + c];
        // w[a][b][q] = sum_p g^pq f_abp
        let mut w = vec![Rational::zero(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for q in 0..n {
                    let mut acc = Rational::zero();
                    for p in 0..n {
                        let gpq = ginv.get(p, q);
                        if !gpq.is_zero() {
                            acc += gpq * t(a, b, p);
                        }
                    }
                    w[(a * n + b) * n + q] = acc;
                }
            }
        }
        let d = i64::from(self.d);
        let factor = Rational::new((-1).into(), (4 * d * d * (d - 1) * (d - 1)).into());
        let mut components = vec![Rational::zero(); n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut acc = Rational::zero();
                        for q in 0..n {
                            acc += &w[(j * n + l) * n + q] * t(i, k, q) - &w[(i * n + l) * n + q] * t(j, k, q);
                        }
                        components[idx4(n, i, j, k, l)] = acc * &factor;
                    }
                }
            }
        }
        let tensor = CurvatureTensor {
            point: point.to_vec(),
            n,
            components,
        };
        if let Some(at) = tensor.symmetry_violation() {
            return Err(CurvatureError::SymmetryViolation(at));
        }
        Ok(tensor)
    }

    /// Sectional curvature of the ambient metric on the plane at `point`.
    pub fn sectional_curvature(&self, point: &[Rational], plane: &PlaneSpec) -> Result<Rational> {
        self.check_point(&plane.u)?;
        self.check_point(&plane.v)?;
        let g = self.metric_matrix(point)?;
        let guu = g.bilinear(&plane.u, &plane.u)?;
        let gvv = g.bilinear(&plane.v, &plane.v)?;
        let guv = g.bilinear(&plane.u, &plane.v)?;
        let gram = guu * gvv - &guv * &guv;
        if gram.is_zero() {
            return Err(CurvatureError::DegeneratePlane);
        }
        let r = self.curvature_at(point)?;
        Ok(r.evaluate_plane(&plane.u, &plane.v) / gram)
    }

    /// Basis of `{v : sum_i v_i f_i(point) = 0}`.
    pub fn level_set_tangent_basis(&self, point: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        let grad = self.gradient_at(point)?;
        if grad.iter().all(Zero::is_zero) {
            return Err(CurvatureError::FormVanishes);
        }
        Ok(Matrix::new(1, self.n, grad)?.nullspace())
    }

    pub fn is_tangent(&self, point: &[Rational], v: &[Rational]) -> Result<bool> {
        let grad = self.gradient_at(point)?;
        Ok(grad
            .iter()
            .zip(v)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            .is_zero())
    }

    /// Sectional curvature of the level hypersurface through the ray of `point`,
    /// `K_M = f(point) K_U - d^2/4`.
    pub fn sectional_curvature_on_level_set(&self, point: &[Rational], plane: &PlaneSpec) -> Result<Rational> {
        let fv = self.value(point)?;
        if fv.is_zero() {
            return Err(CurvatureError::FormVanishes);
        }
        if !self.is_tangent(point, &plane.u)? || !self.is_tangent(point, &plane.v)? {
            return Err(CurvatureError::NotTangent);
        }
        let k_u = self.sectional_curvature(point, plane)?;
        Ok(fv * k_u - self.d_squared_over_four())
    }

    /// `K_M` of a ternary form, whose level set is a surface with a single
    /// tangent 2-plane at each point.
    pub fn surface_curvature(&self, point: &[Rational]) -> Result<Rational> {
        if self.n != 3 {
            return Err(CurvatureError::WrongArity {
                expected: 3,
                found: self.n,
            });
        }
        let basis = self.level_set_tangent_basis(point)?;
        let plane = PlaneSpec::new(basis[0].clone(), basis[1].clone());
        self.sectional_curvature_on_level_set(point, &plane)
    }

    /// Signature of the metric restricted to the level-set tangent space.
    pub fn restricted_signature(&self, point: &[Rational]) -> Result<Signature> {
        let basis = self.level_set_tangent_basis(point)?;
        let g = self.metric_matrix(point)?;
        let m = basis.len();
        let mut gram = RationalMatrix::zeros(m, m);
        for a in 0..m {
            for b in 0..m {
                gram.set(a, b, g.bilinear(&basis[a], &basis[b])?);
            }
        }
        Ok(gram.signature()?)
    }

    pub fn d_squared_over_four(&self) -> Rational {
        let d = i64::from(self.d);
        Rational::new((d * d).into(), 4.into())
    }
}

pub fn metric_at(f: &Form, point: &[Rational]) -> Result<MetricSample> {
    HessianGeometry::new(f)?.metric_at(point)
}

pub fn christoffel_first(f: &Form, point: &[Rational]) -> Result<Christoffel> {
    HessianGeometry::new(f)?.christoffel_at(point)
}

pub fn curvature_tensor_at(f: &Form, point: &[Rational]) -> Result<CurvatureTensor> {
    HessianGeometry::new(f)?.curvature_at(point)
}

pub fn sectional_curvature(f: &Form, point: &[Rational], plane: &PlaneSpec) -> Result<Rational> {
    HessianGeometry::new(f)?.sectional_curvature(point, plane)
}

pub fn sectional_curvature_on_m(f: &Form, point: &[Rational], plane: &PlaneSpec) -> Result<Rational> {
    HessianGeometry::new(f)?.sectional_curvature_on_level_set(point, plane)
}

/// `K_M = -d^2/4 + d^2 (d-1)^2 / (4 (d-2)^2) * S f^2 / H^2` from the values of
/// `S`, `H` and `f` at a point.
pub fn k_m_from_covariants(d: u32, s: &Rational, h: &Rational, f: &Rational) -> Result<Rational> {
    if d < 3 {
        return Err(CurvatureError::DegreeTooLow { min: 3, found: d });
    }
    if h.is_zero() {
        return Err(CurvatureError::HessianVanishes);
    }
    let d = i64::from(d);
    let coeff = Rational::new((d * d * (d - 1) * (d - 1)).into(), (4 * (d - 2) * (d - 2)).into());
    Ok(Rational::new((-d * d).into(), 4.into()) + coeff * s * f * f / (h * h))
}

/// Covariant-route `K_M` of a ternary form, with `S` and `H` computed once.
#[derive(Clone, Debug)]
pub struct CovariantCurvature {
    degree: u32,
    f: Form,
    s: Form,
    h: Form,
}

impl CovariantCurvature {
    pub fn new(f: &Form) -> Result<Self> {
        if f.arity() != 3 {
            return Err(CurvatureError::WrongArity {
                expected: 3,
                found: f.arity(),
            });
        }
        let degree = f.homogeneous_degree().ok_or(CurvatureError::NotHomogeneous)?;
        if degree < 3 {
            return Err(CurvatureError::DegreeTooLow { min: 3, found: degree });
        }
        Ok(CovariantCurvature {
            degree,
            f: f.clone(),
            s: clebsch_covariant(f)?,
            h: hessian_det(f),
        })
    }

    pub fn clebsch(&self) -> &Form {
        &self.s
    }

    pub fn hessian(&self) -> &Form {
        &self.h
    }

    pub fn k_m(&self, point: &[Rational]) -> Result<Rational> {
        let fv = self.f.evaluate(point)?;
        if fv.is_zero() {
            return Err(CurvatureError::FormVanishes);
        }
        let hv = self.h.evaluate(point)?;
        let sv = self.s.evaluate(point)?;
        k_m_from_covariants(self.degree, &sv, &hv, &fv)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureRoutesRow {
    #[serde(serialize_with = "crate::report::ser_rational_vec")]
    pub point: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub tensor_route: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub covariant_route: Rational,
}

impl CurvatureRoutesRow {
    pub fn agrees(&self) -> bool {
        self.tensor_route == self.covariant_route
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureRoutesReport {
    pub rows: Vec<CurvatureRoutesRow>,
}

impl CurvatureRoutesReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(CurvatureRoutesRow::agrees)
    }
}

/// Compares the tensor-route `K_M` with the covariant formula at each point.
pub fn theorem_curv_check(f: &Form, points: &[Vec<Rational>]) -> Result<CurvatureRoutesReport> {
    let cov = CovariantCurvature::new(f)?;
    let geo = HessianGeometry::new(f)?;
    let rows = points
        .iter()
        .map(|p| {
            if cov.h.evaluate(p)?.is_zero() {
                return Err(CurvatureError::HessianVanishes);
            }
            Ok(CurvatureRoutesRow {
                point: p.clone(),
                covariant_route: cov.k_m(p)?,
                tensor_route: geo.surface_curvature(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurvatureRoutesReport { rows })
}

/// Outcome of [`flatness_certificate`].
#[derive(Clone, Debug)]
pub enum FlatnessVerdict {
    Flat {
        points: Vec<Vec<Rational>>,
        tried: usize,
        /// Degree of the polynomial `H(f) * R_ijkl`.
        cleared_degree: u32,
        /// Schwartz-Zippel bound on the chance that a nonzero tensor vanishes
        /// at every sampled point.
        error_bound: f64,
    },
    NotFlat {
        witness: Vec<Rational>,
        component: (usize, usize, usize, usize),
        value: Rational,
    },
}

impl FlatnessVerdict {
    pub fn is_flat(&self) -> bool {
        matches!(self, FlatnessVerdict::Flat { .. })
    }

    pub fn explanation(&self) -> String {
        match self {
            FlatnessVerdict::Flat {
                points,
                cleared_degree,
                error_bound,
                ..
            } => format!(
                "all R_ijkl vanish exactly at {} nondegenerate points; each H(f)*R_ijkl is a \
                 polynomial of degree <= {}, so a nonzero one survives all samples with \
                 probability <= {:.3e}",
                points.len(),
                cleared_degree,
                error_bound
            ),
            FlatnessVerdict::NotFlat { component, value, .. } => format!("R{component:?} = {value} at the witness"),
        }
    }
}

/// Samples `sample_count` nondegenerate rational points and checks that the
/// whole curvature tensor vanishes at each.
pub fn flatness_certificate(f: &Form, sample_count: usize, seed: u64) -> Result<FlatnessVerdict> {
    let geo = HessianGeometry::new(f)?;
    let sampler = PointSampler::new(seed, geo.n);
    let max_draws = sample_count.max(1) * 50;
    let mut points = Vec::new();
    let mut tried = 0;
    for index in 0..max_draws as u64 {
        if points.len() == sample_count {
            break;
        }
        tried += 1;
        let p = sampler.point(index);
        match geo.curvature_at(&p) {
            Ok(r) => {
                if let Some((component, value)) = r.first_nonzero() {
                    return Ok(FlatnessVerdict::NotFlat {
                        witness: p,
                        component,
                        value,
                    });
                }
                points.push(p);
            }
            Err(CurvatureError::DegenerateMetric) => continue,
            Err(e) => return Err(e),
        }
    }
    if points.len() < sample_count {
        return Err(CurvatureError::NotEnoughSamples {
            found: points.len(),
            tried,
        });
    }
    // adj(g) has degree (n-1)(d-2), each f_..p f_..q pair 2(d-3).
    let n = geo.n as u32;
    let d = geo.d;
    let cleared_degree = (n - 1) * (d - 2) + 2 * d.saturating_sub(3);
    let support = sampler.coordinate_support() as f64;
    let per_point = (f64::from(cleared_degree) / support).min(1.0);
    Ok(FlatnessVerdict::Flat {
        error_bound: per_point.powi(points.len() as i32),
        cleared_degree,
        points,
        tried,
    })
}

/// Finite-difference cross-check of the closed-form tensor.
#[derive(Clone, Debug, Serialize)]
pub struct FdOracleReport {
    pub max_abs_deviation: f64,
    pub max_abs_exact: f64,
    /// `max |R_fd - R| / max |R|`, or the absolute deviation when `R = 0`.
    pub relative_deviation: f64,
}

/// Curvature from the general pseudo-Riemannian formulas, with every
/// derivative of the metric taken by central differences of step `h`:
///
/// ```text
/// Gamma_ijk = 1/2 (g_ij,k + g_jk,i - g_ik,j)
/// R_ijkl    = -1/2 (g_ik,jl + g_jl,ik - g_il,jk - g_jk,il)
///             - sum_pq g^pq (Gamma_jpl Gamma_iqk - Gamma_ipl Gamma_jqk)
/// ```
pub fn fd_curvature_oracle(f: &Form, point: &[f64], h: f64) -> Result<FdOracleReport> {
    let geo = HessianGeometry::new(f)?;
    let n = geo.n;
    if point.len() != n {
        return Err(PolyError::PointLength {
            found: point.len(),
            arity: n,
        }
        .into());
    }
    let scale = geo.scale.to_float();
    let metric_forms: Vec<FloatForm> = geo.second.iter().map(Form::to_f64).collect();
    let metric = |x: &[f64]| -> Vec<f64> {
        metric_forms
            .iter()
            .map(|m| scale * m.evaluate(x).expect("arity checked"))
            .collect()
    };
    let shifted = |steps: &[(usize, f64)]| -> Vec<f64> {
        let mut x = point.to_vec();
        for &(i, s) in steps {
            x[i] += s;
        }
        metric(&x)
    };
    let g0 = metric(point);
    let gmat = Matrix::new(n, n, g0.clone())?;
    let det = gmat.determinant()?;
    if det.abs() <= 1e-6 {
        return Err(CurvatureError::IllConditioned(det.abs()));
    }
    let ginv = gmat.inverse()?;

    // dg[k][ij] = d g_ij / d x_k
    let dg: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let plus = shifted(&[(k, h)]);
            let minus = shifted(&[(k, -h)]);
            plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        })
        .collect();
    // ddg[a][b][ij] = d^2 g_ij / dx_a dx_b
    let mut ddg = vec![vec![vec![0.0; n * n]; n]; n];
    for a in 0..n {
        for b in a..n {
            let vals: Vec<f64> = if a == b {
                let plus = shifted(&[(a, h)]);
                let minus = shifted(&[(a, -h)]);
                (0..n * n)
                    .map(|ij| (plus[ij] - 2.0 * g0[ij] + minus[ij]) / (h * h))
                    .collect()
            } else {
                let pp = shifted(&[(a, h), (b, h)]);
                let pm = shifted(&[(a, h), (b, -h)]);
                let mp = shifted(&[(a, -h), (b, h)]);
                let mm = shifted(&[(a, -h), (b, -h)]);
                (0..n * n)
                    .map(|ij| (pp[ij] - pm[ij] - mp[ij] + mm[ij]) / (4.0 * h * h))
                    .collect()
            };
            ddg[a][b] = vals.clone();
            ddg[b][a] = vals;
        }
    }
    let g_d = |i: usize, j: usize, k: usize| dg[k][i * n + j];
    let g_dd = |i: usize, j: usize, a: usize, b: usize| ddg[a][b][i * n + j];
    let gamma = |i: usize, j: usize, k: usize| 0.5 * (g_d(i, j, k) + g_d(j, k, i) - g_d(i, k, j));

    let exact_point: Vec<Rational> = point
        .iter()
        .map(|&x| Rational::from_float(x).expect("finite coordinate"))
        .collect();
    let exact = geo.curvature_at(&exact_point)?;

    let mut max_dev: f64 = 0.0;
    let mut max_exact: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let second = -0.5 * (g_dd(i, k, j, l) + g_dd(j, l, i, k) - g_dd(i, l, j, k) - g_dd(j, k, i, l));
                    let mut quad = 0.0;
                    for p in 0..n {
                        for q in 0..n {
                            quad +=
                                ginv.get(p, q) * (gamma(j, p, l) * gamma(i, q, k) - gamma(i, p, l) * gamma(j, q, k));
                        }
                    }
                    let fd = second - quad;
                    let ex = exact.get(i, j, k, l).to_float();
                    max_dev = max_dev.max((fd - ex).abs());
                    max_exact = max_exact.max(ex.abs());
                }
            }
        }
    }
    let relative_deviation = if max_exact > 0.0 { max_dev / max_exact } else { max_dev };
    Ok(FdOracleReport {
        max_abs_deviation: max_dev,
        max_abs_exact: max_exact,
        relative_deviation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WarpRow {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub scale: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub k_u: Rational,
    /// `c^d K_U(c x)`, which must equal `K_U(x)`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub rescaled: Rational,
    /// `K_M` recomputed at `c x`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub k_m: Rational,
    /// `c^-d (K_M + d^2/4) / f(x)` with `K_M` from the covariant formula
    /// (ternary forms of degree >= 3 only).
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub predicted_k_u: Option<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WarpReport {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub base_k_u: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub base_k_m: Rational,
    pub rows: Vec<WarpRow>,
}

impl WarpReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| {
            r.rescaled == self.base_k_u
                && r.k_m == self.base_k_m
                && r.predicted_k_u.as_ref().is_none_or(|p| *p == r.k_u)
        })
    }
}

/// Checks `K_U(c x, P) = c^-d K_U(x, P)`, ray-constancy of `K_M`, and (for
/// ternary forms) `K_U(c x, P) = c^-d (K_M + d^2/4) / f(x)` against the
/// covariant formula.
pub fn warp_scaling_check(f: &Form, point: &[Rational], plane: &PlaneSpec, scales: &[Rational]) -> Result<WarpReport> {
    let geo = HessianGeometry::new(f)?;
    let base_k_u = geo.sectional_curvature(point, plane)?;
    let base_k_m = geo.sectional_curvature_on_level_set(point, plane)?;
    let covariant = if geo.n == 3 && geo.d >= 3 {
        Some(CovariantCurvature::new(f)?.k_m(point)?)
    } else {
        None
    };
    let fx = geo.value(point)?;
    let d = geo.d as i32;
    let rows = scales
        .iter()
        .map(|c| {
            let scaled: Vec<Rational> = point.iter().map(|x| x * c).collect();
            let k_u = geo.sectional_curvature(&scaled, plane)?;
            let k_m = geo.sectional_curvature_on_level_set(&scaled, plane)?;
            let predicted_k_u = covariant
                .as_ref()
                .map(|km| rational_powi(c, -d) * (km + geo.d_squared_over_four()) / &fx);
            Ok(WarpRow {
                scale: c.clone(),
                rescaled: &k_u * rational_powi(c, d),
                k_u,
                k_m,
                predicted_k_u,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WarpReport {
        base_k_u,
        base_k_m,
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LogMetricReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl LogMetricReport {
    pub fn passed(&self) -> bool {
        self.max_deviation < self.tolerance
    }
}

/// Values of `t` at which the product map is tested.
pub const LOG_METRIC_TIMES: [f64; 4] = [-0.7, 0.0, 0.4, 1.1];

/// Pushes the frame `{d/dt, v_1, ..., v_(n-1)}` of `R x M` through
/// `(t, x) -> exp(t / sqrt d) x` and compares the pulled-back
/// `-d^2 log f` with the product of `dt^2` and the restriction of `-d^2 f`
/// to `M = {f = 1}`.
pub fn log_metric_product_check(f: &Form, samples: &[Vec<Rational>], tolerance: f64) -> Result<LogMetricReport> {
    let geo = HessianGeometry::new(f)?;
    let n = geo.n;
    let d = f64::from(geo.d);
    let ff = f.to_f64();
    let grad_f: Vec<FloatForm> = geo.gradient.iter().map(Form::to_f64).collect();
    let hess_f: Vec<FloatForm> = geo.second.iter().map(Form::to_f64).collect();
    let eval = |p: &FloatForm, x: &[f64]| p.evaluate(x).expect("arity checked");
    let mut max_dev: f64 = 0.0;
    for sample in samples {
        let fv = geo.value(sample)?;
        if !fv.is_positive() {
            return Err(CurvatureError::NonpositiveValue);
        }
        let tangent: Vec<Vec<f64>> = geo
            .level_set_tangent_basis(sample)?
            .iter()
            .map(|v| v.iter().map(ToFloat::to_float).collect())
            .collect();
        let lambda = fv.to_f64().expect("finite").powf(-1.0 / d);
        let on_m: Vec<f64> = sample.iter().map(|c| c.to_float() * lambda).collect();
        let hess_m: Vec<f64> = hess_f.iter().map(|h| eval(h, &on_m)).collect();
        let h_m = |a: &[f64], b: &[f64]| -> f64 {
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc -= a[i] * hess_m[i * n + j] * b[j];
                }
            }
            acc
        };
        for &t in &LOG_METRIC_TIMES {
            let s = (t / d.sqrt()).exp();
            let y: Vec<f64> = on_m.iter().map(|c| c * s).collect();
            let fy = eval(&ff, &y);
            let gy: Vec<f64> = grad_f.iter().map(|g| eval(g, &y)).collect();
            let hy: Vec<f64> = hess_f.iter().map(|h| eval(h, &y)).collect();
            // -d^2 log f = -f_ij / f + f_i f_j / f^2
            let big_g = |a: &[f64], b: &[f64]| -> f64 {
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        acc += a[i] * (-hy[i * n + j] / fy + gy[i] * gy[j] / (fy * fy)) * b[j];
                    }
                }
                acc
            };
            // Jacobian images of the product frame.
            let mut frame = vec![y.iter().map(|c| c / d.sqrt()).collect::<Vec<f64>>()];
            frame.extend(tangent.iter().map(|v| v.iter().map(|c| c * s).collect()));
            let mut expected = vec![vec![0.0; n]; n];
            expected[0][0] = 1.0;
            for a in 1..n {
                for b in 1..n {
                    expected[a][b] = h_m(&tangent[a - 1], &tangent[b - 1]);
                }
            }
            let scale = expected.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
            for a in 0..n {
                for b in 0..n {
                    let got = big_g(&frame[a], &frame[b]);
                    max_dev = max_dev.max((got - expected[a][b]).abs() / scale);
                }
            }
        }
    }
    Ok(LogMetricReport {
        samples: samples.len(),
        max_deviation: max_dev,
        tolerance,
    })
}

/// Convenience: Clebsch route of `K_M` for a single point.
pub fn covariant_k_m(f: &Form, point: &[Rational]) -> Result<Rational> {
    CovariantCurvature::new(f)?.k_m(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_form;
    use crate::scalar::rat;

    fn p(s: &str, n: usize) -> Form {
        parse_form(s, n).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn metric_examples() {
        let q = p("x^2-y^2-z^2", 3);
        let m = metric_at(&q, &ints(&[1, 2, 3])).unwrap();
        assert_eq!(m.g, Matrix::diagonal(&ints(&[-1, 1, 1])));
        assert_eq!(m.signature, Signature::new(2, 1, 0));

        let f = p("x*y*z*(x+y+z)", 3);
        let m = metric_at(&f, &ints(&[1, 1, 1])).unwrap();
        let expected = Matrix::from_rows(vec![ints(&[2, 5, 5]), ints(&[5, 2, 5]), ints(&[5, 5, 2])])
            .unwrap()
            .scale(&rat(-1, 12));
        assert_eq!(m.g, expected);
        assert_eq!(m.signature, Signature::new(2, 1, 0));
        assert!(m.nondegenerate);

        assert_eq!(
            metric_at(&p("x+y", 2), &ints(&[1, 1])).unwrap_err(),
            CurvatureError::DegreeTooLow { min: 2, found: 1 }
        );
    }

    #[test]
    fn metric_is_homogeneous_of_degree_d_minus_2() {
        let f = p("x*y*z*(x+y+z)", 3);
        let geo = HessianGeometry::new(&f).unwrap();
        let x = vec![rat(1, 2), int(3), rat(-2, 3)];
        let lam = rat(5, 3);
        let scaled: Vec<Rational> = x.iter().map(|c| c * &lam).collect();
        let lhs = geo.metric_matrix(&scaled).unwrap();
        let rhs = geo.metric_matrix(&x).unwrap().scale(&(&lam * &lam));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn christoffel_examples() {
        let q = p("x^2-3*x*y+y^2", 2);
        let c = christoffel_first(&q, &ints(&[1, 2])).unwrap();
        assert!((0..8).all(|k| c.values[k].is_zero()));
        // f = x^3: g = -x, Gamma_111 = g_11,1 / 2 = -1/2
        let c = christoffel_first(&p("x^3", 1), &ints(&[4])).unwrap();
        assert_eq!(c.get(0, 0, 0), &rat(-1, 2));
    }

    #[test]
    fn quadratic_is_flat() {
        let r = curvature_tensor_at(&p("x^2-y^2-z^2+x*z", 3), &ints(&[1, 0, 2])).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn fermat_quartic_is_flat() {
        let r = curvature_tensor_at(&p("x^4-y^4-z^4", 3), &[int(2), int(1), rat(1, 2)]).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn degenerate_metric_is_reported() {
        assert_eq!(
            curvature_tensor_at(&p("x*y*z*(x+y+z)", 3), &ints(&[1, 0, 0])).unwrap_err(),
            CurvatureError::DegenerateMetric
        );
    }

    #[test]
    fn quartic_sectional_curvatures() {
        let f = p("x*y*z*(x+y+z)", 3);
        let x = ints(&[1, 1, 1]);
        // gradient (3,3,3): tangent plane spanned by (1,-1,0), (1,0,-1)
        let plane = PlaneSpec::new(ints(&[1, -1, 0]), ints(&[1, 0, -1]));
        assert_eq!(sectional_curvature(&f, &x, &plane).unwrap(), rat(5, 3));
        assert_eq!(sectional_curvature_on_m(&f, &x, &plane).unwrap(), int(1));
        // basis change (u+v, 2v)
        let other = PlaneSpec::new(ints(&[2, -1, -1]), ints(&[2, 0, -2]));
        assert_eq!(sectional_curvature(&f, &x, &other).unwrap(), rat(5, 3));
        let off = PlaneSpec::new(ints(&[1, 0, 0]), ints(&[0, 1, 0]));
        assert_eq!(
            sectional_curvature_on_m(&f, &x, &off).unwrap_err(),
            CurvatureError::NotTangent
        );
    }

    #[test]
    fn hyperbolic_plane() {
        let q = p("x^2-y^2-z^2", 3);
        let geo = HessianGeometry::new(&q).unwrap();
        assert_eq!(geo.surface_curvature(&ints(&[3, 1, 2])).unwrap(), int(-1));
    }

    #[test]
    fn cubic_surface_example() {
        let g = p("(x^2-y^2-z^2)*z", 3);
        let x = ints(&[0, 2, -1]);
        let geo = HessianGeometry::new(&g).unwrap();
        assert_eq!(geo.surface_curvature(&x).unwrap(), int(54));
        assert_eq!(covariant_k_m(&g, &x).unwrap(), int(54));
    }

    #[test]
    fn theorem_curv_on_quartic() {
        let f = p("x*y*z*(x+y+z)", 3);
        let pts = vec![ints(&[1, 1, 1]), vec![rat(1, 2), int(2), int(3)], ints(&[-1, -2, 1])];
        let rep = theorem_curv_check(&f, &pts).unwrap();
        assert!(rep.all_agree());
        assert_eq!(rep.rows[0].tensor_route, int(1));
    }

    #[test]
    fn flatness_verdicts() {
        let v = flatness_certificate(&p("x^5 - 3*x^2*y^3 + y^5", 2), 10, 3).unwrap();
        assert!(v.is_flat());
        let v = flatness_certificate(&p("x*y*z*(x+y+z)", 3), 10, 3).unwrap();
        assert!(!v.is_flat());
    }

    #[test]
    fn fd_oracle_quartic() {
        let f = p("x*y*z*(x+y+z)", 3);
        let rep = fd_curvature_oracle(&f, &[1.0, 1.0, 1.0], 1e-4).unwrap();
        assert!(rep.relative_deviation < 1e-5, "{rep:?}");
        let q = p("x^2-y^2-z^2", 3);
        let rep = fd_curvature_oracle(&q, &[1.0, 0.5, 0.25], 1e-4).unwrap();
        assert!(rep.max_abs_deviation < 1e-8, "{rep:?}");
    }

    #[test]
    fn warp_scaling_quartic() {
        let f = p("x*y*z*(x+y+z)", 3);
        let plane = PlaneSpec::new(ints(&[1, -1, 0]), ints(&[1, 0, -1]));
        let rep = warp_scaling_check(&f, &ints(&[1, 1, 1]), &plane, &[int(2), int(3), rat(1, 2)]).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.rows[0].k_u, rat(5, 48));
    }

    #[test]
    fn log_metric_hyperbolic() {
        let q = p("x^2-y^2-z^2", 3);
        let rep = log_metric_product_check(&q, &[ints(&[3, 1, 1]), ints(&[2, 0, 1])], 1e-8).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(log_metric_product_check(&q, &[ints(&[0, 1, 1])], 1e-8).is_err());
    }
}
