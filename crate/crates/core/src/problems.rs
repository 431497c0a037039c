//! Convex objectives with known minimal values and minimum-norm minimizers.
//!
//! An [`ObjectiveSpec`] bundles a smooth convex function (value, gradient and
//! Hessian-vector product) with whatever is known analytically about its
//! solution set. The builtin suite covers the one-dimensional piecewise cubic
//! with a flat valley `[-1, 1]`, shifted and general PSD quadratics, and
//! underdetermined least squares where `argmin` is a nontrivial affine set.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smooth convex function on `R^d`.
pub trait SmoothConvex: Send + Sync {
    fn dimension(&self) -> usize;
    fn value(&self, x: &DVector<f64>) -> f64;
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64>;
    fn hessian_vec(&self, x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64>;
}

/// Projector onto a caller-described closed convex set.
pub type Projector = Arc<dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync>;

/// Description of `argmin g`, enough to test membership and to pick the
/// element of minimum norm.
#[derive(Clone)]
pub enum ArgminSet {
    Singleton(DVector<f64>),
    /// Componentwise box `lower <= x <= upper`.
    Box {
        lower: DVector<f64>,
        upper: DVector<f64>,
    },
    /// Affine solution set `{x : matrix x = rhs}` (assumed consistent).
    Affine {
        matrix: DMatrix<f64>,
        rhs: DVector<f64>,
    },
    /// Caller-supplied metric projection onto `argmin g`.
    Projector(Projector),
}

impl fmt::Debug for ArgminSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgminSet::Singleton(p) => f.debug_tuple("Singleton").field(&p.as_slice()).finish(),
            ArgminSet::Box { lower, upper } => f
                .debug_struct("Box")
                .field("lower", &lower.as_slice())
                .field("upper", &upper.as_slice())
                .finish(),
            ArgminSet::Affine { matrix, .. } => f
                .debug_struct("Affine")
                .field("rows", &matrix.nrows())
                .field("cols", &matrix.ncols())
                .finish(),
            ArgminSet::Projector(_) => f.write_str("Projector(..)"),
        }
    }
}

impl ArgminSet {
    /// Metric projection onto the set.
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            ArgminSet::Singleton(p) => p.clone(),
            ArgminSet::Box { lower, upper } => {
                DVector::from_fn(x.len(), |i, _| x[i].clamp(lower[i], upper[i]))
            }
            ArgminSet::Affine { matrix, rhs } => {
                let pinv = pseudo_inverse(matrix);
                x - &pinv * (matrix * x - rhs)
            }
            ArgminSet::Projector(p) => p(x),
        }
    }

    /// The element of minimum norm, i.e. the projection of the origin.
    pub fn min_norm_element(&self, dimension: usize) -> DVector<f64> {
        match self {
            ArgminSet::Affine { matrix, rhs } => pseudo_inverse(matrix) * rhs,
            _ => self.project(&DVector::zeros(dimension)),
        }
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        (self.project(x) - x).norm() <= tol * (1.0 + x.norm())
    }
}

/// A convex objective together with its known solution structure.
#[derive(Clone)]
pub struct ObjectiveSpec {
    pub name: String,
    function: Arc<dyn SmoothConvex>,
    pub min_value: Option<f64>,
    pub argmin: Option<ArgminSet>,
}

impl fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("name", &self.name)
            .field("dimension", &self.dimension())
            .field("min_value", &self.min_value)
            .field("argmin", &self.argmin)
            .finish()
    }
}

impl ObjectiveSpec {
    pub fn new(
        name: impl Into<String>,
        function: Arc<dyn SmoothConvex>,
        min_value: Option<f64>,
        argmin: Option<ArgminSet>,
    ) -> Self {
        Self {
            name: name.into(),
            function,
            min_value,
            argmin,
        }
    }

    pub fn dimension(&self) -> usize {
        self.function.dimension()
    }

    /// Unchecked value; used on hot paths after the caller validated `x`.
    #[inline]
    pub fn value(&self, x: &DVector<f64>) -> f64 {
        self.function.value(x)
    }

    #[inline]
    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.function.gradient(x)
    }

    #[inline]
    pub fn hessian_vec(&self, x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        self.function.hessian_vec(x, v)
    }

    /// `g(x) - min g`, or NaN when the minimal value is not known.
    pub fn gap(&self, x: &DVector<f64>) -> f64 {
        match self.min_value {
            Some(m) => self.value(x) - m,
            None => f64::NAN,
        }
    }

    pub(crate) fn check_point(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("point"));
        }
        Ok(())
    }
}

/// Value and gradient at `x`, with dimension and finiteness checks.
pub fn evaluate(obj: &ObjectiveSpec, x: &DVector<f64>) -> Result<(f64, DVector<f64>)> {
    obj.check_point(x)?;
    Ok((obj.value(x), obj.gradient(x)))
}

/// `∇²g(x) v`.
pub fn hessian_vector_product(
    obj: &ObjectiveSpec,
    x: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    obj.check_point(x)?;
    if v.len() != obj.dimension() {
        return Err(Error::DimensionMismatch {
            expected: obj.dimension(),
            got: v.len(),
        });
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("direction"));
    }
    Ok(obj.hessian_vec(x, v))
}

/// The minimum-norm element of `argmin g`.
pub fn min_norm_solution(obj: &ObjectiveSpec) -> Result<DVector<f64>> {
    obj.argmin
        .as_ref()
        .map(|set| set.min_norm_element(obj.dimension()))
        .ok_or_else(|| Error::ArgminUnavailable(obj.name.clone()))
}

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

/// Piecewise cubic `-(x+1)^3` / `0` / `(x-1)^3`, flat on `[-1, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct PiecewiseCubic;

impl SmoothConvex for PiecewiseCubic {
    fn dimension(&self) -> usize {
        1
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        let x = x[0];
        if x < -1.0 {
            -(x + 1.0).powi(3)
        } else if x > 1.0 {
            (x - 1.0).powi(3)
        } else {
            0.0
        }
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let x = x[0];
        let g = if x < -1.0 {
            -3.0 * (x + 1.0).powi(2)
        } else if x > 1.0 {
            3.0 * (x - 1.0).powi(2)
        } else {
            0.0
        };
        DVector::from_element(1, g)
    }

    fn hessian_vec(&self, x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let x = x[0];
        let h = if x < -1.0 {
            -6.0 * (x + 1.0)
        } else if x > 1.0 {
            6.0 * (x - 1.0)
        } else {
            0.0
        };
        DVector::from_element(1, h * v[0])
    }
}

/// `½‖x − c‖²`.
#[derive(Debug, Clone)]
pub struct ShiftedQuadratic {
    pub center: DVector<f64>,
}

impl SmoothConvex for ShiftedQuadratic {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        0.5 * (x - &self.center).norm_squared()
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        x - &self.center
    }

    fn hessian_vec(&self, _x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        v.clone()
    }
}

/// `½ xᵀAx − bᵀx` with `A` symmetric positive semidefinite.
#[derive(Debug, Clone)]
pub struct PsdQuadratic {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
}

impl SmoothConvex for PsdQuadratic {
    fn dimension(&self) -> usize {
        self.b.len()
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.a * x)) - self.b.dot(x)
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x - &self.b
    }

    fn hessian_vec(&self, _x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        &self.a * v
    }
}

/// `½‖Ax − b‖²`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
}

impl SmoothConvex for LeastSquares {
    fn dimension(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        0.5 * (&self.a * x - &self.b).norm_squared()
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.a.tr_mul(&(&self.a * x - &self.b))
    }

    fn hessian_vec(&self, _x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        self.a.tr_mul(&(&self.a * v))
    }
}

/// Parameters accepted by [`builtin`]. Matrices are given row-major.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
}

pub const BUILTIN_NAMES: [&str; 4] = ["paper1d", "shifted_quadratic", "psd_quadratic", "least_squares"];

/// Construct a builtin objective by name.
pub fn builtin(name: &str, params: &ProblemParams) -> Result<ObjectiveSpec> {
    match name {
        "paper1d" => Ok(paper1d()),
        "shifted_quadratic" => {
            let c = params
                .c
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("shifted_quadratic requires `c`".into()))?;
            shifted_quadratic(DVector::from_column_slice(c))
        }
        "psd_quadratic" => {
            let (a, b) = matrix_params(name, params)?;
            psd_quadratic(a, b)
        }
        "least_squares" => {
            let (a, b) = matrix_params(name, params)?;
            least_squares(a, b)
        }
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

pub fn paper1d() -> ObjectiveSpec {
    ObjectiveSpec::new(
        "paper1d",
        Arc::new(PiecewiseCubic),
        Some(0.0),
        Some(ArgminSet::Box {
            lower: DVector::from_element(1, -1.0),
            upper: DVector::from_element(1, 1.0),
        }),
    )
}

pub fn shifted_quadratic(center: DVector<f64>) -> Result<ObjectiveSpec> {
    if center.is_empty() {
        return Err(Error::InvalidParameter("`c` must be nonempty".into()));
    }
    if center.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("c"));
    }
    Ok(ObjectiveSpec::new(
        "shifted_quadratic",
        Arc::new(ShiftedQuadratic {
            center: center.clone(),
        }),
        Some(0.0),
        Some(ArgminSet::Singleton(center)),
    ))
}

pub fn psd_quadratic(a: DMatrix<f64>, b: DVector<f64>) -> Result<ObjectiveSpec> {
    if !a.is_square() || a.nrows() != b.len() {
        return Err(Error::InvalidParameter(format!(
            "psd_quadratic needs a square A matching b, got {}x{} and {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let scale = a.amax().max(1.0);
    let asym = (&a - a.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::InvalidParameter(format!("A is not symmetric (asymmetry {asym:e})")));
    }
    let min_eig = a.clone().symmetric_eigen().eigenvalues.min();
    if min_eig < -1e-12 * scale {
        return Err(Error::IndefiniteMatrix { min_eigenvalue: min_eig });
    }
    let pinv = pseudo_inverse(&a);
    let xstar = &pinv * &b;
    if (&a * &xstar - &b).norm() > 1e-10 * (1.0 + b.norm()) {
        return Err(Error::InvalidParameter(
            "b is not in the range of A; the quadratic is unbounded below".into(),
        ));
    }
    let min_value = -0.5 * b.dot(&xstar);
    Ok(ObjectiveSpec::new(
        "psd_quadratic",
        Arc::new(PsdQuadratic { a: a.clone(), b: b.clone() }),
        Some(min_value),
        Some(ArgminSet::Affine { matrix: a, rhs: b }),
    ))
}

pub fn least_squares(a: DMatrix<f64>, b: DVector<f64>) -> Result<ObjectiveSpec> {
    if a.nrows() != b.len() || a.ncols() == 0 {
        return Err(Error::InvalidParameter(format!(
            "least_squares needs A with rows matching b, got {}x{} and {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let xstar = pseudo_inverse(&a) * &b;
    let min_value = 0.5 * (&a * &xstar - &b).norm_squared();
    let normal = a.tr_mul(&a);
    let normal_rhs = a.tr_mul(&b);
    Ok(ObjectiveSpec::new(
        "least_squares",
        Arc::new(LeastSquares { a, b }),
        Some(min_value),
        Some(ArgminSet::Affine {
            matrix: normal,
            rhs: normal_rhs,
        }),
    ))
}

fn matrix_params(name: &str, params: &ProblemParams) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let rows = params
        .a
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("{name} requires `a`")))?;
    let b = params
        .b
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("{name} requires `b`")))?;
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidParameter(format!("{name}: `a` must be a nonempty rectangular matrix")));
    }
    if rows.iter().flatten().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("matrix parameters"));
    }
    let a = DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]);
    Ok((a, DVector::from_column_slice(b)))
}

/// Moore–Penrose pseudoinverse with the usual `max(m, n)·σ_max·eps` cutoff.
pub(crate) fn pseudo_inverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = m.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let cutoff = (m.nrows().max(m.ncols()) as f64) * sigma_max * f64::EPSILON;
    svd.pseudo_inverse(cutoff.max(f64::MIN_POSITIVE))
        .expect("SVD computed with both factors")
}
