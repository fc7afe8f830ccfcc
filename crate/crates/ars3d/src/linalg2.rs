//! Closed-form 2x2 spectral calculus.
//!
//! Everything downstream rests on two operators attached to a real 2x2
//! matrix `M`: the exponential `e^{tM}` and the integral
//! `Λ_t^M = ∫_0^t e^{sM} ds`. Both are evaluated analytically after
//! classifying the eigenvalue structure of `M`; the removable singularities
//! of the scalar building blocks `(e^x - 1)/x` and `((x-1)e^x + 1)/x²` are
//! bridged by short Taylor expansions so the formulas stay accurate through
//! `x = 0`.

use num_complex::Complex64;

use crate::{Error, Result};

/// Default tolerance on the characteristic discriminant when deciding
/// between real-distinct, repeated and complex eigenvalue branches.
pub const DISCRIMINANT_TOL: f64 = 1e-9;

/// Below this magnitude of `x` the scalar quotients switch to series. The
/// six-term series are accurate to ~2e-16 at this cutoff, while the direct
/// quotients lose at most ~eps/cutoff to cancellation just above it.
const SERIES_CUTOFF: f64 = 1e-2;

/// `|det|` at or below this value is treated as singular by [`solve2`].
pub const SINGULAR_TOL: f64 = 1e-12;

/// Column vector in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub const fn zero() -> Self {
        Vec2 { x: 0.0, y: 0.0 }
    }

    pub fn dot(&self, other: &Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Scalar cross product; zero exactly when the two vectors are parallel.
    pub fn cross(&self, other: &Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn perp(&self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(&self) -> Option<Vec2> {
        let n = self.norm();
        if n > 0.0 {
            Some(Vec2::new(self.x / n, self.y / n))
        } else {
            None
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Real 2x2 matrix, row-major fields.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub const fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    pub const fn zero() -> Self {
        Mat2::new(0.0, 0.0, 0.0, 0.0)
    }

    pub const fn diagonal(a: f64, b: f64) -> Self {
        Mat2::new(a, 0.0, 0.0, b)
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a11, self.a21, self.a12, self.a22)
    }

    /// Largest entry magnitude; cheap matrix norm for residual checks.
    pub fn max_abs(&self) -> f64 {
        self.a11
            .abs()
            .max(self.a12.abs())
            .max(self.a21.abs())
            .max(self.a22.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.abs() <= SINGULAR_TOL {
            return None;
        }
        Some(Mat2::new(self.a22 / det, -self.a12 / det, -self.a21 / det, self.a11 / det))
    }

    /// Singular values in decreasing order, via the closed form for the
    /// eigenvalues of `MᵀM`.
    pub fn singular_values(&self) -> (f64, f64) {
        let g = self.transpose() * *self;
        let mean = 0.5 * g.trace();
        let disc = (mean * mean - g.det()).max(0.0).sqrt();
        let hi = (mean + disc).max(0.0).sqrt();
        let lo = (mean - disc).max(0.0).sqrt();
        (hi, lo)
    }
}

impl std::ops::Add for Mat2 {
    type Output = Mat2;
    fn add(self, r: Mat2) -> Mat2 {
        Mat2::new(self.a11 + r.a11, self.a12 + r.a12, self.a21 + r.a21, self.a22 + r.a22)
    }
}

impl std::ops::Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, r: Mat2) -> Mat2 {
        Mat2::new(self.a11 - r.a11, self.a12 - r.a12, self.a21 - r.a21, self.a22 - r.a22)
    }
}

impl std::ops::Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, k: f64) -> Mat2 {
        Mat2::new(self.a11 * k, self.a12 * k, self.a21 * k, self.a22 * k)
    }
}

impl std::ops::Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self.a11 * v.x + self.a12 * v.y, self.a21 * v.x + self.a22 * v.y)
    }
}

impl std::ops::Mul<Mat2> for Mat2 {
    type Output = Mat2;
    fn mul(self, r: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * r.a11 + self.a12 * r.a21,
            self.a11 * r.a12 + self.a12 * r.a22,
            self.a21 * r.a11 + self.a22 * r.a21,
            self.a21 * r.a12 + self.a22 * r.a22,
        )
    }
}

impl std::ops::Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self * -1.0
    }
}

/// Eigenvalue structure of a real 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EigenKind {
    /// Two real eigenvalues with `lambda1 > lambda2`.
    RealDistinct { lambda1: f64, lambda2: f64 },
    /// A double real eigenvalue; `diagonalizable` records whether the
    /// matrix is (within tolerance) a multiple of the identity.
    RealRepeated { lambda: f64, diagonalizable: bool },
    /// Conjugate pair `re ± i·im` with `im > 0`.
    ComplexPair { re: f64, im: f64 },
}

/// Classify the eigenvalue structure of `m`.
///
/// The decision is made on the characteristic discriminant
/// `tr² - 4 det`; values within `tol` of zero collapse to the repeated
/// branch, which keeps the downstream closed forms away from the
/// cancellation-prone small-gap regime.
pub fn classify(m: &Mat2, tol: f64) -> Result<EigenKind> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has a non-finite entry".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("classification tolerance must be positive".into()));
    }
    Ok(eigen_structure(m, tol))
}

pub(crate) fn eigen_structure(m: &Mat2, tol: f64) -> EigenKind {
    let tr = m.trace();
    let disc = tr * tr - 4.0 * m.det();
    if disc.abs() <= tol {
        let lambda = 0.5 * tr;
        // With a repeated eigenvalue the matrix is diagonalizable exactly
        // when it already is lambda * id, so the off-diagonal tells all.
        let diagonalizable = m.a12.abs().max(m.a21.abs()) <= tol;
        EigenKind::RealRepeated { lambda, diagonalizable }
    } else if disc > 0.0 {
        let root = disc.sqrt();
        EigenKind::RealDistinct {
            lambda1: 0.5 * (tr + root),
            lambda2: 0.5 * (tr - root),
        }
    } else {
        EigenKind::ComplexPair { re: 0.5 * tr, im: 0.5 * (-disc).sqrt() }
    }
}

/// `(e^x - 1)/x`, continued through the origin.
fn e1(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        1.0 + x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0 + x / 720.0))))
    } else {
        x.exp_m1() / x
    }
}

/// `((x - 1)e^x + 1)/x²`, continued through the origin (value 1/2).
/// Outside the series region it is evaluated as `(e^x - e1(x))/x`, which
/// funnels the numerator cancellation through `exp_m1` and keeps the
/// absolute error near `eps/|x|` instead of `eps/x²`.
fn e2(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        0.5 + x * (1.0 / 3.0 + x * (1.0 / 8.0 + x * (1.0 / 30.0 + x * (1.0 / 144.0 + x / 840.0))))
    } else {
        (x.exp() - e1(x)) / x
    }
}

/// Complex `(e^z - 1)/z`; used for the conjugate-pair branch where the
/// real and imaginary parts package `∫ e^{λs} cos(μs) ds` and
/// `∫ e^{λs} sin(μs) ds` in one cancellation-free expression.
fn e1_complex(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_CUTOFF {
        let c = [1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0, 1.0 / 720.0];
        let mut acc = Complex64::new(c[5], 0.0);
        for k in (0..5).rev() {
            acc = acc * z + c[k];
        }
        acc
    } else {
        (z.exp() - 1.0) / z
    }
}

fn projectors(m: &Mat2, lambda1: f64, lambda2: f64) -> (Mat2, Mat2) {
    let gap = lambda1 - lambda2;
    let p1 = (*m - Mat2::identity() * lambda2) * (1.0 / gap);
    let p2 = (Mat2::identity() * lambda1 - *m) * (1.0 / gap);
    (p1, p2)
}

/// `e^{tM}` in closed form, one analytic branch per [`EigenKind`].
pub fn expm(m: &Mat2, t: f64) -> Mat2 {
    match eigen_structure(m, DISCRIMINANT_TOL) {
        EigenKind::RealDistinct { lambda1, lambda2 } => {
            let (p1, p2) = projectors(m, lambda1, lambda2);
            p1 * (lambda1 * t).exp() + p2 * (lambda2 * t).exp()
        }
        EigenKind::RealRepeated { lambda, .. } => {
            let n = *m - Mat2::identity() * lambda;
            (Mat2::identity() + n * t) * (lambda * t).exp()
        }
        EigenKind::ComplexPair { re, im } => {
            let b = (*m - Mat2::identity() * re) * (1.0 / im);
            (Mat2::identity() * (im * t).cos() + b * (im * t).sin()) * (re * t).exp()
        }
    }
}

/// `Λ_t^M = ∫_0^t e^{sM} ds` in closed form.
///
/// Per eigenvalue the scalar integral is `t·(e^{λt} - 1)/(λt)`, so each
/// branch is assembled from [`e1`]/[`e2`] (real) or [`e1_complex`]
/// (conjugate pair) and stays finite and accurate as eigenvalues cross
/// zero.
pub fn lambda_op(m: &Mat2, t: f64) -> Mat2 {
    match eigen_structure(m, DISCRIMINANT_TOL) {
        EigenKind::RealDistinct { lambda1, lambda2 } => {
            let (p1, p2) = projectors(m, lambda1, lambda2);
            p1 * (t * e1(lambda1 * t)) + p2 * (t * e1(lambda2 * t))
        }
        EigenKind::RealRepeated { lambda, .. } => {
            let n = *m - Mat2::identity() * lambda;
            Mat2::identity() * (t * e1(lambda * t)) + n * (t * t * e2(lambda * t))
        }
        EigenKind::ComplexPair { re, im } => {
            // ∫_0^t e^{(re + i·im)s} ds = C + iS with the real part pairing
            // with the identity and the imaginary part with (M - re·id)/im.
            let w = e1_complex(Complex64::new(re, im) * t) * t;
            let b = (*m - Mat2::identity() * re) * (1.0 / im);
            Mat2::identity() * w.re + b * w.im
        }
    }
}

/// Composite Simpson quadrature of `∫_0^t e^{sM} ds`.
///
/// Independent of [`lambda_op`]'s closed forms on purpose: it only needs
/// `expm` evaluations. `steps` is clamped to at least 16 and rounded up to
/// an even count.
pub fn lambda_oracle(m: &Mat2, t: f64, steps: usize) -> Mat2 {
    let n = {
        let s = steps.max(16);
        s + (s & 1)
    };
    let h = t / n as f64;
    let mut acc = expm(m, 0.0) + expm(m, t);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + expm(m, h * k as f64) * w;
    }
    acc * (h / 3.0)
}

/// Solve `M x = b` by Cramer's rule.
pub fn solve2(m: &Mat2, b: &Vec2) -> Result<Vec2> {
    let det = m.det();
    if det.abs() <= SINGULAR_TOL {
        return Err(Error::SingularMatrix(det));
    }
    Ok(Vec2::new(
        (b.x * m.a22 - b.y * m.a12) / det,
        (m.a11 * b.y - m.a21 * b.x) / det,
    ))
}
