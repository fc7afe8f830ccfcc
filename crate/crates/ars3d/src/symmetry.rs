//! Derivations, automorphisms and linear vector fields.
//!
//! On these groups every derivation of the algebra has the block form
//! `D = [[0, 0], [ξ, A]]` with `Aθ = θA`, automorphisms of the group are
//! `φ(t, v) = (εt, Pv + εΛ^θ_{εt} η)` with `Pθ = εθP` and `ε = ±1`
//! (`ε = 1` forced unless θ is trace-free), and linear fields - the fields
//! whose flows are automorphisms - share the derivation data `(ξ, A)`.

use crate::group::{GroupElement, Tangent, Theta};
use crate::linalg2::{expm, lambda_op, Mat2, Vec2};
use crate::{Error, Result, Tolerances};

/// Residual of the structural constraints of a derivation `(ξ, A)`:
/// finiteness of the data and `Aθ = θA`.
pub fn derivation_residual(theta: &Theta, a_mat: &Mat2) -> f64 {
    (*a_mat * theta.matrix() - theta.matrix() * *a_mat).max_abs()
}

/// Does `(ξ, A)` define a derivation of the algebra of `theta`?
pub fn check_derivation(theta: &Theta, xi: &Vec2, a_mat: &Mat2, tol: f64) -> bool {
    xi.is_finite() && a_mat.is_finite() && derivation_residual(theta, a_mat) <= tol
}

/// Does `(ε, P, η)` define an automorphism? Requires `ε ∈ {±1}` (`+1`
/// unless θ is trace-free), invertible `P` and `Pθ = εθP`.
pub fn check_automorphism(theta: &Theta, epsilon: f64, p: &Mat2, eta: &Vec2, tol: f64) -> bool {
    if !p.is_finite() || !eta.is_finite() {
        return false;
    }
    if epsilon != 1.0 && epsilon != -1.0 {
        return false;
    }
    if epsilon == -1.0 && !theta.is_trace_free() {
        return false;
    }
    if p.det().abs() <= tol {
        return false;
    }
    (*p * theta.matrix() - theta.matrix() * *p * epsilon).max_abs() <= tol
}

/// A derivation `D = [[0, 0], [ξ, A]]` of the algebra, acting as
/// `D(a, w) = (0, aξ + Aw)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivation {
    theta: Theta,
    pub xi: Vec2,
    pub a_mat: Mat2,
}

impl Derivation {
    pub fn new(theta: Theta, xi: Vec2, a_mat: Mat2, tol: f64) -> Result<Derivation> {
        if !check_derivation(&theta, &xi, &a_mat, tol) {
            return Err(Error::InvalidLinearField(derivation_residual(&theta, &a_mat)));
        }
        Ok(Derivation { theta, xi, a_mat })
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn apply(&self, a: f64, w: Vec2) -> Vec2 {
        self.xi * a + self.a_mat * w
    }
}

/// A group automorphism `φ(t, v) = (εt, Pv + εΛ^θ_{εt} η)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Automorphism {
    theta: Theta,
    pub epsilon: f64,
    pub p: Mat2,
    pub eta: Vec2,
}

impl Automorphism {
    pub fn new(theta: Theta, epsilon: f64, p: Mat2, eta: Vec2, tol: f64) -> Result<Automorphism> {
        if !check_automorphism(&theta, epsilon, &p, &eta, tol) {
            return Err(Error::InvalidAutomorphism(format!(
                "(ε = {epsilon}, det P = {:.3e}, Pθ - εθP residual = {:.3e})",
                p.det(),
                (p * theta.matrix() - theta.matrix() * p * epsilon).max_abs(),
            )));
        }
        Ok(Automorphism { theta, epsilon, p, eta })
    }

    pub fn identity(theta: Theta) -> Automorphism {
        Automorphism { theta, epsilon: 1.0, p: Mat2::identity(), eta: Vec2::zero() }
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn apply(&self, g: GroupElement) -> GroupElement {
        let t = self.epsilon * g.t;
        GroupElement::new(t, self.p * g.v + self.theta.lambda_op(t) * self.eta * self.epsilon)
    }

    /// Differential at the base point `g`:
    /// `(a, w) ↦ (εa, Pw + a ρ_{εt} η)`.
    pub fn differential(&self, g: GroupElement, z: Tangent) -> Tangent {
        Tangent::new(
            self.epsilon * z.dt,
            self.p * z.dv + self.theta.rho(self.epsilon * g.t) * self.eta * z.dt,
        )
    }

    /// Differential at the identity as a block matrix `[[ε, 0], [η, P]]`
    /// acting on algebra coordinates `(a, w)`.
    pub fn differential_at_identity(&self, a: f64, w: Vec2) -> (f64, Vec2) {
        (self.epsilon * a, self.p * w + self.eta * a)
    }

    /// Inverse of the differential at the identity:
    /// `(a, w) ↦ (εa, P⁻¹(w - εa·η))`.
    pub fn differential_at_identity_inv(&self, a: f64, w: Vec2) -> Result<(f64, Vec2)> {
        let pinv = self.p.inverse().ok_or(Error::SingularMatrix(self.p.det()))?;
        Ok((self.epsilon * a, pinv * (w - self.eta * (self.epsilon * a))))
    }
}

/// A linear vector field `X(t, v) = (0, Av + Λ^θ_t ξ)`. The constructor is
/// the only way to build one, so the commutation constraint `Aθ = θA`
/// holds for every value of the type.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearField {
    theta: Theta,
    xi: Vec2,
    a_mat: Mat2,
}

impl LinearField {
    pub fn new(theta: Theta, xi: Vec2, a_mat: Mat2, tol: f64) -> Result<LinearField> {
        if !check_derivation(&theta, &xi, &a_mat, tol) {
            return Err(Error::InvalidLinearField(derivation_residual(&theta, &a_mat)));
        }
        Ok(LinearField { theta, xi, a_mat })
    }

    /// Build without the commutation check. Only for bug-injection in the
    /// negative-control tests of the verification suite.
    #[cfg(test)]
    pub(crate) fn unchecked(theta: Theta, xi: Vec2, a_mat: Mat2) -> LinearField {
        LinearField { theta, xi, a_mat }
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn xi(&self) -> Vec2 {
        self.xi
    }

    pub fn a_mat(&self) -> Mat2 {
        self.a_mat
    }

    /// The associated derivation `D = [[0, 0], [ξ, A]]`.
    pub fn derivation(&self) -> Derivation {
        Derivation { theta: self.theta, xi: self.xi, a_mat: self.a_mat }
    }

    /// Field value `X(t, v) = (0, Av + Λ^θ_t ξ)`.
    pub fn eval(&self, g: GroupElement) -> Tangent {
        Tangent::new(0.0, self.a_mat * g.v + self.theta.lambda_op(g.t) * self.xi)
    }

    /// Time-`s` flow `φ_s(t, v) = (t, e^{sA} v + Λ^θ_t Λ^A_s ξ)`. Every
    /// `φ_s` is a group automorphism.
    pub fn flow(&self, s: f64, g: GroupElement) -> GroupElement {
        GroupElement::new(
            g.t,
            expm(&self.a_mat, s) * g.v + self.theta.lambda_op(g.t) * (lambda_op(&self.a_mat, s) * self.xi),
        )
    }

    /// Is `g` a singularity of the field (`X(g) = 0` within `tol`)?
    pub fn is_singularity(&self, g: GroupElement, tol: f64) -> bool {
        self.eval(g).norm() <= tol
    }
}

/// Convenience constructor using the default constraint tolerance.
pub fn linear_field(theta: Theta, xi: Vec2, a_mat: Mat2) -> Result<LinearField> {
    LinearField::new(theta, xi, a_mat, Tolerances::default().constraint)
}
