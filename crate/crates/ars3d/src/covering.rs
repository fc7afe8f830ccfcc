//! The compact-fiber quotient available in the pure rotation case.
//!
//! For `θ = [[0,-1],[1,0]]` the subgroup `{(2πk, 0)}` is discrete, central
//! and normal, because `ρ_{2π} = id`. Projecting `t` modulo `2π` realizes
//! the quotient concretely; loci and flows descend because every formula
//! depends on `t` only through the `2π`-periodic maps `ρ_t` and `Λ^θ_t`
//! (the latter equals `(ρ_t - id)θ⁻¹` here). No other structure family has
//! `ρ` periodic, so the module refuses them.

use std::f64::consts::PI;

use crate::ars::SimpleARS;
use crate::group::{GroupElement, Theta, ThetaKind};
use crate::linalg2::Vec2;
use crate::locus::LocusFunction;
use crate::symmetry::LinearField;
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// A point of the quotient group, with the circle coordinate normalized
/// into `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuotientElement {
    pub t_bar: f64,
    pub v: Vec2,
}

impl QuotientElement {
    pub fn new(t: f64, v: Vec2) -> QuotientElement {
        QuotientElement { t_bar: t.rem_euclid(TWO_PI), v }
    }

    /// Distance that respects the circle: coordinates `ε` and `2π - ε`
    /// are close.
    pub fn distance(&self, other: &QuotientElement) -> f64 {
        let raw = (self.t_bar - other.t_bar).abs();
        raw.min(TWO_PI - raw).hypot((self.v - other.v).norm())
    }
}

fn require_rotation(theta: &Theta) -> Result<()> {
    if theta.kind() == (ThetaKind::Complex(0.0)) {
        Ok(())
    } else {
        Err(Error::UnsupportedTheta(
            "the quotient by {(2pi k, 0)} needs rho to be 2pi-periodic, which only the pure rotation family satisfies",
        ))
    }
}

/// Canonical projection `(t, v) ↦ (t mod 2π, v)`.
pub fn project(theta: &Theta, g: GroupElement) -> Result<QuotientElement> {
    require_rotation(theta)?;
    Ok(QuotientElement::new(g.t, g.v))
}

/// Product in the quotient: same semidirect formula with the circle
/// coordinate reduced.
pub fn quotient_mul(
    theta: &Theta,
    a: QuotientElement,
    b: QuotientElement,
) -> Result<QuotientElement> {
    require_rotation(theta)?;
    Ok(QuotientElement::new(a.t_bar + b.t_bar, a.v + theta.rho(a.t_bar) * b.v))
}

/// Flow of a linear field evaluated directly on the quotient; well defined
/// because `Λ^θ_t` is `2π`-periodic for the rotation θ.
pub fn quotient_flow(field: &LinearField, s: f64, q: QuotientElement) -> Result<QuotientElement> {
    let theta = field.theta();
    require_rotation(&theta)?;
    let v = crate::linalg2::expm(&field.a_mat(), s) * q.v
        + theta.lambda_op(q.t_bar) * (crate::linalg2::lambda_op(&field.a_mat(), s) * field.xi());
    Ok(QuotientElement::new(q.t_bar, v))
}

/// Evidence that the singular locus is a union of fibers of the projection.
#[derive(Clone, Debug)]
pub struct DescentReport {
    /// Largest value of `|F(t + 2πk, v) - F(t, v)|` over the sampled grid
    /// and shifts `k ∈ {-2, …, 2}`.
    pub max_residual: f64,
    pub samples: usize,
    pub descends: bool,
}

/// Checks on a deterministic grid that the locus function only depends on
/// `t` through its class modulo `2π`, so locus membership descends to the
/// quotient.
pub fn locus_descends(ars: &SimpleARS) -> Result<DescentReport> {
    require_rotation(&ars.theta())?;
    let lf = LocusFunction::new(ars);
    let mut max_residual: f64 = 0.0;
    let mut samples = 0;
    for i in 0..9 {
        let t = -4.0 + i as f64;
        for j in 0..5 {
            for l in 0..5 {
                let v = Vec2::new(-2.0 + j as f64, -2.0 + l as f64);
                let base = lf.eval(GroupElement::new(t, v));
                for k in -2i32..=2 {
                    let shifted = lf.eval(GroupElement::new(t + TWO_PI * k as f64, v));
                    let residual = (shifted - base).abs() / (1.0 + base.abs());
                    if residual > max_residual {
                        max_residual = residual;
                    }
                }
                samples += 1;
            }
        }
    }
    Ok(DescentReport { max_residual, samples, descends: max_residual <= 1e-9 })
}

/// Checks `project ∘ φ_s = quotient_flow ∘ project` at one point.
pub fn flow_descends(field: &LinearField, s: f64, g: GroupElement) -> Result<bool> {
    let downstairs = quotient_flow(field, s, project(&field.theta(), g)?)?;
    let upstairs = project(&field.theta(), field.flow(s, g))?;
    Ok(downstairs.distance(&upstairs) <= 1e-9 * (1.0 + upstairs.v.norm()))
}
