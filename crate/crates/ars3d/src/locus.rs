//! The singular locus `Z = F⁻¹(0)` of a simple almost-Riemannian structure.
//!
//! `F(t, v) = ⟨ρ_{-t}(Av + Λ^θ_t ξ), u⟩` vanishes exactly where the field
//! falls into the translated distribution. Its zero set is either a stack
//! of vertical planes (when `A = 0`, one plane per zero of a scalar curve
//! in `t`) or a connected graph over the plane `R × l_Δ`, parametrized by
//! an explicit homeomorphism whose shape depends on the rank of `A`.

use crate::ars::{locus_scalar, SimpleARS};
use crate::crossing::{zero_classify, ScalarCurve, ZeroClassification};
use crate::group::GroupElement;
use crate::linalg2::Vec2;
use crate::{Error, Result, Window};

/// Singular-value cutoff for the rank decision on `A`.
const RANK_CUTOFF: f64 = 1e-10;

/// The defining function of the singular locus, with the unit normal `u`
/// of `l_Δ` frozen at construction.
#[derive(Clone, Copy, Debug)]
pub struct LocusFunction {
    ars: SimpleARS,
    u: Vec2,
}

/// Which side of the locus a point sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    CMinus,
    OnLocus,
    CPlus,
}

/// Outcome of the regular-value audit over a batch of locus samples.
#[derive(Clone, Debug)]
pub struct AuditReport {
    /// Smallest gradient norm seen across the samples (+∞ when empty).
    pub min_grad_norm: f64,
    /// Indices of samples whose gradient norm fell below the tolerance.
    pub violations: Vec<usize>,
}

/// A single plane `{t_k} × R²` of an `A = 0` locus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneTime {
    pub t: f64,
    /// Whether the defining scalar curve changes sign there. Tangential
    /// planes (no sign change) are legal; the ambient-regularity
    /// guarantee only covers the `A ≠ 0` case.
    pub transversal: bool,
}

/// Parametrization data for a connected graph-type locus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphParametrization {
    /// `H(t, v) = (t, A⁻¹(ρ_t v - Λ^θ_t ξ))`, available when `det A ≠ 0`;
    /// the locus is the image of `R × l_Δ`.
    Hmap,
    /// Rank-one map `I(t, s·w₂) = (t, q(t) w₁ + s w₂)` where `w₂` spans
    /// `ker A`, `w₁ ⟂ w₂` is flipped so `⟨Aw₁, u⟩ > 0`, `β` is the
    /// θ-eigenvalue on `A w₁`, and
    /// `q(t) = ⟨Λ^θ_{-t} ξ, u⟩ / ⟨ρ_{-t} A w₁, u⟩`.
    Imap { w1: Vec2, w2: Vec2, beta: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum LocusShape {
    /// `A = 0`: a union of fiber planes, one per zero of the restriction
    /// curve. `times` is truncated to the queried window; `period` carries
    /// the translation symmetry of the full set when there is one.
    PlaneStack { times: Vec<PlaneTime>, period: Option<f64> },
    GraphOverPlane { map: GraphParametrization },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentCount {
    Finite(usize),
    Infinite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocusDescription {
    pub shape: LocusShape,
    pub connected: bool,
    pub component_count: ComponentCount,
}

impl LocusFunction {
    pub fn new(ars: &SimpleARS) -> LocusFunction {
        LocusFunction { ars: *ars, u: ars.line().normal }
    }

    pub fn ars(&self) -> &SimpleARS {
        &self.ars
    }

    pub fn normal(&self) -> Vec2 {
        self.u
    }

    /// `F(t, v) = ⟨ρ_{-t}(Av + Λ^θ_t ξ), u⟩`.
    pub fn eval(&self, g: GroupElement) -> f64 {
        locus_scalar(&self.ars.field(), self.u, g)
    }

    /// Exact gradient: `∂_t F = ⟨ρ_{-t}(ξ - θAv), u⟩` and
    /// `∂_v F = Aᵀ ρ_{-t}ᵀ u`.
    pub fn gradient(&self, g: GroupElement) -> (f64, Vec2) {
        let theta = self.ars.theta();
        let field = self.ars.field();
        let dt = (theta.rho(-g.t) * (field.xi() - theta.matrix() * (field.a_mat() * g.v)))
            .dot(&self.u);
        let dv = field.a_mat().transpose() * (theta.rho(-g.t).transpose() * self.u);
        (dt, dv)
    }

    /// Sign of `F` with a tolerance band scaled by `1 + |v|`.
    pub fn component_of(&self, g: GroupElement) -> Side {
        let f = self.eval(g);
        if f.abs() <= self.ars.tolerances().locus * (1.0 + g.v.norm()) {
            Side::OnLocus
        } else if f < 0.0 {
            Side::CMinus
        } else {
            Side::CPlus
        }
    }

    /// Checks that `0` stays a regular value along the given locus samples:
    /// every sample must satisfy `|F| ≤ tol` (scaled), and the report lists
    /// those whose gradient degenerates.
    pub fn regular_value_audit(
        &self,
        samples: &[GroupElement],
        tol: f64,
    ) -> Result<AuditReport> {
        let mut min_grad_norm = f64::INFINITY;
        let mut violations = Vec::new();
        for (index, &g) in samples.iter().enumerate() {
            let value = self.eval(g).abs();
            if value > tol * (1.0 + g.v.norm()) {
                return Err(Error::SampleNotOnLocus { index, value });
            }
            let (dt, dv) = self.gradient(g);
            let norm = (dt * dt + dv.dot(&dv)).sqrt();
            if norm < min_grad_norm {
                min_grad_norm = norm;
            }
            if norm <= tol {
                violations.push(index);
            }
        }
        Ok(AuditReport { min_grad_norm, violations })
    }

    /// The restriction of `F` to the `t`-axis when `A = 0` (where `F` does
    /// not depend on `v`): `f(t) = -⟨Λ^θ_{-t} ξ, u⟩` as a closed form.
    fn plane_stack_curve(&self) -> ScalarCurve {
        let theta = self.ars.theta();
        let xi = self.ars.field().xi();
        let u = self.u;
        match theta.matrix().inverse() {
            Some(theta_inv) => {
                // Λ_{-t} = (e^{-tθ} - id)θ⁻¹, so
                // f(t) = ⟨-u, e^{-tθ}θ⁻¹ξ⟩ + ⟨θ⁻¹ξ, u⟩.
                let w = theta_inv * xi;
                ScalarCurve::MatExpForm {
                    a_mat: theta.matrix() * -1.0,
                    u: -u,
                    v: w,
                    tau: -w.dot(&u),
                }
            }
            None => {
                // θ = diag(1, 0): f(t) = ξ₁u₁(1 - e^{-t}) + ξ₂u₂ t.
                ScalarCurve::ExpAffine {
                    coeff: -xi.x * u.x,
                    rate: -1.0,
                    slope: xi.y * u.y,
                    intercept: xi.x * u.x,
                }
            }
        }
    }

    fn rank_of_a(&self) -> usize {
        let (hi, lo) = self.ars.field().a_mat().singular_values();
        let scale = 1.0 + hi;
        if hi <= RANK_CUTOFF * scale {
            0
        } else if lo <= RANK_CUTOFF * scale {
            1
        } else {
            2
        }
    }

    /// Rank-one basis `(w₁, w₂, β)` from the proof construction: `w₂` a
    /// unit kernel vector, `w₁ = w₂^⟂` flipped so `⟨Aw₁, u⟩ > 0`, and `β`
    /// the eigenvalue of θ on the line `R·Aw₁`.
    fn rank_one_basis(&self) -> Result<(Vec2, Vec2, f64)> {
        let a = self.ars.field().a_mat();
        // Kernel direction of a rank-one 2x2 matrix: orthogonal to the
        // nonzero row of A (rows span the row space).
        let r1 = Vec2::new(a.a11, a.a12);
        let r2 = Vec2::new(a.a21, a.a22);
        let row = if r1.norm() >= r2.norm() { r1 } else { r2 };
        let w2 = row
            .perp()
            .normalized()
            .ok_or_else(|| Error::InvalidInput("rank-one matrix has no nonzero row".into()))?;
        let mut w1 = w2.perp();
        let aw1 = a * w1;
        let pairing = aw1.dot(&self.u);
        if pairing.abs() <= RANK_CUTOFF * (1.0 + a.max_abs()) {
            // Im A ⊂ l_Δ: the graph formula degenerates; handled by the
            // caller as an error.
            return Err(Error::WrongShape("image of A lies inside the distinguished line"));
        }
        if pairing < 0.0 {
            w1 = -w1;
        }
        let aw1 = a * w1;
        let beta = (self.ars.theta().matrix() * aw1).dot(&aw1) / aw1.dot(&aw1);
        Ok((w1, w2, beta))
    }

    /// Global description of the locus: plane stack (`A = 0`) or connected
    /// graph over `R × l_Δ` (`A ≠ 0`), with plane times truncated to the
    /// window.
    pub fn describe(&self, window: Window) -> Result<LocusDescription> {
        match self.rank_of_a() {
            0 => {
                let curve = self.plane_stack_curve();
                let report =
                    zero_classify(&curve, window, self.ars.tolerances().zero_scan);
                let times: Vec<PlaneTime> = report
                    .zeros_in_window
                    .iter()
                    .map(|z| PlaneTime { t: z.location, transversal: z.sign_change })
                    .collect();
                let (period, component_count) = match report.classification {
                    ZeroClassification::InfiniteDiscrete { period } => {
                        (period, ComponentCount::Infinite)
                    }
                    _ => (None, ComponentCount::Finite(times.len())),
                };
                let connected = matches!(component_count, ComponentCount::Finite(n) if n <= 1);
                Ok(LocusDescription {
                    shape: LocusShape::PlaneStack { times, period },
                    connected,
                    component_count,
                })
            }
            1 => {
                let (w1, w2, beta) = self.rank_one_basis()?;
                Ok(LocusDescription {
                    shape: LocusShape::GraphOverPlane {
                        map: GraphParametrization::Imap { w1, w2, beta },
                    },
                    connected: true,
                    component_count: ComponentCount::Finite(1),
                })
            }
            _ => Ok(LocusDescription {
                shape: LocusShape::GraphOverPlane { map: GraphParametrization::Hmap },
                connected: true,
                component_count: ComponentCount::Finite(1),
            }),
        }
    }

    /// `H(t, v) = (t, A⁻¹(ρ_t v - Λ^θ_t ξ))`; carries `{⟨v, u⟩ = 0}` onto
    /// the locus when `det A ≠ 0`.
    pub fn h_map(&self, t: f64, v: Vec2) -> Result<GroupElement> {
        let theta = self.ars.theta();
        let a_inv = self
            .ars
            .field()
            .a_mat()
            .inverse()
            .ok_or(Error::SingularMatrix(self.ars.field().a_mat().det()))?;
        Ok(GroupElement::new(
            t,
            a_inv * (theta.rho(t) * v - theta.lambda_op(t) * self.ars.field().xi()),
        ))
    }

    /// Inverse of [`LocusFunction::h_map`]:
    /// `H⁻¹(t, v) = (t, ρ_{-t}(Av + Λ^θ_t ξ))`.
    pub fn h_map_inv(&self, g: GroupElement) -> GroupElement {
        let theta = self.ars.theta();
        GroupElement::new(
            g.t,
            theta.rho(-g.t)
                * (self.ars.field().a_mat() * g.v + theta.lambda_op(g.t) * self.ars.field().xi()),
        )
    }

    /// Rank-one graph map `I(t, v) = (t, (⟨v, w₁⟩ + q(t))w₁ + ⟨v, w₂⟩w₂)`.
    pub fn i_map(&self, map: &GraphParametrization, t: f64, v: Vec2) -> Result<GroupElement> {
        let GraphParametrization::Imap { w1, w2, .. } = map else {
            return Err(Error::WrongShape("expected a rank-one parametrization"));
        };
        let q = self.rank_one_offset(*w1, t);
        Ok(GroupElement::new(t, *w1 * (v.dot(w1) + q) + *w2 * v.dot(w2)))
    }

    /// Inverse of [`LocusFunction::i_map`] on its image:
    /// subtracts `q(t)` from the `w₁` coordinate.
    pub fn i_map_inv(&self, map: &GraphParametrization, g: GroupElement) -> Result<GroupElement> {
        let GraphParametrization::Imap { w1, w2, .. } = map else {
            return Err(Error::WrongShape("expected a rank-one parametrization"));
        };
        let q = self.rank_one_offset(*w1, g.t);
        Ok(GroupElement::new(
            g.t,
            *w1 * (g.v.dot(w1) - q) + *w2 * g.v.dot(w2),
        ))
    }

    fn rank_one_offset(&self, w1: Vec2, t: f64) -> f64 {
        let theta = self.ars.theta();
        let num = (theta.lambda_op(-t) * self.ars.field().xi()).dot(&self.u);
        let den = (theta.rho(-t) * (self.ars.field().a_mat() * w1)).dot(&self.u);
        num / den
    }

    /// Point of the locus at parametrization coordinates `(s, t)`:
    /// `H(t, s·direction)` for the full-rank map, `I(t, s·w₂)` for the
    /// rank-one map. Fails for plane stacks (use the plane times directly)
    /// and when the produced point does not satisfy `|F| ≤ 1e−9` scaled.
    pub fn parametrize(
        &self,
        desc: &LocusDescription,
        s: f64,
        t: f64,
    ) -> Result<GroupElement> {
        let g = match &desc.shape {
            LocusShape::PlaneStack { .. } => {
                return Err(Error::WrongShape("plane stacks are not graphs over a plane"))
            }
            LocusShape::GraphOverPlane { map: GraphParametrization::Hmap } => {
                self.h_map(t, self.ars.line().direction * s)?
            }
            LocusShape::GraphOverPlane { map } => {
                let GraphParametrization::Imap { w2, .. } = map else { unreachable!() };
                self.i_map(map, t, *w2 * s)?
            }
        };
        let residual = self.eval(g).abs();
        if residual > self.ars.tolerances().locus * (1.0 + g.v.norm()) {
            return Err(Error::InvalidInput(format!(
                "parametrized point misses the locus (|F| = {residual:.3e})"
            )));
        }
        Ok(g)
    }

    /// Deterministic grid of locus points for plotting: `resolution²` points
    /// over `window × window` in the `(t, s)` parametrization coordinates
    /// (graph case) or `resolution²` fiber points on each plane (stack
    /// case). Output is sorted by `(t, x, y)`.
    pub fn sample(&self, window: Window, resolution: usize) -> Result<Vec<GroupElement>> {
        if resolution < 2 {
            return Err(Error::InvalidInput("resolution must be at least 2".into()));
        }
        if window.is_empty() {
            return Ok(Vec::new());
        }
        let desc = self.describe(window)?;
        let step = window.len() / (resolution - 1) as f64;
        let coords: Vec<f64> = (0..resolution)
            .map(|i| if i == resolution - 1 { window.hi } else { window.lo + step * i as f64 })
            .collect();
        let mut out = Vec::new();
        match &desc.shape {
            LocusShape::PlaneStack { times, .. } => {
                for plane in times {
                    for &x in &coords {
                        for &y in &coords {
                            out.push(GroupElement::new(plane.t, Vec2::new(x, y)));
                        }
                    }
                }
            }
            LocusShape::GraphOverPlane { .. } => {
                for &t in &coords {
                    for &s in &coords {
                        out.push(self.parametrize(&desc, s, t)?);
                    }
                }
            }
        }
        out.sort_by(|a, b| {
            (a.t, a.v.x, a.v.y)
                .partial_cmp(&(b.t, b.v.x, b.v.y))
                .expect("locus samples are finite")
        });
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg2::Mat2;
    use crate::ars::Distribution;
    use crate::group::{AlgebraElement, Theta};
    use crate::symmetry::linear_field;
    use std::f64::consts::PI;

    fn ars_of(
        theta: Theta,
        xi: Vec2,
        a: Mat2,
        b1: (f64, f64, f64),
        b2: (f64, f64, f64),
    ) -> SimpleARS {
        let field = linear_field(theta, xi, a).unwrap();
        let dist = Distribution::orthonormal_frame([
            AlgebraElement::new(b1.0, Vec2::new(b1.1, b1.2)),
            AlgebraElement::new(b2.0, Vec2::new(b2.1, b2.2)),
        ])
        .unwrap();
        SimpleARS::new(field, dist).unwrap()
    }

    fn example_4_3(xi: Vec2) -> SimpleARS {
        ars_of(
            Theta::complex(0.0).unwrap(),
            xi,
            Mat2::zero(),
            (1.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
        )
    }

    fn example_4_4() -> SimpleARS {
        ars_of(
            Theta::jordan(),
            Vec2::new(1.0, 3.0),
            Mat2::new(2.0, 1.0, 0.0, 2.0),
            (1.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
        )
    }

    #[test]
    fn locus_values_of_the_worked_examples() {
        let lf = LocusFunction::new(&example_4_4());
        // F(t, (x, y)) = e^{-t}(2y + 3(e^t - 1)): zero along 2y = 3(1 - e^t).
        for (t, x) in [(0.0f64, 0.0), (1.0, 2.0), (-0.7, -1.5)] {
            let y = 1.5 * (1.0 - t.exp());
            assert!(lf.eval(GroupElement::new(t, Vec2::new(x, y))).abs() < 1e-12);
        }
        assert_eq!(lf.eval(GroupElement::identity()), 0.0);
        let expected = |t: f64, y: f64| (-t as f64).exp() * (2.0 * y + 3.0 * (t.exp() - 1.0));
        for (t, y) in [(0.4, 1.0), (-1.1, 0.3)] {
            let got = lf.eval(GroupElement::new(t, Vec2::new(0.9, y)));
            assert!((got - expected(t, y)).abs() < 1e-12 * (1.0 + got.abs()));
        }

        // Rotation example with ξ = (1, 0): F(t, ·) = cos t - 1.
        let lf = LocusFunction::new(&example_4_3(Vec2::new(1.0, 0.0)));
        assert!(lf.eval(GroupElement::new(2.0 * PI, Vec2::new(3.0, -4.0))).abs() < 1e-12);
        assert!(lf.eval(GroupElement::new(PI, Vec2::zero())).abs() > 1.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let structures = [
            example_4_4(),
            example_4_3(Vec2::new(1.0, 1.0)),
            ars_of(
                Theta::diagonal(-0.5).unwrap(),
                Vec2::new(0.3, 1.0),
                Mat2::diagonal(1.0, -2.0),
                (1.0, 0.2, 0.0),
                (0.0, 1.0, 0.3),
            ),
        ];
        let h = 1e-6;
        for ars in &structures {
            let lf = LocusFunction::new(ars);
            for g in [
                GroupElement::new(0.3, Vec2::new(0.5, -1.0)),
                GroupElement::new(-1.2, Vec2::new(2.0, 0.7)),
            ] {
                let (dt, dv) = lf.gradient(g);
                let num_dt = (lf.eval(GroupElement::new(g.t + h, g.v))
                    - lf.eval(GroupElement::new(g.t - h, g.v)))
                    / (2.0 * h);
                let num_dx = (lf.eval(GroupElement::new(g.t, g.v + Vec2::new(h, 0.0)))
                    - lf.eval(GroupElement::new(g.t, g.v - Vec2::new(h, 0.0))))
                    / (2.0 * h);
                let num_dy = (lf.eval(GroupElement::new(g.t, g.v + Vec2::new(0.0, h)))
                    - lf.eval(GroupElement::new(g.t, g.v - Vec2::new(0.0, h))))
                    / (2.0 * h);
                assert!((dt - num_dt).abs() < 1e-6 * (1.0 + dt.abs()));
                assert!((dv.x - num_dx).abs() < 1e-6 * (1.0 + dv.x.abs()));
                assert!((dv.y - num_dy).abs() < 1e-6 * (1.0 + dv.y.abs()));
            }
        }
    }

    #[test]
    fn example_4_4_gradient_at_origin() {
        let lf = LocusFunction::new(&example_4_4());
        let (_, dv) = lf.gradient(GroupElement::identity());
        assert!((dv.y - 2.0).abs() < 1e-14);
    }

    #[test]
    fn component_sides_of_example_4_4() {
        let lf = LocusFunction::new(&example_4_4());
        assert_eq!(lf.component_of(GroupElement::new(0.0, Vec2::new(0.0, 1.0))), Side::CPlus);
        assert_eq!(lf.component_of(GroupElement::identity()), Side::OnLocus);
        assert_eq!(lf.component_of(GroupElement::new(0.0, Vec2::new(0.0, -1.0))), Side::CMinus);
    }

    #[test]
    fn audit_flags_nothing_for_full_rank_example() {
        let lf = LocusFunction::new(&example_4_4());
        let desc = lf.describe(Window::new(-2.0, 2.0)).unwrap();
        let mut samples = Vec::new();
        for i in 0..40 {
            for j in 0..40 {
                let t = -2.0 + 4.0 * (i as f64) / 39.0;
                let s = -2.0 + 4.0 * (j as f64) / 39.0;
                samples.push(lf.parametrize(&desc, s, t).unwrap());
            }
        }
        let report = lf.regular_value_audit(&samples, 1e-9).unwrap();
        assert!(report.violations.is_empty());
        assert!(report.min_grad_norm > 0.1);
    }

    #[test]
    fn audit_rejects_off_locus_samples() {
        let lf = LocusFunction::new(&example_4_4());
        let bad = GroupElement::new(0.0, Vec2::new(0.0, 1.0));
        match lf.regular_value_audit(&[bad], 1e-9) {
            Err(Error::SampleNotOnLocus { index: 0, value }) => assert!(value > 1.0),
            other => panic!("expected rejection, got {other:?}"),
        }
        let empty = lf.regular_value_audit(&[], 1e-9).unwrap();
        assert_eq!(empty.min_grad_norm, f64::INFINITY);
        assert!(empty.violations.is_empty());
    }

    #[test]
    fn plane_stack_of_the_rotation_example() {
        // ξ = (1, 1): f(t) = sin t + cos t - 1, zeros in [0, 4π] at
        // {0, π/2, 2π, 5π/2, 4π}, all transversal except the endpoints.
        let lf = LocusFunction::new(&example_4_3(Vec2::new(1.0, 1.0)));
        let desc = lf.describe(Window::new(0.0, 4.0 * PI)).unwrap();
        match &desc.shape {
            LocusShape::PlaneStack { times, period } => {
                let expected = [0.0, PI / 2.0, 2.0 * PI, 2.5 * PI, 4.0 * PI];
                assert_eq!(times.len(), expected.len());
                for (pt, want) in times.iter().zip(expected) {
                    assert!((pt.t - want).abs() < 1e-9, "{} vs {want}", pt.t);
                }
                assert_eq!(*period, Some(2.0 * PI));
            }
            other => panic!("expected a plane stack, got {other:?}"),
        }
        assert_eq!(desc.component_count, ComponentCount::Infinite);
        assert!(!desc.connected);

        // ξ = (1, 0): f(t) = cos t - 1 with tangential zeros at 2πk.
        let lf = LocusFunction::new(&example_4_3(Vec2::new(1.0, 0.0)));
        let desc = lf.describe(Window::new(-0.5, 4.0 * PI + 0.5)).unwrap();
        match &desc.shape {
            LocusShape::PlaneStack { times, .. } => {
                assert_eq!(times.len(), 3);
                for (pt, want) in times.iter().zip([0.0, 2.0 * PI, 4.0 * PI]) {
                    assert!((pt.t - want).abs() < 1e-6);
                    assert!(!pt.transversal);
                }
            }
            other => panic!("expected a plane stack, got {other:?}"),
        }
    }

    #[test]
    fn full_rank_graph_description_and_parametrization() {
        let lf = LocusFunction::new(&example_4_4());
        let desc = lf.describe(Window::new(-3.0, 3.0)).unwrap();
        assert_eq!(
            desc.shape,
            LocusShape::GraphOverPlane { map: GraphParametrization::Hmap }
        );
        assert!(desc.connected);
        assert_eq!(desc.component_count, ComponentCount::Finite(1));

        // The parametrized points land on the explicit surface 2y = 3(1-e^t).
        for (s, t) in [(0.0, 0.0), (1.3, 0.8), (-2.0, -1.1)] {
            let g = lf.parametrize(&desc, s, t).unwrap();
            assert_eq!(g.t, t);
            assert!((2.0 * g.v.y - 3.0 * (1.0 - t.exp())).abs() < 1e-9);
        }
        assert_eq!(
            lf.parametrize(&desc, 0.0, 0.0).unwrap(),
            GroupElement::identity()
        );
    }

    #[test]
    fn conjugation_identities() {
        let lf = LocusFunction::new(&example_4_4());
        let u = lf.normal();
        for (t, v) in [
            (0.0, Vec2::new(1.0, 0.5)),
            (0.9, Vec2::new(-0.3, 1.2)),
            (-1.4, Vec2::new(0.8, -0.6)),
        ] {
            // F(H(t, v)) = ⟨v, u⟩.
            let h = lf.h_map(t, v).unwrap();
            assert!((lf.eval(h) - v.dot(&u)).abs() < 1e-9 * (1.0 + v.norm()));
            // Round trips.
            let back = lf.h_map_inv(h);
            assert!((back.v - v).norm() < 1e-10 * (1.0 + v.norm()));
            let fwd = lf.h_map(back.t, back.v).unwrap();
            assert!((fwd.v - h.v).norm() < 1e-10 * (1.0 + h.v.norm()));
        }
    }

    fn rank_one_structure() -> SimpleARS {
        // θ = diag(1, 0) with A = diag(1, 0): kernel e2, image e1.
        ars_of(
            Theta::diagonal(0.0).unwrap(),
            Vec2::new(0.5, 1.0),
            Mat2::diagonal(1.0, 0.0),
            (1.0, 0.0, 0.0),
            (0.0, 0.3, 1.0),
        )
    }

    #[test]
    fn rank_one_graph_identities() {
        let lf = LocusFunction::new(&rank_one_structure());
        let desc = lf.describe(Window::new(-2.0, 2.0)).unwrap();
        let LocusShape::GraphOverPlane { map } = &desc.shape else {
            panic!("expected a graph, got {:?}", desc.shape);
        };
        let GraphParametrization::Imap { w1, w2, beta } = map else {
            panic!("expected the rank-one map, got {map:?}");
        };
        // A e2 = 0: kernel is e2 up to sign; image line R·e1.
        assert!(w2.x.abs() < 1e-12 && (w2.y.abs() - 1.0).abs() < 1e-12);
        let a = lf.ars().field().a_mat();
        assert!((a * *w2).norm() < 1e-12);
        let aw1 = a * *w1;
        assert!(aw1.dot(&lf.normal()) > 0.0);
        // θ(Aw₁) = 1·Aw₁ on the image line.
        assert!((beta - 1.0).abs() < 1e-12);

        // F(I(t, v)) = e^{-βt}⟨v, w₁⟩⟨Aw₁, u⟩ and the round trip.
        let scale = aw1.dot(&lf.normal());
        for (t, v) in [(0.0, Vec2::new(0.7, -0.2)), (1.1, Vec2::new(-0.4, 0.9))] {
            let g = lf.i_map(map, t, v).unwrap();
            let expected = (-beta * t).exp() * v.dot(w1) * scale;
            assert!((lf.eval(g) - expected).abs() < 1e-9 * (1.0 + expected.abs()));
            let back = lf.i_map_inv(map, g).unwrap();
            assert!((back.v - v).norm() < 1e-10);
        }

        // Parametrized points are on the locus.
        for (s, t) in [(0.0, 0.0), (1.5, -0.8), (-0.6, 1.7)] {
            let g = lf.parametrize(&desc, s, t).unwrap();
            assert!(lf.eval(g).abs() <= 1e-9 * (1.0 + g.v.norm()));
        }
        assert!(desc.connected);
    }

    #[test]
    fn sample_grids_are_sorted_and_on_locus() {
        let lf = LocusFunction::new(&example_4_4());
        let pts = lf.sample(Window::new(-2.0, 2.0), 50).unwrap();
        assert_eq!(pts.len(), 2500);
        for p in &pts {
            assert!(lf.eval(*p).abs() <= 1e-8 * (1.0 + p.v.norm()));
        }
        for w in pts.windows(2) {
            assert!((w[0].t, w[0].v.x, w[0].v.y) <= (w[1].t, w[1].v.x, w[1].v.y));
        }

        // Plane stack: 5 planes, resolution² points each.
        let lf = LocusFunction::new(&example_4_3(Vec2::new(1.0, 1.0)));
        let pts = lf.sample(Window::new(0.0, 4.0 * PI), 10).unwrap();
        assert_eq!(pts.len(), 5 * 100);
        for p in &pts {
            assert!(lf.eval(*p).abs() <= 1e-8 * (1.0 + p.v.norm()));
        }

        assert!(lf.sample(Window::new(0.0, 1.0), 1).is_err());
        assert!(lf.sample(Window::new(1.0, 1.0), 5).unwrap().is_empty());
    }

    #[test]
    fn plane_stack_parametrize_is_rejected() {
        let lf = LocusFunction::new(&example_4_3(Vec2::new(1.0, 1.0)));
        let desc = lf.describe(Window::new(0.0, 4.0 * PI)).unwrap();
        assert!(matches!(
            lf.parametrize(&desc, 0.0, 0.0),
            Err(Error::WrongShape(_))
        ));
    }
}
