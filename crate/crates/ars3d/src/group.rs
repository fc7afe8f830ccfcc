//! The solvable group `G = R ⋉_ρ R²` with `ρ_t = e^{tθ}`.
//!
//! Elements are pairs `(t, v)` multiplying as
//! `(t₁, v₁)(t₂, v₂) = (t₁ + t₂, v₁ + ρ_{t₁} v₂)`. The structure matrix θ
//! is restricted to three one-parameter families that exhaust, up to
//! isomorphism and time rescaling, the nonnilpotent solvable cases.

use crate::linalg2::{expm, lambda_op, Mat2, Vec2};
use crate::{Error, Result};

/// The canonical structure matrix families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThetaKind {
    /// `[[1, 1], [0, 1]]`.
    Jordan,
    /// `[[1, 0], [0, λ]]` with `λ ∈ [-1, 1]`.
    Diagonal(f64),
    /// `[[λ, -1], [1, λ]]`.
    Complex(f64),
}

/// A validated structure matrix. The matrix is derived from the kind at
/// construction and never mutated, so the two fields cannot drift apart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theta {
    kind: ThetaKind,
    matrix: Mat2,
}

impl Theta {
    pub fn jordan() -> Theta {
        Theta { kind: ThetaKind::Jordan, matrix: Mat2::new(1.0, 1.0, 0.0, 1.0) }
    }

    pub fn diagonal(lambda: f64) -> Result<Theta> {
        if !lambda.is_finite() || !(-1.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidInput(format!(
                "diagonal structure parameter must lie in [-1, 1], got {lambda}"
            )));
        }
        Ok(Theta { kind: ThetaKind::Diagonal(lambda), matrix: Mat2::diagonal(1.0, lambda) })
    }

    pub fn complex(lambda: f64) -> Result<Theta> {
        if !lambda.is_finite() {
            return Err(Error::InvalidInput("complex structure parameter must be finite".into()));
        }
        Ok(Theta { kind: ThetaKind::Complex(lambda), matrix: Mat2::new(lambda, -1.0, 1.0, lambda) })
    }

    pub fn kind(&self) -> ThetaKind {
        self.kind
    }

    pub fn matrix(&self) -> Mat2 {
        self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.kind == ThetaKind::Diagonal(1.0)
    }

    /// Trace-free θ admits the extra orientation-reversing automorphisms.
    pub fn is_trace_free(&self) -> bool {
        self.matrix.trace() == 0.0
    }

    /// `ρ_t = e^{tθ}`.
    pub fn rho(&self, t: f64) -> Mat2 {
        expm(&self.matrix, t)
    }

    /// `Λ_t^θ = ∫_0^t ρ_s ds`.
    pub fn lambda_op(&self, t: f64) -> Mat2 {
        lambda_op(&self.matrix, t)
    }

    /// Group product `(t₁, v₁)(t₂, v₂) = (t₁ + t₂, v₁ + ρ_{t₁} v₂)`.
    pub fn mul(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        GroupElement::new(g.t + h.t, g.v + self.rho(g.t) * h.v)
    }

    /// Group inverse `(-t, -ρ_{-t} v)`.
    pub fn inv(&self, g: GroupElement) -> GroupElement {
        GroupElement::new(-g.t, -(self.rho(-g.t) * g.v))
    }

    /// Lie bracket `[(a₁, w₁), (a₂, w₂)] = (0, a₁ θ w₂ - a₂ θ w₁)`.
    pub fn bracket(&self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(0.0, self.matrix * y.w * x.a - self.matrix * x.w * y.a)
    }

    /// Group exponential: `(0, w)` on the abelian slice, otherwise
    /// `(a, Λ_a^θ w / a)`; the division is well conditioned because every
    /// entry of `Λ_a^θ` vanishes linearly in `a`.
    pub fn exp(&self, x: AlgebraElement) -> GroupElement {
        if x.a == 0.0 {
            GroupElement::new(0.0, x.w)
        } else {
            GroupElement::new(x.a, self.lambda_op(x.a) * x.w * (1.0 / x.a))
        }
    }

    /// Left-invariant field of `Y = (a, w)` at `g`: `(a, ρ_t w)`.
    pub fn left_invariant(&self, y: AlgebraElement, g: GroupElement) -> Tangent {
        Tangent::new(y.a, self.rho(g.t) * y.w)
    }

    /// Right-invariant field of `Y = (a, w)` at `g`: `(a, w + a θ v)`.
    pub fn right_invariant(&self, y: AlgebraElement, g: GroupElement) -> Tangent {
        Tangent::new(y.a, y.w + self.matrix * g.v * y.a)
    }

    /// Differential of left translation by `g`: `(a, w) ↦ (a, ρ_{t_g} w)`.
    /// Independent of the base point in the product chart.
    pub fn left_translation_differential(&self, g: GroupElement, z: Tangent) -> Tangent {
        Tangent::new(z.dt, self.rho(g.t) * z.dv)
    }

    /// Differential of right translation by `g` at the base point `at`:
    /// `(a, w) ↦ (a, w + a θ ρ_{t_at} v_g)`.
    pub fn right_translation_differential(
        &self,
        g: GroupElement,
        at: GroupElement,
        z: Tangent,
    ) -> Tangent {
        Tangent::new(z.dt, z.dv + self.matrix * (self.rho(at.t) * g.v) * z.dt)
    }
}

/// Lie algebra element `(a, w) ∈ R × R²`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AlgebraElement {
    pub a: f64,
    pub w: Vec2,
}

impl AlgebraElement {
    pub const fn new(a: f64, w: Vec2) -> Self {
        AlgebraElement { a, w }
    }

    pub const fn zero() -> Self {
        AlgebraElement { a: 0.0, w: Vec2::zero() }
    }

    pub fn norm(&self) -> f64 {
        (self.a * self.a + self.w.x * self.w.x + self.w.y * self.w.y).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.w.is_finite()
    }
}

impl std::ops::Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, r: AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(self.a + r.a, self.w + r.w)
    }
}

impl std::ops::Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, r: AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(self.a - r.a, self.w - r.w)
    }
}

impl std::ops::Mul<f64> for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, k: f64) -> AlgebraElement {
        AlgebraElement::new(self.a * k, self.w * k)
    }
}

/// Group element `(t, v)` in the product chart.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GroupElement {
    pub t: f64,
    pub v: Vec2,
}

impl GroupElement {
    pub const fn new(t: f64, v: Vec2) -> Self {
        GroupElement { t, v }
    }

    pub const fn identity() -> Self {
        GroupElement { t: 0.0, v: Vec2::zero() }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.v.is_finite()
    }
}

/// Tangent vector at a group element, expressed in the product chart.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tangent {
    pub dt: f64,
    pub dv: Vec2,
}

impl Tangent {
    pub const fn new(dt: f64, dv: Vec2) -> Self {
        Tangent { dt, dv }
    }

    pub fn norm(&self) -> f64 {
        (self.dt * self.dt + self.dv.x * self.dv.x + self.dv.y * self.dv.y).sqrt()
    }
}

impl std::ops::Add for Tangent {
    type Output = Tangent;
    fn add(self, r: Tangent) -> Tangent {
        Tangent::new(self.dt + r.dt, self.dv + r.dv)
    }
}

impl std::ops::Sub for Tangent {
    type Output = Tangent;
    fn sub(self, r: Tangent) -> Tangent {
        Tangent::new(self.dt - r.dt, self.dv - r.dv)
    }
}

impl std::ops::Mul<f64> for Tangent {
    type Output = Tangent;
    fn mul(self, k: f64) -> Tangent {
        Tangent::new(self.dt * k, self.dv * k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ge(t: f64, x: f64, y: f64) -> GroupElement {
        GroupElement::new(t, Vec2::new(x, y))
    }

    #[test]
    fn theta_constructors_validate() {
        assert!(Theta::diagonal(1.5).is_err());
        assert!(Theta::diagonal(-1.0).is_ok());
        assert!(Theta::complex(f64::NAN).is_err());
        assert_eq!(Theta::jordan().matrix(), Mat2::new(1.0, 1.0, 0.0, 1.0));
        assert!(Theta::diagonal(1.0).unwrap().is_identity());
        assert!(Theta::diagonal(-1.0).unwrap().is_trace_free());
        assert!(Theta::complex(0.0).unwrap().is_trace_free());
        assert!(!Theta::complex(0.5).unwrap().is_trace_free());
    }

    #[test]
    fn product_rotates_second_factor() {
        // Rotation case: (π, 0)·(0, e1) = (π, -e1).
        let th = Theta::complex(0.0).unwrap();
        let g = th.mul(ge(std::f64::consts::PI, 0.0, 0.0), ge(0.0, 1.0, 0.0));
        assert!((g.t - std::f64::consts::PI).abs() < 1e-15);
        assert!((g.v.x + 1.0).abs() < 1e-12 && g.v.y.abs() < 1e-12);
    }

    #[test]
    fn inverse_known_value() {
        // θ = id: (1, (e, 0))^{-1} = (-1, (-1, 0)).
        let th = Theta::diagonal(1.0).unwrap();
        let g = th.inv(ge(1.0, std::f64::consts::E, 0.0));
        assert_eq!(g.t, -1.0);
        assert!((g.v.x + 1.0).abs() < 1e-14 && g.v.y == 0.0);
    }

    #[test]
    fn bracket_known_values() {
        // Jordan: [(1,0), (0,e1)] = (0, θe1) = (0, e1).
        let th = Theta::jordan();
        let b = th.bracket(
            AlgebraElement::new(1.0, Vec2::zero()),
            AlgebraElement::new(0.0, Vec2::new(1.0, 0.0)),
        );
        assert_eq!(b.a, 0.0);
        assert_eq!(b.w, Vec2::new(1.0, 0.0));

        // Rotation: [(1,0), (0,e1)] = (0, e2); fiber elements commute.
        let th = Theta::complex(0.0).unwrap();
        let b = th.bracket(
            AlgebraElement::new(1.0, Vec2::zero()),
            AlgebraElement::new(0.0, Vec2::new(1.0, 0.0)),
        );
        assert_eq!(b.w, Vec2::new(0.0, 1.0));
        let c = th.bracket(
            AlgebraElement::new(0.0, Vec2::new(0.4, -2.0)),
            AlgebraElement::new(0.0, Vec2::new(1.0, 3.0)),
        );
        assert_eq!(c.a, 0.0);
        assert_eq!(c.w, Vec2::zero());
    }

    #[test]
    fn exp_known_values() {
        let th = Theta::diagonal(1.0).unwrap();
        // a = 0 slice is exact.
        let g = th.exp(AlgebraElement::new(0.0, Vec2::new(2.0, -1.0)));
        assert_eq!(g, ge(0.0, 2.0, -1.0));
        // θ = id: exp(1, e1) = (1, (e-1) e1).
        let g = th.exp(AlgebraElement::new(1.0, Vec2::new(1.0, 0.0)));
        assert!((g.v.x - std::f64::consts::E + 1.0).abs() < 1e-14);
        assert_eq!(g.v.y, 0.0);
    }

    #[test]
    fn invariant_fields_known_values() {
        let th = Theta::complex(0.0).unwrap();
        let y = AlgebraElement::new(0.0, Vec2::new(1.0, 0.0));
        let z = th.left_invariant(y, ge(std::f64::consts::FRAC_PI_2, 5.0, 5.0));
        assert!(z.dt == 0.0 && z.dv.x.abs() < 1e-15 && (z.dv.y - 1.0).abs() < 1e-15);

        let th = Theta::diagonal(1.0).unwrap();
        let y = AlgebraElement::new(1.0, Vec2::new(1.0, 0.0));
        let z = th.left_invariant(y, ge(1.0, -3.0, 4.0));
        assert!((z.dv.x - std::f64::consts::E).abs() < 1e-14 && z.dv.y == 0.0);

        let th = Theta::jordan();
        let z = th.right_invariant(AlgebraElement::new(1.0, Vec2::zero()), ge(0.0, 1.0, 0.0));
        assert_eq!(z.dv, Vec2::new(1.0, 0.0));
        assert_eq!(z.dt, 1.0);
    }

    #[test]
    fn invariant_fields_equal_translation_differentials() {
        let th = Theta::jordan();
        let y = AlgebraElement::new(0.7, Vec2::new(-0.3, 1.1));
        for g in [ge(0.4, 1.0, -2.0), ge(-1.3, 0.2, 0.9)] {
            let left = th.left_invariant(y, g);
            let via_dl = th.left_translation_differential(g, Tangent::new(y.a, y.w));
            assert!((left - via_dl).norm() == 0.0);

            let right = th.right_invariant(y, g);
            let via_dr =
                th.right_translation_differential(g, GroupElement::identity(), Tangent::new(y.a, y.w));
            assert!((right - via_dr).norm() == 0.0);
        }
    }

    fn arb_theta() -> impl Strategy<Value = Theta> {
        prop_oneof![
            Just(Theta::jordan()),
            (-1.0..1.0f64).prop_map(|l| Theta::diagonal(l).unwrap()),
            (-1.5..1.5f64).prop_map(|l| Theta::complex(l).unwrap()),
        ]
    }

    fn arb_elem() -> impl Strategy<Value = GroupElement> {
        let f = -2.0..2.0f64;
        (f.clone(), f.clone(), f).prop_map(|(t, x, y)| ge(t, x, y))
    }

    proptest! {
        #[test]
        fn associativity(th in arb_theta(), g in arb_elem(), h in arb_elem(), k in arb_elem()) {
            let lhs = th.mul(th.mul(g, h), k);
            let rhs = th.mul(g, th.mul(h, k));
            let scale = 1.0 + lhs.v.norm();
            prop_assert!((lhs.t - rhs.t).abs() <= 1e-12);
            prop_assert!((lhs.v - rhs.v).norm() / scale <= 1e-12);
        }

        #[test]
        fn inverse_cancels(th in arb_theta(), g in arb_elem()) {
            let e = th.mul(g, th.inv(g));
            prop_assert!(e.t.abs() <= 1e-12 && e.v.norm() <= 1e-10);
            let e = th.mul(th.inv(g), g);
            prop_assert!(e.t.abs() <= 1e-12 && e.v.norm() <= 1e-10);
        }

        #[test]
        fn exp_is_one_parameter(th in arb_theta(), a in -1.5..1.5f64,
                                wx in -2.0..2.0f64, wy in -2.0..2.0f64,
                                s in -1.5..1.5f64, r in -1.5..1.5f64) {
            let y = AlgebraElement::new(a, Vec2::new(wx, wy));
            let lhs = th.exp(y * (s + r));
            let rhs = th.mul(th.exp(y * s), th.exp(y * r));
            let scale = 1.0 + lhs.v.norm();
            prop_assert!((lhs.t - rhs.t).abs() <= 1e-12);
            prop_assert!((lhs.v - rhs.v).norm() / scale <= 1e-10);
        }
    }
}
