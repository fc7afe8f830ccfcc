//! Simple almost-Riemannian structures `Σ = {X, Δ^L}`.
//!
//! A structure pairs a linear field `X` with the left translates of a
//! 2-plane `Δ` in the algebra, carrying an inner product. Validity asks for
//! three things: `Δ` together with its brackets spans the algebra at every
//! point (rank condition), `Δ` is not the fiber plane `{0} × R²`, and the
//! field leaves the translated plane somewhere. The rank condition turns on
//! the line `l_Δ = Δ ∩ ({0} × R²)`, which also fixes the unit normal used
//! by the locus equation downstream.

use crate::group::{AlgebraElement, GroupElement, Tangent, Theta};
use crate::linalg2::{Mat2, Vec2};
use crate::symmetry::{Automorphism, LinearField};
use crate::{Error, Result, Tolerances};

/// Relative cutoff deciding when the frame `{X(g), Y₁ᴸ(g), Y₂ᴸ(g)}` is
/// treated as rank deficient inside [`SimpleARS::ar_norm`].
const FRAME_RANK_CUTOFF: f64 = 1e-10;

/// The distinguished line `l_Δ = Δ ∩ ({0} × R²)` with its unit direction
/// and the counterclockwise unit normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaLine {
    pub direction: Vec2,
    pub normal: Vec2,
}

/// A 2-plane `Δ ⊂ R × R²` spanned by two algebra elements, with the inner
/// product of the spanning pair recorded as a gram matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distribution {
    basis: [AlgebraElement; 2],
    gram: Mat2,
}

fn as3(e: &AlgebraElement) -> [f64; 3] {
    [e.a, e.w.x, e.w.y]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

impl Distribution {
    /// Validates linear independence of the basis and that the gram matrix
    /// is symmetric positive definite.
    pub fn new(basis: [AlgebraElement; 2], gram: Mat2) -> Result<Distribution> {
        if !basis[0].is_finite() || !basis[1].is_finite() || !gram.is_finite() {
            return Err(Error::InvalidInput("distribution data has a non-finite entry".into()));
        }
        let tol = Tolerances::default().constraint;
        let scale = basis[0].norm() * basis[1].norm();
        if norm3(&cross3(&as3(&basis[0]), &as3(&basis[1]))) <= tol * (1.0 + scale) {
            return Err(Error::DegenerateDistribution("basis elements are linearly dependent".into()));
        }
        if (gram.a12 - gram.a21).abs() > tol * (1.0 + gram.max_abs()) {
            return Err(Error::InvalidInput("gram matrix is not symmetric".into()));
        }
        if gram.a11 <= 0.0 || gram.det() <= 0.0 {
            return Err(Error::InvalidInput("gram matrix is not positive definite".into()));
        }
        Ok(Distribution { basis, gram })
    }

    /// Spanning pair with the identity inner product.
    pub fn orthonormal_frame(basis: [AlgebraElement; 2]) -> Result<Distribution> {
        Distribution::new(basis, Mat2::identity())
    }

    pub fn basis(&self) -> [AlgebraElement; 2] {
        self.basis
    }

    pub fn gram(&self) -> Mat2 {
        self.gram
    }

    /// The line `l_Δ`, spanned by `σ₁u₂ - σ₂u₁`. Fails when `Δ` is the
    /// fiber plane `{0} × R²` (both σ vanish), which the rank condition
    /// excludes anyway.
    pub fn line(&self) -> Result<DeltaLine> {
        let [b1, b2] = self.basis;
        let m = b2.w * b1.a - b1.w * b2.a;
        let scale = 1.0 + b1.norm() * b2.norm();
        if m.norm() <= Tolerances::default().constraint * scale {
            return Err(Error::DegenerateDistribution(
                "distribution equals the fiber plane {0} x R^2".into(),
            ));
        }
        let direction = m.normalized().expect("nonzero by the guard above");
        Ok(DeltaLine { direction, normal: direction.perp() })
    }

    /// Unit normal of the plane `Δ` inside `R³`, used for membership tests.
    fn plane_normal(&self) -> [f64; 3] {
        let n = cross3(&as3(&self.basis[0]), &as3(&self.basis[1]));
        let len = norm3(&n);
        [n[0] / len, n[1] / len, n[2] / len]
    }

    /// Is the algebra element inside the plane (within `tol`)?
    pub fn contains(&self, z: &AlgebraElement, tol: f64) -> bool {
        let n = self.plane_normal();
        dot3(&as3(z), &n).abs() <= tol * (1.0 + z.norm())
    }

    /// Gram-Schmidt in the stored basis order, under the stored inner
    /// product. Returns `(Y₁, Y₂)` with coefficients taken against the
    /// gram matrix, so the pair is orthonormal for the metric of `Δ`.
    pub fn orthonormal_basis(&self) -> (AlgebraElement, AlgebraElement) {
        let g = self.gram;
        let [b1, b2] = self.basis;
        let r1 = g.a11.sqrt();
        let y1 = b1 * (1.0 / r1);
        // b2 - <b2, Y1> Y1 has squared length g22 - g12^2/g11 > 0 (SPD).
        let proj = g.a21 / g.a11;
        let r2 = (g.a22 - g.a21 * g.a21 / g.a11).sqrt();
        let y2 = (b2 - b1 * proj) * (1.0 / r2);
        (y1, y2)
    }
}

/// Free-function form of [`Distribution::line`].
pub fn delta_line(dist: &Distribution) -> Result<DeltaLine> {
    dist.line()
}

/// Is `Δ` a subalgebra? Happens exactly when `l_Δ` is invariant under θ.
pub fn is_subalgebra(theta: &Theta, dist: &Distribution, tol: f64) -> Result<bool> {
    let line = dist.line()?;
    Ok((theta.matrix() * line.direction).cross(&line.direction).abs() <= tol)
}

/// Which clause of the rank condition settled the verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LarcReason {
    /// `Δ` generates because it is not a subalgebra.
    NotSubalgebra,
    /// `(1,0) ∈ Δ` and `A` moves the line `l_Δ`.
    LineMoved,
    /// `(1,0) ∈ Δ` and the drift `ξ` leaves the line `l_Δ`.
    XiOutsideLine,
    /// General criterion: the derivation maps some basis element out of `Δ`.
    DerivationMovesDistribution,
    /// `Δ` is a subalgebra preserved by the derivation; rank condition fails.
    DerivationPreservesDistribution,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LarcVerdict {
    pub satisfied: bool,
    pub reason: LarcReason,
}

/// Rank condition for the pair `(X, Δ)`.
///
/// `Δ` not a subalgebra settles it immediately. Otherwise the derivation
/// `D(a, w) = (0, aξ + Aw)` must move `Δ`; when `(1,0) ∈ Δ` this splits
/// into the two named clauses (`A` moves `l_Δ`, or `ξ ∉ l_Δ`).
pub fn larc(field: &LinearField, dist: &Distribution, tol: f64) -> Result<LarcVerdict> {
    let theta = field.theta();
    let line = dist.line()?;
    if !is_subalgebra(&theta, dist, tol)? {
        return Ok(LarcVerdict { satisfied: true, reason: LarcReason::NotSubalgebra });
    }
    let off_line = |w: &Vec2| w.cross(&line.direction).abs() > tol * (1.0 + w.norm());
    if dist.contains(&AlgebraElement::new(1.0, Vec2::zero()), tol) {
        let moved = field.a_mat() * line.direction;
        if off_line(&moved) {
            return Ok(LarcVerdict { satisfied: true, reason: LarcReason::LineMoved });
        }
        if off_line(&field.xi()) {
            return Ok(LarcVerdict { satisfied: true, reason: LarcReason::XiOutsideLine });
        }
    } else {
        for b in dist.basis() {
            let image = field.xi() * b.a + field.a_mat() * b.w;
            if off_line(&image) {
                return Ok(LarcVerdict {
                    satisfied: true,
                    reason: LarcReason::DerivationMovesDistribution,
                });
            }
        }
    }
    Ok(LarcVerdict { satisfied: false, reason: LarcReason::DerivationPreservesDistribution })
}

/// A validated simple almost-Riemannian structure.
#[derive(Clone, Copy, Debug)]
pub struct SimpleARS {
    field: LinearField,
    dist: Distribution,
    line: DeltaLine,
    larc: LarcVerdict,
    witness: GroupElement,
    tolerances: Tolerances,
}

pub(crate) fn locus_scalar(field: &LinearField, normal: Vec2, g: GroupElement) -> f64 {
    let theta = field.theta();
    let q = field.a_mat() * g.v + theta.lambda_op(g.t) * field.xi();
    (theta.rho(-g.t) * q).dot(&normal)
}

impl SimpleARS {
    pub fn new(field: LinearField, dist: Distribution) -> Result<SimpleARS> {
        SimpleARS::with_tolerances(field, dist, Tolerances::default())
    }

    pub fn with_tolerances(
        field: LinearField,
        dist: Distribution,
        tolerances: Tolerances,
    ) -> Result<SimpleARS> {
        let line = dist.line()?;
        let verdict = larc(&field, &dist, tolerances.constraint)?;
        if !verdict.satisfied {
            return Err(Error::LarcFailed(
                "the distribution is a subalgebra preserved by the derivation".into(),
            ));
        }
        // The field must leave the translated plane somewhere; exhibit one
        // witness on a coarse grid. X(g) has no dt component, so membership
        // in Δ^L(g) is exactly the vanishing of the locus scalar.
        let mut witness = None;
        'search: for i in 0..11 {
            for j in 0..11 {
                for k in 0..11 {
                    let g = GroupElement::new(
                        -5.0 + i as f64,
                        Vec2::new(-5.0 + j as f64, -5.0 + k as f64),
                    );
                    if locus_scalar(&field, line.normal, g).abs() > 1e-6 * (1.0 + g.v.norm()) {
                        witness = Some(g);
                        break 'search;
                    }
                }
            }
        }
        let witness = witness.ok_or(Error::WitnessNotFound)?;
        Ok(SimpleARS { field, dist, line, larc: verdict, witness, tolerances })
    }

    pub fn theta(&self) -> Theta {
        self.field.theta()
    }

    pub fn field(&self) -> LinearField {
        self.field
    }

    pub fn distribution(&self) -> Distribution {
        self.dist
    }

    pub fn line(&self) -> DeltaLine {
        self.line
    }

    pub fn larc_verdict(&self) -> LarcVerdict {
        self.larc
    }

    /// A point where the field leaves the translated plane, found during
    /// construction.
    pub fn witness(&self) -> GroupElement {
        self.witness
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances
    }

    /// The norm of a tangent vector `Z` at `g`: the smallest Euclidean norm
    /// of coefficients `(α₀, α₁, α₂)` with
    /// `α₀ X(g) + α₁ Y₁ᴸ(g) + α₂ Y₂ᴸ(g) = Z`, where `(Y₁, Y₂)` is the
    /// orthonormalized spanning pair. Returns `+∞` when `Z` is outside the
    /// span (possible only on the singular locus).
    pub fn ar_norm(&self, g: GroupElement, z: Tangent) -> f64 {
        let theta = self.theta();
        let x = self.field.eval(g);
        let (y1, y2) = self.dist.orthonormal_basis();
        let c0 = [x.dt, x.dv.x, x.dv.y];
        let l1 = theta.left_invariant(y1, g);
        let l2 = theta.left_invariant(y2, g);
        let c1 = [l1.dt, l1.dv.x, l1.dv.y];
        let c2 = [l2.dt, l2.dv.x, l2.dv.y];
        let zz = [z.dt, z.dv.x, z.dv.y];

        let det = dot3(&c0, &cross3(&c1, &c2));
        let scale = norm3(&c0) * norm3(&c1) * norm3(&c2);
        if det.abs() > FRAME_RANK_CUTOFF * (1.0 + scale) {
            // Full rank: Cramer.
            let a0 = dot3(&zz, &cross3(&c1, &c2)) / det;
            let a1 = dot3(&c0, &cross3(&zz, &c2)) / det;
            let a2 = dot3(&c0, &cross3(&c1, &zz)) / det;
            return (a0 * a0 + a1 * a1 + a2 * a2).sqrt();
        }

        // Rank two: X(g) lies in the translated plane (g is on the locus).
        // The column space is spanned by the two left translates.
        let n = cross3(&c1, &c2);
        let nn = norm3(&n);
        if dot3(&zz, &n).abs() > self.tolerances.locus * nn * (1.0 + norm3(&zz)) {
            return f64::INFINITY;
        }
        // Coordinates in the (c1, c2) frame via 2x2 normal equations.
        let solve_in_plane = |v: &[f64; 3]| -> (f64, f64) {
            let g11 = dot3(&c1, &c1);
            let g12 = dot3(&c1, &c2);
            let g22 = dot3(&c2, &c2);
            let r1 = dot3(v, &c1);
            let r2 = dot3(v, &c2);
            let det = g11 * g22 - g12 * g12;
            ((r1 * g22 - r2 * g12) / det, (g11 * r2 - g12 * r1) / det)
        };
        let (b1, b2) = solve_in_plane(&zz);
        let (k1, k2) = solve_in_plane(&c0);
        // General solution (0, b1, b2) + τ (1, -k1, -k2); minimize over τ.
        let k = [1.0, -k1, -k2];
        let base = [0.0, b1, b2];
        let tau = -dot3(&base, &k) / dot3(&k, &k);
        let alpha = [tau, b1 + tau * k[1], b2 + tau * k[2]];
        norm3(&alpha)
    }

    /// Transport of the whole structure along an automorphism:
    /// `X_ψ = (P⁻¹(εξ + Aη), P⁻¹AP)` and `Δ_ψ = (dψ_e)⁻¹Δ` carrying the
    /// original gram matrix. The conjugation `dψ(X_ψ(g)) = X(ψ(g))` makes
    /// ψ an isometry from the new structure onto the old one.
    pub fn pushforward(&self, psi: &Automorphism) -> Result<SimpleARS> {
        if psi.theta().kind() != self.theta().kind() {
            return Err(Error::InvalidInput(
                "automorphism and structure have different theta".into(),
            ));
        }
        let pinv = psi.p.inverse().ok_or(Error::SingularMatrix(psi.p.det()))?;
        let xi = pinv * (self.field.xi() * psi.epsilon + self.field.a_mat() * psi.eta);
        let a = pinv * self.field.a_mat() * psi.p;
        let field = LinearField::new(self.theta(), xi, a, self.tolerances.constraint)?;
        let transport = |b: &AlgebraElement| -> Result<AlgebraElement> {
            let (ba, bw) = psi.differential_at_identity_inv(b.a, b.w)?;
            Ok(AlgebraElement::new(ba, bw))
        };
        let basis = [transport(&self.dist.basis[0])?, transport(&self.dist.basis[1])?];
        let dist = Distribution::new(basis, self.dist.gram)?;
        SimpleARS::with_tolerances(field, dist, self.tolerances)
    }

    /// Move `(1, 0)` into `Δ` by the fiber-shearing automorphism built from
    /// a basis element with nonzero σ. The chosen element is rescaled to
    /// `σ = 1` first, so the transported first basis vector is `(1, 0)`
    /// exactly. Returns the normalized structure and the automorphism used.
    pub fn normalize(&self) -> Result<(SimpleARS, Automorphism)> {
        let tol = self.tolerances.constraint;
        if self.dist.contains(&AlgebraElement::new(1.0, Vec2::zero()), tol) {
            return Ok((*self, Automorphism::identity(self.theta())));
        }
        let [b1, b2] = self.dist.basis;
        let (lead, other, gram) = if b1.a.abs() >= b2.a.abs() {
            (b1, b2, self.dist.gram)
        } else {
            (b2, b1, Mat2::new(self.dist.gram.a22, self.dist.gram.a21, self.dist.gram.a12, self.dist.gram.a11))
        };
        if lead.a.abs() <= tol {
            // Unreachable for a validated structure; kept as a guard.
            return self.zero_xi_normalization();
        }
        let s = lead.a;
        let eta = lead.w * (1.0 / s);
        let psi = Automorphism::new(self.theta(), 1.0, Mat2::identity(), eta, tol)?;
        // Transport of the rescaled basis: lead/s ↦ (1, η - η) = (1, 0).
        let basis = [
            AlgebraElement::new(1.0, Vec2::zero()),
            AlgebraElement::new(other.a, other.w - eta * other.a),
        ];
        let gram = Mat2::new(
            gram.a11 / (s * s),
            gram.a12 / s,
            gram.a21 / s,
            gram.a22,
        );
        let dist = Distribution::new(basis, gram)?;
        let xi = self.field.xi() + self.field.a_mat() * eta;
        let field = LinearField::new(self.theta(), xi, self.field.a_mat(), tol)?;
        let out = SimpleARS::with_tolerances(field, dist, self.tolerances)?;
        Ok((out, psi))
    }

    /// Remove the drift: for invertible `A`, the automorphism with
    /// `η = -A⁻¹ξ` transports the structure to one with `ξ = 0` exactly.
    pub fn zero_xi_normalization(&self) -> Result<(SimpleARS, Automorphism)> {
        let tol = self.tolerances.constraint;
        let ainv = self
            .field
            .a_mat()
            .inverse()
            .ok_or_else(|| Error::CannotNormalize("the field matrix A is singular".into()))?;
        let eta = -(ainv * self.field.xi());
        let psi = Automorphism::new(self.theta(), 1.0, Mat2::identity(), eta, tol)?;
        // ξ + Aη = ξ - AA⁻¹ξ vanishes identically; construct it as such.
        let field = LinearField::new(self.theta(), Vec2::zero(), self.field.a_mat(), tol)?;
        let basis = [
            AlgebraElement::new(self.dist.basis[0].a, self.dist.basis[0].w - eta * self.dist.basis[0].a),
            AlgebraElement::new(self.dist.basis[1].a, self.dist.basis[1].w - eta * self.dist.basis[1].a),
        ];
        let dist = Distribution::new(basis, self.dist.gram)?;
        let out = SimpleARS::with_tolerances(field, dist, self.tolerances)?;
        Ok((out, psi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::linear_field;

    fn elem(a: f64, x: f64, y: f64) -> AlgebraElement {
        AlgebraElement::new(a, Vec2::new(x, y))
    }

    fn dist(b1: AlgebraElement, b2: AlgebraElement) -> Distribution {
        Distribution::orthonormal_frame([b1, b2]).unwrap()
    }

    #[test]
    fn delta_line_examples() {
        // {(1, e2), (0, e1)}: direction e1, normal e2.
        let d = dist(elem(1.0, 0.0, 1.0), elem(0.0, 1.0, 0.0));
        let line = d.line().unwrap();
        assert_eq!(line.direction, Vec2::new(1.0, 0.0));
        assert_eq!(line.normal, Vec2::new(0.0, 1.0));
        // Sign is basis-order dependent; the spanned line and the normal
        // line are the invariants.
        assert_eq!(line.direction.cross(&Vec2::new(1.0, 0.0)), 0.0);

        // Fiber plane {(0,e1),(0,e2)} has no transversal part.
        let d = dist(elem(0.0, 1.0, 0.0), elem(0.0, 0.0, 1.0));
        assert!(matches!(d.line(), Err(Error::DegenerateDistribution(_))));

        // Dependent basis is rejected at construction.
        assert!(Distribution::orthonormal_frame([elem(1.0, 2.0, 0.0), elem(0.5, 1.0, 0.0)]).is_err());
    }

    #[test]
    fn gram_validation() {
        let b = [elem(1.0, 0.0, 0.0), elem(0.0, 1.0, 0.0)];
        assert!(Distribution::new(b, Mat2::new(1.0, 0.3, 0.3, 2.0)).is_ok());
        assert!(Distribution::new(b, Mat2::new(1.0, 0.5, -0.5, 2.0)).is_err());
        assert!(Distribution::new(b, Mat2::new(1.0, 2.0, 2.0, 1.0)).is_err());
        assert!(Distribution::new(b, Mat2::new(-1.0, 0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn subalgebra_detection() {
        // Rotation structure: no real eigenlines, never a subalgebra.
        let th = Theta::complex(0.0).unwrap();
        let d = dist(elem(1.0, 0.0, 0.0), elem(0.0, 1.0, 0.0));
        assert!(!is_subalgebra(&th, &d, 1e-9).unwrap());

        // Jordan: l_Δ = R e1 is the eigenline.
        let th = Theta::jordan();
        assert!(is_subalgebra(&th, &d, 1e-9).unwrap());
        let d2 = dist(elem(1.0, 0.0, 0.0), elem(0.0, 0.0, 1.0));
        assert!(!is_subalgebra(&th, &d2, 1e-9).unwrap());
    }

    #[test]
    fn larc_reasons() {
        // Not a subalgebra wins immediately (rotation case).
        let th = Theta::complex(0.0).unwrap();
        let x = linear_field(th, Vec2::new(1.0, 1.0), Mat2::zero()).unwrap();
        let d = dist(elem(1.0, 0.0, 0.0), elem(0.0, 1.0, 0.0));
        let v = larc(&x, &d, 1e-9).unwrap();
        assert!(v.satisfied && v.reason == LarcReason::NotSubalgebra);

        // Jordan subalgebra with drift off the line.
        let th = Theta::jordan();
        let x = linear_field(th, Vec2::new(1.0, 3.0), Mat2::new(2.0, 1.0, 0.0, 2.0)).unwrap();
        let d = dist(elem(1.0, 0.0, 0.0), elem(0.0, 1.0, 0.0));
        let v = larc(&x, &d, 1e-9).unwrap();
        assert!(v.satisfied && v.reason == LarcReason::XiOutsideLine);

        // θ = diag(1, 1/2), Δ = span{(1,0), (0,e2)}, X = (e2, id): subalgebra,
        // line preserved, drift inside the line. Rank condition fails.
        let th = Theta::diagonal(0.5).unwrap();
        let x = linear_field(th, Vec2::new(0.0, 1.0), Mat2::identity()).unwrap();
        let d = dist(elem(1.0, 0.0, 0.0), elem(0.0, 0.0, 1.0));
        let v = larc(&x, &d, 1e-9).unwrap();
        assert!(!v.satisfied);
        assert!(SimpleARS::new(x, d).is_err());
    }

    fn example_4_4() -> SimpleARS {
        let th = Theta::jordan();
        let x = linear_field(th, Vec2::new(1.0, 3.0), Mat2::new(2.0, 1.0, 0.0, 2.0)).unwrap();
        let d = dist(elem(1.0, 0.0, 0.0), elem(0.0, 1.0, 0.0));
        SimpleARS::new(x, d).unwrap()
    }

    #[test]
    fn witness_is_off_the_translated_plane() {
        let ars = example_4_4();
        let w = ars.witness();
        assert!(locus_scalar(&ars.field(), ars.line().normal, w).abs() > 1e-6);
    }

    #[test]
    fn ar_norm_frame_members() {
        let ars = example_4_4();
        // Away from the locus the representation is unique.
        let g = GroupElement::new(0.3, Vec2::new(0.2, 5.0));
        let x = ars.field().eval(g);
        assert!((ars.ar_norm(g, x) - 1.0).abs() < 1e-12);

        let (y1, _) = ars.distribution().orthonormal_basis();
        let l1 = ars.theta().left_invariant(y1, g);
        assert!((ars.ar_norm(g, l1) - 1.0).abs() < 1e-12);

        // At the identity the field vanishes and the frame is rank two;
        // a vector off the plane has infinite norm.
        let e = GroupElement::identity();
        let z = Tangent::new(0.0, Vec2::new(0.0, 1.0));
        assert_eq!(ars.ar_norm(e, z), f64::INFINITY);
        // A frame member still has norm one there.
        let l1e = ars.theta().left_invariant(y1, e);
        assert!((ars.ar_norm(e, l1e) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_puts_unit_t_in_distribution_exactly() {
        let th = Theta::jordan();
        let x = linear_field(th, Vec2::new(1.0, 3.0), Mat2::new(2.0, 1.0, 0.0, 2.0)).unwrap();
        let d = dist(elem(2.0, 0.7, -0.4), elem(0.0, 1.0, 0.0));
        let ars = SimpleARS::new(x, d).unwrap();
        let (normalized, psi) = ars.normalize().unwrap();
        let basis = normalized.distribution().basis();
        assert_eq!(basis[0], AlgebraElement::new(1.0, Vec2::zero()));
        // The automorphism shears by the rescaled fiber part.
        assert_eq!(psi.eta, Vec2::new(0.35, -0.2));
        // Idempotent once (1,0) is inside.
        let (again, ident) = normalized.normalize().unwrap();
        assert_eq!(again.distribution().basis(), basis);
        assert_eq!(ident.eta, Vec2::zero());
    }

    #[test]
    fn zero_xi_normalization_is_exact_and_matches_generic_pushforward() {
        let ars = example_4_4();
        let (normalized, psi) = ars.zero_xi_normalization().unwrap();
        assert_eq!(normalized.field().xi(), Vec2::zero());
        assert_eq!(normalized.field().a_mat(), ars.field().a_mat());

        let generic = ars.pushforward(&psi).unwrap();
        assert!((generic.field().xi() - normalized.field().xi()).norm() < 1e-12);
        assert_eq!(generic.distribution().basis(), normalized.distribution().basis());
    }

    #[test]
    fn pushforward_conjugates_the_field() {
        let th = Theta::complex(0.3).unwrap();
        let x = linear_field(th, Vec2::new(0.5, -1.0), Mat2::new(1.0, -0.8, 0.8, 1.0)).unwrap();
        let d = dist(elem(1.0, 0.2, 0.0), elem(0.0, 0.0, 1.0));
        let ars = SimpleARS::new(x, d).unwrap();
        let psi = Automorphism::new(th, 1.0, Mat2::new(0.6, -1.1, 1.1, 0.6), Vec2::new(0.3, 0.9), 1e-9)
            .unwrap();
        let pushed = ars.pushforward(&psi).unwrap();

        for g in [GroupElement::new(0.7, Vec2::new(0.1, -0.4)), GroupElement::new(-1.2, Vec2::new(2.0, 0.5))] {
            let lhs = psi.differential(g, pushed.field().eval(g));
            let rhs = ars.field().eval(psi.apply(g));
            assert!((lhs - rhs).norm() < 1e-10, "at {g:?}");
        }
    }
}
