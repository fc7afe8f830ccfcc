//! Crossing analysis for exponential curves and linear flows.
//!
//! Every curve `s ↦ F(g · exp(sY))` or `s ↦ F(φ_s(g))` collapses to a small
//! family of scalar forms whose zero sets admit exact counting: exponential
//! sums with at most three distinct exponents, `(as + b)e^{λs} + c`,
//! damped or driven cosines, and `coeff·e^{rate·s} + slope·s + c`. The
//! classifier works on those closed forms; a sign-scan with bisection then
//! locates the zeros inside the requested window.

use std::f64::consts::PI;

use crate::ars::{locus_scalar, SimpleARS};
use crate::group::{AlgebraElement, GroupElement};
use crate::linalg2::{eigen_structure, expm, EigenKind, Mat2, Vec2, DISCRIMINANT_TOL};
use crate::Window;

/// Hard cap on scan grid size.
const MAX_GRID: usize = 1 << 20;

/// Base sample density per unit of window length.
const BASE_DENSITY: f64 = 512.0;

/// Zeros closer than this (relative) are merged into one.
const MERGE_TOL: f64 = 1e-8;

/// Closed-form scalar curves arising from locus restrictions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScalarCurve {
    /// `slope·s + intercept`
    Affine { slope: f64, intercept: f64 },
    /// `a·e^{λ₁s} + b·e^{λ₂s} + c` with `λ₁ ≠ λ₂` both nonzero
    ExpPoly { a: f64, b: f64, c: f64, lambda1: f64, lambda2: f64 },
    /// `(a·s + b)·e^{λs} + c`
    ExpLinear { a: f64, b: f64, c: f64, lambda: f64 },
    /// `amplitude·e^{λs}·cos(μs + phase) + c` with `μ > 0`
    ExpCos { amplitude: f64, lambda: f64, mu: f64, phase: f64, c: f64 },
    /// `coeff·e^{rate·s} + slope·s + intercept`
    ExpAffine { coeff: f64, rate: f64, slope: f64, intercept: f64 },
    /// `⟨u, e^{sA}v⟩ - τ`
    MatExpForm { a_mat: Mat2, u: Vec2, v: Vec2, tau: f64 },
}

impl ScalarCurve {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            ScalarCurve::Affine { slope, intercept } => slope * s + intercept,
            ScalarCurve::ExpPoly { a, b, c, lambda1, lambda2 } => {
                a * (lambda1 * s).exp() + b * (lambda2 * s).exp() + c
            }
            ScalarCurve::ExpLinear { a, b, c, lambda } => (a * s + b) * (lambda * s).exp() + c,
            ScalarCurve::ExpCos { amplitude, lambda, mu, phase, c } => {
                amplitude * (lambda * s).exp() * (mu * s + phase).cos() + c
            }
            ScalarCurve::ExpAffine { coeff, rate, slope, intercept } => {
                coeff * (rate * s).exp() + slope * s + intercept
            }
            ScalarCurve::MatExpForm { a_mat, u, v, tau } => u.dot(&(expm(&a_mat, s) * v)) - tau,
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match *self {
            ScalarCurve::Affine { slope, .. } => slope,
            ScalarCurve::ExpPoly { a, b, lambda1, lambda2, .. } => {
                a * lambda1 * (lambda1 * s).exp() + b * lambda2 * (lambda2 * s).exp()
            }
            ScalarCurve::ExpLinear { a, b, lambda, .. } => {
                (lambda * (a * s + b) + a) * (lambda * s).exp()
            }
            ScalarCurve::ExpCos { amplitude, lambda, mu, phase, .. } => {
                let arg = mu * s + phase;
                amplitude * (lambda * s).exp() * (lambda * arg.cos() - mu * arg.sin())
            }
            ScalarCurve::ExpAffine { coeff, rate, slope, .. } => {
                coeff * rate * (rate * s).exp() + slope
            }
            ScalarCurve::MatExpForm { a_mat, u, v, .. } => {
                u.dot(&(a_mat * (expm(&a_mat, s) * v)))
            }
        }
    }

    /// Largest magnitude among the defining parameters (exponent rates
    /// excluded); the natural scale for "coefficient is zero" decisions.
    fn coefficient_scale(&self) -> f64 {
        match *self {
            ScalarCurve::Affine { slope, intercept } => slope.abs().max(intercept.abs()),
            ScalarCurve::ExpPoly { a, b, c, .. } => a.abs().max(b.abs()).max(c.abs()),
            ScalarCurve::ExpLinear { a, b, c, .. } => a.abs().max(b.abs()).max(c.abs()),
            ScalarCurve::ExpCos { amplitude, c, .. } => amplitude.abs().max(c.abs()),
            ScalarCurve::ExpAffine { coeff, slope, intercept, .. } => {
                coeff.abs().max(slope.abs()).max(intercept.abs())
            }
            ScalarCurve::MatExpForm { u, v, tau, .. } => {
                (u.norm() * v.norm()).max(tau.abs())
            }
        }
    }

    /// Rewrite into the simplest equivalent form: matrix-exponential curves
    /// are expanded through the eigenstructure of `A`, degenerate
    /// coefficients are folded away. The result evaluates identically
    /// (up to roundoff) and is one of the non-matrix variants.
    pub fn reduce(&self, tol: f64) -> ScalarCurve {
        let thr = tol * (1.0 + self.coefficient_scale());
        let dead = |x: f64| x.abs() <= thr;
        match *self {
            ScalarCurve::MatExpForm { a_mat, u, v, tau } => {
                let reduced = match eigen_structure(&a_mat, DISCRIMINANT_TOL) {
                    EigenKind::RealDistinct { lambda1, lambda2 } => {
                        let gap = lambda1 - lambda2;
                        let p1 = (a_mat - Mat2::identity() * lambda2) * (1.0 / gap);
                        let p2 = (Mat2::identity() * lambda1 - a_mat) * (1.0 / gap);
                        ScalarCurve::ExpPoly {
                            a: u.dot(&(p1 * v)),
                            b: u.dot(&(p2 * v)),
                            c: -tau,
                            lambda1,
                            lambda2,
                        }
                    }
                    EigenKind::RealRepeated { lambda, .. } => {
                        let n = a_mat - Mat2::identity() * lambda;
                        ScalarCurve::ExpLinear {
                            a: u.dot(&(n * v)),
                            b: u.dot(&v),
                            c: -tau,
                            lambda,
                        }
                    }
                    EigenKind::ComplexPair { re, im } => {
                        let b_mat = (a_mat - Mat2::identity() * re) * (1.0 / im);
                        let p = u.dot(&v);
                        let q = u.dot(&(b_mat * v));
                        ScalarCurve::ExpCos {
                            amplitude: p.hypot(q),
                            lambda: re,
                            mu: im,
                            phase: (-q).atan2(p),
                            c: -tau,
                        }
                    }
                };
                reduced.reduce(tol)
            }
            ScalarCurve::ExpPoly { a, b, c, lambda1, lambda2 } => {
                // Fold terms whose exponent vanishes into the constant.
                let mut consts = c;
                let mut terms: Vec<(f64, f64)> = Vec::new();
                for (coef, rate) in [(a, lambda1), (b, lambda2)] {
                    if dead(coef) {
                        continue;
                    }
                    if rate.abs() <= tol {
                        consts += coef;
                    } else {
                        terms.push((coef, rate));
                    }
                }
                if terms.len() == 2 && (terms[0].1 - terms[1].1).abs() <= tol {
                    terms = vec![(terms[0].0 + terms[1].0, terms[0].1)];
                }
                match terms.len() {
                    0 => ScalarCurve::Affine { slope: 0.0, intercept: consts },
                    1 => ScalarCurve::ExpPoly {
                        a: terms[0].0,
                        b: 0.0,
                        c: consts,
                        lambda1: terms[0].1,
                        lambda2: -terms[0].1,
                    },
                    _ => ScalarCurve::ExpPoly {
                        a: terms[0].0,
                        b: terms[1].0,
                        c: consts,
                        lambda1: terms[0].1,
                        lambda2: terms[1].1,
                    },
                }
            }
            ScalarCurve::ExpLinear { a, b, c, lambda } => {
                if lambda.abs() <= tol {
                    ScalarCurve::Affine { slope: a, intercept: b + c }
                } else if dead(a) {
                    ScalarCurve::ExpPoly { a: b, b: 0.0, c, lambda1: lambda, lambda2: -lambda }
                        .reduce(tol)
                } else {
                    *self
                }
            }
            ScalarCurve::ExpCos { amplitude, c, .. } => {
                if dead(amplitude) {
                    ScalarCurve::Affine { slope: 0.0, intercept: c }
                } else {
                    *self
                }
            }
            ScalarCurve::ExpAffine { coeff, rate, slope, intercept } => {
                if dead(coeff) {
                    ScalarCurve::Affine { slope, intercept }
                } else if rate.abs() <= tol {
                    ScalarCurve::Affine { slope, intercept: intercept + coeff }
                } else if dead(slope) {
                    ScalarCurve::ExpPoly {
                        a: coeff,
                        b: 0.0,
                        c: intercept,
                        lambda1: rate,
                        lambda2: -rate,
                    }
                    .reduce(tol)
                } else {
                    *self
                }
            }
            ScalarCurve::Affine { .. } => *self,
        }
    }
}

/// One located zero of a scalar curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    pub location: f64,
    /// Whether the curve changes sign there (false for tangential zeros
    /// and zeros sitting on a window endpoint).
    pub sign_change: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroClassification {
    IdenticallyZero,
    ConstantNonzero,
    NoZeros,
    /// Finitely many zeros on all of `R`, at most `max_count`.
    FiniteZeros { max_count: usize },
    /// Infinitely many isolated zeros; `period` is the translation
    /// invariance of the zero set when one exists.
    InfiniteDiscrete { period: Option<f64> },
}

#[derive(Clone, Debug)]
pub struct ZeroReport {
    pub classification: ZeroClassification,
    /// Zeros inside the window, sorted by location.
    pub zeros_in_window: Vec<Zero>,
    /// The curve is bounded on all of `R`.
    pub bounded: bool,
    /// Negation of `bounded`, kept explicit for report serialization.
    pub unbounded: bool,
}

/// Classify the zero set of `curve` and locate the zeros inside `window`.
///
/// The classification is analytic (coefficient-level on the reduced form),
/// so `IdenticallyZero` and the global zero-count ceilings are certificates
/// rather than grid observations. Locations come from a sign scan refined
/// by bisection, with a derivative scan catching tangential zeros.
pub fn zero_classify(curve: &ScalarCurve, window: Window, tol: f64) -> ZeroReport {
    let reduced = curve.reduce(tol);
    let thr = tol * (1.0 + reduced.coefficient_scale());
    let dead = |x: f64| x.abs() <= thr;

    let (classification, bounded) = match reduced {
        ScalarCurve::Affine { slope, intercept } => {
            if dead(slope) {
                if dead(intercept) {
                    (ZeroClassification::IdenticallyZero, true)
                } else {
                    (ZeroClassification::ConstantNonzero, true)
                }
            } else {
                (ZeroClassification::FiniteZeros { max_count: 1 }, false)
            }
        }
        ScalarCurve::ExpPoly { a, b, c, .. } => {
            // Exponential sum with distinct real exponents (one of them 0
            // for the constant): at most #terms - 1 zeros.
            let n = [a, b, c].iter().filter(|x| !dead(**x)).count();
            let exp_alive = !dead(a) || !dead(b);
            match n {
                0 => (ZeroClassification::IdenticallyZero, true),
                1 if !exp_alive => (ZeroClassification::ConstantNonzero, true),
                1 => (ZeroClassification::NoZeros, false),
                k => (ZeroClassification::FiniteZeros { max_count: k - 1 }, !exp_alive),
            }
        }
        ScalarCurve::ExpLinear { c, .. } => {
            // reduce() guarantees a != 0 and lambda != 0 here. The curve has
            // at most one critical point, so at most two zeros; with c = 0
            // the only zero is s = -b/a.
            let max_count = if dead(c) { 1 } else { 2 };
            (ZeroClassification::FiniteZeros { max_count }, false)
        }
        ScalarCurve::ExpCos { amplitude, lambda, mu, c, .. } => {
            if lambda.abs() <= tol {
                if c.abs() > amplitude.abs() + thr {
                    (ZeroClassification::NoZeros, true)
                } else {
                    let period = if dead(c) { PI / mu } else { 2.0 * PI / mu };
                    (ZeroClassification::InfiniteDiscrete { period: Some(period) }, true)
                }
            } else {
                // The envelope blows up in one direction, so the zero set is
                // infinite and unbounded on that side, with no period.
                (ZeroClassification::InfiniteDiscrete { period: None }, false)
            }
        }
        ScalarCurve::ExpAffine { coeff, rate, slope, .. } => {
            // Second derivative coeff·rate²·e^{rate·s} has a fixed sign, so
            // the curve is strictly convex or concave: at most two zeros,
            // and only one when the derivative never vanishes.
            let monotone = (coeff * rate).signum() == slope.signum();
            let max_count = if monotone { 1 } else { 2 };
            (ZeroClassification::FiniteZeros { max_count }, false)
        }
        ScalarCurve::MatExpForm { .. } => unreachable!("reduce eliminates MatExpForm"),
    };

    let zeros_in_window = match classification {
        ZeroClassification::IdenticallyZero
        | ZeroClassification::ConstantNonzero
        | ZeroClassification::NoZeros => Vec::new(),
        _ => scan_zeros(curve, &reduced, window, tol),
    };

    ZeroReport { classification, zeros_in_window, bounded, unbounded: !bounded }
}

fn bisect(curve: &ScalarCurve, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 * (1.0 + mid.abs()) {
            return mid;
        }
        let fmid = curve.eval(mid);
        if fmid == 0.0 {
            return mid;
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    0.5 * (lo + hi)
}

fn bisect_derivative(curve: &ScalarCurve, mut lo: f64, mut hi: f64, mut dlo: f64) -> f64 {
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 * (1.0 + mid.abs()) {
            return mid;
        }
        let dmid = curve.derivative(mid);
        if dmid == 0.0 {
            return mid;
        }
        if dlo * dmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            dlo = dmid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign-scan plus bisection. `reduced` only informs the grid density
/// (oscillatory curves need samples proportional to the frequency); all
/// evaluations use the original `curve`.
fn scan_zeros(curve: &ScalarCurve, reduced: &ScalarCurve, window: Window, tol: f64) -> Vec<Zero> {
    let len = window.len();
    if !(len > 0.0) {
        return Vec::new();
    }
    let mut density = BASE_DENSITY;
    if let ScalarCurve::ExpCos { mu, .. } = reduced {
        // At least 32 samples per half-period.
        density = density.max(32.0 * mu / PI);
    }
    let n = (((len * density).ceil() as usize) + 1).clamp(64, MAX_GRID);
    let step = len / (n - 1) as f64;
    let grid: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { window.hi } else { window.lo + step * i as f64 })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&s| curve.eval(s)).collect();

    let mut found: Vec<Zero> = Vec::new();

    // Exact grid hits and sign changes.
    for i in 0..n - 1 {
        let (fa, fb) = (values[i], values[i + 1]);
        if fa == 0.0 {
            let before = if i > 0 { values[i - 1] } else { fb };
            found.push(Zero { location: grid[i], sign_change: before * fb < 0.0 });
            continue;
        }
        if fa * fb < 0.0 {
            let root = bisect(curve, grid[i], grid[i + 1], fa);
            found.push(Zero { location: root, sign_change: true });
        }
    }
    if values[n - 1] == 0.0 {
        found.push(Zero { location: grid[n - 1], sign_change: false });
    }

    // Tangential zeros: critical points where the value is negligibly small
    // against its neighborhood.
    let derivs: Vec<f64> = grid.iter().map(|&s| curve.derivative(s)).collect();
    for i in 0..n - 1 {
        let (da, db) = (derivs[i], derivs[i + 1]);
        let crit = if da == 0.0 {
            Some(grid[i])
        } else if da * db < 0.0 {
            Some(bisect_derivative(curve, grid[i], grid[i + 1], da))
        } else {
            None
        };
        if let Some(cp) = crit {
            let neighborhood = values[i].abs().max(values[i + 1].abs());
            if curve.eval(cp).abs() <= tol * (1.0 + neighborhood) {
                found.push(Zero { location: cp, sign_change: false });
            }
        }
    }

    // Endpoint zeros that the interior machinery cannot bracket.
    for (endpoint, inner) in [(window.lo, values[1].abs()), (window.hi, values[n - 2].abs())] {
        let f = curve.eval(endpoint);
        if f != 0.0 && f.abs() <= tol * (1.0 + inner) {
            found.push(Zero { location: endpoint, sign_change: false });
        }
    }

    found.sort_by(|a, b| a.location.total_cmp(&b.location));
    let mut merged: Vec<Zero> = Vec::new();
    for z in found {
        match merged.last_mut() {
            Some(last) if (z.location - last.location).abs() <= MERGE_TOL * (1.0 + z.location.abs()) => {
                last.sign_change |= z.sign_change;
            }
            _ => merged.push(z),
        }
    }
    merged
}

/// How a curve through the group relates to the singular locus.
#[derive(Clone, Debug, PartialEq)]
pub enum CrossingBehavior {
    /// No zeros inside the window: the curve stays in one component of the
    /// complement of the locus (over the window).
    StaysInComponent,
    /// Isolated intersections with the locus.
    DiscreteCrossings { zeros: Vec<Zero> },
    /// The curve lies inside the locus identically.
    RemainsInLocus,
}

#[derive(Clone, Debug)]
pub struct CrossingProfile {
    pub behavior: CrossingBehavior,
    pub base_point: GroupElement,
    /// The algebra direction of the exponential curve; `None` for flow
    /// profiles, which follow the field itself.
    pub direction: Option<AlgebraElement>,
    pub curve: ScalarCurve,
    pub report: ZeroReport,
    /// Set when the structure has `A = 0`, where the analytic crossing
    /// guarantees do not apply; the numeric report is still produced.
    pub best_effort: bool,
}

impl CrossingProfile {
    /// Distance from `s = 0` to the nearest zero other than the base point
    /// itself: a certified radius on which the curve keeps its sign (or
    /// stays on the locus side it started from).
    pub fn isolation_radius(&self) -> Option<f64> {
        self.report
            .zeros_in_window
            .iter()
            .map(|z| z.location.abs())
            .filter(|r| *r > MERGE_TOL)
            .min_by(f64::total_cmp)
    }
}

fn behavior_from_report(report: &ZeroReport) -> CrossingBehavior {
    if report.classification == ZeroClassification::IdenticallyZero {
        CrossingBehavior::RemainsInLocus
    } else if report.zeros_in_window.is_empty() {
        CrossingBehavior::StaysInComponent
    } else {
        CrossingBehavior::DiscreteCrossings { zeros: report.zeros_in_window.clone() }
    }
}

/// Value of the locus function along the exponential curve,
/// `F(g · exp(sY))`, through its closed form.
///
/// For `Y = (0, w)` the curve is affine: `F(g) + s⟨Aw, u⟩`. For
/// `Y = (a, w)` with `a ≠ 0` it is
/// `⟨ρ_{-t-as}(Av + Λ_t ξ), u⟩ - (1/a)⟨Λ_{-as}(Aw + aξ), u⟩`.
pub fn exp_curve_value(ars: &SimpleARS, g: GroupElement, y: AlgebraElement, s: f64) -> f64 {
    let theta = ars.theta();
    let field = ars.field();
    let u = ars.line().normal;
    if y.a == 0.0 {
        let f0 = locus_scalar(&field, u, g);
        return f0 + s * (field.a_mat() * y.w).dot(&u);
    }
    let q = field.a_mat() * g.v + theta.lambda_op(g.t) * field.xi();
    let p = field.a_mat() * y.w + field.xi() * y.a;
    let first = (theta.rho(-g.t - y.a * s) * q).dot(&u);
    let second = (theta.lambda_op(-y.a * s) * p).dot(&u) / y.a;
    first - second
}

/// The exponential curve as a closed-form scalar curve in `s`.
pub fn exp_curve_reduce(ars: &SimpleARS, g: GroupElement, y: AlgebraElement) -> ScalarCurve {
    let theta = ars.theta();
    let field = ars.field();
    let u = ars.line().normal;
    if y.a == 0.0 {
        return ScalarCurve::Affine {
            slope: (field.a_mat() * y.w).dot(&u),
            intercept: locus_scalar(&field, u, g),
        };
    }
    let a = y.a;
    let q = field.a_mat() * g.v + theta.lambda_op(g.t) * field.xi();
    let p = field.a_mat() * y.w + field.xi() * a;
    let r = theta.rho(-g.t) * q;
    match theta.matrix().inverse() {
        Some(theta_inv) => {
            let tp = theta_inv * p;
            ScalarCurve::MatExpForm {
                a_mat: theta.matrix() * (-a),
                u,
                v: r - tp * (1.0 / a),
                tau: -tp.dot(&u) / a,
            }
        }
        None => {
            // Only θ = diag(1, 0) is singular among the admissible families:
            // ρ_τ = diag(e^τ, 1) and Λ_τ = diag(e^τ - 1, τ).
            ScalarCurve::ExpAffine {
                coeff: u.x * (r.x - p.x / a),
                rate: -a,
                slope: u.y * p.y,
                intercept: r.y * u.y + p.x * u.x / a,
            }
        }
    }
}

/// Crossing profile of the exponential curve `s ↦ g · exp(sY)` against the
/// singular locus, over the window.
pub fn exp_curve_profile(
    ars: &SimpleARS,
    g: GroupElement,
    y: AlgebraElement,
    window: Window,
) -> CrossingProfile {
    let curve = exp_curve_reduce(ars, g, y);
    let report = zero_classify(&curve, window, ars.tolerances().zero_scan);
    let behavior = behavior_from_report(&report);
    CrossingProfile {
        behavior,
        base_point: g,
        direction: Some(y),
        curve,
        report,
        best_effort: ars.field().a_mat().max_abs() <= ars.tolerances().constraint,
    }
}

/// The flow restriction `s ↦ F(φ_s(g))` as a matrix-exponential curve:
/// `⟨u, e^{sA} v₀⟩` with `v₀ = ρ_{-t}(Av + Λ^θ_t ξ)`.
pub fn flow_curve(ars: &SimpleARS, g: GroupElement) -> ScalarCurve {
    let theta = ars.theta();
    let field = ars.field();
    let v0 = theta.rho(-g.t) * (field.a_mat() * g.v + theta.lambda_op(g.t) * field.xi());
    ScalarCurve::MatExpForm { a_mat: field.a_mat(), u: ars.line().normal, v: v0, tau: 0.0 }
}

/// Crossing profile of the field's own flow line through `g`.
///
/// When `l_Δ` is an eigenline of `A` the restriction is `e^{κs} F(g)`, so
/// the flow either remains in the locus or never touches it; the dichotomy
/// is enforced explicitly on top of the generic classification.
pub fn flow_crossing(ars: &SimpleARS, g: GroupElement, window: Window) -> CrossingProfile {
    let curve = flow_curve(ars, g);
    let report = zero_classify(&curve, window, ars.tolerances().zero_scan);
    let mut behavior = behavior_from_report(&report);

    let line = ars.line();
    let a_mat = ars.field().a_mat();
    let moved = (a_mat * line.direction).dot(&line.normal);
    if moved.abs() <= ars.tolerances().constraint * (1.0 + a_mat.max_abs()) {
        let f0 = locus_scalar(&ars.field(), line.normal, g);
        behavior = if f0.abs() <= ars.tolerances().locus * (1.0 + g.v.norm()) {
            CrossingBehavior::RemainsInLocus
        } else {
            CrossingBehavior::StaysInComponent
        };
    }

    CrossingProfile {
        behavior,
        base_point: g,
        direction: None,
        curve,
        report,
        best_effort: false,
    }
}
