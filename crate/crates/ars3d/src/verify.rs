//! Randomized property suites behind `ars3d verify`.
//!
//! Every identity the library relies on is restated here as a checkable
//! property: sampled inputs, a residual, a tolerance. Sampling is
//! deterministic per (seed, property name), so `--suite all` and a single
//! suite produce identical rows for the shared properties.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ars::{Distribution, SimpleARS};
use crate::covering;
use crate::crossing::{
    exp_curve_profile, exp_curve_reduce, exp_curve_value, flow_crossing, flow_curve,
    CrossingBehavior, ScalarCurve, ZeroClassification,
};
use crate::group::{AlgebraElement, GroupElement, Tangent, Theta, ThetaKind};
use crate::linalg2::{expm, lambda_op, lambda_oracle, Mat2, Vec2};
use crate::locus::{GraphParametrization, LocusFunction, LocusShape};
use crate::symmetry::{Automorphism, LinearField};
use crate::Window;

/// The property groups `ars3d verify --suite` accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lambda,
    Group,
    Symmetry,
    Ars,
    Locus,
    Crossing,
    Covering,
}

pub const ALL_SUITES: [Suite; 7] = [
    Suite::Lambda,
    Suite::Group,
    Suite::Symmetry,
    Suite::Ars,
    Suite::Locus,
    Suite::Crossing,
    Suite::Covering,
];

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lambda => "lambda",
            Suite::Group => "group",
            Suite::Symmetry => "symmetry",
            Suite::Ars => "ars",
            Suite::Locus => "locus",
            Suite::Crossing => "crossing",
            Suite::Covering => "covering",
        }
    }
}

/// Parse a `--suite` argument; `"all"` expands to every suite.
pub fn parse_suites(name: &str) -> Option<Vec<Suite>> {
    if name == "all" {
        return Some(ALL_SUITES.to_vec());
    }
    ALL_SUITES.iter().find(|s| s.name() == name).map(|s| vec![*s])
}

/// Outcome of one property: how many cases ran, the worst residual seen,
/// and a counterexample when any case exceeded the tolerance (the failing
/// case with the smallest input magnitude is kept).
#[derive(Clone, Debug)]
pub struct PropertyResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub counterexample: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub results: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed())
    }
}

/// Residual accumulator for one property.
struct Check {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    max_residual: f64,
    // (input magnitude, description) of the smallest failing case.
    worst: Option<(f64, String)>,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Check {
        Check { name, tolerance, cases: 0, max_residual: 0.0, worst: None }
    }

    fn case(&mut self, residual: f64, magnitude: f64, describe: impl FnOnce() -> String) {
        self.cases += 1;
        let residual = if residual.is_finite() { residual } else { f64::INFINITY };
        if residual > self.max_residual {
            self.max_residual = residual;
        }
        if residual > self.tolerance {
            let smaller = self.worst.as_ref().map_or(true, |(m, _)| magnitude < *m);
            if smaller {
                self.worst = Some((magnitude, format!("residual {residual:.3e}: {}", describe())));
            }
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name,
            cases: self.cases,
            max_residual: self.max_residual,
            tolerance: self.tolerance,
            counterexample: self.worst.map(|(_, d)| d),
        }
    }
}

fn property_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a over the property name, folded with the user seed.
    let h = name
        .bytes()
        .fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
    seed ^ h
}

/// Deterministic random inputs for the suites.
pub(crate) struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub(crate) fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn f(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Uniform on `±[min_abs, hi]`.
    fn nonzero(&mut self, min_abs: f64, hi: f64) -> f64 {
        let x = self.f(min_abs, hi);
        if self.rng.gen::<bool>() {
            x
        } else {
            -x
        }
    }

    fn vec2(&mut self, r: f64) -> Vec2 {
        Vec2::new(self.f(-r, r), self.f(-r, r))
    }

    fn nonzero_vec2(&mut self, r: f64) -> Vec2 {
        loop {
            let v = self.vec2(r);
            if v.norm() >= 0.1 {
                return v;
            }
        }
    }

    fn mat2(&mut self, r: f64) -> Mat2 {
        Mat2::new(self.f(-r, r), self.f(-r, r), self.f(-r, r), self.f(-r, r))
    }

    fn invertible(&mut self, r: f64) -> Mat2 {
        loop {
            let m = self.mat2(r);
            if m.det().abs() >= 0.05 {
                return m;
            }
        }
    }

    /// A random matrix with the requested eigenvalue structure
    /// (0 = distinct real, 1 = repeated real, 2 = complex pair), realized
    /// as a conjugate of the normal form by a random invertible matrix.
    fn matrix_of_kind(&mut self, kind: usize) -> Mat2 {
        let p = self.invertible(1.2);
        let pinv = p.inverse().expect("sampled invertible");
        let core = match kind % 3 {
            0 => {
                let l1 = self.f(-1.2, 1.2);
                let l2 = l1 + self.nonzero(0.2, 1.2);
                Mat2::diagonal(l1, l2)
            }
            1 => {
                let l = self.f(-1.2, 1.2);
                let b = if self.rng.gen::<bool>() { self.nonzero(0.2, 1.2) } else { 0.0 };
                Mat2::new(l, b, 0.0, l)
            }
            _ => {
                let a = self.f(-1.2, 1.2);
                let b = self.nonzero(0.2, 1.2);
                Mat2::new(a, -b, b, a)
            }
        };
        p * core * pinv
    }

    fn theta(&mut self) -> Theta {
        match self.rng.gen_range(0..3) {
            0 => Theta::jordan(),
            1 => Theta::diagonal(self.f(-1.0, 1.0)).expect("lambda in range"),
            _ => Theta::complex(self.f(-1.0, 1.0)).expect("lambda in range"),
        }
    }

    /// A random element of the commutant of θ.
    fn commuting(&mut self, theta: &Theta, r: f64) -> Mat2 {
        match theta.kind() {
            ThetaKind::Jordan => {
                let (a, b) = (self.f(-r, r), self.f(-r, r));
                Mat2::new(a, b, 0.0, a)
            }
            ThetaKind::Diagonal(l) if l == 1.0 => self.mat2(r),
            ThetaKind::Diagonal(_) => Mat2::diagonal(self.f(-r, r), self.f(-r, r)),
            ThetaKind::Complex(_) => {
                let (a, b) = (self.f(-r, r), self.f(-r, r));
                Mat2::new(a, -b, b, a)
            }
        }
    }

    fn invertible_commuting(&mut self, theta: &Theta, r: f64) -> Mat2 {
        loop {
            let m = self.commuting(theta, r);
            if m.det().abs() >= 0.05 {
                return m;
            }
        }
    }

    /// A rank-one element of the commutant, when the family has one
    /// (the rotation-type commutant has none: `det(aI + bJ) = a² + b²`).
    fn rank_one_commuting(&mut self, theta: &Theta) -> Option<Mat2> {
        match theta.kind() {
            ThetaKind::Jordan => Some(Mat2::new(0.0, self.nonzero(0.3, 1.5), 0.0, 0.0)),
            ThetaKind::Diagonal(l) if l == 1.0 => {
                let x = Vec2::new(self.nonzero(0.3, 1.5), self.f(-1.5, 1.5));
                let y = Vec2::new(self.nonzero(0.3, 1.5), self.f(-1.5, 1.5));
                Some(Mat2::new(x.x * y.x, x.x * y.y, x.y * y.x, x.y * y.y))
            }
            ThetaKind::Diagonal(_) => {
                let c = self.nonzero(0.3, 1.5);
                Some(if self.rng.gen::<bool>() {
                    Mat2::diagonal(c, 0.0)
                } else {
                    Mat2::diagonal(0.0, c)
                })
            }
            ThetaKind::Complex(_) => None,
        }
    }

    fn group_element(&mut self) -> GroupElement {
        GroupElement::new(self.f(-2.5, 2.5), self.vec2(2.5))
    }

    fn algebra_element(&mut self) -> AlgebraElement {
        AlgebraElement::new(self.f(-2.0, 2.0), self.vec2(2.0))
    }

    fn tangent(&mut self) -> Tangent {
        Tangent::new(self.f(-2.0, 2.0), self.vec2(2.0))
    }

    /// A random distribution with a healthy transversal direction.
    fn distribution(&mut self) -> Distribution {
        loop {
            let b1 = AlgebraElement::new(self.nonzero(0.3, 1.5), self.vec2(1.5));
            let b2 = AlgebraElement::new(self.f(-1.5, 1.5), self.vec2(1.5));
            let line = b2.w * b1.a - b1.w * b2.a;
            if line.norm() < 0.3 {
                continue;
            }
            if let Ok(d) = Distribution::orthonormal_frame([b1, b2]) {
                return d;
            }
        }
    }

    /// What kind of field matrix a structure should carry.
    fn a_mat_for(&mut self, theta: &Theta, rank: Option<usize>) -> Option<Mat2> {
        match rank {
            None => Some(self.commuting(theta, 1.5)),
            Some(0) => Some(Mat2::zero()),
            Some(1) => self.rank_one_commuting(theta),
            Some(2) => Some(self.invertible_commuting(theta, 1.5)),
            Some(_) => unreachable!("2x2 ranks only"),
        }
    }

    /// A random valid structure; `theta`/`rank` pin those choices.
    fn valid_ars(&mut self, theta: Option<Theta>, rank: Option<usize>) -> SimpleARS {
        for _ in 0..500 {
            let th = theta.unwrap_or_else(|| self.theta());
            let Some(a) = self.a_mat_for(&th, rank) else { continue };
            let xi = self.vec2(1.5);
            let Ok(field) = LinearField::new(th, xi, a, 1e-9) else { continue };
            let dist = self.distribution();
            if let Ok(ars) = SimpleARS::new(field, dist) {
                return ars;
            }
        }
        panic!("no valid structure found in 500 attempts; sampler ranges are miscalibrated");
    }

    /// A random automorphism of the given group; orientation-reversing
    /// (`ε = -1`) variants appear when the family is trace-free.
    fn automorphism(&mut self, theta: &Theta) -> Automorphism {
        let flip = theta.is_trace_free() && self.rng.gen_range(0..4) == 0;
        let eta = self.vec2(1.5);
        let (epsilon, p) = if flip {
            let p = match theta.kind() {
                ThetaKind::Diagonal(_) => loop {
                    let m = Mat2::new(0.0, self.nonzero(0.3, 1.5), self.nonzero(0.3, 1.5), 0.0);
                    if m.det().abs() >= 0.05 {
                        break m;
                    }
                },
                ThetaKind::Complex(_) => {
                    let (a, b) = (self.f(-1.5, 1.5), self.f(-1.5, 1.5));
                    let mut m = Mat2::new(a, b, b, -a);
                    if m.det().abs() < 0.05 {
                        m = Mat2::new(1.0, 0.0, 0.0, -1.0);
                    }
                    m
                }
                ThetaKind::Jordan => unreachable!("jordan is not trace-free"),
            };
            (-1.0, p)
        } else {
            (1.0, self.invertible_commuting(theta, 1.5))
        };
        Automorphism::new(*theta, epsilon, p, eta, 1e-9).expect("constructed to satisfy Pθ = εθP")
    }

    /// A point with `|F| > band·(1 + |v|)`, i.e. safely off the locus.
    fn off_locus_point(&mut self, lf: &LocusFunction, band: f64) -> GroupElement {
        for _ in 0..500 {
            let g = self.group_element();
            if lf.eval(g).abs() > band * (1.0 + g.v.norm()) {
                return g;
            }
        }
        panic!("no off-locus point found; the locus band {band} is implausibly wide");
    }

    /// A point on the locus, found by one exact affine correction along the
    /// fiber gradient (F is affine in v). Requires a nonvanishing gradient,
    /// so the structure must have A ≠ 0.
    fn on_locus_point(&mut self, lf: &LocusFunction) -> GroupElement {
        for _ in 0..500 {
            let t = self.f(-2.0, 2.0);
            let v0 = self.vec2(2.0);
            let (_, gv) = lf.gradient(GroupElement::new(t, v0));
            let Some(dir) = gv.normalized() else { continue };
            if gv.norm() < 1e-6 {
                continue;
            }
            let f0 = lf.eval(GroupElement::new(t, v0));
            let g = GroupElement::new(t, v0 - dir * (f0 / gv.norm()));
            // F is affine in v, so one corrected step lands at machine
            // precision; anything worse means the gradient was unreliable.
            if lf.eval(g).abs() <= 1e-12 * (1.0 + g.v.norm()) {
                return g;
            }
        }
        panic!("no locus point found; is A = 0 for this structure?");
    }
}

fn rel(err: f64, scale: f64) -> f64 {
    err / (1.0 + scale)
}

/// 1.0 for a violated predicate, 0.0 otherwise; lets yes/no properties
/// share the residual bookkeeping.
fn flag(violated: bool) -> f64 {
    if violated {
        1.0
    } else {
        0.0
    }
}

fn ge_diff(a: GroupElement, b: GroupElement) -> f64 {
    (a.t - b.t).hypot((a.v - b.v).norm())
}

fn tangent_diff(a: Tangent, b: Tangent) -> f64 {
    (a.dt - b.dt).hypot((a.dv - b.dv).norm())
}

// ---------------------------------------------------------------------------
// lambda suite
// ---------------------------------------------------------------------------

fn prop_lambda_zero(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("lambda at t=0 vanishes", 1e-12);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for i in 0..3 * cases {
        let m = s.matrix_of_kind(i);
        c.case(lambda_op(&m, 0.0).max_abs(), m.max_abs(), || format!("{m:?}"));
    }
    c.finish()
}

fn prop_lambda_derivative(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("lambda derivative equals the exponential", 1e-5);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let h = 1e-6;
    for i in 0..3 * cases {
        let m = s.matrix_of_kind(i);
        let t = s.f(-2.5, 2.5);
        let fd = (lambda_op(&m, t + h) - lambda_op(&m, t - h)) * (1.0 / (2.0 * h));
        let exact = expm(&m, t);
        c.case(rel((fd - exact).max_abs(), exact.max_abs()), m.max_abs() + t.abs(), || {
            format!("M = {m:?}, t = {t}")
        });
    }
    c.finish()
}

fn prop_lambda_cocycle(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("lambda cocycle over time addition", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for i in 0..3 * cases {
        let m = s.matrix_of_kind(i);
        let (t, r) = (s.f(-2.5, 2.5), s.f(-2.5, 2.5));
        let lhs = lambda_op(&m, t + r);
        let rhs = lambda_op(&m, t) + expm(&m, t) * lambda_op(&m, r);
        c.case(rel((lhs - rhs).max_abs(), lhs.max_abs()), m.max_abs() + t.abs() + r.abs(), || {
            format!("M = {m:?}, t = {t}, s = {r}")
        });
    }
    c.finish()
}

fn prop_lambda_fundamental(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("exponential minus M·lambda is the identity", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for i in 0..3 * cases {
        let m = s.matrix_of_kind(i);
        let t = s.f(-2.5, 2.5);
        let e = expm(&m, t);
        let residual = (e - m * lambda_op(&m, t) - Mat2::identity()).max_abs();
        c.case(rel(residual, e.max_abs()), m.max_abs() + t.abs(), || {
            format!("M = {m:?}, t = {t}")
        });
    }
    c.finish()
}

fn prop_lambda_commutes(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("exponential commutes with lambda", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for i in 0..3 * cases {
        let m = s.matrix_of_kind(i);
        let (t, r) = (s.f(-2.5, 2.5), s.f(-2.5, 2.5));
        let lhs = expm(&m, r) * lambda_op(&m, t);
        let rhs = lambda_op(&m, t) * expm(&m, r);
        c.case(rel((lhs - rhs).max_abs(), lhs.max_abs()), m.max_abs() + t.abs() + r.abs(), || {
            format!("M = {m:?}, t = {t}, s = {r}")
        });
    }
    c.finish()
}

fn prop_lambda_invertible_form(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("invertible case closed form (e^{tM} - id)M^{-1}", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for i in 0..3 * cases {
        let m = {
            let mut m = s.matrix_of_kind(i);
            while m.det().abs() < 0.05 {
                m = s.matrix_of_kind(i);
            }
            m
        };
        let t = s.f(-2.5, 2.5);
        let minv = m.inverse().expect("det bounded away from zero");
        let closed = (expm(&m, t) - Mat2::identity()) * minv;
        let direct = lambda_op(&m, t);
        c.case(rel((closed - direct).max_abs(), direct.max_abs()), m.max_abs() + t.abs(), || {
            format!("M = {m:?}, t = {t}")
        });
    }
    c.finish()
}

fn prop_lambda_rank_deficient_form(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("diag(lambda, 0) closed form", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for _ in 0..3 * cases {
        let l = s.nonzero(0.05, 1.5);
        let t = s.f(-2.5, 2.5);
        let m = Mat2::diagonal(l, 0.0);
        let expected = Mat2::diagonal(((l * t).exp() - 1.0) / l, t);
        let direct = lambda_op(&m, t);
        c.case(rel((expected - direct).max_abs(), expected.max_abs()), l.abs() + t.abs(), || {
            format!("lambda = {l}, t = {t}")
        });
    }
    c.finish()
}

fn prop_lambda_oracle(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("lambda agrees with the quadrature oracle", 1e-8);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 10).max(10);
    for i in 0..3 * n {
        let m = s.matrix_of_kind(i);
        let t = s.f(-10.0, 10.0);
        let direct = lambda_op(&m, t);
        let oracle = lambda_oracle(&m, t, 4096);
        c.case(rel((direct - oracle).max_abs(), direct.max_abs()), m.max_abs() + t.abs(), || {
            format!("M = {m:?}, t = {t}")
        });
    }
    c.finish()
}

// ---------------------------------------------------------------------------
// group suite
// ---------------------------------------------------------------------------

fn prop_group_associative(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("product is associative", 1e-10);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for _ in 0..cases {
        let th = s.theta();
        let (g, h, k) = (s.group_element(), s.group_element(), s.group_element());
        let lhs = th.mul(th.mul(g, h), k);
        let rhs = th.mul(g, th.mul(h, k));
        let scale = g.v.norm() + h.v.norm() + k.v.norm();
        c.case(rel(ge_diff(lhs, rhs), scale), scale, || format!("{th:?}, {g:?}, {h:?}, {k:?}"));
    }
    c.finish()
}

fn prop_group_inverse(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("two-sided inverse reaches the identity", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for _ in 0..cases {
        let th = s.theta();
        let g = s.group_element();
        let e = GroupElement::identity();
        let r = ge_diff(th.mul(g, th.inv(g)), e).max(ge_diff(th.mul(th.inv(g), g), e));
        c.case(rel(r, g.v.norm()), g.v.norm() + g.t.abs(), || format!("{th:?}, {g:?}"));
    }
    c.finish()
}

fn prop_group_exp_one_parameter(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("exponential is a one-parameter morphism", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for _ in 0..cases {
        let th = s.theta();
        let y = s.algebra_element();
        let (p, q) = (s.f(-2.0, 2.0), s.f(-2.0, 2.0));
        let lhs = th.exp(y * (p + q));
        let rhs = th.mul(th.exp(y * p), th.exp(y * q));
        let scale = lhs.v.norm() + lhs.t.abs();
        c.case(rel(ge_diff(lhs, rhs), scale), y.norm(), || {
            format!("{th:?}, Y = {y:?}, s = {p}, r = {q}")
        });
    }
    c.finish()
}

fn prop_group_exp_ode_oracle(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("exponential matches a Runge-Kutta flow of Y^L", 1e-6);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 10).max(10);
    for _ in 0..n {
        let th = s.theta();
        let y = s.algebra_element();
        // Integrate g' = Y^L(g) from the identity over [0, 1].
        let steps = 400;
        let h = 1.0 / steps as f64;
        let field = |g: GroupElement| -> (f64, Vec2) {
            let z = th.left_invariant(y, g);
            (z.dt, z.dv)
        };
        let mut g = GroupElement::identity();
        let mut mid = g;
        for step in 0..steps {
            let (k1t, k1v) = field(g);
            let (k2t, k2v) = field(GroupElement::new(g.t + 0.5 * h * k1t, g.v + k1v * (0.5 * h)));
            let (k3t, k3v) = field(GroupElement::new(g.t + 0.5 * h * k2t, g.v + k2v * (0.5 * h)));
            let (k4t, k4v) = field(GroupElement::new(g.t + h * k3t, g.v + k3v * h));
            g = GroupElement::new(
                g.t + h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t),
                g.v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0),
            );
            if step + 1 == steps / 2 {
                mid = g;
            }
        }
        let scale = g.v.norm() + g.t.abs();
        let r_end = ge_diff(g, th.exp(y));
        let r_mid = ge_diff(mid, th.exp(y * 0.5));
        c.case(rel(r_end.max(r_mid), scale), y.norm(), || format!("{th:?}, Y = {y:?}"));
    }
    c.finish()
}

fn prop_group_invariant_fields(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("invariant fields transform under translations", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for _ in 0..cases {
        let th = s.theta();
        let y = s.algebra_element();
        let (g, h) = (s.group_element(), s.group_element());
        // Left: value at g·h is the left-translate by g of the value at h.
        let left = tangent_diff(
            th.left_invariant(y, th.mul(g, h)),
            th.left_translation_differential(g, th.left_invariant(y, h)),
        );
        // Right: value at h·g is the right-translate by g of the value at h.
        let right = tangent_diff(
            th.right_invariant(y, th.mul(h, g)),
            th.right_translation_differential(g, h, th.right_invariant(y, h)),
        );
        let scale = y.norm() * (1.0 + g.v.norm() + h.v.norm());
        c.case(rel(left.max(right), scale), scale, || {
            format!("{th:?}, Y = {y:?}, g = {g:?}, h = {h:?}")
        });
    }
    c.finish()
}

// ---------------------------------------------------------------------------
// symmetry suite
// ---------------------------------------------------------------------------

fn sample_linear_field(s: &mut Sampler) -> LinearField {
    let th = s.theta();
    let a = s.commuting(&th, 1.5);
    LinearField::new(th, s.vec2(1.5), a, 1e-9).expect("commutant element")
}

fn prop_flow_automorphism(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("flow maps are group automorphisms", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for _ in 0..cases {
        let x = sample_linear_field(&mut s);
        let th = x.theta();
        let (g, h) = (s.group_element(), s.group_element());
        let t = s.f(-2.0, 2.0);
        let lhs = x.flow(t, th.mul(g, h));
        let rhs = th.mul(x.flow(t, g), x.flow(t, h));
        let scale = lhs.v.norm() + rhs.v.norm();
        c.case(rel(ge_diff(lhs, rhs), scale), scale, || {
            format!("X = {x:?}, s = {t}, g = {g:?}, h = {h:?}")
        });
    }
    c.finish()
}

fn prop_flow_derivative(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("flow derivative at s=0 is the field", 1e-5);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let h = 1e-6;
    for _ in 0..cases {
        let x = sample_linear_field(&mut s);
        let g = s.group_element();
        let (fp, fm) = (x.flow(h, g), x.flow(-h, g));
        let fd = Tangent::new((fp.t - fm.t) / (2.0 * h), (fp.v - fm.v) * (1.0 / (2.0 * h)));
        let exact = x.eval(g);
        c.case(rel(tangent_diff(fd, exact), exact.norm()), g.v.norm(), || {
            format!("X = {x:?}, g = {g:?}")
        });
    }
    c.finish()
}

fn prop_flow_semigroup(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("flow composes additively in time", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for _ in 0..cases {
        let x = sample_linear_field(&mut s);
        let g = s.group_element();
        let (p, q) = (s.f(-2.0, 2.0), s.f(-2.0, 2.0));
        let lhs = x.flow(p, x.flow(q, g));
        let rhs = x.flow(p + q, g);
        let scale = rhs.v.norm();
        c.case(rel(ge_diff(lhs, rhs), scale), scale, || {
            format!("X = {x:?}, s = {p}, r = {q}, g = {g:?}")
        });
    }
    c.finish()
}

type Mat3 = [[f64; 3]; 3];

fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Dense 3x3 exponential by scaling-and-squaring with a Taylor core;
/// only used as an independent oracle.
fn mat3_exp(m: &Mat3) -> Mat3 {
    let norm: f64 = m.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    let squarings = (norm.max(1e-300).log2().ceil().max(0.0) as u32) + 2;
    let scale = (0.5f64).powi(squarings as i32);
    let scaled: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| m[i][j] * scale));
    let mut out: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }));
    let mut term = out;
    for k in 1..=16 {
        term = mat3_mul(&term, &scaled);
        for (i, row) in term.iter_mut().enumerate() {
            for cell in row.iter_mut() {
                *cell /= k as f64;
            }
            for (j, cell) in row.iter().enumerate() {
                out[i][j] += *cell;
            }
        }
    }
    for _ in 0..squarings {
        out = mat3_mul(&out, &out);
    }
    out
}

fn prop_derivation_exponential(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("flow differential at identity is exp of the derivation", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for _ in 0..cases {
        let x = sample_linear_field(&mut s);
        let t = s.f(-2.0, 2.0);
        let (xi, a) = (x.xi(), x.a_mat());
        let d: Mat3 = [
            [0.0, 0.0, 0.0],
            [xi.x, a.a11, a.a12],
            [xi.y, a.a21, a.a22],
        ];
        let scaled: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| d[i][j] * t));
        let oracle = mat3_exp(&scaled);
        // Closed form: first column (1, Λ^A_t ξ), lower-right block e^{tA}.
        let e = expm(&a, t);
        let l = lambda_op(&a, t) * xi;
        let closed: Mat3 = [
            [1.0, 0.0, 0.0],
            [l.x, e.a11, e.a12],
            [l.y, e.a21, e.a22],
        ];
        let mut residual = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                residual = residual.max((oracle[i][j] - closed[i][j]).abs());
                scale = scale.max(closed[i][j].abs());
            }
        }
        c.case(rel(residual, scale), a.max_abs() + t.abs(), || format!("X = {x:?}, s = {t}"));
    }
    c.finish()
}

fn prop_flow_fixes_singularities(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("flow fixes the zeros of the field", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for _ in 0..cases {
        let th = s.theta();
        let a = s.invertible_commuting(&th, 1.5);
        let x = LinearField::new(th, s.vec2(1.5), a, 1e-9).expect("commutant element");
        let t0 = s.f(-2.0, 2.0);
        // Solve A v = -Λ^θ_{t0} ξ for the equilibrium over t = t0.
        let rhs = -(th.lambda_op(t0) * x.xi());
        let v = a.inverse().expect("det bounded below") * rhs;
        let g = GroupElement::new(t0, v);
        let t = s.f(-2.0, 2.0);
        let r = ge_diff(x.flow(t, g), g).max(x.eval(g).norm());
        c.case(rel(r, g.v.norm()), g.v.norm(), || format!("X = {x:?}, g = {g:?}, s = {t}"));
    }
    c.finish()
}

// ---------------------------------------------------------------------------
// ars suite
// ---------------------------------------------------------------------------

fn prop_pushforward_isometry(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("pushforward preserves the almost-Riemannian norm", 1e-8);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 2).max(10);
    let mut done = 0;
    while done < n {
        let ars = s.valid_ars(None, None);
        let psi = s.automorphism(&ars.theta());
        let Ok(pushed) = ars.pushforward(&psi) else { continue };
        let lf = LocusFunction::new(&pushed);
        let g = s.off_locus_point(&lf, 1e-3);
        let z = s.tangent();
        let n1 = pushed.ar_norm(g, z);
        let n2 = ars.ar_norm(psi.apply(g), psi.differential(g, z));
        let residual = if n1.is_finite() && n2.is_finite() {
            rel((n1 - n2).abs(), n1.min(n2))
        } else if n1.is_finite() || n2.is_finite() {
            f64::INFINITY
        } else {
            0.0
        };
        c.case(residual, g.v.norm() + z.norm(), || {
            format!("psi = {psi:?}, g = {g:?}, Z = {z:?}, norms {n1} vs {n2}")
        });
        done += 1;
    }
    c.finish()
}

fn prop_pushforward_conjugates_field(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("pushforward conjugates the field along the automorphism", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 2).max(10);
    let mut done = 0;
    while done < n {
        let ars = s.valid_ars(None, None);
        let psi = s.automorphism(&ars.theta());
        let Ok(pushed) = ars.pushforward(&psi) else { continue };
        if !pushed.larc_verdict().satisfied {
            c.case(1.0, 0.0, || "transport lost the rank condition".into());
            done += 1;
            continue;
        }
        let g = s.group_element();
        let lhs = psi.differential(g, pushed.field().eval(g));
        let rhs = ars.field().eval(psi.apply(g));
        c.case(rel(tangent_diff(lhs, rhs), rhs.norm()), g.v.norm(), || {
            format!("psi = {psi:?}, g = {g:?}")
        });
        done += 1;
    }
    c.finish()
}

fn prop_theta_line_forces_a_line(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("theta-invariant lines are A-invariant when theta is not the identity", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    for _ in 0..cases {
        let th = loop {
            let th = s.theta();
            if !th.is_identity() {
                break th;
            }
        };
        let a = s.commuting(&th, 1.5);
        // Real eigendirections of θ; the rotation-type family has none and
        // the claim is vacuous there.
        let dirs: &[Vec2] = match th.kind() {
            ThetaKind::Jordan => &[Vec2::new(1.0, 0.0)],
            ThetaKind::Diagonal(_) => &[Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
            ThetaKind::Complex(_) => &[],
        };
        let mut residual = 0.0f64;
        for d in dirs {
            residual = residual.max(rel((a * *d).cross(d).abs(), a.max_abs()));
        }
        c.case(residual, a.max_abs(), || format!("theta = {th:?}, A = {a:?}"));
    }
    c.finish()
}

fn prop_ar_norm_along_distribution(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("norm of distribution directions is point-independent", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 2).max(10);
    for _ in 0..n {
        let ars = s.valid_ars(None, None);
        let lf = LocusFunction::new(&ars);
        let [b1, b2] = ars.distribution().basis();
        let (c1, c2) = (s.f(-2.0, 2.0), s.f(-2.0, 2.0));
        let y = b1 * c1 + b2 * c2;
        let gm = ars.distribution().gram();
        let expected = (gm.a11 * c1 * c1 + 2.0 * gm.a12 * c1 * c2 + gm.a22 * c2 * c2).sqrt();
        let mut residual = 0.0f64;
        for _ in 0..2 {
            let g = s.off_locus_point(&lf, 1e-3);
            let n = ars.ar_norm(g, ars.theta().left_invariant(y, g));
            residual = residual.max(rel((n - expected).abs(), expected));
        }
        c.case(residual, expected, || format!("Y = {y:?} in {:?}", ars.distribution()));
    }
    c.finish()
}

fn prop_normalization_exactness(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("normalizations land exactly on their target form", 0.5);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 2).max(10);
    for _ in 0..n {
        let ars = s.valid_ars(None, Some(2));
        let mut bad = 0.0;
        match ars.normalize() {
            Ok((normd, _psi)) => {
                let b = normd.distribution().basis();
                let hit = b
                    .iter()
                    .any(|e| e.a == 1.0 && e.w.x == 0.0 && e.w.y == 0.0);
                if !hit {
                    bad = 1.0;
                }
            }
            Err(_) => bad = 1.0,
        }
        match ars.zero_xi_normalization() {
            Ok((zeroed, _psi)) => {
                let xi = zeroed.field().xi();
                if xi.x != 0.0 || xi.y != 0.0 {
                    bad = 1.0;
                }
            }
            Err(_) => bad = 1.0,
        }
        c.case(bad, ars.field().xi().norm(), || format!("{:?}", ars.field()));
    }
    c.finish()
}

// ---------------------------------------------------------------------------
// locus suite
// ---------------------------------------------------------------------------

fn prop_h_map_flattens(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("full-rank conjugation flattens the locus scalar", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 10).max(5);
    for _ in 0..n {
        let ars = s.valid_ars(None, Some(2));
        let lf = LocusFunction::new(&ars);
        let u = lf.normal();
        for _ in 0..10 {
            let (t, v) = (s.f(-2.5, 2.5), s.vec2(2.5));
            let h = lf.h_map(t, v).expect("A invertible");
            let expected = v.dot(&u);
            c.case(rel((lf.eval(h) - expected).abs(), expected.abs()), t.abs() + v.norm(), || {
                format!("{:?}, t = {t}, v = {v:?}", ars.field())
            });
        }
    }
    c.finish()
}

fn prop_i_map_flattens(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("rank-one conjugation exposes the exponential factor", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 10).max(5);
    let mut done = 0;
    while done < n {
        // Only the jordan and diagonal families have rank-one commutants.
        let th = if done % 2 == 0 {
            Theta::jordan()
        } else {
            Theta::diagonal(s.f(-1.0, 1.0)).expect("lambda in range")
        };
        let ars = s.valid_ars(Some(th), Some(1));
        let lf = LocusFunction::new(&ars);
        let desc = match lf.describe(Window::new(-3.0, 3.0)) {
            Ok(d) => d,
            // Im A inside the distinguished line: the graph degenerates.
            Err(_) => continue,
        };
        let LocusShape::GraphOverPlane { map } = desc.shape else { continue };
        let GraphParametrization::Imap { w1, beta, .. } = map else { continue };
        let u = lf.normal();
        let a = ars.field().a_mat();
        // The graph offset divides by ⟨Aw₁, u⟩; keep it well conditioned.
        if (a * w1).dot(&u).abs() < 1e-2 * a.max_abs() {
            continue;
        }
        for _ in 0..10 {
            let (t, v) = (s.f(-2.5, 2.5), s.vec2(2.5));
            let img = lf.i_map(&map, t, v).expect("valid parametrization data");
            let expected = (-beta * t).exp() * v.dot(&w1) * (a * w1).dot(&u);
            c.case(rel((lf.eval(img) - expected).abs(), expected.abs()), t.abs() + v.norm(), || {
                format!("{:?}, t = {t}, v = {v:?}", ars.field())
            });
        }
        done += 1;
    }
    c.finish()
}

fn prop_graph_round_trips(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("graph parametrizations invert exactly", 1e-10);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 10).max(5);
    let mut done = 0;
    while done < n {
        let full_rank = done % 2 == 0;
        let (ars, map) = if full_rank {
            (s.valid_ars(None, Some(2)), None)
        } else {
            let th = if done % 4 == 1 {
                Theta::jordan()
            } else {
                Theta::diagonal(s.f(-1.0, 1.0)).expect("lambda in range")
            };
            let ars = s.valid_ars(Some(th), Some(1));
            let lf = LocusFunction::new(&ars);
            match lf.describe(Window::new(-3.0, 3.0)) {
                Ok(d) => match d.shape {
                    LocusShape::GraphOverPlane {
                        map: map @ GraphParametrization::Imap { w1, .. },
                    } => {
                        let a = ars.field().a_mat();
                        if (a * w1).dot(&lf.normal()).abs() < 1e-2 * a.max_abs() {
                            continue;
                        }
                        (ars, Some(map))
                    }
                    _ => continue,
                },
                Err(_) => continue,
            }
        };
        let lf = LocusFunction::new(&ars);
        for _ in 0..10 {
            let (t, v) = (s.f(-2.5, 2.5), s.vec2(2.5));
            let g = s.group_element();
            let residual = match &map {
                None => {
                    let fwd = lf.h_map(t, v).expect("A invertible");
                    let back = lf.h_map_inv(fwd);
                    let r1 = ge_diff(back, GroupElement::new(t, v));
                    let r2 = ge_diff(lf.h_map(g.t, lf.h_map_inv(g).v).expect("A invertible"), g);
                    r1.max(r2)
                }
                Some(m) => {
                    let fwd = lf.i_map(m, t, v).expect("valid map");
                    let back = lf.i_map_inv(m, fwd).expect("valid map");
                    // I only records the kernel-line coordinate, so compare
                    // through one more forward application.
                    let again = lf.i_map(m, back.t, back.v).expect("valid map");
                    ge_diff(again, fwd)
                }
            };
            c.case(rel(residual, v.norm() + g.v.norm()), t.abs() + v.norm(), || {
                format!("{:?}, t = {t}, v = {v:?}", ars.field())
            });
        }
        done += 1;
    }
    c.finish()
}

fn prop_locus_samples(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("locus samples vanish and leave the surface transversally", 1e-8);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 100).max(3);
    for _ in 0..n {
        let ars = s.valid_ars(None, Some(2));
        let lf = LocusFunction::new(&ars);
        let samples = lf.sample(Window::new(-2.0, 2.0), 10).expect("graph sampling");
        for g in samples {
            let on = rel(lf.eval(g).abs(), g.v.norm());
            let (_, gv) = lf.gradient(g);
            let dir = gv.normalized().expect("A invertible keeps the fiber gradient nonzero");
            let off = GroupElement::new(g.t, g.v + dir * 0.1);
            // F is affine along the fiber, so the step changes it by exactly
            // 0.1·|∂_v F|; anything clearly smaller flags a bad gradient.
            let short = (0.1 * gv.norm() * 0.999 - lf.eval(off).abs()).max(0.0);
            c.case(on.max(rel(short, gv.norm())), g.v.norm(), || {
                format!("{:?}, g = {g:?}", ars.field())
            });
        }
    }
    c.finish()
}

fn prop_locus_gradient(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("locus gradient matches finite differences", 1e-6);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let h = 1e-6;
    for i in 0..cases {
        let rank = [None, Some(0), Some(2)][i % 3];
        let ars = s.valid_ars(None, rank);
        let lf = LocusFunction::new(&ars);
        let g = s.group_element();
        let (dt, dv) = lf.gradient(g);
        let fd_t = (lf.eval(GroupElement::new(g.t + h, g.v))
            - lf.eval(GroupElement::new(g.t - h, g.v)))
            / (2.0 * h);
        let ex = Vec2::new(1.0, 0.0);
        let ey = Vec2::new(0.0, 1.0);
        let fd_x = (lf.eval(GroupElement::new(g.t, g.v + ex * h))
            - lf.eval(GroupElement::new(g.t, g.v - ex * h)))
            / (2.0 * h);
        let fd_y = (lf.eval(GroupElement::new(g.t, g.v + ey * h))
            - lf.eval(GroupElement::new(g.t, g.v - ey * h)))
            / (2.0 * h);
        let scale = dt.abs() + dv.norm();
        let residual = (fd_t - dt).abs().max((fd_x - dv.x).abs()).max((fd_y - dv.y).abs());
        c.case(rel(residual, scale), g.v.norm(), || format!("{:?}, g = {g:?}", ars.field()));
    }
    c.finish()
}

fn prop_regular_value_audit(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("zero is a regular value along sampled loci", 0.5);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 250).max(2);
    for _ in 0..n {
        let ars = s.valid_ars(None, Some(2));
        let lf = LocusFunction::new(&ars);
        let samples = lf.sample(Window::new(-2.0, 2.0), 32).expect("graph sampling");
        let count = samples.len();
        match lf.regular_value_audit(&samples, 1e-8) {
            Ok(report) => {
                let bad = !report.violations.is_empty() || !(report.min_grad_norm > 0.0);
                c.case(flag(bad), count as f64, || {
                    format!(
                        "{:?}: {} violations, min gradient {:.3e}",
                        ars.field(),
                        report.violations.len(),
                        report.min_grad_norm
                    )
                });
            }
            Err(e) => c.case(1.0, count as f64, || format!("{:?}: {e}", ars.field())),
        }
    }
    c.finish()
}

fn prop_plane_stack_times(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("plane-stack times are zeros of the restricted scalar", 1e-8);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 20).max(5);
    for _ in 0..n {
        let ars = s.valid_ars(None, Some(0));
        let lf = LocusFunction::new(&ars);
        let desc = lf.describe(Window::new(-6.0, 6.0)).expect("A = 0 always describes");
        let LocusShape::PlaneStack { times, .. } = &desc.shape else {
            c.case(1.0, 0.0, || format!("{:?}: expected a plane stack", ars.field()));
            continue;
        };
        let mut residual = 0.0f64;
        for pt in times {
            // F is v-independent here; evaluate on the axis.
            residual = residual.max(lf.eval(GroupElement::new(pt.t, Vec2::zero())).abs());
        }
        let count_ok = match desc.component_count {
            crate::locus::ComponentCount::Finite(k) => k == times.len(),
            crate::locus::ComponentCount::Infinite => true,
        };
        if !count_ok {
            residual = 1.0;
        }
        c.case(residual, ars.field().xi().norm(), || {
            format!("{:?}: times {times:?}", ars.field())
        });
    }
    c.finish()
}

// ---------------------------------------------------------------------------
// crossing suite
// ---------------------------------------------------------------------------

fn prop_crossing_closed_form(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("restriction of F to exponential curves matches the closed form", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 5).max(10);
    for i in 0..n {
        let rank = [None, Some(0), Some(1), Some(2)][i % 4];
        let ars = if rank == Some(1) {
            let th = if i % 2 == 0 {
                Theta::jordan()
            } else {
                Theta::diagonal(s.f(-1.0, 1.0)).expect("lambda in range")
            };
            s.valid_ars(Some(th), Some(1))
        } else {
            s.valid_ars(None, rank)
        };
        let lf = LocusFunction::new(&ars);
        let th = ars.theta();
        let g = s.group_element();
        let y = if i % 3 == 0 {
            AlgebraElement::new(0.0, s.vec2(2.0))
        } else {
            s.algebra_element()
        };
        let reduced = exp_curve_reduce(&ars, g, y);
        for _ in 0..5 {
            let t = s.f(-2.0, 2.0);
            let direct = lf.eval(th.mul(g, th.exp(y * t)));
            let closed = exp_curve_value(&ars, g, y, t);
            let r = (closed - direct).abs().max((reduced.eval(t) - direct).abs());
            c.case(rel(r, direct.abs()), g.v.norm() + y.norm(), || {
                format!("{:?}, g = {g:?}, Y = {y:?}, s = {t}", ars.field())
            });
        }
    }
    c.finish()
}

/// Count strict sign changes of `curve` on a dense uniform grid.
fn sign_scan_oracle(curve: &ScalarCurve, window: Window, points: usize) -> usize {
    let mut count = 0;
    let mut prev = curve.eval(window.lo);
    for i in 1..points {
        let x = window.lo + window.len() * (i as f64) / ((points - 1) as f64);
        let y = curve.eval(x);
        if prev != 0.0 && y != 0.0 && (prev < 0.0) != (y < 0.0) {
            count += 1;
        }
        if y != 0.0 {
            prev = y;
        }
    }
    count
}

fn prop_zero_count_ceilings(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("zero counts respect the analytic ceilings and a dense scan", 0.5);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let window = Window::new(-20.0, 20.0);
    for i in 0..cases {
        let curve = match i % 3 {
            0 => {
                // Distinct nonzero exponents with a real gap, so the two
                // exponentials cannot collapse into each other or into the
                // constant term.
                let (l1, l2) = loop {
                    let l1 = s.nonzero(0.05, 1.2);
                    let l2 = s.nonzero(0.05, 1.2);
                    if (l1 - l2).abs() >= 0.1 {
                        break (l1, l2);
                    }
                };
                ScalarCurve::ExpPoly {
                    a: s.nonzero(0.1, 2.0),
                    b: if i % 6 == 0 { 0.0 } else { s.nonzero(0.1, 2.0) },
                    c: s.f(-2.5, 2.5),
                    lambda1: l1,
                    lambda2: l2,
                }
            }
            1 => ScalarCurve::ExpLinear {
                a: s.nonzero(0.1, 2.0),
                b: s.f(-2.0, 2.0),
                c: s.f(-2.5, 2.5),
                lambda: s.nonzero(0.05, 1.2),
            },
            _ => ScalarCurve::ExpCos {
                amplitude: s.nonzero(0.2, 2.0),
                lambda: if i % 6 == 2 { 0.0 } else { s.nonzero(0.05, 0.8) },
                mu: s.f(0.2, 3.0),
                phase: s.f(-PI, PI),
                c: s.f(-2.5, 2.5),
            },
        };
        let report = crate::crossing::zero_classify(&curve, window, 1e-9);
        let oracle = sign_scan_oracle(&curve, window, 10_000);
        let crossing_zeros =
            report.zeros_in_window.iter().filter(|z| z.sign_change).count();
        let total = report.zeros_in_window.len();
        let ceiling_ok = match report.classification {
            ZeroClassification::FiniteZeros { max_count } => total <= max_count,
            _ => true,
        };
        let bad = crossing_zeros != oracle || !ceiling_ok;
        c.case(flag(bad), 1.0, || {
            format!(
                "{curve:?}: scan found {oracle} crossings, classifier {crossing_zeros} \
                 (total {total}, class {:?})",
                report.classification
            )
        });
    }
    c.finish()
}

fn prop_identically_zero_detection(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("vanishing curves are exactly the eigen-orthogonal pairings", 0.5);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let window = Window::new(-5.0, 5.0);
    for i in 0..cases {
        let m = s.matrix_of_kind(i);
        let (u, v) = if i % 2 == 0 {
            (s.nonzero_vec2(2.0), s.nonzero_vec2(2.0))
        } else {
            // Constructed positive case: u a real eigenvector of Mᵀ (when
            // one exists), v orthogonal to u.
            let mt = m.transpose();
            let kind = crate::linalg2::classify(&mt, 1e-9).expect("finite matrix");
            let eig = match kind {
                crate::linalg2::EigenKind::RealDistinct { lambda2, .. } => {
                    let probe = (mt - Mat2::identity() * lambda2) * s.nonzero_vec2(1.0);
                    probe.normalized()
                }
                crate::linalg2::EigenKind::RealRepeated { lambda, .. } => {
                    let n = mt - Mat2::identity() * lambda;
                    // Kernel direction of the nilpotent part (or anything
                    // for the diagonalizable case).
                    let k = Vec2::new(n.a12, -n.a11);
                    let k = if k.norm() > 1e-9 { k } else { Vec2::new(n.a22, -n.a21) };
                    k.normalized().or(Some(Vec2::new(1.0, 0.0)))
                }
                crate::linalg2::EigenKind::ComplexPair { .. } => None,
            };
            match eig {
                Some(u) => (u * s.nonzero(0.3, 2.0), u.perp() * s.nonzero(0.3, 2.0)),
                None => (s.nonzero_vec2(2.0), s.nonzero_vec2(2.0)),
            }
        };
        let mt_u = m.transpose() * u;
        let predicted = mt_u.cross(&u).abs() <= 1e-9 * (1.0 + mt_u.norm()) * u.norm()
            && u.dot(&v).abs() <= 1e-9 * (1.0 + u.norm() * v.norm());
        let curve = ScalarCurve::MatExpForm { a_mat: m, u, v, tau: 0.0 };
        let classified = crate::crossing::zero_classify(&curve, window, 1e-9).classification
            == ZeroClassification::IdenticallyZero;
        c.case(flag(predicted != classified), u.norm() + v.norm(), || {
            format!("M = {m:?}, u = {u:?}, v = {v:?}: predicted {predicted}, got {classified}")
        });
    }
    c.finish()
}

fn prop_on_locus_dichotomy(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("curves from locus points vanish identically or isolate zero", 0.5);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let window = Window::new(-3.0, 3.0);
    let n = (cases / 10).max(10);
    for i in 0..n {
        let rank = if i % 3 == 0 { Some(1) } else { Some(2) };
        let ars = if rank == Some(1) {
            let th = if i % 2 == 0 {
                Theta::jordan()
            } else {
                Theta::diagonal(s.f(-1.0, 1.0)).expect("lambda in range")
            };
            s.valid_ars(Some(th), Some(1))
        } else {
            s.valid_ars(None, Some(2))
        };
        let lf = LocusFunction::new(&ars);
        let g = s.on_locus_point(&lf);
        let y = if i % 2 == 0 {
            // A direction whose image under A lies inside the line kills
            // the curve identically.
            let a = ars.field().a_mat();
            let w = match a.inverse() {
                Some(ainv) => ainv * ars.line().direction,
                None => {
                    // rank one: the kernel direction works.
                    let r1 = Vec2::new(a.a11, a.a12);
                    let r2 = Vec2::new(a.a21, a.a22);
                    let row = if r1.norm() >= r2.norm() { r1 } else { r2 };
                    row.perp().normalized().expect("rank-one has a nonzero row")
                }
            };
            AlgebraElement::new(0.0, w)
        } else {
            s.algebra_element()
        };
        let profile = exp_curve_profile(&ars, g, y, window);
        let curve_scale = 1.0 + g.v.norm() + y.norm();
        let bad = match profile.behavior {
            CrossingBehavior::RemainsInLocus => {
                // Identically zero must survive a dense direct evaluation.
                let mut max = 0.0f64;
                for k in 0..=1000 {
                    let t = window.lo + window.len() * (k as f64) / 1000.0;
                    max = max.max(exp_curve_value(&ars, g, y, t).abs());
                }
                max > 1e-7 * curve_scale
            }
            _ => {
                // The zero at s = 0 must be isolated: no vanishing on a
                // punctured neighborhood up to the next reported zero.
                let delta = profile.isolation_radius().unwrap_or(window.hi).min(window.hi);
                let mut bad = false;
                for side in [-1.0, 1.0] {
                    let mut sign = 0.0f64;
                    for k in 1..=100 {
                        let t = side * delta * (0.01 + 0.97 * (k as f64) / 100.0);
                        let val = exp_curve_value(&ars, g, y, t);
                        if val == 0.0 {
                            bad = true;
                        } else if sign == 0.0 {
                            sign = val.signum();
                        } else if val.signum() != sign {
                            bad = true;
                        }
                    }
                }
                bad
            }
        };
        c.case(flag(bad), g.v.norm() + y.norm(), || {
            format!("{:?}, g = {g:?}, Y = {y:?}, behavior {:?}", ars.field(), profile.behavior)
        });
    }
    c.finish()
}

fn prop_off_locus_trichotomy(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("curves from points off the locus never report locus confinement", 0.5);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let window = Window::new(-3.0, 3.0);
    let n = (cases / 2).max(10);
    for i in 0..n {
        let ars = s.valid_ars(None, None);
        let lf = LocusFunction::new(&ars);
        let g = s.off_locus_point(&lf, 1e-6);
        let y = if i % 3 == 0 {
            AlgebraElement::new(0.0, s.vec2(2.0))
        } else {
            s.algebra_element()
        };
        let profile = exp_curve_profile(&ars, g, y, window);
        let bad = profile.behavior == CrossingBehavior::RemainsInLocus;
        c.case(flag(bad), g.v.norm() + y.norm(), || {
            format!("{:?}, g = {g:?}, Y = {y:?}", ars.field())
        });
    }
    c.finish()
}

fn prop_flow_restriction_matches(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("flow restriction curve equals F along the flow", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 5).max(10);
    for _ in 0..n {
        let ars = s.valid_ars(None, None);
        let lf = LocusFunction::new(&ars);
        let g = s.group_element();
        let curve = flow_curve(&ars, g);
        for _ in 0..5 {
            let t = s.f(-2.5, 2.5);
            let direct = lf.eval(ars.field().flow(t, g));
            c.case(rel((curve.eval(t) - direct).abs(), direct.abs()), g.v.norm(), || {
                format!("{:?}, g = {g:?}, s = {t}", ars.field())
            });
        }
    }
    c.finish()
}

fn prop_flow_eigenline_confinement(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("flows confined to the locus when the line is A-invariant", 0.5);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let window = Window::new(-3.0, 3.0);
    let n = (cases / 10).max(10);
    let mut done = 0;
    while done < n {
        // Structures whose distinguished line R·e1 is a joint eigenline:
        // basis {(1,0), (0,e1)} and a commutant matrix fixing R·e1.
        let th = match done % 3 {
            0 => Theta::jordan(),
            1 => Theta::diagonal(s.f(-1.0, 1.0)).expect("lambda in range"),
            _ => Theta::complex(s.f(-1.0, 1.0)).expect("lambda in range"),
        };
        // Commutant matrices fixing R·e1, with the entry that feeds the
        // fiber gradient bounded away from zero so locus points exist.
        let a = match th.kind() {
            ThetaKind::Jordan => {
                let d = s.nonzero(0.3, 1.5);
                Mat2::new(d, s.f(-1.5, 1.5), 0.0, d)
            }
            ThetaKind::Diagonal(_) => Mat2::diagonal(s.f(-1.5, 1.5), s.nonzero(0.3, 1.5)),
            // aI + bJ fixes a real line only when b = 0.
            ThetaKind::Complex(_) => Mat2::identity() * s.nonzero(0.3, 1.5),
        };
        let xi = Vec2::new(s.f(-1.5, 1.5), s.nonzero(0.3, 1.5));
        let Ok(field) = LinearField::new(th, xi, a, 1e-9) else { continue };
        let dist = Distribution::orthonormal_frame([
            AlgebraElement::new(1.0, Vec2::zero()),
            AlgebraElement::new(0.0, Vec2::new(1.0, 0.0)),
        ])
        .expect("independent pair");
        let Ok(ars) = SimpleARS::new(field, dist) else { continue };
        let lf = LocusFunction::new(&ars);
        let g_on = s.on_locus_point(&lf);
        let on = flow_crossing(&ars, g_on, window);
        let mut bad = on.behavior != CrossingBehavior::RemainsInLocus;
        for k in 0..=1000 {
            let t = window.lo + window.len() * (k as f64) / 1000.0;
            let moved = ars.field().flow(t, g_on);
            if lf.eval(moved).abs() > 1e-7 * (1.0 + moved.v.norm()) {
                bad = true;
                break;
            }
        }
        let g_off = s.off_locus_point(&lf, 1e-3);
        let off = flow_crossing(&ars, g_off, window);
        if off.behavior != CrossingBehavior::StaysInComponent {
            bad = true;
        }
        c.case(flag(bad), g_on.v.norm(), || {
            format!(
                "{:?}, on-locus {:?} gave {:?}, off-locus {:?} gave {:?}",
                ars.field(),
                g_on,
                on.behavior,
                g_off,
                off.behavior
            )
        });
        done += 1;
    }
    c.finish()
}

// ---------------------------------------------------------------------------
// covering suite
// ---------------------------------------------------------------------------

fn rotation_theta() -> Theta {
    Theta::complex(0.0).expect("lambda in range")
}

fn prop_projection_homomorphism(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("projection to the quotient is a homomorphism", 1e-10);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let th = rotation_theta();
    for _ in 0..cases {
        let (g, h) = (s.group_element(), s.group_element());
        let lhs = covering::project(&th, th.mul(g, h)).expect("rotation family");
        let rhs = covering::quotient_mul(
            &th,
            covering::project(&th, g).expect("rotation family"),
            covering::project(&th, h).expect("rotation family"),
        )
        .expect("rotation family");
        c.case(rel(lhs.distance(&rhs), lhs.v.norm()), g.v.norm() + h.v.norm(), || {
            format!("g = {g:?}, h = {h:?}")
        });
    }
    c.finish()
}

fn prop_locus_period_invariance(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("locus membership depends only on t modulo the period", 1e-9);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let n = (cases / 10).max(5);
    for i in 0..n {
        let rank = [None, Some(0), Some(2)][i % 3];
        let ars = s.valid_ars(Some(rotation_theta()), rank);
        let lf = LocusFunction::new(&ars);
        for _ in 0..10 {
            let g = s.group_element();
            let f0 = lf.eval(g);
            let mut residual = 0.0f64;
            for k in -2i32..=2 {
                let shifted = GroupElement::new(g.t + 2.0 * PI * k as f64, g.v);
                residual = residual.max((lf.eval(shifted) - f0).abs());
            }
            c.case(rel(residual, f0.abs()), g.v.norm(), || {
                format!("{:?}, g = {g:?}", ars.field())
            });
        }
    }
    c.finish()
}

fn prop_flow_projection_commutes(seed: u64, cases: usize) -> PropertyResult {
    let mut c = Check::new("flows descend through the projection", 0.5);
    let mut s = Sampler::new(property_seed(seed, c.name));
    let th = rotation_theta();
    for _ in 0..cases {
        let a = s.commuting(&th, 1.5);
        let field = LinearField::new(th, s.vec2(1.5), a, 1e-9).expect("commutant element");
        let (t, g) = (s.f(-2.5, 2.5), s.group_element());
        let ok = covering::flow_descends(&field, t, g).expect("rotation family");
        c.case(flag(!ok), g.v.norm(), || format!("X = {field:?}, s = {t}, g = {g:?}"));
    }
    c.finish()
}

fn prop_bundled_rotation_scenarios_descend(_seed: u64, _cases: usize) -> PropertyResult {
    let mut c = Check::new("bundled rotation scenarios have periodic loci", 1e-9);
    for (name, sc) in crate::scenario::bundled() {
        let Ok(ars) = sc.build() else {
            c.case(1.0, 0.0, || format!("{name}: scenario failed to build"));
            continue;
        };
        if ars.theta().kind() != (ThetaKind::Complex(0.0)) {
            continue;
        }
        let report = covering::locus_descends(&ars).expect("rotation family");
        c.case(report.max_residual, 1.0, || {
            format!("{name}: worst period residual {:.3e}", report.max_residual)
        });
        if !report.descends {
            c.case(1.0, 0.0, || format!("{name}: descent flag false"));
        }
    }
    c.finish()
}

// ---------------------------------------------------------------------------
// runners
// ---------------------------------------------------------------------------

pub fn run_suite(suite: Suite, seed: u64, cases: usize) -> SuiteReport {
    let cases = cases.max(1);
    let results = match suite {
        Suite::Lambda => vec![
            prop_lambda_zero(seed, cases),
            prop_lambda_derivative(seed, cases),
            prop_lambda_cocycle(seed, cases),
            prop_lambda_fundamental(seed, cases),
            prop_lambda_commutes(seed, cases),
            prop_lambda_invertible_form(seed, cases),
            prop_lambda_rank_deficient_form(seed, cases),
            prop_lambda_oracle(seed, cases),
        ],
        Suite::Group => vec![
            prop_group_associative(seed, cases),
            prop_group_inverse(seed, cases),
            prop_group_exp_one_parameter(seed, cases),
            prop_group_exp_ode_oracle(seed, cases),
            prop_group_invariant_fields(seed, cases),
        ],
        Suite::Symmetry => vec![
            prop_flow_automorphism(seed, cases),
            prop_flow_derivative(seed, cases),
            prop_flow_semigroup(seed, cases),
            prop_derivation_exponential(seed, cases),
            prop_flow_fixes_singularities(seed, cases),
        ],
        Suite::Ars => vec![
            prop_pushforward_isometry(seed, cases),
            prop_pushforward_conjugates_field(seed, cases),
            prop_theta_line_forces_a_line(seed, cases),
            prop_ar_norm_along_distribution(seed, cases),
            prop_normalization_exactness(seed, cases),
        ],
        Suite::Locus => vec![
            prop_h_map_flattens(seed, cases),
            prop_i_map_flattens(seed, cases),
            prop_graph_round_trips(seed, cases),
            prop_locus_samples(seed, cases),
            prop_locus_gradient(seed, cases),
            prop_regular_value_audit(seed, cases),
            prop_plane_stack_times(seed, cases),
        ],
        Suite::Crossing => vec![
            prop_crossing_closed_form(seed, cases),
            prop_zero_count_ceilings(seed, cases),
            prop_identically_zero_detection(seed, cases),
            prop_on_locus_dichotomy(seed, cases),
            prop_off_locus_trichotomy(seed, cases),
            prop_flow_restriction_matches(seed, cases),
            prop_flow_eigenline_confinement(seed, cases),
        ],
        Suite::Covering => vec![
            prop_projection_homomorphism(seed, cases),
            prop_locus_period_invariance(seed, cases),
            prop_flow_projection_commutes(seed, cases),
            prop_bundled_rotation_scenarios_descend(seed, cases),
        ],
    };
    SuiteReport { suite, results }
}

pub fn run_suites(suites: &[Suite], seed: u64, cases: usize) -> Vec<SuiteReport> {
    suites.iter().map(|s| run_suite(*s, seed, cases)).collect()
}
