//! Solvable, nonnilpotent 3D Lie groups `G = R ⋉ R²` built from a 2x2
//! structure matrix, together with simple almost-Riemannian structures on
//! them: singular loci, their parametrizations, and crossing analysis for
//! exponential curves and flows.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg2`] - closed-form 2x2 spectral calculus (`e^{tM}` and the
//!   integral operator `Λ_t = ∫_0^t e^{sM} ds`),
//! * [`group`] - the semidirect product law, exponential map, invariant
//!   vector fields,
//! * [`symmetry`] - derivations, automorphisms and linear vector fields,
//! * [`ars`] - distributions, the rank-deficiency line, the local algebra
//!   rank condition, almost-Riemannian norms, normalizations,
//! * [`locus`] - the scalar equation cutting out the singular locus, its
//!   regularity audit and global parametrizations,
//! * [`crossing`] - scalar curve classification (how exponential curves and
//!   flows meet the locus),
//! * [`covering`] - the compact-fiber quotient available in the rotation
//!   case,
//! * [`scenario`] / [`cli`] / [`verify`] - JSON scenarios, the `ars3d`
//!   command line tool and the randomized property-checking suites behind
//!   `ars3d verify`.

pub mod linalg2;
pub mod group;
pub mod symmetry;
pub mod ars;
pub mod locus;
pub mod crossing;
pub mod covering;
pub mod scenario;
pub mod verify;
pub mod cli;

pub use crate::linalg2::{EigenKind, Mat2, Vec2};
pub use crate::group::{AlgebraElement, GroupElement, Tangent, Theta, ThetaKind};

/// Errors shared by every layer of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular matrix (det = {0:.3e})")]
    SingularMatrix(f64),
    #[error("not a linear field: A does not commute with theta (residual {0:.3e})")]
    InvalidLinearField(f64),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),
    #[error("rank condition fails: {0}")]
    LarcFailed(String),
    #[error("no witness point with the field outside the translated distribution")]
    WitnessNotFound,
    #[error("cannot normalize: {0}")]
    CannotNormalize(String),
    #[error("sample {index} is not on the locus (|F| = {value:.3e})")]
    SampleNotOnLocus { index: usize, value: f64 },
    #[error("locus description has the wrong shape: {0}")]
    WrongShape(&'static str),
    #[error("unsupported structure matrix: {0}")]
    UnsupportedTheta(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A closed interval of parameter values. `lo > hi` is treated as empty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Self {
        Window { lo, hi }
    }

    pub fn len(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Numeric policy knobs threaded from scenarios down to the solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Residual allowed in structural constraints (commutation, gram
    /// symmetry, subalgebra and membership tests).
    pub constraint: f64,
    /// Band half-width for "this point sits on the locus" decisions,
    /// scaled by `1 + |v|`.
    pub locus: f64,
    /// Bisection refinement target for isolated zeros of scalar curves.
    pub zero_scan: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            constraint: 1e-9,
            locus: 1e-9,
            zero_scan: 1e-12,
        }
    }
}
