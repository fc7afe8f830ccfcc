//! JSON scenario files: the on-disk description of a structure that the
//! command line tool consumes.
//!
//! A scenario packs the structure matrix family, the linear field data
//! `(ξ, A)`, the distribution basis (rows `[σ, u1, u2]` meaning
//! `σ·∂t + u1·e1 + u2·e2`) with an optional gram matrix, and optional
//! tolerance overrides. `gram` defaults to the identity, i.e. the basis is
//! declared orthonormal.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ars::{Distribution, SimpleARS};
use crate::group::{AlgebraElement, Theta};
use crate::linalg2::{Mat2, Vec2};
use crate::symmetry::LinearField;
use crate::{Error, Result, Tolerances};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaSpec {
    /// Two algebra elements, each a row `[sigma, u1, u2]`.
    pub basis: [[f64; 3]; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<[[f64; 2]; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus: Option<f64>,
    #[serde(default, rename = "zeroScan", skip_serializing_if = "Option::is_none")]
    pub zero_scan: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub theta: ThetaSpec,
    pub xi: [f64; 2],
    #[serde(rename = "A")]
    pub a: [[f64; 2]; 2],
    pub delta: DeltaSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceSpec>,
}

fn mat_of(rows: [[f64; 2]; 2]) -> Mat2 {
    Mat2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
}

fn rows_of(m: Mat2) -> [[f64; 2]; 2] {
    [[m.a11, m.a12], [m.a21, m.a22]]
}

impl Scenario {
    pub fn from_str(text: &str) -> Result<Scenario> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("scenario parse error: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
        })?;
        Scenario::from_str(&text)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("scenario serializes");
        out.push('\n');
        out
    }

    pub fn theta(&self) -> Result<Theta> {
        match (self.theta.kind.as_str(), self.theta.lambda) {
            ("jordan", None) => Ok(Theta::jordan()),
            ("jordan", Some(_)) => Err(Error::InvalidInput(
                "theta.lambda is not accepted for kind \"jordan\"".into(),
            )),
            ("diagonal", Some(l)) => Theta::diagonal(l),
            ("complex", Some(l)) => Theta::complex(l),
            ("diagonal", None) | ("complex", None) => Err(Error::InvalidInput(format!(
                "theta.lambda is required for kind \"{}\"",
                self.theta.kind
            ))),
            (other, _) => Err(Error::InvalidInput(format!(
                "unknown theta.kind \"{other}\" (expected jordan, diagonal or complex)"
            ))),
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(spec) = &self.tolerances {
            if let Some(c) = spec.constraint {
                tol.constraint = c;
            }
            if let Some(l) = spec.locus {
                tol.locus = l;
            }
            if let Some(z) = spec.zero_scan {
                tol.zero_scan = z;
            }
        }
        tol
    }

    /// Validates every invariant and assembles the working structure.
    pub fn build(&self) -> Result<SimpleARS> {
        let theta = self.theta()?;
        let tol = self.tolerances();
        let field = LinearField::new(
            theta,
            Vec2::new(self.xi[0], self.xi[1]),
            mat_of(self.a),
            tol.constraint,
        )?;
        let basis = [
            AlgebraElement::new(
                self.delta.basis[0][0],
                Vec2::new(self.delta.basis[0][1], self.delta.basis[0][2]),
            ),
            AlgebraElement::new(
                self.delta.basis[1][0],
                Vec2::new(self.delta.basis[1][1], self.delta.basis[1][2]),
            ),
        ];
        let gram = self.delta.gram.map(mat_of).unwrap_or_else(Mat2::identity);
        let dist = Distribution::new(basis, gram)?;
        SimpleARS::with_tolerances(field, dist, tol)
    }

    /// The scenario describing a structure that already exists in memory
    /// (used when the tool writes its bundled examples to disk).
    pub fn from_ars(ars: &SimpleARS) -> Scenario {
        let theta = ars.theta();
        let kind = match theta.kind() {
            crate::group::ThetaKind::Jordan => ThetaSpec { kind: "jordan".into(), lambda: None },
            crate::group::ThetaKind::Diagonal(l) => {
                ThetaSpec { kind: "diagonal".into(), lambda: Some(l) }
            }
            crate::group::ThetaKind::Complex(l) => {
                ThetaSpec { kind: "complex".into(), lambda: Some(l) }
            }
        };
        let basis = ars.distribution().basis();
        Scenario {
            theta: kind,
            xi: [ars.field().xi().x, ars.field().xi().y],
            a: rows_of(ars.field().a_mat()),
            delta: DeltaSpec {
                basis: [
                    [basis[0].a, basis[0].w.x, basis[0].w.y],
                    [basis[1].a, basis[1].w.x, basis[1].w.y],
                ],
                gram: Some(rows_of(ars.distribution().gram())),
            },
            tolerances: None,
        }
    }
}

/// Rotation group, `ξ = (1, 1)`, `A = 0`: the locus is a disconnected
/// stack of planes (the zero-`A` degenerate case).
pub fn example_plane_stack() -> Scenario {
    Scenario {
        theta: ThetaSpec { kind: "complex".into(), lambda: Some(0.0) },
        xi: [1.0, 1.0],
        a: [[0.0, 0.0], [0.0, 0.0]],
        delta: DeltaSpec { basis: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], gram: None },
        tolerances: None,
    }
}

/// Jordan-block group with `ξ = (1, 3)`, `A = [[2,1],[0,2]]`: the locus is
/// the connected surface `2y = 3(1 - e^t)`.
pub fn example_exponential_graph() -> Scenario {
    Scenario {
        theta: ThetaSpec { kind: "jordan".into(), lambda: None },
        xi: [1.0, 3.0],
        a: [[2.0, 1.0], [0.0, 2.0]],
        delta: DeltaSpec { basis: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], gram: None },
        tolerances: None,
    }
}

/// Rotation group with an invertible spiral `A`; exercises the covering
/// quotient together with a curved connected locus.
pub fn example_rotation_spiral() -> Scenario {
    Scenario {
        theta: ThetaSpec { kind: "complex".into(), lambda: Some(0.0) },
        xi: [0.0, 1.0],
        a: [[1.0, -1.0], [1.0, 1.0]],
        delta: DeltaSpec { basis: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], gram: None },
        tolerances: None,
    }
}

/// Every scenario shipped with the tool, with the names the `example`
/// subcommand accepts.
pub fn bundled() -> Vec<(&'static str, Scenario)> {
    vec![
        ("4.3", example_plane_stack()),
        ("4.4", example_exponential_graph()),
        ("rotation-spiral", example_rotation_spiral()),
    ]
}
