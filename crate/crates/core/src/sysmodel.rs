//! Second-order system model, its JSON file format, and the dual transform.
//!
//! A system is `x'' = A0 x + A1 x' + B u`, `y = C x` (continuous) or
//! `x[t+2] = A0 x[t] + A1 x[t+1] + B u[t]`, `y[t] = C x[t]` (discrete).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::RealMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeKind {
    Discrete,
    Continuous,
}

impl TimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TimeKind::Discrete => "discrete",
            TimeKind::Continuous => "continuous",
        }
    }
}

impl fmt::Display for TimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Second-order LTI system `(A0, A1, B, C)` with dimensions `(n, r, p)`.
///
/// Fields are public; [`SecondOrderSystem::validate`] re-checks the shape and
/// finiteness invariants after any manual edit.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderSystem {
    pub kind: TimeKind,
    pub n: usize,
    pub r: usize,
    pub p: usize,
    pub a0: RealMatrix,
    pub a1: RealMatrix,
    pub b: RealMatrix,
    pub c: RealMatrix,
}

/// One failed invariant, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Unknown initial pair `(x0, x1)`: positions at t = 0, 1 (discrete) or
/// `(x(0), x'(0))` (continuous).
#[derive(Debug, Clone, PartialEq)]
pub struct StateSnapshot {
    pub x0: Vec<f64>,
    pub x1: Vec<f64>,
}

impl StateSnapshot {
    pub fn new(x0: Vec<f64>, x1: Vec<f64>) -> Result<Self> {
        if x0.len() != x1.len() {
            return Err(Error::Dimension(format!(
                "x0 has {} entries, x1 has {}",
                x0.len(),
                x1.len()
            )));
        }
        if x0.iter().chain(&x1).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("initial state".into()));
        }
        Ok(Self { x0, x1 })
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    /// `(x0; x1)` as a single column.
    pub fn stacked(&self) -> Vec<f64> {
        self.x0.iter().chain(&self.x1).copied().collect()
    }
}

impl SecondOrderSystem {
    /// Builds a system, inferring `(n, r, p)` from the matrices and validating.
    pub fn new(
        kind: TimeKind,
        a0: RealMatrix,
        a1: RealMatrix,
        b: RealMatrix,
        c: RealMatrix,
    ) -> Result<Self> {
        let sys = Self {
            kind,
            n: a0.nrows(),
            r: b.ncols(),
            p: c.nrows(),
            a0,
            a1,
            b,
            c,
        };
        sys.check()?;
        Ok(sys)
    }

    /// All invariant violations; empty when the system is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n == 0 {
            out.push(Violation {
                field: "n",
                message: "state dimension must be positive".into(),
            });
        }
        if self.p == 0 {
            out.push(Violation {
                field: "p",
                message: "output dimension must be positive".into(),
            });
        }
        let expected = [
            ("a0", &self.a0, (self.n, self.n)),
            ("a1", &self.a1, (self.n, self.n)),
            ("b", &self.b, (self.n, self.r)),
            ("c", &self.c, (self.p, self.n)),
        ];
        for (field, m, shape) in expected {
            if m.shape() != shape {
                out.push(Violation {
                    field,
                    message: format!(
                        "shape {}x{} does not match expected {}x{}",
                        m.nrows(),
                        m.ncols(),
                        shape.0,
                        shape.1
                    ),
                });
            }
            if !m.is_finite() {
                out.push(Violation {
                    field,
                    message: "contains a non-finite entry".into(),
                });
            }
        }
        out
    }

    /// [`validate`](Self::validate) folded into a single error.
    pub fn check(&self) -> Result<()> {
        let violations = self.validate();
        let Some(first) = violations.first() else {
            return Ok(());
        };
        let msg = violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        if violations.iter().all(|v| v.message.contains("non-finite")) {
            Err(Error::NonFinite(first.field.to_string()))
        } else {
            Err(Error::Dimension(msg))
        }
    }

    /// True when the system has no effective input (r = 0 or B identically zero).
    pub fn is_input_free(&self) -> bool {
        self.r == 0 || self.b.is_zero()
    }

    /// Parses and validates a system document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SystemDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_system()
    }

    /// Canonical JSON rendering (pretty-printed, newline-terminated).
    pub fn to_json(&self) -> String {
        let doc = SystemDocument::from(self);
        let mut s = serde_json::to_string_pretty(&doc).expect("system serializes");
        s.push('\n');
        s
    }
}

/// Reads a system from its JSON text.
pub fn load_system(text: &str) -> Result<SecondOrderSystem> {
    SecondOrderSystem::from_json(text)
}

/// Dual system `(A0ᵀ, -A1ᵀ, Cᵀ, Bᵀ)` with dimensions `(n, p, r)`.
///
/// The same sign convention is used for both time kinds. An input-free
/// system (r = 0) maps to a system with no outputs, which does not validate.
pub fn dual_system(sys: &SecondOrderSystem) -> SecondOrderSystem {
    SecondOrderSystem {
        kind: sys.kind,
        n: sys.n,
        r: sys.p,
        p: sys.r,
        a0: sys.a0.transpose(),
        a1: -&sys.a1.transpose(),
        b: sys.c.transpose(),
        c: sys.b.transpose(),
    }
}

/// On-disk layout. Matrices are nested row arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDocument {
    kind: TimeKind,
    n: usize,
    r: usize,
    p: usize,
    a0: Vec<Vec<f64>>,
    a1: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    c: Vec<Vec<f64>>,
}

impl SystemDocument {
    fn into_system(self) -> Result<SecondOrderSystem> {
        let field = |name: &str, rows: &[Vec<f64>]| {
            RealMatrix::from_rows(rows).map_err(|e| match e {
                Error::Dimension(m) => Error::Dimension(format!("{name}: {m}")),
                Error::NonFinite(_) => Error::NonFinite(name.to_string()),
                other => other,
            })
        };
        let a0 = field("a0", &self.a0)?;
        let a1 = field("a1", &self.a1)?;
        // `"b": []` is accepted as the n x 0 matrix of an input-free system.
        let b = if self.r == 0 && self.b.is_empty() {
            RealMatrix::zeros(self.n, 0)
        } else {
            field("b", &self.b)?
        };
        let c = field("c", &self.c)?;
        let sys = SecondOrderSystem {
            kind: self.kind,
            n: self.n,
            r: self.r,
            p: self.p,
            a0,
            a1,
            b,
            c,
        };
        sys.check()?;
        Ok(sys)
    }
}

impl From<&SecondOrderSystem> for SystemDocument {
    fn from(sys: &SecondOrderSystem) -> Self {
        Self {
            kind: sys.kind,
            n: sys.n,
            r: sys.r,
            p: sys.p,
            a0: sys.a0.to_rows(),
            a1: sys.a1.to_rows(),
            b: sys.b.to_rows(),
            c: sys.c.to_rows(),
        }
    }
}
