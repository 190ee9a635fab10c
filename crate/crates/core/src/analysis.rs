//! Rank criteria for observability and controllability in second-order form.
//!
//! The observability matrix stacks `[C | 0]`, `[0 | C]` and `[C Sk | C Pk]`;
//! the system is observable iff it has rank `2n`. The controllability matrix
//! is `[M0 | M1 | ... | M(n-1)]`; the system is controllable iff it has rank
//! `n`. Discrete and continuous systems share both matrices.

use std::fmt;

use crate::error::{Error, Result};
use crate::matcore::RealMatrix;
use crate::recurrences::{m_sequence, sp_sequence};
use crate::sysmodel::{SecondOrderSystem, TimeKind};

/// Outcome of one rank test.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralReport {
    pub matrix: RealMatrix,
    pub computed_rank: usize,
    pub required_rank: usize,
    pub verdict: bool,
    pub tol_rel: f64,
}

impl StructuralReport {
    fn from_matrix(matrix: RealMatrix, required_rank: usize, tol_rel: f64) -> Self {
        let computed_rank = matrix.rank(tol_rel);
        Self {
            matrix,
            computed_rank,
            required_rank,
            verdict: computed_rank == required_rank,
            tol_rel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Observability,
    Controllability,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::Observability => "observability",
            Property::Controllability => "controllability",
        }
    }
}

/// Degenerate forms in which the second-order test reduces to a Kalman test
/// on a single coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedForm {
    /// `A1 = 0`: tests use `A0`.
    PositionOnly,
    /// `A0 = 0`: tests use `A1`.
    VelocityOnly,
}

impl ReducedForm {
    pub fn as_str(self) -> &'static str {
        match self {
            ReducedForm::PositionOnly => "position-only (A1 = 0)",
            ReducedForm::VelocityOnly => "velocity-only (A0 = 0)",
        }
    }
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecialCaseVerdict {
    pub form: ReducedForm,
    pub property: Property,
    pub report: StructuralReport,
}

/// Observability matrix with `block_rows` block rows of height p.
///
/// Block rows 0 and 1 are `[C | 0]` and `[0 | C]`; block row k ≥ 2 is
/// `[C S(k-2) | C P(k-2)]`. The rank test uses `block_rows = 2n`.
pub fn observability_matrix(sys: &SecondOrderSystem, block_rows: usize) -> Result<RealMatrix> {
    if block_rows < 2 {
        return Err(Error::Parameter(format!(
            "observability matrix needs at least 2 block rows, got {block_rows}"
        )));
    }
    let (n, p) = (sys.n, sys.p);
    let zero = RealMatrix::zeros(p, n);
    let mut rows = Vec::with_capacity(block_rows);
    rows.push(RealMatrix::hstack(&[&sys.c, &zero])?);
    rows.push(RealMatrix::hstack(&[&zero, &sys.c])?);
    if block_rows > 2 {
        let table = sp_sequence(&sys.a0, &sys.a1, block_rows - 3)?;
        for (s, pk) in table.s.iter().zip(&table.p) {
            rows.push(RealMatrix::hstack(&[&(&sys.c * s), &(&sys.c * pk)])?);
        }
    }
    let refs: Vec<&RealMatrix> = rows.iter().collect();
    RealMatrix::vstack(&refs)
}

/// Controllability matrix `[M0 | ... | M(blocks-1)]`, n x (blocks·r).
pub fn controllability_matrix(sys: &SecondOrderSystem, blocks: usize) -> Result<RealMatrix> {
    if sys.r == 0 {
        return Err(Error::NoInput);
    }
    if blocks == 0 {
        return Err(Error::Parameter("controllability matrix needs at least 1 block".into()));
    }
    let table = m_sequence(&sys.a0, &sys.a1, &sys.b, blocks - 1)?;
    let refs: Vec<&RealMatrix> = table.m.iter().collect();
    RealMatrix::hstack(&refs)
}

/// Full-rank test on the 2n-block observability matrix (required rank 2n).
pub fn is_observable(sys: &SecondOrderSystem, tol_rel: f64) -> StructuralReport {
    let o = observability_matrix(sys, 2 * sys.n).expect("validated system with n >= 1");
    StructuralReport::from_matrix(o, 2 * sys.n, tol_rel)
}

/// Full-rank test on the n-block controllability matrix (required rank n).
pub fn is_controllable(sys: &SecondOrderSystem, tol_rel: f64) -> Result<StructuralReport> {
    let c = controllability_matrix(sys, sys.n)?;
    Ok(StructuralReport::from_matrix(c, sys.n, tol_rel))
}

/// Stack of `C A^k`, k = 0..blocks.
pub fn kalman_observability_matrix(a: &RealMatrix, c: &RealMatrix, blocks: usize) -> Result<RealMatrix> {
    if !a.is_square() || c.ncols() != a.nrows() {
        return Err(Error::Dimension(format!(
            "A is {}x{}, C is {}x{}",
            a.nrows(),
            a.ncols(),
            c.nrows(),
            c.ncols()
        )));
    }
    let mut rows = Vec::with_capacity(blocks);
    let mut cur = c.clone();
    for _ in 0..blocks {
        let next = &cur * a;
        rows.push(cur);
        cur = next;
    }
    let refs: Vec<&RealMatrix> = rows.iter().collect();
    if refs.is_empty() {
        return Ok(RealMatrix::zeros(0, a.ncols()));
    }
    RealMatrix::vstack(&refs)
}

/// Row of `A^k B`, k = 0..blocks.
pub fn kalman_controllability_matrix(a: &RealMatrix, b: &RealMatrix, blocks: usize) -> Result<RealMatrix> {
    if !a.is_square() || b.nrows() != a.nrows() {
        return Err(Error::Dimension(format!(
            "A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let mut cols = Vec::with_capacity(blocks);
    let mut cur = b.clone();
    for _ in 0..blocks {
        let next = a * &cur;
        cols.push(cur);
        cur = next;
    }
    let refs: Vec<&RealMatrix> = cols.iter().collect();
    if refs.is_empty() {
        return Ok(RealMatrix::zeros(a.nrows(), 0));
    }
    RealMatrix::hstack(&refs)
}

/// Kalman-form verdicts for the reduced forms that apply to `sys`.
///
/// With `A1 = 0` the tests run on `(A0, C)` and `(A0, B)`; with `A0 = 0` on
/// `(A1, C)` and `(A1, B)`. Each required rank is n. Controllability entries
/// are omitted when r = 0. An empty list means no reduced form applies.
pub fn analyze_special_cases(sys: &SecondOrderSystem, tol_rel: f64) -> Vec<SpecialCaseVerdict> {
    let mut out = Vec::new();
    let forms = [
        (ReducedForm::PositionOnly, sys.a1.is_zero(), &sys.a0),
        (ReducedForm::VelocityOnly, sys.a0.is_zero(), &sys.a1),
    ];
    for (form, applies, a) in forms {
        if !applies {
            continue;
        }
        let o = kalman_observability_matrix(a, &sys.c, sys.n).expect("validated system");
        out.push(SpecialCaseVerdict {
            form,
            property: Property::Observability,
            report: StructuralReport::from_matrix(o, sys.n, tol_rel),
        });
        if sys.r > 0 {
            let c = kalman_controllability_matrix(a, &sys.b, sys.n).expect("validated system");
            out.push(SpecialCaseVerdict {
                form,
                property: Property::Controllability,
                report: StructuralReport::from_matrix(c, sys.n, tol_rel),
            });
        }
    }
    out
}

/// Short description of the criterion applied, keyed on the time kind.
pub fn criterion_description(kind: TimeKind, property: Property) -> &'static str {
    match (kind, property) {
        (TimeKind::Discrete, Property::Observability) => {
            "initial pair (x0, x1) recoverable from y[0..2n-1] and u[0..2n-3]"
        }
        (TimeKind::Continuous, Property::Observability) => {
            "initial pair (x(0), x'(0)) recoverable from y(0)..y^(2n-1)(0) and input derivatives"
        }
        (TimeKind::Discrete, Property::Controllability) => {
            "any position x[n+1] reachable with inputs u[0..n-1]"
        }
        (TimeKind::Continuous, Property::Controllability) => {
            "input derivatives u..u^(n-1) exist for any prescribed x^(n+1) - S(n-1) x - P(n-1) x'"
        }
    }
}
