//! Coefficient tables for propagating a second-order recursion.
//!
//! With `S0 = A0`, `P0 = A1`, `Sk = P(k-1) A0`, `Pk = S(k-1) + P(k-1) A1`, the
//! state two steps past `k` is `x[k+2] = Sk x0 + Pk x1 + (input terms)`, and
//! the input terms use `M0 = B`, `M1 = A1 B`, `Mk = A0 M(k-2) + A1 M(k-1)`.

use crate::error::{Error, Result};
use crate::matcore::RealMatrix;
use crate::sysmodel::SecondOrderSystem;

/// `S0..=S(k_max)` and `P0..=P(k_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpTable {
    pub s: Vec<RealMatrix>,
    pub p: Vec<RealMatrix>,
}

impl SpTable {
    pub fn k_max(&self) -> usize {
        self.s.len() - 1
    }
}

/// `M0..=M(k_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MTable {
    pub m: Vec<RealMatrix>,
}

fn check_square_pair(a0: &RealMatrix, a1: &RealMatrix) -> Result<usize> {
    if !a0.is_square() || a0.shape() != a1.shape() {
        return Err(Error::Dimension(format!(
            "A0 is {}x{} and A1 is {}x{}; both must be n x n",
            a0.nrows(),
            a0.ncols(),
            a1.nrows(),
            a1.ncols()
        )));
    }
    Ok(a0.nrows())
}

pub fn sp_sequence(a0: &RealMatrix, a1: &RealMatrix, k_max: usize) -> Result<SpTable> {
    check_square_pair(a0, a1)?;
    let mut s = Vec::with_capacity(k_max + 1);
    let mut p = Vec::with_capacity(k_max + 1);
    s.push(a0.clone());
    p.push(a1.clone());
    for k in 1..=k_max {
        let sk = &p[k - 1] * a0;
        let pk = &s[k - 1] + &(&p[k - 1] * a1);
        s.push(sk);
        p.push(pk);
    }
    Ok(SpTable { s, p })
}

pub fn m_sequence(a0: &RealMatrix, a1: &RealMatrix, b: &RealMatrix, k_max: usize) -> Result<MTable> {
    let n = check_square_pair(a0, a1)?;
    if b.nrows() != n {
        return Err(Error::Dimension(format!(
            "B has {} rows, expected {n}",
            b.nrows()
        )));
    }
    let mut m = Vec::with_capacity(k_max + 1);
    m.push(b.clone());
    if k_max >= 1 {
        m.push(a1 * b);
    }
    for k in 2..=k_max {
        let mk = &(a0 * &m[k - 2]) + &(a1 * &m[k - 1]);
        m.push(mk);
    }
    Ok(MTable { m })
}

/// First-order lift of a second-order system onto `v = (x, x')`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionLift {
    /// `[[0, E], [A0, A1]]`, 2n x 2n.
    pub a_tilde: RealMatrix,
    /// `[[0], [B]]`, 2n x r.
    pub b_tilde: RealMatrix,
    /// `[C, 0]`, p x 2n.
    pub c_tilde: RealMatrix,
}

pub fn companion_lift(sys: &SecondOrderSystem) -> CompanionLift {
    let n = sys.n;
    let top = RealMatrix::hstack(&[&RealMatrix::zeros(n, n), &RealMatrix::identity(n)])
        .expect("matching row counts");
    let bottom = RealMatrix::hstack(&[&sys.a0, &sys.a1]).expect("validated system");
    let a_tilde = RealMatrix::vstack(&[&top, &bottom]).expect("matching column counts");
    let b_tilde = RealMatrix::vstack(&[&RealMatrix::zeros(n, sys.r), &sys.b]).expect("validated system");
    let c_tilde = RealMatrix::hstack(&[&sys.c, &RealMatrix::zeros(sys.p, n)]).expect("validated system");
    CompanionLift {
        a_tilde,
        b_tilde,
        c_tilde,
    }
}
