//! Discrete simulation, initial-state reconstruction and steering.

use crate::analysis::{controllability_matrix, observability_matrix};
use crate::error::{Error, Result};
use crate::matcore::RealMatrix;
use crate::recurrences::{m_sequence, sp_sequence};
use crate::sysmodel::{SecondOrderSystem, StateSnapshot, TimeKind};

/// Relative residual above which a least-squares solve is declared inconsistent.
pub const DEFAULT_CONSISTENCY_TOL: f64 = 1e-8;

/// States `x[0..=T]`, outputs `y[0..=T]`, inputs `u[0..=T-2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<Vec<f64>>,
    pub outputs: Vec<Vec<f64>>,
    pub inputs: Vec<Vec<f64>>,
}

impl Trajectory {
    /// Largest violation of `y = C x` and of the state recursion.
    pub fn max_invariant_error(&self, sys: &SecondOrderSystem) -> f64 {
        let mut err = 0.0_f64;
        for (x, y) in self.states.iter().zip(&self.outputs) {
            err = err.max(max_diff(&mat_vec(&sys.c, x), y));
        }
        for t in 0..self.states.len().saturating_sub(2) {
            let mut next = add(&mat_vec(&sys.a0, &self.states[t]), &mat_vec(&sys.a1, &self.states[t + 1]));
            if sys.r > 0 {
                next = add(&next, &mat_vec(&sys.b, &self.inputs[t]));
            }
            err = err.max(max_diff(&next, &self.states[t + 2]));
        }
        err
    }
}

/// Left-hand column of the measurement equations, length 2n·p.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementStack {
    pub z: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub snapshot: StateSnapshot,
    pub residual_norm: f64,
    pub rank: usize,
}

fn mat_vec(m: &RealMatrix, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_vectors(what: &str, data: &[Vec<f64>], len: usize) -> Result<()> {
    for (t, v) in data.iter().enumerate() {
        if v.len() != len {
            return Err(Error::Dimension(format!(
                "{what}[{t}] has {} components, expected {len}",
                v.len()
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("{what}[{t}]")));
        }
    }
    Ok(())
}

/// Runs `x[t+2] = A0 x[t] + A1 x[t+1] + B u[t]` for `steps` steps.
///
/// Needs at least `steps - 1` inputs when r ≥ 1; extras are ignored.
pub fn simulate_discrete(
    sys: &SecondOrderSystem,
    snap: &StateSnapshot,
    inputs: &[Vec<f64>],
    steps: usize,
) -> Result<Trajectory> {
    if sys.kind != TimeKind::Discrete {
        return Err(Error::KindMismatch {
            expected: "discrete",
            found: sys.kind.as_str(),
        });
    }
    if steps == 0 {
        return Err(Error::Parameter("steps must be at least 1".into()));
    }
    if snap.dim() != sys.n {
        return Err(Error::Dimension(format!(
            "initial state has {} components, expected {}",
            snap.dim(),
            sys.n
        )));
    }
    let used = if sys.r > 0 {
        let need = steps - 1;
        if inputs.len() < need {
            return Err(Error::InsufficientSamples(format!(
                "{steps} steps need {need} input samples, got {}",
                inputs.len()
            )));
        }
        check_vectors("u", &inputs[..need], sys.r)?;
        inputs[..need].to_vec()
    } else {
        Vec::new()
    };

    let mut states = Vec::with_capacity(steps + 1);
    states.push(snap.x0.clone());
    states.push(snap.x1.clone());
    for t in 0..steps - 1 {
        let mut next = add(&mat_vec(&sys.a0, &states[t]), &mat_vec(&sys.a1, &states[t + 1]));
        if sys.r > 0 {
            next = add(&next, &mat_vec(&sys.b, &used[t]));
        }
        states.push(next);
    }
    let outputs = states.iter().map(|x| mat_vec(&sys.c, x)).collect();
    Ok(Trajectory {
        states,
        outputs,
        inputs: used,
    })
}

/// `z0 = y0`, `z1 = y1`, `zk = yk - C Σ_{j=0}^{k-2} M(k-2-j) u[j]`.
///
/// For continuous systems the samples are the derivatives `y^(k)(0)` and
/// `u^(k)(0)`; the algebra is identical.
pub fn measurement_stack(
    sys: &SecondOrderSystem,
    outputs: &[Vec<f64>],
    inputs: &[Vec<f64>],
) -> Result<MeasurementStack> {
    let samples = 2 * sys.n;
    if outputs.len() != samples {
        return Err(Error::InsufficientSamples(format!(
            "expected exactly {samples} output samples, got {}",
            outputs.len()
        )));
    }
    check_vectors("y", outputs, sys.p)?;
    let need_inputs = samples.saturating_sub(2);
    if sys.r > 0 && inputs.len() < need_inputs {
        return Err(Error::InsufficientSamples(format!(
            "expected at least {need_inputs} input samples, got {}",
            inputs.len()
        )));
    }
    let mut z: Vec<f64> = outputs.iter().flatten().copied().collect();
    if sys.r == 0 || need_inputs == 0 {
        return Ok(MeasurementStack { z });
    }
    check_vectors("u", &inputs[..need_inputs], sys.r)?;
    let table = m_sequence(&sys.a0, &sys.a1, &sys.b, need_inputs - 1)?;
    for k in 2..samples {
        let mut acc = vec![0.0; sys.n];
        for (j, u) in inputs.iter().enumerate().take(k - 1) {
            acc = add(&acc, &mat_vec(&table.m[k - 2 - j], u));
        }
        let corr = mat_vec(&sys.c, &acc);
        for (i, c) in corr.iter().enumerate() {
            z[k * sys.p + i] -= c;
        }
    }
    Ok(MeasurementStack { z })
}

/// Recovers `(x0, x1)` from 2n output samples and the matching inputs.
///
/// Fails with [`Error::Unobservable`] when the observability matrix has rank
/// below 2n, and with [`Error::InconsistentData`] when the minimum-norm
/// solution leaves a residual above [`DEFAULT_CONSISTENCY_TOL`] relative to
/// the data scale.
pub fn reconstruct_initial_state(
    sys: &SecondOrderSystem,
    outputs: &[Vec<f64>],
    inputs: &[Vec<f64>],
    tol_rel: f64,
) -> Result<Reconstruction> {
    let stack = measurement_stack(sys, outputs, inputs)?;
    let o = observability_matrix(sys, 2 * sys.n)?;
    let rank = o.rank(tol_rel);
    if rank < 2 * sys.n {
        return Err(Error::Unobservable {
            rank,
            required: 2 * sys.n,
        });
    }
    let rhs = RealMatrix::column(&stack.z)?;
    let (x, residual) = o.solve_min_norm(&rhs, tol_rel)?;
    let x = x.to_vec();
    let scale = norm(&stack.z).max(o.frobenius_norm() * norm(&x));
    if residual > DEFAULT_CONSISTENCY_TOL * scale {
        return Err(Error::InconsistentData { residual });
    }
    let snapshot = StateSnapshot {
        x0: x[..sys.n].to_vec(),
        x1: x[sys.n..].to_vec(),
    };
    Ok(Reconstruction {
        snapshot,
        residual_norm: residual,
        rank,
    })
}

/// Minimum-norm inputs `u[0..n-1]` (forward order) that put `x[n+1]` at `target`.
///
/// Solves `[M0 | ... | M(n-1)] (u[n-1]; ...; u[0]) = target - S(n-1) x0 - P(n-1) x1`.
/// A rank-deficient controllability matrix is fine as long as the target is
/// in its range; otherwise [`Error::UncontrollableTarget`].
pub fn synthesize_control(
    sys: &SecondOrderSystem,
    snap: &StateSnapshot,
    target: &[f64],
    tol_rel: f64,
) -> Result<Vec<Vec<f64>>> {
    if sys.kind != TimeKind::Discrete {
        return Err(Error::KindMismatch {
            expected: "discrete",
            found: sys.kind.as_str(),
        });
    }
    if sys.r == 0 {
        return Err(Error::NoInput);
    }
    let n = sys.n;
    if snap.dim() != n || target.len() != n {
        return Err(Error::Dimension(format!(
            "initial state and target must have {n} components"
        )));
    }
    if target.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("target".into()));
    }
    let table = sp_sequence(&sys.a0, &sys.a1, n - 1)?;
    let free = add(&mat_vec(&table.s[n - 1], &snap.x0), &mat_vec(&table.p[n - 1], &snap.x1));
    let d: Vec<f64> = target.iter().zip(&free).map(|(t, f)| t - f).collect();

    let ctrl = controllability_matrix(sys, n)?;
    let (w, residual) = ctrl.solve_min_norm(&RealMatrix::column(&d)?, tol_rel)?;
    let w = w.to_vec();
    let scale = norm(&d).max(ctrl.frobenius_norm() * norm(&w));
    if residual > DEFAULT_CONSISTENCY_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::UncontrollableTarget {
            rank: ctrl.rank(tol_rel),
            required: n,
            residual,
        });
    }
    // w stacks u[n-1] first.
    let r = sys.r;
    Ok((0..n)
        .map(|k| w[(n - 1 - k) * r..(n - k) * r].to_vec())
        .collect())
}
