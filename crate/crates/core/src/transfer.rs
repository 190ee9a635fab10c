//! Transfer functions `H(s) = C (s²E - A0)⁻¹ B` as exact rational matrices.
//!
//! The resolvent `(λE - A)⁻¹ = adj(λ) / χ(λ)` is built with the
//! Faddeev–LeVerrier recursion, so numerators and the common denominator are
//! polynomials with no pointwise inversion involved.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{sort_complex, Polynomial, RealMatrix};
use crate::recurrences::companion_lift;
use crate::sysmodel::SecondOrderSystem;

/// Default relative pole-zero distance for cancellation matching.
pub const DEFAULT_CANCEL_TOL: f64 = 1e-8;

/// Coefficients below this fraction of the largest one are dropped before root finding.
const ROOT_CHOP_REL: f64 = 1e-12;

/// `adj(λE - A) = Σ N_k λᵏ` and `χ(λ) = det(λE - A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventPoly {
    /// `N_0..N_{n-1}`, ascending powers of λ.
    pub adjugate_coeffs: Vec<RealMatrix>,
    /// Monic, degree n.
    pub charpoly: Polynomial,
}

impl ResolventPoly {
    pub fn dim(&self) -> usize {
        self.adjugate_coeffs.len()
    }

    pub fn adjugate_at(&self, lambda: Complex64) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for nk in self.adjugate_coeffs.iter().rev() {
            acc = acc * lambda + nk.as_dmatrix().map(|v| Complex64::new(v, 0.0));
        }
        acc
    }
}

pub fn resolvent_poly(a: &RealMatrix) -> Result<ResolventPoly> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "resolvent of a non-square {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    // coeffs[k] is the coefficient of λᵏ in χ; built from the top down.
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut adj = vec![RealMatrix::zeros(n, n); n];
    let identity = RealMatrix::identity(n);
    let mut mk = RealMatrix::zeros(n, n);
    for k in 1..=n {
        mk = &(a * &mk) + &identity.scale(coeffs[n - k + 1]);
        let amk = a * &mk;
        let trace: f64 = (0..n).map(|i| amk[(i, i)]).sum();
        coeffs[n - k] = -trace / k as f64;
        adj[n - k] = mk.clone();
    }
    Ok(ResolventPoly {
        adjugate_coeffs: adj,
        charpoly: Polynomial::new(coeffs),
    })
}

/// p x r matrix of numerator polynomials over one monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTransferMatrix {
    pub numerators: Vec<Vec<Polynomial>>,
    pub denominator: Polynomial,
}

impl RationalTransferMatrix {
    pub fn outputs(&self) -> usize {
        self.numerators.len()
    }

    pub fn inputs(&self) -> usize {
        self.numerators.first().map_or(0, Vec::len)
    }

    pub fn is_siso(&self) -> bool {
        self.outputs() == 1 && self.inputs() == 1
    }

    /// `num/den` rendering of one entry, e.g. `(7s^2 - 5)/(s^4 - 6s^2 + 5)`.
    pub fn render_entry(&self, i: usize, j: usize) -> String {
        let wrap = |p: &Polynomial| {
            let s = p.render("s");
            if p.term_count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        let num = &self.numerators[i][j];
        if num.is_zero() {
            return "0".into();
        }
        format!("{}/{}", wrap(num), wrap(&self.denominator))
    }
}

/// Builds `C (Σ N_k λᵏ) B` entrywise.
fn numerators_from(res: &ResolventPoly, c: &RealMatrix, b: &RealMatrix) -> Vec<Vec<Polynomial>> {
    let projected: Vec<RealMatrix> = res.adjugate_coeffs.iter().map(|nk| &(c * nk) * b).collect();
    (0..c.nrows())
        .map(|i| {
            (0..b.ncols())
                .map(|j| Polynomial::new(projected.iter().map(|m| m[(i, j)]).collect()))
                .collect()
        })
        .collect()
}

/// `H(s) = C (s²E - A0)⁻¹ B` for systems with `A1 = 0`.
///
/// Numerators and denominator are left unreduced.
pub fn transfer_function(sys: &SecondOrderSystem) -> Result<RationalTransferMatrix> {
    if !sys.a1.is_zero() {
        return Err(Error::Unsupported(
            "A1 is nonzero; use transfer_function_general".into(),
        ));
    }
    if sys.r == 0 {
        return Err(Error::NoInput);
    }
    let res = resolvent_poly(&sys.a0)?;
    let numerators = numerators_from(&res, &sys.c, &sys.b)
        .into_iter()
        .map(|row| row.iter().map(Polynomial::substitute_square).collect())
        .collect();
    Ok(RationalTransferMatrix {
        numerators,
        denominator: res.charpoly.substitute_square(),
    })
}

/// `H(s) = [C 0] (sE - Ã)⁻¹ [0; B]` over the 2n-dimensional companion lift.
///
/// Equals `C (s²E - s A1 - A0)⁻¹ B`; the denominator is `det(s²E - s A1 - A0)`.
pub fn transfer_function_general(sys: &SecondOrderSystem) -> Result<RationalTransferMatrix> {
    if sys.r == 0 {
        return Err(Error::NoInput);
    }
    let lift = companion_lift(sys);
    let res = resolvent_poly(&lift.a_tilde)?;
    Ok(RationalTransferMatrix {
        numerators: numerators_from(&res, &lift.c_tilde, &lift.b_tilde),
        denominator: res.charpoly,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolesZeros {
    pub poles: Vec<Complex64>,
    pub zeros: Vec<Complex64>,
}

fn siso_parts(h: &RationalTransferMatrix) -> Result<(&Polynomial, &Polynomial)> {
    if !h.is_siso() {
        return Err(Error::Unsupported(format!(
            "pole/zero analysis is single-input single-output only ({}x{} given)",
            h.outputs(),
            h.inputs()
        )));
    }
    let num = &h.numerators[0][0];
    if num.is_zero() {
        return Err(Error::ZeroTransfer);
    }
    Ok((num, &h.denominator))
}

fn roots_chopped(p: &Polynomial) -> Result<Vec<Complex64>> {
    let p = p.chop(ROOT_CHOP_REL * p.max_abs_coeff());
    match p.degree() {
        Some(0) | None => Ok(Vec::new()),
        Some(_) => p.roots(),
    }
}

/// Roots of the denominator and of the numerator, with multiplicity.
pub fn poles_zeros(h: &RationalTransferMatrix) -> Result<PolesZeros> {
    let (num, den) = siso_parts(h)?;
    Ok(PolesZeros {
        poles: roots_chopped(den)?,
        zeros: roots_chopped(num)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CancellationReport {
    /// `(pole, zero)` pairs, closest first.
    pub cancelled_pairs: Vec<(Complex64, Complex64)>,
}

impl CancellationReport {
    pub fn is_empty(&self) -> bool {
        self.cancelled_pairs.is_empty()
    }
}

/// Greedy nearest-first matching of poles to zeros.
///
/// A pole ρ and zero ζ cancel when `|ρ - ζ| < tol (1 + |ρ|)`; each root is
/// used at most once.
pub fn cancellation_check(h: &RationalTransferMatrix, tol: f64) -> Result<CancellationReport> {
    let pz = poles_zeros(h)?;
    let mut candidates = Vec::new();
    for (i, p) in pz.poles.iter().enumerate() {
        for (j, z) in pz.zeros.iter().enumerate() {
            let d = (p - z).norm();
            if d < tol * (1.0 + p.norm()) {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pole_used = vec![false; pz.poles.len()];
    let mut zero_used = vec![false; pz.zeros.len()];
    let mut pairs = Vec::new();
    for (_, i, j) in candidates {
        if pole_used[i] || zero_used[j] {
            continue;
        }
        pole_used[i] = true;
        zero_used[j] = true;
        pairs.push((pz.poles[i], pz.zeros[j]));
    }
    Ok(CancellationReport { cancelled_pairs: pairs })
}

/// Entrywise `num(s) / den(s)`.
pub fn evaluate(h: &RationalTransferMatrix, s: Complex64) -> Result<Vec<Vec<Complex64>>> {
    let den = h.denominator.eval_complex(s);
    if den.norm() <= 1e-12 * h.denominator.max_abs_coeff() {
        return Err(Error::PoleEvaluation(den.norm()));
    }
    Ok(h.numerators
        .iter()
        .map(|row| row.iter().map(|num| num.eval_complex(s) / den).collect())
        .collect())
}

/// Sorted copy, for stable reporting.
pub fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
    sort_complex(&mut v);
    v
}
