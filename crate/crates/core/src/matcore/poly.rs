use std::fmt;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real polynomial with ascending coefficients, trailing zeros trimmed.
///
/// The empty coefficient list is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |a, c| a.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    /// p(λ) ↦ p(s²): the coefficient of λᵏ moves to s²ᵏ.
    pub fn substitute_square(&self) -> Self {
        let mut out = vec![0.0; (2 * self.coeffs.len()).saturating_sub(1)];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[2 * k] = c;
        }
        Self::new(out)
    }

    /// Sets coefficients with magnitude at most `tol` to zero.
    pub fn chop(&self, tol: f64) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if c.abs() <= tol { 0.0 } else { c })
                .collect(),
        )
    }

    /// All roots with multiplicity, as eigenvalues of the companion matrix.
    /// A few Newton steps, each kept only if it lowers `|p(z)|`.
    fn polish(&self, mut z: Complex64) -> Complex64 {
        let deriv: Vec<f64> = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
        let deriv = Polynomial::new(deriv);
        let mut value = self.eval_complex(z).norm();
        for _ in 0..3 {
            let d = deriv.eval_complex(z);
            if d.norm() == 0.0 {
                break;
            }
            let next = z - self.eval_complex(z) / d;
            let next_value = self.eval_complex(next).norm();
            if next_value >= value {
                break;
            }
            z = next;
            value = next_value;
        }
        z
    }

    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let degree = match self.degree() {
            None => return Err(Error::DegeneratePolynomial("zero polynomial has no finite root set".into())),
            Some(0) => return Err(Error::DegeneratePolynomial("constant polynomial has no roots".into())),
            Some(d) => d,
        };
        let lead = self.leading();
        let mut roots = if degree == 1 {
            vec![Complex64::new(-self.coeffs[0] / lead, 0.0)]
        } else {
            // Frobenius companion: ones on the subdiagonal, -a_k/a_d in the last column.
            let mut comp = DMatrix::<f64>::zeros(degree, degree);
            for i in 1..degree {
                comp[(i, i - 1)] = 1.0;
            }
            for i in 0..degree {
                comp[(i, degree - 1)] = -self.coeffs[i] / lead;
            }
            // The real double-shift QR can stall on spectra symmetric about the
            // origin (every even polynomial). The fallback runs complex QR on a
            // copy shifted off the real axis, which breaks the symmetry.
            let found = match Schur::try_new(comp.clone(), f64::EPSILON, 500) {
                Some(schur) => Some(
                    schur
                        .complex_eigenvalues()
                        .iter()
                        .map(|z| Complex64::new(z.re, z.im))
                        .collect::<Vec<_>>(),
                ),
                None => {
                    let bound = (0..degree)
                        .map(|k| (self.coeffs[k] / lead).abs().powf(1.0 / (degree - k) as f64))
                        .fold(0.0_f64, f64::max)
                        .max(1.0);
                    let sigma = Complex64::new(0.1234, 0.0567) * bound;
                    let shifted = comp.map(|v| Complex64::new(v, 0.0)) + DMatrix::<Complex64>::identity(degree, degree) * sigma;
                    Schur::try_new(shifted, f64::EPSILON, 10_000)
                        .and_then(|schur| schur.eigenvalues())
                        .map(|eig| eig.iter().map(|z| z - sigma).collect())
                }
            };
            let mut roots = found.ok_or(Error::EigenFailure)?;
            for z in &mut roots {
                *z = self.polish(*z);
            }
            roots
        };
        sort_complex(&mut roots);
        Ok(roots)
    }

    /// Human-readable form in descending powers of `var`, e.g. `7s^2 - 5`.
    ///
    /// Terms below 1e-12 of the largest coefficient are omitted.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let floor = 1e-12 * self.max_abs_coeff();
        let mut out = String::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c.abs() <= floor {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c < 0.0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0.0 { " - " } else { " + " });
            }
            let show_coeff = k == 0 || format_coeff(mag) != "1";
            if show_coeff {
                out.push_str(&format_coeff(mag));
            }
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{k}")),
            }
        }
        out
    }

    /// Number of terms shown by [`render`](Self::render).
    pub fn term_count(&self) -> usize {
        let floor = 1e-12 * self.max_abs_coeff();
        self.coeffs.iter().filter(|&&c| c.abs() > floor).count()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("s"))
    }
}

/// Roots of `p`; see [`Polynomial::roots`].
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    p.roots()
}

/// Sort by real part, then imaginary part.
pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Near-integers print as integers; everything else with up to 6 significant digits.
fn format_coeff(c: f64) -> String {
    let r = c.round();
    if (c - r).abs() <= 1e-9 * c.abs().max(1.0) {
        return format!("{}", r as i64);
    }
    let s = format!("{:.6e}", c);
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, c);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{exp}")
    }
}
