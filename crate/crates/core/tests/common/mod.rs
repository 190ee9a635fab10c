//! Random ensembles and independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use solti::{RealMatrix, SecondOrderSystem, TimeKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> RealMatrix {
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(lo..hi)).collect();
    RealMatrix::new(rows, cols, &data).unwrap()
}

pub fn uniform_vec(rng: &mut impl Rng, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(lo..hi)).collect()
}

/// n ∈ 1..=4, r, p ∈ 1..=3, entries uniform in [-2, 2].
pub fn random_system(rng: &mut impl Rng, kind: TimeKind) -> SecondOrderSystem {
    let n = rng.gen_range(1..=4);
    let r = rng.gen_range(1..=3);
    let p = rng.gen_range(1..=3);
    random_system_dims(rng, kind, n, r, p)
}

pub fn random_system_dims(rng: &mut impl Rng, kind: TimeKind, n: usize, r: usize, p: usize) -> SecondOrderSystem {
    SecondOrderSystem::new(
        kind,
        uniform_matrix(rng, n, n, -2.0, 2.0),
        uniform_matrix(rng, n, n, -2.0, 2.0),
        uniform_matrix(rng, n, r, -2.0, 2.0),
        uniform_matrix(rng, p, n, -2.0, 2.0),
    )
    .unwrap()
}

/// Random nonsingular matrix with 2-norm condition number below 100.
pub fn well_conditioned(rng: &mut impl Rng, n: usize) -> RealMatrix {
    loop {
        let t = uniform_matrix(rng, n, n, -1.0, 1.0);
        let sv = t.singular_values();
        let (max, min) = (sv[0], sv[n - 1]);
        if min > 0.0 && max / min < 100.0 {
            return t;
        }
    }
}

pub fn inverse(m: &RealMatrix) -> RealMatrix {
    RealMatrix::from_dmatrix(m.as_dmatrix().clone().try_inverse().expect("invertible")).unwrap()
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut det = 0.0;
    for col in 0..n {
        let minor: Vec<Vec<f64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &v)| v).collect())
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][col] * cofactor_det(&minor);
    }
    det
}

/// Rank by fraction-free Gaussian elimination on integer-valued entries.
pub fn exact_rank(m: &[Vec<f64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        for i in rank + 1..rows {
            let f = a[i][col];
            let g = a[rank][col];
            let pivot_row = a[rank].clone();
            for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                *x = *x * g - p * f;
            }
        }
        rank += 1;
    }
    rank
}

pub fn to_complex(m: &RealMatrix) -> DMatrix<Complex64> {
    m.as_dmatrix().map(|v| Complex64::new(v, 0.0))
}

/// `C (s²E - s A1 - A0)⁻¹ B` by direct complex inversion.
pub fn direct_transfer(sys: &SecondOrderSystem, s: Complex64) -> DMatrix<Complex64> {
    let n = sys.n;
    let pencil = DMatrix::<Complex64>::identity(n, n) * (s * s) - to_complex(&sys.a1) * s - to_complex(&sys.a0);
    let inv = pencil.try_inverse().expect("s is not an eigenvalue");
    to_complex(&sys.c) * inv * to_complex(&sys.b)
}

pub fn random_complex(rng: &mut impl Rng, radius: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius))
}

/// Relative max-entry error between two complex matrices.
pub fn rel_err(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let scale = b.iter().fold(0.0_f64, |m, z| m.max(z.norm())).max(1e-300);
    a.iter().zip(b.iter()).fold(0.0_f64, |m, (x, y)| m.max((x - y).norm())) / scale
}
