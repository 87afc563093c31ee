//! Cyclic Jacobi diagonalization of small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies a real Givens rotation that zeroes it. Sweeps run
//! over all `p < q` until the off-diagonal Frobenius norm drops below
//! [`OFF_DIAGONAL_TOL`] (scaled by the matrix norm when that exceeds one) or
//! [`MAX_SWEEPS`] is reached.

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Inputs farther than this from Hermitian are rejected.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: CMatrix,
    pub sweeps: usize,
}

impl HermitianEigen {
    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * mapped[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|l| l)
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn frobenius(a: &CMatrix) -> f64 {
    a.as_slice()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn herm_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let herr = m.hermiticity_error();
    if herr > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian(herr));
    }

    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let tol = OFF_DIAGONAL_TOL * frobenius(&a).max(1.0);
    let mut sweeps = 0;

    while sweeps < MAX_SWEEPS && off_diagonal_norm(&a) >= tol {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, apq, r);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Applies `A ← G† A G`, `V ← V G` with `G` chosen to annihilate `a_pq`.
///
/// `G` restricted to `(p, q)` is `[[c, −s], [s·e^{−iφ}, c·e^{−iφ}]]` where
/// `a_pq = r·e^{iφ}` and `tan 2θ = 2r / (a_pp − a_qq)`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, apq: C64, r: f64) {
    let n = a.rows();
    let phase = apq / r; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = 0.5 * (2.0 * r).atan2(app - aqq);
    let (s, c) = theta.sin_cos();
    let gqp = phase.conj() * s;
    let gqq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * gqp;
        a[(k, q)] = -akp * s + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * gqp.conj();
        a[(q, k)] = -apk * s + aqk * gqq.conj();
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * gqp;
        v[(k, q)] = -vkp * s + vkq * gqq;
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn herm_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if let Some(vals) = x_shape_eigenvalues(m) {
        return Ok(vals);
    }
    herm_eigen(m).map(|e| e.values)
}

/// Closed-form spectrum when every entry off the diagonal and anti-diagonal
/// is exactly zero: the matrix splits into 2×2 blocks on `{i, n−1−i}`.
/// Mixtures of GHZ basis states and their partial transposes have this shape.
pub fn x_shape_eigenvalues(m: &CMatrix) -> Option<Vec<f64>> {
    let n = m.rows();
    if !m.is_square() || !n.is_multiple_of(2) || n == 0 {
        return None;
    }
    for i in 0..n {
        for j in 0..n {
            if j != i && j != n - 1 - i && m[(i, j)] != ZERO {
                return None;
            }
        }
    }
    if m.hermiticity_error() > HERMITIAN_INPUT_TOL {
        return None;
    }
    let mut vals = Vec::with_capacity(n);
    for i in 0..n / 2 {
        let (a, d) = (m[(i, i)].re, m[(n - 1 - i, n - 1 - i)].re);
        let c = m[(i, n - 1 - i)];
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + c.norm_sqr()).sqrt();
        vals.push(mean - rad);
        vals.push(mean + rad);
    }
    vals.sort_by(f64::total_cmp);
    Some(vals)
}
