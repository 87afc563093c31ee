//! Partial transpose and partial trace over tensor factors.
//!
//! Subsystems are numbered from 1 with subsystem 1 the most significant
//! digit of the basis index.

use super::matrix::{CMatrix, ZERO};
use super::state::DensityMatrix;
use crate::error::{Error, Result};

fn check_dims(dim: usize, dims: &[usize]) -> Result<()> {
    if dims.iter().product::<usize>() != dim || dims.iter().any(|&d| d < 1) {
        return Err(Error::BadSubsystemDims {
            dims: dims.to_vec(),
            dim,
        });
    }
    Ok(())
}

fn subset_mask(dims: &[usize], subset: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; dims.len()];
    for &s in subset {
        if s == 0 || s > dims.len() {
            return Err(Error::SubsystemOutOfRange {
                index: s,
                count: dims.len(),
            });
        }
        mask[s - 1] = true;
    }
    Ok(mask)
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

fn compose(digits: impl Iterator<Item = usize>, dims: &[usize]) -> usize {
    digits.zip(dims).fold(0, |acc, (x, &d)| acc * d + x)
}

/// `m^{T_S}` for an operator on `⊗ C^{dims[k]}`.
pub fn partial_transpose_dims(m: &CMatrix, dims: &[usize], subset: &[usize]) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    check_dims(m.rows(), dims)?;
    let mask = subset_mask(dims, subset)?;
    let n = m.rows();
    let all_digits: Vec<Vec<usize>> = (0..n).map(|i| digits(i, dims)).collect();
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let (di, dj) = (&all_digits[i], &all_digits[j]);
        let src_row = compose(
            (0..dims.len()).map(|k| if mask[k] { dj[k] } else { di[k] }),
            dims,
        );
        let src_col = compose(
            (0..dims.len()).map(|k| if mask[k] { di[k] } else { dj[k] }),
            dims,
        );
        m[(src_row, src_col)]
    }))
}

/// Reduced operator after tracing out `subset`.
pub fn partial_trace_dims(m: &CMatrix, dims: &[usize], subset: &[usize]) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    check_dims(m.rows(), dims)?;
    let mask = subset_mask(dims, subset)?;
    let kept: Vec<usize> = (0..dims.len()).filter(|&k| !mask[k]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|&k| mask[k]).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let env_dim: usize = traced_dims.iter().product();

    let full_index = |kept_digits: &[usize], env_digits: &[usize]| {
        let mut all = vec![0; dims.len()];
        for (&k, &x) in kept.iter().zip(kept_digits) {
            all[k] = x;
        }
        for (&k, &x) in traced.iter().zip(env_digits) {
            all[k] = x;
        }
        compose(all.into_iter(), dims)
    };

    let mut out = CMatrix::zeros(out_dim, out_dim);
    for a in 0..out_dim {
        let da = digits(a, &kept_dims);
        for b in 0..out_dim {
            let db = digits(b, &kept_dims);
            let mut acc = ZERO;
            for t in 0..env_dim {
                let dt = digits(t, &traced_dims);
                acc += m[(full_index(&da, &dt), full_index(&db, &dt))];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

fn qubit_dims(dim: usize) -> Result<Vec<usize>> {
    if !dim.is_power_of_two() {
        return Err(Error::BadSubsystemDims { dims: vec![2], dim });
    }
    Ok(vec![2; dim.trailing_zeros() as usize])
}

/// Partial transpose of a multi-qubit state on the 1-based subsystems in `subset`.
pub fn partial_transpose(rho: &DensityMatrix, subset: &[usize]) -> Result<CMatrix> {
    partial_transpose_dims(rho.matrix(), &qubit_dims(rho.dim())?, subset)
}

/// Partial trace of a multi-qubit state over the 1-based subsystems in `subset`.
pub fn partial_trace(rho: &DensityMatrix, subset: &[usize]) -> Result<DensityMatrix> {
    let dims = qubit_dims(rho.dim())?;
    DensityMatrix::new(partial_trace_dims(rho.matrix(), &dims, subset)?)
}
