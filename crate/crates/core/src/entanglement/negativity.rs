use nalgebra::DMatrix;
use serde::Serialize;

use super::density::{sorted_eigenvalues, DensityMatrix};
use crate::error::{Error, Result};

/// Eigenvalues of `ρ^Γ` above this (negative) value count as zero.
pub const NEGATIVITY_CLIP: f64 = 1e-10;

fn check_mask(n_factors: usize, mask: &[usize]) -> Result<Vec<bool>> {
    let mut on = vec![false; n_factors];
    for &f in mask {
        if f >= n_factors {
            return Err(Error::InvalidMask(format!("factor {f} of {n_factors}")));
        }
        if on[f] {
            return Err(Error::InvalidMask(format!("factor {f} listed twice")));
        }
        on[f] = true;
    }
    if mask.is_empty() || mask.len() == n_factors {
        return Err(Error::InvalidMask("mask must be a non-empty proper subset of the factors".into()));
    }
    Ok(on)
}

fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

/// `ρ^Γ`: row and column digits of the masked factors are exchanged.
pub fn partial_transpose(rho: &DensityMatrix, mask: &[usize]) -> Result<DMatrix<f64>> {
    let dims = rho.dims();
    let on = check_mask(dims.len(), mask)?;
    let dim = rho.dim();
    let m = rho.matrix();
    let mut out = DMatrix::zeros(dim, dim);
    let (mut di, mut dj) = (vec![0; dims.len()], vec![0; dims.len()]);
    for i in 0..dim {
        for j in 0..dim {
            digits(i, dims, &mut di);
            digits(j, dims, &mut dj);
            for k in 0..dims.len() {
                if on[k] {
                    std::mem::swap(&mut di[k], &mut dj[k]);
                }
            }
            out[(compose(&di, dims), compose(&dj, dims))] = m[(i, j)];
        }
    }
    Ok(out)
}

/// `log₂‖ρ^Γ‖₁ = log₂(1 + 2Σ|λ₋|)` over the negative eigenvalues of the
/// partial transpose; eigenvalues in `(-1e-10, 0)` are treated as zero.
pub fn log_negativity(rho: &DensityMatrix, mask: &[usize]) -> Result<f64> {
    let pt = partial_transpose(rho, mask)?;
    let negative: f64 = sorted_eigenvalues(&pt).iter().filter(|&&l| l <= -NEGATIVITY_CLIP).map(|l| -l).sum();
    Ok((1.0 + 2.0 * negative).log2())
}

/// The seven bipartitions of a four-factor state, named by the factors on
/// one side.
pub const BIPARTITIONS: [(&str, &[usize]); 7] = [
    ("a", &[0]),
    ("b", &[1]),
    ("c", &[2]),
    ("d", &[3]),
    ("ab", &[0, 1]),
    ("ac", &[0, 2]),
    ("ad", &[0, 3]),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegativityReport {
    /// Log-negativity per bipartition, in the order of [`BIPARTITIONS`].
    pub bipartitions: Vec<(String, f64)>,
    /// Geometric mean of the seven entries.
    pub n4: f64,
}

/// Four-partite negativity: the seventh root of the product of the
/// log-negativities across all bipartitions of a four-factor state.
pub fn four_partite_negativity(rho: &DensityMatrix) -> Result<NegativityReport> {
    if rho.dims().len() != 4 {
        return Err(Error::DimensionMismatch(format!("expected 4 factors, got {}", rho.dims().len())));
    }
    let mut bipartitions = Vec::with_capacity(7);
    for (name, mask) in BIPARTITIONS {
        bipartitions.push((name.to_string(), log_negativity(rho, mask)?));
    }
    let n4 = bipartitions.iter().map(|(_, v)| v).product::<f64>().powf(1.0 / 7.0);
    Ok(NegativityReport { bipartitions, n4 })
}
