use nalgebra::DMatrix;

use super::density::DensityMatrix;
use crate::error::{Error, Result};

// Square root of a symmetric PSD matrix. Eigenvalues at the rounding level
// (including negative ones) are set to 0 so that they do not turn into
// square-root-sized noise.
fn sqrt_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let floor = f64::EPSILON * m.nrows() as f64 * eig.eigenvalues.amax();
    let roots = eig.eigenvalues.map(|l| if l > floor { l.sqrt() } else { 0.0 });
    &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose()
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
///
/// Evaluated as the squared trace norm of `√ρ·√σ` (its singular values),
/// which avoids square roots of rounding noise in `√ρ σ √ρ`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", rho.dims(), sigma.dims())));
    }
    let product = sqrt_psd(rho.matrix()) * sqrt_psd(sigma.matrix());
    let trace: f64 = match product.clone().try_svd(false, false, f64::EPSILON, 10_000) {
        Some(svd) => svd.singular_values.iter().sum(),
        None => {
            log::warn!("SVD did not converge; using the eigenvalues of (√ρ√σ)ᵀ(√ρ√σ)");
            (product.transpose() * &product).symmetric_eigenvalues().iter().map(|l| l.max(0.0).sqrt()).sum()
        }
    };
    Ok((trace * trace).clamp(0.0, 1.0))
}
