use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::density::{reduced_density_matrix, PureState, SparseState};
use super::fidelity::fidelity;
use super::negativity::four_partite_negativity;
use crate::error::{Error, Result};
use crate::spinbasis::SectorBasis;

/// Sites `(0, 1)` and `(2 + D, 3 + D)`: two neighbouring pairs whose inner
/// ends are `D` sites apart.
pub fn pair_sites(separation: usize) -> [usize; 4] {
    [0, 1, 2 + separation, 3 + separation]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegativityPoint {
    pub separation: usize,
    pub n4: f64,
}

/// Four-partite negativity of two neighbouring pairs at each separation.
pub fn negativity_scan<S: PureState + Sync + ?Sized>(state: &S, separations: &[usize]) -> Result<Vec<NegativityPoint>> {
    separations
        .par_iter()
        .map(|&d| {
            let rho = reduced_density_matrix(state, &pair_sites(d))?;
            Ok(NegativityPoint { separation: d, n4: four_partite_negativity(&rho)?.n4 })
        })
        .collect()
}

/// The `⌈f·dim⌉` largest-modulus components, extended to every component
/// tied (to 1e-12 relative) with the last one kept, renormalized.
pub fn truncate<S: PureState + ?Sized>(state: &S, fraction: f64) -> Result<SparseState> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::OutOfRange(format!("retained fraction {fraction} is outside (0, 1]")));
    }
    let basis = state.basis();
    let amps = state.amplitudes();
    let mut order: Vec<usize> = (0..amps.len()).collect();
    order.sort_by(|&a, &b| amps[b].abs().total_cmp(&amps[a].abs()).then(a.cmp(&b)));
    let mut keep = ((fraction * amps.len() as f64).ceil() as usize).clamp(1, amps.len());
    let cut = amps[order[keep - 1]].abs();
    while keep < order.len() && (amps[order[keep]].abs() - cut).abs() <= 1e-12 * cut {
        keep += 1;
    }
    let mut kept: Vec<usize> = order[..keep].to_vec();
    kept.sort_unstable();
    let codes = kept.iter().map(|&i| basis.code(i)).collect();
    let sub = SectorBasis::from_codes(basis.lattice().clone(), basis.sector(), codes)?;
    SparseState::new(sub, kept.iter().map(|&i| amps[i]).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncationPoint {
    pub fraction: f64,
    pub retained: usize,
    pub infidelity: f64,
}

/// Infidelity of the reduced state on `sites` after keeping only the
/// largest components, for each retained fraction.
pub fn truncation_infidelity_scan<S: PureState + Sync + ?Sized>(
    state: &S,
    sites: &[usize],
    fractions: &[f64],
) -> Result<Vec<TruncationPoint>> {
    let full = reduced_density_matrix(state, sites)?;
    fractions
        .par_iter()
        .map(|&f| {
            let t = truncate(state, f)?;
            let rho = reduced_density_matrix(&t, sites)?;
            Ok(TruncationPoint { fraction: f, retained: t.basis().len(), infidelity: 1.0 - fidelity(&full, &rho)? })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionPoint {
    pub sigma: f64,
    pub mean_fidelity: f64,
    /// Standard error of the mean over trials (0 for a single trial).
    pub stderr: f64,
}

/// Mean fidelity between the reduced state on `sites` and the same state
/// after multiplying every amplitude by `exp(x)`, `x ~ N(0, σ²)`.
///
/// Trial `t` draws from the ChaCha8 stream `t` of `seed`, so results do not
/// depend on thread count, and the same standard normal draws are reused for
/// every `σ`.
pub fn distortion_fidelity<S: PureState + Sync + ?Sized>(
    state: &S,
    sites: &[usize],
    sigma: f64,
    trials: usize,
    seed: u64,
) -> Result<DistortionPoint> {
    if !(sigma >= 0.0 && sigma.is_finite()) || trials == 0 {
        return Err(Error::OutOfRange(format!("need sigma ≥ 0 and trials ≥ 1 (got {sigma}, {trials})")));
    }
    if sigma == 0.0 {
        return Ok(DistortionPoint { sigma, mean_fidelity: 1.0, stderr: 0.0 });
    }
    let reference = reduced_density_matrix(state, sites)?;
    let basis = state.basis();
    let amps = state.amplitudes();
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let distorted: Vec<f64> = amps
                .iter()
                .map(|a| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    a * (sigma * z).exp()
                })
                .collect();
            let s = SparseState::new(basis.clone(), distorted)?;
            fidelity(&reference, &reduced_density_matrix(&s, sites)?)
        })
        .collect::<Result<_>>()?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let stderr = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
    } else {
        0.0
    };
    Ok(DistortionPoint { sigma, mean_fidelity: mean, stderr })
}

pub fn distortion_scan<S: PureState + Sync + ?Sized>(
    state: &S,
    sites: &[usize],
    sigmas: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<DistortionPoint>> {
    sigmas.iter().map(|&s| distortion_fidelity(state, sites, s, trials, seed)).collect()
}

pub fn write_negativity_csv<W: Write>(points: &[NegativityPoint], mut out: W) -> Result<()> {
    writeln!(out, "D,N4")?;
    for p in points {
        writeln!(out, "{},{:.17e}", p.separation, p.n4)?;
    }
    Ok(())
}

pub fn write_truncation_csv<W: Write>(points: &[TruncationPoint], mut out: W) -> Result<()> {
    writeln!(out, "fraction,retained,infidelity")?;
    for p in points {
        writeln!(out, "{},{},{:.17e}", p.fraction, p.retained, p.infidelity)?;
    }
    Ok(())
}

pub fn write_distortion_csv<W: Write>(points: &[DistortionPoint], mut out: W) -> Result<()> {
    writeln!(out, "sigma,mean_fidelity,stderr")?;
    for p in points {
        writeln!(out, "{},{:.17e},{:.17e}", p.sigma, p.mean_fidelity, p.stderr)?;
    }
    Ok(())
}
