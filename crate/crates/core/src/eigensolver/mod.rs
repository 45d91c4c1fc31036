//! Sector ground states.
//!
//! A sector solve runs Lanczos (full reorthogonalization, seeded random
//! start) and falls back to dense diagonalization for tiny sectors. Ground
//! vectors are real and normalized, with a fixed phase: the amplitude of the
//! Néel configuration is made non-negative. The paper-style sign
//! `-(-1)^{N/2}` for `⟨Néel|Ψ₀⟩` differs from this only by a global phase.

mod amplitudes;
mod export;
mod lanczos;
mod scan;

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use amplitudes::{symmetry_orbit, top_amplitudes, RankedAmplitude};
pub use export::{read_ground_state, write_ground_state, GroundStateHeader};
pub use scan::{sector_scan, ScanPoint};

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::spinbasis::{antiferro_reference, enumerate_sector, HalfInt, LatticeSpec, SectorBasis, SpinConfiguration};
use lanczos::{lowest_eigenpair, LanczosOptions};

/// Largest sector handled by [`dense_ground_state`].
pub const DENSE_LIMIT: usize = 4096;

/// Gap (in units of `|J|`) below which the lowest level is flagged degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseConvention {
    /// `⟨Néel|Ψ₀⟩ ≥ 0`.
    NeelPositive,
    /// Used when the Néel configuration is not in the sector: the
    /// largest-magnitude amplitude (first in basis order on ties) is positive.
    LargestPositive,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    /// Dense for sectors of at most 16 states, Lanczos otherwise.
    Auto,
    Lanczos,
    Dense,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Residual tolerance relative to `|J|·N`.
    pub tol: f64,
    pub max_iterations: usize,
    pub krylov_dim: usize,
    pub seed: u64,
    pub method: SolverMethod,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-10, max_iterations: 5000, krylov_dim: 120, seed: 0x5eed, method: SolverMethod::Auto }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub method: SolverMethod,
    /// Operator applications (Lanczos) or 1 (dense).
    pub iterations: usize,
    /// `‖Hv - Ev‖₂`.
    pub residual: f64,
    /// Absolute residual threshold that was requested.
    pub tolerance: f64,
    /// Distance to the next level when known.
    pub gap: Option<f64>,
    pub degenerate: bool,
    #[serde(with = "duration_secs")]
    pub wall_time: Duration,
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}: {} iterations, residual {:.3e} (tolerance {:.3e}), degenerate={}, {:.3}s",
            self.method,
            self.iterations,
            self.residual,
            self.tolerance,
            self.degenerate,
            self.wall_time.as_secs_f64()
        )
    }
}

/// A normalized real ground vector over a sector basis.
#[derive(Clone, Debug)]
pub struct GroundStateVector {
    basis: SectorBasis,
    amps: Vec<f64>,
    energy: f64,
    phase: PhaseConvention,
}

impl GroundStateVector {
    /// Normalizes `amps` and applies the phase convention.
    pub fn new(basis: SectorBasis, mut amps: Vec<f64>, energy: f64) -> Result<Self> {
        if amps.len() != basis.len() || amps.is_empty() {
            return Err(Error::Mismatch(format!("{} amplitudes for a basis of {}", amps.len(), basis.len())));
        }
        let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Mismatch("amplitude vector has zero or non-finite norm".into()));
        }
        let phase = fix_phase(&basis, &mut amps);
        let sign_norm = 1.0 / norm;
        amps.iter_mut().for_each(|a| *a *= sign_norm);
        Ok(GroundStateVector { basis, amps, energy, phase })
    }

    // Already normalized and phase-fixed amplitudes, e.g. read back from disk.
    pub(crate) fn from_parts(basis: SectorBasis, amps: Vec<f64>, energy: f64, phase: PhaseConvention) -> Self {
        GroundStateVector { basis, amps, energy, phase }
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn lattice(&self) -> &LatticeSpec {
        self.basis.lattice()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn phase_convention(&self) -> PhaseConvention {
        self.phase
    }

    /// `⟨config|Ψ₀⟩`, or `None` when the configuration is outside the sector.
    pub fn try_amplitude(&self, config: &SpinConfiguration) -> Option<f64> {
        self.basis.index_of(config).map(|i| self.amps[i])
    }

    /// `⟨config|Ψ₀⟩`; zero (with a logged warning) outside the sector.
    pub fn amplitude(&self, config: &SpinConfiguration) -> f64 {
        self.try_amplitude(config).unwrap_or_else(|| {
            log::warn!("configuration {} is outside the sector", config.display(self.lattice()));
            0.0
        })
    }

    /// The reference amplitude α(Néel).
    pub fn neel_amplitude(&self) -> Option<f64> {
        self.try_amplitude(&antiferro_reference(self.lattice()))
    }

    /// `α_r = α(config) / α(Néel)`; zero (with a warning) outside the sector.
    pub fn relative_amplitude(&self, config: &SpinConfiguration) -> f64 {
        match self.neel_amplitude() {
            Some(n) if n != 0.0 => self.amplitude(config) / n,
            _ => {
                log::warn!("Néel configuration missing from the sector; relative amplitude undefined");
                0.0
            }
        }
    }
}

fn fix_phase(basis: &SectorBasis, amps: &mut [f64]) -> PhaseConvention {
    let (pivot, convention) = match basis.index_of(&antiferro_reference(basis.lattice())) {
        Some(i) if amps[i] != 0.0 => (i, PhaseConvention::NeelPositive),
        _ => {
            let mut best = 0;
            for (i, a) in amps.iter().enumerate() {
                if a.abs() > amps[best].abs() {
                    best = i;
                }
            }
            (best, PhaseConvention::LargestPositive)
        }
    };
    if amps[pivot] < 0.0 {
        amps.iter_mut().for_each(|a| *a = -*a);
    }
    convention
}

fn residual_scale(spec: &HamiltonianSpec) -> f64 {
    let s = spec.lattice().coupling().abs() * spec.lattice().n_sites() as f64;
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

fn residual_norm(spec: &HamiltonianSpec, basis: &SectorBasis, v: &[f64], energy: f64) -> Result<f64> {
    let mut hv = vec![0.0; v.len()];
    spec.apply(basis, v, &mut hv)?;
    Ok(hv.iter().zip(v).map(|(h, x)| (h - energy * x).powi(2)).sum::<f64>().sqrt())
}

/// Lowest eigenpair of `H` in the sector `total_sz`.
pub fn ground_state(
    spec: &HamiltonianSpec,
    total_sz: HalfInt,
    options: &SolverOptions,
) -> Result<(GroundStateVector, SolveReport)> {
    let started = Instant::now();
    let basis = enumerate_sector(spec.lattice(), total_sz)?;
    if basis.is_empty() {
        return Err(Error::EmptySector);
    }
    let tolerance = options.tol * residual_scale(spec);
    let degeneracy_tol = DEGENERACY_TOL * spec.lattice().coupling().abs().max(f64::MIN_POSITIVE);
    let use_dense = match options.method {
        SolverMethod::Dense => true,
        SolverMethod::Lanczos => false,
        SolverMethod::Auto => basis.len() <= 16,
    };

    let (state, iterations, gap) = if use_dense {
        let (state, spectrum) = dense_solve(spec, basis)?;
        (state, 1, spectrum.get(1).map(|e| e - spectrum[0]))
    } else {
        let lopts = LanczosOptions {
            tol: tolerance,
            max_matvecs: options.max_iterations,
            krylov_dim: options.krylov_dim,
            seed: options.seed,
        };
        let out = lowest_eigenpair(basis.len(), |x, y| spec.apply(&basis, x, y).expect("basis built for spec"), &lopts);
        let gap = out.second.map(|s| s - out.value);
        if !out.converged {
            let report = SolveReport {
                method: SolverMethod::Lanczos,
                iterations: out.matvecs,
                residual: out.residual,
                tolerance,
                gap,
                degenerate: gap.is_some_and(|g| g < degeneracy_tol),
                wall_time: started.elapsed(),
            };
            return Err(Error::NoConvergence { report });
        }
        (GroundStateVector::new(basis, out.vector, out.value)?, out.matvecs, gap)
    };

    let residual = residual_norm(spec, state.basis(), state.amplitudes(), state.energy())?;
    let report = SolveReport {
        method: if use_dense { SolverMethod::Dense } else { SolverMethod::Lanczos },
        iterations,
        residual,
        tolerance,
        gap,
        degenerate: gap.is_some_and(|g| g < degeneracy_tol),
        wall_time: started.elapsed(),
    };
    if residual > tolerance {
        return Err(Error::NoConvergence { report });
    }
    Ok((state, report))
}

fn dense_solve(spec: &HamiltonianSpec, basis: SectorBasis) -> Result<(GroundStateVector, Vec<f64>)> {
    if basis.len() > DENSE_LIMIT {
        return Err(Error::DenseLimit { dim: basis.len(), limit: DENSE_LIMIT });
    }
    let eig = spec.dense_matrix(&basis)?.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let spectrum: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let amps: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    Ok((GroundStateVector::new(basis, amps, spectrum[0])?, spectrum))
}

/// Full dense diagonalization of a sector (at most [`DENSE_LIMIT`] states);
/// returns the ground state and the ascending spectrum.
pub fn dense_ground_state(spec: &HamiltonianSpec, total_sz: HalfInt) -> Result<(GroundStateVector, Vec<f64>)> {
    let basis = enumerate_sector(spec.lattice(), total_sz)?;
    if basis.is_empty() {
        return Err(Error::EmptySector);
    }
    dense_solve(spec, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinbasis::{neel_configuration, Boundary};

    fn mixed(n: usize, boundary: Boundary) -> LatticeSpec {
        LatticeSpec::alternating(n, HalfInt::HALF, HalfInt::THREE_HALVES, boundary).unwrap()
    }

    #[test]
    fn two_site_ground_state() {
        let spec = HamiltonianSpec::new(mixed(2, Boundary::Open));
        for method in [SolverMethod::Dense, SolverMethod::Lanczos] {
            let opts = SolverOptions { method, ..Default::default() };
            let (gs, report) = ground_state(&spec, HalfInt::ONE, &opts).unwrap();
            assert!((gs.energy() + 1.25).abs() < 1e-12, "{method:?}: {}", gs.energy());
            let neel = neel_configuration(spec.lattice()).unwrap();
            assert!((gs.amplitude(&neel) - 3f64.sqrt() / 2.0).abs() < 1e-12);
            let other = SpinConfiguration::from_levels(vec![1, 2]);
            assert!((gs.amplitude(&other) + 0.5).abs() < 1e-12);
            assert_eq!(gs.phase_convention(), PhaseConvention::NeelPositive);
            assert!(report.residual <= report.tolerance);
        }
    }

    #[test]
    fn spin_half_singlet() {
        let l = LatticeSpec::alternating(2, HalfInt::HALF, HalfInt::HALF, Boundary::Open).unwrap();
        let (gs, _) = dense_ground_state(&HamiltonianSpec::new(l), HalfInt::ZERO).unwrap();
        assert!((gs.energy() + 0.75).abs() < 1e-14);
    }

    #[test]
    fn spin_half_ring_of_eight() {
        // Heisenberg ring N=8: E0/J = -3.651093408937...
        let l = LatticeSpec::alternating(8, HalfInt::HALF, HalfInt::HALF, Boundary::Ring).unwrap();
        let (gs, spectrum) = dense_ground_state(&HamiltonianSpec::new(l), HalfInt::ZERO).unwrap();
        assert!((gs.energy() - (-3.651093408937)).abs() < 1e-11);
        assert!(spectrum.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn relative_amplitude_of_neel_is_one() {
        let spec = HamiltonianSpec::new(mixed(6, Boundary::Ring).with_field(0.1));
        let (gs, _) = ground_state(&spec, HalfInt::from_int(3), &SolverOptions::default()).unwrap();
        let neel = neel_configuration(spec.lattice()).unwrap();
        assert_eq!(gs.relative_amplitude(&neel), 1.0);
        let norm: f64 = gs.amplitudes().iter().map(|a| a * a).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        // a configuration from another sector
        let outside = SpinConfiguration::from_levels(vec![1, 3, 1, 3, 1, 3]);
        assert_eq!(gs.try_amplitude(&outside), None);
        assert_eq!(gs.amplitude(&outside), 0.0);
    }

    #[test]
    fn empty_sector_is_an_error() {
        let spec = HamiltonianSpec::new(mixed(2, Boundary::Open));
        assert!(matches!(ground_state(&spec, HalfInt::from_int(5), &SolverOptions::default()), Err(Error::EmptySector)));
    }

    #[test]
    fn iteration_cap_reports_failure() {
        let spec = HamiltonianSpec::new(mixed(8, Boundary::Ring).with_field(0.1));
        let opts = SolverOptions { method: SolverMethod::Lanczos, max_iterations: 3, ..Default::default() };
        match ground_state(&spec, HalfInt::from_int(4), &opts) {
            Err(Error::NoConvergence { report }) => assert!(report.iterations <= 4),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn lanczos_is_reproducible_for_a_seed() {
        let spec = HamiltonianSpec::new(mixed(8, Boundary::Ring).with_field(0.1));
        let opts = SolverOptions { method: SolverMethod::Lanczos, ..Default::default() };
        let (a, _) = ground_state(&spec, HalfInt::from_int(4), &opts).unwrap();
        let (b, _) = ground_state(&spec, HalfInt::from_int(4), &opts).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert_eq!(a.energy().to_bits(), b.energy().to_bits());
    }
}
