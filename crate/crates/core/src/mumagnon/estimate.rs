use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dictionary::StructureDictionary;
use super::structure::{parse_structures, ParsedConfiguration, Signature};
use crate::eigensolver::GroundStateVector;
use crate::error::Result;
use crate::spinbasis::{enumerate_sector_with, neel_level, neel_sector, Boundary, LatticeSpec, SectorBasis, SpinConfiguration, Sublattice};

fn chain_product(sigs: &[Signature], gaps: &[usize], cyclic: bool, dict: &StructureDictionary) -> f64 {
    let mut value = 1.0;
    for s in sigs {
        match dict.single(s) {
            Some(a) => value *= a,
            None => return 0.0,
        }
    }
    let k = sigs.len();
    for i in 0..k.saturating_sub(1) {
        value *= dict.beta(&sigs[i], &sigs[i + 1], gaps[i]);
    }
    if cyclic && k >= 2 {
        value *= dict.beta(&sigs[k - 1], &sigs[0], gaps[k - 1]);
    }
    value
}

/// Product estimate for an already parsed configuration.
pub fn estimate_parsed(parsed: &ParsedConfiguration, dict: &StructureDictionary) -> f64 {
    let structures = parsed.structures();
    if structures.is_empty() {
        return 1.0;
    }
    if structures.iter().any(|s| !s.closed) {
        return 0.0;
    }
    let sigs: Vec<Signature> = structures.iter().map(|s| s.signature.clone()).collect();
    let gaps = parsed.gaps();
    let cyclic = parsed.boundary == Boundary::Ring;
    let forward = chain_product(&sigs, &gaps, cyclic, dict);

    let k = sigs.len();
    let back_sigs: Vec<Signature> = sigs.iter().rev().map(Signature::reversed).collect();
    let mut back_gaps: Vec<usize> = gaps[..k - 1].iter().rev().copied().collect();
    if cyclic {
        back_gaps.push(gaps[k - 1]);
    }
    let backward = chain_product(&back_sigs, &back_gaps, cyclic, dict);
    if backward.abs() > forward.abs() {
        backward
    } else {
        forward
    }
}

/// Estimated `α_r` of a configuration: the product of dictionary amplitudes
/// of its structures times the pair factors of consecutive structures
/// (cyclically on a ring), taken in both reading directions; the estimate of
/// larger modulus wins. Unknown structures give 0, unknown pairs a factor 1.
pub fn approximate_relative_amplitude(
    lattice: &LatticeSpec,
    config: &SpinConfiguration,
    dict: &StructureDictionary,
) -> Result<f64> {
    Ok(estimate_parsed(&parse_structures(lattice, config)?, dict))
}

/// A-priori limits applied before any configuration is scored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateRules {
    /// Most small-spin sites allowed to differ from the Néel state.
    pub max_mumagnons: Option<usize>,
    /// Most large-spin sites allowed at `m = -s₂`.
    pub max_fully_lowered_large: Option<usize>,
}

impl Default for CandidateRules {
    fn default() -> Self {
        CandidateRules { max_mumagnons: Some(6), max_fully_lowered_large: Some(2) }
    }
}

impl CandidateRules {
    pub fn none() -> Self {
        CandidateRules { max_mumagnons: None, max_fully_lowered_large: None }
    }
}

fn scored_candidates(
    lattice: &LatticeSpec,
    dict: &StructureDictionary,
    threshold: f64,
    rules: &CandidateRules,
) -> Result<(SectorBasis, Vec<Option<f64>>)> {
    let m = neel_sector(lattice)?;
    let neel: Vec<u8> = (0..lattice.n_sites()).map(|k| neel_level(lattice, k)).collect();
    let max_mu = rules.max_mumagnons.unwrap_or(usize::MAX);
    let max_low = rules.max_fully_lowered_large.unwrap_or(usize::MAX);
    let basis = enumerate_sector_with(lattice, m, |prefix| {
        let (mut mu, mut low) = (0, 0);
        for (k, &n) in prefix.iter().enumerate() {
            match Sublattice::of_site(k) {
                Sublattice::Small if n != neel[k] => mu += 1,
                Sublattice::Large if n == 0 => low += 1,
                _ => {}
            }
        }
        mu <= max_mu && low <= max_low
    })?;

    let scores: Vec<Option<f64>> = (0..basis.len())
        .into_par_iter()
        .with_min_len(64)
        .map(|i| {
            let parsed = parse_structures(lattice, &basis.config(i)).ok()?;
            // a structure that alone falls below the cut cannot be rescued
            let hopeless = parsed
                .structures()
                .iter()
                .any(|s| dict.single(&s.signature).map_or(0.0, f64::abs) < threshold);
            if hopeless {
                return None;
            }
            let estimate = estimate_parsed(&parsed, dict);
            (estimate.abs() >= threshold).then_some(estimate)
        })
        .collect();
    Ok((basis, scores))
}

/// Néel-sector configurations that survive the a-priori rules and whose
/// estimated `|α_r|` reaches `threshold`, in ascending packed order.
pub fn generate_candidates(
    lattice: &LatticeSpec,
    dict: &StructureDictionary,
    threshold: f64,
    rules: &CandidateRules,
) -> Result<Vec<SpinConfiguration>> {
    let (basis, scores) = scored_candidates(lattice, dict, threshold, rules)?;
    Ok(scores.iter().enumerate().filter(|(_, s)| s.is_some()).map(|(i, _)| basis.config(i)).collect())
}

/// A normalized state on the retained candidates, with amplitudes
/// proportional to the estimated `α_r`.
#[derive(Clone, Debug)]
pub struct ApproxGroundState {
    basis: SectorBasis,
    alpha_r: Vec<f64>,
    normalization: f64,
    threshold: f64,
}

impl ApproxGroundState {
    pub fn lattice(&self) -> &LatticeSpec {
        self.basis.lattice()
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// `c` such that the state is `c · Σ α̃_r |config⟩`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn relative_amplitudes(&self) -> &[f64] {
        &self.alpha_r
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.alpha_r.iter().map(|a| a * self.normalization).collect()
    }

    pub fn amplitude(&self, config: &SpinConfiguration) -> f64 {
        self.basis.index_of(config).map_or(0.0, |i| self.alpha_r[i] * self.normalization)
    }

    /// `⟨approx|exact⟩`.
    pub fn overlap(&self, exact: &GroundStateVector) -> f64 {
        self.basis
            .configs()
            .zip(&self.alpha_r)
            .map(|(c, a)| a * self.normalization * exact.try_amplitude(&c).unwrap_or(0.0))
            .sum()
    }

    /// Writes `packed_hex,alpha_r,amplitude` rows in basis order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "packed_hex,alpha_r,amplitude")?;
        for (i, a) in self.alpha_r.iter().enumerate() {
            writeln!(out, "{:#x},{:.17e},{:.17e}", self.basis.code(i), a, a * self.normalization)?;
        }
        Ok(())
    }
}

/// Scores every candidate, keeps those at or above `threshold` and
/// normalizes.
pub fn approximate_ground_state(
    lattice: &LatticeSpec,
    dict: &StructureDictionary,
    threshold: f64,
    rules: &CandidateRules,
) -> Result<ApproxGroundState> {
    let (basis, scores) = scored_candidates(lattice, dict, threshold, rules)?;
    let mut codes = Vec::new();
    let mut alpha_r = Vec::new();
    for (i, s) in scores.iter().enumerate() {
        if let Some(a) = s {
            codes.push(basis.code(i));
            alpha_r.push(*a);
        }
    }
    let normalization = 1.0 / alpha_r.iter().map(|a| a * a).sum::<f64>().sqrt();
    let basis = SectorBasis::from_codes(lattice.clone(), basis.sector(), codes)?;
    Ok(ApproxGroundState { basis, alpha_r, normalization, threshold })
}
