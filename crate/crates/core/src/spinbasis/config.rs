use super::{HalfInt, LatticeSpec};
use crate::error::{Error, Result};

/// A classical z-basis product state.
///
/// `levels[k]` is the level index `n_k = m_k + s_k`, so `0` is the lowest
/// z-projection of site `k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinConfiguration {
    levels: Vec<u8>,
}

impl SpinConfiguration {
    pub fn from_levels(levels: Vec<u8>) -> Self {
        SpinConfiguration { levels }
    }

    /// Builds a configuration from per-site z-projections.
    pub fn from_projections(lattice: &LatticeSpec, m: &[HalfInt]) -> Result<Self> {
        if m.len() != lattice.n_sites() {
            return Err(Error::InvalidConfiguration(format!(
                "{} projections for {} sites",
                m.len(),
                lattice.n_sites()
            )));
        }
        let levels = m
            .iter()
            .zip(lattice.spins())
            .enumerate()
            .map(|(k, (&mk, &sk))| {
                if mk.abs() > sk || (mk + sk).twice() % 2 != 0 {
                    Err(Error::InvalidConfiguration(format!("site {k}: m = {mk} invalid for spin {sk}")))
                } else {
                    Ok(((mk + sk).twice() / 2) as u8)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpinConfiguration { levels })
    }

    pub fn levels(&self) -> &[u8] {
        &self.levels
    }

    pub fn level(&self, site: usize) -> u8 {
        self.levels[site]
    }

    pub fn set_level(&mut self, site: usize, level: u8) {
        self.levels[site] = level;
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// z-projection `m_k = n_k - s_k` of one site.
    pub fn projection(&self, lattice: &LatticeSpec, site: usize) -> HalfInt {
        HalfInt::from_int(self.levels[site] as i32) - lattice.spin(site)
    }

    pub fn projections(&self, lattice: &LatticeSpec) -> Vec<HalfInt> {
        (0..self.levels.len()).map(|k| self.projection(lattice, k)).collect()
    }

    /// Total magnetization `Σ_k (n_k - s_k)`.
    pub fn total_sz(&self, lattice: &LatticeSpec) -> HalfInt {
        HalfInt::from_int(self.levels.iter().map(|&n| n as i32).sum()) - lattice.total_spin()
    }

    pub fn validate(&self, lattice: &LatticeSpec) -> Result<()> {
        if self.levels.len() != lattice.n_sites() {
            return Err(Error::InvalidConfiguration(format!(
                "{} levels for {} sites",
                self.levels.len(),
                lattice.n_sites()
            )));
        }
        for (k, &n) in self.levels.iter().enumerate() {
            if n as usize >= lattice.local_dim(k) {
                return Err(Error::InvalidConfiguration(format!(
                    "site {k}: level {n} outside 0..{}",
                    lattice.local_dim(k)
                )));
            }
        }
        Ok(())
    }

    /// Projections formatted as rationals, e.g. `-1/2 3/2 -1/2 3/2`.
    pub fn display(&self, lattice: &LatticeSpec) -> String {
        self.projections(lattice).iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// Little-endian bit packing of configurations with `⌈log₂(2s+1)⌉` bits per
/// site, site 0 in the least-significant bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    offsets: Vec<u32>,
    widths: Vec<u32>,
}

impl Packing {
    pub fn new(lattice: &LatticeSpec) -> Result<Self> {
        let mut offsets = Vec::with_capacity(lattice.n_sites());
        let mut widths = Vec::with_capacity(lattice.n_sites());
        let mut offset = 0u32;
        for k in 0..lattice.n_sites() {
            let d = lattice.local_dim(k) as u32;
            let w = u32::BITS - (d - 1).leading_zeros();
            offsets.push(offset);
            widths.push(w);
            offset += w;
        }
        if offset > 64 {
            return Err(Error::InvalidLattice(format!("{offset} packed bits exceed 64")));
        }
        Ok(Packing { offsets, widths })
    }

    pub fn total_bits(&self) -> u32 {
        self.offsets.last().map_or(0, |o| o + self.widths.last().unwrap())
    }

    pub fn width(&self, site: usize) -> u32 {
        self.widths[site]
    }

    pub fn pack(&self, config: &SpinConfiguration) -> u64 {
        config
            .levels
            .iter()
            .zip(&self.offsets)
            .fold(0u64, |acc, (&n, &off)| acc | ((n as u64) << off))
    }

    pub fn unpack(&self, code: u64) -> SpinConfiguration {
        let levels = self
            .offsets
            .iter()
            .zip(&self.widths)
            .map(|(&off, &w)| ((code >> off) & ((1u64 << w) - 1)) as u8)
            .collect();
        SpinConfiguration { levels }
    }

    pub fn level(&self, code: u64, site: usize) -> u8 {
        ((code >> self.offsets[site]) & ((1u64 << self.widths[site]) - 1)) as u8
    }

    /// Replaces the level of one site inside a packed code.
    pub fn with_level(&self, code: u64, site: usize, level: u8) -> u64 {
        let mask = ((1u64 << self.widths[site]) - 1) << self.offsets[site];
        (code & !mask) | ((level as u64) << self.offsets[site])
    }
}
