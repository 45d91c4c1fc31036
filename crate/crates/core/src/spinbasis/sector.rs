use serde::{Deserialize, Serialize};

use super::{HalfInt, LatticeSpec, Packing, SpinConfiguration};
use crate::error::Result;

/// Eigenspace label of total `S_z`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MagnetizationSector {
    pub total_sz: HalfInt,
}

impl MagnetizationSector {
    pub fn new(total_sz: HalfInt) -> Self {
        MagnetizationSector { total_sz }
    }

    /// Whether a lattice can host this magnetization at all.
    pub fn is_feasible(&self, lattice: &LatticeSpec) -> bool {
        let total = lattice.total_spin();
        self.total_sz.abs() <= total && (self.total_sz + total).is_integer()
    }
}

/// All configurations of one magnetization sector, in ascending packed order.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    lattice: LatticeSpec,
    sector: MagnetizationSector,
    packing: Packing,
    codes: Vec<u64>,
}

impl SectorBasis {
    /// Builds a basis from arbitrary packed codes (sorted and deduplicated).
    pub fn from_codes(lattice: LatticeSpec, sector: MagnetizationSector, mut codes: Vec<u64>) -> Result<Self> {
        let packing = Packing::new(&lattice)?;
        codes.sort_unstable();
        codes.dedup();
        Ok(SectorBasis { lattice, sector, packing, codes })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn sector(&self) -> MagnetizationSector {
        self.sector
    }

    pub fn packing(&self) -> &Packing {
        &self.packing
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn code(&self, index: usize) -> u64 {
        self.codes[index]
    }

    pub fn config(&self, index: usize) -> SpinConfiguration {
        self.packing.unpack(self.codes[index])
    }

    pub fn configs(&self) -> impl Iterator<Item = SpinConfiguration> + '_ {
        self.codes.iter().map(|&c| self.packing.unpack(c))
    }

    pub fn index_of_code(&self, code: u64) -> Option<usize> {
        self.codes.binary_search(&code).ok()
    }

    pub fn index_of(&self, config: &SpinConfiguration) -> Option<usize> {
        if config.len() != self.lattice.n_sites() {
            return None;
        }
        self.index_of_code(self.packing.pack(config))
    }
}

/// Enumerates the sector `M` exhaustively. An infeasible `M` yields an empty
/// basis.
pub fn enumerate_sector(lattice: &LatticeSpec, total_sz: HalfInt) -> Result<SectorBasis> {
    enumerate_sector_with(lattice, total_sz, |_| true)
}

/// Sector enumeration with an extra pruning predicate.
///
/// `keep_partial` sees the levels assigned so far (sites `0..len`) and may
/// return `false` to cut the whole subtree. It must be monotone: once a
/// prefix is rejected, every extension is rejected too.
pub fn enumerate_sector_with<F>(lattice: &LatticeSpec, total_sz: HalfInt, keep_partial: F) -> Result<SectorBasis>
where
    F: Fn(&[u8]) -> bool,
{
    let packing = Packing::new(lattice)?;
    let sector = MagnetizationSector::new(total_sz);
    let mut codes = Vec::new();
    if sector.is_feasible(lattice) {
        let n = lattice.n_sites();
        // twice the magnetization reachable by sites k.. at most
        let mut tail = vec![0i32; n + 1];
        for k in (0..n).rev() {
            tail[k] = tail[k + 1] + lattice.spin(k).twice();
        }
        let target_levels = (total_sz + lattice.total_spin()).twice() / 2;
        let mut levels = Vec::with_capacity(n);
        dfs(lattice, &packing, &tail, target_levels, &mut levels, 0, &keep_partial, &mut codes);
    }
    codes.sort_unstable();
    Ok(SectorBasis { lattice: lattice.clone(), sector, packing, codes })
}

// Works in level space: Σ n_k must equal `target`, each n_k ∈ 0..=2s_k, and
// the sites after k can contribute at most `tail[k+1]` levels in total.
#[allow(clippy::too_many_arguments)]
fn dfs<F: Fn(&[u8]) -> bool>(
    lattice: &LatticeSpec,
    packing: &Packing,
    tail: &[i32],
    target: i32,
    levels: &mut Vec<u8>,
    sum: i32,
    keep_partial: &F,
    out: &mut Vec<u64>,
) {
    let k = levels.len();
    if k == lattice.n_sites() {
        if sum == target {
            out.push(packing.pack(&SpinConfiguration::from_levels(levels.clone())));
        }
        return;
    }
    let rest_max = tail[k + 1];
    let top = lattice.spin(k).twice();
    for n in 0..=top {
        let s = sum + n;
        if s > target {
            break;
        }
        if target - s > rest_max {
            continue;
        }
        levels.push(n as u8);
        if keep_partial(levels) {
            dfs(lattice, packing, tail, target, levels, s, keep_partial, out);
        }
        levels.pop();
    }
}
