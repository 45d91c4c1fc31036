//! Lattices, classical configurations and magnetization sectors.
//!
//! Level indices follow `n_k = m_k + s_k` (0 is the lowest z-projection),
//! configurations pack little-endian with site 0 in the lowest bits, and a
//! sector basis is ordered by ascending packed value. Every other module
//! relies on these three conventions.

mod config;
mod export;
mod half;
mod lattice;
mod sector;

pub use config::{Packing, SpinConfiguration};
pub use export::{write_sector_csv, SECTOR_CSV_HEADER};
pub use half::HalfInt;
pub use lattice::{AlternatingPattern, Boundary, LatticeSpec, Sublattice};
pub use sector::{enumerate_sector, enumerate_sector_with, MagnetizationSector, SectorBasis};

use crate::error::Result;

/// Level index of a site in the Néel state: small spins at `-s₁`, large
/// spins at `+s₂`.
pub fn neel_level(lattice: &LatticeSpec, site: usize) -> u8 {
    match Sublattice::of_site(site) {
        Sublattice::Small => 0,
        Sublattice::Large => lattice.spin(site).twice() as u8,
    }
}

/// The Néel configuration `|-s₁, +s₂, -s₁, +s₂, ...⟩` of a ferrimagnetic
/// lattice.
pub fn neel_configuration(lattice: &LatticeSpec) -> Result<SpinConfiguration> {
    lattice.ferrimagnetic_pattern()?;
    Ok(antiferro_reference(lattice))
}

/// Magnetization `N(s₂ - s₁)/2` of the Néel state.
pub fn neel_sector(lattice: &LatticeSpec) -> Result<HalfInt> {
    Ok(neel_configuration(lattice)?.total_sz(lattice))
}

// Néel-like reference for any alternating lattice (equal spins included).
pub(crate) fn antiferro_reference(lattice: &LatticeSpec) -> SpinConfiguration {
    SpinConfiguration::from_levels((0..lattice.n_sites()).map(|k| neel_level(lattice, k)).collect())
}

/// Per-site deviation `m_k - m_k(Néel)` as an integer number of ladder steps.
pub fn site_deviations(lattice: &LatticeSpec, config: &SpinConfiguration) -> Vec<i32> {
    config
        .levels()
        .iter()
        .enumerate()
        .map(|(k, &n)| n as i32 - neel_level(lattice, k) as i32)
        .collect()
}

/// Cumulative magnetization relative to the Néel state,
/// `m_j = Σ_{k≤j} m_k - Σ_{k≤j} m_k(Néel)`, one entry per site.
pub fn cumulative_deviation(lattice: &LatticeSpec, config: &SpinConfiguration) -> Result<Vec<HalfInt>> {
    lattice.ferrimagnetic_pattern()?;
    let mut acc = 0;
    Ok(site_deviations(lattice, config)
        .into_iter()
        .map(|d| {
            acc += d;
            HalfInt::from_int(acc)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed(n: usize) -> LatticeSpec {
        LatticeSpec::alternating(n, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Ring).unwrap()
    }

    fn config(l: &LatticeSpec, m: &[&str]) -> SpinConfiguration {
        let m: Vec<HalfInt> = m.iter().map(|s| s.parse().unwrap()).collect();
        SpinConfiguration::from_projections(l, &m).unwrap()
    }

    #[test]
    fn neel_two_sites() {
        let l = mixed(2);
        let c = neel_configuration(&l).unwrap();
        assert_eq!(c.display(&l), "-1/2 3/2");
        assert_eq!(c.total_sz(&l), HalfInt::ONE);
    }

    #[test]
    fn neel_sector_values() {
        assert_eq!(neel_sector(&mixed(14)).unwrap(), HalfInt::from_int(7));
        assert_eq!(neel_sector(&mixed(6)).unwrap(), HalfInt::from_int(3));
        let l = LatticeSpec::alternating(4, HalfInt::HALF, HalfInt::ONE, Boundary::Open).unwrap();
        let c = neel_configuration(&l).unwrap();
        assert_eq!(c.display(&l), "-1/2 1 -1/2 1");
        assert_eq!(c.total_sz(&l), HalfInt::ONE);
    }

    #[test]
    fn neel_rejects_non_ferrimagnets() {
        let l = LatticeSpec::alternating(4, HalfInt::HALF, HalfInt::HALF, Boundary::Ring).unwrap();
        assert!(neel_configuration(&l).is_err());
        let l = LatticeSpec::new(vec![HalfInt::HALF, HalfInt::ONE, HalfInt::ONE, HalfInt::HALF], Boundary::Ring)
            .unwrap();
        assert!(neel_configuration(&l).is_err());
    }

    #[test]
    fn cumulative_deviation_examples() {
        let l = mixed(6);
        let neel = neel_configuration(&l).unwrap();
        assert!(cumulative_deviation(&l, &neel).unwrap().iter().all(|&m| m == HalfInt::ZERO));

        let mu = config(&l, &["1/2", "1/2", "-1/2", "3/2", "-1/2", "3/2"]);
        let ints: Vec<i32> = cumulative_deviation(&l, &mu).unwrap().iter().map(|h| h.twice() / 2).collect();
        assert_eq!(ints, vec![1, 0, 0, 0, 0, 0]);

        // split micromagnon with a two-site gap
        let split = config(&l, &["1/2", "3/2", "-1/2", "1/2", "-1/2", "3/2"]);
        let ints: Vec<i32> = cumulative_deviation(&l, &split).unwrap().iter().map(|h| h.twice() / 2).collect();
        assert_eq!(ints, vec![1, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn last_cumulative_entry_vanishes_only_in_neel_sector() {
        let l = mixed(4);
        let m_neel = neel_sector(&l).unwrap();
        let total = l.total_spin();
        let mut m = -total;
        while m <= total {
            for c in enumerate_sector(&l, m).unwrap().configs() {
                let last = *cumulative_deviation(&l, &c).unwrap().last().unwrap();
                assert_eq!(last == HalfInt::ZERO, m == m_neel);
            }
            m += HalfInt::ONE;
        }
    }
}
