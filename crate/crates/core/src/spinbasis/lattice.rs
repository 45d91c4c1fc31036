use serde::{Deserialize, Serialize};

use super::HalfInt;
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Ring,
    Open,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Ring => f.write_str("ring"),
            Boundary::Open => f.write_str("open"),
        }
    }
}

/// Which of the two alternating sublattices a site belongs to.
///
/// Sites are indexed from 0; even indices carry the small spin `s₁`, odd
/// indices the large spin `s₂`. In 1-based language this is "site 1 is a
/// spin-s₁ site".
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sublattice {
    Small,
    Large,
}

impl Sublattice {
    pub fn of_site(site: usize) -> Self {
        if site.is_multiple_of(2) {
            Sublattice::Small
        } else {
            Sublattice::Large
        }
    }

    pub fn other(self) -> Self {
        match self {
            Sublattice::Small => Sublattice::Large,
            Sublattice::Large => Sublattice::Small,
        }
    }
}

/// Geometry, spin magnitudes and couplings of a one-dimensional lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    spins: Vec<HalfInt>,
    boundary: Boundary,
    coupling: f64,
    field: f64,
}

/// The two magnitudes of an alternating lattice, `small` on even (0-based)
/// sites.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct AlternatingPattern {
    pub small: HalfInt,
    pub large: HalfInt,
}

impl LatticeSpec {
    /// A lattice with arbitrary per-site spins, `J = 1` and `B = 0`.
    pub fn new(spins: Vec<HalfInt>, boundary: Boundary) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::InvalidLattice("no sites".into()));
        }
        for (k, s) in spins.iter().enumerate() {
            if s.twice() <= 0 {
                return Err(Error::InvalidLattice(format!(
                    "site {k}: spin magnitude {s} is not a positive half-integer"
                )));
            }
            if s.twice() > 255 {
                return Err(Error::InvalidLattice(format!("site {k}: spin {s} is too large")));
            }
        }
        Ok(LatticeSpec { spins, boundary, coupling: 1.0, field: 0.0 })
    }

    /// `n_sites` sites alternating `small, large, small, ...`.
    pub fn alternating(n_sites: usize, small: HalfInt, large: HalfInt, boundary: Boundary) -> Result<Self> {
        if n_sites == 0 || !n_sites.is_multiple_of(2) {
            return Err(Error::InvalidLattice(format!(
                "alternating lattices need an even, positive number of sites (got {n_sites})"
            )));
        }
        let spins = (0..n_sites).map(|k| if k % 2 == 0 { small } else { large }).collect();
        Self::new(spins, boundary)
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_field(mut self, field: f64) -> Self {
        self.field = field;
        self
    }

    pub fn n_sites(&self) -> usize {
        self.spins.len()
    }

    pub fn spins(&self) -> &[HalfInt] {
        &self.spins
    }

    pub fn spin(&self, site: usize) -> HalfInt {
        self.spins[site]
    }

    /// Local Hilbert-space dimension `2s + 1` of a site.
    pub fn local_dim(&self, site: usize) -> usize {
        self.spins[site].twice() as usize + 1
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn total_spin(&self) -> HalfInt {
        self.spins.iter().sum()
    }

    /// Nearest-neighbour bonds; a ring adds the closing bond `(N-1, 0)`.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites();
        let mut bonds: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|k| (k, k + 1)).collect();
        if self.boundary == Boundary::Ring && n >= 2 {
            bonds.push((n - 1, 0));
        }
        bonds
    }

    /// The alternating pattern if the lattice is one (even N, strict
    /// alternation, possibly with equal magnitudes).
    pub fn alternating_pattern(&self) -> Option<AlternatingPattern> {
        let n = self.n_sites();
        if !n.is_multiple_of(2) {
            return None;
        }
        let (small, large) = (self.spins[0], *self.spins.get(1)?);
        let alternates = self
            .spins
            .iter()
            .enumerate()
            .all(|(k, &s)| s == if k % 2 == 0 { small } else { large });
        alternates.then_some(AlternatingPattern { small, large })
    }

    /// The pattern of a ferrimagnet: alternating with `s₁ < s₂`.
    pub fn ferrimagnetic_pattern(&self) -> Result<AlternatingPattern> {
        match self.alternating_pattern() {
            Some(p) if p.small < p.large => Ok(p),
            Some(p) => Err(Error::UnsupportedPattern(format!(
                "alternating spins ({}, {}) do not satisfy s1 < s2",
                p.small, p.large
            ))),
            None => Err(Error::UnsupportedPattern("lattice is not an even alternating chain".into())),
        }
    }

    /// Short label used in headers, e.g. `1/2,3/2` for an alternating lattice.
    pub fn spin_label(&self) -> String {
        match self.alternating_pattern() {
            Some(p) => format!("{},{}", p.small, p.large),
            None => self.spins.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
        }
    }

    pub(crate) fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites() {
            Err(Error::SiteOutOfRange { site, n_sites: self.n_sites() })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_requires_even_sites() {
        assert!(LatticeSpec::alternating(5, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Ring).is_err());
        let l = LatticeSpec::alternating(4, HalfInt::HALF, HalfInt::ONE, Boundary::Open).unwrap();
        assert_eq!(l.local_dim(0), 2);
        assert_eq!(l.local_dim(1), 3);
        assert_eq!(l.bonds(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn ring_adds_closing_bond() {
        let l = LatticeSpec::alternating(4, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Ring).unwrap();
        assert_eq!(l.bonds().last(), Some(&(3, 0)));
        assert_eq!(l.bonds().len(), 4);
    }

    #[test]
    fn ferrimagnetic_pattern_rejects_equal_spins() {
        let l = LatticeSpec::alternating(4, HalfInt::HALF, HalfInt::HALF, Boundary::Ring).unwrap();
        assert!(l.alternating_pattern().is_some());
        assert!(matches!(l.ferrimagnetic_pattern(), Err(Error::UnsupportedPattern(_))));
    }

    #[test]
    fn rejects_non_positive_spin() {
        assert!(LatticeSpec::new(vec![HalfInt::ZERO, HalfInt::HALF], Boundary::Open).is_err());
    }
}
