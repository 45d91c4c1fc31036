use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spinbasis::{antiferro_reference, site_deviations, Boundary, HalfInt, LatticeSpec, SpinConfiguration, Sublattice};

/// Shape of a structure, independent of where it sits: the sublattice of
/// its first site and the z-projections of its sites in increasing site
/// order.
///
/// Serialized as `"small:1/2,1/2"` (a small-spin site at `+½` followed by a
/// large-spin site at `+½`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub start: Sublattice,
    pub m: Vec<HalfInt>,
}

impl Signature {
    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// The same structure read from right to left.
    pub fn reversed(&self) -> Signature {
        let last = if self.m.len() % 2 == 1 { self.start } else { self.start.other() };
        Signature { start: last, m: self.m.iter().rev().copied().collect() }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.start {
            Sublattice::Small => "small",
            Sublattice::Large => "large",
        };
        let m: Vec<String> = self.m.iter().map(|v| v.to_string()).collect();
        write!(f, "{tag}:{}", m.join(","))
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("signature {s:?} lacks a parity tag")))?;
        let start = match tag.trim() {
            "small" => Sublattice::Small,
            "large" => Sublattice::Large,
            other => return Err(Error::Parse(format!("unknown parity tag {other:?}"))),
        };
        let m = rest
            .split(',')
            .map(|t| t.trim().parse::<HalfInt>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Signature { start, m })
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A structure at a definite place on the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    /// First site (for rings the window may wrap past site `N-1`).
    pub start: usize,
    pub signature: Signature,
    /// `false` for a trailing structure whose cumulative deviation never
    /// returned to the sea level (configurations outside the Néel sector).
    pub closed: bool,
}

impl Structure {
    pub fn len(&self) -> usize {
        self.signature.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signature.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    /// A run of sites in the Néel pattern.
    Sea(usize),
    Structure(Structure),
}

/// A configuration cut into Néel sea and structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedConfiguration {
    /// Site where the first piece begins.
    pub origin: usize,
    pub pieces: Vec<Piece>,
    pub boundary: Boundary,
    pub n_sites: usize,
    /// Whether the configuration has the Néel magnetization.
    pub in_neel_sector: bool,
}

impl ParsedConfiguration {
    pub fn structures(&self) -> Vec<&Structure> {
        self.pieces
            .iter()
            .filter_map(|p| match p {
                Piece::Structure(s) => Some(s),
                Piece::Sea(_) => None,
            })
            .collect()
    }

    /// Sea widths between consecutive structures: cyclic on a ring (one gap
    /// per structure), internal only on an open chain. With no structures
    /// the whole lattice is one gap.
    pub fn gaps(&self) -> Vec<usize> {
        let n_struct = self.structures().len();
        if n_struct == 0 {
            return vec![self.n_sites];
        }
        let mut gaps = Vec::new();
        let mut seen = 0;
        let mut run = 0;
        let mut leading = 0;
        for p in &self.pieces {
            match p {
                Piece::Sea(len) => run += len,
                Piece::Structure(_) => {
                    if seen == 0 {
                        leading = run;
                    } else {
                        gaps.push(run);
                    }
                    seen += 1;
                    run = 0;
                }
            }
        }
        if self.boundary == Boundary::Ring && self.in_neel_sector {
            gaps.push(run + leading);
        }
        gaps
    }

    /// Rebuilds the configuration from its pieces.
    pub fn reassemble(&self, lattice: &LatticeSpec) -> SpinConfiguration {
        let n = self.n_sites;
        let mut config = antiferro_reference(lattice);
        let mut pos = self.origin;
        for p in &self.pieces {
            match p {
                Piece::Sea(len) => pos += len,
                Piece::Structure(s) => {
                    for (i, m) in s.signature.m.iter().enumerate() {
                        let site = (s.start + i) % n;
                        config.set_level(site, (*m + lattice.spin(site)).twice() as u8 / 2);
                    }
                    pos += s.len();
                }
            }
        }
        debug_assert_eq!(pos, self.origin + n);
        config
    }
}

/// Cuts a configuration into Néel sea and structures.
///
/// A structure starts where the cumulative deviation from the Néel state
/// leaves the sea level and ends at the first site where it returns. On an
/// open chain the sea level is 0. On a ring the origin is arbitrary, so the
/// sea level is the cumulative value taken at the most sites (ties: the one
/// closest to 0, then the smaller), which keeps a structure wrapping past
/// site `N-1` in one piece.
///
/// Configurations outside the Néel sector parse like open chains from site 0
/// and end in an unclosed structure.
pub fn parse_structures(lattice: &LatticeSpec, config: &SpinConfiguration) -> Result<ParsedConfiguration> {
    lattice.ferrimagnetic_pattern()?;
    config.validate(lattice)?;
    let n = lattice.n_sites();
    let dev = site_deviations(lattice, config);
    let mut cum = Vec::with_capacity(n);
    let mut acc = 0;
    for d in &dev {
        acc += d;
        cum.push(acc);
    }
    let in_neel_sector = acc == 0;

    let (origin, level) = if lattice.boundary() == Boundary::Ring && in_neel_sector {
        let mut counts: std::collections::BTreeMap<i32, usize> = std::collections::BTreeMap::new();
        for &c in &cum {
            *counts.entry(c).or_default() += 1;
        }
        let (&level, _) = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.abs().cmp(&a.0.abs())).then(b.0.cmp(a.0)))
            .expect("non-empty lattice");
        let boundary = cum.iter().position(|&c| c == level).expect("level is attained");
        ((boundary + 1) % n, level)
    } else {
        (0, 0)
    };

    let mut pieces = Vec::new();
    let mut sea = 0;
    let mut open: Option<(usize, Vec<HalfInt>)> = None;
    for pos in 0..n {
        let site = (origin + pos) % n;
        let c = cum[site];
        match open.as_mut() {
            None if c == level => sea += 1,
            None => {
                if sea > 0 {
                    pieces.push(Piece::Sea(sea));
                    sea = 0;
                }
                open = Some((site, vec![config.projection(lattice, site)]));
            }
            Some((_, m)) => {
                m.push(config.projection(lattice, site));
                if c == level {
                    let (start, m) = open.take().expect("open structure");
                    pieces.push(Piece::Structure(Structure {
                        start,
                        signature: Signature { start: Sublattice::of_site(start), m },
                        closed: true,
                    }));
                }
            }
        }
    }
    if sea > 0 {
        pieces.push(Piece::Sea(sea));
    }
    if let Some((start, m)) = open {
        pieces.push(Piece::Structure(Structure {
            start,
            signature: Signature { start: Sublattice::of_site(start), m },
            closed: false,
        }));
    }
    Ok(ParsedConfiguration { origin, pieces, boundary: lattice.boundary(), n_sites: n, in_neel_sector })
}

/// Number of small-spin sites that differ from the Néel state.
pub fn count_mumagnons(lattice: &LatticeSpec, config: &SpinConfiguration) -> usize {
    count_changed(lattice, config, Sublattice::Small)
}

/// Number of large-spin sites that differ from the Néel state.
pub fn count_changed_large_spins(lattice: &LatticeSpec, config: &SpinConfiguration) -> usize {
    count_changed(lattice, config, Sublattice::Large)
}

fn count_changed(lattice: &LatticeSpec, config: &SpinConfiguration, which: Sublattice) -> usize {
    site_deviations(lattice, config)
        .iter()
        .enumerate()
        .filter(|&(k, &d)| d != 0 && Sublattice::of_site(k) == which)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mumagnon::place_mumagnons;
    use crate::spinbasis::{enumerate_sector, neel_configuration, neel_sector};
    use proptest::prelude::*;

    fn ring(n: usize) -> LatticeSpec {
        LatticeSpec::alternating(n, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Ring).unwrap()
    }

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    #[test]
    fn signature_text_round_trip() {
        let s = sig("small:1/2,-1/2,1/2");
        assert_eq!(s.to_string(), "small:1/2,-1/2,1/2");
        assert_eq!(serde_json::to_string(&s).unwrap(), "\"small:1/2,-1/2,1/2\"");
        assert!("middle:1/2".parse::<Signature>().is_err());
        assert_eq!(sig("small:1/2,1/2").reversed(), sig("large:1/2,1/2"));
        assert_eq!(sig("small:1/2,-1/2,1/2").reversed(), sig("small:1/2,-1/2,1/2"));
    }

    #[test]
    fn neel_is_all_sea() {
        let l = ring(14);
        let p = parse_structures(&l, &neel_configuration(&l).unwrap()).unwrap();
        assert!(p.structures().is_empty());
        assert_eq!(p.gaps(), vec![14]);
    }

    #[test]
    fn single_mumagnon() {
        let l = ring(14);
        let c = place_mumagnons(&l, &[(0, 1)]).unwrap();
        let p = parse_structures(&l, &c).unwrap();
        let s = p.structures();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].signature, sig("small:1/2,1/2"));
        assert_eq!(s[0].start, 0);
        assert_eq!(p.gaps(), vec![12]);

        // lowering the left neighbour gives the mirrored shape
        let c = place_mumagnons(&l, &[(4, 3)]).unwrap();
        let p = parse_structures(&l, &c).unwrap();
        assert_eq!(p.structures()[0].signature, sig("large:1/2,1/2"));
        assert_eq!(p.structures()[0].start, 3);
    }

    #[test]
    fn structure_wrapping_the_origin() {
        let l = ring(8);
        let c = place_mumagnons(&l, &[(0, 7)]).unwrap();
        let p = parse_structures(&l, &c).unwrap();
        let s = p.structures();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].start, 7);
        assert_eq!(s[0].signature, sig("large:1/2,1/2"));
        assert_eq!(p.reassemble(&l), c);
    }

    #[test]
    fn split_mumagnon_spans_gap_plus_two() {
        let l = ring(14);
        for d in [2usize, 4, 6] {
            let c = place_mumagnons(&l, &[(0, 1 + d)]).unwrap();
            let s = parse_structures(&l, &c).unwrap();
            let s = s.structures();
            assert_eq!(s.len(), 1);
            assert_eq!(s[0].len(), d + 2);
        }
    }

    #[test]
    fn overlapping_and_neighbouring_pairs() {
        let l = ring(14);
        let overlapping = place_mumagnons(&l, &[(0, 1), (2, 1)]).unwrap();
        assert_eq!(count_mumagnons(&l, &overlapping), 2);
        assert_eq!(count_changed_large_spins(&l, &overlapping), 1);
        let p = parse_structures(&l, &overlapping).unwrap();
        assert_eq!(p.structures().len(), 1);
        assert_eq!(p.structures()[0].signature, sig("small:1/2,-1/2,1/2"));

        let neighbours = place_mumagnons(&l, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(count_mumagnons(&l, &neighbours), 2);
        assert_eq!(count_changed_large_spins(&l, &neighbours), 2);
        let p = parse_structures(&l, &neighbours).unwrap();
        assert_eq!(p.structures().len(), 2);
        let mut gaps = p.gaps();
        gaps.sort();
        assert_eq!(gaps, vec![0, 10]);

        let neel = neel_configuration(&l).unwrap();
        assert_eq!((count_mumagnons(&l, &neel), count_changed_large_spins(&l, &neel)), (0, 0));
    }

    #[test]
    fn outside_the_sector_is_flagged() {
        let l = ring(6);
        let mut c = neel_configuration(&l).unwrap();
        c.set_level(2, 1);
        let p = parse_structures(&l, &c).unwrap();
        assert!(!p.in_neel_sector);
        assert!(!p.structures().last().unwrap().closed);
        assert_eq!(p.reassemble(&l), c);
    }

    #[test]
    fn round_trip_every_sector_configuration() {
        for n in [4usize, 6, 8, 10, 12] {
            for boundary in [Boundary::Ring, Boundary::Open] {
                let l = LatticeSpec::alternating(n, HalfInt::HALF, HalfInt::THREE_HALVES, boundary).unwrap();
                let basis = enumerate_sector(&l, neel_sector(&l).unwrap()).unwrap();
                for c in basis.configs() {
                    let p = parse_structures(&l, &c).unwrap();
                    assert_eq!(p.reassemble(&l), c);
                    let covered: usize = p
                        .pieces
                        .iter()
                        .map(|x| match x {
                            Piece::Sea(k) => *k,
                            Piece::Structure(s) => s.len(),
                        })
                        .sum();
                    assert_eq!(covered, n);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn structures_close_and_reassemble(pick in 0usize..4904) {
            let l = ring(12);
            let basis = enumerate_sector(&l, neel_sector(&l).unwrap()).unwrap();
            let c = basis.config(pick % basis.len());
            let p = parse_structures(&l, &c).unwrap();
            prop_assert_eq!(p.reassemble(&l), c);
            prop_assert!(p.structures().iter().all(|s| s.closed));
            prop_assert_eq!(p.gaps().len(), p.structures().len().max(1));
        }
    }
}
