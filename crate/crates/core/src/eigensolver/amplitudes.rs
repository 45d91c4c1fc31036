use std::collections::BTreeMap;

use super::GroundStateVector;
use crate::spinbasis::{Boundary, LatticeSpec, SpinConfiguration};

/// One entry of [`top_amplitudes`].
#[derive(Clone, Debug, PartialEq)]
pub struct RankedAmplitude {
    /// The configuration itself, or the orbit representative (smallest
    /// packed code) when grouped.
    pub config: SpinConfiguration,
    pub amplitude: f64,
    /// Number of configurations merged into this entry.
    pub orbit_size: usize,
}

// Site permutations of the lattice that keep every spin magnitude in place:
// translations and reflections of a ring, reversal of an open chain.
fn symmetry_maps(lattice: &LatticeSpec) -> Vec<Vec<usize>> {
    let n = lattice.n_sites();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    match lattice.boundary() {
        Boundary::Ring => {
            for t in 0..n {
                maps.push((0..n).map(|k| (k + t) % n).collect());
                maps.push((0..n).map(|k| (t + n - k) % n).collect());
            }
        }
        Boundary::Open => {
            maps.push((0..n).collect());
            maps.push((0..n).map(|k| n - 1 - k).collect());
        }
    }
    maps.retain(|p| p.iter().enumerate().all(|(k, &j)| lattice.spin(k) == lattice.spin(j)));
    maps.sort();
    maps.dedup();
    maps
}

fn permute(config: &SpinConfiguration, map: &[usize]) -> SpinConfiguration {
    let mut levels = vec![0u8; map.len()];
    for (k, &j) in map.iter().enumerate() {
        levels[j] = config.level(k);
    }
    SpinConfiguration::from_levels(levels)
}

/// All images of `config` under the magnitude-preserving translations and
/// reflections of the lattice, deduplicated and sorted.
pub fn symmetry_orbit(lattice: &LatticeSpec, config: &SpinConfiguration) -> Vec<SpinConfiguration> {
    let mut orbit: Vec<SpinConfiguration> = symmetry_maps(lattice).iter().map(|m| permute(config, m)).collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

/// The `k` largest amplitudes by modulus (ties in ascending packed order).
///
/// With `grouped`, configurations related by a lattice symmetry are merged
/// into one entry carrying the representative's amplitude.
pub fn top_amplitudes(state: &GroundStateVector, k: usize, grouped: bool) -> Vec<RankedAmplitude> {
    let basis = state.basis();
    let amps = state.amplitudes();
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&a, &b| amps[b].abs().total_cmp(&amps[a].abs()).then(basis.code(a).cmp(&basis.code(b))));

    if !grouped {
        return order
            .into_iter()
            .take(k)
            .map(|i| RankedAmplitude { config: basis.config(i), amplitude: amps[i], orbit_size: 1 })
            .collect();
    }

    let maps = symmetry_maps(basis.lattice());
    let packing = basis.packing();
    let mut seen: BTreeMap<u64, ()> = BTreeMap::new();
    let mut out = Vec::new();
    for i in order {
        if out.len() >= k {
            break;
        }
        if seen.contains_key(&basis.code(i)) {
            continue;
        }
        let config = basis.config(i);
        let mut codes: Vec<u64> = maps.iter().map(|m| packing.pack(&permute(&config, m))).collect();
        codes.sort_unstable();
        codes.dedup();
        for &c in &codes {
            seen.insert(c, ());
        }
        let rep = codes[0];
        let amplitude = basis.index_of_code(rep).map_or(amps[i], |j| amps[j]);
        out.push(RankedAmplitude { config: packing.unpack(rep), amplitude, orbit_size: codes.len() });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::dense_ground_state;
    use crate::hamiltonian::HamiltonianSpec;
    use crate::spinbasis::{neel_configuration, HalfInt};

    fn ring(n: usize) -> LatticeSpec {
        LatticeSpec::alternating(n, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Ring).unwrap()
    }

    #[test]
    fn ring_symmetries_preserve_sublattices() {
        // 3 even translations x 2 reflections
        assert_eq!(symmetry_maps(&ring(6)).len(), 6);
        let open = LatticeSpec::alternating(6, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Open).unwrap();
        assert_eq!(symmetry_maps(&open).len(), 1);
        let uniform = LatticeSpec::alternating(6, HalfInt::HALF, HalfInt::HALF, Boundary::Open).unwrap();
        assert_eq!(symmetry_maps(&uniform).len(), 2);
    }

    #[test]
    fn single_magnon_orbit_has_n_over_two_members() {
        let l = ring(8);
        let mut c = neel_configuration(&l).unwrap();
        c.set_level(0, 1);
        c.set_level(1, 2);
        // the reflection of (raise 0, lower 1) is (raise 0, lower 7)
        assert_eq!(symmetry_orbit(&l, &c).len(), 8);
    }

    #[test]
    fn grouped_and_ungrouped_rankings() {
        let spec = HamiltonianSpec::new(ring(8).with_field(0.1));
        let (gs, _) = dense_ground_state(&spec, HalfInt::from_int(4)).unwrap();
        let top = top_amplitudes(&gs, 2, true);
        assert_eq!(top[0].config, neel_configuration(spec.lattice()).unwrap());
        assert_eq!(top[0].orbit_size, 1);
        assert_eq!(top[1].orbit_size, 8);
        assert_eq!(crate::spinbasis::site_deviations(spec.lattice(), &top[1].config).iter().filter(|&&d| d != 0).count(), 2);

        let all = top_amplitudes(&gs, gs.basis().len(), false);
        let norm: f64 = all.iter().map(|r| r.amplitude * r.amplitude).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(all.windows(2).all(|w| w[0].amplitude.abs() >= w[1].amplitude.abs()));

        // orbit members share one amplitude
        for r in top_amplitudes(&gs, 20, true) {
            for c in symmetry_orbit(spec.lattice(), &r.config) {
                assert!((gs.amplitude(&c) - r.amplitude).abs() < 1e-10);
            }
        }
    }
}
