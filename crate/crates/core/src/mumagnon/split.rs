use serde::Serialize;

use crate::eigensolver::GroundStateVector;
use crate::error::{Error, Result};
use crate::hamiltonian::create_mumagnon;
use crate::spinbasis::{neel_configuration, Boundary, LatticeSpec, SpinConfiguration, Sublattice};

/// Largest gap covered by [`split_magnon_fit`].
pub const SPLIT_FIT_MAX_GAP: usize = 10;

/// Average decay of the split μ-magnon amplitude with its gap,
/// `-0.27295·exp(-1.55089·D + 0.07923·D²)`, valid for `0 ≤ D ≤ 10`.
pub fn split_magnon_fit(gap: usize) -> Result<f64> {
    if gap > SPLIT_FIT_MAX_GAP {
        return Err(Error::OutOfRange(format!("gap {gap} is outside the fitted range 0..={SPLIT_FIT_MAX_GAP}")));
    }
    let d = gap as f64;
    Ok(-0.27295 * (-1.55089 * d + 0.07923 * d * d).exp())
}

/// The Néel state with one μ-magnon per `(small, large)` site pair: the
/// small-spin site is raised and the large-spin site lowered by one step.
/// Pairs may repeat sites (an overlapping pair lowers one large spin twice)
/// and need not be adjacent (a split μ-magnon).
pub fn place_mumagnons(lattice: &LatticeSpec, moves: &[(usize, usize)]) -> Result<SpinConfiguration> {
    let mut config = neel_configuration(lattice)?;
    for &(small, large) in moves {
        if Sublattice::of_site(small) != Sublattice::Small || Sublattice::of_site(large) != Sublattice::Large {
            return Err(Error::InvalidConfiguration(format!("({small}, {large}) is not a (small, large) site pair")));
        }
        config = create_mumagnon(lattice, &config, small, large)?.ok_or_else(|| {
            Error::InvalidConfiguration(format!("μ-magnon ({small}, {large}) leaves the spin range"))
        })?;
    }
    Ok(config)
}

/// One placement of a split μ-magnon and its relative amplitude.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitPlacement {
    pub raised: usize,
    pub lowered: usize,
    pub gap: usize,
    pub alpha_r: f64,
}

fn check_gap(gap: usize) -> Result<()> {
    if gap % 2 == 1 {
        return Err(Error::OutOfRange(format!(
            "gap {gap}: a raised small spin and a lowered large spin are an even number of sites apart"
        )));
    }
    Ok(())
}

/// Every placement of a split μ-magnon with the given gap.
///
/// On a ring only the placement raising site 0 and lowering site `1 + D` is
/// returned (all others are translations or reflections of it), and the gap
/// must not exceed the gap on the far side, `N - 2 - D`. On an open chain
/// both orientations at every position are listed.
pub fn split_magnon_placements(state: &GroundStateVector, gap: usize) -> Result<Vec<SplitPlacement>> {
    check_gap(gap)?;
    let lattice = state.lattice();
    let n = lattice.n_sites();
    let mut out = Vec::new();
    let mut push = |raised: usize, lowered: usize| -> Result<()> {
        let c = place_mumagnons(lattice, &[(raised, lowered)])?;
        out.push(SplitPlacement { raised, lowered, gap, alpha_r: state.relative_amplitude(&c) });
        Ok(())
    };
    match lattice.boundary() {
        Boundary::Ring => {
            if gap + 2 > n || gap > n - 2 - gap {
                return Err(Error::OutOfRange(format!(
                    "gap {gap} wraps on a ring of {n} sites; the largest distinct gap is {}",
                    (n - 2) / 2
                )));
            }
            push(0, 1 + gap)?;
        }
        Boundary::Open => {
            for raised in (0..n).step_by(2) {
                if raised + 1 + gap < n {
                    push(raised, raised + 1 + gap)?;
                }
                if raised > gap {
                    push(raised, raised - 1 - gap)?;
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::OutOfRange(format!("gap {gap} does not fit on {n} sites")));
    }
    Ok(out)
}

/// Measured split μ-magnon amplitude at gap `D`: the ring value, or on an
/// open chain the mean over placements that leave the first spin untouched.
pub fn measured_split_amplitude(state: &GroundStateVector, gap: usize) -> Result<f64> {
    let placements = split_magnon_placements(state, gap)?;
    let kept: Vec<f64> = placements
        .iter()
        .filter(|p| state.lattice().boundary() == Boundary::Ring || p.raised != 0)
        .map(|p| p.alpha_r)
        .collect();
    if kept.is_empty() {
        return Err(Error::OutOfRange(format!("gap {gap}: every placement touches the chain end")));
    }
    Ok(kept.iter().sum::<f64>() / kept.len() as f64)
}

/// `β = α_r(A ∪ B) / (α_r(A)·α_r(B))` for two sets of μ-magnon moves.
pub fn pair_ratio(state: &GroundStateVector, first: &[(usize, usize)], second: &[(usize, usize)]) -> Result<f64> {
    let l = state.lattice();
    let both: Vec<(usize, usize)> = first.iter().chain(second).copied().collect();
    let a = state.relative_amplitude(&place_mumagnons(l, first)?);
    let b = state.relative_amplitude(&place_mumagnons(l, second)?);
    Ok(state.relative_amplitude(&place_mumagnons(l, &both)?) / (a * b))
}

/// Two neighbouring μ-magnons against the two ways of reading them:
/// `α_r(μμ) / (α_r(μ)² + α_r(μ)·α_r(split, D = 2))`.
pub fn neighbouring_sum_ratio(state: &GroundStateVector) -> Result<f64> {
    let l = state.lattice();
    let mu = state.relative_amplitude(&place_mumagnons(l, &[(0, 1)])?);
    let split = state.relative_amplitude(&place_mumagnons(l, &[(0, 3)])?);
    let both = state.relative_amplitude(&place_mumagnons(l, &[(0, 1), (2, 3)])?);
    Ok(both / (mu * mu + mu * split))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::dense_ground_state;
    use crate::hamiltonian::HamiltonianSpec;
    use crate::spinbasis::{neel_sector, HalfInt};

    #[test]
    fn fit_values() {
        assert_eq!(split_magnon_fit(0).unwrap(), -0.27295);
        let f2 = split_magnon_fit(2).unwrap();
        assert!((f2 - (-0.27295 * (-3.10178f64 + 0.31692).exp())).abs() < 1e-15);
        assert!(split_magnon_fit(10).is_ok());
        assert!(split_magnon_fit(11).is_err());
    }

    #[test]
    fn placement_validation() {
        let l = LatticeSpec::alternating(6, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Ring).unwrap();
        assert!(place_mumagnons(&l, &[(1, 2)]).is_err());
        // the small spin can only be raised once
        assert!(place_mumagnons(&l, &[(0, 1), (0, 5)]).is_err());
        let c = place_mumagnons(&l, &[(0, 1), (2, 1)]).unwrap();
        assert_eq!(c.display(&l), "1/2 -1/2 1/2 3/2 -1/2 3/2");
    }

    #[test]
    fn ring_gaps_must_not_wrap() {
        let l = LatticeSpec::alternating(8, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Ring).unwrap().with_field(0.1);
        let gs = dense_ground_state(&HamiltonianSpec::new(l.clone()), neel_sector(&l).unwrap()).unwrap().0;
        assert!(measured_split_amplitude(&gs, 2).is_ok());
        assert!(measured_split_amplitude(&gs, 3).is_err());
        assert!(measured_split_amplitude(&gs, 4).is_err());
        let d0 = measured_split_amplitude(&gs, 0).unwrap();
        let d2 = measured_split_amplitude(&gs, 2).unwrap();
        assert!(d0 < 0.0 && d2 < 0.0 && d2.abs() < d0.abs());
    }

    #[test]
    fn open_chain_lists_both_orientations() {
        let l = LatticeSpec::alternating(6, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Open).unwrap().with_field(0.1);
        let gs = dense_ground_state(&HamiltonianSpec::new(l.clone()), neel_sector(&l).unwrap()).unwrap().0;
        let p = split_magnon_placements(&gs, 2).unwrap();
        let sites: Vec<(usize, usize)> = p.iter().map(|x| (x.raised, x.lowered)).collect();
        assert_eq!(sites, vec![(0, 3), (2, 5), (4, 1)]);
    }
}
