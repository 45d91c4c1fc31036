use serde::Serialize;

use super::{ground_state, SolverOptions, DEGENERACY_TOL};
use crate::error::Result;
use crate::hamiltonian::HamiltonianSpec;
use crate::spinbasis::HalfInt;

/// Lowest sector at one field strength.
#[derive(Clone, Debug, Serialize)]
pub struct ScanPoint {
    pub field: f64,
    /// Sectors within the degeneracy tolerance of the minimum, ascending.
    pub best: Vec<HalfInt>,
    /// `E_M(0) - B·M` of the minimizing sectors.
    pub energy: f64,
    pub degenerate: bool,
}

/// Global ground sector for each field in `fields`.
///
/// The Zeeman term commutes with `H`, so every sector is solved once at zero
/// field and `E_M(B) = E_M(0) - B·M`. Only `M ≥ 0` is solved; for `B > 0`
/// negative sectors are never lower, and at `B = 0` they are reported as
/// mirror images of the tied positive ones.
pub fn sector_scan(spec: &HamiltonianSpec, fields: &[f64], options: &SolverOptions) -> Result<Vec<ScanPoint>> {
    let zero = spec.with_field(0.0);
    let total = spec.lattice().total_spin();
    let mut m = if total.is_integer() { HalfInt::ZERO } else { HalfInt::HALF };
    let mut sectors = Vec::new();
    while m <= total {
        let (gs, _) = ground_state(&zero, m, options)?;
        log::debug!("sector {m}: E = {:.12}", gs.energy());
        sectors.push((m, gs.energy()));
        m += HalfInt::ONE;
    }
    let tol = DEGENERACY_TOL * spec.lattice().coupling().abs().max(f64::MIN_POSITIVE);

    Ok(fields
        .iter()
        .map(|&b| {
            let shifted: Vec<(HalfInt, f64)> = sectors.iter().map(|&(m, e)| (m, e - b * m.to_f64())).collect();
            let energy = shifted.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let mut best: Vec<HalfInt> = shifted.iter().filter(|p| p.1 - energy < tol).map(|p| p.0).collect();
            if b == 0.0 {
                let mirrors: Vec<HalfInt> = best.iter().filter(|m| **m != HalfInt::ZERO).map(|&m| -m).collect();
                best.extend(mirrors);
            }
            best.sort();
            ScanPoint { field: b, degenerate: best.len() > 1, best, energy }
        })
        .collect())
}
