//! Heisenberg Hamiltonian on a magnetization sector.
//!
//! ```text
//! H = J Σ_bonds S_a·S_b - B Σ_k S_z[k]
//!   = Σ_bonds J S_z[a] S_z[b] + (J/2)(S_+[a] S_-[b] + S_-[a] S_+[b]) - B Σ_k S_z[k]
//! ```
//!
//! The flip-flop terms conserve total `S_z`, so `H` acts inside a
//! [`SectorBasis`]. Everything is real in the z-basis.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spinbasis::{HalfInt, LatticeSpec, SectorBasis, SpinConfiguration, Sublattice};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LadderDirection {
    Raise,
    Lower,
}

/// `√(s(s+1) - m(m±1))`, the matrix element of `S_±` between `m` and `m±1`.
pub fn ladder_coefficient(s: HalfInt, m: HalfInt, direction: LadderDirection) -> Result<f64> {
    if m.abs() > s || !(s + m).is_integer() {
        return Err(Error::LadderDomain { s: s.to_string(), m: m.to_string() });
    }
    let (s2, m2) = (s.twice() as i64, m.twice() as i64);
    // 4·(s(s+1) - m(m±1)) in exact integers
    let q = match direction {
        LadderDirection::Raise => s2 * (s2 + 2) - m2 * (m2 + 2),
        LadderDirection::Lower => s2 * (s2 + 2) - m2 * (m2 - 2),
    };
    Ok((q as f64).sqrt() / 2.0)
}

/// A lattice with its bond list and per-level ladder tables.
#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    lattice: LatticeSpec,
    bonds: Vec<(usize, usize)>,
    // raise[k][n]: coefficient of S_+ on level n of site k (0 at the top)
    raise: Vec<Vec<f64>>,
    lower: Vec<Vec<f64>>,
    twice_s: Vec<i32>,
}

impl HamiltonianSpec {
    pub fn new(lattice: LatticeSpec) -> Self {
        let bonds = lattice.bonds();
        let n = lattice.n_sites();
        let mut raise = Vec::with_capacity(n);
        let mut lower = Vec::with_capacity(n);
        let mut twice_s = Vec::with_capacity(n);
        for k in 0..n {
            let s = lattice.spin(k);
            let levels = lattice.local_dim(k);
            let m = |level: usize| HalfInt::from_int(level as i32) - s;
            raise.push((0..levels).map(|l| ladder_coefficient(s, m(l), LadderDirection::Raise).unwrap()).collect());
            lower.push((0..levels).map(|l| ladder_coefficient(s, m(l), LadderDirection::Lower).unwrap()).collect());
            twice_s.push(s.twice());
        }
        HamiltonianSpec { lattice, bonds, raise, lower, twice_s }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    /// Same lattice and couplings with a different field.
    pub fn with_field(&self, field: f64) -> Self {
        HamiltonianSpec::new(self.lattice.clone().with_field(field))
    }

    // twice m_k from a level
    fn twice_m(&self, site: usize, level: u8) -> i32 {
        2 * level as i32 - self.twice_s[site]
    }

    fn zz_energy(&self, level: &impl Fn(usize) -> u8) -> f64 {
        let zz: i64 = self
            .bonds
            .iter()
            .map(|&(a, b)| (self.twice_m(a, level(a)) as i64) * (self.twice_m(b, level(b)) as i64))
            .sum();
        self.lattice.coupling() * zz as f64 / 4.0
    }

    fn diagonal_from_levels(&self, level: impl Fn(usize) -> u8) -> f64 {
        let mz: i64 = (0..self.lattice.n_sites()).map(|k| self.twice_m(k, level(k)) as i64).sum();
        self.zz_energy(&level) - self.lattice.field() * mz as f64 / 2.0
    }

    /// Diagonal element `⟨c|H|c⟩`, field included.
    pub fn diagonal(&self, config: &SpinConfiguration) -> f64 {
        self.diagonal_from_levels(|k| config.level(k))
    }

    fn check_basis(&self, basis: &SectorBasis) -> Result<()> {
        if basis.lattice().spins() != self.lattice.spins() || basis.lattice().boundary() != self.lattice.boundary() {
            return Err(Error::Mismatch("basis was built for a different lattice".into()));
        }
        Ok(())
    }

    /// Row `index` of `H` restricted to `basis`, as `(column, value)` pairs
    /// with the diagonal first.
    fn row(&self, basis: &SectorBasis, index: usize, mut visit: impl FnMut(usize, f64)) {
        let packing = basis.packing();
        let code = basis.code(index);
        let level = |k: usize| packing.level(code, k);
        visit(index, self.diagonal_from_levels(level));
        let half_j = 0.5 * self.lattice.coupling();
        for &(a, b) in &self.bonds {
            let (na, nb) = (level(a), level(b));
            // S_+[a] S_-[b]
            let c = self.raise[a][na as usize] * self.lower[b][nb as usize];
            if c != 0.0 {
                let target = packing.with_level(packing.with_level(code, a, na + 1), b, nb - 1);
                if let Some(j) = basis.index_of_code(target) {
                    visit(j, half_j * c);
                }
            }
            // S_-[a] S_+[b]
            let c = self.lower[a][na as usize] * self.raise[b][nb as usize];
            if c != 0.0 {
                let target = packing.with_level(packing.with_level(code, a, na - 1), b, nb + 1);
                if let Some(j) = basis.index_of_code(target) {
                    visit(j, half_j * c);
                }
            }
        }
    }

    /// `output = H · input`, both indexed by `basis`.
    ///
    /// Rows are computed independently in parallel, each with a fixed
    /// summation order, so results do not depend on the thread count.
    pub fn apply(&self, basis: &SectorBasis, input: &[f64], output: &mut [f64]) -> Result<()> {
        self.check_basis(basis)?;
        if input.len() != basis.len() || output.len() != basis.len() {
            return Err(Error::Mismatch(format!(
                "vector lengths {} / {} for a basis of {}",
                input.len(),
                output.len(),
                basis.len()
            )));
        }
        output.par_iter_mut().enumerate().with_min_len(256).for_each(|(i, out)| {
            let mut acc = 0.0;
            self.row(basis, i, |j, h| acc += h * input[j]);
            *out = acc;
        });
        Ok(())
    }

    /// `⟨bra|H|ket⟩` evaluated directly from the two configurations.
    pub fn matrix_element(&self, bra: &SpinConfiguration, ket: &SpinConfiguration) -> f64 {
        if bra == ket {
            return self.diagonal(ket);
        }
        let differing: Vec<usize> = (0..self.lattice.n_sites()).filter(|&k| bra.level(k) != ket.level(k)).collect();
        if differing.len() != 2 {
            return 0.0;
        }
        let (p, q) = (differing[0], differing[1]);
        let step = |k: usize| bra.level(k) as i32 - ket.level(k) as i32;
        if !(step(p) == 1 && step(q) == -1 || step(p) == -1 && step(q) == 1) {
            return 0.0;
        }
        let (up, down) = if step(p) == 1 { (p, q) } else { (q, p) };
        let multiplicity = self
            .bonds
            .iter()
            .filter(|&&(a, b)| (a, b) == (p, q) || (a, b) == (q, p))
            .count();
        let c = self.raise[up][ket.level(up) as usize] * self.lower[down][ket.level(down) as usize];
        multiplicity as f64 * 0.5 * self.lattice.coupling() * c
    }

    /// Dense sector matrix assembled entry by entry from
    /// [`matrix_element`](Self::matrix_element).
    pub fn dense_matrix(&self, basis: &SectorBasis) -> Result<DMatrix<f64>> {
        self.check_basis(basis)?;
        let configs: Vec<SpinConfiguration> = basis.configs().collect();
        let n = configs.len();
        Ok(DMatrix::from_fn(n, n, |i, j| self.matrix_element(&configs[i], &configs[j])))
    }

    /// Debug dump of the dense sector matrix (rows = basis order).
    pub fn write_dense_csv<W: Write>(&self, basis: &SectorBasis, mut out: W) -> Result<()> {
        const LIMIT: usize = 4096;
        if basis.len() > LIMIT {
            return Err(Error::DenseLimit { dim: basis.len(), limit: LIMIT });
        }
        let h = self.dense_matrix(basis)?;
        for i in 0..h.nrows() {
            let row: Vec<String> = (0..h.ncols()).map(|j| format!("{:.17e}", h[(i, j)])).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Sum of `J m_a m_b` over bonds (the ring closes the sum), minus `B·M` when
/// `include_field` is set.
pub fn classical_energy(config: &SpinConfiguration, spec: &HamiltonianSpec, include_field: bool) -> f64 {
    let zz = spec.zz_energy(&|k| config.level(k));
    if include_field {
        zz - spec.lattice.field() * config.total_sz(&spec.lattice).to_f64()
    } else {
        zz
    }
}

/// Applies the micromagnon creation operator `A†` to a configuration.
///
/// Of the two sites, the one on the small-spin sublattice is raised and the
/// one on the large-spin sublattice is lowered by one step. Returns `None`
/// when either ladder move leaves the spin's range.
pub fn create_mumagnon(
    lattice: &LatticeSpec,
    config: &SpinConfiguration,
    m: usize,
    n: usize,
) -> Result<Option<SpinConfiguration>> {
    lattice.check_site(m)?;
    lattice.check_site(n)?;
    let (small, large) = match (Sublattice::of_site(m), Sublattice::of_site(n)) {
        (Sublattice::Small, Sublattice::Large) => (m, n),
        (Sublattice::Large, Sublattice::Small) => (n, m),
        _ => {
            return Err(Error::InvalidConfiguration(format!(
                "sites {m} and {n} lie on the same sublattice"
            )))
        }
    };
    let (ns, nl) = (config.level(small), config.level(large));
    if ns as usize + 1 >= lattice.local_dim(small) || nl == 0 {
        return Ok(None);
    }
    let mut out = config.clone();
    out.set_level(small, ns + 1);
    out.set_level(large, nl - 1);
    Ok(Some(out))
}
