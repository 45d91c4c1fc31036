use std::borrow::Cow;
use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::eigensolver::GroundStateVector;
use crate::error::{Error, Result};
use crate::mumagnon::ApproxGroundState;
use crate::spinbasis::{LatticeSpec, SectorBasis};

/// A real state vector over (a subset of) one sector.
pub trait PureState {
    fn basis(&self) -> &SectorBasis;
    fn amplitudes(&self) -> Cow<'_, [f64]>;

    fn lattice(&self) -> &LatticeSpec {
        self.basis().lattice()
    }
}

impl PureState for GroundStateVector {
    fn basis(&self) -> &SectorBasis {
        GroundStateVector::basis(self)
    }

    fn amplitudes(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(GroundStateVector::amplitudes(self))
    }
}

impl PureState for ApproxGroundState {
    fn basis(&self) -> &SectorBasis {
        ApproxGroundState::basis(self)
    }

    fn amplitudes(&self) -> Cow<'_, [f64]> {
        Cow::Owned(ApproxGroundState::amplitudes(self))
    }
}

/// A normalized state on an explicit list of configurations, e.g. a
/// truncated or distorted copy of a ground state.
#[derive(Clone, Debug)]
pub struct SparseState {
    basis: SectorBasis,
    amps: Vec<f64>,
}

impl SparseState {
    /// Normalizes `amps`, which must follow the basis order.
    pub fn new(basis: SectorBasis, amps: Vec<f64>) -> Result<Self> {
        if amps.len() != basis.len() {
            return Err(Error::DimensionMismatch(format!("{} amplitudes for {} configurations", amps.len(), basis.len())));
        }
        let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Mismatch("state has zero norm".into()));
        }
        Ok(SparseState { basis, amps: amps.into_iter().map(|a| a / norm).collect() })
    }
}

impl PureState for SparseState {
    fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    fn amplitudes(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(&self.amps)
    }
}

/// A real symmetric density matrix on a product of local spaces. The first
/// factor is the most significant digit of the row index.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: DMatrix<f64>,
}

impl DensityMatrix {
    /// Checks size, symmetry (1e-12), unit trace (1e-12) and positivity
    /// (eigenvalues ≥ -1e-10).
    pub fn new(dims: Vec<usize>, matrix: DMatrix<f64>) -> Result<Self> {
        let rho = Self::unchecked(dims, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn unchecked(dims: Vec<usize>, matrix: DMatrix<f64>) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} do not match a {}x{} matrix",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(DensityMatrix { dims, matrix })
    }

    pub fn validate(&self) -> Result<()> {
        let asym = (&self.matrix - self.matrix.transpose()).amax();
        if asym > 1e-12 {
            return Err(Error::Mismatch(format!("density matrix is not symmetric (deviation {asym:e})")));
        }
        let trace = self.matrix.trace();
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::Mismatch(format!("density matrix has trace {trace}")));
        }
        let min = self.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::Mismatch(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `|ψ⟩⟨ψ|` for a vector over the product space.
    pub fn from_pure(dims: Vec<usize>, psi: &[f64]) -> Result<Self> {
        let v = DVector::from_column_slice(psi);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::Mismatch("zero vector".into()));
        }
        let v = v / norm;
        Self::new(dims, &v * v.transpose())
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let dim: usize = dims.iter().product();
        DensityMatrix { dims, matrix: DMatrix::identity(dim, dim) / dim as f64 }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sorted_eigenvalues(&self.matrix)
    }
}

pub(crate) fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn check_sites(lattice: &LatticeSpec, sites: &[usize]) -> Result<()> {
    if sites.is_empty() {
        return Err(Error::OutOfRange("empty site list".into()));
    }
    let mut seen = vec![false; lattice.n_sites()];
    for &s in sites {
        lattice.check_site(s)?;
        if seen[s] {
            return Err(Error::DuplicateSite(s));
        }
        seen[s] = true;
    }
    Ok(())
}

/// `Tr_{complement} |ψ⟩⟨ψ|` on `sites`, with local dimensions in the order
/// the sites are given.
pub fn reduced_density_matrix<S: PureState + ?Sized>(state: &S, sites: &[usize]) -> Result<DensityMatrix> {
    let basis = state.basis();
    let lattice = basis.lattice();
    check_sites(lattice, sites)?;
    let amps = state.amplitudes();
    let packing = basis.packing();
    let dims: Vec<usize> = sites.iter().map(|&s| lattice.local_dim(s)).collect();
    let dim: usize = dims.iter().product();

    // components sharing the traced-out part, keyed for a fixed summation order
    let mut groups: BTreeMap<u64, Vec<(usize, f64)>> = BTreeMap::new();
    for (i, &a) in amps.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let code = basis.code(i);
        let mut rest = code;
        let mut kept = 0;
        for (&s, &d) in sites.iter().zip(&dims) {
            kept = kept * d + packing.level(code, s) as usize;
            rest = packing.with_level(rest, s, 0);
        }
        groups.entry(rest).or_default().push((kept, a));
    }
    let mut rho = DMatrix::zeros(dim, dim);
    for members in groups.values() {
        for &(i, a) in members {
            for &(j, b) in members {
                rho[(i, j)] += a * b;
            }
        }
    }
    DensityMatrix::unchecked(dims, rho)
}
