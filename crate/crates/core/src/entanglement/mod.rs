//! Reduced states, negativities and fidelities.
//!
//! Every reduced density matrix is real symmetric: ground states of the
//! Heisenberg Hamiltonian are real in the `S_z` product basis.

mod density;
mod experiments;
mod fidelity;
mod negativity;

pub use density::{reduced_density_matrix, DensityMatrix, PureState, SparseState};
pub use experiments::{
    distortion_fidelity, distortion_scan, negativity_scan, pair_sites, truncate, truncation_infidelity_scan,
    write_distortion_csv, write_negativity_csv, write_truncation_csv, DistortionPoint, NegativityPoint, TruncationPoint,
};
pub use fidelity::fidelity;
pub use negativity::{
    four_partite_negativity, log_negativity, partial_transpose, NegativityReport, BIPARTITIONS, NEGATIVITY_CLIP,
};
