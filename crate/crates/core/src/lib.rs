//! Exact ground states, μ-magnon structure analysis and entanglement of
//! alternating-spin Heisenberg ferrimagnetic chains.
//!
//! The modules build on each other in order:
//!
//! - [`spinbasis`]: lattices, packed configurations, magnetization sectors
//! - [`hamiltonian`]: the Heisenberg operator with a uniform field
//! - [`eigensolver`]: Lanczos and dense ground states, amplitude ranking
//! - [`mumagnon`]: structure parsing, dictionaries, amplitude estimates
//! - [`entanglement`]: reduced density matrices, negativity, fidelity
//! - [`cli`]: config-driven studies behind the `ferrichain` binary
//!
//! ```
//! use ferrichain::eigensolver::{ground_state, SolverOptions};
//! use ferrichain::hamiltonian::HamiltonianSpec;
//! use ferrichain::spinbasis::{neel_sector, Boundary, HalfInt, LatticeSpec};
//!
//! let lattice = LatticeSpec::alternating(8, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Ring)?;
//! let m = neel_sector(&lattice)?;
//! let (gs, _) = ground_state(&HamiltonianSpec::new(lattice), m, &SolverOptions::default())?;
//! assert!(gs.neel_amplitude().unwrap() > 0.7);
//! # Ok::<(), ferrichain::Error>(())
//! ```

pub mod cli;
pub mod eigensolver;
pub mod entanglement;
pub mod error;
pub mod hamiltonian;
pub mod mumagnon;
pub mod spinbasis;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/lattice.md")]
    pub struct Lattice;
    #[doc = include_str!("../../../book/src/hamiltonian.md")]
    pub struct Hamiltonian;
    #[doc = include_str!("../../../book/src/ground-states.md")]
    pub struct GroundStates;
    #[doc = include_str!("../../../book/src/mumagnons.md")]
    pub struct Mumagnons;
    #[doc = include_str!("../../../book/src/entanglement.md")]
    pub struct Entanglement;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
