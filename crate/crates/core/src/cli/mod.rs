//! Config-driven studies behind the `ferrichain` binary.
//!
//! ```text
//! ferrichain <study> --config run.json [--set key.path=value ...] [--out DIR]
//! ferrichain validate --config run.json
//! ```
//!
//! Exit status is 0 on success, 2 for configuration errors (reported as
//! `file:line: message`), 3 when the eigensolver does not converge and 1 for
//! other failures.

mod config;
mod run;
mod validate;

pub use config::{apply_override, LatticeBlock, ModelBlock, OutputBlock, RunConfig, SolverBlock, Study, STUDY_NAMES};
pub use run::{default_sector, run, validate_file, RunError, RunOutcome, TOOL};
pub use validate::{load_config, validate, Diagnostic};

/// Sizes the global rayon pool from `FERRICHAIN_THREADS` when it is set.
pub fn init_threads() {
    if let Ok(v) = std::env::var("FERRICHAIN_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    log::warn!("FERRICHAIN_THREADS ignored: {e}");
                }
            }
            _ => log::warn!("FERRICHAIN_THREADS={v:?} is not a positive integer; ignored"),
        }
    }
}
