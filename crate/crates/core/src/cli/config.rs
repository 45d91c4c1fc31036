use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::eigensolver::{SolverMethod, SolverOptions};
use crate::mumagnon::{CandidateRules, DictionaryOptions};
use crate::spinbasis::{Boundary, HalfInt, LatticeSpec};

/// One run: lattice, model, solver settings, a single study and where to
/// write its files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: LatticeBlock,
    #[serde(default)]
    pub model: ModelBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    pub study: Study,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeBlock {
    pub n_sites: usize,
    /// Spin magnitudes repeated along the chain, e.g. `["1/2", "3/2"]`.
    pub pattern: Vec<HalfInt>,
    pub boundary: Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    #[serde(default = "one")]
    pub coupling: f64,
    #[serde(default)]
    pub field: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for ModelBlock {
    fn default() -> Self {
        ModelBlock { coupling: 1.0, field: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub krylov_dim: usize,
    pub seed: u64,
    pub method: SolverMethod,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let o = SolverOptions::default();
        SolverBlock { tolerance: o.tol, max_iterations: o.max_iterations, krylov_dim: o.krylov_dim, seed: o.seed, method: o.method }
    }
}

impl SolverBlock {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tolerance,
            max_iterations: self.max_iterations,
            krylov_dim: self.krylov_dim,
            seed: self.seed,
            method: self.method,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub dir: Option<PathBuf>,
    /// Accepted for forward compatibility; CSV and JSON are always written.
    pub formats: Vec<String>,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock { dir: None, formats: vec!["csv".into()] }
    }
}

fn default_sites() -> Vec<usize> {
    vec![0, 1, 2, 3]
}

fn default_threshold() -> f64 {
    1e-3
}

fn default_trials() -> usize {
    40
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Study {
    Solve {
        #[serde(default)]
        sector: Option<HalfInt>,
    },
    Amplitudes {
        #[serde(default)]
        sector: Option<HalfInt>,
        top: usize,
        #[serde(default)]
        grouped: bool,
    },
    Dictionary {
        #[serde(default = "default_structure_len")]
        max_structure_len: usize,
        #[serde(default = "default_pair_gap")]
        max_pair_gap: usize,
    },
    ApproxGs {
        #[serde(default)]
        dictionary: Option<PathBuf>,
        #[serde(default = "default_threshold")]
        threshold: f64,
        #[serde(default)]
        rules: Option<CandidateRules>,
        #[serde(default)]
        compare_exact: bool,
    },
    NegativityScan {
        #[serde(default)]
        separations: Vec<usize>,
    },
    FidelityTruncation {
        #[serde(default = "default_sites")]
        sites: Vec<usize>,
        fractions: Vec<f64>,
    },
    FidelityDistort {
        #[serde(default = "default_sites")]
        sites: Vec<usize>,
        sigmas: Vec<f64>,
        #[serde(default = "default_trials")]
        trials: usize,
        /// Defaults to the solver seed.
        #[serde(default)]
        seed: Option<u64>,
    },
    SectorScan {
        fields: Vec<f64>,
    },
}

fn default_structure_len() -> usize {
    DictionaryOptions::default().max_structure_len
}

fn default_pair_gap() -> usize {
    DictionaryOptions::default().max_pair_gap
}

/// Names accepted on the command line, in the order of [`Study`].
pub const STUDY_NAMES: [&str; 8] = [
    "solve",
    "amplitudes",
    "dictionary",
    "approx-gs",
    "negativity-scan",
    "fidelity-truncation",
    "fidelity-distort",
    "sector-scan",
];

impl Study {
    pub fn name(&self) -> &'static str {
        match self {
            Study::Solve { .. } => STUDY_NAMES[0],
            Study::Amplitudes { .. } => STUDY_NAMES[1],
            Study::Dictionary { .. } => STUDY_NAMES[2],
            Study::ApproxGs { .. } => STUDY_NAMES[3],
            Study::NegativityScan { .. } => STUDY_NAMES[4],
            Study::FidelityTruncation { .. } => STUDY_NAMES[5],
            Study::FidelityDistort { .. } => STUDY_NAMES[6],
            Study::SectorScan { .. } => STUDY_NAMES[7],
        }
    }
}

impl LatticeBlock {
    pub fn spins(&self) -> Vec<HalfInt> {
        (0..self.n_sites).map(|k| self.pattern[k % self.pattern.len()]).collect()
    }
}

impl RunConfig {
    pub fn lattice(&self) -> crate::error::Result<LatticeSpec> {
        if self.lattice.pattern.is_empty() {
            return Err(crate::error::Error::InvalidLattice("empty spin pattern".into()));
        }
        Ok(LatticeSpec::new(self.lattice.spins(), self.lattice.boundary)?
            .with_coupling(self.model.coupling)
            .with_field(self.model.field))
    }
}

/// Applies `key.path=value` overrides to a JSON document. Values that parse
/// as JSON are used as such, anything else as a string. Missing objects on
/// the path are created.
pub fn apply_override(doc: &mut Value, assignment: &str) -> std::result::Result<(), String> {
    let (key, raw) = assignment.split_once('=').ok_or_else(|| format!("--set {assignment:?}: expected key=value"))?;
    let value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(format!("--set {assignment:?}: empty path segment"));
    }
    let mut cur = doc;
    for (i, part) in parts.iter().enumerate() {
        let obj = cur.as_object_mut().ok_or_else(|| format!("--set {key}: {} is not an object", parts[..i].join(".")))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("non-empty path")
}
