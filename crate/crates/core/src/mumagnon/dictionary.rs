use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::structure::{parse_structures, Signature};
use crate::eigensolver::GroundStateVector;
use crate::error::{Error, Result};
use crate::spinbasis::{Boundary, HalfInt};

pub const DICTIONARY_FORMAT: &str = "ferrichain-structure-dictionary";
pub const DICTIONARY_VERSION: u32 = 1;

/// Stored relative amplitudes must stay below this modulus.
pub const SANITY_BOUND: f64 = 1.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DictionaryOptions {
    pub max_structure_len: usize,
    pub max_pair_gap: usize,
}

impl Default for DictionaryOptions {
    fn default() -> Self {
        DictionaryOptions { max_structure_len: 7, max_pair_gap: 4 }
    }
}

/// Where a dictionary came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DictionaryProvenance {
    pub spins: Vec<HalfInt>,
    pub boundary: Boundary,
    pub n_sites: usize,
    pub coupling: f64,
    pub field: f64,
    pub energy: f64,
    pub options: DictionaryOptions,
    #[serde(default)]
    pub solver: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct SingleEntry {
    signature: Signature,
    alpha_r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct PairEntry {
    sig1: Signature,
    sig2: Signature,
    #[serde(rename = "D")]
    d: usize,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct DictionaryDocument {
    format: String,
    version: u32,
    provenance: Option<DictionaryProvenance>,
    singles: Vec<SingleEntry>,
    pairs: Vec<PairEntry>,
}

/// Relative amplitudes of isolated structures and pair corrections
/// `β = α_r(str₁ ⋯D⋯ str₂) / (α_r(str₁)·α_r(str₂))`, read off a reference
/// ground state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StructureDictionary {
    singles: BTreeMap<Signature, f64>,
    pairs: BTreeMap<(Signature, Signature, usize), f64>,
    provenance: Option<DictionaryProvenance>,
}

impl StructureDictionary {
    /// A dictionary that knows only the Néel sea.
    pub fn empty() -> Self {
        StructureDictionary::default()
    }

    pub fn provenance(&self) -> Option<&DictionaryProvenance> {
        self.provenance.as_ref()
    }

    pub fn single(&self, signature: &Signature) -> Option<f64> {
        self.singles.get(signature).copied()
    }

    pub fn pair(&self, left: &Signature, right: &Signature, gap: usize) -> Option<f64> {
        self.pairs.get(&(left.clone(), right.clone(), gap)).copied()
    }

    /// Pair factor with the default 1 for unknown pairs.
    pub fn beta(&self, left: &Signature, right: &Signature, gap: usize) -> f64 {
        self.pair(left, right, gap).unwrap_or(1.0)
    }

    pub fn singles(&self) -> impl Iterator<Item = (&Signature, f64)> {
        self.singles.iter().map(|(k, v)| (k, *v))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Signature, &Signature, usize, f64)> {
        self.pairs.iter().map(|((a, b, d), v)| (a, b, *d, *v))
    }

    pub fn insert_single(&mut self, signature: Signature, alpha_r: f64) {
        self.singles.insert(signature, alpha_r);
    }

    pub fn insert_pair(&mut self, left: Signature, right: Signature, gap: usize, beta: f64) {
        self.pairs.insert((left, right, gap), beta);
    }

    /// Reads singles and pairs off an exact ring ground state.
    ///
    /// Singles are the relative amplitudes of configurations with exactly one
    /// structure of at most `max_structure_len` sites. Pairs come from
    /// configurations with two such structures whose gap on one side is at
    /// most `max_pair_gap` while the other side is wider, so each pair has a
    /// well-defined left/right order.
    pub fn build(reference: &GroundStateVector, options: &DictionaryOptions) -> Result<Self> {
        let lattice = reference.lattice();
        if lattice.boundary() != Boundary::Ring {
            return Err(Error::InvalidLattice("dictionary reference must be a ring".into()));
        }
        lattice.ferrimagnetic_pattern()?;
        let neel = reference
            .neel_amplitude()
            .filter(|a| *a != 0.0)
            .ok_or_else(|| Error::InvalidConfiguration("reference lacks the Néel configuration".into()))?;

        let mut parsed = Vec::new();
        for (i, c) in reference.basis().configs().enumerate() {
            let p = parse_structures(lattice, &c)?;
            let alpha_r = reference.amplitudes()[i] / neel;
            parsed.push((p, alpha_r));
        }

        let mut dict = StructureDictionary::empty();
        for (p, alpha_r) in &parsed {
            let s = p.structures();
            if s.len() != 1 || s[0].len() > options.max_structure_len {
                continue;
            }
            if alpha_r.abs() > SANITY_BOUND {
                log::warn!("skipping {}: |α_r| = {alpha_r} exceeds the sanity bound", s[0].signature);
                continue;
            }
            let sig = &s[0].signature;
            // a ring is reflection symmetric: a shape and its mirror image share one value
            match dict.singles.get(sig).or_else(|| dict.singles.get(&sig.reversed())).copied() {
                Some(prev) => {
                    if (prev - alpha_r).abs() > 1e-8 * prev.abs().max(1e-12) {
                        log::warn!("{sig}: inconsistent amplitudes {prev} and {alpha_r}");
                    }
                    dict.singles.entry(sig.clone()).or_insert(prev);
                }
                None => {
                    dict.singles.insert(sig.clone(), *alpha_r);
                }
            }
        }

        for (p, alpha_r) in &parsed {
            let s = p.structures();
            if s.len() != 2 || s.iter().any(|x| x.len() > options.max_structure_len) {
                continue;
            }
            let gaps = p.gaps();
            let (a, b) = (&s[0].signature, &s[1].signature);
            let (Some(alpha_a), Some(alpha_b)) = (dict.single(a), dict.single(b)) else {
                continue;
            };
            let (left, right, gap) = match (gaps[0] <= options.max_pair_gap, gaps[1] <= options.max_pair_gap) {
                (true, false) => (a, b, gaps[0]),
                (false, true) => (b, a, gaps[1]),
                (true, true) => {
                    log::debug!("{a} and {b} are close on both sides of the reference ring; skipped");
                    continue;
                }
                (false, false) => continue,
            };
            let mirror = (right.reversed(), left.reversed(), gap);
            let beta = dict.pairs.get(&mirror).copied().unwrap_or(alpha_r / (alpha_a * alpha_b));
            dict.pairs.entry((left.clone(), right.clone(), gap)).or_insert(beta);
        }

        dict.provenance = Some(DictionaryProvenance {
            spins: lattice.spins().to_vec(),
            boundary: lattice.boundary(),
            n_sites: lattice.n_sites(),
            coupling: lattice.coupling(),
            field: lattice.field(),
            energy: reference.energy(),
            options: options.clone(),
            solver: None,
        });
        Ok(dict)
    }

    /// Attaches solver metadata to the provenance block.
    pub fn set_solver_metadata(&mut self, solver: serde_json::Value) {
        if let Some(p) = self.provenance.as_mut() {
            p.solver = Some(solver);
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = DictionaryDocument {
            format: DICTIONARY_FORMAT.into(),
            version: DICTIONARY_VERSION,
            provenance: self.provenance.clone(),
            singles: self.singles.iter().map(|(k, v)| SingleEntry { signature: k.clone(), alpha_r: *v }).collect(),
            pairs: self
                .pairs
                .iter()
                .map(|((a, b, d), v)| PairEntry { sig1: a.clone(), sig2: b.clone(), d: *d, beta: *v })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DictionaryDocument = serde_json::from_str(text)?;
        if doc.format != DICTIONARY_FORMAT {
            return Err(Error::Parse(format!("not a structure dictionary (format {:?})", doc.format)));
        }
        if doc.version != DICTIONARY_VERSION {
            return Err(Error::Parse(format!("unsupported dictionary version {}", doc.version)));
        }
        let mut dict = StructureDictionary { provenance: doc.provenance, ..Default::default() };
        for e in doc.singles {
            dict.singles.insert(e.signature, e.alpha_r);
        }
        for e in doc.pairs {
            dict.pairs.insert((e.sig1, e.sig2, e.d), e.beta);
        }
        Ok(dict)
    }

    pub fn save<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_json()?.as_bytes())?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn load<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        Self::from_json(&text)
    }
}
