use std::fmt;

use serde_json::Value;

use super::config::{apply_override, RunConfig, Study};

/// A problem found in a configuration, anchored to a line of the source text
/// when one can be identified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{l}:{c}: {}", self.message),
            (Some(l), None) => write!(f, "{l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

// Line of the first occurrence of `"key"` in the source text.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

fn at(text: &str, key: &str, message: String) -> Diagnostic {
    Diagnostic { line: line_of(text, key), column: None, message }
}

/// Parses `text`, applies the `--set` overrides and returns the effective
/// document and typed configuration, or the diagnostics that prevent it.
/// When `study` is given, a study block without a `kind` takes that kind and
/// a different kind is an error.
pub fn load_config(text: &str, overrides: &[String], study: Option<&str>) -> Result<(Value, RunConfig), Vec<Diagnostic>> {
    let mut doc: Value = serde_json::from_str(text).map_err(|e| {
        vec![Diagnostic { line: Some(e.line()), column: Some(e.column()), message: e.to_string() }]
    })?;
    for o in overrides {
        apply_override(&mut doc, o).map_err(|m| vec![Diagnostic { line: None, column: None, message: m }])?;
    }
    if let (Some(name), Some(obj)) = (study, doc.as_object_mut()) {
        let block = obj.entry("study").or_insert_with(|| Value::Object(Default::default()));
        if let Some(block) = block.as_object_mut() {
            match block.get("kind").and_then(Value::as_str) {
                None => {
                    block.insert("kind".into(), Value::String(name.into()));
                }
                Some(kind) if kind != name => {
                    return Err(vec![at(text, "kind", format!("config describes study {kind:?} but {name:?} was requested"))]);
                }
                Some(_) => {}
            }
        }
    }
    let config: RunConfig = serde_json::from_value(doc.clone()).map_err(|e| {
        // serde_json reports no position for values; anchor on the first
        // quoted word of the message that names a key in the text
        let msg = e.to_string();
        let line = msg.split('`').skip(1).step_by(2).find_map(|k| line_of(text, k));
        vec![Diagnostic { line, column: None, message: msg }]
    })?;
    let diags = check(text, &config);
    if diags.is_empty() {
        Ok((doc, config))
    } else {
        Err(diags)
    }
}

/// Schema and cross-field checks without running anything; an empty list
/// means the configuration is runnable.
pub fn validate(text: &str, overrides: &[String]) -> Vec<Diagnostic> {
    match load_config(text, overrides, None) {
        Ok(_) => Vec::new(),
        Err(d) => d,
    }
}

// negated comparisons also reject NaN
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check(text: &str, c: &RunConfig) -> Vec<Diagnostic> {
    let mut d = Vec::new();
    let n = c.lattice.n_sites;
    let pattern = &c.lattice.pattern;
    if n == 0 {
        d.push(at(text, "n_sites", "n_sites must be positive".into()));
    }
    if pattern.is_empty() {
        d.push(at(text, "pattern", "spin pattern is empty".into()));
    } else {
        if pattern.iter().any(|s| s.twice() <= 0) {
            d.push(at(text, "pattern", "spin magnitudes must be positive".into()));
        }
        if pattern.len() == 2 && n % 2 == 1 {
            d.push(at(text, "n_sites", format!("n_sites = {n} is odd but the spin pattern alternates")));
        } else if !n.is_multiple_of(pattern.len()) {
            d.push(at(text, "n_sites", format!("n_sites = {n} is not a multiple of the pattern length {}", pattern.len())));
        }
    }
    if !c.model.coupling.is_finite() || !c.model.field.is_finite() {
        d.push(at(text, "model", "coupling and field must be finite".into()));
    }
    if !(c.solver.tolerance > 0.0) {
        d.push(at(text, "tolerance", "solver tolerance must be positive".into()));
    }
    if c.solver.max_iterations == 0 {
        d.push(at(text, "max_iterations", "max_iterations must be positive".into()));
    }

    let check_sites = |d: &mut Vec<Diagnostic>, sites: &[usize]| {
        let mut sorted = sites.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != sites.len() {
            d.push(at(text, "sites", "sites must be distinct".into()));
        }
        if let Some(s) = sites.iter().find(|&&s| s >= n) {
            d.push(at(text, "sites", format!("site {s} is outside a lattice of {n} sites")));
        }
    };
    match &c.study {
        Study::Amplitudes { top, .. } if *top == 0 => d.push(at(text, "top", "top must be at least 1".into())),
        Study::ApproxGs { dictionary, threshold, .. } => {
            if dictionary.is_none() {
                d.push(at(text, "study", "approx-gs requires a dictionary path".into()));
            }
            if !(*threshold >= 0.0) {
                d.push(at(text, "threshold", "threshold must be non-negative".into()));
            }
        }
        Study::NegativityScan { separations } => {
            if separations.is_empty() {
                d.push(at(text, "study", "negativity-scan requires a non-empty separations grid".into()));
            } else if let Some(s) = separations.iter().find(|&&s| s + 4 > n) {
                d.push(at(text, "separations", format!("separation {s} needs {} sites", s + 4)));
            }
        }
        Study::FidelityTruncation { sites, fractions } => {
            check_sites(&mut d, sites);
            if fractions.is_empty() || fractions.iter().any(|f| !(*f > 0.0 && *f <= 1.0)) {
                d.push(at(text, "fractions", "fractions must be a non-empty list in (0, 1]".into()));
            }
        }
        Study::FidelityDistort { sites, sigmas, trials, .. } => {
            check_sites(&mut d, sites);
            if sigmas.is_empty() || sigmas.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
                d.push(at(text, "sigmas", "sigmas must be a non-empty list of non-negative numbers".into()));
            }
            if *trials == 0 {
                d.push(at(text, "trials", "trials must be at least 1".into()));
            }
        }
        Study::SectorScan { fields }
            if (fields.is_empty() || fields.iter().any(|b| !(*b >= 0.0 && b.is_finite()))) => {
                d.push(at(text, "fields", "fields must be a non-empty list of B ≥ 0".into()));
            }
        _ => {}
    }
    d
}
