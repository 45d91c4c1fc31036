use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::config::{RunConfig, Study};
use super::validate::{load_config, Diagnostic};
use crate::eigensolver::{ground_state, sector_scan, top_amplitudes, write_ground_state, GroundStateVector, SolveReport};
use crate::entanglement::{
    distortion_scan, negativity_scan, truncation_infidelity_scan, write_distortion_csv, write_negativity_csv,
    write_truncation_csv,
};
use crate::error::Error;
use crate::hamiltonian::HamiltonianSpec;
use crate::mumagnon::{approximate_ground_state, DictionaryOptions, StructureDictionary};
use crate::spinbasis::{neel_sector, HalfInt, LatticeSpec};

pub const TOOL: &str = concat!("ferrichain ", env!("CARGO_PKG_VERSION"));

/// Why a run stopped; each kind maps to one exit status.
#[derive(Debug)]
pub enum RunError {
    Config { source: String, diagnostics: Vec<Diagnostic> },
    Solver(SolveReport),
    Runtime(Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config { .. } => 2,
            RunError::Solver(_) => 3,
            RunError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config { source, diagnostics } => {
                for (i, d) in diagnostics.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    match d.line {
                        Some(_) => write!(f, "{source}:{d}")?,
                        None => write!(f, "{source}: {d}")?,
                    }
                }
                Ok(())
            }
            RunError::Solver(r) => write!(f, "eigensolver did not converge\n{}", serde_json::to_string_pretty(r).unwrap_or_default()),
            RunError::Runtime(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { report } => RunError::Solver(report),
            other => RunError::Runtime(other),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Runtime(e.into())
    }
}

/// Files written by a completed run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Reads and checks a config file without running it.
pub fn validate_file(path: &Path, overrides: &[String]) -> Result<(), RunError> {
    read_config(path, overrides, None).map(|_| ())
}

fn read_config(path: &Path, overrides: &[String], study: Option<&str>) -> Result<(Value, RunConfig), RunError> {
    let source = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| RunError::Config {
        source: source.clone(),
        diagnostics: vec![Diagnostic { line: None, column: None, message: e.to_string() }],
    })?;
    load_config(&text, overrides, study).map_err(|diagnostics| RunError::Config { source, diagnostics })
}

struct Writer {
    dir: PathBuf,
    config_sha256: String,
    files: Vec<PathBuf>,
}

impl Writer {
    fn header(&self) -> String {
        format!("# generated-by: {TOOL}\n# config-sha256: {}\n", self.config_sha256)
    }

    fn provenance(&self) -> Value {
        json!({ "generated_by": TOOL, "config_sha256": self.config_sha256 })
    }

    fn raw(&mut self, name: &str, bytes: &[u8]) -> Result<(), RunError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes)?;
        log::info!("wrote {}", path.display());
        self.files.push(path);
        Ok(())
    }

    fn csv<F>(&mut self, name: &str, body: F) -> Result<(), RunError>
    where
        F: FnOnce(&mut Vec<u8>) -> crate::Result<()>,
    {
        let mut buf = self.header().into_bytes();
        body(&mut buf)?;
        self.raw(name, &buf)
    }

    fn json(&mut self, name: &str, mut value: Value) -> Result<(), RunError> {
        if let Some(obj) = value.as_object_mut() {
            obj.insert("provenance".into(), self.provenance());
        }
        let mut text = serde_json::to_string_pretty(&value).map_err(Error::from)?;
        text.push('\n');
        self.raw(name, text.as_bytes())
    }
}

/// Sector solved by default: the Néel sector of a ferrimagnet, otherwise the
/// smallest `|M|`.
pub fn default_sector(lattice: &LatticeSpec) -> HalfInt {
    neel_sector(lattice).unwrap_or_else(|_| if lattice.total_spin().is_integer() { HalfInt::ZERO } else { HalfInt::HALF })
}

fn solve(config: &RunConfig, sector: Option<HalfInt>, w: &mut Writer) -> Result<GroundStateVector, RunError> {
    let lattice = config.lattice()?;
    let m = sector.unwrap_or_else(|| default_sector(&lattice));
    log::info!("solving {} sites, M = {m}", lattice.n_sites());
    let (gs, report) = ground_state(&HamiltonianSpec::new(lattice), m, &config.solver.options())?;
    log::info!("{report}");
    w.json(
        "solve_report.json",
        json!({
            "total_sz": m,
            "dimension": gs.basis().len(),
            "energy": gs.energy(),
            "neel_amplitude": gs.neel_amplitude(),
            "report": report,
        }),
    )?;
    Ok(gs)
}

/// Runs one study and writes its files, returning where they went.
pub fn run(study: &str, config_path: &Path, overrides: &[String], out: Option<&Path>) -> Result<RunOutcome, RunError> {
    let (doc, config) = read_config(config_path, overrides, Some(study))?;
    let canonical = serde_json::to_string(&doc).map_err(Error::from)?;
    let config_sha256: String = Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("ferrichain-out").join(study));
    fs::create_dir_all(&dir)?;
    let mut w = Writer { dir: dir.clone(), config_sha256, files: Vec::new() };
    let mut pretty = serde_json::to_string_pretty(&doc).map_err(Error::from)?;
    pretty.push('\n');
    w.raw("config.json", pretty.as_bytes())?;

    let seed = config.solver.seed;
    match &config.study {
        Study::Solve { sector } => {
            let gs = solve(&config, *sector, &mut w)?;
            w.csv("ground_state.csv", |buf| write_ground_state(&gs, None, seed, buf))?;
        }
        Study::Amplitudes { sector, top, grouped } => {
            let gs = solve(&config, *sector, &mut w)?;
            let lattice = gs.lattice().clone();
            let packing = gs.basis().packing().clone();
            let ranked = top_amplitudes(&gs, *top, *grouped);
            w.csv("amplitudes.csv", |buf| {
                writeln!(buf, "rank,packed_hex,configuration,amplitude,alpha_r,orbit_size")?;
                for (i, r) in ranked.iter().enumerate() {
                    writeln!(
                        buf,
                        "{},{:#x},{},{:.17e},{:.17e},{}",
                        i + 1,
                        packing.pack(&r.config),
                        r.config.display(&lattice),
                        r.amplitude,
                        gs.relative_amplitude(&r.config),
                        r.orbit_size
                    )?;
                }
                Ok(())
            })?;
        }
        Study::Dictionary { max_structure_len, max_pair_gap } => {
            let gs = solve(&config, None, &mut w)?;
            let options = DictionaryOptions { max_structure_len: *max_structure_len, max_pair_gap: *max_pair_gap };
            let mut dict = StructureDictionary::build(&gs, &options)?;
            dict.set_solver_metadata(json!({ "solver": config.solver, "provenance": w.provenance() }));
            let mut text = dict.to_json()?;
            text.push('\n');
            w.raw("dictionary.json", text.as_bytes())?;
        }
        Study::ApproxGs { dictionary, threshold, rules, compare_exact } => {
            let path = dictionary.as_ref().expect("validated");
            let path = if path.is_relative() {
                config_path.parent().unwrap_or(Path::new(".")).join(path)
            } else {
                path.clone()
            };
            let dict = StructureDictionary::load(fs::File::open(&path).map_err(|e| {
                RunError::Runtime(Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
            })?)?;
            let lattice = config.lattice()?;
            let approx = approximate_ground_state(&lattice, &dict, *threshold, &rules.clone().unwrap_or_default())?;
            log::info!("{} configurations kept", approx.len());
            w.csv("approx_gs.csv", |buf| approx.write_csv(buf))?;
            let overlap = if *compare_exact {
                let gs = solve(&config, None, &mut w)?;
                Some(approx.overlap(&gs))
            } else {
                None
            };
            w.json(
                "approx_summary.json",
                json!({
                    "configurations": approx.len(),
                    "threshold": approx.threshold(),
                    "normalization": approx.normalization(),
                    "overlap": overlap,
                }),
            )?;
        }
        Study::NegativityScan { separations } => {
            let gs = solve(&config, None, &mut w)?;
            let points = negativity_scan(&gs, separations)?;
            w.csv("negativity.csv", |buf| write_negativity_csv(&points, buf))?;
        }
        Study::FidelityTruncation { sites, fractions } => {
            let gs = solve(&config, None, &mut w)?;
            let points = truncation_infidelity_scan(&gs, sites, fractions)?;
            w.csv("truncation.csv", |buf| write_truncation_csv(&points, buf))?;
        }
        Study::FidelityDistort { sites, sigmas, trials, seed: distort_seed } => {
            let gs = solve(&config, None, &mut w)?;
            let points = distortion_scan(&gs, sites, sigmas, *trials, distort_seed.unwrap_or(seed))?;
            w.csv("distortion.csv", |buf| write_distortion_csv(&points, buf))?;
        }
        Study::SectorScan { fields } => {
            let spec = HamiltonianSpec::new(config.lattice()?);
            let points = sector_scan(&spec, fields, &config.solver.options())?;
            w.csv("sector_scan.csv", |buf| {
                writeln!(buf, "field,best,energy,degenerate")?;
                for p in &points {
                    let best: Vec<String> = p.best.iter().map(|m| m.to_string()).collect();
                    writeln!(buf, "{:e},{},{:.17e},{}", p.field, best.join(";"), p.energy, p.degenerate)?;
                }
                Ok(())
            })?;
        }
    }
    Ok(RunOutcome { out_dir: dir, files: w.files })
}
