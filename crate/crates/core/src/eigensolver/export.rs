use std::io::{BufRead, Write};

use super::{GroundStateVector, PhaseConvention, SolveReport};
use crate::error::{Error, Result};
use crate::spinbasis::{Boundary, HalfInt, LatticeSpec, MagnetizationSector, SectorBasis};

/// Metadata stored above the amplitude table of a ground-state file.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundStateHeader {
    pub lattice: LatticeSpec,
    pub total_sz: HalfInt,
    pub energy: f64,
    pub tolerance: f64,
    pub seed: u64,
}

const COLUMNS: &str = "packed_hex,amplitude";

/// Writes `# key: value` header lines followed by one `packed_hex,amplitude`
/// row per basis state in basis order. Amplitudes carry 17 digits after the
/// point, so a read-back reproduces them bit for bit.
pub fn write_ground_state<W: Write>(
    state: &GroundStateVector,
    report: Option<&SolveReport>,
    seed: u64,
    mut out: W,
) -> Result<()> {
    let l = state.lattice();
    let spins: Vec<String> = l.spins().iter().map(|s| s.to_string()).collect();
    writeln!(out, "# spins: {}", spins.join(","))?;
    writeln!(out, "# boundary: {}", l.boundary())?;
    writeln!(out, "# J: {:e}", l.coupling())?;
    writeln!(out, "# B: {:e}", l.field())?;
    writeln!(out, "# M: {}", state.basis().sector().total_sz)?;
    writeln!(out, "# energy: {:.17e}", state.energy())?;
    writeln!(out, "# tolerance: {:e}", report.map_or(f64::NAN, |r| r.tolerance))?;
    writeln!(out, "# seed: {seed}")?;
    writeln!(out, "{COLUMNS}")?;
    for (i, a) in state.amplitudes().iter().enumerate() {
        writeln!(out, "{:#x},{:.17e}", state.basis().code(i), a)?;
    }
    Ok(())
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse().map_err(|_| Error::Parse(format!("{key}: not a number: {v:?}")))
}

/// Reads a file produced by [`write_ground_state`].
pub fn read_ground_state<R: BufRead>(input: R) -> Result<(GroundStateVector, GroundStateHeader)> {
    let mut spins = None;
    let mut boundary = None;
    let (mut j, mut b, mut m, mut energy, mut tolerance, mut seed) = (1.0, 0.0, None, None, f64::NAN, 0);
    let mut rows: Vec<(u64, f64)> = Vec::new();
    let mut seen_columns = false;
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest.split_once(':').ok_or_else(|| at(format!("malformed header {line:?}")))?;
            let value = value.trim();
            match key.trim() {
                "spins" => {
                    let parsed: std::result::Result<Vec<HalfInt>, _> = value.split(',').map(str::parse).collect();
                    spins = Some(parsed.map_err(|e| at(format!("spins: {e}")))?);
                }
                "boundary" => {
                    boundary = Some(match value {
                        "ring" => Boundary::Ring,
                        "open" => Boundary::Open,
                        other => return Err(at(format!("unknown boundary {other:?}"))),
                    })
                }
                "J" => j = parse_f64("J", value)?,
                "B" => b = parse_f64("B", value)?,
                "M" => m = Some(value.parse::<HalfInt>().map_err(|e| at(format!("M: {e}")))?),
                "energy" => energy = Some(parse_f64("energy", value)?),
                "tolerance" => tolerance = parse_f64("tolerance", value)?,
                "seed" => seed = value.parse().map_err(|_| at(format!("seed: {value:?}")))?,
                _ => {}
            }
            continue;
        }
        if !seen_columns {
            if line.trim() != COLUMNS {
                return Err(at(format!("expected column header {COLUMNS:?}")));
            }
            seen_columns = true;
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let (code, amp) = line.split_once(',').ok_or_else(|| at("expected two columns".into()))?;
        let code = u64::from_str_radix(code.trim().trim_start_matches("0x"), 16).map_err(|e| at(e.to_string()))?;
        let amp: f64 = amp.trim().parse().map_err(|_| at(format!("bad amplitude {amp:?}")))?;
        rows.push((code, amp));
    }
    let missing = |k: &str| Error::Parse(format!("missing header field {k:?}"));
    let lattice = LatticeSpec::new(spins.ok_or_else(|| missing("spins"))?, boundary.ok_or_else(|| missing("boundary"))?)?
        .with_coupling(j)
        .with_field(b);
    let total_sz = m.ok_or_else(|| missing("M"))?;
    let energy = energy.ok_or_else(|| missing("energy"))?;
    if rows.is_empty() {
        return Err(Error::Parse("no amplitude rows".into()));
    }
    rows.sort_by_key(|r| r.0);
    if rows.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Parse("duplicate packed configuration".into()));
    }
    let codes: Vec<u64> = rows.iter().map(|r| r.0).collect();
    let amps: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let basis = SectorBasis::from_codes(lattice.clone(), MagnetizationSector::new(total_sz), codes)?;
    for c in basis.configs() {
        c.validate(&lattice)?;
        if c.total_sz(&lattice) != total_sz {
            return Err(Error::Parse(format!("configuration {} is not in sector {total_sz}", c.display(&lattice))));
        }
    }
    let phase = match basis.index_of(&crate::spinbasis::antiferro_reference(&lattice)) {
        Some(i) if amps[i] > 0.0 => PhaseConvention::NeelPositive,
        _ => PhaseConvention::LargestPositive,
    };
    let state = GroundStateVector::from_parts(basis, amps, energy, phase);
    Ok((state, GroundStateHeader { lattice, total_sz, energy, tolerance, seed }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{ground_state, SolverOptions};
    use crate::hamiltonian::HamiltonianSpec;

    #[test]
    fn round_trip_is_bit_exact() {
        let l = LatticeSpec::alternating(6, HalfInt::HALF, HalfInt::THREE_HALVES, Boundary::Ring).unwrap().with_field(0.1);
        let opts = SolverOptions::default();
        let (gs, report) = ground_state(&HamiltonianSpec::new(l.clone()), HalfInt::from_int(3), &opts).unwrap();
        let mut buf = Vec::new();
        write_ground_state(&gs, Some(&report), opts.seed, &mut buf).unwrap();
        let (back, header) = read_ground_state(&buf[..]).unwrap();
        assert_eq!(header.lattice, l);
        assert_eq!(header.seed, opts.seed);
        assert_eq!(back.basis().codes(), gs.basis().codes());
        assert_eq!(back.amplitudes(), gs.amplitudes());
        assert_eq!(back.energy().to_bits(), gs.energy().to_bits());
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_ground_state("# spins: 1/2,3/2\nfoo,bar\n".as_bytes()).is_err());
        assert!(read_ground_state("".as_bytes()).is_err());
    }
}
