use std::io::Write;

use super::SectorBasis;
use crate::error::Result;

pub const SECTOR_CSV_HEADER: &str = "index,packed_hex,m,total_sz";

/// Writes a basis as CSV: ordinal, packed code in hex, the per-site
/// projections joined by spaces, and the total magnetization.
pub fn write_sector_csv<W: Write>(basis: &SectorBasis, mut out: W) -> Result<()> {
    writeln!(out, "{SECTOR_CSV_HEADER}")?;
    let lattice = basis.lattice();
    for (i, c) in basis.configs().enumerate() {
        writeln!(
            out,
            "{},{:#x},{},{}",
            i,
            basis.code(i),
            c.display(lattice),
            c.total_sz(lattice)
        )?;
    }
    Ok(())
}
