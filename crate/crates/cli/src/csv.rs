//! Snapshot CSV: header `t,r,v,rho`, one row per cell, one block per
//! snapshot with blocks separated by a blank line. Floats carry 17
//! significant digits so that reading a file back reproduces the arrays
//! bit for bit. The `rho` column is empty for Burgers runs.

use std::io::{BufRead, Write};

use schwarzschild_wb::driver::Snapshot;

use crate::error::{CliError, Result};

pub const HEADER: &str = "t,r,v,rho";

/// One snapshot block as read back from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub t: f64,
    pub r: Vec<f64>,
    pub v: Vec<f64>,
    pub rho: Option<Vec<f64>>,
}

impl From<&Snapshot> for Block {
    fn from(s: &Snapshot) -> Self {
        Block { t: s.t, r: s.r.clone(), v: s.v.clone(), rho: s.rho.clone() }
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `snapshots` in the snapshot CSV layout.
pub fn write_snapshots<W: Write>(mut w: W, snapshots: &[Snapshot]) -> std::io::Result<()> {
    writeln!(w, "{HEADER}")?;
    for (j, s) in snapshots.iter().enumerate() {
        if j > 0 {
            writeln!(w)?;
        }
        let t = fmt(s.t);
        for i in 0..s.r.len() {
            let rho = s.rho.as_ref().map_or(String::new(), |rho| fmt(rho[i]));
            writeln!(w, "{t},{},{},{rho}", fmt(s.r[i]), fmt(s.v[i]))?;
        }
    }
    w.flush()
}

/// Parses a snapshot CSV produced by [`write_snapshots`].
pub fn read_snapshots<R: BufRead>(reader: R) -> Result<Vec<Block>> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut current: Option<Block> = None;
    let mut header_seen = false;
    for (idx, line) in reader.lines().enumerate() {
        let n = idx + 1;
        let line = line.map_err(|e| CliError::Csv { line: n, reason: e.to_string() })?;
        let bad = |reason: String| CliError::Csv { line: n, reason };
        if !header_seen {
            if line.trim() != HEADER {
                return Err(bad(format!("expected header '{HEADER}'")));
            }
            header_seen = true;
            continue;
        }
        if line.trim().is_empty() {
            blocks.extend(current.take());
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad(format!("expected 4 fields, found {}", fields.len())));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(format!("'{s}': {e}")));
        let (t, r, v) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
        let rho = if fields[3].trim().is_empty() { None } else { Some(num(fields[3])?) };
        let block = current.get_or_insert_with(|| Block { t, r: Vec::new(), v: Vec::new(), rho: rho.map(|_| Vec::new()) });
        if block.t != t {
            return Err(bad(format!("time {t} inside the block of t = {}", block.t)));
        }
        match (&mut block.rho, rho) {
            (Some(col), Some(x)) => col.push(x),
            (None, None) => {}
            _ => return Err(bad("rho present on some rows of a block only".into())),
        }
        block.r.push(r);
        block.v.push(v);
    }
    if !header_seen {
        return Err(CliError::Csv { line: 0, reason: "empty file".into() });
    }
    blocks.extend(current);
    Ok(blocks)
}
