//! Binary field snapshots: one little-endian `f64` file per component,
//! x fastest, plus a JSON sidecar describing the lattice.

use super::field::Field3;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub kind: String,
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub component: usize,
    pub step: u64,
    pub time: f64,
}

fn write_pair(dir: &Path, stem: &str, data: &[f64], meta: &Sidecar) -> Result<PathBuf> {
    let bin = dir.join(format!("{stem}.bin"));
    let bytes: Vec<u8> = data.iter().flat_map(|x| x.to_le_bytes()).collect();
    fs::write(&bin, bytes)?;
    let json = serde_json::to_string_pretty(meta).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(dir.join(format!("{stem}.json")), json)?;
    Ok(bin)
}

/// Writes `{prefix}_c{component}.bin` and `.json` for every component.
pub fn write_field(dir: &Path, prefix: &str, f: &Field3, step: u64, time: f64) -> Result<Vec<PathBuf>> {
    let g = f.grid();
    (0..f.kind().components())
        .map(|c| {
            let meta = Sidecar {
                kind: f.kind().symbol().to_string(),
                nx: g.nx,
                ny: g.ny,
                nz: g.nz,
                dx: g.dx,
                dy: g.dy,
                dz: g.dz,
                component: c,
                step,
                time,
            };
            write_pair(dir, &format!("{prefix}_c{c}"), f.component(c), &meta)
        })
        .collect()
}

/// 1D array snapshot with `ny = nz = 1`.
pub fn write_array(
    dir: &Path,
    prefix: &str,
    kind: &str,
    data: &[f64],
    dx: f64,
    step: u64,
    time: f64,
) -> Result<PathBuf> {
    let meta = Sidecar {
        kind: kind.to_string(),
        nx: data.len(),
        ny: 1,
        nz: 1,
        dx,
        dy: dx,
        dz: dx,
        component: 0,
        step,
        time,
    };
    write_pair(dir, &format!("{prefix}_c0"), data, &meta)
}

/// Reads one component file and its sidecar.
pub fn read_component(bin: &Path) -> Result<(Sidecar, Vec<f64>)> {
    let bytes = fs::read(bin)?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Io(format!(
            "{} is not a whole number of f64 values",
            bin.display()
        )));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let text = fs::read_to_string(bin.with_extension("json"))?;
    let meta: Sidecar = serde_json::from_str(&text).map_err(|e| Error::Io(e.to_string()))?;
    Ok((meta, data))
}
