//! Binary cache of reference states.
//!
//! Layout: header of five little-endian 64-bit fields (scenario hash, point
//! count, length, dt, final time) followed by `N` little-endian `f64` node
//! values. Writes go through a temporary file and an atomic rename.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use kdvlab_solver::State;

use crate::error::OracleError;
use crate::scenario::ReferenceScenario;

fn cache_path(dir: &Path, hash: u64) -> PathBuf {
    dir.join(format!("{hash:016x}.ref"))
}

pub fn store_reference(
    dir: &Path,
    scenario: &ReferenceScenario,
    state: &State,
) -> Result<PathBuf, OracleError> {
    fs::create_dir_all(dir)?;
    let hash = scenario.hash();
    let path = cache_path(dir, hash);
    let tmp = dir.join(format!("{hash:016x}.ref.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        let mut buf = Vec::with_capacity(40 + 8 * state.values().len());
        buf.extend_from_slice(&hash.to_le_bytes());
        buf.extend_from_slice(&(state.values().len() as u64).to_le_bytes());
        buf.extend_from_slice(&scenario.length.to_le_bytes());
        buf.extend_from_slice(&scenario.dt.to_le_bytes());
        buf.extend_from_slice(&scenario.final_time.to_le_bytes());
        for v in state.values() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        f.write_all(&buf)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

pub fn load_reference(
    dir: &Path,
    scenario: &ReferenceScenario,
) -> Result<Option<State>, OracleError> {
    let hash = scenario.hash();
    let path = cache_path(dir, hash);
    if !path.exists() {
        return Ok(None);
    }
    let mut raw = Vec::new();
    fs::File::open(&path)?.read_to_end(&mut raw)?;
    if raw.len() < 40 {
        return Err(OracleError::CacheCorrupt("truncated header".into()));
    }
    let u64_at = |off: usize| u64::from_le_bytes(raw[off..off + 8].try_into().unwrap());
    let f64_at = |off: usize| f64::from_le_bytes(raw[off..off + 8].try_into().unwrap());
    if u64_at(0) != hash {
        return Err(OracleError::CacheCorrupt("hash mismatch".into()));
    }
    let n = u64_at(8) as usize;
    if n != scenario.points {
        return Err(OracleError::CacheCorrupt(format!(
            "point count {n} vs scenario {}",
            scenario.points
        )));
    }
    if raw.len() != 40 + 8 * n {
        return Err(OracleError::CacheCorrupt("payload size".into()));
    }
    for (name, got, want) in [
        ("length", f64_at(16), scenario.length),
        ("dt", f64_at(24), scenario.dt),
        ("final time", f64_at(32), scenario.final_time),
    ] {
        if got != want {
            return Err(OracleError::CacheCorrupt(format!("{name}: {got} vs {want}")));
        }
    }
    let values: Vec<f64> = (0..n).map(|i| f64_at(40 + 8 * i)).collect();
    Ok(Some(State::new(scenario.final_time, values)?))
}
