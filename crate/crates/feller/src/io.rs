//! CSV artifacts: paths and corruption sidecars as "time,state", partitions
//! as "num/den", variation profiles as "k,lv".

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use feller_core::{EventPath, RationalPartition, VariationProfile};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const PATHS_DIR: &str = "paths";
pub const CORRUPTIONS_DIR: &str = "corruptions";
pub const REGULARIZED_DIR: &str = "regularized";
pub const PROFILES_DIR: &str = "profiles";

/// Shortest round-trip decimal, always with a decimal point.
pub fn fmt_f64(x: f64) -> String {
    let s = format!("{x}");
    if s.contains(['.', 'e', 'E', 'N', 'i']) {
        s
    } else {
        s + ".0"
    }
}

pub fn replicate_file(dir: &Path, sub: &str, index: usize) -> PathBuf {
    dir.join(sub).join(format!("path_{index:06}.csv"))
}

#[derive(Debug, Deserialize)]
struct Row {
    time: f64,
    state: usize,
}

fn writer(path: &Path) -> CliResult<csv::Writer<BufWriter<File>>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::at(parent, e))?;
    }
    let file = File::create(path).map_err(|e| CliError::at(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn write_rows<I, A, B>(path: &Path, header: [&str; 2], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = (A, B)>,
    A: AsRef<[u8]>,
    B: AsRef<[u8]>,
{
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| CliError::at(path, e))?;
    for (a, b) in rows {
        w.write_record([a.as_ref(), b.as_ref()]).map_err(|e| CliError::at(path, e))?;
    }
    w.flush().map_err(|e| CliError::at(path, e))
}

fn write_time_state(path: &Path, rows: impl IntoIterator<Item = (f64, usize)>) -> CliResult<()> {
    write_rows(path, ["time", "state"], rows.into_iter().map(|(t, s)| (fmt_f64(t), s.to_string())))
}

fn read_time_state(path: &Path) -> CliResult<Vec<(f64, usize)>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::at(path, e))?;
    let headers = r.headers().map_err(|e| CliError::at(path, e))?;
    if headers != vec!["time", "state"] {
        return Err(CliError::at(path, "expected header \"time,state\""));
    }
    r.deserialize::<Row>()
        .map(|row| row.map(|r| (r.time, r.state)).map_err(|e| CliError::at(path, e)))
        .collect()
}

pub fn write_path(path: &Path, ep: &EventPath) -> CliResult<()> {
    let rows = std::iter::once((0.0, ep.initial_state())).chain(ep.jumps().iter().copied());
    write_time_state(path, rows)
}

pub fn read_path(path: &Path, horizon: f64, n_states: usize) -> CliResult<EventPath> {
    let rows = read_time_state(path)?;
    match rows.split_first() {
        Some((&(0.0, initial), jumps)) => {
            EventPath::new(initial, jumps.to_vec(), horizon, n_states).map_err(|e| CliError::at(path, e))
        }
        _ => Err(CliError::at(path, "first row must be time 0.0")),
    }
}

pub fn write_corruptions(path: &Path, corruptions: &[(f64, usize)]) -> CliResult<()> {
    write_time_state(path, corruptions.iter().copied())
}

pub fn read_corruptions(path: &Path) -> CliResult<Vec<(f64, usize)>> {
    read_time_state(path)
}

pub fn write_samples(path: &Path, times: &[f64], states: &[usize]) -> CliResult<()> {
    write_time_state(path, times.iter().copied().zip(states.iter().copied()))
}

pub fn write_partition(path: &Path, partition: &RationalPartition) -> CliResult<()> {
    let mut w = writer(path)?;
    w.write_record(["time"]).map_err(|e| CliError::at(path, e))?;
    for p in partition.points() {
        w.write_record([format!("{}/{}", p.numer(), p.denom())]).map_err(|e| CliError::at(path, e))?;
    }
    w.flush().map_err(|e| CliError::at(path, e))
}

pub fn write_profile(path: &Path, profile: &VariationProfile) -> CliResult<()> {
    write_rows(path, ["k", "lv"], profile.values.iter().map(|&(k, v)| (k.to_string(), fmt_f64(v))))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::at(parent, e))?;
    }
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::at(path, e))?;
    bytes.push(b'\n');
    let mut f = File::create(path).map_err(|e| CliError::at(path, e))?;
    f.write_all(&bytes).map_err(|e| CliError::at(path, e))
}
