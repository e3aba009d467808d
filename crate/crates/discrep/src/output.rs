//! CSV and JSON writers. Main artifacts and their `.meta.json` sidecars are a
//! pure function of (config, version); wall-clock goes to a separate
//! `.timing.json` so reruns stay byte-identical.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use crate::config::Profile;
use crate::error::{HarnessError, Result};

/// Header attached to every report.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub profile: Profile,
    /// The resolved arguments, after merging flags over the config file.
    pub config: serde_json::Value,
    /// Truncations and tolerances in force.
    pub settings: serde_json::Value,
}

impl Provenance {
    pub fn new(
        command: &'static str,
        profile: Profile,
        config: &impl Serialize,
        settings: serde_json::Value,
    ) -> Result<Self> {
        Ok(Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            profile,
            config: serde_json::to_value(config)?,
            settings,
        })
    }
}

/// Shortest round-trip form, so CSV cells parse back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn open(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err(p))?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_csv(out: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(open(out)?);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush().map_err(io_err(out.unwrap_or(Path::new("-"))))?;
    Ok(())
}

pub fn write_json(out: Option<&Path>, value: &impl Serialize) -> Result<()> {
    let mut w = open(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    let path = out.unwrap_or(Path::new("-"));
    writeln!(w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))?;
    Ok(())
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

#[derive(Serialize)]
struct Timing {
    wall_clock_seconds: f64,
}

/// Writes `<out>.meta.json` (provenance) and `<out>.timing.json` (wall-clock).
pub fn write_sidecars(out: &Path, meta: &Provenance, elapsed: Duration) -> Result<()> {
    write_json(Some(&sidecar(out, ".meta.json")), meta)?;
    write_json(
        Some(&sidecar(out, ".timing.json")),
        &Timing {
            wall_clock_seconds: elapsed.as_secs_f64(),
        },
    )
}
