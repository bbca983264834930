//! CSV and JSON writers for scan artifacts.
//!
//! CSV files carry only deterministic columns, so equal inputs give
//! byte-identical files. The JSON envelope holds the schema version and the
//! generation timestamp.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Writes `rows` with a header row derived from the field names.
pub fn write_csv<T: Serialize>(path: impl AsRef<Path>, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema_version: u32,
    pub kind: &'a str,
    pub generated_unix_secs: u64,
    pub body: &'a T,
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Pretty-printed JSON wrapped in an [`Envelope`].
pub fn write_json<T: Serialize>(path: impl AsRef<Path>, kind: &str, body: &T) -> Result<()> {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        kind,
        generated_unix_secs: unix_now(),
        body,
    };
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &envelope)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
