//! Checkpointing: the whole simulation state as versioned JSON. Every
//! random draw is keyed by absolute (purpose, step, index), so a resumed
//! run continues bit-exactly where the uninterrupted run would be.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Simulation;

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize)]
struct CheckpointRef<'a> {
    version: u32,
    simulation: &'a Simulation,
}

#[derive(Deserialize)]
struct CheckpointFile {
    version: u32,
    simulation: Simulation,
}

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint serialization: {0}")]
    Serde(#[from] serde_json::Error),
    #[error("checkpoint version {found} is not supported (expected {CHECKPOINT_VERSION})")]
    Version { found: u32 },
}

pub fn save_checkpoint(
    simulation: &Simulation,
    mut writer: impl Write,
) -> Result<(), CheckpointError> {
    let file = CheckpointRef {
        version: CHECKPOINT_VERSION,
        simulation,
    };
    serde_json::to_writer(&mut writer, &file)?;
    writer.flush()?;
    Ok(())
}

pub fn load_checkpoint(mut reader: impl Read) -> Result<Simulation, CheckpointError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    // The version gate runs before the full deserialization so a stale
    // file fails with a version message, not a field mismatch.
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let found = value.get("version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    if found != CHECKPOINT_VERSION {
        return Err(CheckpointError::Version { found });
    }
    let file: CheckpointFile = serde_json::from_value(value)?;
    debug_assert_eq!(file.version, CHECKPOINT_VERSION);
    Ok(file.simulation)
}
