//! The append-only event log: births (founders included), deaths, eats,
//! learning updates, and food-center relocations, serialized as JSON
//! lines. The log is the analysis substrate; every exported figure or
//! table is derived from it by replay.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::FoodKind;
use crate::reward::RewardParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    /// A new agent. Founders carry `parent: None` and step 0.
    Birth {
        agent: u64,
        parent: Option<u64>,
        energy: f64,
        weights: RewardParams,
    },
    Death {
        agent: u64,
        age: u64,
        energy: f64,
    },
    Eat {
        agent: u64,
        population: usize,
        food_kind: FoodKind,
    },
    /// One completed (or aborted) PPO update.
    Update {
        agent: u64,
        policy_loss: f64,
        value_loss: f64,
        entropy: f64,
        aborted: bool,
    },
    /// A relocating spawn distribution advanced to a new corner.
    Relocation {
        population: usize,
        corner: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub step: u64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Error)]
pub enum EventLogError {
    #[error("event log I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("event log line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
}

/// Writes records as JSON lines. Serialization is deterministic, so
/// identical record sequences produce byte-identical output.
pub fn write_events(mut writer: impl Write, events: &[EventRecord]) -> Result<(), EventLogError> {
    for event in events {
        serde_json::to_writer(&mut writer, event).map_err(std::io::Error::from)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_events(reader: impl BufRead) -> Result<Vec<EventRecord>, EventLogError> {
    let mut events = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record =
            serde_json::from_str(&line).map_err(|source| EventLogError::Parse { line: i + 1, source })?;
        events.push(record);
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_events() -> Vec<EventRecord> {
        vec![
            EventRecord {
                step: 0,
                kind: EventKind::Birth {
                    agent: 0,
                    parent: None,
                    energy: 20.0,
                    weights: RewardParams {
                        w_food: 0.05,
                        w_act: -0.02,
                        w_extra: None,
                    },
                },
            },
            EventRecord {
                step: 3,
                kind: EventKind::Eat {
                    agent: 0,
                    population: 0,
                    food_kind: FoodKind::Normal,
                },
            },
            EventRecord {
                step: 7,
                kind: EventKind::Update {
                    agent: 0,
                    policy_loss: -0.01,
                    value_loss: 0.4,
                    entropy: 2.8,
                    aborted: false,
                },
            },
            EventRecord {
                step: 9,
                kind: EventKind::Relocation {
                    population: 0,
                    corner: 2,
                },
            },
            EventRecord {
                step: 12,
                kind: EventKind::Death {
                    agent: 0,
                    age: 12,
                    energy: 4.5,
                },
            },
        ]
    }

    #[test]
    fn round_trips_through_json_lines() {
        let events = sample_events();
        let mut buffer = Vec::new();
        write_events(&mut buffer, &events).unwrap();
        let reloaded = read_events(buffer.as_slice()).unwrap();
        assert_eq!(events, reloaded);
    }

    #[test]
    fn records_are_tagged_flat_objects() {
        let mut buffer = Vec::new();
        write_events(&mut buffer, &sample_events()[..1]).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        assert!(text.contains("\"kind\":\"birth\""), "{text}");
        assert!(text.contains("\"step\":0"), "{text}");
        assert!(text.contains("\"w_food\":0.05"), "{text}");
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let text = "{\"step\":0,\"kind\":\"relocation\",\"population\":0,\"corner\":1}\nnot json\n";
        let err = read_events(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn identical_sequences_serialize_identically() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_events(&mut a, &sample_events()).unwrap();
        write_events(&mut b, &sample_events()).unwrap();
        assert_eq!(a, b);
    }
}
