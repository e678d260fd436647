//! Configuration resolution: preset defaults, then config-file values,
//! then command-line overrides, merged at the TOML level and validated
//! once at the end. The fully-resolved configuration is echoed next to
//! every run's outputs and reloads to an identical configuration.

use std::fs;
use std::path::Path;

use toml::Value;
use vivarium_core::SimulationConfig;

use crate::presets::Preset;
use crate::CliError;

/// One `key=value` override with a dotted path, e.g.
/// `arena.foods.1.energy_gain=-0.4`. Numeric path segments index arrays.
#[derive(Clone, Debug)]
pub struct Override {
    pub path: String,
    pub value: String,
}

impl std::str::FromStr for Override {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (path, value) = s
            .split_once('=')
            .ok_or_else(|| format!("override {s:?} is not of the form key=value"))?;
        if path.trim().is_empty() {
            return Err(format!("override {s:?} has an empty key"));
        }
        Ok(Override {
            path: path.trim().to_string(),
            value: value.trim().to_string(),
        })
    }
}

/// Resolves the effective configuration: `preset` (default baseline),
/// overlaid with the TOML file at `path` if given, then `overrides` in
/// order, then the explicit seed / step-count flags.
pub fn load_config(
    path: Option<&Path>,
    preset: Option<Preset>,
    overrides: &[Override],
    seed: Option<u64>,
    max_steps: Option<u64>,
) -> Result<SimulationConfig, CliError> {
    let preset = preset.unwrap_or(Preset::Baseline);
    let base = preset.config().ok_or_else(|| {
        CliError::config(format!(
            "preset {preset} is not a simulation preset; use the null-model subcommand"
        ))
    })?;

    let mut resolved = to_table(&base);
    if let Some(path) = path {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| CliError::config(format!("cannot parse {}: {e}", path.display())))?;
        merge_table(&mut resolved, table);
    }
    for item in overrides {
        apply_override(&mut resolved, item)?;
    }

    let mut config: SimulationConfig = Value::Table(resolved)
        .try_into()
        .map_err(|e| CliError::config(format!("invalid configuration: {e}")))?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(max_steps) = max_steps {
        config.max_steps = max_steps;
    }
    config.validate().map_err(CliError::Config)?;
    Ok(config)
}

fn to_table(config: &SimulationConfig) -> toml::Table {
    match Value::try_from(config).expect("config serializes to TOML") {
        Value::Table(table) => table,
        other => unreachable!("config serialized to non-table {other:?}"),
    }
}

/// Recursive map merge; arrays and scalars replace whole. A config file
/// that lists `[[arena.foods]]` therefore defines the complete food set.
fn merge_table(base: &mut toml::Table, overlay: toml::Table) {
    for (key, value) in overlay {
        match (base.get_mut(&key), value) {
            (Some(Value::Table(b)), Value::Table(o)) => merge_table(b, o),
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

/// Sets `item.path` inside `root`. Every path segment must already exist
/// (numeric segments index arrays), so typos fail with the offending key
/// rather than silently adding an ignored value.
fn apply_override(root: &mut toml::Table, item: &Override) -> Result<(), CliError> {
    let parsed = parse_scalar(&item.value);
    let mut cursor = root
        .get_mut(first_segment(&item.path))
        .ok_or_else(|| unknown_key(&item.path, first_segment(&item.path)))?;
    let segments: Vec<&str> = item.path.split('.').collect();
    for (i, segment) in segments.iter().enumerate().skip(1) {
        cursor = match cursor {
            Value::Table(table) => table
                .get_mut(*segment)
                .ok_or_else(|| unknown_key(&item.path, segment))?,
            Value::Array(array) => {
                let index: usize = segment.parse().map_err(|_| {
                    CliError::config(format!(
                        "override key {:?}: expected an array index, got {segment:?}",
                        item.path
                    ))
                })?;
                array.get_mut(index).ok_or_else(|| {
                    CliError::config(format!(
                        "override key {:?}: index {index} is out of bounds",
                        item.path
                    ))
                })?
            }
            _ => {
                return Err(CliError::config(format!(
                    "override key {:?}: {segment:?} indexes into a scalar",
                    item.path
                )))
            }
        };
        if i == segments.len() - 1 {
            break;
        }
    }
    *cursor = parsed;
    Ok(())
}

fn first_segment(path: &str) -> &str {
    path.split('.').next().unwrap_or(path)
}

fn unknown_key(path: &str, segment: &str) -> CliError {
    CliError::config(format!("unknown config key {segment:?} in override {path:?}"))
}

/// Interprets an override value as TOML (so numbers, booleans, arrays and
/// quoted strings all work); anything unparseable is a bare string.
fn parse_scalar(text: &str) -> Value {
    let doc = format!("v = {text}");
    match doc.parse::<toml::Table>() {
        Ok(mut table) => table.remove("v").expect("key v exists"),
        Err(_) => Value::String(text.to_string()),
    }
}

/// Writes the resolved configuration next to the run outputs. The file
/// reloads (via [`SimulationConfig::from_toml`]) to the same configuration.
pub fn write_resolved_config(config: &SimulationConfig, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join("resolved_config.toml");
    fs::write(&path, config.to_toml())
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

pub fn read_resolved_config(dir: &Path) -> Result<SimulationConfig, CliError> {
    let path = dir.join("resolved_config.toml");
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    SimulationConfig::from_toml(&text)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn overrides(items: &[&str]) -> Vec<Override> {
        items.iter().map(|s| Override::from_str(s).unwrap()).collect()
    }

    #[test]
    fn preset_alone_resolves_to_preset_config() {
        let config = load_config(None, Some(Preset::Small), &[], None, None).unwrap();
        assert_eq!(config.arena.width, 360.0);
        assert_eq!(config.arena.height, 360.0);
    }

    #[test]
    fn default_preset_is_baseline() {
        let config = load_config(None, None, &[], None, None).unwrap();
        assert_eq!(config.to_toml(), Preset::Baseline.config().unwrap().to_toml());
    }

    #[test]
    fn file_values_override_preset() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        fs::write(&path, "max_steps = 77\n[arena]\nwidth = 500.0\n").unwrap();
        let config = load_config(Some(&path), Some(Preset::Baseline), &[], None, None).unwrap();
        assert_eq!(config.max_steps, 77);
        assert_eq!(config.arena.width, 500.0);
        assert_eq!(config.arena.height, 360.0);
    }

    #[test]
    fn cli_overrides_apply_last() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        fs::write(&path, "[arena]\nwidth = 500.0\n").unwrap();
        let config = load_config(
            Some(&path),
            None,
            &overrides(&["arena.width=520.0", "rl.hidden_dim=8"]),
            Some(9),
            Some(123),
        )
        .unwrap();
        assert_eq!(config.arena.width, 520.0);
        assert_eq!(config.rl.hidden_dim, 8);
        assert_eq!(config.seed, 9);
        assert_eq!(config.max_steps, 123);
    }

    #[test]
    fn override_can_index_food_array() {
        let config = load_config(
            None,
            Some(Preset::Poison),
            &overrides(&["arena.foods.1.energy_gain=-0.4"]),
            None,
            None,
        )
        .unwrap();
        assert_eq!(config.arena.foods[1].energy_gain, -0.4);
    }

    #[test]
    fn unknown_override_key_is_rejected() {
        let err = load_config(None, None, &overrides(&["arena.widht=3"]), None, None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("widht"), "{err}");
    }

    #[test]
    fn out_of_range_value_is_rejected() {
        let err =
            load_config(None, None, &overrides(&["arena.width=-1.0"]), None, None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("width"), "{err}");
    }

    #[test]
    fn type_mismatch_is_descriptive() {
        let err =
            load_config(None, None, &overrides(&["arena.width=oops"]), None, None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn null_model_preset_is_not_runnable() {
        let err = load_config(None, Some(Preset::RandomWalkNull), &[], None, None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("null-model"), "{err}");
    }

    #[test]
    fn resolved_echo_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let config = load_config(
            None,
            Some(Preset::Poor),
            &overrides(&["rl.hyper.epochs=3"]),
            Some(5),
            None,
        )
        .unwrap();
        write_resolved_config(&config, dir.path()).unwrap();
        let reloaded = read_resolved_config(dir.path()).unwrap();
        assert_eq!(config.to_toml(), reloaded.to_toml());
    }
}
