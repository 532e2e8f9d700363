//! Flat TOML run configuration with `key=value` overrides.

use std::path::Path;

use serde::de::DeserializeOwned;
use toml::{Table, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    table: Table,
}

impl RunConfig {
    /// Reads `path` (if any), then applies each `key=value` override in order.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> CliResult<Self> {
        let table = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                text.parse::<Table>()
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => Table::new(),
        };
        let mut config = Self { table };
        for item in overrides {
            let (key, value) = parse_override(item)?;
            config.table.insert(key, value);
        }
        Ok(config)
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.table.insert(key.to_string(), value.into());
    }

    /// Deserialises the keys named in `keys` into `T` and the remaining keys
    /// into `R`. Unknown keys are rejected by the targets themselves.
    pub fn split<T: DeserializeOwned, R: DeserializeOwned>(
        &self,
        keys: &[&str],
    ) -> CliResult<(T, R)> {
        let (own, rest): (Table, Table) = self
            .table
            .clone()
            .into_iter()
            .partition(|(k, _)| keys.contains(&k.as_str()));
        Ok((decode(own)?, decode(rest)?))
    }

    pub fn parse<T: DeserializeOwned>(&self) -> CliResult<T> {
        decode(self.table.clone())
    }
}

fn decode<T: DeserializeOwned>(table: Table) -> CliResult<T> {
    Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(e.message().trim().to_string()))
}

/// `key=value` where the value is any TOML literal; bare words are strings.
fn parse_override(item: &str) -> CliResult<(String, Value)> {
    let (key, raw) = item.split_once('=').ok_or_else(|| {
        CliError::Config(format!("override `{item}` is not of the form key=value"))
    })?;
    let key = key.trim();
    if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(CliError::Config(format!(
            "override key `{key}` is not a bare key"
        )));
    }
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    Ok((key.to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Deserialize, Debug, Default)]
    #[serde(default, deny_unknown_fields)]
    struct Sweep {
        points: usize,
        couplings: Vec<f64>,
        method: String,
    }

    #[derive(Deserialize, Debug, Default)]
    #[serde(default, deny_unknown_fields)]
    struct Rest {
        pump_rate: f64,
    }

    #[test]
    fn overrides_are_typed() {
        let cfg = RunConfig::load(
            None,
            &[
                "points=11".into(),
                "couplings=[0, 1.5]".into(),
                "method=tr-bdf2".into(),
                "pump_rate=2e6".into(),
            ],
        )
        .unwrap();
        let (s, r): (Sweep, Rest) = cfg.split(&["points", "couplings", "method"]).unwrap();
        assert_eq!(s.points, 11);
        assert_eq!(s.couplings, vec![0.0, 1.5]);
        assert_eq!(s.method, "tr-bdf2");
        assert_eq!(r.pump_rate, 2e6);
    }

    #[test]
    fn unknown_key_is_named() {
        let cfg = RunConfig::load(None, &["pump_rat=1".into()]).unwrap();
        let err = cfg.split::<Sweep, Rest>(&["points"]).unwrap_err();
        assert!(err.to_string().contains("pump_rat"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn malformed_override() {
        assert!(RunConfig::load(None, &["novalue".into()]).is_err());
        assert!(RunConfig::load(None, &["a b=1".into()]).is_err());
    }
}
