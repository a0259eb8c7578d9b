//! Merges command-line flags with an optional key=value config file.

use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use ofdm_icm::harness::{parse_config_text, ConfigMap};

pub struct Settings {
    file: ConfigMap,
    seen: BTreeSet<String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config file {}", p.display()))?;
                parse_config_text(&text).with_context(|| format!("in config file {}", p.display()))?
            }
            None => ConfigMap::new(),
        };
        Ok(Self {
            file,
            seen: BTreeSet::new(),
        })
    }

    /// Flag value if given, else the file value for `key`.
    pub fn get<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.seen.insert(key.to_string());
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key '{key}' = '{raw}': {e}")),
            None => Ok(None),
        }
    }

    pub fn require<T>(&mut self, key: &str, flag: Option<T>) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        match self.get(key, flag)? {
            Some(v) => Ok(v),
            None => bail!("missing required setting --{key}"),
        }
    }

    pub fn or<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key, flag)?.unwrap_or(default))
    }

    /// Fails on config-file keys the subcommand never asked for.
    pub fn finish(self) -> Result<()> {
        let unknown: Vec<&String> = self.file.keys().filter(|k| !self.seen.contains(*k)).collect();
        if !unknown.is_empty() {
            bail!(
                "unknown config key(s): {}",
                unknown.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            );
        }
        Ok(())
    }
}
