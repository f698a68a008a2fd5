//! Setting resolution: command-line flag, then the TOML config file (the
//! subcommand's table first, then top-level keys), then `LECS_*` environment
//! variables, then the built-in default.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};

use crate::Invalid;

pub const ENV_PREFIX: &str = "LECS_";

#[derive(Debug, Clone, Default)]
pub struct Settings {
    table: toml::Table,
    section: Option<String>,
}

fn render(value: &toml::Value) -> String {
    match value {
        toml::Value::String(s) => s.clone(),
        toml::Value::Array(items) => items.iter().map(render).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

pub fn env_key(key: &str) -> String {
    format!("{ENV_PREFIX}{}", key.to_ascii_uppercase().replace('-', "_"))
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Settings::default()) };
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let table: toml::Table = text.parse().map_err(|e| Invalid(format!("config {}: {e}", path.display())))?;
        Ok(Settings { table, section: None })
    }

    /// Scope lookups to a section such as `bench` or `eval.embed`.
    pub fn section(&self, name: &str) -> Settings {
        Settings { table: self.table.clone(), section: Some(name.to_string()) }
    }

    fn from_file(&self, key: &str) -> Option<String> {
        let mut candidates = Vec::new();
        if let Some(section) = &self.section {
            let mut t = Some(&self.table);
            for part in section.split('.') {
                t = t.and_then(|t| t.get(part)).and_then(|v| v.as_table());
            }
            candidates.extend(t.and_then(|t| t.get(key).or_else(|| t.get(&key.replace('-', "_")))));
        }
        candidates.extend(self.table.get(key).or_else(|| self.table.get(&key.replace('-', "_"))).filter(|v| !v.is_table()));
        candidates.first().map(|v| render(v))
    }

    pub fn raw(&self, key: &str) -> Option<String> {
        self.from_file(key).or_else(|| std::env::var(env_key(key)).ok())
    }

    pub fn get<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            Some(text) => text.trim().parse().map(Some).map_err(|e| Invalid(format!("invalid {key} `{text}`: {e}")).into()),
            None => Ok(None),
        }
    }

    pub fn or<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.get(flag, key)?.unwrap_or(default))
    }

    pub fn required<T>(&self, flag: Option<T>, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(flag, key)?.ok_or_else(|| Invalid(format!("missing required setting --{key}")).into())
    }

    pub fn path(&self, flag: Option<PathBuf>, key: &str) -> Result<PathBuf> {
        self.required(flag, key)
    }

    /// Comma-separated list setting; an empty flag list falls through.
    pub fn list<T>(&self, flag: Vec<T>, key: &str) -> Result<Vec<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if !flag.is_empty() {
            return Ok(flag);
        }
        match self.raw(key) {
            Some(text) => text
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|e| Invalid(format!("invalid {key} entry `{s}`: {e}")).into()))
                .collect(),
            None => Ok(Vec::new()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(toml_text: &str) -> Settings {
        Settings { table: toml_text.parse().unwrap(), section: None }
    }

    #[test]
    fn flag_beats_file_beats_env_beats_default() {
        let s = settings("seed = 5\n[bench]\nn = 40\n");
        std::env::set_var("LECS_SEED", "9");
        std::env::set_var("LECS_DIMS", "128");
        assert_eq!(s.or(Some(1u64), "seed", 0).unwrap(), 1);
        assert_eq!(s.or(None::<u64>, "seed", 0).unwrap(), 5);
        assert_eq!(s.or(None::<usize>, "dims", 64).unwrap(), 128);
        assert_eq!(s.or(None::<usize>, "sample", 7).unwrap(), 7);
        assert_eq!(s.section("bench").or(None::<usize>, "n", 0).unwrap(), 40);
        assert_eq!(s.or(None::<usize>, "n", 0).unwrap(), 0);
        std::env::remove_var("LECS_SEED");
        std::env::remove_var("LECS_DIMS");
    }

    #[test]
    fn lists_and_bad_values() {
        let s = settings("pair-types = [\"pos_vs_neg\", \"obf_vs_neg\"]\nworkers = \"many\"\n");
        assert_eq!(s.list(Vec::<String>::new(), "pair-types").unwrap(), vec!["pos_vs_neg", "obf_vs_neg"]);
        let err = s.or(None::<usize>, "workers", 1).unwrap_err();
        assert!(err.downcast_ref::<Invalid>().is_some());
    }
}
