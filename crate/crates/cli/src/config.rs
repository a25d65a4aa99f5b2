//! Flat `key = value` config files. Keys are flag names (`-` or `_`);
//! command-line flags win over the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, (String, usize)>,
}

impl ConfigFile {
    pub fn parse(text: &str, known: &[&str]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| {
                anyhow!("config line {line}: expected `key = value`, got {raw:?}")
            })?;
            let key = key.trim().replace('-', "_");
            if !known.contains(&key.as_str()) {
                bail!(
                    "config line {line}: unknown key {key:?}; known keys: {}",
                    known.join(", ")
                );
            }
            if entries
                .insert(key.clone(), (value.trim().to_string(), line))
                .is_some()
            {
                bail!("config line {line}: key {key:?} given twice");
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path, known: &[&str]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text, known).with_context(|| format!("in {}", path.display()))
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries
            .iter()
            .map(|(k, (v, _))| (k.as_str(), v.as_str()))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse()
                .map(Some)
                .map_err(|_| anyhow!("config line {line}: cannot parse {key} = {v:?}")),
        }
    }

    /// The flag value if given, else the file's value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let known = ["seed", "verify_cap", "out"];
        let c =
            ConfigFile::parse("# header\nseed = 7  # trailing\n\nverify-cap=10\n", &known).unwrap();
        assert_eq!(c.get::<u64>("seed").unwrap(), Some(7));
        assert_eq!(c.pick(Some(3u64), "seed").unwrap(), Some(3));
        assert_eq!(c.pick(None::<usize>, "verify_cap").unwrap(), Some(10));
        assert_eq!(c.get::<String>("out").unwrap(), None);
        assert!(ConfigFile::parse("bogus = 1", &known).is_err());
        assert!(ConfigFile::parse("seed 1", &known).is_err());
        assert!(ConfigFile::parse("seed = 1\nseed = 2", &known).is_err());
        assert!(ConfigFile::parse("seed = x", &known)
            .unwrap()
            .get::<u64>("seed")
            .is_err());
    }
}
