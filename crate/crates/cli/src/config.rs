//! `key = value` configuration files.
//!
//! Keys are the long flag names without the leading dashes (`theta`,
//! `eps-w`, `pair`, ...); underscores and dashes are interchangeable. A key may
//! appear more than once for repeatable flags such as `pair`. Values from the
//! command line or `CBRN_*` environment variables take precedence.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: HashMap<String, Vec<String>>,
}

fn canonical(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values: HashMap<String, Vec<String>> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("config line {}: expected key = value", i + 1))
            })?;
            let value = value.trim().trim_matches('"').to_string();
            values.entry(canonical(key)).or_default().push(value);
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values
            .get(&canonical(key))
            .and_then(|v| v.last())
            .map(String::as_str)
    }

    pub fn get_all(&self, key: &str) -> Vec<String> {
        self.values
            .get(&canonical(key))
            .cloned()
            .unwrap_or_default()
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::usage(format!("config key {key}: invalid value {v:?}"))),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(false),
            Some("true" | "1" | "yes" | "on") => Ok(true),
            Some("false" | "0" | "no" | "off") => Ok(false),
            Some(v) => Err(CliError::usage(format!(
                "config key {key}: expected a boolean, got {v:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_repeats() {
        let cfg = ConfigFile::parse(
            "# run\ntheta = 90\neps_w=0.5\npair = color:0=style:3\npair = style:3=volume:6\nunnormalized = yes\n",
        )
        .unwrap();
        assert_eq!(cfg.parsed::<f64>("theta").unwrap(), Some(90.0));
        assert_eq!(cfg.parsed::<f64>("eps-w").unwrap(), Some(0.5));
        assert_eq!(cfg.get_all("pair").len(), 2);
        assert!(cfg.flag("unnormalized").unwrap());
        assert_eq!(cfg.parsed::<f64>("threshold").unwrap(), None);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(ConfigFile::parse("theta 90").is_err());
        let cfg = ConfigFile::parse("theta = many").unwrap();
        assert!(cfg.parsed::<f64>("theta").is_err());
    }
}
