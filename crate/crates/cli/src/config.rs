//! Flat `key = value` run configuration with `#` comments.

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

use crate::range::Range;

/// Every key a config may contain.
pub const KEYS: &[&str] = &[
    "alpha", "beta", "p", "gamma", "h", "lambda", "mu", "a", "f", "grid", "tol", "max_iter",
    "damping", "start", "delta", "lambda_range", "mu_range", "solve", "family", "l", "m",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{message}", if *.line > 0 { format!("line {}: ", .line) } else { String::new() })]
pub struct ConfigError {
    /// 1-based; 0 for values that did not come from a file.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError { line, message };
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {body:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(err(format!("empty value for `{key}`")));
            }
            if cfg.entries.contains_key(key) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            cfg.entries.insert(key.to_string(), (value.to_string(), line));
        }
        Ok(cfg)
    }

    /// Sets or replaces a value, as a command-line flag does.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError {
                line: 0,
                message: format!("unknown key `{key}`"),
            });
        }
        self.entries.insert(key.to_string(), (value.into(), 0));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    fn typed<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<T>, ConfigError> {
        let Some((v, line)) = self.entries.get(key) else {
            return Ok(None);
        };
        v.parse().map(Some).map_err(|_| ConfigError {
            line: *line,
            message: format!("`{key}` must be {what}, got {v:?}"),
        })
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v: Option<f64> = self.typed(key, "a number")?;
        match v {
            Some(x) if !x.is_finite() => Err(self.error(key, "must be finite")),
            _ => Ok(v),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.typed(key, "a nonnegative integer")
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        self.typed(key, "true or false")
    }

    pub fn range(&self, key: &str) -> Result<Option<Range>, ConfigError> {
        let Some((v, line)) = self.entries.get(key) else {
            return Ok(None);
        };
        v.parse().map(Some).map_err(|e| ConfigError {
            line: *line,
            message: format!("`{key}`: {e}"),
        })
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, ConfigError> {
        self.f64(key)?.ok_or_else(|| self.missing(key))
    }

    pub fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.get(key).ok_or_else(|| self.missing(key))
    }

    fn missing(&self, key: &str) -> ConfigError {
        ConfigError {
            line: 0,
            message: format!("missing required key `{key}`"),
        }
    }

    pub fn error(&self, key: &str, msg: &str) -> ConfigError {
        ConfigError {
            line: self.entries.get(key).map_or(0, |(_, l)| *l),
            message: format!("`{key}` {msg}"),
        }
    }
}

impl FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RunConfig::parse(s)
    }
}
