//! `key = value` parameter profiles.
//!
//! One assignment per line; `#` starts a comment that runs to the end of the
//! line. Values that parse as finite numbers are numbers, anything else is a
//! bare token. Key order is preserved and duplicate keys are rejected.

use std::fmt;

use crate::error::{Error, Location, Result};
use crate::formats::num::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileValue {
    Number(f64),
    Token(String),
}

impl fmt::Display for ProfileValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileValue::Number(v) => f.write_str(&fmt_f64(*v)),
            ProfileValue::Token(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParameterProfile {
    entries: Vec<(String, ProfileValue)>,
}

fn valid_key(key: &str) -> bool {
    let mut chars = key.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

fn valid_token(tok: &str) -> bool {
    !tok.is_empty() && !tok.contains(|c: char| c.is_whitespace() || c == '#' || c == '=')
}

impl ParameterProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ParameterProfile::new();
        for (idx, raw) in text.lines().enumerate() {
            let at = Location::Line(idx + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse(at, format!("expected `key = value`, found `{line}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            if !valid_key(key) {
                return Err(Error::parse(at, format!("invalid key `{key}`")));
            }
            if !valid_token(value) {
                return Err(Error::parse(at, format!("invalid value `{value}` for `{key}`")));
            }
            if out.get(key).is_some() {
                return Err(Error::parse(at, format!("duplicate key `{key}`")));
            }
            let value = match value.parse::<f64>() {
                Ok(v) if v.is_finite() => ProfileValue::Number(v),
                Ok(_) => return Err(Error::parse(at, format!("`{key}` is not finite"))),
                Err(_) => ProfileValue::Token(value.to_string()),
            };
            out.entries.push((key.to_string(), value));
        }
        Ok(out)
    }

    pub fn get(&self, key: &str) -> Option<&ProfileValue> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Sets `key`, replacing an existing value in place.
    pub fn insert(&mut self, key: &str, value: ProfileValue) {
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ProfileValue)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for ParameterProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}
