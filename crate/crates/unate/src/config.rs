//! Flat `key = value` configuration files. Blank lines and lines starting
//! with `#` are ignored. Command-line flags override file values.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::formats::ParseError;
use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ParseError {
                    line: idx + 1,
                    message: "expected `key = value`".into(),
                });
            };
            let key = key.trim();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(ParseError {
                    line: idx + 1,
                    message: format!("bad key `{key}`"),
                });
            }
            if values
                .insert(key.to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(ParseError {
                    line: idx + 1,
                    message: format!("key `{key}` repeated"),
                });
            }
        }
        Ok(Config { values })
    }

    pub fn load(path: Option<&std::path::Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
                Config::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
            }
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Resolves options in the order flag, file, default and records the
/// effective value of each for the run manifest.
#[derive(Debug)]
pub struct Resolver<'a> {
    file: &'a Config,
    pub effective: BTreeMap<String, String>,
}

impl<'a> Resolver<'a> {
    pub fn new(file: &'a Config) -> Self {
        Resolver {
            file,
            effective: BTreeMap::new(),
        }
    }

    /// The flag value, else the file value parsed as `T`, else `None`.
    pub fn opt<T: FromStr + ToString>(
        &mut self,
        key: &str,
        flag: Option<T>,
    ) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let v = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(s) => Some(
                    s.parse::<T>()
                        .map_err(|e| CliError::Input(format!("config key `{key}` = `{s}`: {e}")))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &v {
            self.effective.insert(key.to_string(), v.to_string());
        }
        Ok(v)
    }

    pub fn or<T: FromStr + ToString>(
        &mut self,
        key: &str,
        flag: Option<T>,
        default: T,
    ) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.opt(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.effective.insert(key.to_string(), default.to_string());
                Ok(default)
            }
        }
    }

    /// Records a positional or derived value.
    pub fn record(&mut self, key: &str, value: impl ToString) {
        self.effective.insert(key.to_string(), value.to_string());
    }
}
