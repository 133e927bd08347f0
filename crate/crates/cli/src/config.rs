//! `key = value` configuration files.

use std::path::Path;

use friable_core::dickman::DEFAULT_TOL;
use friable_core::sieve::SieveConfig;
use friable_core::Error;

pub const THREADS_ENV: &str = "FRIABLE_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub sieve: SieveConfig,
    pub threads: Option<usize>,
    pub tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            sieve: SieveConfig::default(),
            threads: None,
            tol: DEFAULT_TOL,
        }
    }
}

fn value<T: std::str::FromStr>(key: &str, raw: &str, line: usize) -> Result<T, Error> {
    raw.parse()
        .map_err(|_| Error::Argument(format!("config line {line}: bad value {raw:?} for {key}")))
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| Error::Argument(format!("config line {}: expected key = value", i + 1)))?;
            let (key, val) = (key.trim(), val.trim());
            match key {
                "segment_size" => s.sieve.segment_size = value(key, val, i + 1)?,
                "max_n" => s.sieve.max_n = value(key, val, i + 1)?,
                "threads" => s.threads = Some(value(key, val, i + 1)?),
                "tol" => s.tol = value(key, val, i + 1)?,
                _ => return Err(Error::Argument(format!("config line {}: unknown key {key:?}", i + 1))),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Argument(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Flag, then environment, then file.
    pub fn resolve_threads(&mut self, flag: Option<usize>) -> Result<(), Error> {
        if let Some(t) = flag {
            self.threads = Some(t);
        } else if let Ok(env) = std::env::var(THREADS_ENV) {
            self.threads = Some(
                env.trim()
                    .parse()
                    .map_err(|_| Error::Argument(format!("{THREADS_ENV}={env:?} is not a count")))?,
            );
        }
        if self.threads == Some(0) {
            return Err(Error::Argument("thread count must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let s = Settings::parse("segment_size = 1024\n# comment\nthreads=3\ntol = 1e-12 # tight\n").unwrap();
        assert_eq!(s.sieve.segment_size, 1024);
        assert_eq!(s.threads, Some(3));
        assert_eq!(s.tol, 1e-12);
    }

    #[test]
    fn rejects_unknown_or_malformed() {
        assert!(Settings::parse("colour = blue").is_err());
        assert!(Settings::parse("threads").is_err());
        assert!(Settings::parse("threads = many").is_err());
    }

    #[test]
    fn flag_overrides_file() {
        let mut s = Settings::parse("threads = 2").unwrap();
        s.resolve_threads(Some(5)).unwrap();
        assert_eq!(s.threads, Some(5));
        assert!(s.resolve_threads(Some(0)).is_err());
    }
}
