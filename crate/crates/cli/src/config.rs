//! Merging of command-line flags, an optional JSON config file and module
//! defaults (in that order of precedence).

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use conegeo::tolerance::{Analysis, Tolerances};
use serde_json::{Map, Value};

/// A configuration problem, tied to the key that caused it.
#[derive(Debug, Clone, PartialEq)]
pub struct InvalidConfig {
    pub key: String,
    pub message: String,
}

impl InvalidConfig {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        InvalidConfig { key: key.into(), message: message.into() }
    }
}

impl fmt::Display for InvalidConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.key, self.message)
    }
}

/// Resolves values for one command. Every config key must be consumed;
/// [`Resolver::finish`] rejects leftovers so typos do not pass silently.
pub struct Resolver {
    config: Map<String, Value>,
    known: BTreeSet<&'static str>,
}

impl Resolver {
    /// `command` is checked against an optional `"command"` entry of the file.
    pub fn load(path: Option<&Path>, command: &str) -> Result<Self, InvalidConfig> {
        let mut config = match path {
            None => Map::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| InvalidConfig::new("config", format!("cannot read {}: {e}", p.display())))?;
                match serde_json::from_str::<Value>(&text) {
                    Ok(Value::Object(map)) => map,
                    Ok(_) => return Err(InvalidConfig::new("config", "top level must be a JSON object")),
                    Err(e) => return Err(InvalidConfig::new("config", format!("{}: {e}", p.display()))),
                }
            }
        };
        match config.remove("command") {
            None => {}
            Some(Value::String(c)) if c == command => {}
            Some(other) => {
                return Err(InvalidConfig::new("command", format!("config is for {other}, not \"{command}\"")));
            }
        }
        Ok(Resolver { config, known: BTreeSet::new() })
    }

    fn take(&mut self, key: &'static str) -> Option<Value> {
        self.known.insert(key);
        self.config.remove(key)
    }

    pub fn f64(&mut self, key: &'static str, flag: Option<f64>) -> Result<Option<f64>, InvalidConfig> {
        let from_file = match self.take(key) {
            None | Some(Value::Null) => None,
            Some(Value::Number(n)) => n.as_f64(),
            Some(other) => return Err(InvalidConfig::new(key, format!("expected a number, got {other}"))),
        };
        let v = flag.or(from_file);
        match v {
            Some(x) if !x.is_finite() => Err(InvalidConfig::new(key, format!("must be finite, got {x}"))),
            _ => Ok(v),
        }
    }

    pub fn required_f64(&mut self, key: &'static str, flag: Option<f64>) -> Result<f64, InvalidConfig> {
        self.f64(key, flag)?.ok_or_else(|| InvalidConfig::new(key, "required"))
    }

    pub fn u64(&mut self, key: &'static str, flag: Option<u64>) -> Result<Option<u64>, InvalidConfig> {
        let from_file = match self.take(key) {
            None | Some(Value::Null) => None,
            Some(Value::Number(n)) if n.as_u64().is_some() => n.as_u64(),
            Some(other) => {
                return Err(InvalidConfig::new(key, format!("expected a non-negative integer, got {other}")))
            }
        };
        Ok(flag.or(from_file))
    }

    pub fn path(&mut self, key: &'static str, flag: Option<PathBuf>) -> Result<Option<PathBuf>, InvalidConfig> {
        let from_file = match self.take(key) {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(other) => return Err(InvalidConfig::new(key, format!("expected a path string, got {other}"))),
        };
        Ok(flag.or(from_file))
    }

    pub fn required_path(&mut self, key: &'static str, flag: Option<PathBuf>) -> Result<PathBuf, InvalidConfig> {
        self.path(key, flag)?.ok_or_else(|| InvalidConfig::new(key, "required"))
    }

    /// An output path whose directory exists.
    pub fn output_path(&mut self, key: &'static str, flag: Option<PathBuf>) -> Result<PathBuf, InvalidConfig> {
        let path = self.required_path(key, flag)?;
        check_output(key, path)
    }

    pub fn optional_output_path(
        &mut self,
        key: &'static str,
        flag: Option<PathBuf>,
    ) -> Result<Option<PathBuf>, InvalidConfig> {
        self.path(key, flag)?.map(|p| check_output(key, p)).transpose()
    }

    /// Sample count and thresholds: module defaults for `defaults`, then the
    /// file's `"tolerances"` object, then `--tol key=value` flags.
    pub fn analysis(
        &mut self,
        defaults: Analysis,
        samples_flag: Option<u64>,
        tol_flags: &[(String, f64)],
    ) -> Result<Analysis, InvalidConfig> {
        let samples = match self.u64("samples", samples_flag)? {
            None => defaults.samples,
            Some(n) if n >= 16 => n as usize,
            Some(n) => return Err(InvalidConfig::new("samples", format!("need at least 16, got {n}"))),
        };

        let Value::Object(mut merged) = serde_json::to_value(defaults.tol).expect("tolerances serialize") else {
            unreachable!("tolerances serialize to an object")
        };
        let mut overrides: Vec<(String, Value)> = Vec::new();
        match self.take("tolerances") {
            None | Some(Value::Null) => {}
            Some(Value::Object(map)) => overrides.extend(map),
            Some(other) => return Err(InvalidConfig::new("tolerances", format!("expected an object, got {other}"))),
        }
        overrides.extend(tol_flags.iter().map(|(k, v)| (k.clone(), Value::from(*v))));
        for (k, v) in overrides {
            let key = format!("tolerances.{k}");
            if !merged.contains_key(&k) {
                return Err(InvalidConfig::new(key, "unknown tolerance"));
            }
            match v.as_f64() {
                Some(x) if x > 0.0 && x.is_finite() => {
                    merged.insert(k, v);
                }
                _ => return Err(InvalidConfig::new(key, format!("must be a positive number, got {v}"))),
            }
        }
        let tol: Tolerances = serde_json::from_value(Value::Object(merged)).expect("merged tolerances deserialize");
        Ok(Analysis { samples, tol })
    }

    /// Fails on config keys that no option of the command consumed.
    pub fn finish(self) -> Result<(), InvalidConfig> {
        match self.config.keys().next() {
            None => Ok(()),
            Some(k) => {
                let known: Vec<&str> = self.known.iter().copied().collect();
                Err(InvalidConfig::new(
                    k.clone(),
                    format!("not an option of this command (expected one of {})", known.join(", ")),
                ))
            }
        }
    }
}

fn check_output(key: &str, path: PathBuf) -> Result<PathBuf, InvalidConfig> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    if !dir.is_dir() {
        return Err(InvalidConfig::new(key, format!("directory {} does not exist", dir.display())));
    }
    if path.is_dir() {
        return Err(InvalidConfig::new(key, format!("{} is a directory", path.display())));
    }
    Ok(path)
}

/// Parses `key=value` for `--tol`.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use conegeo::curve::DerivativeMode;
    use std::io::Write;

    fn write_config(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let f = write_config(r#"{"a": 2.0, "b": 0.5, "tolerances": {"clairaut": 1e-3, "slant": 1e-2}}"#);
        let mut r = Resolver::load(Some(f.path()), "crosscheck").unwrap();
        assert_eq!(r.required_f64("a", Some(3.0)).unwrap(), 3.0);
        assert_eq!(r.required_f64("b", None).unwrap(), 0.5);
        assert_eq!(r.f64("c", None).unwrap(), None);
        let an = r.analysis(Analysis::for_mode(DerivativeMode::Analytic), None, &[("slant".into(), 5e-2)]).unwrap();
        assert_eq!(an.tol.clairaut, 1e-3);
        assert_eq!(an.tol.slant, 5e-2);
        assert_eq!(an.tol.straightness, Tolerances::analytic().straightness);
        r.finish().unwrap();
    }

    #[test]
    fn offending_keys_are_named() {
        let f = write_config(r#"{"a": 1.0, "bogus": 3}"#);
        let mut r = Resolver::load(Some(f.path()), "crosscheck").unwrap();
        r.required_f64("a", None).unwrap();
        assert_eq!(r.finish().unwrap_err().key, "bogus");

        let mut r = Resolver::load(None, "crosscheck").unwrap();
        assert_eq!(r.required_f64("psi0", None).unwrap_err().key, "psi0");
        let err =
            r.analysis(Analysis::for_mode(DerivativeMode::Analytic), None, &[("clairaut".into(), -1.0)]).unwrap_err();
        assert_eq!(err.key, "tolerances.clairaut");
        let err = r.analysis(Analysis::for_mode(DerivativeMode::Analytic), None, &[("nope".into(), 1.0)]).unwrap_err();
        assert_eq!(err.key, "tolerances.nope");

        let f = write_config(r#"{"command": "verify"}"#);
        assert_eq!(Resolver::load(Some(f.path()), "classify").err().unwrap().key, "command");
        let f = write_config(r#"{"a": "one"}"#);
        let mut r = Resolver::load(Some(f.path()), "generate").unwrap();
        assert_eq!(r.f64("a", None).unwrap_err().key, "a");
    }

    #[test]
    fn tolerance_flag_syntax() {
        assert_eq!(parse_tolerance("clairaut=1e-3").unwrap(), ("clairaut".to_string(), 1e-3));
        assert!(parse_tolerance("clairaut").is_err());
        assert!(parse_tolerance("clairaut=x").is_err());
    }
}
