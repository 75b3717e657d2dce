//! Run configuration: a flat `key = value` file overlaid by command-line
//! flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use num_bigint::BigInt;
use rauzy_core::io::{parse_config, parse_field_descriptor};

use crate::CliError;

pub const DEFAULT_MAX_DEPTH: usize = 40;
pub const DEFAULT_SEED: u64 = 2024;

/// Every knob of a run, after merging the config file and flags.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub field: Vec<BigInt>,
    pub eps: f64,
    pub padic_digits: u32,
    /// IFS depth for `render` and `measure`.
    pub depth: usize,
    /// Starting depth of the membership search.
    pub membership_depth: usize,
    pub confirm_shrink: f64,
    pub node_budget: usize,
    pub max_depth: usize,
    pub out: PathBuf,
    /// `0` leaves the choice to the thread pool.
    pub workers: usize,
    pub seed: u64,
    pub size: usize,
    pub resolution: f64,
    pub q_max: i64,
    pub extra: usize,
    pub samples: usize,
    pub left_len: usize,
}

/// Raw `key → value` pairs; flags are inserted over the file contents.
#[derive(Clone, Debug, Default)]
pub struct Settings(pub BTreeMap<String, String>);

impl Settings {
    pub fn from_file(path: Option<&PathBuf>) -> Result<Self, CliError> {
        match path {
            None => Ok(Settings::default()),
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                Ok(Settings(parse_config(&text).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?))
            }
        }
    }

    pub fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.0.insert(key.to_string(), v);
        }
    }

    fn get<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| CliError::Parse(format!("{key}: cannot parse {v:?}"))),
        }
    }

    /// A number written as a decimal or as `a/b`.
    fn get_ratio(&self, key: &str, default: f64) -> Result<f64, CliError> {
        let Some(v) = self.0.get(key) else { return Ok(default) };
        let bad = || CliError::Parse(format!("{key}: cannot parse {v:?}"));
        match v.split_once('/') {
            Some((a, b)) => {
                let a: f64 = a.trim().parse().map_err(|_| bad())?;
                let b: f64 = b.trim().parse().map_err(|_| bad())?;
                Ok(a / b)
            }
            None => v.trim().parse().map_err(|_| bad()),
        }
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let field = match (self.0.get("field"), self.0.get("field_file")) {
            (Some(inline), _) => parse_field_descriptor(inline).map_err(|e| CliError::Parse(format!("field: {e}")))?,
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
                parse_field_descriptor(&text).map_err(|e| CliError::Parse(format!("{path}: {e}")))?
            }
            (None, None) => return Err(CliError::Parse("no field given (use --field or --field-file)".into())),
        };
        let cfg = RunConfig {
            field,
            eps: self.get("eps", 1e-12)?,
            padic_digits: self.get("padic_digits", 32)?,
            depth: self.get("depth", 12)?,
            membership_depth: self.get("membership_depth", 16)?,
            confirm_shrink: self.get("confirm_shrink", 1e-3)?,
            node_budget: self.get("node_budget", 20_000_000)?,
            max_depth: self.get("max_depth", DEFAULT_MAX_DEPTH)?,
            out: PathBuf::from(self.get_str("out").unwrap_or("out")),
            workers: self.get("workers", 0)?,
            seed: self.get("seed", DEFAULT_SEED)?,
            size: self.get("size", 256)?,
            resolution: self.get_ratio("resolution", 1.0 / 64.0)?,
            q_max: self.get("q", 50)?,
            extra: self.get("extra", 0)?,
            samples: self.get("samples", 1000)?,
            left_len: self.get("left_len", 32)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Parse(m.to_string()));
        if self.eps.is_nan() || self.eps <= 0.0 {
            return bad("eps must be positive");
        }
        if self.padic_digits == 0 {
            return bad("padic_digits must be positive");
        }
        if self.depth > self.max_depth || self.membership_depth > self.max_depth {
            return bad(&format!("depth exceeds max_depth = {}", self.max_depth));
        }
        if self.membership_depth == 0 || self.node_budget == 0 || self.size == 0 || self.left_len == 0 {
            return bad("membership_depth, node_budget, size and left_len must be positive");
        }
        if !(self.confirm_shrink > 0.0 && self.confirm_shrink <= 1.0) {
            return bad("confirm_shrink must lie in (0, 1]");
        }
        if self.resolution.is_nan() || self.resolution <= 0.0 || self.q_max < 1 {
            return bad("resolution and q must be positive");
        }
        Ok(())
    }
}
