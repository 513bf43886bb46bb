//! Run configuration in a flat `key = value` text format.
//!
//! Lines starting with `#` and blank lines are ignored. Every key may appear
//! at most once per source; later sources (command-line flags) override
//! earlier ones (a config file), which override the defaults.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use topling_core::dataset::{Schema, DEFAULT_ROW_THRESHOLD};
use topling_core::dimension::DEFAULT_ALPHA;
use topling_core::filtration::{DEFAULT_SIMPLEX_LIMIT, DEFAULT_STEPS};
use topling_core::h1loc::{DEFAULT_CYCLE_CAP, DEFAULT_MAX_CYCLE_LEN};
use topling_core::projection::DEFAULT_VARIANCE_FRACTION;

use crate::error::CliError;

/// How incomplete matrices are made complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissingMode {
    /// Drop sparse rows, then every column with a gap.
    Filter,
    /// Replace gaps by the schema midpoint.
    Fill,
}

impl MissingMode {
    fn as_str(self) -> &'static str {
        match self {
            MissingMode::Filter => "filter",
            MissingMode::Fill => "fill",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub schema: Schema,
    pub row_threshold: f64,
    pub missing: MissingMode,
    /// Analyse columns as points instead of rows.
    pub transpose: bool,
    /// Retained-variance fraction; `None` uses the raw coordinates.
    pub pca: Option<f64>,
    pub steps: usize,
    /// Highest homology dimension reported.
    pub max_dim: usize,
    pub snap_grid: bool,
    /// Persistence cutoff; `None` means the enclosing radius.
    pub cutoff: Option<f64>,
    /// Radii for 1-skeleton exports; empty means the critical radius.
    pub radii: Vec<f64>,
    pub simplex_limit: usize,
    pub alpha: f64,
    pub s: Option<usize>,
    pub f_max: Option<usize>,
    /// `None` means two grid steps.
    pub min_persistence: Option<f64>,
    pub max_cycle_len: usize,
    pub cycle_cap: usize,
    /// Removal groups, by point name.
    pub groups: Vec<Vec<String>>,
    pub ref_tree: Option<PathBuf>,
    pub baseline_rows: usize,
    pub baseline_cols: usize,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            schema: Schema::Binary,
            row_threshold: DEFAULT_ROW_THRESHOLD,
            missing: MissingMode::Filter,
            transpose: false,
            pca: Some(DEFAULT_VARIANCE_FRACTION),
            steps: DEFAULT_STEPS,
            max_dim: 2,
            snap_grid: false,
            cutoff: None,
            radii: Vec::new(),
            simplex_limit: DEFAULT_SIMPLEX_LIMIT,
            alpha: DEFAULT_ALPHA,
            s: None,
            f_max: None,
            min_persistence: None,
            max_cycle_len: DEFAULT_MAX_CYCLE_LEN,
            cycle_cap: DEFAULT_CYCLE_CAP,
            groups: Vec::new(),
            ref_tree: None,
            baseline_rows: 40,
            baseline_cols: 60,
            seed: 0,
            out: PathBuf::from("out"),
        }
    }
}

/// Every recognised key, in serialisation order.
pub const KEYS: &[&str] = &[
    "input",
    "schema",
    "threshold",
    "missing",
    "transpose",
    "pca",
    "steps",
    "max_dim",
    "snap_grid",
    "cutoff",
    "radii",
    "simplex_limit",
    "alpha",
    "s",
    "fmax",
    "min_persistence",
    "max_cycle_len",
    "cycle_cap",
    "groups",
    "ref_tree",
    "baseline_rows",
    "baseline_cols",
    "seed",
    "out",
];

fn bad(key: &str, value: &str, why: &str) -> CliError {
    CliError::Config(format!("{key} = {value:?}: {why}"))
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| bad(key, value, "not a valid number"))
}

fn flag(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

fn optional<T: FromStr>(key: &str, value: &str) -> Result<Option<T>, CliError> {
    match value {
        "" | "auto" | "off" | "none" => Ok(None),
        v => num(key, v).map(Some),
    }
}

fn fraction(key: &str, value: &str, v: f64, open_low: bool) -> Result<f64, CliError> {
    let ok = if open_low { v > 0.0 && v <= 1.0 } else { (0.0..=1.0).contains(&v) };
    if ok {
        Ok(v)
    } else {
        Err(bad(key, value, "outside the allowed fraction range"))
    }
}

fn positive(key: &str, value: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad(key, value, "must be positive"))
    }
}

fn opt_text(v: &Option<impl ToString>) -> String {
    v.as_ref().map_or_else(|| "auto".to_string(), ToString::to_string)
}

impl RunConfig {
    /// Assigns one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key {
            "input" => self.input = (!value.is_empty()).then(|| PathBuf::from(value)),
            "schema" => {
                self.schema = value
                    .parse()
                    .map_err(|_| bad(key, value, "expected binary, ternary or real"))?
            }
            "threshold" => self.row_threshold = fraction(key, value, num(key, value)?, false)?,
            "missing" => {
                self.missing = match value {
                    "filter" => MissingMode::Filter,
                    "fill" => MissingMode::Fill,
                    _ => return Err(bad(key, value, "expected filter or fill")),
                }
            }
            "transpose" => self.transpose = flag(key, value)?,
            "pca" => {
                self.pca = match optional::<f64>(key, value)? {
                    None => None,
                    Some(v) => Some(fraction(key, value, v, true)?),
                }
            }
            "steps" => {
                self.steps = num(key, value)?;
                if self.steps == 0 {
                    return Err(bad(key, value, "must be at least 1"));
                }
            }
            "max_dim" => {
                self.max_dim = num(key, value)?;
                if self.max_dim > 2 {
                    return Err(bad(key, value, "homology is computed up to dimension 2"));
                }
            }
            "snap_grid" => self.snap_grid = flag(key, value)?,
            "cutoff" => {
                self.cutoff = match optional::<f64>(key, value)? {
                    None => None,
                    Some(v) => Some(positive(key, value, v)?),
                }
            }
            "radii" => {
                self.radii = value
                    .split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|t| num::<f64>(key, t).and_then(|v| positive(key, t, v)))
                    .collect::<Result<_, _>>()?
            }
            "simplex_limit" => self.simplex_limit = num(key, value)?,
            "alpha" => self.alpha = positive(key, value, num(key, value)?)?,
            "s" => self.s = optional(key, value)?,
            "fmax" => self.f_max = optional(key, value)?,
            "min_persistence" => {
                self.min_persistence = match optional::<f64>(key, value)? {
                    Some(v) if !(v >= 0.0) => return Err(bad(key, value, "must be nonnegative")),
                    other => other,
                }
            }
            "max_cycle_len" => {
                self.max_cycle_len = num(key, value)?;
                if self.max_cycle_len < 3 {
                    return Err(bad(key, value, "must be at least 3"));
                }
            }
            "cycle_cap" => self.cycle_cap = num(key, value)?,
            "groups" => {
                self.groups = value
                    .split(';')
                    .map(|g| {
                        g.split(',')
                            .map(str::trim)
                            .filter(|t| !t.is_empty())
                            .map(String::from)
                            .collect::<Vec<_>>()
                    })
                    .filter(|g| !g.is_empty())
                    .collect()
            }
            "ref_tree" => self.ref_tree = (!value.is_empty()).then(|| PathBuf::from(value)),
            "baseline_rows" => self.baseline_rows = num(key, value)?,
            "baseline_cols" => self.baseline_cols = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "out" => {
                if value.is_empty() {
                    return Err(bad(key, value, "output directory is required"));
                }
                self.out = PathBuf::from(value)
            }
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Textual value of one key, in the form [`RunConfig::set`] accepts.
    pub fn get(&self, key: &str) -> Option<String> {
        let path = |p: &Option<PathBuf>| p.as_ref().map_or_else(String::new, |p| p.display().to_string());
        Some(match key {
            "input" => path(&self.input),
            "schema" => self.schema.as_str().to_string(),
            "threshold" => self.row_threshold.to_string(),
            "missing" => self.missing.as_str().to_string(),
            "transpose" => self.transpose.to_string(),
            "pca" => self.pca.map_or_else(|| "off".to_string(), |v| v.to_string()),
            "steps" => self.steps.to_string(),
            "max_dim" => self.max_dim.to_string(),
            "snap_grid" => self.snap_grid.to_string(),
            "cutoff" => opt_text(&self.cutoff),
            "radii" => self.radii.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
            "simplex_limit" => self.simplex_limit.to_string(),
            "alpha" => self.alpha.to_string(),
            "s" => opt_text(&self.s),
            "fmax" => opt_text(&self.f_max),
            "min_persistence" => opt_text(&self.min_persistence),
            "max_cycle_len" => self.max_cycle_len.to_string(),
            "cycle_cap" => self.cycle_cap.to_string(),
            "groups" => self
                .groups
                .iter()
                .map(|g| g.join(","))
                .collect::<Vec<_>>()
                .join(";"),
            "ref_tree" => path(&self.ref_tree),
            "baseline_rows" => self.baseline_rows.to_string(),
            "baseline_cols" => self.baseline_cols.to_string(),
            "seed" => self.seed.to_string(),
            "out" => self.out.display().to_string(),
            _ => return None,
        })
    }

    /// Applies a `key = value` document on top of `self`.
    pub fn merge_text(&mut self, text: &str) -> Result<(), CliError> {
        let mut seen = std::collections::BTreeSet::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(CliError::Config(format!("line {}: duplicate key {key:?}", n + 1)));
            }
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        cfg.merge_text(text)?;
        Ok(cfg)
    }

    /// Every key with its value, one per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for key in KEYS {
            let _ = writeln!(s, "{key} = {}", self.get(key).unwrap_or_default());
        }
        s
    }
}
