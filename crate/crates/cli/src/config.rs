//! Sweep configuration files.
//!
//! One `key = value` pair per line (`:` also works as the separator), `#`
//! starts a comment. Values are a scalar, a list `[a, b, c]`, or for integer
//! keys an inclusive range `lo..hi`.

use std::fmt;
use std::str::FromStr;

use degenzeta::{Grid, IdentityId, ToleranceBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(format!("unknown output format `{s}` (expected json, csv or text)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub identities: Vec<IdentityId>,
    pub grid: Grid,
    pub budget: ToleranceBudget,
    pub output_format: OutputFormat,
    pub parallelism: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.key {
            Some(k) => write!(f, "config key `{k}`: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: Some(key.to_string()),
        message: message.into(),
    }
}

const KEYS: [&str; 12] = [
    "identities",
    "lambdas",
    "p_range",
    "n_range",
    "r_range",
    "m_range",
    "tol",
    "max_terms",
    "quad_tol",
    "quad_max_panels",
    "output_format",
    "parallelism",
];

/// Splits a scalar or `[a, b]` list into trimmed items.
fn items<'a>(key: &str, value: &'a str) -> Result<Vec<&'a str>, ConfigError> {
    let v = value.trim();
    let inner = match (v.strip_prefix('['), v.ends_with(']')) {
        (Some(rest), true) => &rest[..rest.len() - 1],
        (None, false) => return Ok(vec![v]),
        _ => return Err(err(key, format!("unbalanced brackets in `{v}`"))),
    };
    if inner.trim().is_empty() {
        return Err(err(key, "empty list"));
    }
    Ok(inner.split(',').map(str::trim).collect())
}

fn parse_one<T: FromStr>(key: &str, s: &str) -> Result<T, ConfigError> {
    s.parse().map_err(|_| err(key, format!("cannot parse `{s}`")))
}

fn parse_ints(key: &str, value: &str) -> Result<Vec<usize>, ConfigError> {
    let v = value.trim();
    if !v.starts_with('[') {
        if let Some((lo, hi)) = v.split_once("..") {
            let lo: usize = parse_one(key, lo.trim())?;
            let hi: usize = parse_one(key, hi.trim())?;
            if lo > hi {
                return Err(err(key, format!("empty range {lo}..{hi}")));
            }
            return Ok((lo..=hi).collect());
        }
    }
    items(key, v)?.into_iter().map(|s| parse_one(key, s)).collect()
}

impl SweepConfig {
    /// Parses a config; `default_max_terms` applies when `max_terms` is absent.
    pub fn parse(text: &str, default_max_terms: usize) -> Result<Self, ConfigError> {
        let mut identities = None;
        let mut grid = Grid::default();
        let mut have_lambdas = false;
        let mut budget = ToleranceBudget {
            max_terms: default_max_terms,
            ..ToleranceBudget::default()
        };
        let mut output_format = OutputFormat::Json;
        let mut parallelism = std::thread::available_parallelism().map_or(1, |n| n.get());
        let mut seen: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let sep = line.find(['=', ':']).ok_or_else(|| ConfigError {
                key: None,
                message: format!("line {}: expected `key = value`", lineno + 1),
            })?;
            let key = line[..sep].trim();
            let value = line[sep + 1..].trim();
            if !KEYS.contains(&key) {
                return Err(err(key, "unknown key"));
            }
            if seen.iter().any(|k| k == key) {
                return Err(err(key, "given more than once"));
            }
            seen.push(key.to_string());
            if value.is_empty() {
                return Err(err(key, "missing value"));
            }
            match key {
                "identities" => {
                    let ids = items(key, value)?
                        .into_iter()
                        .map(|s| s.parse::<IdentityId>().map_err(|e| err(key, e.to_string())))
                        .collect::<Result<Vec<_>, _>>()?;
                    identities = Some(ids);
                }
                "lambdas" => {
                    grid.lambdas = items(key, value)?
                        .into_iter()
                        .map(|s| parse_one::<f64>(key, s))
                        .collect::<Result<_, _>>()?;
                    have_lambdas = true;
                }
                "p_range" => grid.p = Some(parse_ints(key, value)?),
                "n_range" => grid.n = Some(parse_ints(key, value)?),
                "r_range" => grid.r = Some(parse_ints(key, value)?),
                "m_range" => grid.m = Some(parse_ints(key, value)?),
                "tol" => budget.tol = positive(key, parse_one(key, value)?)?,
                "quad_tol" => budget.quad_tol = positive(key, parse_one(key, value)?)?,
                "max_terms" => budget.max_terms = nonzero(key, parse_one(key, value)?)?,
                "quad_max_panels" => budget.quad_max_panels = nonzero(key, parse_one(key, value)?)?,
                "output_format" => output_format = value.parse().map_err(|e: String| err(key, e))?,
                "parallelism" => parallelism = nonzero(key, parse_one(key, value)?)?,
                _ => unreachable!("key list checked above"),
            }
        }
        let identities = identities.ok_or_else(|| err("identities", "missing key"))?;
        if !have_lambdas {
            return Err(err("lambdas", "missing key"));
        }
        Ok(SweepConfig {
            identities,
            grid,
            budget,
            output_format,
            parallelism,
        })
    }
}

fn positive(key: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(err(key, "must be positive"))
    }
}

fn nonzero(key: &str, v: usize) -> Result<usize, ConfigError> {
    if v > 0 {
        Ok(v)
    } else {
        Err(err(key, "must be positive"))
    }
}
