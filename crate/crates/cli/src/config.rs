//! Flag/file configuration. A config file holds `key = value` lines
//! mirroring the long flags; flags override the file; unknown keys are
//! rejected before anything runs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use hl_core::scalar::{parse_scalar_list, ExtScalar};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<hl_core::ExponentError> for ConfigError {
    fn from(e: hl_core::ExponentError) -> Self {
        ConfigError(e.to_string())
    }
}

const KNOWN_KEYS: &[&str] = &[
    "theorem", "m", "p", "r", "q", "t", "n-list", "trials", "seed", "restarts", "budget",
    "format", "out", "strict", "eps", "tensor",
];

/// Raw string-level settings, before typing.
#[derive(Debug, Default, Clone)]
pub struct RawConfig {
    map: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn from_file(path: &PathBuf) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError(format!(
                    "config line {}: unknown key {key:?}",
                    lineno + 1
                )));
            }
            map.insert(key.to_string(), value.trim().to_string());
        }
        Ok(RawConfig { map })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

impl std::str::FromStr for OutputFormat {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "pretty" => Ok(OutputFormat::Pretty),
            other => Err(ConfigError(format!(
                "format must be json, csv or pretty, got {other:?}"
            ))),
        }
    }
}

/// Fully typed run configuration, after merging flags over the file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub theorem: Option<String>,
    pub m: Option<usize>,
    pub p: Option<Vec<ExtScalar>>,
    pub r: Option<ExtScalar>,
    pub q: Option<ExtScalar>,
    pub t: Option<Vec<ExtScalar>>,
    pub n_list: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub restarts: usize,
    pub budget: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub strict: bool,
    pub eps: Option<Vec<ExtScalar>>,
    pub tensor: Option<PathBuf>,
}

fn merge<'a>(flag: Option<&'a str>, file: Option<&'a str>) -> Option<&'a str> {
    flag.or(file)
}

pub struct RawFlags<'a> {
    pub theorem: Option<&'a str>,
    pub m: Option<&'a str>,
    pub p: Option<&'a str>,
    pub r: Option<&'a str>,
    pub q: Option<&'a str>,
    pub t: Option<&'a str>,
    pub n_list: Option<&'a str>,
    pub trials: Option<&'a str>,
    pub seed: Option<&'a str>,
    pub restarts: Option<&'a str>,
    pub budget: Option<&'a str>,
    pub format: Option<&'a str>,
    pub out: Option<&'a str>,
    pub strict: bool,
    pub eps: Option<&'a str>,
    pub tensor: Option<&'a str>,
}

fn parse_usize(key: &str, s: &str) -> Result<usize, ConfigError> {
    s.parse()
        .map_err(|_| ConfigError(format!("{key}: not a positive integer: {s:?}")))
}

fn parse_u64(key: &str, s: &str) -> Result<u64, ConfigError> {
    s.parse()
        .map_err(|_| ConfigError(format!("{key}: not an integer: {s:?}")))
}

impl RunConfig {
    pub fn build(flags: RawFlags<'_>, file: &RawConfig) -> Result<Self, ConfigError> {
        let theorem = merge(flags.theorem, file.get("theorem")).map(str::to_string);
        let m = merge(flags.m, file.get("m"))
            .map(|s| parse_usize("m", s))
            .transpose()?;
        let p = merge(flags.p, file.get("p"))
            .map(parse_scalar_list)
            .transpose()?;
        let r = merge(flags.r, file.get("r"))
            .map(|s| s.parse::<ExtScalar>())
            .transpose()?;
        let q = merge(flags.q, file.get("q"))
            .map(|s| s.parse::<ExtScalar>())
            .transpose()?;
        let t = merge(flags.t, file.get("t"))
            .map(parse_scalar_list)
            .transpose()?;
        let n_list = merge(flags.n_list, file.get("n-list"))
            .map(|s| {
                s.split(',')
                    .map(|part| parse_usize("n-list", part.trim()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let trials = merge(flags.trials, file.get("trials"))
            .map(|s| parse_usize("trials", s))
            .transpose()?;
        let seed = merge(flags.seed, file.get("seed"))
            .map(|s| parse_u64("seed", s))
            .transpose()?
            .unwrap_or(0);
        let restarts = merge(flags.restarts, file.get("restarts"))
            .map(|s| parse_usize("restarts", s))
            .transpose()?
            .unwrap_or(hl_core::norm::DEFAULT_RESTARTS);
        let budget = merge(flags.budget, file.get("budget"))
            .map(|s| parse_u64("budget", s))
            .transpose()?
            .unwrap_or(hl_core::norm::DEFAULT_BUDGET);
        let format = merge(flags.format, file.get("format"))
            .map(|s| s.parse::<OutputFormat>())
            .transpose()?
            .unwrap_or(OutputFormat::Pretty);
        let out = merge(flags.out, file.get("out")).map(PathBuf::from);
        let strict = flags.strict
            || matches!(file.get("strict"), Some("true") | Some("1") | Some("yes"));
        let eps = merge(flags.eps, file.get("eps"))
            .map(parse_scalar_list)
            .transpose()?;
        let tensor = merge(flags.tensor, file.get("tensor")).map(PathBuf::from);
        Ok(RunConfig {
            theorem,
            m,
            p,
            r,
            q,
            t,
            n_list,
            trials,
            seed,
            restarts,
            budget,
            format,
            out,
            strict,
            eps,
            tensor,
        })
    }

    /// The instance exponents: a single `p` is replicated to length `m`.
    pub fn instance_p(&self) -> Result<Vec<ExtScalar>, ConfigError> {
        let p = self
            .p
            .as_ref()
            .ok_or_else(|| ConfigError("missing -p".into()))?;
        match (p.len(), self.m) {
            (1, Some(m)) => Ok(vec![p[0]; m]),
            (n, Some(m)) if n == m => Ok(p.clone()),
            (n, Some(m)) => Err(ConfigError(format!(
                "-p has {n} entries but -m is {m}"
            ))),
            (_, None) => Ok(p.clone()),
        }
    }
}
