//! Flat `key = value` configuration with dotted keys.
//!
//! Files are TOML; nested tables are flattened, so `[model] theta = 0.1` and
//! `model.theta = 0.1` are the same key. Command-line `--set key=value`
//! overrides are applied on top.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use netdicke_core::{DegreeDistribution, ModelParams};
use toml::Value;

use crate::error::{Error, Result};

/// Every recognized key.
pub const KNOWN_KEYS: &[&str] = &[
    "model.theta",
    "model.h",
    "model.omega",
    "model.t",
    "model.beta",
    "model.n_nodes",
    "dist.kind",
    "dist.k0",
    "dist.mean_k",
    "dist.gamma",
    "dist.k_min",
    "dist.k_max",
    "sweep.var",
    "sweep.min",
    "sweep.max",
    "sweep.steps",
    "sweep.scale",
    "boundary.kind",
    "boundary.method",
    "boundary.lambda",
    "boundary.photons",
    "boundary.t_lo",
    "boundary.t_hi",
    "quantum.beta",
    "netgen.generator",
    "netgen.n",
    "netgen.k0",
    "netgen.mean_k",
    "netgen.m",
    "netgen.edges_out",
    "oracle.n_spins",
    "oracle.cutoff",
    "oracle.coupling",
    "oracle.degrees",
    "oracle.edges",
    "oracle.bias",
    "output.format",
    "run.workers",
    "run.seed",
    "figure.id",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, Value>,
    /// File and line each key came from, for diagnostics.
    origin: BTreeMap<String, (PathBuf, usize)>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse {
            path: path.to_owned(),
            line: e
                .span()
                .map_or(0, |s| text[..s.start.min(text.len())].lines().count().max(1)),
            reason: e.message().to_owned(),
        })?;
        let mut cfg = Config::default();
        flatten("", &table, &mut cfg.values);
        for key in cfg.values.keys() {
            cfg.origin.insert(key.clone(), (path.to_owned(), line_of(text, key)));
        }
        cfg.check_keys()?;
        Ok(cfg)
    }

    pub fn from_table(table: &toml::Table) -> Result<Self> {
        let mut cfg = Config::default();
        flatten("", table, &mut cfg.values);
        cfg.check_keys()?;
        Ok(cfg)
    }

    fn check_keys(&self) -> Result<()> {
        for key in self.values.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(self.error(key, "unknown key"));
            }
        }
        Ok(())
    }

    /// Apply one `key=value` override; the value is read as a TOML literal and
    /// falls back to a bare string.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("`{assignment}` is not of the form key=value")))?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::field(key, "unknown key"));
        }
        let raw = raw.trim();
        let value = format!("v = {raw}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| Value::String(raw.to_owned()));
        self.insert(key, value);
        Ok(())
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        self.origin.remove(key);
        self.values.insert(key.to_owned(), value);
    }

    /// Store a number, as an integer when it is integral.
    pub fn set_number(&mut self, key: &str, x: f64) {
        let v = if x.fract() == 0.0 && x.abs() < 2f64.powi(53) {
            Value::Integer(x as i64)
        } else {
            Value::Float(x)
        };
        self.insert(key, v);
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.values.iter()
    }

    /// Diagnostic pointing at the line a key was read from, if any.
    pub fn error(&self, key: &str, reason: impl Into<String>) -> Error {
        match self.origin.get(key) {
            Some((path, line)) => Error::Parse {
                path: path.clone(),
                line: *line,
                reason: format!("`{key}`: {}", reason.into()),
            },
            None => Error::field(key, reason),
        }
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(Value::String(s)) if s == "inf" => Ok(Some(f64::INFINITY)),
            Some(other) => Err(self.error(key, format!("expected a number, found {other}"))),
        }
    }

    pub fn require(&self, key: &str) -> Result<f64> {
        self.number(key)?.ok_or_else(|| self.error(key, "missing"))
    }

    pub fn number_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    /// Non-negative integer; floats with no fractional part are accepted so
    /// that integer keys can be swept.
    pub fn count(&self, key: &str) -> Result<Option<u64>> {
        match self.number(key)? {
            None => Ok(None),
            Some(x) if x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(53) => Ok(Some(x as u64)),
            Some(x) => Err(self.error(key, format!("{x} is not a non-negative integer"))),
        }
    }

    pub fn text(&self, key: &str) -> Result<Option<&str>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(self.error(key, format!("expected a string, found {other}"))),
        }
    }

    pub fn numbers(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(i) => Ok(*i as f64),
                    other => Err(self.error(key, format!("expected numbers, found {other}"))),
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(other) => Err(self.error(key, format!("expected an array, found {other}"))),
        }
    }

    pub fn n_nodes(&self) -> Result<u64> {
        Ok(self.count("model.n_nodes")?.unwrap_or(200))
    }

    /// Model parameters; temperature from exactly one of `model.t` and `model.beta`.
    pub fn model(&self) -> Result<ModelParams> {
        let beta = match (self.number("model.t")?, self.number("model.beta")?) {
            (Some(t), None) => {
                if !(t > 0.0) {
                    return Err(self.error("model.t", "temperature must be positive"));
                }
                1.0 / t
            }
            (None, Some(b)) => b,
            (None, None) => return Err(Error::field("model.t", "missing (or give model.beta)")),
            (Some(_), Some(_)) => {
                return Err(self.error("model.beta", "give either model.t or model.beta, not both"))
            }
        };
        let p = ModelParams {
            theta: self.number_or("model.theta", 0.0)?,
            h_field: self.number_or("model.h", 0.0)?,
            omega_a: self.require("model.omega")?,
            beta,
            n_nodes: self.n_nodes()?,
        };
        p.validate()?;
        Ok(p)
    }

    /// Degree distribution. `complete` is a delta at `N - 1`; a power law
    /// without `dist.k_max` uses the natural cutoff `k_min N^(1/(gamma-1))`.
    pub fn distribution(&self) -> Result<DegreeDistribution> {
        let kind = self.text("dist.kind")?.ok_or_else(|| Error::field("dist.kind", "missing"))?;
        let n = self.n_nodes()?;
        let d = match kind {
            "delta" | "regular" => DegreeDistribution::delta(self.require("dist.k0")?)?,
            "complete" => DegreeDistribution::delta(n.saturating_sub(1) as f64)?,
            "poisson" | "random" => DegreeDistribution::poisson(self.require("dist.mean_k")?)?,
            "power_law" | "scale_free" => {
                let gamma = self.require("dist.gamma")?;
                let k_min = self.number_or("dist.k_min", 1.0)?;
                match self.number("dist.k_max")? {
                    Some(k_max) => DegreeDistribution::power_law(gamma, k_min, k_max)?,
                    None => DegreeDistribution::power_law_for_size(gamma, k_min, n)?,
                }
            }
            other => return Err(self.error("dist.kind", format!("unknown distribution `{other}`"))),
        };
        Ok(d)
    }

    pub fn workers(&self) -> Result<usize> {
        Ok(self.count("run.workers")?.unwrap_or(1).max(1) as usize)
    }

    pub fn seed(&self) -> Result<u64> {
        Ok(self.count("run.seed")?.unwrap_or(0))
    }
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

/// Line of the assignment to `key`, either dotted or inside its `[section]`.
fn line_of(text: &str, key: &str) -> usize {
    let (section, leaf) = key.rsplit_once('.').unwrap_or(("", key));
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            current = name.trim().to_owned();
            continue;
        }
        let Some((lhs, _)) = t.split_once('=') else { continue };
        let lhs = lhs.trim().trim_matches('"');
        let full = if current.is_empty() {
            lhs.to_owned()
        } else {
            format!("{current}.{lhs}")
        };
        if full == key || (current == section && lhs == leaf) {
            return i + 1;
        }
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Config> {
        Config::parse(text, Path::new("test.toml"))
    }

    #[test]
    fn dotted_and_sectioned_keys_agree() {
        let a = parse("model.theta = 0.15\nmodel.omega = 0.5\nmodel.t = 0.8\n").unwrap();
        let b = parse("[model]\ntheta = 0.15\nomega = 0.5\nt = 0.8\n").unwrap();
        assert_eq!(a.model().unwrap(), b.model().unwrap());
        assert_eq!(a.model().unwrap().beta, 1.25);
    }

    #[test]
    fn overrides_and_diagnostics() {
        let mut c = parse("model.omega = 0.5\nmodel.t = 1\ndist.kind = \"poisson\"\ndist.mean_k = 4\n").unwrap();
        c.set("model.theta=0.3").unwrap();
        c.set("dist.kind=delta").unwrap();
        c.set("dist.k0=4").unwrap();
        assert_eq!(c.model().unwrap().theta, 0.3);
        assert_eq!(c.distribution().unwrap(), DegreeDistribution::delta(4.0).unwrap());
        assert!(c.set("model.thetta=1").is_err());
        assert!(c.set("no_equals_sign").is_err());

        let err = parse("model.omega = 0.5\nmodel.theta = \"x\"\nmodel.t = 1\n").unwrap().model().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse("model.t = 1\n\n[dist]\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = parse("model.t = = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn temperature_must_be_given_once() {
        let c = parse("model.omega = 0.5\nmodel.t = 1\nmodel.beta = 1\n").unwrap();
        assert!(c.model().is_err());
        let c = parse("model.omega = 0.5\n").unwrap();
        assert!(c.model().is_err());
    }

    #[test]
    fn distributions() {
        let c = parse("dist.kind = \"complete\"\nmodel.n_nodes = 50\n").unwrap();
        assert_eq!(c.distribution().unwrap(), DegreeDistribution::delta(49.0).unwrap());
        let c = parse("dist.kind = \"power_law\"\ndist.gamma = 3\n").unwrap();
        assert_eq!(
            c.distribution().unwrap(),
            DegreeDistribution::power_law_for_size(3.0, 1.0, 200).unwrap()
        );
        assert!(parse("dist.kind = \"lattice\"\n").unwrap().distribution().is_err());
    }
}
