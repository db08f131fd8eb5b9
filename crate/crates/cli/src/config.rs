//! Job descriptions: the JSON document plus command-line overrides.

use std::collections::BTreeMap;
use std::fmt;

use matricial::partitions::Admissibility;
use matricial::{Cell, Precision, Shape};
use serde::Deserialize;

/// Largest moment order a job may ask for.
pub const MAX_ORDER: usize = 12;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<matricial::Error> for ConfigError {
    fn from(e: matricial::Error) -> Self {
        ConfigError(e.to_string())
    }
}

impl From<serde_json::Error> for ConfigError {
    fn from(e: serde_json::Error) -> Self {
        ConfigError(format!("invalid config: {e}"))
    }
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// A number written either as a JSON number or as a string such as `"3/4"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Text(String),
    Json(serde_json::Number),
}

impl Number {
    pub fn text(&self) -> String {
        match self {
            Number::Text(s) => s.clone(),
            Number::Json(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Law {
    Semicircle(Number),
    PointMass(Number),
    Cumulants(Vec<Number>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawShape {
    Named(String),
    Custom { custom: Vec<String> },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    pub grid_min: f64,
    pub grid_max: f64,
    pub points: usize,
    pub eps: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    version: u32,
    shape: RawShape,
    distributions: BTreeMap<String, Law>,
    order: Option<usize>,
    engines: Option<Vec<String>>,
    precision: Option<String>,
    checks: Option<Vec<String>>,
    alpha: Option<Number>,
    seed: Option<u64>,
    admissibility: Option<String>,
    density: Option<DensitySpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Engine {
    Partition,
    Fock,
    Analytic,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Partition => "partition",
            Engine::Fock => "fock",
            Engine::Analytic => "analytic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Axioms,
    SumInverse,
    CompressedInverse,
    Uniqueness,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Axioms => "axioms",
            Check::SumInverse => "sum_inverse",
            Check::CompressedInverse => "compressed_inverse",
            Check::Uniqueness => "uniqueness",
        }
    }
}

/// Values given on the command line; each one replaces the config field.
#[derive(Debug, Default)]
pub struct Overrides {
    pub order: Option<usize>,
    pub engines: Option<String>,
    pub precision: Option<String>,
    pub checks: Option<String>,
    pub density_eps: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Job {
    pub shape: Shape,
    pub laws: BTreeMap<Cell, Law>,
    pub order: usize,
    pub engines: Vec<Engine>,
    pub precision: Precision,
    pub checks: Vec<Check>,
    pub alpha: String,
    pub seed: u64,
    /// Labelling rule used by the partition engine.
    pub admissibility: Admissibility,
    pub density: Option<DensitySpec>,
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_engines(names: &[String]) -> Result<Vec<Engine>, ConfigError> {
    let mut out: Vec<Engine> = names
        .iter()
        .map(|n| match n.as_str() {
            "partition" => Ok(Engine::Partition),
            "fock" => Ok(Engine::Fock),
            "analytic" => Ok(Engine::Analytic),
            other => Err(bad(format!("unknown engine `{other}`"))),
        })
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(bad("at least one engine is required"));
    }
    Ok(out)
}

fn parse_checks(names: &[String]) -> Result<Vec<Check>, ConfigError> {
    let mut out: Vec<Check> = names
        .iter()
        .map(|n| match n.as_str() {
            "axioms" => Ok(Check::Axioms),
            "sum_inverse" => Ok(Check::SumInverse),
            "compressed_inverse" => Ok(Check::CompressedInverse),
            "uniqueness" => Ok(Check::Uniqueness),
            other => Err(bad(format!("unknown check `{other}`"))),
        })
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn parse_cell(key: &str) -> Result<Cell, ConfigError> {
    key.parse::<Cell>()
        .map_err(|_| bad(format!("bad cell key `{key}`, expected \"i,j\"")))
}

impl Job {
    pub fn parse(text: &str, overrides: &Overrides) -> Result<Job, ConfigError> {
        let raw: RawConfig = serde_json::from_str(text)?;
        if raw.version != 1 {
            return Err(bad(format!("unsupported config version {}", raw.version)));
        }
        let shape = match raw.shape {
            RawShape::Named(name) => Shape::named(&name)?,
            RawShape::Custom { custom } => {
                let cells = custom
                    .iter()
                    .map(|k| parse_cell(k))
                    .collect::<Result<Vec<_>, _>>()?;
                Shape::new(&cells)?
            }
        };
        let mut laws = BTreeMap::new();
        for (key, law) in raw.distributions {
            let cell = parse_cell(&key)?;
            if !shape.contains(cell) {
                return Err(bad(format!(
                    "cell {cell} has a law but is not in the shape"
                )));
            }
            if laws.insert(cell, law).is_some() {
                return Err(bad(format!("cell {cell} is given twice")));
            }
        }
        if let Some(cell) = shape.cells().find(|c| !laws.contains_key(c)) {
            return Err(bad(format!("cell {cell} is in the shape but has no law")));
        }

        let order = overrides.order.or(raw.order).unwrap_or(6);
        if order == 0 || order > MAX_ORDER {
            return Err(bad(format!(
                "order must be between 1 and {MAX_ORDER}, got {order}"
            )));
        }
        let engines = match (&overrides.engines, raw.engines) {
            (Some(list), _) => parse_engines(&split_list(list))?,
            (None, Some(list)) => parse_engines(&list)?,
            (None, None) => vec![Engine::Partition, Engine::Fock, Engine::Analytic],
        };
        let checks = match (&overrides.checks, raw.checks) {
            (Some(list), _) => parse_checks(&split_list(list))?,
            (None, Some(list)) => parse_checks(&list)?,
            (None, None) => Vec::new(),
        };
        let precision = overrides
            .precision
            .clone()
            .or(raw.precision)
            .map(|p| p.parse::<Precision>())
            .transpose()?
            .unwrap_or(Precision::Rational);
        let mut density = raw.density;
        if let (Some(d), Some(eps)) = (density.as_mut(), overrides.density_eps) {
            d.eps = eps;
        }
        if density.is_some() && precision == Precision::Rational {
            return Err(bad("density needs float precision"));
        }
        let admissibility = match raw.admissibility.as_deref() {
            None | Some("standard") => Admissibility::Standard,
            Some("strict") => Admissibility::StrictNesting,
            Some(other) => return Err(bad(format!("unknown admissibility rule `{other}`"))),
        };
        Ok(Job {
            shape,
            laws,
            order,
            engines,
            precision,
            checks,
            alpha: raw.alpha.map_or_else(|| "1".to_string(), |a| a.text()),
            seed: raw.seed.unwrap_or(0),
            admissibility,
            density,
        })
    }
}
