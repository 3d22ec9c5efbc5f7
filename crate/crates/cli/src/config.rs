//! JSON run configuration: space and measure blocks plus run defaults.

use std::path::Path;

use ordcdf::{Atom, DensitySegment, MeasureSpec, OrderedSpace, RealRange};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub space: SpaceConfig,
    pub measure: MeasureConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceConfig {
    Finite {
        labels: Vec<String>,
    },
    IntRange {
        lo: i64,
        hi: i64,
    },
    RealInterval(RangeConfig),
    Lex {
        outer: Vec<String>,
        fibers: Vec<RangeConfig>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    #[serde(with = "extended_real")]
    pub lo: f64,
    #[serde(with = "extended_real")]
    pub hi: f64,
    pub include_lo: bool,
    pub include_hi: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    #[serde(default)]
    pub atoms: Vec<AtomConfig>,
    #[serde(default)]
    pub segments: Vec<SegmentConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub at: String,
    pub mass: f64,
}

/// Uniform mass on a real interval; `fiber` names the outer label in lex
/// spaces. Endpoint brackets are accepted but irrelevant to the mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentConfig {
    pub interval: String,
    pub mass: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<String>,
}

/// Reals that may be `"inf"` or `"-inf"` in JSON.
mod extended_real {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        match *v {
            f64::INFINITY => s.serialize_str("inf"),
            f64::NEG_INFINITY => s.serialize_str("-inf"),
            x => s.serialize_f64(x),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Number(x) => Ok(x),
            Raw::Text(t) => match t.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                _ => Err(serde::de::Error::custom(format!("`{t}` is not a number, `inf` or `-inf`"))),
            },
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "config".to_string() } else { path };
            CliError::config(field, e.into_inner().to_string())
        })?;
        cfg.build()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact space and measure blocks.
    pub fn spec_hash(&self) -> String {
        let body = serde_json::json!({ "space": self.space, "measure": self.measure });
        sha256_hex(&body.to_string())
    }

    pub fn build(&self) -> Result<MeasureSpec, CliError> {
        let space = self.space.build()?;
        let atoms = self
            .measure
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let at = space
                    .parse_point(&a.at)
                    .map_err(|e| CliError::config(format!("measure.atoms[{i}].at"), e.to_string()))?;
                Ok(Atom { at, mass: a.mass })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let segments = self
            .measure
            .segments
            .iter()
            .enumerate()
            .map(|(i, s)| self.segment(i, s))
            .collect::<Result<Vec<_>, CliError>>()?;
        MeasureSpec::new(space, atoms, segments).map_err(CliError::from_build)
    }

    fn segment(&self, i: usize, s: &SegmentConfig) -> Result<DensitySegment, CliError> {
        let field = |f: &str| format!("measure.segments[{i}].{f}");
        let (lo, hi) = parse_segment_interval(&s.interval).map_err(|r| CliError::config(field("interval"), r))?;
        let block = match (&self.space, &s.fiber) {
            (SpaceConfig::Lex { outer, .. }, Some(name)) => outer
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| CliError::config(field("fiber"), format!("unknown outer label `{name}`")))?
                as i64,
            (SpaceConfig::Lex { .. }, None) => {
                return Err(CliError::config(field("fiber"), "lex segments need a fiber label"))
            }
            (SpaceConfig::RealInterval(_), None) => 0,
            (SpaceConfig::RealInterval(_), Some(_)) => {
                return Err(CliError::config(field("fiber"), "only lex spaces have fibers"))
            }
            _ => {
                return Err(CliError::config(
                    field("interval"),
                    "density segments need a real interval or lex space",
                ))
            }
        };
        Ok(DensitySegment::in_fiber(block, lo, hi, s.mass))
    }
}

impl SpaceConfig {
    pub fn build(&self) -> Result<OrderedSpace, CliError> {
        let err = |e: ordcdf::Error| CliError::config("space", e.to_string());
        match self {
            SpaceConfig::Finite { labels } => OrderedSpace::finite(labels).map_err(err),
            SpaceConfig::IntRange { lo, hi } => OrderedSpace::int_range(*lo, *hi).map_err(err),
            SpaceConfig::RealInterval(r) => {
                OrderedSpace::real_interval(r.lo, r.hi, r.include_lo, r.include_hi).map_err(err)
            }
            SpaceConfig::Lex { outer, fibers } => {
                let fibers = fibers
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        RealRange::new(r.lo, r.hi, r.include_lo, r.include_hi)
                            .map_err(|e| CliError::config(format!("space.fibers[{i}]"), e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                OrderedSpace::lex(outer, fibers).map_err(err)
            }
        }
    }
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// `[a,b]`, `(a,b)` and the half-open forms; returns the finite endpoints.
fn parse_segment_interval(text: &str) -> Result<(f64, f64), String> {
    let s = text.trim();
    let body = s
        .strip_prefix(['[', '('])
        .and_then(|r| r.strip_suffix([']', ')']))
        .ok_or_else(|| format!("`{s}` is not an interval like `[0,1]`"))?;
    let (a, b) = body
        .split_once(',')
        .ok_or_else(|| format!("`{s}` is not an interval like `[0,1]`"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{}` is not a real number", t.trim()))
    };
    Ok((parse(a)?, parse(b)?))
}
