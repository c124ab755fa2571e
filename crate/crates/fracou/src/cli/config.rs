//! Flat key-value experiment configs.
//!
//! The format is one `key = value` pair per line with dotted section names,
//! `#` comments, and no nesting:
//!
//! ```text
//! noise.type = exact_fgn
//! noise.h = 0.75
//! experiment.gamma = 2.0
//! experiment.n = 4096
//! experiment.m = 4096
//! experiment.reps = 5000
//! experiment.seed = 20070
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::montecarlo::ExperimentConfig;
use crate::noise::{HurstIndex, NoiseSpec};

fn parse_pairs(text: &str) -> Result<BTreeMap<String, (usize, String)>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if map.insert(key.clone(), (lineno + 1, value)).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(map)
}

struct Fields {
    map: BTreeMap<String, (usize, String)>,
}

impl Fields {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, value)) => value.parse::<T>().map(Some).map_err(|_| {
                Error::Config(format!("line {line}: field `{key}`: cannot parse `{value}`"))
            }),
        }
    }

    fn require<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        self.parse(key)?
            .ok_or_else(|| Error::Config(format!("missing required field `{key}`")))
    }

    fn parse_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, value)) => value
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        Error::Config(format!(
                            "line {line}: field `{key}`: cannot parse `{}` as a number",
                            s.trim()
                        ))
                    })
                })
                .collect::<Result<Vec<f64>>>()
                .map(Some),
        }
    }

    fn finish(self) -> Result<()> {
        if let Some((key, (line, _))) = self.map.into_iter().next() {
            return Err(Error::Config(format!(
                "line {line}: field `{key}` is unknown or does not apply to this noise.type"
            )));
        }
        Ok(())
    }
}

fn parse_hurst(fields: &mut Fields) -> Result<HurstIndex> {
    let value: f64 = fields.require("noise.h")?;
    HurstIndex::new(value)
}

/// Parse a config file body into an experiment description. A `seed_override`
/// replaces `experiment.seed` before validation.
pub fn parse_config(text: &str, seed_override: Option<u64>) -> Result<ExperimentConfig> {
    let mut fields = Fields {
        map: parse_pairs(text)?,
    };

    let (type_line, noise_type) = fields
        .take("noise.type")
        .ok_or_else(|| Error::Config("missing required field `noise.type`".into()))?;
    let noise = match noise_type.as_str() {
        "iid_gaussian" | "iid" => NoiseSpec::IidGaussian,
        "linear_filter" | "linear" => NoiseSpec::LinearFilter {
            alpha: fields
                .parse_list("noise.alpha")?
                .ok_or_else(|| Error::Config("missing required field `noise.alpha`".into()))?,
        },
        "frac_integrated" | "frac" => NoiseSpec::FracIntegrated {
            h: parse_hurst(&mut fields)?,
            alpha: fields.parse_list("noise.alpha")?.unwrap_or_else(|| vec![1.0]),
        },
        "arfima" => NoiseSpec::Arfima {
            h: parse_hurst(&mut fields)?,
            phi: fields.parse_list("noise.phi")?.unwrap_or_else(|| vec![1.0]),
            theta: fields.parse_list("noise.theta")?.unwrap_or_else(|| vec![1.0]),
        },
        "exact_fgn" | "fgn" => NoiseSpec::ExactFgn {
            h: parse_hurst(&mut fields)?,
        },
        other => {
            return Err(Error::Config(format!(
                "line {type_line}: field `noise.type`: unknown noise type `{other}` \
                 (expected iid_gaussian, linear_filter, frac_integrated, arfima, exact_fgn)"
            )))
        }
    };

    let gamma: f64 = fields.parse("experiment.gamma")?.unwrap_or(0.0);
    let n: usize = fields.require("experiment.n")?;
    let m: usize = fields.parse("experiment.m")?.unwrap_or(n);
    let reps: usize = fields.parse("experiment.reps")?.unwrap_or(1000);
    let seed: u64 = fields.parse("experiment.seed")?.unwrap_or(0);
    fields.finish()?;

    let seed = seed_override.unwrap_or(seed);
    ExperimentConfig::new(noise, gamma, n, m, reps, seed)
}

pub fn load_config(path: &Path, seed_override: Option<u64>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text, seed_override)
}

/// Canonical single-line-per-field rendering of the effective config; this
/// is the byte string the config hash commits to.
pub fn canonical_string(config: &ExperimentConfig) -> String {
    let mut out = String::new();
    let noise_lines: Vec<String> = match &config.noise {
        NoiseSpec::IidGaussian => vec!["noise.type=iid_gaussian".into()],
        NoiseSpec::LinearFilter { alpha } => vec![
            "noise.type=linear_filter".into(),
            format!("noise.alpha={}", join_floats(alpha)),
        ],
        NoiseSpec::FracIntegrated { h, alpha } => vec![
            "noise.type=frac_integrated".into(),
            format!("noise.h={:?}", h.value()),
            format!("noise.alpha={}", join_floats(alpha)),
        ],
        NoiseSpec::Arfima { h, phi, theta } => vec![
            "noise.type=arfima".into(),
            format!("noise.h={:?}", h.value()),
            format!("noise.phi={}", join_floats(phi)),
            format!("noise.theta={}", join_floats(theta)),
        ],
        NoiseSpec::ExactFgn { h } => vec![
            "noise.type=exact_fgn".into(),
            format!("noise.h={:?}", h.value()),
        ],
    };
    for line in noise_lines {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&format!("experiment.gamma={:?}\n", config.gamma));
    out.push_str(&format!("experiment.n={}\n", config.n));
    out.push_str(&format!("experiment.m={}\n", config.m));
    out.push_str(&format!("experiment.reps={}\n", config.reps));
    out.push_str(&format!("experiment.seed={}\n", config.seed));
    out
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:?}"))
        .collect::<Vec<_>>()
        .join(",")
}
