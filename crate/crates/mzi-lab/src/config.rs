//! Run configuration: flag/file merging and shared invariants.
//!
//! Any long flag can instead be supplied through a flat JSON config file
//! (`--config run.json`). Flags always win over file values; unknown keys
//! in the file are usage errors so typos cannot silently change a run.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;
use crate::source::SourceSpec;

/// Grids finer than this are allowed; coarser ones are rejected because the
/// sup-distance and tail checks lose meaning on sparse samples.
pub const MIN_RESOLUTION: usize = 256;

/// Default grid resolution for tabulated output.
pub const DEFAULT_RESOLUTION: usize = 2001;

/// The flat key set understood in a config file. Every key mirrors the long
/// flag of the same name.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub amplitudes: Option<String>,
    pub y: Option<f64>,
    pub z: Option<f64>,
    pub pre: Option<String>,
    pub post1: Option<String>,
    pub post2: Option<String>,
    pub v_tau: Option<f64>,
    pub width: Option<f64>,
    pub ladder: Option<String>,
    pub ladder_geom: Option<String>,
    pub resolution: Option<usize>,
    pub port: Option<String>,
    pub normalized: Option<bool>,
    pub distance: Option<f64>,
    pub velocity: Option<f64>,
    pub peak_shift: Option<f64>,
    pub tau: Option<f64>,
    pub epsilon_t: Option<f64>,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
    pub omega: Option<f64>,
    pub format: Option<String>,
    pub output: Option<PathBuf>,
    pub full_grid: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path).map_err(|err| {
            CliError::Usage(format!("cannot read config {}: {err}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|err| CliError::Usage(format!("invalid config {}: {err}", path.display())))
    }
}

/// `flag.or(file)` — the precedence rule in one place, named for intent.
pub fn prefer<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Builds the merged amplitude-source spec from per-command flags and the
/// config file.
pub fn merge_source(flags: &SourceSpec, file: &FileConfig) -> SourceSpec {
    // A source given on the command line shadows the file's source entirely;
    // otherwise mixing `--z 0` with a file holding `amplitudes` would create
    // a phantom conflict, and file defaults could leak into an explicit
    // flag-side source.
    let flag_side = flags.amplitudes.is_some()
        || flags.y.is_some()
        || flags.z.is_some()
        || flags.pre.is_some()
        || flags.post1.is_some()
        || flags.post2.is_some();
    if flag_side {
        // Within the flag-side source, individual file keys of the *same*
        // source kind still fill gaps (e.g. file y + flag z).
        let designer = flags.y.is_some() || flags.z.is_some();
        let states = flags.post1.is_some() || flags.post2.is_some();
        SourceSpec {
            amplitudes: flags.amplitudes.clone(),
            y: if designer {
                prefer(flags.y, file.y)
            } else {
                flags.y
            },
            z: if designer {
                prefer(flags.z, file.z)
            } else {
                flags.z
            },
            pre: prefer(flags.pre.clone(), file.pre.clone()),
            post1: if states {
                prefer(flags.post1.clone(), file.post1.clone())
            } else {
                flags.post1.clone()
            },
            post2: if states {
                prefer(flags.post2.clone(), file.post2.clone())
            } else {
                flags.post2.clone()
            },
        }
    } else {
        SourceSpec {
            amplitudes: file.amplitudes.clone(),
            y: file.y,
            z: file.z,
            pre: file.pre.clone(),
            post1: file.post1.clone(),
            post2: file.post2.clone(),
        }
    }
}

/// Validated copy-separation scale (the natural unit is `v tau = 1`).
pub fn resolve_v_tau(flag: Option<f64>, file: &FileConfig) -> Result<f64, CliError> {
    let v_tau = prefer(flag, file.v_tau).unwrap_or(1.0);
    if !v_tau.is_finite() || v_tau <= 0.0 {
        return Err(CliError::usage("--v-tau must be positive and finite"));
    }
    Ok(v_tau)
}

/// Validated grid resolution.
pub fn resolve_resolution(flag: Option<usize>, file: &FileConfig) -> Result<usize, CliError> {
    let resolution = prefer(flag, file.resolution).unwrap_or(DEFAULT_RESOLUTION);
    if resolution < MIN_RESOLUTION {
        return Err(CliError::Usage(format!(
            "--resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    Ok(resolution)
}

/// Parses a width ladder: an explicit comma list or a geometric
/// `start:stop:count` rule. A single rung is allowed.
pub fn resolve_ladder(
    ladder: Option<&str>,
    ladder_geom: Option<&str>,
) -> Result<Vec<f64>, CliError> {
    let rungs =
        match (ladder, ladder_geom) {
            (Some(_), Some(_)) => {
                return Err(CliError::usage(
                    "give either --ladder or --ladder-geom, not both",
                ))
            }
            (None, None) => return Err(CliError::usage(
                "a width ladder is required: --ladder w1,w2,... or --ladder-geom start:stop:count",
            )),
            (Some(list), None) => list
                .split(',')
                .map(|entry| {
                    entry.trim().parse::<f64>().map_err(|_| {
                        CliError::Usage(format!("cannot parse ladder entry '{}'", entry.trim()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
            (None, Some(rule)) => {
                let parts: Vec<&str> = rule.split(':').collect();
                if parts.len() != 3 {
                    return Err(CliError::usage("--ladder-geom expects start:stop:count"));
                }
                let start: f64 = parts[0]
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad ladder start '{}'", parts[0])))?;
                let stop: f64 = parts[1]
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad ladder stop '{}'", parts[1])))?;
                let count: usize = parts[2]
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad ladder count '{}'", parts[2])))?;
                if !(start.is_finite() && stop.is_finite() && start > 0.0) {
                    return Err(CliError::usage("ladder bounds must be positive and finite"));
                }
                if count == 0 {
                    return Err(CliError::usage("ladder count must be at least one"));
                }
                if count == 1 {
                    vec![start]
                } else {
                    if stop <= start {
                        return Err(CliError::usage("ladder stop must exceed start"));
                    }
                    let ratio = stop / start;
                    (0..count)
                        .map(|i| start * ratio.powf(i as f64 / (count - 1) as f64))
                        .collect()
                }
            }
        };
    if rungs.is_empty() {
        return Err(CliError::usage("the width ladder is empty"));
    }
    if rungs.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        return Err(CliError::usage("ladder widths must be positive and finite"));
    }
    if rungs.windows(2).any(|pair| pair[0] >= pair[1]) {
        return Err(CliError::usage("ladder widths must be strictly increasing"));
    }
    Ok(rungs)
}
