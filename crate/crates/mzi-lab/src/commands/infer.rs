//! `infer` — read a naive dwell time off an observed peak shift.
//!
//! The free transit through a region of length `L` takes `L / v`; a peak
//! arriving early or late revises that to `L/v - shift/v`, which the
//! classifier buckets as normal, zero-crossing, negative, or longer than
//! any causal path allows.

use std::path::Path;

use clap::Args;
use serde::Serialize;

use mzi_core::analysis::{infer_time_inside, infer_time_inside_with_epsilon, TimeInference};

use crate::commands::choose_format;
use crate::config::{prefer, FileConfig};
use crate::emit::write_output;
use crate::error::CliError;

#[derive(Args, Debug)]
pub struct InferArgs {
    /// Region length L.
    #[arg(long, allow_hyphen_values = true, value_name = "L")]
    pub distance: Option<f64>,
    /// Packet velocity (default 1).
    #[arg(long, allow_hyphen_values = true, value_name = "V")]
    pub velocity: Option<f64>,
    /// Observed peak shift at the exit (positive = advanced).
    #[arg(long, allow_hyphen_values = true, value_name = "X")]
    pub peak_shift: Option<f64>,
    /// Arm delay tau entering the causal bound (default 0).
    #[arg(long, allow_hyphen_values = true, value_name = "TAU")]
    pub tau: Option<f64>,
    /// Half-width of the zero-crossing band (default 1e-12 * L/v).
    #[arg(long, allow_hyphen_values = true, value_name = "EPS")]
    pub epsilon_t: Option<f64>,
}

/// JSON mirror of the inference result.
#[derive(Serialize)]
struct InferOutput {
    distance: f64,
    velocity: f64,
    peak_shift: f64,
    delay: f64,
    free_transit: f64,
    time_inside: f64,
    zero_epsilon: f64,
    classification: &'static str,
}

impl From<&TimeInference> for InferOutput {
    fn from(inference: &TimeInference) -> Self {
        InferOutput {
            distance: inference.distance,
            velocity: inference.velocity,
            peak_shift: inference.peak_shift,
            delay: inference.delay,
            free_transit: inference.free_transit,
            time_inside: inference.time_inside,
            zero_epsilon: inference.zero_epsilon,
            classification: inference.classification.as_str(),
        }
    }
}

pub fn run(
    args: &InferArgs,
    file: &FileConfig,
    output: Option<&Path>,
    format: Option<&str>,
) -> Result<(), CliError> {
    choose_format(format, &["json"])?;
    let distance = prefer(args.distance, file.distance)
        .ok_or_else(|| CliError::usage("infer needs --distance"))?;
    let velocity = prefer(args.velocity, file.velocity).unwrap_or(1.0);
    let peak_shift = prefer(args.peak_shift, file.peak_shift)
        .ok_or_else(|| CliError::usage("infer needs --peak-shift"))?;
    let tau = prefer(args.tau, file.tau).unwrap_or(0.0);
    let epsilon = prefer(args.epsilon_t, file.epsilon_t);

    let inference = match epsilon {
        Some(eps) => infer_time_inside_with_epsilon(distance, velocity, peak_shift, tau, eps)?,
        None => infer_time_inside(distance, velocity, peak_shift, tau)?,
    };
    let mut text = serde_json::to_string_pretty(&InferOutput::from(&inference))
        .map_err(|err| CliError::Io(err.to_string()))?;
    text.push('\n');
    write_output(output, &text)
}
