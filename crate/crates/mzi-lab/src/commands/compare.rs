//! `compare` — tabulate the exact port density against its wide-packet
//! asymptote and the free packet on one grid.
//!
//! The header summarizes the comparison: both peak positions, their
//! offset, the sup distance between the unit-mass normalized exact and
//! asymptotic profiles, the detection probability, and (for advanced
//! peaks) whether the exact density stayed strictly below the free packet
//! ahead of the crossing.

use std::path::Path;

use clap::Args;

use mzi_core::analysis::compare_profiles;
use mzi_core::density::TwoPathConfig;
use mzi_core::wavepacket::GaussianPacket;

use crate::commands::choose_format;
use crate::config::{prefer, resolve_resolution, resolve_v_tau, FileConfig};
use crate::emit::{sci12, write_output, Report};
use crate::error::CliError;
use crate::source::{merge_flags, SourceFlags};

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub source: SourceFlags,
    /// Copy separation v*tau (the natural unit; default 1).
    #[arg(long, allow_hyphen_values = true, value_name = "VTAU")]
    pub v_tau: Option<f64>,
    /// Packet width.
    #[arg(long, allow_hyphen_values = true, value_name = "W")]
    pub width: Option<f64>,
    /// Grid points (>= 256).
    #[arg(long, value_name = "N")]
    pub resolution: Option<usize>,
}

pub fn run(
    args: &CompareArgs,
    file: &FileConfig,
    output: Option<&Path>,
    format: Option<&str>,
) -> Result<(), CliError> {
    choose_format(format, &["csv"])?;
    let resolved = merge_flags(&args.source, file)?;
    let v_tau = resolve_v_tau(args.v_tau, file)?;
    let width =
        prefer(args.width, file.width).ok_or_else(|| CliError::usage("compare needs --width"))?;
    let resolution = resolve_resolution(args.resolution, file)?;

    let (a1, a2) = resolved.bright_pair();
    let packet = GaussianPacket::new(width, 1.0)?;
    let cfg = TwoPathConfig::new(a1, a2, packet, v_tau)?;
    let comparison = compare_profiles(&cfg, resolution)?;

    let mut report = Report::new("compare");
    report.meta_all(&resolved.header);
    report.meta("v_tau", sci12(v_tau));
    report.meta("width", sci12(width));
    report.meta("resolution", resolution.to_string());
    if let Some(warning) = resolved.conservation_warning() {
        report.comment(&warning);
    }
    report.meta("exact_peak", sci12(comparison.exact_peak));
    report.meta("asymptotic_peak", sci12(comparison.asymptotic_peak));
    report.meta("peak_offset", sci12(comparison.peak_offset));
    report.meta("sup_distance", sci12(comparison.sup_distance));
    report.meta("p_detect", sci12(comparison.detection_probability));
    report.meta(
        "front_bound",
        match comparison.front_bound_ok {
            Some(true) => "ok",
            Some(false) => "violated",
            None => "n/a",
        },
    );
    report.line("x,exact,asymptotic,free");
    for i in 0..comparison.positions.len() {
        report.line(format!(
            "{},{},{},{}",
            sci12(comparison.positions[i]),
            sci12(comparison.exact[i]),
            sci12(comparison.asymptotic[i]),
            sci12(comparison.free[i])
        ));
    }
    write_output(output, &report.render())
}
