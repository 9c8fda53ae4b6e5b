//! `density` — tabulate one detector's spatial density.
//!
//! Samples the exact density over the scan window, optionally rescaled to
//! unit trapezoid mass. Reading `d2` requires a four-amplitude source. A
//! pair that cancels (`a1 + a2 = 0`) has no asymptotic peak, but its
//! finite-width table is still well-defined; only normalizing a table with
//! vanishing mass is a domain error.

use std::path::Path;

use clap::Args;

use mzi_core::analysis::scan_window;
use mzi_core::density::{DensityProfile, TwoPathConfig};
use mzi_core::wavepacket::GaussianPacket;

use crate::commands::choose_format;
use crate::config::{prefer, resolve_resolution, resolve_v_tau, FileConfig};
use crate::emit::{sci12, write_output, Report};
use crate::error::CliError;
use crate::source::{merge_flags, Port, SourceFlags};

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub source: SourceFlags,
    /// Copy separation v*tau (the natural unit; default 1).
    #[arg(long, allow_hyphen_values = true, value_name = "VTAU")]
    pub v_tau: Option<f64>,
    /// Packet width.
    #[arg(long, allow_hyphen_values = true, value_name = "W")]
    pub width: Option<f64>,
    /// Detector to read: d1 or d2.
    #[arg(long, value_name = "PORT")]
    pub port: Option<String>,
    /// Rescale the table to unit trapezoid mass.
    #[arg(long)]
    pub normalized: bool,
    /// Grid points (>= 256).
    #[arg(long, value_name = "N")]
    pub resolution: Option<usize>,
}

pub fn run(
    args: &DensityArgs,
    file: &FileConfig,
    output: Option<&Path>,
    format: Option<&str>,
) -> Result<(), CliError> {
    choose_format(format, &["csv"])?;
    let resolved = merge_flags(&args.source, file)?;
    let v_tau = resolve_v_tau(args.v_tau, file)?;
    let width =
        prefer(args.width, file.width).ok_or_else(|| CliError::usage("density needs --width"))?;
    let resolution = resolve_resolution(args.resolution, file)?;
    let port = Port::parse(prefer(args.port.as_deref(), file.port.as_deref()).unwrap_or("d1"))?;
    let normalized = args.normalized || file.normalized.unwrap_or(false);

    let (a1, a2) = resolved.pair_for_port(port)?;
    let packet = GaussianPacket::new(width, 1.0)?;
    let cfg = TwoPathConfig::new(a1, a2, packet, v_tau)?;
    // A dark port has no asymptotic peak; its raw density is still a valid
    // (all-zero) table, so fall back to an origin-centered window.
    let shift = cfg.asymptotic_peak().unwrap_or(0.0);
    let (lo, hi) = scan_window(v_tau, shift, width);
    let mut profile = DensityProfile::sample(|x| cfg.density(x), lo, hi, resolution)?;
    if normalized {
        profile = profile.normalized()?;
    }

    let mut report = Report::new("density");
    report.meta_all(&resolved.header);
    report.meta("port", port.as_str());
    report.meta("v_tau", sci12(v_tau));
    report.meta("width", sci12(width));
    report.meta("resolution", resolution.to_string());
    report.meta("normalized", if normalized { "true" } else { "false" });
    report.meta("mass", sci12(profile.mass()));
    if let Some(warning) = resolved.conservation_warning() {
        report.comment(&warning);
    }
    report.line("x,density");
    for (x, value) in profile.positions().iter().zip(profile.values()) {
        report.line(format!("{},{}", sci12(*x), sci12(*value)));
    }
    write_output(output, &report.render())
}
