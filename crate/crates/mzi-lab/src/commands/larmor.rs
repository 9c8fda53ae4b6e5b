//! `larmor` — read the spin clock carried through the field region.
//!
//! With equal field times on both arms the postselected precession angle
//! is exactly `omega * t`; with unequal times the same amplitude-weighted
//! average that moves the density peak shows up in the clock.

use std::path::Path;

use clap::Args;
use serde::Serialize;

use mzi_core::analysis::{larmor_angle, LarmorConfig};

use crate::commands::choose_format;
use crate::config::{prefer, FileConfig};
use crate::emit::{sci12, write_output, Report};
use crate::error::CliError;
use crate::source::{merge_flags, SourceFlags};

#[derive(Args, Debug)]
pub struct LarmorArgs {
    #[command(flatten)]
    pub source: SourceFlags,
    /// Field time along the undelayed arm.
    #[arg(long, allow_hyphen_values = true, value_name = "T1")]
    pub tau1: Option<f64>,
    /// Field time along the delayed arm.
    #[arg(long, allow_hyphen_values = true, value_name = "T2")]
    pub tau2: Option<f64>,
    /// Precession frequency (nonzero).
    #[arg(long, allow_hyphen_values = true, value_name = "OMEGA")]
    pub omega: Option<f64>,
}

#[derive(Serialize)]
struct LarmorOutput {
    tau1: f64,
    tau2: f64,
    omega: f64,
    phi: f64,
    phi_over_omega: f64,
}

pub fn run(
    args: &LarmorArgs,
    file: &FileConfig,
    output: Option<&Path>,
    format: Option<&str>,
) -> Result<(), CliError> {
    let fmt = choose_format(format, &["text", "json"])?;
    let resolved = merge_flags(&args.source, file)?;
    let tau1 =
        prefer(args.tau1, file.tau1).ok_or_else(|| CliError::usage("larmor needs --tau1"))?;
    let tau2 =
        prefer(args.tau2, file.tau2).ok_or_else(|| CliError::usage("larmor needs --tau2"))?;
    let omega =
        prefer(args.omega, file.omega).ok_or_else(|| CliError::usage("larmor needs --omega"))?;
    if omega == 0.0 {
        return Err(CliError::usage("--omega must be nonzero"));
    }

    let (a1, a2) = resolved.bright_pair();
    let phi = larmor_angle(&LarmorConfig {
        time_undelayed: tau1,
        time_delayed: tau2,
        a1,
        a2,
        omega,
    })?;
    let phi_over_omega = phi / omega;

    let content = if fmt == "json" {
        let mut text = serde_json::to_string_pretty(&LarmorOutput {
            tau1,
            tau2,
            omega,
            phi,
            phi_over_omega,
        })
        .map_err(|err| CliError::Io(err.to_string()))?;
        text.push('\n');
        text
    } else {
        let mut report = Report::new("larmor");
        report.meta_all(&resolved.header);
        report.meta("tau1", sci12(tau1));
        report.meta("tau2", sci12(tau2));
        report.meta("omega", sci12(omega));
        report
            .line(format!("phi = {}", sci12(phi)))
            .line(format!("phi_over_omega = {}", sci12(phi_over_omega)));
        report.render()
    };
    write_output(output, &content)
}
