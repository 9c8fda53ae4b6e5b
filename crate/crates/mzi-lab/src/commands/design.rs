//! `design` — solve for path amplitudes that realize a peak target.
//!
//! Given the delayed-copy position `y` (negative, in units of `v tau`) and
//! the wanted peak position `z`, prints the symmetric two-port amplitude
//! set, its conservation residuals, and the peak the set implies. With
//! `--pre` the designer instead builds the postselection pair for that
//! preselection and reports the resulting (real) amplitudes.

use std::path::Path;

use clap::Args;
use serde::Serialize;

use mzi_core::amplitudes::{
    amplitudes_from_states, design_states, design_symmetric, DesignTarget, QubitState,
};
use mzi_core::density::asymptotic_peak;
use mzi_core::Complex64;

use crate::commands::choose_format;
use crate::config::{prefer, FileConfig};
use crate::emit::{complex12, sci12, write_output, Report};
use crate::error::CliError;
use crate::source::parse_state;

#[derive(Args, Debug)]
pub struct DesignArgs {
    /// Pointer shift: where the delayed copy sits, in units of v*tau
    /// (negative).
    #[arg(long, allow_hyphen_values = true, value_name = "Y")]
    pub y: Option<f64>,
    /// Peak target, in units of v*tau.
    #[arg(long, allow_hyphen_values = true, value_name = "Z")]
    pub z: Option<f64>,
    /// Optional preselection "c1,c2"; the postselection pair is then
    /// designed around it.
    #[arg(long, value_name = "STATE", allow_hyphen_values = true)]
    pub pre: Option<String>,
}

fn clean(v: f64) -> f64 {
    // Strip negative zero: it is numerically inert in every downstream use
    // but would survive the JSON round trip as a cosmetic "-0.0".
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

fn pair(c: Complex64) -> [f64; 2] {
    [clean(c.re), clean(c.im)]
}

fn state_pair(state: &QubitState) -> [[f64; 2]; 2] {
    [pair(state.c1()), pair(state.c2())]
}

/// Full-precision JSON view; feeding `a1..a4` back through `--amplitudes`
/// reproduces the original run bit for bit.
#[derive(Serialize)]
struct DesignOutput {
    y: f64,
    z: f64,
    a1: [f64; 2],
    a2: [f64; 2],
    a3: [f64; 2],
    a4: [f64; 2],
    budget_residual: f64,
    port_residual: f64,
    /// Implied wide-packet peak, in units of v*tau.
    asymptotic_peak: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pre: Option<[[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    post1: Option<[[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    post2: Option<[[f64; 2]; 2]>,
}

pub fn run(
    args: &DesignArgs,
    file: &FileConfig,
    output: Option<&Path>,
    format: Option<&str>,
) -> Result<(), CliError> {
    let fmt = choose_format(format, &["text", "json"])?;
    let y = prefer(args.y, file.y).ok_or_else(|| CliError::usage("design needs --y"))?;
    let z = prefer(args.z, file.z).ok_or_else(|| CliError::usage("design needs --z"))?;
    let pre_text = prefer(args.pre.clone(), file.pre.clone());

    let target = DesignTarget::new(y, z)?;
    let mut states = None;
    let set = match &pre_text {
        Some(text) => {
            let pre = parse_state(text, "pre")?;
            let (d1, d2) = design_states(&pre, &target)?;
            let set = amplitudes_from_states(&pre, &d1, &d2)?;
            states = Some((pre, d1, d2));
            set
        }
        None => design_symmetric(&target),
    };
    let conservation = set.conservation();
    let implied_peak = asymptotic_peak(set.a1, set.a2, 1.0)?;

    let content = if fmt == "json" {
        let out = DesignOutput {
            y,
            z,
            a1: pair(set.a1),
            a2: pair(set.a2),
            a3: pair(set.a3),
            a4: pair(set.a4),
            budget_residual: conservation.budget_residual,
            port_residual: conservation.port_residual,
            asymptotic_peak: clean(implied_peak),
            pre: states.as_ref().map(|(pre, _, _)| state_pair(pre)),
            post1: states.as_ref().map(|(_, d1, _)| state_pair(d1)),
            post2: states.as_ref().map(|(_, _, d2)| state_pair(d2)),
        };
        let mut text =
            serde_json::to_string_pretty(&out).map_err(|err| CliError::Io(err.to_string()))?;
        text.push('\n');
        text
    } else {
        let mut report = Report::new("design");
        report.meta("y", sci12(y)).meta("z", sci12(z));
        if let Some((pre, d1, d2)) = &states {
            report.meta(
                "pre",
                format!("{},{}", complex12(pre.c1()), complex12(pre.c2())),
            );
            report.meta(
                "post1",
                format!("{},{}", complex12(d1.c1()), complex12(d1.c2())),
            );
            report.meta(
                "post2",
                format!("{},{}", complex12(d2.c1()), complex12(d2.c2())),
            );
        }
        report
            .line(format!("a1 = {}", complex12(set.a1)))
            .line(format!("a2 = {}", complex12(set.a2)))
            .line(format!("a3 = {}", complex12(set.a3)))
            .line(format!("a4 = {}", complex12(set.a4)))
            .line(format!(
                "budget_residual = {}",
                sci12(conservation.budget_residual)
            ))
            .line(format!(
                "port_residual = {}",
                sci12(conservation.port_residual)
            ))
            .line(format!("asymptotic_peak = {}", sci12(implied_peak)));
        report.render()
    };
    write_output(output, &content)
}
