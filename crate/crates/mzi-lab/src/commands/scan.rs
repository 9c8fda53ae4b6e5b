//! `scan` — sweep the bright-port density across a packet-width ladder.
//!
//! One CSV row per width: refined peak position, centroid, detection
//! probability, and the interference nodes the grid resolved. Rungs are
//! independent, so they are evaluated in parallel; results are collected
//! in ladder order and the output is byte-identical for any thread count.

use std::path::Path;

use clap::Args;
use rayon::prelude::*;

use mzi_core::analysis::{scan_record, scan_window, WidthScanRecord};
use mzi_core::density::{asymptotic_peak, TwoPathConfig};
use mzi_core::wavepacket::GaussianPacket;

use crate::commands::{choose_format, thread_pool};
use crate::config::{prefer, resolve_ladder, resolve_resolution, resolve_v_tau, FileConfig};
use crate::emit::{sci12, write_output, Report};
use crate::error::CliError;
use crate::source::{merge_flags, Resolved, SourceFlags};

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: SourceFlags,
    /// Copy separation v*tau (the natural unit; default 1).
    #[arg(long, allow_hyphen_values = true, value_name = "VTAU")]
    pub v_tau: Option<f64>,
    /// Explicit width ladder: comma-separated, strictly increasing.
    #[arg(long, value_name = "LIST")]
    pub ladder: Option<String>,
    /// Geometric width ladder start:stop:count.
    #[arg(long, value_name = "RULE")]
    pub ladder_geom: Option<String>,
    /// Also write the sampled density of every rung (x, delta_x, p) to this
    /// file.
    #[arg(long, value_name = "PATH")]
    pub full_grid: Option<std::path::PathBuf>,
    /// Grid points per rung for --full-grid (>= 256).
    #[arg(long, value_name = "N")]
    pub resolution: Option<usize>,
}

fn scan_row(record: &WidthScanRecord) -> String {
    let mut row = format!(
        "{},{},{},{},{}",
        sci12(record.width),
        sci12(record.peak_x),
        sci12(record.com_x),
        sci12(record.p_detect),
        record.minima_x.len()
    );
    for &x in &record.minima_x {
        row.push(',');
        row.push_str(&sci12(x));
    }
    row
}

pub fn run(
    args: &ScanArgs,
    file: &FileConfig,
    output: Option<&Path>,
    format: Option<&str>,
) -> Result<(), CliError> {
    choose_format(format, &["csv"])?;
    let resolved = merge_flags(&args.source, file)?;
    let v_tau = resolve_v_tau(args.v_tau, file)?;
    let ladder = resolve_ladder(
        prefer(args.ladder.as_deref(), file.ladder.as_deref()),
        prefer(args.ladder_geom.as_deref(), file.ladder_geom.as_deref()),
    )?;
    let full_grid = prefer(args.full_grid.clone(), file.full_grid.clone());

    let set = resolved.as_set();
    let pool = thread_pool()?;
    let records: Vec<WidthScanRecord> = pool.install(|| {
        ladder
            .par_iter()
            .map(|&width| scan_record(&set, v_tau, width))
            .collect::<Result<_, _>>()
    })?;

    let mut report = Report::new("scan");
    report.meta_all(&resolved.header);
    report.meta("v_tau", sci12(v_tau));
    report.meta(
        "ladder",
        ladder
            .iter()
            .map(|&w| sci12(w))
            .collect::<Vec<_>>()
            .join(","),
    );
    if let Some(warning) = resolved.conservation_warning() {
        report.comment(&warning);
    }
    report.line("delta_x,peak_x,com_x,p_detect,n_minima,minima_x");
    for record in &records {
        report.line(scan_row(record));
    }
    write_output(output, &report.render())?;

    if let Some(path) = full_grid {
        let resolution = resolve_resolution(args.resolution, file)?;
        let grid = sample_full_grid(&resolved, v_tau, &ladder, resolution)?;
        write_output(Some(&path), &grid)?;
    }
    Ok(())
}

/// The long-format density table behind the scan: every rung sampled on its
/// own scan window.
fn sample_full_grid(
    resolved: &Resolved,
    v_tau: f64,
    ladder: &[f64],
    resolution: usize,
) -> Result<String, CliError> {
    let (a1, a2) = resolved.bright_pair();
    let mut report = Report::new("scan --full-grid");
    report.meta_all(&resolved.header);
    report.meta("v_tau", sci12(v_tau));
    report.meta("resolution", resolution.to_string());
    report.line("x,delta_x,p");
    for &width in ladder {
        let packet = GaussianPacket::new(width, 1.0)?;
        let cfg = TwoPathConfig::new(a1, a2, packet, v_tau)?;
        // A dark rung would already have failed the scan itself; fall back
        // to an origin-centered window if the asymptote has no peak.
        let shift = asymptotic_peak(a1, a2, v_tau).unwrap_or(0.0);
        let (lo, hi) = scan_window(v_tau, shift, width);
        let step = (hi - lo) / (resolution - 1) as f64;
        for i in 0..resolution {
            let x = lo + step * i as f64;
            report.line(format!(
                "{},{},{}",
                sci12(x),
                sci12(width),
                sci12(cfg.density(x))
            ));
        }
    }
    Ok(report.render())
}
