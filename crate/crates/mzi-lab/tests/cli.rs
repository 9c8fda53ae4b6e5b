//! End-to-end tests through the compiled binary: flag parsing, config
//! merging, output formats, exit codes, and determinism.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mzi-lab"));
    // A clean environment: thread-cap tests opt in explicitly.
    cmd.env_remove("MZI_LAB_THREADS");
    cmd
}

struct Run {
    status: i32,
    stdout: String,
    stderr: String,
}

fn run_with(envs: &[(&str, &str)], args: &[&str]) -> Run {
    let mut cmd = bin();
    cmd.args(args);
    for (key, value) in envs {
        cmd.env(key, value);
    }
    let out = cmd.output().expect("failed to spawn mzi-lab");
    Run {
        status: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("stdout is not UTF-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr is not UTF-8"),
    }
}

fn run(args: &[&str]) -> Run {
    run_with(&[], args)
}

fn ok(args: &[&str]) -> String {
    let run = run(args);
    assert_eq!(run.status, 0, "args {args:?} failed: {}", run.stderr);
    run.stdout
}

/// `key = value` lines, both bare and `#`-commented.
fn field(text: &str, key: &str) -> f64 {
    let prefix_bare = format!("{key} = ");
    let prefix_meta = format!("# {key} = ");
    for line in text.lines() {
        let rest = line
            .strip_prefix(&prefix_meta)
            .or_else(|| line.strip_prefix(&prefix_bare));
        if let Some(rest) = rest {
            return rest
                .parse()
                .unwrap_or_else(|_| panic!("unparsable field {key}: {rest}"));
        }
    }
    panic!("field {key} not found in output:\n{text}");
}

fn field_text<'a>(text: &'a str, key: &str) -> &'a str {
    let prefix = format!("# {key} = ");
    text.lines()
        .find_map(|line| line.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("field {key} not found in output:\n{text}"))
}

/// CSV data rows: everything after the (single) column-header line.
fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|line| !line.starts_with('#') && !line.is_empty())
        .skip(1)
        .map(|line| {
            line.split(',')
                .map(|cell| cell.parse().unwrap_or_else(|_| panic!("bad cell '{cell}'")))
                .collect()
        })
        .collect()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("mzi-lab-test-{}-{name}", std::process::id()))
}

// ---------------------------------------------------------------- design

#[test]
fn design_prints_the_reference_amplitudes() {
    let out = ok(&["design", "--y", "-1", "--z", "2"]);
    let a1 = field(&out, "a1");
    let a2 = field(&out, "a2");
    assert!((a1 - 0.5883).abs() < 5e-5, "a1 = {a1}");
    assert!((a2 + 0.3922).abs() < 5e-5, "a2 = {a2}");
    assert_eq!(field(&out, "asymptotic_peak"), 2.0);
    assert!(field(&out, "budget_residual").abs() <= 1e-12);
    assert!(field(&out, "port_residual").abs() <= 1e-12);
}

#[test]
fn design_zero_target_silences_the_delayed_arm() {
    let out = ok(&["design", "--y", "-1", "--z", "0"]);
    assert_eq!(field(&out, "a2"), 0.0);
    assert_eq!(field(&out, "a3"), 0.0);
    assert_eq!(field(&out, "asymptotic_peak"), 0.0);
    let a1 = field(&out, "a1");
    assert!((a1 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-11);
}

#[test]
fn design_singular_target_is_a_domain_error() {
    let run = run(&["design", "--y", "-1", "--z", "-1"]);
    assert_eq!(run.status, 2);
    assert!(run.stderr.contains("singular"), "stderr: {}", run.stderr);
}

#[test]
fn design_usage_errors_exit_one() {
    assert_eq!(run(&["design", "--y", "abc", "--z", "2"]).status, 1);
    assert_eq!(run(&["design", "--y", "-1"]).status, 1);
    assert_eq!(run(&["design", "--y", "0", "--z", "1"]).status, 1);
}

#[test]
fn design_with_preselection_reports_states_and_real_amplitudes() {
    let out = ok(&["design", "--y", "-1", "--z", "1", "--pre", "0.6,0.8"]);
    assert!((field(&out, "a1") - 0.5617975065414267).abs() < 1e-11);
    assert!((field(&out, "a2") + 0.28089875327071334).abs() < 1e-11);
    assert!((field(&out, "a3") + 0.21067406495303498).abs() < 1e-11);
    assert!((field(&out, "a4") + 0.7490633420552356).abs() < 1e-11);
    assert!(out.contains("# post1 = "));
    assert!(out.contains("# post2 = "));
}

#[test]
fn design_json_feeds_amplitudes_back_bit_for_bit() {
    let json = ok(&["design", "--y", "-1", "--z", "2", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&json).expect("design JSON");
    let entry = |key: &str| {
        let pair = parsed[key].as_array().expect("complex pair");
        let re = pair[0].as_f64().unwrap();
        let im = pair[1].as_f64().unwrap();
        if im == 0.0 {
            format!("{re:?}")
        } else if im < 0.0 {
            format!("{re:?}{im:?}i")
        } else {
            format!("{re:?}+{im:?}i")
        }
    };
    let list = format!(
        "{},{},{},{}",
        entry("a1"),
        entry("a2"),
        entry("a3"),
        entry("a4")
    );

    let ladder = ["--ladder", "0.5,2,8"];
    let from_amplitudes = ok(&["scan", "--amplitudes", &list, ladder[0], ladder[1]]);
    let from_designer = ok(&["scan", "--y", "-1", "--z", "2", ladder[0], ladder[1]]);
    let strip = |text: &str| {
        text.lines()
            .filter(|line| !line.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&from_amplitudes), strip(&from_designer));
}

// ------------------------------------------------------------------ scan

#[test]
fn scan_single_path_peaks_at_zero_on_every_row() {
    let out = ok(&["scan", "--amplitudes", "1,0,0,0", "--ladder", "0.5,1,5"]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert!(row[1].abs() < 2e-6, "peak_x = {}", row[1]);
        assert!((row[3] - 1.0).abs() < 1e-12, "p_detect = {}", row[3]);
        assert_eq!(row[4], 0.0, "n_minima");
    }
}

#[test]
fn scan_accepts_a_single_rung_ladder() {
    let out = ok(&["scan", "--y", "-1", "--z", "2", "--ladder", "5"]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 1);
    assert!((rows[0][1] - 1.3521418836656847).abs() < 1e-5);
}

#[test]
fn scan_ladder_walks_from_fringes_to_the_asymptote() {
    let out = ok(&["scan", "--y", "-1", "--z", "2", "--ladder-geom", "0.1:50:6"]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 6);
    // Narrowest rung: fringes — peak pinned to a copy, one node near the
    // midpoint.
    assert!(rows[0][1].abs() < 0.01, "narrow peak at {}", rows[0][1]);
    assert_eq!(rows[0][4], 1.0, "narrow rung node count");
    assert!((rows[0][5] + 0.5).abs() < 0.05, "node at {}", rows[0][5]);
    // Widest rung: single advanced peak within 1% of the target.
    let last = rows.last().unwrap();
    assert!((last[1] - 2.0).abs() < 0.02, "wide peak at {}", last[1]);
    assert_eq!(last[4], 0.0, "wide rung has no interior node");
    // The peak column must march monotonically toward the target.
    for pair in rows.windows(2) {
        assert!(pair[1][1] > pair[0][1], "peaks not increasing: {pair:?}");
    }
}

#[test]
fn scan_rejects_bad_ladders_and_formats() {
    assert_eq!(run(&["scan", "--y", "-1", "--z", "2"]).status, 1);
    assert_eq!(
        run(&["scan", "--y", "-1", "--z", "2", "--ladder", "3,2"]).status,
        1
    );
    assert_eq!(
        run(&["scan", "--y", "-1", "--z", "2", "--ladder", "0"]).status,
        1
    );
    assert_eq!(
        run(&["scan", "--y", "-1", "--z", "2", "--ladder", "1", "--format", "json"]).status,
        1
    );
}

#[test]
fn scan_warns_on_non_conserving_sets() {
    let out = ok(&["scan", "--amplitudes", "0.5,0.5,0.5,0.5", "--ladder", "1"]);
    assert!(out.contains("# warning:"), "missing warning:\n{out}");
    let clean = ok(&["scan", "--amplitudes", "1,0,0,0", "--ladder", "1"]);
    assert!(!clean.contains("# warning:"));
}

#[test]
fn scan_full_grid_tabulates_every_rung() {
    let grid_path = temp_path("full-grid.csv");
    let grid_arg = grid_path.to_str().unwrap();
    ok(&[
        "scan",
        "--y",
        "-1",
        "--z",
        "2",
        "--ladder",
        "1,5",
        "--full-grid",
        grid_arg,
        "--resolution",
        "301",
    ]);
    let grid = std::fs::read_to_string(&grid_path).expect("full-grid file");
    std::fs::remove_file(&grid_path).ok();
    let rows = data_rows(&grid);
    assert_eq!(rows.len(), 2 * 301);
    assert!(rows.iter().all(|row| row.len() == 3));
    assert!(rows.iter().all(|row| row[2] >= 0.0));
    // Both rungs present, with their own windows.
    assert_eq!(rows.iter().filter(|row| row[1] == 1.0).count(), 301);
    assert_eq!(rows.iter().filter(|row| row[1] == 5.0).count(), 301);
}

#[test]
fn scan_output_is_deterministic_and_thread_invariant() {
    let args = ["scan", "--y", "-1", "--z", "2", "--ladder-geom", "0.1:50:6"];
    let first = ok(&args);
    let second = ok(&args);
    assert_eq!(first, second, "reruns must be byte-identical");
    let one = run_with(&[("MZI_LAB_THREADS", "1")], &args);
    let four = run_with(&[("MZI_LAB_THREADS", "4")], &args);
    assert_eq!(one.status, 0);
    assert_eq!(four.status, 0);
    assert_eq!(one.stdout, first);
    assert_eq!(four.stdout, first);
}

#[test]
fn thread_cap_is_validated() {
    let args = ["scan", "--y", "-1", "--z", "2", "--ladder", "1"];
    assert_eq!(run_with(&[("MZI_LAB_THREADS", "abc")], &args).status, 1);
    assert_eq!(run_with(&[("MZI_LAB_THREADS", "0")], &args).status, 1);
}

// --------------------------------------------------------------- compare

#[test]
fn compare_reports_the_advanced_peak_and_front_bound() {
    let out = ok(&["compare", "--y", "-1", "--z", "2", "--width", "5"]);
    assert!((field(&out, "exact_peak") - 1.3521418836656847).abs() < 1e-5);
    assert!((field(&out, "asymptotic_peak") - 2.0).abs() < 1e-12);
    assert!((field(&out, "peak_offset") - 0.6479).abs() < 1e-3);
    assert!((field(&out, "p_detect") - 0.047600612319959046).abs() < 1e-9);
    let sup = field(&out, "sup_distance");
    assert!(sup > 3.0e-2 && sup < 4.0e-2, "sup_distance = {sup}");
    assert_eq!(field_text(&out, "front_bound"), "ok");
    // The bound in the raw rows: ahead of the crossing the exact density
    // stays strictly below the free packet.
    let rows = data_rows(&out);
    assert!(!rows.is_empty());
    for row in rows.iter().filter(|row| row[0] > 0.0) {
        assert!(row[1] < row[3], "exact >= free at x = {}", row[0]);
    }
}

#[test]
fn compare_with_one_arm_reduces_to_the_scaled_free_packet() {
    let out = ok(&["compare", "--amplitudes", "0.6,0", "--width", "3"]);
    assert_eq!(field_text(&out, "front_bound"), "n/a");
    assert!((field(&out, "p_detect") - 0.36).abs() < 1e-12);
    // Both columns carry twelve significant digits, so the quotient is
    // exact only up to their rounding.
    for row in data_rows(&out) {
        let scaled = 0.36 * row[3];
        let tol = 1e-11 * row[3].max(1e-300);
        assert!((row[1] - scaled).abs() <= tol, "row {row:?}");
    }
}

#[test]
fn compare_dark_port_is_a_domain_error() {
    let run = run(&["compare", "--amplitudes", "0.5,-0.5", "--width", "5"]);
    assert_eq!(run.status, 2);
}

#[test]
fn compare_enforces_the_resolution_floor() {
    let run = run(&[
        "compare",
        "--y",
        "-1",
        "--z",
        "2",
        "--width",
        "5",
        "--resolution",
        "128",
    ]);
    assert_eq!(run.status, 1);
}

// --------------------------------------------------------------- density

#[test]
fn density_ports_split_the_unit_mass() {
    let d1 = ok(&[
        "density", "--y", "-1", "--z", "2", "--width", "2", "--port", "d1",
    ]);
    let d2 = ok(&[
        "density", "--y", "-1", "--z", "2", "--width", "2", "--port", "d2",
    ]);
    let total = field(&d1, "mass") + field(&d2, "mass");
    assert!((total - 1.0).abs() < 1e-8, "masses sum to {total}");
}

#[test]
fn density_normalized_rescales_to_unit_mass() {
    let out = ok(&[
        "density",
        "--y",
        "-1",
        "--z",
        "2",
        "--width",
        "2",
        "--normalized",
    ]);
    assert!((field(&out, "mass") - 1.0).abs() < 1e-12);
    // Trapezoid over the emitted rows reproduces the header mass.
    let rows = data_rows(&out);
    let mut integral = 0.0;
    for pair in rows.windows(2) {
        integral += 0.5 * (pair[1][0] - pair[0][0]) * (pair[0][1] + pair[1][1]);
    }
    assert!((integral - 1.0).abs() < 1e-10, "row integral = {integral}");
}

#[test]
fn density_d2_requires_four_amplitudes() {
    assert_eq!(
        run(&[
            "density",
            "--amplitudes",
            "0.6,0.8",
            "--width",
            "2",
            "--port",
            "d2"
        ])
        .status,
        1
    );
    assert_eq!(
        run(&["density", "--y", "-1", "--z", "2", "--width", "2", "--port", "d3"]).status,
        1
    );
}

#[test]
fn density_of_a_canceling_pair_is_small_but_real() {
    // `a1 + a2 = 0` kills the asymptotic peak, not the finite-width port:
    // the copies sit at different positions, so the density survives.
    let out = ok(&["density", "--amplitudes", "0.5,-0.5", "--width", "2"]);
    let expected = 0.5 * (1.0 - (-1.0f64 / 8.0).exp());
    assert!(
        (field(&out, "mass") - expected).abs() < 1e-6,
        "mass vs {expected}"
    );
}

#[test]
fn density_normalizing_a_vanishing_port_is_a_domain_error() {
    // With the copies nearly on top of each other the cancellation is
    // complete and there is no mass left to rescale.
    let run = run(&[
        "density",
        "--amplitudes",
        "0.5,-0.5",
        "--width",
        "2",
        "--v-tau",
        "1e-12",
        "--normalized",
    ]);
    assert_eq!(run.status, 2, "stderr: {}", run.stderr);
}

// ----------------------------------------------------------------- infer

#[test]
fn infer_emits_the_full_inference_record() {
    let out = ok(&[
        "infer",
        "--distance",
        "10",
        "--peak-shift",
        "2",
        "--tau",
        "1",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&out).expect("infer JSON");
    assert_eq!(parsed["distance"].as_f64(), Some(10.0));
    assert_eq!(parsed["velocity"].as_f64(), Some(1.0));
    assert_eq!(parsed["free_transit"].as_f64(), Some(10.0));
    assert_eq!(parsed["time_inside"].as_f64(), Some(8.0));
    assert_eq!(parsed["classification"].as_str(), Some("normal"));
}

#[test]
fn infer_classifies_every_regime() {
    let classify = |shift: &str| {
        let out = ok(&[
            "infer",
            "--distance",
            "10",
            "--peak-shift",
            shift,
            "--tau",
            "1",
        ]);
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        parsed["classification"].as_str().unwrap().to_string()
    };
    assert_eq!(classify("2"), "normal");
    assert_eq!(classify("10"), "zero-crossing");
    assert_eq!(classify("11"), "negative");
    assert_eq!(classify("-1.5"), "abnormal-delay");
}

#[test]
fn infer_rejects_bad_geometry() {
    assert_eq!(
        run(&["infer", "--distance", "-1", "--peak-shift", "1"]).status,
        1
    );
    assert_eq!(run(&["infer", "--distance", "10"]).status, 1);
    assert_eq!(
        run(&[
            "infer",
            "--distance",
            "10",
            "--peak-shift",
            "1",
            "--velocity",
            "0"
        ])
        .status,
        1
    );
}

// ---------------------------------------------------------------- larmor

#[test]
fn larmor_equal_times_read_the_plain_clock() {
    let out = ok(&[
        "larmor", "--y", "-1", "--z", "2", "--tau1", "2.1", "--tau2", "2.1", "--omega", "1",
    ]);
    assert!((field(&out, "phi") - 2.1).abs() < 1e-12);
    assert!((field(&out, "phi_over_omega") - 2.1).abs() < 1e-12);
}

#[test]
fn larmor_delayed_arm_clock_follows_the_peak_weights() {
    let out = ok(&[
        "larmor", "--y", "-1", "--z", "2", "--tau1", "0", "--tau2", "1", "--omega", "2",
    ]);
    assert!((field(&out, "phi") + 4.0).abs() < 1e-12);
    assert!((field(&out, "phi_over_omega") + 2.0).abs() < 1e-12);
}

#[test]
fn larmor_json_carries_the_same_fields() {
    let out = ok(&[
        "larmor", "--y", "-1", "--z", "2", "--tau1", "0", "--tau2", "1", "--omega", "2",
        "--format", "json",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&out).expect("larmor JSON");
    assert_eq!(parsed["phi"].as_f64(), Some(-4.0));
    assert_eq!(parsed["phi_over_omega"].as_f64(), Some(-2.0));
}

#[test]
fn larmor_dark_port_and_zero_omega_are_rejected() {
    assert_eq!(
        run(&[
            "larmor",
            "--amplitudes",
            "0.5,-0.5",
            "--tau1",
            "0",
            "--tau2",
            "1",
            "--omega",
            "2"
        ])
        .status,
        2
    );
    assert_eq!(
        run(&["larmor", "--y", "-1", "--z", "2", "--tau1", "0", "--tau2", "1", "--omega", "0"])
            .status,
        1
    );
}

// ---------------------------------------------------------- configuration

#[test]
fn config_file_fills_gaps_and_flags_win() {
    let path = temp_path("config.json");
    std::fs::write(&path, r#"{"y": -1.0, "z": 2.0, "width": 5.0}"#).unwrap();
    let config = path.to_str().unwrap();

    let from_file = ok(&["design", "--config", config]);
    assert!((field(&from_file, "asymptotic_peak") - 2.0).abs() < 1e-12);

    let overridden = ok(&["design", "--config", config, "--z", "0"]);
    assert_eq!(field(&overridden, "a2"), 0.0);

    std::fs::remove_file(&path).ok();
}

#[test]
fn config_file_unknown_keys_are_usage_errors() {
    let path = temp_path("bad-config.json");
    std::fs::write(&path, r#"{"widht": 5.0}"#).unwrap();
    let run = run(&[
        "design",
        "--config",
        path.to_str().unwrap(),
        "--y",
        "-1",
        "--z",
        "2",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(run.status, 1);
    assert!(run.stderr.contains("widht"), "stderr: {}", run.stderr);
}

#[test]
fn missing_config_file_is_a_usage_error() {
    let run = run(&[
        "design",
        "--config",
        "/nonexistent/config.json",
        "--y",
        "-1",
        "--z",
        "2",
    ]);
    assert_eq!(run.status, 1);
}

#[test]
fn flag_side_source_shadows_the_file_source() {
    let path = temp_path("amp-config.json");
    std::fs::write(&path, r#"{"amplitudes": "1,0,0,0"}"#).unwrap();
    let config = path.to_str().unwrap();
    // The file's explicit amplitudes would conflict with the designer flags
    // if both were considered; the flag-side source must shadow them.
    let out = ok(&[
        "scan", "--config", config, "--y", "-1", "--z", "2", "--ladder", "5",
    ]);
    std::fs::remove_file(&path).ok();
    assert!(out.contains("# source = designer"));
    let rows = data_rows(&out);
    assert!((rows[0][1] - 1.3521418836656847).abs() < 1e-5);
}

#[test]
fn output_flag_redirects_the_table() {
    let path = temp_path("scan-output.csv");
    let stdout = ok(&[
        "scan",
        "--y",
        "-1",
        "--z",
        "2",
        "--ladder",
        "5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(stdout.is_empty(), "stdout should be quiet: {stdout}");
    let written = std::fs::read_to_string(&path).expect("output file");
    std::fs::remove_file(&path).ok();
    assert!(written.contains("delta_x,peak_x"));
}

// ------------------------------------------------------------- top level

#[test]
fn help_and_version_succeed_and_unknown_commands_fail() {
    assert_eq!(run(&["--help"]).status, 0);
    assert_eq!(run(&["--version"]).status, 0);
    assert_eq!(run(&["design", "--help"]).status, 0);
    assert_eq!(run(&["bogus"]).status, 1);
    assert_eq!(run(&[]).status, 1);
    assert_eq!(
        run(&["scan", "--y", "-1", "--z", "2", "--ladder", "1", "--bogus"]).status,
        1
    );
}

#[test]
fn amplitude_source_conflicts_exit_one() {
    assert_eq!(
        run(&[
            "scan",
            "--amplitudes",
            "1,0,0,0",
            "--y",
            "-1",
            "--z",
            "2",
            "--ladder",
            "1"
        ])
        .status,
        1
    );
    assert_eq!(run(&["scan", "--ladder", "1"]).status, 1);
    assert_eq!(
        run(&["scan", "--amplitudes", "1,2,3", "--ladder", "1"]).status,
        1
    );
}
