//! Output formatting shared by every subcommand.
//!
//! Text and CSV output print numbers in scientific notation with twelve
//! significant digits, `.` as the decimal separator and `,` between CSV
//! fields. JSON output keeps full `f64` precision (serde_json emits the
//! shortest digit string that round-trips), which is what makes the
//! design-then-rescan loop reproduce byte-identical tables.
//!
//! Every table opens with `#`-prefixed comment lines carrying the fully
//! resolved configuration, so a result file is self-describing.

use std::fs;
use std::path::Path;

use mzi_core::Complex64;

use crate::error::CliError;

/// Twelve significant digits: one leading digit plus eleven decimals.
/// Negative zero renders as plain zero; the sign is numerically inert in
/// every quantity printed here.
pub fn sci12(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    format!("{value:.11e}")
}

/// Complex values render as `re` when purely real, else `re+imi` / `re-imi`.
/// The same shape is accepted back by the `--amplitudes` parser.
pub fn complex12(value: Complex64) -> String {
    if value.im == 0.0 {
        sci12(value.re)
    } else if value.im < 0.0 {
        format!("{}-{}i", sci12(value.re), sci12(-value.im))
    } else {
        format!("{}+{}i", sci12(value.re), sci12(value.im))
    }
}

/// A report accumulates `#` header comments and data lines, then renders to
/// a single string so the output is written in one deterministic chunk.
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            lines: vec![format!("# mzi-lab {command}")],
        }
    }

    /// One `# key = value` configuration comment.
    pub fn meta(&mut self, key: &str, value: impl AsRef<str>) -> &mut Self {
        self.lines.push(format!("# {key} = {}", value.as_ref()));
        self
    }

    pub fn meta_all(&mut self, pairs: &[(&str, String)]) -> &mut Self {
        for (key, value) in pairs {
            self.meta(key, value);
        }
        self
    }

    /// A bare comment line (warnings, section markers).
    pub fn comment(&mut self, text: &str) -> &mut Self {
        self.lines.push(format!("# {text}"));
        self
    }

    /// A data line: a CSV row or a `key = value` result line.
    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

/// Write to the requested path, or stdout when no path was given. A reader
/// that closes the pipe early (`| head`) ends the run quietly.
pub fn write_output(target: Option<&Path>, content: &str) -> Result<(), CliError> {
    match target {
        Some(path) => fs::write(path, content)
            .map_err(|err| CliError::Io(format!("cannot write {}: {err}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Ok(()) => Ok(()),
                Err(err) if err.kind() == std::io::ErrorKind::BrokenPipe => {
                    std::process::exit(0);
                }
                Err(err) => Err(CliError::Io(err.to_string())),
            }
        }
    }
}
