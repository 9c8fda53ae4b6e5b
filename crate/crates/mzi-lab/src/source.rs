//! Amplitude-source resolution.
//!
//! Every command that evaluates densities accepts exactly one of three
//! amplitude sources:
//!
//! * `--amplitudes` — an explicit list of two (one port) or four (both
//!   ports) complex entries;
//! * `--y`/`--z` — the symmetric designer, optionally steered through a
//!   preselection with `--pre`;
//! * `--pre`/`--post1`/`--post2` — a full pre/postselection triple.
//!
//! The resolved set is echoed into the output header so every table
//! records the amplitudes it was computed from.

use clap::Args;

use mzi_core::amplitudes::{
    amplitudes_from_states, design_states, design_symmetric, DesignTarget, PathSet, QubitState,
};
use mzi_core::Complex64;

use crate::config::{merge_source, FileConfig};
use crate::emit::complex12;
use crate::error::CliError;

/// A complex entry: `1.5`, `-2e-3`, `0.5+0.25i`, `1e0-2e0i`, `0.3i`, `-i`.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(CliError::usage("empty complex entry"));
    }
    if !s.ends_with('i') {
        return Ok(Complex64::new(parse_finite(&s)?, 0.0));
    }
    let body = &s[..s.len() - 1];
    // Split at the last sign that is not a leading sign and not part of an
    // exponent; everything after it is the imaginary coefficient.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Ok(Complex64::new(
            parse_finite(&body[..i])?,
            parse_sign_coefficient(&body[i..])?,
        )),
        None => Ok(Complex64::new(0.0, parse_sign_coefficient(body)?)),
    }
}

fn parse_finite(text: &str) -> Result<f64, CliError> {
    let value: f64 = text
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot parse '{text}' as a number")))?;
    if !value.is_finite() {
        return Err(CliError::Usage(format!("'{text}' is not a finite number")));
    }
    Ok(value)
}

/// An imaginary coefficient with its sign; a bare sign (or nothing) means 1.
fn parse_sign_coefficient(text: &str) -> Result<f64, CliError> {
    match text {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        other => parse_finite(other),
    }
}

/// A comma-separated complex list.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(',').map(parse_complex).collect()
}

/// A two-component state `c1,c2`, normalized and phase-fixed.
pub fn parse_state(text: &str, flag: &str) -> Result<QubitState, CliError> {
    let entries = parse_complex_list(text)?;
    if entries.len() != 2 {
        return Err(CliError::Usage(format!(
            "--{flag} needs exactly two comma-separated components, got {}",
            entries.len()
        )));
    }
    QubitState::normalized(entries[0], entries[1])
        .map_err(|err| CliError::Domain(format!("--{flag}: {err}")))
}

/// The merged (flags over config file) amplitude-source fields.
#[derive(Debug, Default, Clone)]
pub struct SourceSpec {
    pub amplitudes: Option<String>,
    pub y: Option<f64>,
    pub z: Option<f64>,
    pub pre: Option<String>,
    pub post1: Option<String>,
    pub post2: Option<String>,
}

/// The amplitude-source flags shared by every evaluating command.
#[derive(Args, Debug, Default, Clone)]
pub struct SourceFlags {
    /// Explicit amplitudes: two or four comma-separated complex entries
    /// (e.g. "1,0,0,0" or "0.6,0.5-0.25i").
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub amplitudes: Option<String>,
    /// Designer pointer shift: position of the delayed copy in units of
    /// v*tau (negative).
    #[arg(long, allow_hyphen_values = true, value_name = "Y")]
    pub y: Option<f64>,
    /// Designer peak target, in units of v*tau.
    #[arg(long, allow_hyphen_values = true, value_name = "Z")]
    pub z: Option<f64>,
    /// Preselection state "c1,c2" (normalized and phase-fixed on read).
    #[arg(long, value_name = "STATE", allow_hyphen_values = true)]
    pub pre: Option<String>,
    /// Bright-port postselection "c1,c2".
    #[arg(long, value_name = "STATE", allow_hyphen_values = true)]
    pub post1: Option<String>,
    /// Complementary-port postselection "c1,c2".
    #[arg(long, value_name = "STATE", allow_hyphen_values = true)]
    pub post2: Option<String>,
}

impl SourceFlags {
    pub fn spec(&self) -> SourceSpec {
        SourceSpec {
            amplitudes: self.amplitudes.clone(),
            y: self.y,
            z: self.z,
            pre: self.pre.clone(),
            post1: self.post1.clone(),
            post2: self.post2.clone(),
        }
    }
}

/// Merges flag and file source fields, then resolves the amplitudes.
pub fn merge_flags(flags: &SourceFlags, file: &FileConfig) -> Result<Resolved, CliError> {
    resolve(&merge_source(&flags.spec(), file))
}

/// Which detector a command reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    D1,
    D2,
}

impl Port {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "d1" => Ok(Port::D1),
            "d2" => Ok(Port::D2),
            other => Err(CliError::Usage(format!(
                "unknown port '{other}' (expected d1 or d2)"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Port::D1 => "d1",
            Port::D2 => "d2",
        }
    }
}

/// A resolved amplitude source: either a full four-amplitude set or a bare
/// bright-port pair.
#[derive(Debug, Clone)]
pub enum ResolvedKind {
    Four(PathSet),
    Two(Complex64, Complex64),
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub kind: ResolvedKind,
    /// `key = value` pairs describing the source, for output headers.
    pub header: Vec<(&'static str, String)>,
}

impl Resolved {
    /// The pair feeding detector 1.
    pub fn bright_pair(&self) -> (Complex64, Complex64) {
        match &self.kind {
            ResolvedKind::Four(set) => set.d1_pair(),
            ResolvedKind::Two(a1, a2) => (*a1, *a2),
        }
    }

    /// The pair feeding the requested detector; `d2` needs four amplitudes.
    pub fn pair_for_port(&self, port: Port) -> Result<(Complex64, Complex64), CliError> {
        match (port, &self.kind) {
            (Port::D1, _) => Ok(self.bright_pair()),
            (Port::D2, ResolvedKind::Four(set)) => Ok(set.d2_pair()),
            (Port::D2, ResolvedKind::Two(..)) => {
                Err(CliError::usage("port d2 needs a four-amplitude source"))
            }
        }
    }

    /// A four-amplitude view: a bare pair is padded with a silent dark port.
    pub fn as_set(&self) -> PathSet {
        match &self.kind {
            ResolvedKind::Four(set) => *set,
            ResolvedKind::Two(a1, a2) => {
                PathSet::new(*a1, *a2, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
            }
        }
    }

    /// Whether the set satisfies both conservation identities; a bare pair
    /// is judged on its amplitude budget alone.
    pub fn conservation_warning(&self) -> Option<String> {
        let report = match &self.kind {
            ResolvedKind::Four(set) => set.conservation(),
            ResolvedKind::Two(a1, a2) => {
                let budget = a1.norm_sqr() + a2.norm_sqr();
                if budget <= 1.0 + mzi_core::amplitudes::CONSERVATION_TOL {
                    return None;
                }
                return Some(format!(
                    "warning: amplitude budget {budget:.3e} exceeds one; probabilities are not normalized"
                ));
            }
        };
        if report.is_conserving(mzi_core::amplitudes::CONSERVATION_TOL) {
            None
        } else {
            Some(format!(
                "warning: amplitude set is not conserving (budget residual {:.3e}, port residual {:.3e})",
                report.budget_residual, report.port_residual
            ))
        }
    }
}

fn set_header(prefix: &mut Vec<(&'static str, String)>, set: &PathSet) {
    prefix.push(("a1", complex12(set.a1)));
    prefix.push(("a2", complex12(set.a2)));
    prefix.push(("a3", complex12(set.a3)));
    prefix.push(("a4", complex12(set.a4)));
}

/// Resolves the merged source fields, enforcing that exactly one source is
/// present.
pub fn resolve(spec: &SourceSpec) -> Result<Resolved, CliError> {
    let explicit = spec.amplitudes.is_some();
    let designer = spec.y.is_some() || spec.z.is_some();
    let states = spec.post1.is_some() || spec.post2.is_some();
    match (explicit, designer, states) {
        (true, false, false) => resolve_explicit(spec.amplitudes.as_deref().unwrap()),
        (false, true, false) => resolve_designer(spec),
        (false, false, true) => resolve_states(spec),
        (false, false, false) => Err(CliError::usage(
            "an amplitude source is required: --amplitudes, --y/--z, or --pre/--post1/--post2",
        )),
        _ => Err(CliError::usage(
            "amplitude sources conflict: give exactly one of --amplitudes, --y/--z, or --pre/--post1/--post2",
        )),
    }
}

fn resolve_explicit(list: &str) -> Result<Resolved, CliError> {
    let entries = parse_complex_list(list)?;
    let mut header: Vec<(&'static str, String)> = vec![("source", "amplitudes".into())];
    let kind = match entries.len() {
        2 => {
            header.push(("a1", complex12(entries[0])));
            header.push(("a2", complex12(entries[1])));
            ResolvedKind::Two(entries[0], entries[1])
        }
        4 => {
            let set = PathSet::new(entries[0], entries[1], entries[2], entries[3]);
            set_header(&mut header, &set);
            ResolvedKind::Four(set)
        }
        n => {
            return Err(CliError::Usage(format!(
                "--amplitudes needs two or four comma-separated entries, got {n}"
            )))
        }
    };
    Ok(Resolved { kind, header })
}

fn resolve_designer(spec: &SourceSpec) -> Result<Resolved, CliError> {
    let (Some(y), Some(z)) = (spec.y, spec.z) else {
        return Err(CliError::usage("the designer needs both --y and --z"));
    };
    let target = DesignTarget::new(y, z)?;
    let mut header: Vec<(&'static str, String)> = vec![
        ("source", "designer".into()),
        ("y", crate::emit::sci12(y)),
        ("z", crate::emit::sci12(z)),
    ];
    let set = match &spec.pre {
        Some(text) => {
            let pre = parse_state(text, "pre")?;
            header.push((
                "pre",
                format!("{},{}", complex12(pre.c1()), complex12(pre.c2())),
            ));
            let (d1, d2) = design_states(&pre, &target)?;
            header.push((
                "post1",
                format!("{},{}", complex12(d1.c1()), complex12(d1.c2())),
            ));
            header.push((
                "post2",
                format!("{},{}", complex12(d2.c1()), complex12(d2.c2())),
            ));
            amplitudes_from_states(&pre, &d1, &d2)?
        }
        None => design_symmetric(&target),
    };
    set_header(&mut header, &set);
    Ok(Resolved {
        kind: ResolvedKind::Four(set),
        header,
    })
}

fn resolve_states(spec: &SourceSpec) -> Result<Resolved, CliError> {
    let (Some(pre), Some(post1), Some(post2)) = (&spec.pre, &spec.post1, &spec.post2) else {
        return Err(CliError::usage(
            "a state source needs all three of --pre, --post1 and --post2",
        ));
    };
    let pre = parse_state(pre, "pre")?;
    let d1 = parse_state(post1, "post1")?;
    let d2 = parse_state(post2, "post2")?;
    let set = amplitudes_from_states(&pre, &d1, &d2)?;
    let mut header: Vec<(&'static str, String)> = vec![
        ("source", "states".into()),
        (
            "pre",
            format!("{},{}", complex12(pre.c1()), complex12(pre.c2())),
        ),
        (
            "post1",
            format!("{},{}", complex12(d1.c1()), complex12(d1.c2())),
        ),
        (
            "post2",
            format!("{},{}", complex12(d2.c1()), complex12(d2.c2())),
        ),
    ];
    set_header(&mut header, &set);
    Ok(Resolved {
        kind: ResolvedKind::Four(set),
        header,
    })
}
