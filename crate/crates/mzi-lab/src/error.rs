//! Process-level error taxonomy.
//!
//! Every failure surfaces as one of three kinds, each with a fixed exit
//! code so scripts can branch on the outcome:
//!
//! * `Usage` (exit 1) — malformed flags, bad parameter values, unreadable
//!   or inconsistent configuration.
//! * `Domain` (exit 2) — the inputs parsed fine but hit a mathematical
//!   pole: a singular design target, a dark port, a delay-ratio pole.
//! * `Io` (exit 1) — the filesystem refused a read or write.

use std::fmt;

use mzi_core::amplitudes::AmplitudeError;
use mzi_core::analysis::AnalysisError;
use mzi_core::density::DensityError;
use mzi_core::wavepacket::PacketError;

#[derive(Debug)]
pub enum CliError {
    /// The invocation itself is wrong; fix the flags or the config file.
    Usage(String),
    /// The requested computation has no answer at these parameter values.
    Domain(String),
    /// Reading or writing a file failed.
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Domain(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

/// Bad parameter values are usage errors; poles on well-formed targets are
/// domain errors.
impl From<AmplitudeError> for CliError {
    fn from(err: AmplitudeError) -> Self {
        match err {
            AmplitudeError::InvalidShift(_) | AmplitudeError::InvalidPeak(_) => {
                CliError::Usage(err.to_string())
            }
            _ => CliError::Domain(err.to_string()),
        }
    }
}

/// Packet parameters come straight from flags, so rejects are usage errors.
impl From<PacketError> for CliError {
    fn from(err: PacketError) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<DensityError> for CliError {
    fn from(err: DensityError) -> Self {
        match err {
            DensityError::Packet(inner) => CliError::from(inner),
            DensityError::InvalidDelay(_)
            | DensityError::NonFiniteAmplitude
            | DensityError::EmptySuperposition
            | DensityError::BadSamples(_) => CliError::Usage(err.to_string()),
            _ => CliError::Domain(err.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(err: AnalysisError) -> Self {
        match err {
            AnalysisError::Packet(inner) => CliError::from(inner),
            AnalysisError::Density(inner) => CliError::from(inner),
            AnalysisError::InvalidBracket { .. }
            | AnalysisError::InvalidLadder(_)
            | AnalysisError::InvalidScan(_)
            | AnalysisError::InvalidGeometry(_) => CliError::Usage(err.to_string()),
            AnalysisError::DarkBracket | AnalysisError::VanishingMass { .. } => {
                CliError::Domain(err.to_string())
            }
        }
    }
}
