//! Subcommand implementations.

pub mod compare;
pub mod density;
pub mod design;
pub mod infer;
pub mod larmor;
pub mod scan;

use crate::error::CliError;

/// Validates the requested output format against what a command can emit.
/// The first allowed entry is the default.
pub fn choose_format(requested: Option<&str>, allowed: &[&str]) -> Result<String, CliError> {
    match requested {
        None => Ok(allowed[0].to_string()),
        Some(fmt) if allowed.contains(&fmt) => Ok(fmt.to_string()),
        Some(fmt) => Err(CliError::Usage(format!(
            "format '{fmt}' is not supported by this command (expected {})",
            allowed.join(" or ")
        ))),
    }
}

/// Builds the worker pool, honoring the `MZI_LAB_THREADS` cap. Results are
/// collected in input order, so the thread count never changes the output.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("MZI_LAB_THREADS") {
        let count: usize = raw.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "MZI_LAB_THREADS must be a positive integer, got '{raw}'"
            ))
        })?;
        if count == 0 {
            return Err(CliError::usage("MZI_LAB_THREADS must be at least one"));
        }
        builder = builder.num_threads(count);
    }
    builder
        .build()
        .map_err(|err| CliError::Usage(format!("cannot build worker pool: {err}")))
}
