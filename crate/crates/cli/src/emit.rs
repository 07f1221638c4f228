//! Shared output plumbing: file-or-stdout sinks, CSV float formatting, and
//! the format flag used by the data-producing commands.

use crate::Failure;
use clap::ValueEnum;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FileFormat {
    Csv,
    Json,
}

/// 17 significant digits, enough for f64 round trips.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_out(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(path) => std::fs::write(path, content)
            .map_err(|err| Failure::Io(format!("cannot write {}: {err}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

pub fn to_json_pretty<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|err| Failure::Numerical(format!("serialization: {err}")))
}
