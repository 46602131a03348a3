//! CSV and JSON writers. All numeric output uses Rust's shortest
//! round-trip float formatting, so re-running an experiment with the same
//! seed reproduces files byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;
use jacobi::limits::LimitReport;

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::usage(&format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::usage(&format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::numeric(&format!("serialization failed: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}

/// One column with a header row.
pub fn write_column_csv(path: &Path, header: &str, values: &[f64]) -> Result<(), CliError> {
    let mut text = String::with_capacity(values.len() * 20 + header.len() + 2);
    text.push_str(header);
    text.push('\n');
    for v in values {
        let _ = writeln!(text, "{v}");
    }
    write_text(path, &text)
}

pub fn write_limit_csv(path: &Path, report: &LimitReport) -> Result<(), CliError> {
    let mut text = String::from("grid_value,residual\n");
    for (g, r) in report.grid.iter().zip(&report.residuals) {
        let _ = writeln!(text, "{g},{r}");
    }
    write_text(path, &text)
}

pub fn write_pairs_csv(path: &Path, header: &str, rows: &[(f64, f64)]) -> Result<(), CliError> {
    let mut text = String::from(header);
    text.push('\n');
    for (a, b) in rows {
        let _ = writeln!(text, "{a},{b}");
    }
    write_text(path, &text)
}
