//! Deterministic CSV/JSON emission.
//!
//! Floats in CSV carry 17 significant digits, enough to reproduce the f64
//! bit pattern exactly on re-parse. JSON goes through serde with fixed field
//! order, so identical inputs give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// 17 significant digits: round-trips every finite f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serialize {name}: {e}")))?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| CliError::Io(format!("write {}: {e}", path.display())))?;
    Ok(path)
}

pub struct CsvWriter {
    file: fs::File,
    path: PathBuf,
    columns: usize,
}

impl CsvWriter {
    pub fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self, CliError> {
        ensure_dir(dir)?;
        let path = dir.join(name);
        let mut file = fs::File::create(&path)
            .map_err(|e| CliError::Io(format!("create {}: {e}", path.display())))?;
        writeln!(file, "{}", header.join(","))
            .map_err(|e| CliError::Io(format!("write {}: {e}", path.display())))?;
        Ok(Self { file, path, columns: header.len() })
    }

    /// One row of already-formatted cells.
    pub fn row(&mut self, cells: &[String]) -> Result<(), CliError> {
        debug_assert_eq!(cells.len(), self.columns);
        writeln!(self.file, "{}", cells.join(","))
            .map_err(|e| CliError::Io(format!("write {}: {e}", self.path.display())))
    }

    pub fn row_f64(&mut self, values: &[f64]) -> Result<(), CliError> {
        let cells: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
        self.row(&cells)
    }
}
