//! CSV and manifest writers. Numbers are written with 17 significant digits
//! and LF line endings so identical inputs give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::LabError;

/// `{:.16e}`; non-finite values print as `nan`, `inf` or `-inf`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// In-memory CSV table.
#[derive(Clone, Debug)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// Collects files for one run and writes them plus `manifest.txt`.
#[derive(Debug)]
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, LabError> {
        fs::create_dir_all(dir).map_err(|e| LabError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf, LabError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
        self.written.push(name.to_string());
        Ok(path)
    }

    pub fn write_csv(&mut self, name: &str, csv: &Csv) -> Result<PathBuf, LabError> {
        self.write(name, &csv.render())
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }

    /// Writes `manifest.txt`: tool version, subcommand, config echo and the
    /// list of files. Nothing time- or host-dependent goes in.
    pub fn finish(mut self, subcommand: &str, config_echo: &str) -> Result<Vec<String>, LabError> {
        let mut m = String::new();
        let _ = writeln!(m, "tool = revival-lab {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(m, "subcommand = {subcommand}");
        for f in &self.written {
            let _ = writeln!(m, "output = {f}");
        }
        m.push_str("\n[config]\n");
        m.push_str(config_echo);
        self.write("manifest.txt", &m)?;
        Ok(self.written)
    }
}
