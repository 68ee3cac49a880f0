//! CSV and JSON sidecar writers. Column order is part of the output schema.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::Result;
use crate::markov::{Adoption, GradientField, StateSpace};
use crate::params::ModelParams;

/// Bumped whenever a column is added, removed or reordered.
pub const SCHEMA_VERSION: u32 = 1;

/// Floats are written with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvFile {
    path: PathBuf,
    out: BufWriter<fs::File>,
}

impl CsvFile {
    pub fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        let mut out = BufWriter::new(fs::File::create(&path)?);
        writeln!(out, "{}", header.join(","))?;
        Ok(CsvFile { path, out })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        writeln!(self.out, "{}", fields.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.out.flush()?;
        Ok(self.path)
    }
}

pub fn write_distribution(
    dir: &Path,
    name: &str,
    space: &StateSpace,
    probs: &[f64],
) -> Result<PathBuf> {
    let mut csv = CsvFile::create(dir, name, &["i_S", "i_I", "prob"])?;
    for (st, p) in space.states().iter().zip(probs) {
        csv.row(&[st.s.to_string(), st.i.to_string(), fmt_f64(*p)])?;
    }
    csv.finish()
}

pub fn write_summary(dir: &Path, name: &str, adoption: Adoption, residual: f64) -> Result<PathBuf> {
    let mut csv = CsvFile::create(dir, name, &["p_S", "p_I", "p_A", "residual"])?;
    csv.row(&[
        fmt_f64(adoption.s),
        fmt_f64(adoption.i),
        fmt_f64(adoption.a),
        fmt_f64(residual),
    ])?;
    csv.finish()
}

pub fn write_gradient(dir: &Path, name: &str, field: &GradientField) -> Result<PathBuf> {
    let mut csv = CsvFile::create(dir, name, &["i_S", "i_I", "g_I", "g_S"])?;
    for (st, g) in field.space.states().iter().zip(&field.vectors) {
        csv.row(&[
            st.s.to_string(),
            st.i.to_string(),
            fmt_f64(g.g_i),
            fmt_f64(g.g_s),
        ])?;
    }
    csv.finish()
}

/// Base metadata every sidecar carries.
pub fn metadata(command: &str, params: &ModelParams) -> Value {
    json!({
        "tool": "riskdyn",
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
    })
}

pub fn write_json(dir: &Path, name: &str, value: &Value) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value).expect("metadata serializes");
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}
