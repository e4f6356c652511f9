//! Deterministic artifact writing: CSV with a `#`-prefixed metadata header
//! and a JSON sidecar for Q-function peak reports. Floats are printed with
//! 17 significant digits so the files round-trip exactly.

use nlcs::observables::QPeak;
use nlcs::{Error, Result};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// A CSV cell; integers print without an exponent.
#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Int(i64),
    Num(f64),
}

pub fn fmt_f64(x: f64) -> String {
    // 16 digits after the point in scientific notation = 17 significant digits
    format!("{x:.16e}")
}

pub struct CsvSpec<'a> {
    pub file_stem: &'a str,
    /// Figure caption citation for presets; empty otherwise.
    pub caption: &'a str,
    pub config_echo: Vec<(String, String)>,
    pub columns: &'a [&'a str],
    pub rows: Vec<Vec<Cell>>,
}

pub fn write_csv(dir: &Path, spec: &CsvSpec) -> Result<PathBuf> {
    let mut text = String::new();
    let _ = writeln!(text, "# nlcs v{}", env!("CARGO_PKG_VERSION"));
    if !spec.caption.is_empty() {
        let _ = writeln!(text, "# caption: {}", spec.caption);
    }
    for (k, v) in &spec.config_echo {
        let _ = writeln!(text, "# {k} = {v}");
    }
    let _ = writeln!(text, "{}", spec.columns.join(","));
    for row in &spec.rows {
        debug_assert_eq!(row.len(), spec.columns.len());
        let line: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Num(x) => fmt_f64(*x),
            })
            .collect();
        let _ = writeln!(text, "{}", line.join(","));
    }
    let path = dir.join(format!("{}.csv", spec.file_stem));
    write_file(&path, &text)?;
    Ok(path)
}

/// Peak report: peak positions/heights plus the maximum pairwise separation.
pub fn write_peaks(
    dir: &Path,
    file_stem: &str,
    peaks: &[QPeak],
    separations: &[f64],
) -> Result<PathBuf> {
    let mut text = String::from("{\n  \"peaks\": [\n");
    for (i, p) in peaks.iter().enumerate() {
        let _ = writeln!(
            text,
            "    {{\"re\": {}, \"im\": {}, \"value\": {}}}{}",
            fmt_f64(p.re),
            fmt_f64(p.im),
            fmt_f64(p.value),
            if i + 1 < peaks.len() { "," } else { "" }
        );
    }
    let sep_max = separations.iter().cloned().fold(0.0f64, f64::max);
    let _ = writeln!(text, "  ],");
    let _ = writeln!(text, "  \"count\": {},", peaks.len());
    let _ = writeln!(text, "  \"max_separation\": {}", fmt_f64(sep_max));
    text.push_str("}\n");
    let path = dir.join(format!("{file_stem}_peaks.json"));
    write_file(&path, &text)?;
    Ok(path)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| Error::Usage(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, text).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))
}
