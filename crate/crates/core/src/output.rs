//! CSV/JSON artifact helpers shared by the experiment harness.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Fixed 17-significant-digit float formatting.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(",")
}

/// Leading `# ` comment lines carrying the seed and canonical config.
pub fn provenance_header(seed: u64, canonical_config: &str) -> String {
    let mut s = format!("# seed = {seed}\n");
    for line in canonical_config.lines() {
        s.push_str("# ");
        s.push_str(line);
        s.push('\n');
    }
    s
}

pub fn write_text(path: &Path, contents: &str) -> io::Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(contents.as_bytes())
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    text.push('\n');
    write_text(path, &text)
}
