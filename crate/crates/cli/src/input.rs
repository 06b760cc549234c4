use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Reads one vector per line. Blank lines and `#` comments are skipped;
/// values may be separated by commas and/or whitespace.
pub fn read_vectors(path: &Path) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
    } else {
        text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    parse_vectors(&text)
}

pub fn parse_vectors(text: &str) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut rows = Vec::new();
    let mut dim = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let values = line
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<f64>()
                    .with_context(|| format!("line {lineno}: cannot parse `{tok}` as a number"))
            })
            .collect::<Result<Vec<f64>>>()?;
        match dim {
            None => dim = Some(values.len()),
            Some(d) if d != values.len() => {
                bail!("line {lineno}: expected {d} values, found {}", values.len())
            }
            _ => {}
        }
        rows.push((lineno, values));
    }
    Ok(rows)
}
