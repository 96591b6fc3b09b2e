//! Decimal text output: CSV tables, number formatting and run manifests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{ExtremalRow, FitResult};
use crate::error::Result;
use crate::spectral::FactorPoint;

/// Formats like C's `%.15g`: 15 significant digits, trailing zeros dropped,
/// scientific notation outside `1e-5 <= |x| < 1e15`.
pub fn fmt_g15(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // the exponent after rounding to 15 digits decides the style
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..15).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Fixed 12-decimal display with trailing zeros trimmed to one decimal:
/// `4/3 -> "1.333333333333"`, `2 -> "2.0"`.
pub fn fmt_display12(x: f64) -> String {
    let s = format!("{:.12}", x);
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

fn fit_footer(fit: Option<&FitResult>) -> String {
    match fit {
        Some(f) => format!("# fit {}\n", serde_json::to_string(f).expect("fit serializes")),
        None => "# fit null\n".into(),
    }
}

pub fn extremal_csv(rows: &[ExtremalRow], fit: Option<&FitResult>) -> String {
    let mut out = String::from("index,degree,cusp_derivative,norm,ratio,ratio_over_expected\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.index,
            r.degree,
            fmt_g15(r.cusp_derivative),
            fmt_g15(r.norm),
            fmt_g15(r.ratio),
            fmt_g15(r.ratio_over_expected())
        );
    }
    out + &fit_footer(fit)
}

pub fn factor_csv(points: &[FactorPoint], fit: Option<&FitResult>) -> String {
    let mut out = String::from("n,value,method\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.n, fmt_g15(p.value), p.method);
    }
    out + &fit_footer(fit)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Provenance record written next to every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub timestamp_unix: u64,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub config: serde_json::Value,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: BTreeMap<String, String>, config: serde_json::Value) -> Self {
        let timestamp_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix,
            command: command.to_string(),
            parameters,
            config,
            outputs: Vec::new(),
        }
    }

    /// Path of the manifest that accompanies `output`.
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    /// Writes `contents` to `path` and records its digest.
    pub fn write_output(&mut self, path: &Path, contents: &[u8]) -> Result<()> {
        std::fs::write(path, contents)?;
        self.outputs.push(OutputDigest { path: path.to_path_buf(), sha256: sha256_hex(contents) });
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g15_matches_printf() {
        let cases = [
            (0.25, "0.25"),
            (1.0 / 3.0, "0.333333333333333"),
            (4.0 / 3.0, "1.33333333333333"),
            (1234.5, "1234.5"),
            (1e15, "1e+15"),
            (123456789012345.0, "123456789012345"),
            (1.5e-7, "1.5e-07"),
            (0.0001, "0.0001"),
            (-2.0, "-2"),
            (1e15, "1e+15"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g15(x), want, "{x}");
        }
    }

    #[test]
    fn display12() {
        assert_eq!(fmt_display12(4.0 / 3.0), "1.333333333333");
        assert_eq!(fmt_display12(2.0), "2.0");
    }

    #[test]
    fn manifest_path() {
        assert_eq!(RunManifest::path_for(Path::new("out/a.csv")), PathBuf::from("out/a.csv.manifest.json"));
    }
}
