//! File outputs: pattern CSV, key-value reports, duality records.
//!
//! Floats are written with 17 significant digits so golden files are exact
//! and reruns with the same seed are byte-identical.

use std::fmt::Write as _;

/// `{:.16e}` carries 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pattern CSV with one coordinate column and one column per density.
pub fn pattern_csv(z2: &[f64], columns: &[(&str, &[f64])]) -> String {
    let mut out = String::new();
    out.push_str("z2_m");
    for (name, _) in columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, z) in z2.iter().enumerate() {
        out.push_str(&fmt_f64(*z));
        for (_, col) in columns {
            out.push(',');
            out.push_str(&fmt_f64(col[i]));
        }
        out.push('\n');
    }
    out
}

/// Flat `key = value` report block.
pub struct Report {
    body: String,
}

impl Report {
    pub fn new() -> Self {
        Self { body: String::new() }
    }

    pub fn put(&mut self, key: &str, value: impl ReportValue) -> &mut Self {
        value.write(key, &mut self.body);
        self
    }

    pub fn finish(self) -> String {
        self.body
    }
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}

pub trait ReportValue {
    fn write(&self, key: &str, out: &mut String);
}

impl ReportValue for f64 {
    fn write(&self, key: &str, out: &mut String) {
        let _ = writeln!(out, "{key} = {}", fmt_f64(*self));
    }
}

impl ReportValue for usize {
    fn write(&self, key: &str, out: &mut String) {
        let _ = writeln!(out, "{key} = {self}");
    }
}

impl ReportValue for bool {
    fn write(&self, key: &str, out: &mut String) {
        let _ = writeln!(out, "{key} = {self}");
    }
}

impl ReportValue for &str {
    fn write(&self, key: &str, out: &mut String) {
        let _ = writeln!(out, "{key} = {self}");
    }
}

/// Normalized RMS deviation between two unit-peak columns over the index
/// window where `|z2| <= window`.
pub fn normalized_rms(z2: &[f64], a: &[f64], b: &[f64], window: f64) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for (i, z) in z2.iter().enumerate() {
        if z.abs() <= window {
            let d = a[i] - b[i];
            sum += d * d;
            count += 1;
        }
    }
    if count == 0 {
        f64::NAN
    } else {
        (sum / count as f64).sqrt()
    }
}

/// Rescales a density column to unit peak.
pub fn unit_peak(values: &[f64]) -> Vec<f64> {
    let peak = values.iter().cloned().fold(0.0f64, f64::max);
    if peak > 0.0 {
        values.iter().map(|v| v / peak).collect()
    } else {
        values.to_vec()
    }
}
