//! Structured pass/fail reporting and deterministic serialization.
//!
//! Reports must be byte-identical across runs with the same seed, so:
//! no maps (field order is declaration order), no timestamps (wall-clock
//! data goes to a sidecar), and every float printed with 17 significant
//! digits so values round-trip exactly.

use crate::error::Result;
use serde::Serialize;
use std::io::{self, Write};

/// One verified claim: what was measured, the bound it was held to, and
/// whether it passed.
#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub details: String,
}

impl CheckItem {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        CheckItem {
            name: name.into(),
            passed,
            measured: None,
            bound: None,
            details: String::new(),
        }
    }

    pub fn measured(mut self, m: f64) -> Self {
        self.measured = Some(m);
        self
    }

    pub fn bound(mut self, b: f64) -> Self {
        self.bound = Some(b);
        self
    }

    pub fn details(mut self, d: impl Into<String>) -> Self {
        self.details = d.into();
        self
    }
}

/// Aggregated outcome of a batch of checks.
#[derive(Debug, Clone, Serialize, Default)]
pub struct VerificationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<CheckItem>,
}

impl VerificationReport {
    pub fn new(seed: Option<u64>) -> Self {
        VerificationReport { seed, checks: Vec::new() }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.checks.push(item);
    }

    /// Record a measured value against an upper bound.
    pub fn check_le(&mut self, name: impl Into<String>, measured: f64, bound: f64) -> bool {
        let passed = measured <= bound;
        self.push(CheckItem::new(name, passed).measured(measured).bound(bound));
        passed
    }

    /// Record a measured value against a lower bound.
    pub fn check_ge(&mut self, name: impl Into<String>, measured: f64, bound: f64) -> bool {
        let passed = measured >= bound;
        self.push(CheckItem::new(name, passed).measured(measured).bound(bound));
        passed
    }

    pub fn check_bool(&mut self, name: impl Into<String>, passed: bool) -> bool {
        self.push(CheckItem::new(name, passed));
        passed
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

/// Pretty JSON formatter that prints every f64 with 17 significant digits
/// (`{:.16e}`), so serialized reports are reproducible and lossless.
struct SciFormatter {
    indent: usize,
    has_value: bool,
}

impl SciFormatter {
    fn new() -> Self {
        SciFormatter { indent: 0, has_value: false }
    }

    fn newline<W: ?Sized + Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.indent {
            w.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        // {:e} would print "inf"/"NaN", which is not JSON.
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else if value.is_nan() {
            w.write_all(b"null")
        } else if value > 0.0 {
            w.write_all(b"\"inf\"")
        } else {
            w.write_all(b"\"-inf\"")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"[")
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(b"]")
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"{")
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}

/// Serialize any value to deterministic pretty JSON (17-digit floats).
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::with_capacity(1024);
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter::new());
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serializer emits UTF-8"))
}

/// Write CSV with a header row; every cell printed with 17 significant
/// digits. Rows must all have the header's width.
pub fn write_csv<W: Write>(w: &mut W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn csv_string(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows)?;
    Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_json() {
        #[derive(Serialize)]
        struct S {
            x: f64,
            ys: Vec<f64>,
        }
        let s = S { x: 0.1 + 0.2, ys: vec![std::f64::consts::PI, 1.0 / 3.0] };
        let text = to_json_string(&s).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), 0.1 + 0.2);
        assert_eq!(back["ys"][0].as_f64().unwrap(), std::f64::consts::PI);
        assert_eq!(back["ys"][1].as_f64().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn identical_reports_serialize_identically() {
        let mut r1 = VerificationReport::new(Some(42));
        let mut r2 = VerificationReport::new(Some(42));
        for r in [&mut r1, &mut r2] {
            r.check_le("residual", 1.5e-11, 1e-10);
            r.check_ge("lower", 2.0, 1.0);
        }
        assert_eq!(to_json_string(&r1).unwrap(), to_json_string(&r2).unwrap());
        assert!(r1.all_passed());
    }

    #[test]
    fn csv_has_full_precision() {
        let text = csv_string(&["v", "i"], &[vec![1.0, 2.0 / 3.0]]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "v,i");
        let row = lines.next().unwrap();
        let cell = row.split(',').nth(1).unwrap();
        assert_eq!(cell.parse::<f64>().unwrap(), 2.0 / 3.0);
    }
}
