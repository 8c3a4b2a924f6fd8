//! Deterministic text rendering of tables.

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::value::RawValue;

/// One table entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Bool(bool),
}

/// Formats `x` like C's `%.9e`: ten significant digits and an exponent with
/// an explicit sign and at least two digits.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let s = format!("{x:.9e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

impl Cell {
    pub fn to_text(self) -> String {
        match self {
            Cell::Real(x) => sci(x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Cell::Real(x) if x.is_finite() => {
                let raw = RawValue::from_string(sci(x)).expect("valid JSON number");
                raw.serialize(s)
            }
            Cell::Real(_) => s.serialize_none(),
            Cell::Int(i) => s.serialize_i64(i),
            Cell::Bool(b) => s.serialize_bool(b),
        }
    }
}

/// Named cells serialized as a JSON object in insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Record(pub Vec<(&'static str, Cell)>);

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Comma-separated rows under a header line, LF terminated.
pub fn csv(columns: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|c| c.to_text()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
