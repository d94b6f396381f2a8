//! Tabular report with self-describing metadata, written as CSV or JSON.

use std::io::{self, Write};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use cvbell::tolerances::Tolerances;

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    /// No value (e.g. coefficients of a state that does not exist).
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// 17 significant digits: always enough to recover the exact double.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

impl Cell {
    fn to_csv_field(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) if v.is_finite() => RawValue::from_string(format_number(*v))
                .map_err(serde::ser::Error::custom)?
                .serialize(s),
            Cell::Num(_) | Cell::Empty => s.serialize_none(),
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Bool(v) => s.serialize_bool(*v),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Ordered key/value metadata; serialized as a JSON object in insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Meta(Vec<(String, Cell)>);

impl Meta {
    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.0.push((key.into(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn entries(&self) -> &[(String, Cell)] {
        &self.0
    }
}

impl Serialize for Meta {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRecord {
    pub meta: Meta,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ReportRecord {
    /// Starts a report for `command`, stamping the tool version and the
    /// tolerance set.
    pub fn new(command: &str, columns: &[&str]) -> Self {
        let mut meta = Meta::default();
        meta.push("command", command);
        meta.push("version", env!("CARGO_PKG_VERSION"));
        for (name, value) in Tolerances::DEFAULT.entries() {
            meta.push(format!("tolerance.{name}"), value);
        }
        Self {
            meta,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.meta.push(format!("param.{key}"), value);
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.meta.push(format!("result.{key}"), value);
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// `# key=value` lines, then a header row and the data rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (k, v) in self.meta.entries() {
            writeln!(out, "# {k}={}", v.to_csv_field())?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv_field))?;
        }
        w.flush()
    }

    /// `{"meta": {...}, "columns": [...], "rows": [[...], ...]}`
    pub fn write_json<W: Write>(&self, mut out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReportRecord {
        let mut r = ReportRecord::new("demo", &["x", "label", "ok", "n", "missing"]);
        r.param("r", 1.5);
        r.push_row(vec![0.1.into(), "a,b".into(), true.into(), 3usize.into(), Cell::Empty]);
        r.push_row(vec![(-1e-300).into(), "plain".into(), false.into(), 0usize.into(), Cell::Empty]);
        r
    }

    #[test]
    fn numbers_round_trip_exactly() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, f64::MIN_POSITIVE, 2.187_452_904] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# command=demo");
        assert!(lines.contains(&"# param.r=1.5000000000000000e0"));
        let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
        assert_eq!(lines[header], "x,label,ok,n,missing");
        assert_eq!(lines[header + 1], "1.0000000000000001e-1,\"a,b\",true,3,");
    }

    #[test]
    fn json_layout() {
        let mut buf = Vec::new();
        sample().write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["meta"]["command"], "demo");
        assert_eq!(v["columns"][1], "label");
        assert_eq!(v["rows"][0][0].as_f64().unwrap(), 0.1);
        assert_eq!(v["rows"][1][0].as_f64().unwrap(), -1e-300);
        assert!(v["rows"][0][4].is_null());
        let keys: Vec<_> = v["meta"].as_object().unwrap().keys().cloned().collect();
        assert!(keys.contains(&"tolerance.purity".to_string()));
    }

    #[test]
    fn non_finite_numbers() {
        assert_eq!(format_number(f64::NAN), "NaN");
        assert_eq!(format_number(f64::NEG_INFINITY), "-inf");
        let mut r = ReportRecord::new("demo", &["x"]);
        r.push_row(vec![f64::INFINITY.into()]);
        let mut buf = Vec::new();
        r.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert!(v["rows"][0][0].is_null());
    }
}
