//! Rectangular result tables with CSV and JSON writers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bumped whenever columns are added, removed or reordered.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Null,
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        if x.is_finite() {
            Cell::Float(x)
        } else {
            Cell::Null
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Null, Cell::from)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Table {
    pub schema_version: u32,
    /// Free-form provenance (tool version, timestamp, command); never part of
    /// the comparable content.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            meta: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::domain(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Append another table with identical columns.
    pub fn extend(&mut self, other: Table) -> Result<()> {
        if other.columns != self.columns {
            return Err(Error::domain("cannot merge tables with different columns"));
        }
        self.rows.extend(other.rows);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// CSV with a leading schema_version column, LF line endings and quoting
    /// only where needed. With `meta`, one `#` line precedes the header.
    pub fn to_csv(&self, meta: bool) -> Result<String> {
        let mut out = Vec::new();
        if meta && !self.meta.is_empty() {
            let line: Vec<String> = self.meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.extend_from_slice(format!("# {}\n", line.join(" ")).as_bytes());
        }
        {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .quote_style(csv::QuoteStyle::Necessary)
                .from_writer(&mut out);
            let io = |e: csv::Error| Error::domain(format!("csv: {e}"));
            let mut header = vec!["schema_version".to_owned()];
            header.extend(self.columns.iter().cloned());
            w.write_record(&header).map_err(io)?;
            let version = self.schema_version.to_string();
            for row in &self.rows {
                let mut rec = vec![version.clone()];
                rec.extend(row.iter().map(Cell::csv_field));
                w.write_record(&rec).map_err(io)?;
            }
            w.flush().map_err(|e| Error::domain(format!("csv: {e}")))?;
        }
        String::from_utf8(out).map_err(|e| Error::domain(format!("csv: {e}")))
    }

    pub fn to_json(&self, meta: bool) -> Result<String> {
        let stripped;
        let t = if meta {
            self
        } else {
            stripped = Table {
                meta: Vec::new(),
                ..self.clone()
            };
            &stripped
        };
        let mut s = serde_json::to_string_pretty(t).map_err(|e| Error::domain(format!("json: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: Table = serde_json::from_str(s).map_err(|e| Error::domain(format!("json: {e}")))?;
        if t.rows.iter().any(|r| r.len() != t.columns.len()) {
            return Err(Error::domain("json table is not rectangular"));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> Table {
        let mut t = Table::new(["a", "b", "c"]);
        t.push_row(vec![Cell::Int(1), Cell::Float(0.1), "x,y".into()]).unwrap();
        t.push_row(vec![Cell::Null, Cell::Float(-2.5e-300), "say \"hi\"".into()]).unwrap();
        t.meta.push(("tool".into(), "test".into()));
        t
    }

    #[test]
    fn csv_format() {
        let s = sample().to_csv(false).unwrap();
        assert_eq!(
            s,
            "schema_version,a,b,c\n1,1,1e-1,\"x,y\"\n1,,-2.5e-300,\"say \"\"hi\"\"\"\n"
        );
        let m = sample().to_csv(true).unwrap();
        assert!(m.starts_with("# tool=test\nschema_version"));
    }

    #[test]
    fn rejects_ragged_rows() {
        let mut t = Table::new(["a"]);
        assert!(t.push_row(vec![]).is_err());
        assert!(Table::from_json(r#"{"schema_version":1,"columns":["a"],"rows":[[1,2]]}"#).is_err());
    }

    #[test]
    fn nonfinite_becomes_null() {
        assert_eq!(Cell::from(f64::NAN), Cell::Null);
        assert_eq!(Cell::from(None), Cell::Null);
    }

    proptest! {
        #[test]
        fn json_round_trip(xs in proptest::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 1..20),
                           ints in proptest::collection::vec(any::<i64>(), 1..20)) {
            let mut t = Table::new(["x", "i", "s"]);
            for (k, x) in xs.iter().enumerate() {
                let i = ints[k % ints.len()];
                t.push_row(vec![Cell::Float(*x), Cell::Int(i), Cell::Text(format!("r{k}"))]).unwrap();
            }
            let back = Table::from_json(&t.to_json(true).unwrap()).unwrap();
            prop_assert_eq!(&back, &t);
            for (a, b) in back.rows.iter().zip(&t.rows) {
                if let (Cell::Float(p), Cell::Float(q)) = (&a[0], &b[0]) {
                    prop_assert_eq!(p.to_bits(), q.to_bits());
                }
            }
        }
    }
}
