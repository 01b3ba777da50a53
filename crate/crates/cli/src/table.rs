use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::CliError;

pub const SCHEMA: &str = "rcd-table/1";

/// A CSV table preceded by `# key value` metadata lines.
#[derive(Debug, Default)]
pub struct Table {
    meta: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(command: &str) -> Self {
        let mut t = Self::default();
        t.meta("schema", SCHEMA);
        t.meta("tool", concat!("rcd ", env!("CARGO_PKG_VERSION")));
        t.meta("command", command);
        t
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_owned(), value.to_string()));
    }

    pub fn columns(&mut self, names: &[&str]) {
        self.header = names.iter().map(|s| s.to_string()).collect();
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, sink: impl Write) -> io::Result<()> {
        let mut sink = io::BufWriter::new(sink);
        for (k, v) in &self.meta {
            writeln!(sink, "# {k} {v}")?;
        }
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }

    pub fn emit(&self, path: Option<&Path>) -> Result<(), CliError> {
        let res = match path {
            Some(p) => File::create(p).and_then(|f| self.write_to(f)),
            None => self.write_to(io::stdout().lock()),
        };
        res.map_err(|e| CliError::Runtime(format!("writing output: {e}")))
    }
}

/// Shortest representation that round-trips, in exponent form for very
/// small or very large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.14), "0.14");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(1.5e-15), "1.5e-15");
        assert_eq!(num(2.0), "2");
    }

    #[test]
    fn metadata_precedes_header() {
        let mut t = Table::new("x");
        t.meta("seed", 3);
        t.columns(&["a", "b"]);
        t.push(vec!["1".into(), "two, quoted".into()]);
        let mut out = Vec::new();
        t.write_to(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with(&format!("# schema {SCHEMA}\n")));
        assert!(text.ends_with("# seed 3\na,b\n1,\"two, quoted\"\n"));
    }
}
