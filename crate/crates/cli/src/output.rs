use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::args::Format;

/// A run's output: `#` header lines, then a table.
#[derive(Debug, Default)]
pub struct Document {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Preformatted body that replaces the table in text format.
    pub text_body: Option<String>,
}

impl Document {
    pub fn new(command: &str) -> Self {
        let mut doc = Self::default();
        doc.set("command", command);
        doc.set("version", env!("CARGO_PKG_VERSION"));
        doc
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.header.push((key.to_string(), value.to_string()));
    }

    pub fn columns(&mut self, names: &[&str]) {
        self.columns = names.iter().map(|s| s.to_string()).collect();
    }

    pub fn push_row(&mut self, values: Vec<String>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for (key, value) in &self.header {
            let _ = writeln!(out, "# {key} = {value}");
        }
        match (format, &self.text_body) {
            (Format::Text, Some(body)) => out.push_str(body),
            (Format::Text, None) => {
                for (i, row) in self.rows.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    for (name, value) in self.columns.iter().zip(row) {
                        let _ = writeln!(out, "{name} = {value}");
                    }
                }
            }
            (Format::Csv, _) => {
                let _ = writeln!(out, "{}", self.columns.join(","));
                for row in &self.rows {
                    let _ = writeln!(out, "{}", row.join(","));
                }
            }
        }
        out
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Quotes a CSV field when it contains a separator or quote.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut doc = Document::new("demo");
        doc.columns(&["x", "y"]);
        doc.push_row(vec![num(0.5), num(1.0)]);
        assert_eq!(
            doc.render(Format::Csv),
            format!(
                "# command = demo\n# version = {}\nx,y\n0.5,1.0\n",
                env!("CARGO_PKG_VERSION")
            )
        );
    }

    #[test]
    fn text_layout_uses_records() {
        let mut doc = Document::new("demo");
        doc.columns(&["x"]);
        doc.push_row(vec!["1".into()]);
        doc.push_row(vec!["2".into()]);
        assert!(doc.render(Format::Text).ends_with("x = 1\n\nx = 2\n"));
    }

    #[test]
    fn fields_are_quoted() {
        assert_eq!(field("P11(pi,3pi/2)"), "\"P11(pi,3pi/2)\"");
        assert_eq!(field("N5(pi)"), "N5(pi)");
    }
}
