//! CSV and JSON emission with every float in full-precision scientific notation.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

/// Format used for every float written by the CLI.
pub fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.17e}")
    } else {
        x.to_string()
    }
}

/// serde_json formatter printing floats as `{:.17e}`; non-finite values become `null`.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.17e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser).expect("serialisable report");
    let mut s = String::from_utf8(buf).expect("utf-8 JSON");
    s.push('\n');
    s
}

/// CSV text from a header and rows of floats.
pub fn to_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|&x| sci(x))).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 CSV")
}

/// Write to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text)
        }
        None => io::stdout().write_all(text.as_bytes()),
    }
}
