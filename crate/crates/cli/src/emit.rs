//! CSV and JSON writers.
//!
//! CSV output has a fixed header, comma separators, LF line endings and
//! floats in shortest round-trip form, so identical inputs give identical
//! bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

pub fn fmt_f64(x: f64) -> String {
    ryu::Buffer::new().format(x).to_owned()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csv {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Csv { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn header(&self) -> &[&'static str] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn write_to<W: Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV cells are UTF-8")
    }
}

pub fn write_json<W: Write + ?Sized, T: Serialize>(w: &mut W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    w.write_all(b"\n")
}

/// Runs `body` against the file at `path`, or against `fallback` when no
/// path is given.
pub fn with_output<F>(path: Option<&Path>, fallback: &mut dyn Write, body: F) -> io::Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            body(&mut file)?;
            file.flush()
        }
        None => {
            body(fallback)?;
            fallback.flush()
        }
    }
}
