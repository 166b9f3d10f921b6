use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};

/// CSV goes to `--out` or stdout; the summary goes wherever the CSV does not.
pub struct Output {
    csv: Box<dyn Write>,
    summary: Box<dyn Write>,
}

impl Output {
    pub fn open(out: Option<&Path>) -> Result<Self> {
        Ok(match out {
            Some(path) => {
                let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
                Self { csv: Box::new(BufWriter::new(file)), summary: Box::new(io::stdout()) }
            }
            None => Self { csv: Box::new(io::stdout().lock()), summary: Box::new(io::stderr()) },
        })
    }

    pub fn row(&mut self, fields: &[String]) -> io::Result<()> {
        writeln!(self.csv, "{}", fields.join(","))
    }

    pub fn header(&mut self, names: &[&str]) -> io::Result<()> {
        writeln!(self.csv, "{}", names.join(","))
    }

    pub fn say(&mut self, line: impl AsRef<str>) -> io::Result<()> {
        writeln!(self.summary, "{}", line.as_ref())
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.csv.flush()?;
        self.summary.flush()
    }
}

/// Full double precision, locale-free.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}
