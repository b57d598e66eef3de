use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

/// JSON lines to a file or stdout.
pub struct Jsonl {
    out: Box<dyn Write>,
}

impl Jsonl {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Jsonl { out })
    }

    pub fn emit<T: Serialize>(&mut self, value: &T) -> Result<(), CliError> {
        writeln!(self.out, "{}", pnfree::certify::report::to_json_line(value)?)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.out.flush()?;
        Ok(())
    }
}

pub fn csv_writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(pnfree::certify::report::CSV_HEADER)?;
    Ok(w)
}
