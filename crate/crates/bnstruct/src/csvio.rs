//! CSV datasets: comma-separated, UTF-8, header row required, an empty cell
//! means missing.

use std::io::{Read, Write};
use std::path::Path;

use bnstruct_core::dataset::Dataset;

use crate::error::{Error, Result};

/// Reads a dataset. Rows with any empty cell are dropped and counted.
pub fn load_csv<R: Read>(reader: R, source_name: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(e, source_name))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::parse(source_name, Some(1), "missing header row"));
    }
    if let Some(i) = header.iter().position(String::is_empty) {
        return Err(Error::parse(
            source_name,
            Some(1),
            format!("column {} has an empty name", i + 1),
        ));
    }
    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(e, source_name))?;
        records.push(rec.iter().map(str::to_string).collect::<Vec<_>>());
    }
    Dataset::from_records(&header, records).map_err(|source| Error::Data {
        source_name: source_name.to_string(),
        source,
    })
}

pub fn load_csv_path(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_csv(std::io::BufReader::new(file), &path.display().to_string())
}

fn csv_error(e: csv::Error, source_name: &str) -> Error {
    let line = e.position().map(|p| p.line());
    let message = match e.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => {
            format!("record has {len} fields, expected {expected_len}")
        }
        _ => e.to_string(),
    };
    Error::parse(source_name, line, message)
}

/// Writes a dataset with level labels, header first.
pub fn write_csv<W: Write>(writer: W, d: &Dataset) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(d.variables().iter().map(|v| v.name()))?;
    let mut record = Vec::with_capacity(d.n_vars());
    for r in 0..d.n_rows() {
        record.clear();
        record.extend(
            (0..d.n_vars()).map(|v| d.variable(v).levels()[d.value(r, v) as usize].as_str()),
        );
        w.write_record(&record)?;
    }
    w.flush()
}
