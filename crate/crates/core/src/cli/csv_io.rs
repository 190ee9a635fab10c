//! Time-series CSV: one time step per row, one column per vector component,
//! no header required, lines starting with '#' ignored.

use std::io::{Read, Write};

use crate::error::{Error, Result};

pub fn read_sequence<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("csv row {}: {e}", i + 1)))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let row = rec
            .iter()
            .map(|f| {
                let v: f64 = f
                    .parse()
                    .map_err(|_| Error::Parse(format!("csv row {}: '{f}' is not a number", i + 1)))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFinite(format!("csv row {}", i + 1)))
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_sequence<W: Write>(writer: W, header: &[String], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    let io = |e: csv::Error| Error::Parse(format!("csv write: {e}"));
    if !header.is_empty() {
        let mut cols = header.to_vec();
        cols[0] = format!("# {}", cols[0]);
        w.write_record(&cols).map_err(io)?;
    }
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("csv write: {e}")))?;
    Ok(())
}
