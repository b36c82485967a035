//! CSV ingestion of claim amounts.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sample::Sample;

/// How to treat the first row of the file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Header {
    /// Skip the first row if its selected field does not parse as a number.
    #[default]
    Auto,
    Present,
    Absent,
}

/// Reads one column of decimal values. Blank lines are skipped; any other
/// row whose field fails to parse is reported with its 1-based line number.
pub fn read_values<R: Read>(reader: R, column: usize, header: Header) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(idx + 1, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(idx + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let field = record.get(column).ok_or_else(|| Error::Parse {
            line,
            message: format!("missing column {column}"),
        })?;
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            Ok(v) => {
                return Err(Error::Parse { line, message: format!("non-finite value {v}") });
            }
            Err(_) => {
                let first = idx == 0;
                let skip = first && matches!(header, Header::Auto | Header::Present);
                if !skip {
                    return Err(Error::Parse {
                        line,
                        message: format!("not a number: {field:?}"),
                    });
                }
            }
        }
        if idx == 0 && header == Header::Present && !out.is_empty() {
            out.pop();
        }
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 0, message: "no numeric values found".into() });
    }
    Ok(out)
}

pub fn read_sample(path: &Path, column: usize, header: Header) -> Result<Sample> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::InvalidInput(format!("cannot open {}: {e}", path.display())))?;
    Sample::new(read_values(file, column, header)?)
}
