use std::path::Path;

use crate::error::{Error, Result};
use crate::nv::OdmrSpectrum;

const HEADER: [&str; 2] = ["frequency_hz", "pl"];

fn parse_field(record: &csv::StringRecord, index: usize, line: u64) -> Result<f64> {
    let raw = record.get(index).ok_or_else(|| Error::Parse {
        line,
        reason: format!("expected 2 columns, found {}", record.len()),
    })?;
    raw.parse::<f64>().map_err(|_| Error::Parse {
        line,
        reason: format!("`{raw}` is not a number in column {}", HEADER[index]),
    })
}

/// Reads a `frequency_hz,pl` file. Frequencies must strictly increase and PL
/// values must be positive; violations name the offending line.
pub fn load_spectrum_csv(path: &Path) -> Result<OdmrSpectrum> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)?;
    let header = reader.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::Parse {
            line: 1,
            reason: format!(
                "expected header `frequency_hz,pl`, found `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut frequencies = Vec::new();
    let mut pl = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                reason: format!("expected 2 columns, found {}", record.len()),
            });
        }
        let f = parse_field(&record, 0, line)?;
        let p = parse_field(&record, 1, line)?;
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::Parse {
                line,
                reason: format!("frequency {f} must be positive"),
            });
        }
        if let Some(&prev) = frequencies.last() {
            if f == prev {
                return Err(Error::Parse {
                    line,
                    reason: format!("duplicated frequency {f}"),
                });
            }
            if f < prev {
                return Err(Error::Parse {
                    line,
                    reason: format!("frequency {f} is below the previous value {prev}"),
                });
            }
        }
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::Parse {
                line,
                reason: format!("PL value {p} must be positive"),
            });
        }
        frequencies.push(f);
        pl.push(p);
    }
    if frequencies.is_empty() {
        return Err(Error::Parse {
            line: 1,
            reason: "no data rows".into(),
        });
    }
    OdmrSpectrum::new(frequencies, pl)
}
