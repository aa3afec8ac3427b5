//! Profile and map output: CSV for 1-D profiles, 16-bit PGM for 2-D maps,
//! and a CSV reader so written profiles can be loaded back.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{IntensityMap, IntensityProfile};

const CSV_HEADER: &str = "position_m,intensity";

/// Writes `position_m,intensity` rows, LF line endings, one row per sample.
pub fn write_profile_csv(p: &IntensityProfile, path: &Path) -> Result<()> {
    fs::write(path, render_profile_csv(p)).map_err(|e| Error::io(path, e))
}

/// The CSV document [`write_profile_csv`] would write.
pub fn render_profile_csv(p: &IntensityProfile) -> String {
    let mut out = String::with_capacity(34 * (p.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (y, v) in p.positions().iter().zip(p.values()) {
        out.push_str(&format!("{y:.9e},{v:.9e}\n"));
    }
    out
}

/// Parses a profile CSV document.
///
/// The file does not store the detection distance, so the returned profile
/// carries `plane_distance = 0.0`; callers that know the plane can say so via
/// [`parse_profile_csv_at`].
pub fn parse_profile_csv(text: &str) -> Result<IntensityProfile> {
    parse_profile_csv_at(text, 0.0)
}

pub fn parse_profile_csv_at(text: &str, plane_distance: f64) -> Result<IntensityProfile> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(Error::CsvFormat {
                line: 1,
                message: format!("expected header \"{CSV_HEADER}\", got \"{header}\""),
            })
        }
        None => {
            return Err(Error::CsvFormat {
                line: 1,
                message: "empty document".into(),
            })
        }
    }
    let mut positions = Vec::new();
    let mut values = Vec::new();
    for (idx, raw) in lines {
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let mut fields = line.split(',');
        let (y, v) = match (fields.next(), fields.next(), fields.next()) {
            (Some(y), Some(v), None) => (y, v),
            _ => {
                return Err(Error::CsvFormat {
                    line: lineno,
                    message: format!("expected 2 comma-separated fields, got \"{line}\""),
                })
            }
        };
        positions.push(parse_float(y, lineno, "position")?);
        values.push(parse_float(v, lineno, "intensity")?);
    }
    IntensityProfile::new(positions, values, plane_distance)
}

fn parse_float(field: &str, line: usize, what: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::CsvFormat {
        line,
        message: format!("invalid {what} value \"{field}\""),
    })
}

pub fn read_profile_csv(path: &Path) -> Result<IntensityProfile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_profile_csv(&text)
}

/// Writes a binary 16-bit PGM (`P5`, maxval 65535, big-endian samples).
///
/// Values are scaled so the map maximum lands exactly on 65535; an all-zero
/// map stays all zero. Rows are written top-down in image order, so the first
/// raster row is the largest y.
pub fn write_intensity_pgm(map: &IntensityMap, path: &Path) -> Result<()> {
    let (ny, nx) = (map.grid().ny(), map.grid().nx());
    let peak = map.max_value();
    let scale = if peak > 0.0 { 65535.0 / peak } else { 0.0 };
    let mut bytes = Vec::with_capacity(32 + 2 * nx * ny);
    bytes.extend_from_slice(format!("P5\n{nx} {ny}\n65535\n").as_bytes());
    for j in (0..ny).rev() {
        for i in 0..nx {
            let level = (map.values()[[j, i]] * scale).round().clamp(0.0, 65535.0) as u16;
            bytes.extend_from_slice(&level.to_be_bytes());
        }
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
