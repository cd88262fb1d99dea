use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

use super::{DataError, RawSeries, Result};

/// What to do with an empty or `NaN` cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FillPolicy {
    #[default]
    Reject,
    /// Repeat the previous row's value; a gap in the first row is still an error.
    ForwardFill,
}

const DATETIME_FORMATS: &[&str] = &[
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M:%S%.f",
    "%Y-%m-%dT%H:%M:%S%.f",
    "%Y-%m-%d %H:%M",
    "%Y/%m/%d %H:%M:%S",
    "%Y/%m/%d %H:%M",
];

/// ISO-8601 (with or without offset, or date only) or a numeric epoch in seconds.
/// Returns milliseconds since the epoch.
pub fn parse_timestamp(raw: &str) -> Option<i64> {
    let s = raw.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.timestamp_millis());
    }
    for fmt in DATETIME_FORMATS {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(dt.and_utc().timestamp_millis());
        }
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Some(d.and_hms_opt(0, 0, 0)?.and_utc().timestamp_millis());
    }
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .map(|secs| (secs * 1000.0).round() as i64)
}

fn is_missing(cell: &str) -> bool {
    let c = cell.trim();
    c.is_empty() || c.eq_ignore_ascii_case("nan") || c.eq_ignore_ascii_case("na")
}

/// Loads a CSV whose `date_column` holds timestamps; every other column is a
/// numeric channel, kept in file order.
pub fn load_csv(path: &Path, date_column: &str, fill: FillPolicy) -> Result<RawSeries> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() < 2 {
        return Err(DataError::TooFewColumns(headers.len()));
    }
    let date_idx = headers
        .iter()
        .position(|h| h == date_column)
        .ok_or_else(|| DataError::MissingColumn(date_column.to_string()))?;
    let channel_idx: Vec<usize> = (0..headers.len()).filter(|&i| i != date_idx).collect();
    let names: Vec<String> = channel_idx.iter().map(|&i| headers[i].to_string()).collect();

    let mut timestamps = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for (k, record) in reader.records().enumerate() {
        // header is line 1
        let line = k as u64 + 2;
        let record = record.map_err(|e| DataError::Parse {
            line,
            message: e.to_string(),
        })?;
        if record.len() != headers.len() {
            return Err(DataError::Parse {
                line,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        let ts = parse_timestamp(&record[date_idx]).ok_or_else(|| DataError::Parse {
            line,
            message: format!("unparseable timestamp `{}`", &record[date_idx]),
        })?;
        if timestamps.last().is_some_and(|&prev| ts <= prev) {
            return Err(DataError::NonMonotone { line });
        }
        let row_start = values.len();
        for (j, &col) in channel_idx.iter().enumerate() {
            let cell = &record[col];
            let v = if is_missing(cell) {
                match fill {
                    FillPolicy::ForwardFill if row_start > 0 => values[row_start - names.len() + j],
                    _ => {
                        return Err(DataError::MissingValue {
                            line,
                            column: names[j].clone(),
                        })
                    }
                }
            } else {
                cell.parse::<f64>().map_err(|_| DataError::Parse {
                    line,
                    message: format!("column `{}`: `{cell}` is not a number", names[j]),
                })?
            };
            if !v.is_finite() {
                return Err(DataError::Parse {
                    line,
                    message: format!("column `{}`: non-finite value", names[j]),
                });
            }
            values.push(v);
        }
        timestamps.push(ts);
    }
    RawSeries::new(timestamps, names, values)
}
