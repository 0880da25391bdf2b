//! Trace CSV: `iter,test_point,classification,delay,interval_length`.
//!
//! Delay is empty for failure outcomes; interval_length is empty for
//! expansion calls made before a bracket exists.

use super::ConfigError;
use crate::search::{Classification, TraceEntry};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub test_point: f64,
    pub classification: Classification,
    pub delay: Option<f64>,
    pub interval_length: Option<f64>,
}

pub fn trace_csv(entries: &[TraceEntry]) -> String {
    let mut out = String::from("iter,test_point,classification,delay,interval_length\n");
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.iter,
            e.test_point,
            e.classification.as_str(),
            e.delay.map(|d| d.to_string()).unwrap_or_default(),
            e.interval_length_after
                .map(|l| l.to_string())
                .unwrap_or_default(),
        ));
    }
    out
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRow>, ConfigError> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| ConfigError::at(0, "trace file is empty"))?;
    let normalized: String = header
        .1
        .split(',')
        .map(str::trim)
        .collect::<Vec<_>>()
        .join(",");
    if !normalized.eq_ignore_ascii_case("iter,test_point,classification,delay,interval_length") {
        return Err(ConfigError::at(1, format!("unexpected header {:?}", header.1)));
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(ConfigError::at(
                line_no,
                format!("expected 5 fields, got {}", fields.len()),
            ));
        }
        let iter: usize = fields[0]
            .parse()
            .map_err(|_| ConfigError::at(line_no, format!("bad iter {:?}", fields[0])))?;
        let test_point: f64 = fields[1]
            .parse()
            .map_err(|_| ConfigError::at(line_no, format!("bad test_point {:?}", fields[1])))?;
        let classification = Classification::parse(fields[2])
            .ok_or_else(|| ConfigError::at(line_no, format!("bad classification {:?}", fields[2])))?;
        let delay = parse_optional(line_no, "delay", fields[3])?;
        let interval_length = parse_optional(line_no, "interval_length", fields[4])?;
        if !test_point.is_finite() {
            return Err(ConfigError::at(line_no, "non-finite test_point"));
        }
        if let Some(l) = interval_length {
            if !(l >= 0.0) || !l.is_finite() {
                return Err(ConfigError::at(line_no, "interval_length must be >= 0"));
            }
        }
        rows.push(TraceRow {
            iter,
            test_point,
            classification,
            delay,
            interval_length,
        });
    }
    if rows.is_empty() {
        return Err(ConfigError::at(0, "trace has no data rows"));
    }
    Ok(rows)
}

fn parse_optional(line: usize, what: &str, field: &str) -> Result<Option<f64>, ConfigError> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|_| ConfigError::at(line, format!("bad {what} {field:?}")))
}
