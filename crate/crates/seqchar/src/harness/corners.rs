//! Corner tables: the default 16-corner set and the CSV loader.

use crate::oracle::{Process, PvtCorner};

use super::ConfigError;

/// The default experiment corner set: four TT, six FF, six SS corners
/// spanning 0.72-0.99 V and -40..125 C.
pub fn table_corners() -> Vec<PvtCorner> {
    use Process::*;
    [
        (Tt, 0.8, 25.0),
        (Tt, 0.8, 85.0),
        (Tt, 0.9, 25.0),
        (Tt, 0.9, 85.0),
        (Ff, 0.88, -40.0),
        (Ff, 0.88, 0.0),
        (Ff, 0.88, 125.0),
        (Ff, 0.99, -40.0),
        (Ff, 0.99, 0.0),
        (Ff, 0.99, 125.0),
        (Ss, 0.72, -40.0),
        (Ss, 0.72, 0.0),
        (Ss, 0.72, 125.0),
        (Ss, 0.81, -40.0),
        (Ss, 0.81, 0.0),
        (Ss, 0.81, 125.0),
    ]
    .into_iter()
    .map(|(p, v, t)| PvtCorner::new(p, v, t))
    .collect()
}

/// Parse a corner table CSV: header `process,voltage,temperature`, one
/// corner per line, TT/FF/SS process tokens.
pub fn parse_corner_csv(text: &str) -> Result<Vec<PvtCorner>, ConfigError> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((i, line)) => {
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                break (i, trimmed);
            }
            None => return Err(ConfigError::at(0, "corner table is empty")),
        }
    };
    let normalized: String = header.1.split(',').map(|f| f.trim()).collect::<Vec<_>>().join(",");
    if !normalized.eq_ignore_ascii_case("process,voltage,temperature") {
        return Err(ConfigError::at(
            header.0 + 1,
            format!("expected header process,voltage,temperature, got {:?}", header.1),
        ));
    }
    let mut corners = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(|f| f.trim()).collect();
        if fields.len() != 3 {
            return Err(ConfigError::at(
                line_no,
                format!("expected 3 fields, got {}", fields.len()),
            ));
        }
        let process = Process::parse(fields[0])
            .ok_or_else(|| ConfigError::at(line_no, format!("unknown process {:?}", fields[0])))?;
        let voltage: f64 = fields[1]
            .parse()
            .map_err(|_| ConfigError::at(line_no, format!("bad voltage {:?}", fields[1])))?;
        let temperature: f64 = fields[2]
            .parse()
            .map_err(|_| ConfigError::at(line_no, format!("bad temperature {:?}", fields[2])))?;
        if !voltage.is_finite() || !temperature.is_finite() {
            return Err(ConfigError::at(line_no, "corner values must be finite"));
        }
        corners.push(PvtCorner::new(process, voltage, temperature));
    }
    if corners.is_empty() {
        return Err(ConfigError::at(0, "corner table has no corners"));
    }
    Ok(corners)
}

/// Serialize corners in the same CSV schema.
pub fn corner_csv(corners: &[PvtCorner]) -> String {
    let mut out = String::from("process,voltage,temperature\n");
    for c in corners {
        out.push_str(&format!(
            "{},{},{}\n",
            c.process.as_str(),
            c.voltage,
            c.temperature
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_has_sixteen_corners() {
        let corners = table_corners();
        assert_eq!(corners.len(), 16);
        assert_eq!(corners[0], PvtCorner::new(Process::Tt, 0.8, 25.0));
        assert_eq!(corners[10], PvtCorner::new(Process::Ss, 0.72, -40.0));
    }

    #[test]
    fn csv_round_trip() {
        let corners = table_corners();
        let text = corner_csv(&corners);
        let parsed = parse_corner_csv(&text).unwrap();
        assert_eq!(parsed, corners);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(parse_corner_csv("").is_err());
        assert!(parse_corner_csv("voltage,process,temperature\nTT,0.8,25").is_err());
        assert!(parse_corner_csv("process,voltage,temperature\nXX,0.8,25").is_err());
        assert!(parse_corner_csv("process,voltage,temperature\nTT,zap,25").is_err());
        assert!(parse_corner_csv("process,voltage,temperature\nTT,0.8").is_err());
        assert!(parse_corner_csv("process,voltage,temperature\n").is_err());
    }

    #[test]
    fn csv_accepts_comments_and_case() {
        let parsed = parse_corner_csv(
            "# corner table\nProcess, Voltage, Temperature\n tt , 0.8 , 25\nSS,0.72,-40\n",
        )
        .unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[1].process, Process::Ss);
    }
}
