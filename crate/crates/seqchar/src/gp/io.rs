//! Text dump/load of fitted models.
//!
//! Line-oriented, whitespace-separated, no binary payloads:
//!
//! ```text
//! gp-model v1
//! dims <D>
//! rows <N>
//! x_mean <D floats>
//! x_scale <D floats>
//! y_mean <float>
//! lengthscales <D floats>
//! signal_variance <float>
//! noise_variance <float>
//! x <D floats>        # N lines, standardized rows
//! y <float>           # N lines, centered targets
//! ```
//!
//! Floats are written in shortest round-trip form, so dump → load → dump is
//! byte-stable.

use nalgebra::{DMatrix, DVector};

use super::{build_model, GpError, GpHyperparams, GpModel};

pub fn dump_model(model: &GpModel) -> String {
    let mut out = String::from("gp-model v1\n");
    let dims = model.dims();
    let rows = model.len();
    out.push_str(&format!("dims {dims}\n"));
    out.push_str(&format!("rows {rows}\n"));
    push_floats(&mut out, "x_mean", model.x_mean.iter());
    push_floats(&mut out, "x_scale", model.x_scale.iter());
    push_floats(&mut out, "y_mean", std::iter::once(&model.y_mean));
    push_floats(&mut out, "lengthscales", model.hyper.lengthscales.iter());
    push_floats(
        &mut out,
        "signal_variance",
        std::iter::once(&model.hyper.signal_variance),
    );
    push_floats(
        &mut out,
        "noise_variance",
        std::iter::once(&model.hyper.noise_variance),
    );
    for i in 0..rows {
        push_floats(&mut out, "x", (0..dims).map(|j| &model.train_x[(i, j)]));
    }
    for i in 0..rows {
        push_floats(&mut out, "y", std::iter::once(&model.train_y[i]));
    }
    out
}

fn push_floats<'a>(out: &mut String, tag: &str, values: impl Iterator<Item = &'a f64>) {
    out.push_str(tag);
    for v in values {
        out.push(' ');
        out.push_str(&format!("{v}"));
    }
    out.push('\n');
}

struct Reader<'a> {
    lines: std::str::Lines<'a>,
    line_no: usize,
}

impl<'a> Reader<'a> {
    fn next_tagged(&mut self, tag: &str) -> Result<Vec<f64>, GpError> {
        loop {
            let Some(line) = self.lines.next() else {
                return Err(GpError::Parse(format!("missing {tag} line")));
            };
            self.line_no += 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let found = fields.next().unwrap_or("");
            if found != tag {
                return Err(GpError::Parse(format!(
                    "line {}: expected {tag}, found {found}",
                    self.line_no
                )));
            }
            return fields
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| {
                            GpError::Parse(format!("line {}: bad float {f:?}", self.line_no))
                        })
                        .and_then(|v| {
                            if v.is_finite() {
                                Ok(v)
                            } else {
                                Err(GpError::Parse(format!(
                                    "line {}: non-finite value",
                                    self.line_no
                                )))
                            }
                        })
                })
                .collect();
        }
    }
}

pub fn load_model(text: &str) -> Result<GpModel, GpError> {
    let mut lines = text.lines();
    let header = lines.next().map(str::trim);
    if header != Some("gp-model v1") {
        return Err(GpError::Parse("missing gp-model v1 header".into()));
    }
    let mut reader = Reader { lines, line_no: 1 };

    let dims = read_count(&mut reader, "dims")?;
    let rows = read_count(&mut reader, "rows")?;
    if dims == 0 || rows < 2 {
        return Err(GpError::Parse(format!(
            "need dims >= 1 and rows >= 2, got {dims}x{rows}"
        )));
    }
    if dims.saturating_mul(rows) > 50_000_000 {
        return Err(GpError::Parse("model dump too large".into()));
    }
    let x_mean = read_exact(&mut reader, "x_mean", dims)?;
    let x_scale = read_exact(&mut reader, "x_scale", dims)?;
    if x_scale.iter().any(|s| *s <= 0.0) {
        return Err(GpError::Parse("x_scale entries must be positive".into()));
    }
    let y_mean = read_exact(&mut reader, "y_mean", 1)?[0];
    let lengthscales = read_exact(&mut reader, "lengthscales", dims)?;
    let signal_variance = read_exact(&mut reader, "signal_variance", 1)?[0];
    let noise_variance = read_exact(&mut reader, "noise_variance", 1)?[0];
    let hyper = GpHyperparams {
        lengthscales,
        signal_variance,
        noise_variance,
    };
    hyper
        .validate(dims)
        .map_err(|e| GpError::Parse(e.to_string()))?;

    let mut xs = DMatrix::zeros(rows, dims);
    for i in 0..rows {
        let row = read_exact(&mut reader, "x", dims)?;
        for (j, v) in row.into_iter().enumerate() {
            xs[(i, j)] = v;
        }
    }
    let mut yc = DVector::zeros(rows);
    for i in 0..rows {
        yc[i] = read_exact(&mut reader, "y", 1)?[0];
    }
    build_model(xs, yc, x_mean, x_scale, y_mean, hyper)
}

fn read_count(reader: &mut Reader, tag: &str) -> Result<usize, GpError> {
    let values = reader.next_tagged(tag)?;
    if values.len() != 1 || values[0] < 0.0 || values[0].fract() != 0.0 || values[0] > 1e9 {
        return Err(GpError::Parse(format!("bad {tag} value")));
    }
    Ok(values[0] as usize)
}

fn read_exact(reader: &mut Reader, tag: &str, want: usize) -> Result<Vec<f64>, GpError> {
    let values = reader.next_tagged(tag)?;
    if values.len() != want {
        return Err(GpError::Parse(format!(
            "{tag}: expected {want} values, got {}",
            values.len()
        )));
    }
    Ok(values)
}
