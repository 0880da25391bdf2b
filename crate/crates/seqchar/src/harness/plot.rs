//! Self-contained SVG convergence plot: interval length (log scale) per
//! iteration, with a dotted bisection reference line halving from the first
//! bracket length.

use super::tracefile::TraceRow;
use super::ConfigError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

/// Plot-ready data, exposed so tests can check the geometry without parsing
/// SVG.
#[derive(Debug, Clone, PartialEq)]
pub struct TracePlot {
    /// (iteration, interval length) of every row carrying a length.
    pub series: Vec<(f64, f64)>,
    /// Halving reference anchored at the first observed length.
    pub reference: Vec<(f64, f64)>,
}

impl TracePlot {
    pub fn from_rows(rows: &[TraceRow]) -> Result<TracePlot, ConfigError> {
        let series: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| r.interval_length.map(|l| (r.iter as f64, l)))
            .filter(|(_, l)| *l > 0.0)
            .collect();
        if series.is_empty() {
            return Err(ConfigError::at(0, "trace has no interval lengths to plot"));
        }
        let (first_iter, first_len) = series[0];
        let last_iter = series.last().expect("nonempty").0;
        let floor = series
            .iter()
            .map(|(_, l)| *l)
            .fold(f64::INFINITY, f64::min)
            .min(first_len / 2.0);
        let mut reference = Vec::new();
        let mut k = 0u32;
        loop {
            let len = first_len / 2f64.powi(k as i32);
            let x = first_iter + k as f64;
            reference.push((x, len));
            if len <= floor || x >= last_iter + 4.0 || k > 80 {
                break;
            }
            k += 1;
        }
        Ok(TracePlot { series, reference })
    }
}

/// Render the SVG document for a parsed trace.
pub fn plot_trace_svg(rows: &[TraceRow]) -> Result<String, ConfigError> {
    let plot = TracePlot::from_rows(rows)?;
    let all = plot.series.iter().chain(&plot.reference);
    let (mut x_max, mut y_min, mut y_max) = (1.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in all {
        x_max = x_max.max(*x);
        y_min = y_min.min(*y);
        y_max = y_max.max(*y);
    }
    let y_min = y_min.log10().floor();
    let y_max = y_max.log10().ceil().max(y_min + 1.0);

    let map_x = |x: f64| MARGIN_L + x / x_max * (WIDTH - MARGIN_L - MARGIN_R);
    let map_y =
        |y: f64| HEIGHT - MARGIN_B - (y.log10() - y_min) / (y_max - y_min) * (HEIGHT - MARGIN_T - MARGIN_B);
    let path = |pts: &[(f64, f64)]| -> String {
        pts.iter()
            .map(|(x, y)| format!("{:.2},{:.2}", map_x(*x), map_y(*y)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // axes
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_L}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    ));
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B
    ));
    // log-decade gridlines and labels
    let mut decade = y_min;
    while decade <= y_max {
        let y = map_y(10f64.powf(decade));
        svg.push_str(&format!(
            "<line x1=\"{MARGIN_L}\" y1=\"{y:.2}\" x2=\"{}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>\n",
            WIDTH - MARGIN_R
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">1e{}</text>\n",
            MARGIN_L - 6.0,
            y + 4.0,
            decade as i64
        ));
        decade += 1.0;
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">iteration</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 14.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-size=\"12\" transform=\"rotate(-90 16 {:.2})\" text-anchor=\"middle\">interval length</text>\n",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0
    ));
    // bisection reference, dotted
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4 4\"/>\n",
        path(&plot.reference)
    ));
    // the trace itself
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.8\"/>\n",
        path(&plot.series)
    ));
    for (x, y) in &plot.series {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.4\" fill=\"#c0392b\"/>\n",
            map_x(*x),
            map_y(*y)
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
