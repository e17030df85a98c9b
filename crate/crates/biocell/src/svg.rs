//! Minimal hand-rolled SVG emission for trajectories, sweeps and scatter
//! comparisons. Rendering is decorative; the CSV outputs are the contract.

use std::fmt::Write;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 56.0;

const SERIES_COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn from_bounds(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        let pad = |lo: f64, hi: f64| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, lo + 0.5)
            }
        };
        let (x_min, x_max) = pad(x_min, x_max);
        let (y_min, y_max) = pad(y_min, y_max);
        Frame { x_min, x_max, y_min, y_max }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn open_svg(out: &mut String, title: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = write!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = write!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = write!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    );
    for k in 0..=4 {
        let fx = frame.x_min + (frame.x_max - frame.x_min) * k as f64 / 4.0;
        let fy = frame.y_min + (frame.y_max - frame.y_min) * k as f64 / 4.0;
        let px = frame.sx(fx);
        let py = frame.sy(fy);
        let _ = write!(
            out,
            r#"<line x1="{px}" y1="{y0}" x2="{px}" y2="{}" stroke="black"/><text x="{px}" y="{}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 20.0,
            tick(fx)
        );
        let _ = write!(
            out,
            r#"<line x1="{}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/><text x="{}" y="{}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 9.0,
            py + 4.0,
            tick(fy)
        );
    }
    let _ = write!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = write!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Polyline chart of one or more `(x, y)` series.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[(&str, &[(f64, f64)])]) -> String {
    let points = series.iter().flat_map(|(_, pts)| pts.iter());
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for &(x, y) in points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if !x_min.is_finite() {
        (x_min, x_max, y_min, y_max) = (0.0, 1.0, 0.0, 1.0);
    }
    let frame = Frame::from_bounds(x_min, x_max, y_min.min(0.0), y_max);

    let mut out = String::new();
    open_svg(&mut out, title);
    axes(&mut out, &frame, x_label, y_label);
    for (idx, (label, pts)) in series.iter().enumerate() {
        let color = SERIES_COLORS[idx % SERIES_COLORS.len()];
        let mut path = String::new();
        for &(x, y) in *pts {
            let _ = write!(path, "{:.2},{:.2} ", frame.sx(x), frame.sy(y));
        }
        let _ = write!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.trim_end()
        );
        let _ = write!(
            out,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN_RIGHT - 150.0,
            MARGIN_TOP + 16.0 * (idx + 1) as f64,
            escape(label)
        );
    }
    out.push_str("</svg>");
    out
}

/// Heatmap of a row-major (y, x) value grid; cells are index-spaced so
/// irregular axes render evenly.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, xs: &[f64], ys: &[f64], values: &[f64]) -> String {
    let mut v_min = f64::INFINITY;
    let mut v_max = f64::NEG_INFINITY;
    for &v in values {
        v_min = v_min.min(v);
        v_max = v_max.max(v);
    }
    if !v_min.is_finite() || v_max == v_min {
        v_max = v_min + 1.0;
    }
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let cw = plot_w / xs.len() as f64;
    let ch = plot_h / ys.len() as f64;

    let mut out = String::new();
    open_svg(&mut out, title);
    for (yi, _) in ys.iter().enumerate() {
        for (xi, _) in xs.iter().enumerate() {
            let v = values[yi * xs.len() + xi];
            let px = MARGIN_LEFT + xi as f64 * cw;
            // Row 0 at the bottom, matching ascending axis values.
            let py = HEIGHT - MARGIN_BOTTOM - (yi + 1) as f64 * ch;
            let _ = write!(
                out,
                r#"<rect x="{px:.2}" y="{py:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                cw + 0.5,
                ch + 0.5,
                viridis((v - v_min) / (v_max - v_min))
            );
        }
    }
    // Edge labels only; dense grids would overlap otherwise.
    let _ = write!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{} = {} .. {}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label),
        tick(xs[0]),
        tick(*xs.last().unwrap())
    );
    let ymid = MARGIN_TOP + plot_h / 2.0;
    let _ = write!(
        out,
        r#"<text x="16" y="{ymid}" text-anchor="middle" transform="rotate(-90 16 {ymid})">{} = {} .. {}</text>"#,
        escape(y_label),
        tick(ys[0]),
        tick(*ys.last().unwrap())
    );
    let _ = write!(
        out,
        r#"<text x="{}" y="{}">scale: {} .. {} mW/cm²</text>"#,
        MARGIN_LEFT,
        MARGIN_TOP - 6.0,
        tick(v_min),
        tick(v_max)
    );
    out.push_str("</svg>");
    out
}

/// Scatter chart of labeled `(x, y)` series.
pub fn scatter(title: &str, x_label: &str, y_label: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() {
        (x_min, x_max, y_min, y_max) = (0.0, 1.0, 0.0, 1.0);
    }
    let frame = Frame::from_bounds(0.0f64.min(x_min), x_max, 0.0f64.min(y_min), y_max);

    let mut out = String::new();
    open_svg(&mut out, title);
    axes(&mut out, &frame, x_label, y_label);
    for (idx, (label, pts)) in series.iter().enumerate() {
        let color = SERIES_COLORS[idx % SERIES_COLORS.len()];
        for &(x, y) in pts {
            let _ = write!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="5" fill="{color}" fill-opacity="0.8"/>"#,
                frame.sx(x),
                frame.sy(y)
            );
        }
        let _ = write!(
            out,
            r#"<text x="{}" y="{}" fill="{color}">{} ({} points)</text>"#,
            WIDTH - MARGIN_RIGHT - 220.0,
            MARGIN_TOP + 16.0 * (idx + 1) as f64,
            escape(label),
            pts.len()
        );
    }
    out.push_str("</svg>");
    out
}

/// Five-stop approximation of the viridis colormap.
fn viridis(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = t.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (t.floor() as usize).min(STOPS.len() - 2);
    let f = t - i as f64;
    let (r0, g0, b0) = STOPS[i];
    let (r1, g1, b1) = STOPS[i + 1];
    format!(
        "rgb({},{},{})",
        (r0 + f * (r1 - r0)).round() as u8,
        (g0 + f * (g1 - g0)).round() as u8,
        (b0 + f * (b1 - b0)).round() as u8
    )
}
