//! Minimal self-contained SVG plots. These are presentational; the numbers
//! behind every plot are also written to a sibling CSV.

use std::fmt::Write;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlotError {
    #[error("nothing to plot: every series is empty")]
    Empty,
    #[error("series `{0}` contains a non-finite point")]
    NonFinite(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlotStyle {
    /// Cartesian line chart.
    Line {
        title: String,
        x_label: String,
        y_label: String,
        log_x: bool,
    },
    /// Half-plane polar pattern; points are `(angle_deg, level_db)`.
    Polar { title: String, floor_db: f64 },
    /// Smith chart; points are `(Re gamma, Im gamma)`.
    Smith { title: String },
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn n(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        n(W / 2.0),
        escape(title)
    );
}

fn legend(out: &mut String, series: &[Series], x: f64, y: f64) {
    for (i, s) in series.iter().enumerate() {
        let yy = y + 16.0 * i as f64;
        let c = COLORS[i % COLORS.len()];
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{c}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            n(x),
            n(yy),
            n(x + 18.0),
            n(yy),
            n(x + 22.0),
            n(yy + 4.0),
            escape(&s.label)
        );
    }
}

fn polyline(out: &mut String, pts: &[(f64, f64)], color: &str) {
    let mut d = String::new();
    for (i, (x, y)) in pts.iter().enumerate() {
        if i > 0 {
            d.push(' ');
        }
        let _ = write!(d, "{},{}", n(*x), n(*y));
    }
    let _ = writeln!(
        out,
        r#"<polyline points="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
    );
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    super::format::fmt_sig((v * 1e9).round() / 1e9)
}

/// Renders `series` as a standalone SVG document.
pub fn emit_svg_plot(series: &[Series], style: &PlotStyle) -> Result<String, PlotError> {
    if series.iter().all(|s| s.points.is_empty()) {
        return Err(PlotError::Empty);
    }
    for s in series {
        if s.points
            .iter()
            .any(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(PlotError::NonFinite(s.label.clone()));
        }
    }
    let mut out = String::new();
    match style {
        PlotStyle::Line {
            title,
            x_label,
            y_label,
            log_x,
        } => line_chart(&mut out, series, title, x_label, y_label, *log_x)?,
        PlotStyle::Polar { title, floor_db } => polar_chart(&mut out, series, title, *floor_db),
        PlotStyle::Smith { title } => smith_chart(&mut out, series, title),
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn line_chart(
    out: &mut String,
    series: &[Series],
    title: &str,
    x_label: &str,
    y_label: &str,
    log_x: bool,
) -> Result<(), PlotError> {
    let tx = |x: f64| if log_x { x.log2() } else { x };
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|&(x, y)| (tx(x), y)))
        .collect();
    if log_x && series.iter().flat_map(|s| &s.points).any(|p| p.0 <= 0.0) {
        return Err(PlotError::NonFinite("log axis".into()));
    }
    let (mut x0, mut x1) = all
        .iter()
        .fold((f64::MAX, f64::MIN), |a, p| (a.0.min(p.0), a.1.max(p.0)));
    let (mut y0, mut y1) = all
        .iter()
        .fold((f64::MAX, f64::MIN), |a, p| (a.0.min(p.1), a.1.max(p.1)));
    if x1 - x0 <= 0.0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 <= 0.0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    let (l, r, t, b) = (70.0, W - 170.0, 40.0, H - 50.0);
    let px = |x: f64| l + (x - x0) / (x1 - x0) * (r - l);
    let py = |y: f64| b - (y - y0) / (y1 - y0) * (b - t);

    header(out, title);
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        n(l),
        n(t),
        n(r - l),
        n(b - t)
    );
    let xt = if log_x {
        (x0.ceil() as i64..=x1.floor() as i64)
            .map(|k| k as f64)
            .collect()
    } else {
        nice_ticks(x0, x1)
    };
    for v in xt {
        let label = if log_x {
            tick_label(2f64.powf(v))
        } else {
            tick_label(v)
        };
        let _ = writeln!(
            out,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#ddd"/><text x="{0}" y="{3}" text-anchor="middle">{label}</text>"##,
            n(px(v)),
            n(t),
            n(b),
            n(b + 16.0)
        );
    }
    for v in nice_ticks(y0, y1) {
        let _ = writeln!(
            out,
            r##"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="#ddd"/><text x="{3}" y="{4}" text-anchor="end">{5}</text>"##,
            n(l),
            n(py(v)),
            n(r),
            n(l - 6.0),
            n(py(v) + 4.0),
            tick_label(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        n((l + r) / 2.0),
        n(H - 12.0),
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        n((t + b) / 2.0),
        escape(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = s.points.iter().map(|&(x, y)| (px(tx(x)), py(y))).collect();
        polyline(out, &pts, COLORS[i % COLORS.len()]);
    }
    legend(out, series, r + 12.0, t + 10.0);
    Ok(())
}

fn polar_chart(out: &mut String, series: &[Series], title: &str, floor_db: f64) {
    let (cx, cy, rad) = (W / 2.0 - 60.0, H - 60.0, 360.0);
    let to_xy = |deg: f64, db: f64| {
        let rr = rad * ((db - floor_db) / -floor_db).clamp(0.0, 1.0);
        let a = deg.to_radians();
        (cx + rr * a.sin(), cy - rr * a.cos())
    };
    header(out, title);
    let rings = 4;
    for k in 1..=rings {
        let db = floor_db * (1.0 - f64::from(k) / f64::from(rings));
        let rr = rad * f64::from(k) / f64::from(rings);
        let _ = writeln!(
            out,
            r##"<path d="M {x0} {cy} A {rr} {rr} 0 0 1 {x1} {cy}" fill="none" stroke="#ccc"/><text x="{tx}" y="{ty}" fill="#666">{label} dB</text>"##,
            x0 = n(cx - rr),
            cy = n(cy),
            rr = n(rr),
            x1 = n(cx + rr),
            tx = n(cx + rr + 3.0),
            ty = n(cy + 14.0),
            label = tick_label(db)
        );
    }
    for deg in (-90..=90).step_by(30) {
        let (x, y) = to_xy(f64::from(deg), 0.0);
        let (lx, ly) = to_xy(f64::from(deg), -floor_db * 0.07);
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#ccc"/><text x="{}" y="{}" text-anchor="middle">{deg}°</text>"##,
            n(cx),
            n(cy),
            n(x),
            n(y),
            n(lx),
            n(ly)
        );
    }
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = s.points.iter().map(|&(a, d)| to_xy(a, d)).collect();
        polyline(out, &pts, COLORS[i % COLORS.len()]);
    }
    legend(out, series, W - 150.0, 50.0);
}

fn smith_chart(out: &mut String, series: &[Series], title: &str) {
    let (cx, cy, rad) = (W / 2.0 - 60.0, H / 2.0 + 10.0, 200.0);
    let to_xy = |re: f64, im: f64| (cx + rad * re, cy - rad * im);
    header(out, title);
    let _ = writeln!(
        out,
        r#"<defs><clipPath id="unit"><circle cx="{}" cy="{}" r="{}"/></clipPath></defs>"#,
        n(cx),
        n(cy),
        n(rad)
    );
    let _ = writeln!(
        out,
        r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="black"/>"#,
        n(cx),
        n(cy),
        n(rad)
    );
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#aaa"/>"##,
        n(cx - rad),
        n(cy),
        n(cx + rad),
        n(cy)
    );
    for r in [0.2, 0.5, 1.0, 2.0, 5.0] {
        let (c, rr) = (r / (1.0 + r), 1.0 / (1.0 + r));
        let (x, y) = to_xy(c, 0.0);
        let _ = writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#ccc"/>"##,
            n(x),
            n(y),
            n(rad * rr)
        );
    }
    for x in [0.2, 0.5, 1.0, 2.0, 5.0] {
        for sign in [1.0, -1.0] {
            let (px, py) = to_xy(1.0, sign / x);
            let _ = writeln!(
                out,
                r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#e4e4e4" clip-path="url(#unit)"/>"##,
                n(px),
                n(py),
                n(rad / x)
            );
        }
    }
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = s.points.iter().map(|&(a, b)| to_xy(a, b)).collect();
        polyline(out, &pts, COLORS[i % COLORS.len()]);
    }
    legend(out, series, W - 150.0, 50.0);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> PlotStyle {
        PlotStyle::Line {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            log_x: false,
        }
    }

    #[test]
    fn empty_series_is_an_error() {
        assert_eq!(emit_svg_plot(&[], &line()), Err(PlotError::Empty));
        let s = [Series::new("a", vec![])];
        assert_eq!(emit_svg_plot(&s, &line()), Err(PlotError::Empty));
    }

    #[test]
    fn well_formed_documents() {
        let s = [Series::new("a<b", vec![(0.0, 1.0), (1.0, 2.0)])];
        let styles = [
            line(),
            PlotStyle::Polar {
                title: "p".into(),
                floor_db: -40.0,
            },
            PlotStyle::Smith { title: "s".into() },
        ];
        for st in &styles {
            let svg = emit_svg_plot(&s, st).unwrap();
            assert!(svg.starts_with("<svg "));
            assert!(svg.ends_with("</svg>\n"));
            assert!(svg.contains("a&lt;b"));
            assert_eq!(svg.matches("<polyline").count(), 1);
        }
        let nan = [Series::new("n", vec![(0.0, f64::NAN)])];
        assert!(matches!(
            emit_svg_plot(&nan, &line()),
            Err(PlotError::NonFinite(_))
        ));
    }
}
