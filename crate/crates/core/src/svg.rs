//! Plain-text SVG charts.
//!
//! Every chart uses an 800×500 viewBox. The plot area spans x ∈ [70, 770]
//! and y ∈ [40, 440]; a data point `(u, v)` with both coordinates scaled to
//! `[0, 1]` is drawn at `(70 + 700·u, 440 − 400·v)`.

use std::fmt::Write as _;

use chrono::NaiveDate;

use crate::calib::CurvePoint;
use crate::events::EventBand;
use crate::scalar::Real;

const LEFT: f64 = 70.0;
const TOP: f64 = 40.0;
const WIDTH: f64 = 700.0;
const HEIGHT: f64 = 400.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn px(u: f64) -> f64 {
    LEFT + WIDTH * u
}

fn py(v: f64) -> f64 {
    TOP + HEIGHT - HEIGHT * v
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 500" width="800" height="500">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="800" height="500" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="400" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{LEFT}" y="{TOP}" width="{WIDTH}" height="{HEIGHT}" fill="none" stroke="black"/>"#
    );
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axis_ticks(s: &mut String, x_labels: &[(f64, String)], y_labels: &[(f64, String)]) {
    for (u, label) in x_labels {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="462" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            px(*u),
            escape(label)
        );
    }
    for (v, label) in y_labels {
        let _ = writeln!(
            s,
            r#"<text x="62" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            py(*v) + 4.0,
            escape(label)
        );
    }
}

/// Reliability diagram: the diagonal, one marker per bin, and vertical
/// error bars of ±1.96 standard errors.
pub fn reliability_svg<T: Real>(points: &[CurvePoint<T>], title: &str) -> String {
    let mut s = header(title);
    let ticks: Vec<(f64, String)> = (0..=5).map(|k| (k as f64 / 5.0, format!("{:.1}", k as f64 / 5.0))).collect();
    axis_ticks(&mut s, &ticks, &ticks);
    let _ = writeln!(
        s,
        r#"<text x="420" y="490" text-anchor="middle" font-family="sans-serif" font-size="12">mean prediction</text>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="240" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 18 240)">empirical frequency</text>"#
    );
    let _ = writeln!(
        s,
        r##"<line class="diagonal" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#888" stroke-dasharray="4 4"/>"##,
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    );
    for p in points {
        let (q, f, e) = (p.q_hat.to_f64_lossy(), p.p_hat.to_f64_lossy(), p.stderr.to_f64_lossy());
        let lo = (f - 1.96 * e).max(0.0);
        let hi = (f + 1.96 * e).min(1.0);
        let _ = writeln!(
            s,
            r#"<line class="errbar" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{}"/>"#,
            py(lo),
            py(hi),
            PALETTE[0],
            x = px(q)
        );
        let _ = writeln!(s, r#"<circle class="bin" cx="{:.2}" cy="{:.2}" r="4" fill="{}"/>"#, px(q), py(f), PALETTE[0]);
    }
    s.push_str("</svg>\n");
    s
}

/// One country's band series: `(period_start, band)` in time order.
pub type BandSeries<'a, T> = (&'a str, &'a [(NaiveDate, EventBand<T>)]);

/// Posterior mean polyline over a shaded credible band, per country.
pub fn band_svg<T: Real>(series: &[BandSeries<'_, T>], title: &str) -> String {
    let dates: Vec<NaiveDate> = series.iter().flat_map(|(_, pts)| pts.iter().map(|(d, _)| *d)).collect();
    let (first, last) = match (dates.iter().min(), dates.iter().max()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => {
            let mut s = header(title);
            s.push_str("</svg>\n");
            return s;
        }
    };
    let span = (last - first).num_days().max(1) as f64;
    let x_of = |d: NaiveDate| if first == last { 0.5 } else { (d - first).num_days() as f64 / span };
    let bands = series.iter().flat_map(|(_, pts)| pts.iter().map(|(_, b)| b));
    let y_max = bands.clone().map(|b| b.ci_hi.to_f64_lossy()).fold(1.0, f64::max);
    let y_min = bands.map(|b| b.ci_lo.to_f64_lossy()).fold(0.0, f64::min);
    let y_of = |v: f64| (v - y_min) / (y_max - y_min);

    let mut s = header(title);
    let x_labels = vec![(x_of(first), first.to_string()), (x_of(last), last.to_string())];
    let y_labels: Vec<(f64, String)> = (0..=4)
        .map(|k| {
            let v = y_min + (y_max - y_min) * k as f64 / 4.0;
            (y_of(v), format!("{v:.1}"))
        })
        .collect();
    axis_ticks(&mut s, &x_labels, &y_labels);
    if y_min < 0.0 {
        let _ = writeln!(
            s,
            r##"<line class="zero" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#bbb"/>"##,
            px(0.0),
            px(1.0),
            y = py(y_of(0.0))
        );
    }

    for (idx, (country, pts)) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let upper = pts.iter().map(|(d, b)| format!("{:.2},{:.2}", px(x_of(*d)), py(y_of(b.ci_hi.to_f64_lossy()))));
        let lower =
            pts.iter().rev().map(|(d, b)| format!("{:.2},{:.2}", px(x_of(*d)), py(y_of(b.ci_lo.to_f64_lossy()))));
        let polygon: Vec<String> = upper.chain(lower).collect();
        let _ = writeln!(
            s,
            r#"<polygon class="band" points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
            polygon.join(" ")
        );
        let mean: Vec<String> =
            pts.iter().map(|(d, b)| format!("{:.2},{:.2}", px(x_of(*d)), py(y_of(b.mean.to_f64_lossy())))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="mean" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            mean.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            LEFT + 10.0,
            TOP + 16.0 + 16.0 * idx as f64,
            escape(country)
        );
    }
    s.push_str("</svg>\n");
    s
}
