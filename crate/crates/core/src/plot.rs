//! SVG scatter plots of atomic measures.

use std::fmt::Write;

use crate::spectra::AtomicMeasure;

pub const VIEWPORT: f64 = 600.0;
const MARGIN: f64 = 30.0;
const MAX_POINT_RADIUS: f64 = 4.0;
const MIN_POINT_RADIUS: f64 = 0.6;

pub struct Series<'a> {
    pub measure: &'a AtomicMeasure,
    pub color: &'a str,
    pub label: &'a str,
}

/// Scatter of the given measures on `[-radius, radius]^2` with the unit
/// circle drawn in grey. Point area is proportional to atom weight, scaled
/// so the heaviest atom across all series gets the largest marker.
pub fn scatter_svg(series: &[Series<'_>], radius: f64, title: &str) -> String {
    let scale = (VIEWPORT - 2.0 * MARGIN) / (2.0 * radius);
    let px = |x: f64| MARGIN + (x + radius) * scale;
    let py = |y: f64| MARGIN + (radius - y) * scale;
    let aggregated: Vec<AtomicMeasure> = series.iter().map(|s| s.measure.aggregated()).collect();
    let w_max = aggregated
        .iter()
        .flat_map(|m| m.atoms().iter().map(|a| a.weight))
        .fold(0.0, f64::max);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{v}" height="{v}" viewBox="0 0 {v} {v}">"#,
        v = VIEWPORT
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, "<title>{}</title>", escape(title));
    let _ = writeln!(
        svg,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbb" stroke-width="0.5"/>"##,
        px(-radius), py(0.0), px(radius), py(0.0)
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbb" stroke-width="0.5"/>"##,
        px(0.0), py(-radius), px(0.0), py(radius)
    );
    let _ = writeln!(
        svg,
        r##"<circle class="unit-circle" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#999" stroke-width="0.8" stroke-dasharray="4 3"/>"##,
        px(0.0), py(0.0), scale
    );
    for (s, m) in series.iter().zip(&aggregated) {
        let _ = writeln!(svg, r#"<g class="series" fill="{}" fill-opacity="0.75">"#, escape(s.color));
        for a in m.atoms() {
            let r = if w_max > 0.0 {
                (MAX_POINT_RADIUS * (a.weight / w_max).sqrt()).max(MIN_POINT_RADIUS)
            } else {
                MIN_POINT_RADIUS
            };
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}"/>"#,
                px(a.location.re),
                py(a.location.im),
                r
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    for (i, s) in series.iter().enumerate() {
        let y = 18.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<text x="10" y="{y}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#,
            escape(s.color),
            escape(s.label)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.0}" y="{:.0}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
        VIEWPORT - 10.0,
        VIEWPORT - 10.0,
        escape(title)
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
