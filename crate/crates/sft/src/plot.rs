//! Static SVG rendering of a case: target outlines, the two optima, and the
//! wind arrow. Self-contained vector output, no external assets.

use crate::error::Result;
use crate::experiment::CaseReport;
use crate::scenario::Scenario;
use crate::sets::ReferenceSet;
use crate::vec2::Vec2;
use std::fmt::Write as _;
use std::path::Path;

const WIDTH: f64 = 800.0;
/// World-to-plot magnification of the wind vector so m/s-scale arrows stay
/// visible next to km-scale geometry.
const WIND_ARROW_SCALE: f64 = 50.0;

struct Frame {
    lo: Vec2,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(lo: Vec2, hi: Vec2) -> Frame {
        let span = hi - lo;
        let scale = WIDTH / span.x;
        Frame {
            lo,
            scale,
            height: span.y * scale,
        }
    }

    /// World to SVG coordinates (y grows downward in SVG).
    fn map(&self, p: Vec2) -> (f64, f64) {
        (
            (p.x - self.lo.x) * self.scale,
            self.height - (p.y - self.lo.y) * self.scale,
        )
    }
}

/// Renders the scene as an SVG document.
pub fn render_svg(scenario: &Scenario, report: &CaseReport) -> String {
    // frame: targets plus both optima, padded 8%
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for t in &scenario.targets {
        let (l, h) = t.set.bbox();
        lo = lo.min(l);
        hi = hi.max(h);
    }
    lo = lo.min(report.x_neglected).min(report.x_included);
    hi = hi.max(report.x_neglected).max(report.x_included);
    let pad = (hi - lo) * 0.08 + Vec2::new(1.0, 1.0);
    let frame = Frame::new(lo - pad, hi + pad);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{:.0}" viewBox="0 0 {WIDTH} {:.0}">"#,
        frame.height, frame.height
    );
    let _ = writeln!(
        svg,
        r#"  <rect width="100%" height="100%" fill="white"/>"#
    );

    for t in &scenario.targets {
        match t.set {
            ReferenceSet::Disk { center, radius } => {
                let (cx, cy) = frame.map(center);
                let _ = writeln!(
                    svg,
                    r#"  <circle class="target" cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="black" stroke-width="1.5"/>"#,
                    radius * frame.scale
                );
            }
            ReferenceSet::Rect { .. } => {
                let vs = t.set.vertices().expect("boxes have vertices");
                // closed 4-vertex outline, counter-clockwise
                let order = [vs[0], vs[1], vs[3], vs[2]];
                let pts: Vec<String> = order
                    .iter()
                    .map(|&v| {
                        let (x, y) = frame.map(v);
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                let _ = writeln!(
                    svg,
                    r#"  <polygon class="target" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
                    pts.join(" ")
                );
            }
        }
    }

    marker(
        &mut svg,
        &frame,
        report.x_neglected,
        "wind neglected",
        "#b22222",
    );
    marker(
        &mut svg,
        &frame,
        report.x_included,
        "wind included",
        "#1e6eb4",
    );

    if scenario.wind != Vec2::ZERO {
        wind_arrow(&mut svg, &frame, scenario.wind);
    }

    let _ = writeln!(
        svg,
        r#"  <text class="caption" x="8" y="{:.0}" font-size="12" font-family="sans-serif">{}: Z_N = {:.0} s, Z_I = {:.0} s</text>"#,
        frame.height - 8.0,
        scenario.name,
        report.z_neglected,
        report.z_included
    );
    svg.push_str("</svg>\n");
    svg
}

fn marker(svg: &mut String, frame: &Frame, p: Vec2, label: &str, color: &str) {
    let (x, y) = frame.map(p);
    let s = 6.0;
    let _ = writeln!(
        svg,
        r#"  <g class="marker"><path d="M {x0:.2} {y:.2} L {x1:.2} {y:.2} M {x:.2} {y0:.2} L {x:.2} {y1:.2}" stroke="{color}" stroke-width="2"/><text x="{tx:.2}" y="{ty:.2}" font-size="12" font-family="sans-serif" fill="{color}">{label}</text></g>"#,
        x0 = x - s,
        x1 = x + s,
        y0 = y - s,
        y1 = y + s,
        tx = x + s + 2.0,
        ty = y - s,
    );
}

fn wind_arrow(svg: &mut String, frame: &Frame, wind: Vec2) {
    // anchored near the top-left corner of the frame
    let (ax, ay) = (30.0, 30.0);
    let tip = (
        ax + wind.x * WIND_ARROW_SCALE * frame.scale,
        ay - wind.y * WIND_ARROW_SCALE * frame.scale,
    );
    let dir = Vec2::new(tip.0 - ax, tip.1 - ay);
    let n = dir.norm().max(1e-12);
    let u = dir * (1.0 / n);
    let left = Vec2::new(-u.y, u.x);
    let head = 6.0;
    let b1 = Vec2::new(tip.0, tip.1) - u * head + left * (head / 2.0);
    let b2 = Vec2::new(tip.0, tip.1) - u * head - left * (head / 2.0);
    let _ = writeln!(
        svg,
        r#"  <path class="wind-arrow" d="M {ax:.2} {ay:.2} L {tx:.2} {ty:.2} L {b1x:.2} {b1y:.2} M {tx:.2} {ty:.2} L {b2x:.2} {b2y:.2}" stroke="black" stroke-width="2" fill="none"/>"#,
        tx = tip.0,
        ty = tip.1,
        b1x = b1.x,
        b1y = b1.y,
        b2x = b2.x,
        b2y = b2.y,
    );
}

/// Renders and writes the SVG atomically.
pub fn emit_plot(scenario: &Scenario, report: &CaseReport, out: &Path) -> Result<()> {
    crate::experiment::atomic_write(out, render_svg(scenario, report).as_bytes())
}
