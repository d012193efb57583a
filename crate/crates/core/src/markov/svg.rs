//! Schematic drawing of a Markov partition: rectangles side by side, with
//! ticks where the ξ and η segments of the gluing graph begin and end.

use std::fmt::Write;

use super::graph::EdgeKind;
use super::partition::MarkovPartition;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 24.0;
const GAP: f64 = 12.0;

/// Horizontal and vertical scales differ so that thin rectangles stay
/// visible; the drawing is not to scale.
pub fn render_partition_svg(p: &MarkovPartition) -> String {
    let widths: Vec<f64> = p.widths().iter().map(|w| w.to_f64()).collect();
    let heights: Vec<f64> = p.heights().iter().map(|h| h.to_f64()).collect();
    let sx = WIDTH / widths.iter().sum::<f64>();
    let sy = HEIGHT / heights.iter().cloned().fold(f64::MIN, f64::max);
    let mut left = Vec::with_capacity(widths.len());
    let mut x = MARGIN;
    for w in &widths {
        left.push(x);
        x += w * sx + GAP;
    }
    let base = MARGIN + HEIGHT;
    let mut body = String::new();
    for (i, (w, h)) in widths.iter().zip(&heights).enumerate() {
        let (rw, rh) = (w * sx, h * sy);
        let _ = writeln!(
            body,
            r##"  <rect x="{:.3}" y="{:.3}" width="{rw:.3}" height="{rh:.3}" fill="#eef3fb" stroke="#203050" stroke-width="1"/>"##,
            left[i],
            base - rh
        );
        let _ = writeln!(
            body,
            r#"  <text x="{:.3}" y="{:.3}" font-size="12" text-anchor="middle">P{}</text>"#,
            left[i] + rw / 2.0,
            base + 14.0,
            i + 1
        );
    }
    for e in &p.graph().edges {
        let (Some(len), Some(offs)) = (&e.length, &e.offsets) else { continue };
        let r = e.labels[0];
        let start = offs[0].to_f64();
        for t in [start, start + len.to_f64()] {
            let line = match e.kind {
                EdgeKind::Xi => {
                    let x = left[r] + t * sx;
                    let y = base - heights[r] * sy;
                    (x, y - 4.0, x, y + 4.0, "#c03030")
                }
                EdgeKind::Eta => {
                    let x = left[r] + widths[r] * sx;
                    let y = base - t * sy;
                    (x - 4.0, y, x + 4.0, y, "#3070c0")
                }
            };
            let _ = writeln!(
                body,
                r#"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="1.5"/>"#,
                line.0, line.1, line.2, line.3, line.4
            );
        }
    }
    let total_w = x - GAP + MARGIN;
    let total_h = base + 2.0 * MARGIN;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_w:.3}\" height=\"{total_h:.3}\" viewBox=\"0 0 {total_w:.3} {total_h:.3}\">\n{body}</svg>\n"
    )
}
