use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::RectSurface;
use crate::exactnum::{NFElement, Rational};

#[derive(Clone, Debug)]
pub struct SvgOptions {
    /// Pixels per unit of physical length.
    pub unit: f64,
    pub margin: f64,
    /// Vertical gap between rows, in pixels.
    pub gap: f64,
    pub labels: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            unit: 240.0,
            margin: 24.0,
            gap: 28.0,
            labels: true,
        }
    }
}

fn approx(x: &NFElement) -> f64 {
    let eps = Rational::new(BigInt::from(1), BigInt::from(1_000_000));
    let (lo, hi) = x.approx(&eps);
    ((lo + hi) / Rational::from_integer(2.into())).to_f64().unwrap_or(0.0)
}

/// One row per horizontal cylinder, rectangles in cycle order. Edge `hK`
/// joins the right side of K to the left side of σ₁(K); edge `vK` joins the
/// top of K to the bottom of σ₂(K).
pub fn render_svg(s: &RectSurface, opts: &SvgOptions) -> String {
    let f = approx(s.scale()).sqrt() * opts.unit;
    let rows = s.sigma1().cycles();
    let mut body = String::new();
    let mut y = opts.margin;
    let mut max_x: f64 = 0.0;
    for row in &rows {
        let h = approx(&s.heights()[row[0]]) * f;
        let mut x = opts.margin;
        for &k in row {
            let w = approx(&s.widths()[k]) * f;
            let _ = writeln!(
                body,
                r##"  <rect x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{h:.3}" fill="#eef3fb" stroke="#203050" stroke-width="1"/>"##
            );
            if opts.labels {
                let cx = x + w / 2.0;
                let cy = y + h / 2.0;
                let left = s.sigma1().inverse().apply(k);
                let down = s.sigma2().inverse().apply(k);
                let _ = writeln!(body, r#"  <text x="{cx:.3}" y="{cy:.3}" font-size="14" text-anchor="middle">{}</text>"#, k + 1);
                let _ = writeln!(body, r#"  <text x="{:.3}" y="{:.3}" font-size="10" text-anchor="middle">v{}</text>"#, cx, y + 11.0, k + 1);
                let _ = writeln!(body, r#"  <text x="{:.3}" y="{:.3}" font-size="10" text-anchor="middle">v{}</text>"#, cx, y + h - 3.0, down + 1);
                let _ = writeln!(body, r#"  <text x="{:.3}" y="{:.3}" font-size="10" text-anchor="end">h{}</text>"#, x + w - 3.0, cy, k + 1);
                let _ = writeln!(body, r#"  <text x="{:.3}" y="{:.3}" font-size="10" text-anchor="start">h{}</text>"#, x + 3.0, cy, left + 1);
            }
            x += w;
        }
        max_x = max_x.max(x);
        y += h + opts.gap;
    }
    let width = max_x + opts.margin;
    let height = y - opts.gap + opts.margin;
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.3}\" height=\"{height:.3}\" viewBox=\"0 0 {width:.3} {height:.3}\" font-family=\"sans-serif\">\n{body}</svg>\n"
    )
}
