//! Static SVG figure of a sampled numerical range.

use std::fmt::Write as _;

use num_complex::Complex64;
use numrad_core::range::{RangeBoundary, RangeShape};

pub const SIZE: f64 = 600.0;
/// Fraction of the viewport left empty on each side.
pub const MARGIN: f64 = 0.1;

/// Maps the complex plane to viewport pixels with equal scale on both axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    center: Complex64,
    /// Pixels per unit.
    scale: f64,
}

impl Viewport {
    /// Smallest square window holding every point with the margin applied.
    pub fn fit(points: &[Complex64]) -> Self {
        let (mut lo, mut hi) = (Complex64::new(f64::MAX, f64::MAX), Complex64::new(f64::MIN, f64::MIN));
        for p in points {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        if points.is_empty() {
            (lo, hi) = (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0));
        }
        let center = (lo + hi) * 0.5;
        let mut half = 0.5 * (hi.re - lo.re).max(hi.im - lo.im);
        if half <= 1e-12 * center.norm().max(1.0) {
            // a single point: show a unit-sized neighbourhood
            half = 0.5 * center.norm().max(1.0);
        }
        Self {
            center,
            scale: SIZE * (1.0 - 2.0 * MARGIN) / (2.0 * half),
        }
    }

    pub fn to_px(&self, z: Complex64) -> (f64, f64) {
        let d = z - self.center;
        (SIZE / 2.0 + d.re * self.scale, SIZE / 2.0 - d.im * self.scale)
    }

    /// The visible window as (min re, max re, min im, max im).
    fn window(&self) -> (f64, f64, f64, f64) {
        let h = SIZE / 2.0 / self.scale;
        (self.center.re - h, self.center.re + h, self.center.im - h, self.center.im + h)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A tick spacing of 1, 2 or 5 times a power of ten giving about five ticks.
fn tick_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let p = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * p).find(|s| *s >= raw).unwrap_or(10.0 * p)
}

pub fn render_svg(title: &str, boundary: &RangeBoundary, eigenvalues: &[Complex64]) -> String {
    let pts = boundary.inner_polygon();
    let mut all = pts.clone();
    all.extend_from_slice(eigenvalues);
    let vp = Viewport::fit(&all);
    let (x0, x1, y0, y1) = vp.window();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);

    // axes through the origin, clamped to the window edge
    let (ox, oy) = vp.to_px(Complex64::new(0.0, 0.0));
    let (ax, ay) = (ox.clamp(0.0, SIZE), oy.clamp(0.0, SIZE));
    let _ = writeln!(s, r##"<g stroke="#888" stroke-width="1" font-family="sans-serif" font-size="10" fill="#444">"##);
    let _ = writeln!(s, r#"<line x1="0" y1="{ay:.2}" x2="{SIZE}" y2="{ay:.2}"/>"#);
    let _ = writeln!(s, r#"<line x1="{ax:.2}" y1="0" x2="{ax:.2}" y2="{SIZE}"/>"#);
    let step = tick_step(x1 - x0);
    let mut k = (x0 / step).ceil() as i64;
    while k as f64 * step <= x1 {
        let v = k as f64 * step;
        let (px, _) = vp.to_px(Complex64::new(v, 0.0));
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}"/>"#, ay - 3.0, ay + 3.0);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" stroke="none" text-anchor="middle">{}</text>"#, ay + 14.0, label(v));
        k += 1;
    }
    let mut k = (y0 / step).ceil() as i64;
    while k as f64 * step <= y1 {
        let v = k as f64 * step;
        let (_, py) = vp.to_px(Complex64::new(0.0, v));
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}"/>"#, ax - 3.0, ax + 3.0);
        if k != 0 {
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" stroke="none">{}i</text>"#, ax + 5.0, py + 3.0, label(v));
        }
        k += 1;
    }
    let _ = writeln!(s, "</g>");

    match boundary.shape {
        RangeShape::Region => {
            let d: Vec<String> = pts
                .iter()
                .map(|&z| {
                    let (x, y) = vp.to_px(z);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                s,
                r##"<polygon points="{}" fill="#4a7fc1" fill-opacity="0.25" stroke="#1f4e8c" stroke-width="1.5"/>"##,
                d.join(" ")
            );
        }
        RangeShape::Segment { start, end } => {
            let ((xa, ya), (xb, yb)) = (vp.to_px(start), vp.to_px(end));
            let _ = writeln!(
                s,
                r##"<line x1="{xa:.2}" y1="{ya:.2}" x2="{xb:.2}" y2="{yb:.2}" stroke="#1f4e8c" stroke-width="2"/>"##
            );
        }
        RangeShape::Point(c) => {
            let (x, y) = vp.to_px(c);
            let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#1f4e8c"/>"##);
        }
    }
    for &z in eigenvalues {
        let (x, y) = vp.to_px(z);
        let _ = writeln!(
            s,
            r##"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="#c0392b" stroke-width="1.5"/>"##,
            x - 4.0,
            y - 4.0,
            x + 4.0,
            y + 4.0,
            x - 4.0,
            y + 4.0,
            x + 4.0,
            y - 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="18" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        SIZE / 2.0,
        escape(title)
    );
    s.push_str("</svg>\n");
    s
}

fn label(v: f64) -> String {
    let r = (v * 1e9).round() / 1e9;
    format!("{}", if r == 0.0 { 0.0 } else { r })
}
