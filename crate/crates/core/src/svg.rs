//! Minimal static SVG renderings. For looking at, not for measuring.

use num_complex::Complex64;
use std::fmt::Write;

use crate::brown_map::DensityField;

const W: f64 = 800.0;
const H: f64 = 500.0;
const PAD: f64 = 40.0;

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(a, b): (f64, f64)| if b > a { (a, b) } else { (a - 1.0, a + 1.0) };
        Self { x: widen(x), y: widen(y) }
    }

    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD - (y - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * PAD)
    }
}

fn open(title: &str, comments: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    for c in comments {
        let _ = writeln!(s, "<!-- {} -->", c.replace("--", "- -"));
    }
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{PAD}" y="24" font-family="sans-serif" font-size="14">{title}</text>"#);
    s
}

fn axes(s: &mut String, f: &Frame) {
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="{}" font-family="sans-serif" font-size="11">{:.3}</text><text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{:.3}</text>"#,
        H - PAD + 14.0,
        f.x.0,
        W - PAD,
        H - PAD + 14.0,
        f.x.1
    );
}

fn polyline(s: &mut String, f: &Frame, pts: &[(f64, f64)], color: &str) {
    let mut d = String::new();
    for &(x, y) in pts {
        let _ = write!(d, "{:.2},{:.2} ", f.px(x), f.py(y));
    }
    let _ = writeln!(s, r#"<polyline points="{d}" fill="none" stroke="{color}" stroke-width="1.2"/>"#);
}

/// Grayscale strips of `w` over `Ω`, clipped to `u_range`, with the boundary curve.
pub fn heatmap(field: &DensityField, u_range: (f64, f64), comments: &[String]) -> String {
    let vmax = field.phi.iter().cloned().fold(0.0, f64::max).max(1e-12);
    let f = Frame::new(u_range, (-1.1 * vmax, 1.1 * vmax));
    let wmax = field.w.iter().flatten().cloned().fold(0.0, f64::max).max(1e-300);
    let mut s = open("Brown measure density", comments);
    for &(a, b) in &field.component_ranges {
        for i in a..b - 1 {
            let (u1, u2) = (field.u_grid[i], field.u_grid[i + 1]);
            if u2 < u_range.0 || u1 > u_range.1 {
                continue;
            }
            let phi = 0.5 * (field.phi[i] + field.phi[i + 1]);
            let w = match (field.w[i], field.w[i + 1]) {
                (Some(x), Some(y)) => 0.5 * (x + y),
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => continue,
            };
            let g = (255.0 * (1.0 - w / wmax)).round().clamp(0.0, 255.0) as u8;
            let (x1, x2) = (f.px(u1.max(u_range.0)), f.px(u2.min(u_range.1)));
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({g},{g},{g})"/>"#,
                x1,
                f.py(phi),
                (x2 - x1).max(0.5),
                f.py(-phi) - f.py(phi)
            );
        }
    }
    for &(a, b) in &field.component_ranges {
        let upper: Vec<(f64, f64)> = (a..b).map(|i| (field.u_grid[i], field.phi[i])).collect();
        let lower: Vec<(f64, f64)> = upper.iter().map(|&(u, p)| (u, -p)).collect();
        polyline(&mut s, &f, &upper, "red");
        polyline(&mut s, &f, &lower, "red");
    }
    axes(&mut s, &f);
    s.push_str("</svg>\n");
    s
}

/// Scatter plot of points, optionally over a boundary curve `(u, ±φ)`.
pub fn scatter(points: &[Complex64], boundary: Option<&[(f64, f64)]>, window: ((f64, f64), (f64, f64)), comments: &[String]) -> String {
    let f = Frame::new(window.0, window.1);
    let mut s = open("Eigenvalues", comments);
    for z in points {
        if z.re < f.x.0 || z.re > f.x.1 || z.im < f.y.0 || z.im > f.y.1 {
            continue;
        }
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1" fill="black"/>"#, f.px(z.re), f.py(z.im));
    }
    if let Some(b) = boundary {
        let inside: Vec<(f64, f64)> = b.iter().copied().filter(|p| p.0 >= f.x.0 && p.0 <= f.x.1).collect();
        polyline(&mut s, &f, &inside, "red");
        let lower: Vec<(f64, f64)> = inside.iter().map(|&(u, p)| (u, -p)).collect();
        polyline(&mut s, &f, &lower, "red");
    }
    axes(&mut s, &f);
    s.push_str("</svg>\n");
    s
}

/// Line plot of `y` against `x`.
pub fn line_plot(title: &str, pts: &[(f64, f64)], comments: &[String]) -> String {
    let xr = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.0), a.1.max(p.0)));
    let ymax = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let ymin = pts.iter().map(|p| p.1).fold(0.0, f64::min);
    let f = Frame::new(xr, (ymin, 1.05 * ymax));
    let mut s = open(title, comments);
    polyline(&mut s, &f, pts, "black");
    axes(&mut s, &f);
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scatter_is_well_formed() {
        let s = scatter(&[Complex64::new(0.0, 0.0)], Some(&[(-1.0, 0.0), (0.0, 1.0), (1.0, 0.0)]), ((-2.0, 2.0), (-2.0, 2.0)), &["seed 1".into()]);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("<circle") && s.contains("<!-- seed 1 -->"));
    }
}
