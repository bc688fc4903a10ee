//! Minimal SVG scatter plots of point clouds in the complex plane.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::cloud::Cloud;
use crate::util::fmt_real;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;
const PADDING: f64 = 0.1;

/// Plot bounds: bounding box of all points padded by 10% on each side.
fn bounds(points: impl Iterator<Item = Complex64>) -> (f64, f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in points {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    if !x0.is_finite() {
        return (-1.0, 1.0, -1.0, 1.0);
    }
    let pad = |lo: f64, hi: f64| {
        let span = hi - lo;
        let d = if span > 0.0 {
            PADDING * span
        } else {
            0.5 * lo.abs().max(1.0)
        };
        (lo - d, hi + d)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    (x0, x1, y0, y1)
}

/// Scatter of `points` with `markers` drawn as red squares on top.
pub fn scatter(points: &[Complex64], markers: &[Complex64], title: &str) -> String {
    let (x0, x1, y0, y1) = bounds(points.iter().chain(markers).copied());
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    if !title.is_empty() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            MARGIN / 2.0,
            escape(title)
        );
    }
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{y:.1}" text-anchor="{anchor}" font-size="10">{text}</text>"#
        );
    };
    let fmt = |v: f64| fmt_real((v * 1e4).round() / 1e4);
    label(&mut s, MARGIN, HEIGHT - MARGIN + 14.0, "start", fmt(x0));
    label(&mut s, WIDTH - MARGIN, HEIGHT - MARGIN + 14.0, "end", fmt(x1));
    label(&mut s, MARGIN - 4.0, HEIGHT - MARGIN, "end", fmt(y0));
    label(&mut s, MARGIN - 4.0, MARGIN + 8.0, "end", fmt(y1));
    label(&mut s, WIDTH / 2.0, HEIGHT - 12.0, "middle", "Re".into());
    label(&mut s, 14.0, HEIGHT / 2.0, "middle", "Im".into());

    let _ = writeln!(s, r#"<g fill="steelblue" fill-opacity="0.6">"#);
    for z in points {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5"/>"#, sx(z.re), sy(z.im));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="red" stroke="darkred">"#);
    for z in markers {
        let _ = writeln!(
            s,
            r#"<rect class="eig" x="{:.2}" y="{:.2}" width="6" height="6"/>"#,
            sx(z.re) - 3.0,
            sy(z.im) - 3.0
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

/// Scatter of a cloud with the unperturbed eigenvalues marked.
pub fn cloud_svg(cloud: &Cloud) -> String {
    let pts: Vec<Complex64> = cloud.points.iter().map(|p| p.z).collect();
    let title = format!(
        "{} {} eps={}",
        cloud.meta.problem,
        cloud.meta.kind,
        fmt_real(cloud.meta.epsilon)
    );
    scatter(&pts, &cloud.eigenvalues, title.trim())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
