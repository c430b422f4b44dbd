//! Deterministic SVG rendering of a nested pair and an optional triangle.

use std::fmt::Write;

use super::{NestedPair, Point, Polygon2, Triangle};
use crate::rational::to_f64;

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let mut s = format!("{:.*}", decimals, v);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn coords(points: &[Point]) -> String {
    points
        .iter()
        .map(|p| format!("{},{}", fmt_sig(to_f64(&p.x)), fmt_sig(-to_f64(&p.y))))
        .collect::<Vec<_>>()
        .join(" ")
}

fn shape(out: &mut String, poly: &[Point], style: &str) {
    if poly.len() == 1 {
        let (x, y) = poly[0].to_f64();
        writeln!(
            out,
            r#"  <circle cx="{}" cy="{}" r="0.5%" {style}/>"#,
            fmt_sig(x),
            fmt_sig(-y)
        )
        .unwrap();
    } else {
        writeln!(out, r#"  <polygon points="{}" {style}/>"#, coords(poly)).unwrap();
    }
}

/// `P` filled red at 40% opacity, `Q` outlined blue, `Δ` outlined green.
/// The view box is the bounding box of `Q` padded by 10% on each side.
pub fn render_svg(pair: &NestedPair, triangle: Option<&Triangle>) -> String {
    let outer: &Polygon2 = &pair.outer;
    let (lo, hi) = outer.bbox();
    let (x0, y0) = lo.to_f64();
    let (x1, y1) = hi.to_f64();
    let (w, h) = ((x1 - x0).max(1e-12), (y1 - y0).max(1e-12));
    let (px, py) = (0.1 * w, 0.1 * h);
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="480" height="480">"#,
        fmt_sig(x0 - px),
        fmt_sig(-y1 - py),
        fmt_sig(w + 2.0 * px),
        fmt_sig(h + 2.0 * py)
    )
    .unwrap();
    let stroke = r#"stroke-width="1.5" vector-effect="non-scaling-stroke""#;
    shape(
        &mut s,
        outer.vertices(),
        &format!(r#"fill="none" stroke="blue" {stroke}"#),
    );
    shape(
        &mut s,
        pair.inner.vertices(),
        &format!(r#"fill="red" fill-opacity="0.4" stroke="red" {stroke}"#),
    );
    if let Some(t) = triangle {
        shape(
            &mut s,
            t.vertices(),
            &format!(r#"fill="none" stroke="green" {stroke}"#),
        );
    }
    s.push_str("</svg>\n");
    s
}
