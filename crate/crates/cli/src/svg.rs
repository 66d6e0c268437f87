//! SVG picture of the hull of `e^{-iω_k}` on the unit circle.

use unidisc::geometry::{hull_of_phases, midpoint_quad, Point};
use unidisc::PhaseSet;

const SIZE: f64 = 420.0;
const CENTER: f64 = SIZE / 2.0;
const RADIUS: f64 = 160.0;

fn xy(p: Point) -> (f64, f64) {
    (CENTER + RADIUS * p[0], CENTER - RADIUS * p[1])
}

fn coord(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Renders points `P_k = e^{-iω_k}`, their hull, the side midpoints, the
/// origin and, when the origin is outside, the segment to the nearest point.
pub fn render_hull_svg(omega: &PhaseSet) -> String {
    let points = omega.negated();
    let hull = hull_of_phases(&points);
    let mut s = String::new();
    let w = |s: &mut String, line: String| {
        s.push_str(&line);
        s.push('\n');
    };
    w(&mut s, r#"<?xml version="1.0" encoding="UTF-8"?>"#.into());
    w(
        &mut s,
        format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
            SIZE
        ),
    );
    w(
        &mut s,
        format!(r##"<rect width="{0}" height="{0}" fill="#ffffff"/>"##, SIZE),
    );
    w(
        &mut s,
        format!(
            r##"<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="#888888" stroke-width="1"/>"##,
            c = coord(CENTER),
            r = coord(RADIUS)
        ),
    );

    let corners: Vec<(f64, f64)> = hull.vertices.iter().map(|v| xy(v.cartesian())).collect();
    match corners.len() {
        0 | 1 => {}
        2 => w(
            &mut s,
            format!(
                r##"<line class="hull" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#1f5fbf" stroke-width="2"/>"##,
                coord(corners[0].0),
                coord(corners[0].1),
                coord(corners[1].0),
                coord(corners[1].1)
            ),
        ),
        _ => {
            let pts: Vec<String> = corners
                .iter()
                .map(|(x, y)| format!("{},{}", coord(*x), coord(*y)))
                .collect();
            w(
                &mut s,
                format!(
                    r##"<polygon class="hull" points="{}" fill="#1f5fbf" fill-opacity="0.12" stroke="#1f5fbf" stroke-width="2"/>"##,
                    pts.join(" ")
                ),
            );
        }
    }

    if hull.vertices.len() >= 3 {
        if let Ok(mids) = midpoint_quad(&hull) {
            for (i, m) in mids.iter().enumerate() {
                let (x, y) = xy(*m);
                w(
                    &mut s,
                    format!(
                        r##"<circle class="midpoint" cx="{}" cy="{}" r="3" fill="#d08000"/>"##,
                        coord(x),
                        coord(y)
                    ),
                );
                w(
                    &mut s,
                    format!(
                        r##"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="#d08000">M{}</text>"##,
                        coord(x + 5.0),
                        coord(y + 12.0),
                        i + 1
                    ),
                );
            }
        }
    }

    for (v, members) in hull.vertices.iter().zip(&hull.members) {
        let (x, y) = xy(v.cartesian());
        let label: Vec<String> = members.iter().map(|k| format!("P{}", k + 1)).collect();
        let (lx, ly) = xy([1.12 * v.phase.cos(), 1.12 * v.phase.sin()]);
        w(
            &mut s,
            format!(
                r##"<circle class="point" cx="{}" cy="{}" r="4" fill="#1f5fbf"/>"##,
                coord(x),
                coord(y)
            ),
        );
        w(
            &mut s,
            format!(
                r##"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" fill="#1f5fbf">{}</text>"##,
                coord(lx),
                coord(ly + 4.0),
                label.join(",")
            ),
        );
    }

    if !hull.contains_origin {
        let (x, y) = xy(hull.nearest_point);
        w(
            &mut s,
            format!(
                r##"<line class="distance" x1="{c}" y1="{c}" x2="{}" y2="{}" stroke="#c02020" stroke-width="1.5" stroke-dasharray="4 3"/>"##,
                coord(x),
                coord(y),
                c = coord(CENTER)
            ),
        );
    }
    w(
        &mut s,
        format!(
            r##"<circle class="origin" cx="{c}" cy="{c}" r="3" fill="#000000"/>"##,
            c = coord(CENTER)
        ),
    );
    w(
        &mut s,
        format!(
            r##"<text x="{}" y="{}" font-family="sans-serif" font-size="13">O</text>"##,
            coord(CENTER + 6.0),
            coord(CENTER - 6.0)
        ),
    );
    let caption = format!("distance {:.6}", hull.min_distance);
    w(
        &mut s,
        format!(
            r##"<text x="10" y="{}" font-family="sans-serif" font-size="12" fill="#444444">{}</text>"##,
            coord(SIZE - 10.0),
            caption
        ),
    );
    w(&mut s, "</svg>".into());
    s
}
