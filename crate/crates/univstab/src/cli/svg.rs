//! SVG drawing of the fundamental cell: chambers shaded by orbit and the
//! walls clipped to the cell. Only `x`-dimensions 0, 1 and 2 are drawable.

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::universal_stability::{ChamberRep, WallFamily};
use std::fmt::Write;

const SIZE: f64 = 800.0;
const PALETTE: [&str; 8] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
];

fn to_f(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn family_name(f: &WallFamily) -> String {
    match f {
        WallFamily::C { label } => format!("C{label}"),
        WallFamily::D { ell, s } => format!("D({ell},{s})"),
    }
}

/// Intersection of `a x + b y + c = 0` with the rectangle `[0, w] x [0, h]`.
fn clip(coeffs: &[Q], c: Q, w: Q, h: Q) -> Option<((Q, Q), (Q, Q))> {
    let (a, b) = (coeffs[0], coeffs[1]);
    let zero = Q::from_integer(0);
    let mut pts: Vec<(Q, Q)> = Vec::new();
    if b != zero {
        for side in [zero, w] {
            let y = -(a * side + c) / b;
            if zero <= y && y <= h {
                pts.push((side, y));
            }
        }
    }
    if a != zero {
        for side in [zero, h] {
            let x = -(b * side + c) / a;
            if zero <= x && x <= w {
                pts.push((x, side));
            }
        }
    }
    pts.sort();
    pts.dedup();
    if pts.len() < 2 {
        return None;
    }
    Some((pts[0], *pts.last().unwrap()))
}

/// `widths` are the side lengths of the cell, one per `x` coordinate.
pub fn render(
    widths: &[i64],
    chambers: &[ChamberRep],
    orbit_of: &[usize],
    walls: &[(WallFamily, i64, Vec<Q>, Q)],
    dim: usize,
) -> Result<String> {
    if dim > 2 {
        return Err(Error::DimensionTooLarge(dim));
    }
    let w = widths.first().copied().unwrap_or(1);
    let h = if dim == 2 { widths[1] } else { w };
    let scale = SIZE / w.max(h) as f64;
    let height = h as f64 * scale;
    let px = |x: &Q| to_f(x) * scale;
    let py = |y: &Q| height - to_f(y) * scale;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{:.3}" height="{height:.3}" fill="#ffffff" stroke="#000000"/>"##,
        w as f64 * scale
    );
    for (idx, (ch, &orb)) in chambers.iter().zip(orbit_of).enumerate() {
        let color = PALETTE[orb % PALETTE.len()];
        match dim {
            0 => {
                let _ = writeln!(
                    s,
                    r##"<circle id="chamber-{idx}" data-orbit="{orb}" cx="400.000" cy="400.000" r="12" fill="{color}" stroke="#000000"/>"##
                );
            }
            1 => {
                let lo = ch.vertices.iter().map(|v| v[0]).min().unwrap();
                let hi = ch.vertices.iter().map(|v| v[0]).max().unwrap();
                let _ = writeln!(
                    s,
                    r#"<rect id="chamber-{idx}" data-orbit="{orb}" x="{:.3}" y="360.000" width="{:.3}" height="80.000" fill="{color}"/>"#,
                    px(&lo),
                    px(&hi) - px(&lo)
                );
            }
            _ => {
                let cx = to_f(&ch.phi.x[0]);
                let cy = to_f(&ch.phi.x[1]);
                let mut pts: Vec<&Vec<Q>> = ch.vertices.iter().collect();
                pts.sort_by(|p, q| {
                    let ap = (to_f(&p[1]) - cy).atan2(to_f(&p[0]) - cx);
                    let aq = (to_f(&q[1]) - cy).atan2(to_f(&q[0]) - cx);
                    ap.total_cmp(&aq)
                });
                let list: Vec<String> = pts
                    .iter()
                    .map(|p| format!("{:.3},{:.3}", px(&p[0]), py(&p[1])))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polygon id="chamber-{idx}" data-orbit="{orb}" points="{}" fill="{color}" stroke="none"/>"#,
                    list.join(" ")
                );
            }
        }
    }
    for (fam, k, coeffs, c) in walls {
        let name = family_name(fam);
        match dim {
            1 => {
                let x = -*c / coeffs[0];
                let _ = writeln!(
                    s,
                    r##"<line data-family="{name}" data-k="{k}" x1="{:.3}" y1="340.000" x2="{:.3}" y2="460.000" stroke="#000000"/>"##,
                    px(&x),
                    px(&x)
                );
            }
            2 => {
                if let Some((p, q)) = clip(coeffs, *c, Q::from_integer(w), Q::from_integer(h)) {
                    let _ = writeln!(
                        s,
                        r##"<line data-family="{name}" data-k="{k}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#000000"/>"##,
                        px(&p.0),
                        py(&p.1),
                        px(&q.0),
                        py(&q.1)
                    );
                }
            }
            _ => {}
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
