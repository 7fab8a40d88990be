//! Deterministic SVG output for decompositions and plans.
//!
//! World coordinates are written directly with the y axis flipped, so the
//! `viewBox` is in meters. Every number is printed with three decimals, which
//! keeps output byte-identical for identical inputs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::IoError;
use crate::decomposition::CellDecomposition;
use crate::geometry::Point;
use crate::planner::{CoveragePlan, Leg, Maneuver};
use crate::tracks::Track;

fn num(v: f64) -> String {
    // avoid "-0.000"
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn xy(p: Point) -> String {
    format!("{},{}", num(p.x), num(-p.y))
}

fn points(ps: &[Point]) -> String {
    ps.iter().map(|&p| xy(p)).collect::<Vec<_>>().join(" ")
}

fn maneuver_color(m: Maneuver) -> &'static str {
    match m {
        Maneuver::Omega => "#d95f02",
        Maneuver::Pi => "#1b9e77",
        Maneuver::Tee => "#7570b3",
        Maneuver::Travel => "#e7298a",
    }
}

/// Renders layers `free-space`, `obstacles`, `cells`, `tracks` and, when a
/// plan is given, `plan`. Plan legs appear in driving order; TRACK legs carry
/// a `data-track` attribute.
pub fn render_svg(d: &CellDecomposition, tracks: &[Track], plan: Option<&CoveragePlan>) -> String {
    let (lo, hi) = d.free.bounding_box();
    let size = (hi.x - lo.x).max(hi.y - lo.y).max(1e-6);
    let pad = 0.05 * size;
    let stroke = size / 400.0;
    let (vx, vy) = (lo.x - pad, -hi.y - pad);
    let (vw, vh) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(s, r##"<?xml version="1.0" encoding="UTF-8"?>"##);
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="800" height="{}">"##,
        num(vx),
        num(vy),
        num(vw),
        num(vh),
        num(800.0 * vh / vw)
    );

    let _ = writeln!(
        s,
        r##"<g id="free-space" fill="#eaf4e0" stroke="#333" stroke-width="{}">"##,
        num(stroke)
    );
    let _ = writeln!(
        s,
        r##"<polygon points="{}"/>"##,
        points(d.free.boundary().vertices())
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g id="obstacles" fill="#9a9a9a" stroke="#333" stroke-width="{}">"##,
        num(stroke)
    );
    for (i, o) in d.free.obstacles().iter().enumerate() {
        let _ = writeln!(
            s,
            r##"<polygon data-obstacle="{i}" points="{}"/>"##,
            points(o.vertices())
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g id="cells" fill="none" stroke="#555" stroke-width="{}" stroke-dasharray="{} {}">"##,
        num(stroke),
        num(4.0 * stroke),
        num(2.0 * stroke)
    );
    for c in &d.cells {
        let _ = writeln!(
            s,
            r##"<polygon data-cell="{}" points="{}"/>"##,
            c.id,
            points(c.polygon.vertices())
        );
    }
    let font = 0.03 * size;
    for c in &d.cells {
        let at = c.polygon.centroid();
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" font-size="{}" text-anchor="middle" stroke="none" fill="#222">c{}</text>"##,
            num(at.x),
            num(-at.y),
            num(font),
            c.id
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g id="tracks" stroke="#9ecae1" stroke-width="{}">"##,
        num(stroke)
    );
    for t in tracks {
        let _ = writeln!(
            s,
            r##"<line data-track="{}" x1="{}" y1="{}" x2="{}" y2="{}"/>"##,
            t.id,
            num(t.lower_end.x),
            num(-t.lower_end.y),
            num(t.upper_end.x),
            num(-t.upper_end.y)
        );
    }
    let _ = writeln!(s, "</g>");

    if let Some(plan) = plan {
        let _ = writeln!(
            s,
            r##"<g id="plan" fill="none" stroke-width="{}" stroke-linecap="round">"##,
            num(2.0 * stroke)
        );
        for leg in &plan.legs {
            match leg {
                Leg::Track { track, path, .. } => {
                    let _ = writeln!(
                        s,
                        r##"<polyline data-track="{track}" stroke="#08519c" points="{}"/>"##,
                        points(path)
                    );
                }
                Leg::Transit { maneuver, path, .. } => {
                    let _ = writeln!(
                        s,
                        r##"<polyline data-maneuver="{maneuver}" stroke="{}" points="{}"/>"##,
                        maneuver_color(*maneuver),
                        points(path)
                    );
                }
            }
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(
    path: &Path,
    d: &CellDecomposition,
    tracks: &[Track],
    plan: Option<&CoveragePlan>,
) -> Result<(), IoError> {
    fs::write(path, render_svg(d, tracks, plan)).map_err(|e| IoError::file(path, e))
}
