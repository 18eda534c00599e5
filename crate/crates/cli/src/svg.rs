//! SVG drawing of the unfolded Chamanara square.

use std::fmt::Write;

use seqgraph_core::embedding::{
    Axis, ChamanaraEmbedding, Dyadic, Point, RouteCase, SegmentId, SegmentMap, Square,
};
use seqgraph_core::Result;

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 40.0;
const GRID_COLOR: &str = "#00a5c8";
const REROUTE_COLOR: &str = "#c8329b";

struct Frame {
    square: Square,
    scale: f64,
}

impl Frame {
    fn x(&self, x: Dyadic) -> f64 {
        MARGIN + (x - self.square.low()).to_f64() * self.scale
    }

    fn y(&self, y: Dyadic) -> f64 {
        MARGIN + (self.square.high() - y).to_f64() * self.scale
    }

    fn point(&self, p: Point) -> (f64, f64) {
        (self.x(p.x), self.y(p.y))
    }
}

/// The square with its glued segments (partners share a tick count), the
/// lattice vertices, grid-following routes and the two corner reroutes.
pub fn chamanara_svg(e: &ChamanaraEmbedding) -> Result<String> {
    let square = e.square()?;
    let frame = Frame {
        square,
        scale: (CANVAS - 2.0 * MARGIN) / square.size() as f64,
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(s, "<title>van der Corput graph G_{} on the Chamanara square</title>", e.n);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let side = CANVAS - 2.0 * MARGIN;
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{side}" height="{side}" fill="none" stroke="black" stroke-width="1.5"/>"#
    );

    for k in 1..=e.m + 1 {
        for id in [SegmentId::h(k), SegmentId::v(k)] {
            draw_segment(&mut s, &frame, &square.segment(id)?);
        }
    }

    for r in &e.routes {
        let (color, class) = match r.case {
            RouteCase::Corner => (REROUTE_COLOR, "reroute"),
            _ => (GRID_COLOR, "grid"),
        };
        for piece in &r.pieces {
            let points: Vec<String> = piece
                .iter()
                .map(|p| {
                    let (x, y) = frame.point(*p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline class="{class}" data-edge="{}" points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                r.edge,
                points.join(" ")
            );
        }
    }

    let radius = (frame.scale / 10.0).clamp(1.5, 4.0);
    for (i, p) in e.positions.iter().enumerate() {
        let (x, y) = frame.point(*p);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius:.2}" fill="black"/>"#);
        if e.m <= 2 {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">{i}</text>"#,
                x + 5.0,
                y - 5.0
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Boundary marks at both ends of each copy and `k` ticks at each midpoint.
fn draw_segment(s: &mut String, frame: &Frame, seg: &SegmentMap) {
    let square = frame.square;
    let horizontal = seg.id.axis == Axis::Horizontal;
    for (start, coord) in [
        (seg.far_start, square.high()),
        (seg.near_start, square.low()),
    ] {
        let end = start + seg.length;
        let mid = (frame_along(frame, horizontal, start) + frame_along(frame, horizontal, end)) / 2.0;
        let fixed = if horizontal { frame.y(coord) } else { frame.x(coord) };
        for t in [start, end] {
            mark(s, horizontal, frame_along(frame, horizontal, t), fixed, 5.0, "black");
        }
        let k = seg.id.k as f64;
        for j in 0..seg.id.k {
            let offset = (j as f64 - (k - 1.0) / 2.0) * 3.0;
            mark(s, horizontal, mid + offset, fixed, 4.0, "#555555");
        }
    }
}

fn frame_along(frame: &Frame, horizontal: bool, t: Dyadic) -> f64 {
    if horizontal {
        frame.x(t)
    } else {
        frame.y(t)
    }
}

/// Short stroke across the side at position `along`.
fn mark(s: &mut String, horizontal: bool, along: f64, fixed: f64, half: f64, color: &str) {
    let (x1, y1, x2, y2) = if horizontal {
        (along, fixed - half, along, fixed + half)
    } else {
        (fixed - half, along, fixed + half, along)
    };
    let _ = writeln!(
        s,
        r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="1"/>"#
    );
}
