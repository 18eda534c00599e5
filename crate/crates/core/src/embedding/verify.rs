//! Exact combinatorial check of a Chamanara embedding.
//!
//! All coordinates are scaled to a common power-of-two denominator so every
//! geometric predicate runs on integers.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::bits::psi;
use super::chamanara::{route_case, ChamanaraEmbedding, RouteCase, SegmentId, Square};
use super::geometry::{Dyadic, Point};
use crate::error::Result;
use crate::graph::{Edge, EdgeId, SequenceGraph};

/// One reason the embedding fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    PositionMismatch {
        vertex: usize,
        expected: Point,
        found: Point,
    },
    UnknownEdge {
        edge: EdgeId,
    },
    DuplicateRoute {
        edge: EdgeId,
    },
    MissingRoute {
        edge: EdgeId,
    },
    WrongEndpoints {
        edge: EdgeId,
        from: usize,
        to: usize,
    },
    CaseMismatch {
        edge: EdgeId,
        expected: RouteCase,
        found: RouteCase,
    },
    MalformedRoute {
        edge: EdgeId,
        reason: String,
    },
    EndpointMismatch {
        edge: EdgeId,
        expected: Point,
        found: Point,
    },
    OutsideSquare {
        edge: EdgeId,
        point: Point,
    },
    BadCrossing {
        edge: EdgeId,
        segment: SegmentId,
        reason: String,
    },
    /// Two crossings use the same point of an identified segment.
    SharedBoundaryPoint {
        segment: SegmentId,
        offset: Dyadic,
        first: EdgeId,
        second: EdgeId,
    },
    /// A route meets a side of the square away from a recorded crossing.
    BoundaryTouch {
        edge: EdgeId,
        point: Point,
    },
    OffGrid {
        edge: EdgeId,
        from: Point,
        to: Point,
    },
    CornerRegion {
        edge: EdgeId,
        point: Point,
    },
    CornerCount {
        found: usize,
    },
    /// A route passes through a lattice point other than its own ends.
    LatticeTouch {
        edge: EdgeId,
        point: Point,
    },
    /// Two routes run along a common segment of positive length.
    SharedSegment {
        first: EdgeId,
        second: EdgeId,
        from: Point,
        to: Point,
    },
    /// Two routes meet at a point that is not a common endpoint.
    Touch {
        first: EdgeId,
        second: EdgeId,
        point: Point,
    },
    /// Two routes cross transversally; `near` is approximate.
    Crossing {
        first: EdgeId,
        second: EdgeId,
        near: [f64; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub verified: bool,
    pub m: u32,
    pub n: usize,
    /// Routes per case, indexed by case number minus one.
    pub case_counts: [usize; 5],
    pub routes_checked: usize,
    pub segments_checked: usize,
    /// Every violation found; empty exactly when `verified`.
    pub certificate: Vec<Violation>,
}

/// Checks `e` against a freshly built van der Corput graph on `4^m`
/// vertices.
pub fn verify_embedding(e: &ChamanaraEmbedding) -> Result<Verification> {
    let graph = super::chamanara::vdc_graph(e.m)?;
    verify_embedding_against(e, &graph)
}

pub fn verify_embedding_against(e: &ChamanaraEmbedding, g: &SequenceGraph) -> Result<Verification> {
    let square = Square::new(e.m)?;
    let mut out = Vec::new();
    let n = g.n();

    for v in 0..n {
        let (x, y) = psi(v as u64, e.m)?;
        let expected = Point::lattice(x, y);
        match e.positions.get(v) {
            Some(&found) if found == expected => {}
            found => out.push(Violation::PositionMismatch {
                vertex: v,
                expected,
                found: found.copied().unwrap_or(expected),
            }),
        }
    }
    let position = |v: usize| -> Point {
        psi(v as u64, e.m)
            .map(|(x, y)| Point::lattice(x, y))
            .unwrap_or(Point::lattice(0, 0))
    };

    let edges: BTreeMap<EdgeId, &Edge> = g.edges().map(|edge| (edge.id, edge)).collect();
    let mut seen = BTreeSet::new();
    let mut case_counts = [0usize; 5];
    let mut sound = Vec::new();
    for (idx, r) in e.routes.iter().enumerate() {
        let Some(edge) = edges.get(&r.edge) else {
            out.push(Violation::UnknownEdge { edge: r.edge });
            continue;
        };
        if !seen.insert(r.edge) {
            out.push(Violation::DuplicateRoute { edge: r.edge });
            continue;
        }
        case_counts[r.case.number() as usize - 1] += 1;
        if (r.from, r.to) != (edge.u, edge.v) && (r.from, r.to) != (edge.v, edge.u) {
            out.push(Violation::WrongEndpoints {
                edge: r.edge,
                from: r.from,
                to: r.to,
            });
            continue;
        }
        let expected = route_case(edge, e.m)?;
        if expected != r.case {
            out.push(Violation::CaseMismatch {
                edge: r.edge,
                expected,
                found: r.case,
            });
        }
        if let Some(reason) = malformed(r) {
            out.push(Violation::MalformedRoute {
                edge: r.edge,
                reason,
            });
            continue;
        }
        sound.push(idx);
    }
    for id in edges.keys() {
        if !seen.contains(id) {
            out.push(Violation::MissingRoute { edge: *id });
        }
    }

    let mut boundary: BTreeMap<(SegmentId, Dyadic), EdgeId> = BTreeMap::new();
    let corner_radius = Dyadic::new(1, 1) + square.epsilon();
    let corners = [position(0), position(n - 1)];
    let mut corner_routes = 0;
    for &idx in &sound {
        let r = &e.routes[idx];
        let first = r.pieces[0][0];
        let last = *r.pieces.last().and_then(|p| p.last()).unwrap_or(&first);
        for (expected, found) in [(position(r.from), first), (position(r.to), last)] {
            if expected != found {
                out.push(Violation::EndpointMismatch {
                    edge: r.edge,
                    expected,
                    found,
                });
            }
        }
        for p in r.points() {
            if !square.contains(*p) {
                out.push(Violation::OutsideSquare {
                    edge: r.edge,
                    point: *p,
                });
            }
        }
        check_crossings(&square, r, &mut boundary, &mut out);
        check_boundary_touches(&square, r, &mut out);

        if r.case == RouteCase::Corner {
            corner_routes += 1;
            let ends = BTreeSet::from([r.from, r.to]);
            if ends != BTreeSet::from([0, n - 1]) {
                out.push(Violation::WrongEndpoints {
                    edge: r.edge,
                    from: r.from,
                    to: r.to,
                });
            }
            for p in r.points() {
                let near = corners.iter().any(|c| {
                    (p.x - c.x).abs() <= corner_radius && (p.y - c.y).abs() <= corner_radius
                });
                if !near {
                    out.push(Violation::CornerRegion {
                        edge: r.edge,
                        point: *p,
                    });
                }
            }
        } else {
            for (a, b) in r.segments() {
                let vertical = a.x == b.x && a.x.is_integer();
                let horizontal = a.y == b.y && a.y.is_integer();
                if !vertical && !horizontal {
                    out.push(Violation::OffGrid {
                        edge: r.edge,
                        from: a,
                        to: b,
                    });
                }
            }
        }
    }
    if corner_routes != 2 {
        out.push(Violation::CornerCount {
            found: corner_routes,
        });
    }

    // Every coordinate in use has denominator dividing 2^scale.
    let scale = sound
        .iter()
        .flat_map(|&i| e.routes[i].points())
        .flat_map(|p| [p.x.exp(), p.y.exp()])
        .max()
        .unwrap_or(0)
        .max(square.epsilon().exp());
    let mut segments: Vec<Seg> = Vec::new();
    for &idx in &sound {
        let r = &e.routes[idx];
        for (piece_no, piece) in r.pieces.iter().enumerate() {
            for (pos, w) in piece.windows(2).enumerate() {
                segments.push(Seg {
                    route: idx,
                    piece: piece_no,
                    pos,
                    a: w[0],
                    b: w[1],
                    sa: scaled(w[0], scale),
                    sb: scaled(w[1], scale),
                });
            }
        }
    }
    let side = 1i64 << e.m;
    for s in &segments {
        let r = &e.routes[s.route];
        let start = r.pieces[0][0];
        let end = *r.pieces.last().and_then(|p| p.last()).unwrap_or(&start);
        for p in lattice_points_on(s, scale, side) {
            let own = (p == start && p == position(r.from)) || (p == end && p == position(r.to));
            if !own {
                out.push(Violation::LatticeTouch {
                    edge: r.edge,
                    point: p,
                });
            }
        }
    }
    check_pairs(e, &segments, scale, &position, &mut out);

    Ok(Verification {
        verified: out.is_empty(),
        m: e.m,
        n,
        case_counts,
        routes_checked: e.routes.len(),
        segments_checked: segments.len(),
        certificate: out,
    })
}

fn malformed(r: &super::chamanara::Route) -> Option<String> {
    if r.pieces.len() != r.crossings.len() + 1 {
        return Some(format!(
            "{} pieces for {} crossings",
            r.pieces.len(),
            r.crossings.len()
        ));
    }
    for piece in &r.pieces {
        if piece.len() < 2 {
            return Some("piece with fewer than two points".into());
        }
        if piece.windows(2).any(|w| w[0] == w[1]) {
            return Some("repeated point".into());
        }
    }
    for (j, c) in r.crossings.iter().enumerate() {
        if r.pieces[j].last() != Some(&c.entry) || r.pieces[j + 1].first() != Some(&c.exit) {
            return Some(format!("crossing {} does not join its pieces", c.segment));
        }
    }
    None
}

fn check_crossings(
    square: &Square,
    r: &super::chamanara::Route,
    boundary: &mut BTreeMap<(SegmentId, Dyadic), EdgeId>,
    out: &mut Vec<Violation>,
) {
    for c in &r.crossings {
        let bad = |reason: &str| Violation::BadCrossing {
            edge: r.edge,
            segment: c.segment,
            reason: reason.into(),
        };
        let Ok(seg) = square.segment(c.segment) else {
            out.push(bad("unknown segment"));
            continue;
        };
        let on = |p: Point, side| square.sides_of(p).contains(&side);
        let (far_point, near_point) = if on(c.entry, seg.far_side()) {
            (c.entry, c.exit)
        } else if on(c.entry, seg.near_side()) {
            (c.exit, c.entry)
        } else {
            out.push(bad("entry is not on a side carrying the segment"));
            continue;
        };
        if !on(far_point, seg.far_side()) || !on(near_point, seg.near_side()) {
            out.push(bad("entry and exit are not on glued sides"));
            continue;
        }
        let t = seg.along(far_point);
        match seg.to_near(t) {
            None => {
                out.push(bad("point is not strictly inside the segment"));
                continue;
            }
            Some(image) if image != seg.along(near_point) => {
                out.push(bad("exit is not the glued image of the entry"));
                continue;
            }
            Some(_) => {}
        }
        let offset = t - seg.far_start;
        if let Some(prev) = boundary.insert((c.segment, offset), r.edge) {
            out.push(Violation::SharedBoundaryPoint {
                segment: c.segment,
                offset,
                first: prev,
                second: r.edge,
            });
        }
    }
}

/// Only crossing points may lie on the sides, and no segment may run along
/// a side.
fn check_boundary_touches(square: &Square, r: &super::chamanara::Route, out: &mut Vec<Violation>) {
    let last_piece = r.pieces.len() - 1;
    for (j, piece) in r.pieces.iter().enumerate() {
        for (pos, p) in piece.iter().enumerate() {
            let crossing_end = (pos == 0 && j > 0) || (pos == piece.len() - 1 && j < last_piece);
            if !crossing_end && !square.sides_of(*p).is_empty() {
                out.push(Violation::BoundaryTouch {
                    edge: r.edge,
                    point: *p,
                });
            }
        }
        for w in piece.windows(2) {
            let a = square.sides_of(w[0]);
            if square.sides_of(w[1]).iter().any(|s| a.contains(s)) {
                out.push(Violation::BoundaryTouch {
                    edge: r.edge,
                    point: w[1],
                });
            }
        }
    }
}

struct Seg {
    route: usize,
    piece: usize,
    pos: usize,
    a: Point,
    b: Point,
    sa: (i128, i128),
    sb: (i128, i128),
}

fn scaled(p: Point, scale: u32) -> (i128, i128) {
    (p.x.scaled(scale), p.y.scaled(scale))
}

fn unscaled(p: (i128, i128), scale: u32) -> Point {
    let d = |v: i128| Dyadic::new(v as i64, scale);
    Point::new(d(p.0), d(p.1))
}

/// Lattice points of `{0..side}^2` lying on the closed segment.
fn lattice_points_on(s: &Seg, scale: u32, side: i64) -> Vec<Point> {
    let unit = 1i128 << scale;
    let (lo_x, hi_x) = (s.sa.0.min(s.sb.0), s.sa.0.max(s.sb.0));
    let lo = (lo_x + unit - 1).div_euclid(unit).max(0);
    let hi = hi_x.div_euclid(unit).min(side as i128 - 1);
    let mut out = Vec::new();
    let (dx, dy) = (s.sb.0 - s.sa.0, s.sb.1 - s.sa.1);
    let mut push_if_on = |x: i128, y: i128| {
        if (0..side as i128).contains(&y)
            && cross((dx, dy), (x * unit - s.sa.0, y * unit - s.sa.1)) == 0
            && in_box(s.sa, s.sb, (x * unit, y * unit))
        {
            out.push(Point::lattice(x as u64, y as u64));
        }
    };
    if dx == 0 {
        if s.sa.0 % unit == 0 {
            let (lo_y, hi_y) = (s.sa.1.min(s.sb.1), s.sa.1.max(s.sb.1));
            let y0 = (lo_y + unit - 1).div_euclid(unit);
            let y1 = hi_y.div_euclid(unit);
            for y in y0..=y1 {
                push_if_on(s.sa.0 / unit, y);
            }
        }
    } else {
        for x in lo..=hi {
            // y = ya + (x - xa) * dy / dx, integral only if exact
            let num = s.sa.1 * dx + (x * unit - s.sa.0) * dy;
            let den = dx * unit;
            if num % den == 0 {
                push_if_on(x, num / den);
            }
        }
    }
    out
}

fn cross(u: (i128, i128), v: (i128, i128)) -> i128 {
    u.0 * v.1 - u.1 * v.0
}

fn orient(p: (i128, i128), q: (i128, i128), r: (i128, i128)) -> i128 {
    cross((q.0 - p.0, q.1 - p.1), (r.0 - p.0, r.1 - p.1)).signum()
}

fn in_box(p: (i128, i128), q: (i128, i128), r: (i128, i128)) -> bool {
    p.0.min(q.0) <= r.0 && r.0 <= p.0.max(q.0) && p.1.min(q.1) <= r.1 && r.1 <= p.1.max(q.1)
}

enum Meet {
    Point((i128, i128)),
    Overlap((i128, i128), (i128, i128)),
    Proper,
}

fn meet(a: (i128, i128), b: (i128, i128), c: (i128, i128), d: (i128, i128)) -> Option<Meet> {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 == 0 && o2 == 0 {
        let u = (b.0 - a.0, b.1 - a.1);
        let t = |p: (i128, i128)| (p.0 - a.0) * u.0 + (p.1 - a.1) * u.1;
        let len = t(b);
        let (tc, td) = (t(c), t(d));
        let lo = tc.min(td).max(0);
        let hi = tc.max(td).min(len);
        return match lo.cmp(&hi) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Less => {
                let at = |tv: i128| {
                    [a, b, c, d]
                        .into_iter()
                        .find(|&p| t(p) == tv)
                        .expect("overlap ends are endpoints")
                };
                Some(Meet::Overlap(at(lo), at(hi)))
            }
            std::cmp::Ordering::Equal => [a, b, c, d]
                .into_iter()
                .find(|&p| t(p) == lo)
                .map(Meet::Point),
        };
    }
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return Some(Meet::Proper);
    }
    [(o1, a, b, c), (o2, a, b, d), (o3, c, d, a), (o4, c, d, b)]
        .into_iter()
        .find(|&(o, p, q, r)| o == 0 && in_box(p, q, r))
        .map(|(_, _, _, r)| Meet::Point(r))
}

fn check_pairs(
    e: &ChamanaraEmbedding,
    segments: &[Seg],
    scale: u32,
    position: &dyn Fn(usize) -> Point,
    out: &mut Vec<Violation>,
) {
    let unit = 1i128 << scale;
    let mut cells: BTreeMap<(i128, i128), Vec<usize>> = BTreeMap::new();
    for (i, s) in segments.iter().enumerate() {
        let lo = |a: i128, b: i128| a.min(b).div_euclid(unit);
        let hi = |a: i128, b: i128| (a.max(b) + unit - 1).div_euclid(unit);
        for cx in lo(s.sa.0, s.sb.0)..=hi(s.sa.0, s.sb.0) {
            for cy in lo(s.sa.1, s.sb.1)..=hi(s.sa.1, s.sb.1) {
                cells.entry((cx, cy)).or_default().push(i);
            }
        }
    }
    let mut pairs = BTreeSet::new();
    for members in cells.values() {
        for (k, &i) in members.iter().enumerate() {
            for &j in &members[k + 1..] {
                pairs.insert((i.min(j), i.max(j)));
            }
        }
    }
    for (i, j) in pairs {
        let (s, t) = (&segments[i], &segments[j]);
        let (ra, rb) = (&e.routes[s.route], &e.routes[t.route]);
        let consecutive = s.route == t.route && s.piece == t.piece && s.pos.abs_diff(t.pos) == 1;
        let Some(m) = meet(s.sa, s.sb, t.sa, t.sb) else {
            continue;
        };
        match m {
            Meet::Overlap(p, q) => out.push(Violation::SharedSegment {
                first: ra.edge,
                second: rb.edge,
                from: unscaled(p, scale),
                to: unscaled(q, scale),
            }),
            Meet::Proper => {
                out.push(Violation::Crossing {
                    first: ra.edge,
                    second: rb.edge,
                    near: [
                        (s.a.x.to_f64() + s.b.x.to_f64()) / 2.0,
                        (s.a.y.to_f64() + s.b.y.to_f64()) / 2.0,
                    ],
                });
            }
            Meet::Point(p) => {
                let point = unscaled(p, scale);
                let joint = consecutive && {
                    let shared = if s.pos < t.pos { s.b } else { s.a };
                    shared == point
                };
                let common_end = s.route != t.route
                    && [ra.from, ra.to]
                        .into_iter()
                        .filter(|v| *v == rb.from || *v == rb.to)
                        .any(|v| position(v) == point);
                if !joint && !common_end {
                    out.push(Violation::Touch {
                        first: ra.edge,
                        second: rb.edge,
                        point,
                    });
                }
            }
        }
    }
}
