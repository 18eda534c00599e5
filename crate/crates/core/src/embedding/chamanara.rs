//! The explicit embedding of the van der Corput graph `G_{4^m}` into the
//! finite Chamanara square.
//!
//! The square has corners `(delta, delta)` and `(2^m + delta, 2^m + delta)`
//! with `eps = 1/(8 * 2^m)` and `delta = -1/2 - eps`, so the lattice points
//! `{0, .., 2^m - 1}^2` sit half a unit plus `eps` inside every side. The
//! top and bottom sides are glued along the segments `h_k`, the right and
//! left sides along `v_k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bits::{psi, split_b0_b1};
use super::geometry::{Dyadic, Point};
use crate::error::{Error, Result};
use crate::graph::{build_graph, Cycle, Edge, EdgeId, SequenceGraph};
use crate::sequence::vdc_prefix;

/// Largest supported `m`; `N = 4^m` vertices.
pub const MAX_M: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    /// `h_k`: top side glued to bottom side.
    Horizontal,
    /// `v_k`: right side glued to left side.
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

/// Name of an identified segment pair, written `h3` or `v1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SegmentId {
    pub axis: Axis,
    pub k: u32,
}

impl SegmentId {
    pub fn h(k: u32) -> Self {
        SegmentId {
            axis: Axis::Horizontal,
            k,
        }
    }

    pub fn v(k: u32) -> Self {
        SegmentId {
            axis: Axis::Vertical,
            k,
        }
    }
}

impl fmt::Display for SegmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.axis {
            Axis::Horizontal => 'h',
            Axis::Vertical => 'v',
        };
        write!(f, "{c}{}", self.k)
    }
}

impl FromStr for SegmentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a segment name: {s:?}"));
        let axis = match s.chars().next() {
            Some('h') => Axis::Horizontal,
            Some('v') => Axis::Vertical,
            _ => return Err(bad()),
        };
        let k: u32 = s[1..].parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(SegmentId { axis, k })
    }
}

impl Serialize for SegmentId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SegmentId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// The square `[delta, 2^m + delta]^2` for a given `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Square {
    m: u32,
}

impl Square {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_M {
            return Err(Error::InvalidParam(format!("m = {m} not in 1..={MAX_M}")));
        }
        Ok(Square { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> i64 {
        1 << self.m
    }

    pub fn epsilon(&self) -> Dyadic {
        Dyadic::new(1, self.m + 3)
    }

    pub fn delta(&self) -> Dyadic {
        -Dyadic::new(1, 1) - self.epsilon()
    }

    /// Coordinate of the left and bottom sides.
    pub fn low(&self) -> Dyadic {
        self.delta()
    }

    /// Coordinate of the right and top sides.
    pub fn high(&self) -> Dyadic {
        Dyadic::int(self.size()) + self.delta()
    }

    /// `2^(m-k)`, fractional once `k > m`.
    fn pow(&self, k: u32) -> Dyadic {
        if k <= self.m {
            Dyadic::int(1 << (self.m - k))
        } else {
            Dyadic::new(1, k - self.m)
        }
    }

    pub fn segment(&self, id: SegmentId) -> Result<SegmentMap> {
        if id.k == 0 || id.k > self.m + 32 {
            return Err(Error::InvalidParam(format!("segment index {} out of range", id.k)));
        }
        let length = self.pow(id.k);
        // sum_{j=1}^{k-1} 2^(m-j) = 2^m - 2^(m-k+1)
        let skipped = Dyadic::int(self.size()) - self.pow(id.k - 1);
        Ok(SegmentMap {
            id,
            far_start: self.delta() + skipped,
            near_start: self.delta() + length,
            length,
        })
    }

    /// Fixed coordinate of a side line.
    pub fn side_coordinate(&self, side: Side) -> Dyadic {
        match side {
            Side::Top | Side::Right => self.high(),
            Side::Bottom | Side::Left => self.low(),
        }
    }

    /// Sides the point lies on.
    pub fn sides_of(&self, p: Point) -> Vec<Side> {
        let mut out = Vec::new();
        if p.y == self.high() {
            out.push(Side::Top);
        }
        if p.y == self.low() {
            out.push(Side::Bottom);
        }
        if p.x == self.low() {
            out.push(Side::Left);
        }
        if p.x == self.high() {
            out.push(Side::Right);
        }
        out
    }

    pub fn contains(&self, p: Point) -> bool {
        let (lo, hi) = (self.low(), self.high());
        lo <= p.x && p.x <= hi && lo <= p.y && p.y <= hi
    }
}

/// One identification: the far side interval
/// `[far_start, far_start + length]` is glued by translation onto the near
/// side interval `[near_start, near_start + length]`. For `h_k` the far side
/// is the top and the near side the bottom; for `v_k` they are the right and
/// the left sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentMap {
    pub id: SegmentId,
    pub far_start: Dyadic,
    pub near_start: Dyadic,
    pub length: Dyadic,
}

impl SegmentMap {
    pub fn far_side(&self) -> Side {
        match self.id.axis {
            Axis::Horizontal => Side::Top,
            Axis::Vertical => Side::Right,
        }
    }

    pub fn near_side(&self) -> Side {
        match self.id.axis {
            Axis::Horizontal => Side::Bottom,
            Axis::Vertical => Side::Left,
        }
    }

    fn interior(start: Dyadic, length: Dyadic, t: Dyadic) -> bool {
        start < t && t < start + length
    }

    pub fn far_contains(&self, t: Dyadic) -> bool {
        Self::interior(self.far_start, self.length, t)
    }

    pub fn near_contains(&self, t: Dyadic) -> bool {
        Self::interior(self.near_start, self.length, t)
    }

    /// Image on the near side of a far-side coordinate strictly inside the
    /// segment.
    pub fn to_near(&self, t: Dyadic) -> Option<Dyadic> {
        self.far_contains(t)
            .then(|| t - self.far_start + self.near_start)
    }

    pub fn to_far(&self, t: Dyadic) -> Option<Dyadic> {
        self.near_contains(t)
            .then(|| t - self.near_start + self.far_start)
    }

    /// Coordinate along the side: `x` on top and bottom, `y` on left and right.
    pub fn along(&self, p: Point) -> Dyadic {
        match self.id.axis {
            Axis::Horizontal => p.x,
            Axis::Vertical => p.y,
        }
    }

    fn point(&self, square: &Square, side: Side, t: Dyadic) -> Point {
        let c = square.side_coordinate(side);
        match self.id.axis {
            Axis::Horizontal => Point::new(t, c),
            Axis::Vertical => Point::new(c, t),
        }
    }
}

/// `h_k` for the square of size `2^m`.
pub fn segment_map(m: u32, k: u32) -> Result<SegmentMap> {
    Square::new(m)?.segment(SegmentId::h(k))
}

/// Which of the five routing rules applies to an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum RouteCase {
    /// Cpi edge with `b_0` not all ones: one step up.
    Vertical = 1,
    /// C1 edge with `b_1` not all ones: one step right.
    Horizontal = 2,
    /// Cpi edge leaving the top row through some `h_k`.
    TopWrap = 3,
    /// C1 edge leaving the right column through some `v_k`.
    RightWrap = 4,
    /// One of the two edges between `N - 1` and `0`.
    Corner = 5,
}

impl RouteCase {
    pub const ALL: [RouteCase; 5] = [
        RouteCase::Vertical,
        RouteCase::Horizontal,
        RouteCase::TopWrap,
        RouteCase::RightWrap,
        RouteCase::Corner,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }
}

impl From<RouteCase> for u8 {
    fn from(c: RouteCase) -> u8 {
        c.number()
    }
}

impl TryFrom<u8> for RouteCase {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        RouteCase::ALL
            .get((v as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| format!("no routing case {v}"))
    }
}

/// Classifies an edge of `G_{4^m}` by the bits of its tail.
pub fn route_case(edge: &Edge, m: u32) -> Result<RouteCase> {
    let n = 1u64 << (2 * m);
    let tail = edge.u as u64;
    if tail == n - 1 {
        return Ok(RouteCase::Corner);
    }
    let (b0, b1) = split_b0_b1(tail, m)?;
    Ok(match edge.id.cycle {
        Cycle::Cpi if !b0.is_all_ones() => RouteCase::Vertical,
        Cycle::Cpi => RouteCase::TopWrap,
        Cycle::C1 if !b1.is_all_ones() => RouteCase::Horizontal,
        Cycle::C1 => RouteCase::RightWrap,
    })
}

/// Passage through an identified segment: the route reaches `entry` on one
/// side and continues from the glued point `exit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub segment: SegmentId,
    pub entry: Point,
    pub exit: Point,
}

/// A drawn edge: polyline pieces joined by segment crossings, so
/// `pieces.len() == crossings.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub edge: EdgeId,
    pub from: usize,
    pub to: usize,
    pub case: RouteCase,
    pub pieces: Vec<Vec<Point>>,
    pub crossings: Vec<Crossing>,
}

impl Route {
    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.pieces.iter().flatten()
    }

    /// Straight segments of every piece.
    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.pieces
            .iter()
            .flat_map(|piece| piece.windows(2).map(|w| (w[0], w[1])))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamanaraEmbedding {
    pub m: u32,
    pub n: usize,
    /// `psi(i)` for every vertex `i`.
    pub positions: Vec<Point>,
    pub routes: Vec<Route>,
}

impl ChamanaraEmbedding {
    pub fn square(&self) -> Result<Square> {
        Square::new(self.m)
    }

    pub fn case_counts(&self) -> [usize; 5] {
        let mut counts = [0; 5];
        for r in &self.routes {
            counts[r.case.number() as usize - 1] += 1;
        }
        counts
    }
}

/// The van der Corput graph on `4^m` vertices, built by sorting the exact
/// base-2 prefix.
pub fn vdc_graph(m: u32) -> Result<SequenceGraph> {
    Square::new(m)?;
    Ok(build_graph(&vdc_prefix(2, 1usize << (2 * m))?))
}

/// Builds the five-case embedding of `G_{4^m}`.
pub fn chamanara_embed(m: u32) -> Result<ChamanaraEmbedding> {
    let square = Square::new(m)?;
    let graph = vdc_graph(m)?;
    let n = graph.n();
    let positions = (0..n as u64)
        .map(|i| psi(i, m).map(|(x, y)| Point::lattice(x, y)))
        .collect::<Result<Vec<_>>>()?;
    let routes = graph
        .edges()
        .map(|e| route_edge(&square, e, positions[e.u]))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChamanaraEmbedding {
        m,
        n,
        positions,
        routes,
    })
}

fn route_edge(square: &Square, e: &Edge, start: Point) -> Result<Route> {
    let case = route_case(e, square.m())?;
    let one = Dyadic::int(1);
    let mut crossings = Vec::new();
    let pieces = match case {
        RouteCase::Vertical => vec![vec![start, Point::new(start.x, start.y + one)]],
        RouteCase::Horizontal => vec![vec![start, Point::new(start.x + one, start.y)]],
        RouteCase::TopWrap | RouteCase::RightWrap => {
            let (axis_id, along) = if case == RouteCase::TopWrap {
                (SegmentId::h as fn(u32) -> SegmentId, start.x)
            } else {
                (SegmentId::v as fn(u32) -> SegmentId, start.y)
            };
            let k = first_zero_from_left(along, square.m())
                .ok_or_else(|| Error::InvalidParam(format!("no wrap segment for {start}")))?;
            let seg = square.segment(axis_id(k))?;
            let entry = seg.point(square, seg.far_side(), along);
            let target = seg
                .to_near(along)
                .ok_or_else(|| Error::InvalidParam(format!("{start} misses {}", seg.id)))?;
            let exit = seg.point(square, seg.near_side(), target);
            let end = match case {
                RouteCase::TopWrap => Point::new(target, Dyadic::zero()),
                _ => Point::new(Dyadic::zero(), target),
            };
            crossings.push(Crossing {
                segment: seg.id,
                entry,
                exit,
            });
            vec![vec![start, entry], vec![exit, end]]
        }
        RouteCase::Corner => {
            // Leave psi(N-1) a quarter step along the edge's own direction,
            // slant to the glued image of the grid line through psi(0) and
            // come back in along that line.
            let quarter = Dyadic::new(1, 2);
            let seg = match e.id.cycle {
                Cycle::Cpi => square.segment(SegmentId::h(square.m() + 1))?,
                Cycle::C1 => square.segment(SegmentId::v(square.m() + 1))?,
            };
            let far = seg
                .to_far(Dyadic::zero())
                .ok_or_else(|| Error::InvalidParam("corner segment misses the origin line".into()))?;
            let (step, entry, exit) = match e.id.cycle {
                Cycle::Cpi => (
                    Point::new(start.x, start.y + quarter),
                    Point::new(far, square.high()),
                    Point::new(Dyadic::zero(), square.low()),
                ),
                Cycle::C1 => (
                    Point::new(start.x + quarter, start.y),
                    Point::new(square.high(), far),
                    Point::new(square.low(), Dyadic::zero()),
                ),
            };
            crossings.push(Crossing {
                segment: seg.id,
                entry,
                exit,
            });
            vec![
                vec![start, step, entry],
                vec![exit, Point::lattice(0, 0)],
            ]
        }
    };
    Ok(Route {
        edge: e.id,
        from: e.u,
        to: e.v,
        case,
        pieces,
        crossings,
    })
}

/// 1-based position of the first zero in the `m`-bit string of `t`.
fn first_zero_from_left(t: Dyadic, m: u32) -> Option<u32> {
    if !t.is_integer() || t.numer() < 0 {
        return None;
    }
    super::bits::BitString::new(t.numer() as u64, m)
        .ok()?
        .first_zero_from_left()
}
