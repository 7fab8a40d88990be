//! Boustrophedon cell decomposition.
//!
//! Free space is swept by slices parallel to the driving direction. The sweep
//! advances along the sweep axis, so a slice at sweep value `s` is the line
//! `{p : p . sweep_axis = s}`. Vertices are processed in lexicographic order of
//! `(s, t)` where `t` is the along-track coordinate; this symbolically tilts
//! edges that are parallel to the slice so that each one collapses to a single
//! well-ordered event.
//!
//! A vertex is critical when both incident edges lie on the same side of the
//! slice through it (in the tilted order). Critical vertices change the number
//! of free intervals on the slice and delimit cells.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{FreeSpace, GeometryError, Point, Polygon, EPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompositionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("two critical points coincide at ({x}, {y})")]
    CoincidentCriticalPoints { x: f64, y: f64 },
    #[error("inconsistent sweep at ({x}, {y}): {reason}")]
    Sweep {
        x: f64,
        y: f64,
        reason: &'static str,
    },
}

/// Orthonormal frame: `direction` is the driving (track) direction and
/// `sweep_axis` is `direction` rotated clockwise by 90 degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepFrame {
    direction: Point,
    sweep_axis: Point,
}

impl SweepFrame {
    pub fn new(direction: Point) -> Result<Self, GeometryError> {
        let len = direction.norm();
        if len == 0.0 || !len.is_finite() {
            return Err(GeometryError::ZeroDirection);
        }
        let d = direction * (1.0 / len);
        Ok(Self {
            direction: d,
            sweep_axis: Point::new(d.y, -d.x),
        })
    }

    /// Driving direction given in degrees counter-clockwise from +x. Multiples
    /// of 90 degrees map to exact axis vectors.
    pub fn from_degrees(deg: f64) -> Self {
        let rad = deg.to_radians();
        let snap = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
        let (s, c) = rad.sin_cos();
        Self::new(Point::new(snap(c), snap(s))).expect("unit vector from angle")
    }

    pub fn direction(&self) -> Point {
        self.direction
    }

    pub fn sweep_axis(&self) -> Point {
        self.sweep_axis
    }

    /// World point to frame coordinates `(s, t)` = (sweep value, along-track).
    pub fn to_frame(&self, p: Point) -> Point {
        Point::new(p.dot(self.sweep_axis), p.dot(self.direction))
    }

    pub fn to_world(&self, q: Point) -> Point {
        self.sweep_axis * q.x + self.direction * q.y
    }

    pub fn sweep_value(&self, p: Point) -> f64 {
        p.dot(self.sweep_axis)
    }

    pub fn along(&self, p: Point) -> f64 {
        p.dot(self.direction)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalKind {
    Open,
    Close,
    Split,
    Merge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub location: Point,
    pub kind: CriticalKind,
    pub sweep_value: f64,
}

/// Lower or upper end (or headland) in the along-track direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Lower,
    Upper,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Lower => End::Upper,
            End::Upper => End::Lower,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> End {
        if i == 0 {
            End::Lower
        } else {
            End::Upper
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub id: usize,
    pub polygon: Polygon,
    /// Boundary chain at minimum along-track extent, ordered by sweep value.
    pub lower_headland: Vec<Point>,
    /// Boundary chain at maximum along-track extent, ordered by sweep value.
    pub upper_headland: Vec<Point>,
    pub sweep_interval: (f64, f64),
}

impl Cell {
    pub fn headland(&self, side: End) -> &[Point] {
        match side {
            End::Lower => &self.lower_headland,
            End::Upper => &self.upper_headland,
        }
    }

    pub fn sweep_extent(&self) -> f64 {
        self.sweep_interval.1 - self.sweep_interval.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeadlandId {
    pub cell: usize,
    pub side: End,
}

impl HeadlandId {
    pub fn new(cell: usize, side: End) -> Self {
        Self { cell, side }
    }

    /// Dense index `2 * cell + side`.
    pub fn index(self) -> usize {
        2 * self.cell + self.side.index()
    }
}

impl std::fmt::Display for HeadlandId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let side = match self.side {
            End::Lower => "lower",
            End::Upper => "upper",
        };
        write!(f, "cell {} {} headland", self.cell, side)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellDecomposition {
    pub frame: SweepFrame,
    pub free: FreeSpace,
    pub cells: Vec<Cell>,
    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub adjacency: Vec<(usize, usize)>,
    headland_links: Vec<(HeadlandId, HeadlandId)>,
}

impl CellDecomposition {
    pub fn neighbors(&self, cell: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .adjacency
            .iter()
            .filter_map(|&(a, b)| {
                if a == cell {
                    Some(b)
                } else if b == cell {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.polygon.area()).sum()
    }
}

/// Headland graph: two nodes per cell, edges between same-side headlands of
/// adjacent cells that share a continuous boundary chain.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadlandGraph {
    pub edges: Vec<(HeadlandId, HeadlandId)>,
    component: Vec<usize>,
}

impl HeadlandGraph {
    pub fn node_count(&self) -> usize {
        self.component.len()
    }

    pub fn component(&self, h: HeadlandId) -> usize {
        self.component[h.index()]
    }

    pub fn connected(&self, a: HeadlandId, b: HeadlandId) -> bool {
        self.component(a) == self.component(b)
    }

    pub fn degree(&self, h: HeadlandId) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == h || *b == h)
            .count()
    }

    pub fn members(&self, component: usize) -> Vec<HeadlandId> {
        (0..self.component.len())
            .filter(|&i| self.component[i] == component)
            .map(|i| HeadlandId::new(i / 2, End::from_index(i % 2)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct VertexId {
    ring: usize,
    idx: usize,
}

#[derive(Debug, Clone, Copy)]
struct EdgeRef {
    lo: VertexId,
    hi: VertexId,
}

struct Rings {
    pts: Vec<Vec<Point>>,
}

impl Rings {
    fn new(free: &FreeSpace, frame: &SweepFrame) -> Self {
        let pts = free
            .rings()
            .map(|r| r.vertices().iter().map(|&p| frame.to_frame(p)).collect())
            .collect();
        Self { pts }
    }

    fn at(&self, v: VertexId) -> Point {
        self.pts[v.ring][v.idx]
    }

    fn prev(&self, v: VertexId) -> VertexId {
        let n = self.pts[v.ring].len();
        VertexId {
            ring: v.ring,
            idx: (v.idx + n - 1) % n,
        }
    }

    fn next(&self, v: VertexId) -> VertexId {
        let n = self.pts[v.ring].len();
        VertexId {
            ring: v.ring,
            idx: (v.idx + 1) % n,
        }
    }

    fn all(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        for (ring, r) in self.pts.iter().enumerate() {
            out.extend((0..r.len()).map(|idx| VertexId { ring, idx }));
        }
        out.sort_by(|&a, &b| lex(self.at(a), self.at(b)).then(a.cmp(&b)));
        out
    }

    fn classify(&self, v: VertexId) -> Option<CriticalKind> {
        let (p, c, n) = (self.at(self.prev(v)), self.at(v), self.at(self.next(v)));
        let prev_up = lex(p, c) == Ordering::Greater;
        let next_up = lex(n, c) == Ordering::Greater;
        if prev_up != next_up {
            return None;
        }
        // Free space lies to the left of every ring's traversal direction.
        let convex = (c - p).cross(n - c) > 0.0;
        Some(match (prev_up, convex) {
            (true, true) => CriticalKind::Open,
            (true, false) => CriticalKind::Split,
            (false, true) => CriticalKind::Close,
            (false, false) => CriticalKind::Merge,
        })
    }

    /// The two edges leaving `v` towards lexicographically greater vertices,
    /// returned as (lower, upper) by angle.
    fn outgoing(&self, v: VertexId) -> (EdgeRef, EdgeRef) {
        let (a, b) = (self.prev(v), self.next(v));
        let c = self.at(v);
        let ea = EdgeRef { lo: v, hi: a };
        let eb = EdgeRef { lo: v, hi: b };
        if (self.at(a) - c).cross(self.at(b) - c) > 0.0 {
            (ea, eb)
        } else {
            (eb, ea)
        }
    }

    /// The continuation of a chain through regular vertex `v`.
    fn forward(&self, v: VertexId) -> EdgeRef {
        let (a, b) = (self.prev(v), self.next(v));
        let hi = if lex(self.at(a), self.at(v)) == Ordering::Greater {
            a
        } else {
            b
        };
        EdgeRef { lo: v, hi }
    }

    /// Point of the edge at sweep value `s` (frame coordinates).
    fn eval(&self, e: EdgeRef, s: f64, fallback_t: f64) -> Point {
        let (a, b) = (self.at(e.lo), self.at(e.hi));
        let ds = b.x - a.x;
        if ds <= 0.0 {
            return Point::new(s, fallback_t.clamp(a.y.min(b.y), a.y.max(b.y)));
        }
        let f = ((s - a.x) / ds).clamp(0.0, 1.0);
        Point::new(s, a.y + f * (b.y - a.y))
    }

    fn above(&self, e: EdgeRef, p: Point) -> bool {
        let (a, b) = (self.at(e.lo), self.at(e.hi));
        (b - a).cross(p - a) > 0.0
    }
}

fn lex(a: Point, b: Point) -> Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
}

/// Critical points of the sweep over `free`, sorted by (sweep value, along-track).
pub fn critical_points(
    free: &FreeSpace,
    frame: &SweepFrame,
) -> Result<Vec<CriticalPoint>, DecompositionError> {
    let rings = Rings::new(free, frame);
    let mut out: Vec<CriticalPoint> = Vec::new();
    for v in rings.all() {
        if let Some(kind) = rings.classify(v) {
            let q = rings.at(v);
            if let Some(last) = out.last() {
                let lq = frame.to_frame(last.location);
                if (lq.x - q.x).abs() <= EPS && (lq.y - q.y).abs() <= EPS {
                    return Err(DecompositionError::CoincidentCriticalPoints {
                        x: last.location.x,
                        y: last.location.y,
                    });
                }
            }
            out.push(CriticalPoint {
                location: frame.to_world(q),
                kind,
                sweep_value: q.x,
            });
        }
    }
    Ok(out)
}

struct ActiveCell {
    raw: usize,
    floor: EdgeRef,
    ceil: EdgeRef,
    floor_pts: Vec<Point>,
    ceil_pts: Vec<Point>,
    start_s: f64,
}

struct RawCell {
    floor_pts: Vec<Point>,
    ceil_pts: Vec<Point>,
    start_s: f64,
    end_s: f64,
}

#[derive(Default)]
struct Sweep {
    active: Vec<ActiveCell>,
    raw: Vec<Option<RawCell>>,
    links: Vec<(usize, usize, End)>,
}

impl Sweep {
    fn open(&mut self, floor: EdgeRef, ceil: EdgeRef, fp: Point, cp: Point) -> usize {
        let raw = self.raw.len();
        self.raw.push(None);
        self.active.push(ActiveCell {
            raw,
            floor,
            ceil,
            floor_pts: vec![fp],
            ceil_pts: vec![cp],
            start_s: fp.x,
        });
        raw
    }

    fn close(&mut self, pos: usize, fp: Point, cp: Point) -> ActiveCell {
        let mut c = self.active.swap_remove(pos);
        c.floor_pts.push(fp);
        c.ceil_pts.push(cp);
        self.raw[c.raw] = Some(RawCell {
            floor_pts: c.floor_pts.clone(),
            ceil_pts: c.ceil_pts.clone(),
            start_s: c.start_s,
            end_s: fp.x.max(cp.x),
        });
        c
    }

    fn find(&self, pred: impl Fn(&ActiveCell) -> bool) -> Option<usize> {
        self.active.iter().position(pred)
    }
}

fn sweep_err(frame: &SweepFrame, q: Point, reason: &'static str) -> DecompositionError {
    let p = frame.to_world(q);
    DecompositionError::Sweep {
        x: p.x,
        y: p.y,
        reason,
    }
}

/// Boustrophedon decomposition of `free` along `frame`.
pub fn decompose(
    free: &FreeSpace,
    frame: &SweepFrame,
) -> Result<CellDecomposition, DecompositionError> {
    critical_points(free, frame)?;
    let rings = Rings::new(free, frame);
    let mut sw = Sweep::default();

    for v in rings.all() {
        let q = rings.at(v);
        match rings.classify(v) {
            Some(CriticalKind::Open) => {
                let (lo, hi) = rings.outgoing(v);
                sw.open(lo, hi, q, q);
            }
            Some(CriticalKind::Split) => {
                let pos = sw
                    .find(|c| rings.above(c.floor, q) && !rings.above(c.ceil, q))
                    .ok_or_else(|| sweep_err(frame, q, "split vertex outside every cell"))?;
                let (floor, ceil) = (sw.active[pos].floor, sw.active[pos].ceil);
                let fp = rings.eval(floor, q.x, q.y);
                let cp = rings.eval(ceil, q.x, q.y);
                let parent = sw.close(pos, fp, cp).raw;
                let (lo, hi) = rings.outgoing(v);
                let below = sw.open(floor, lo, fp, q);
                let above = sw.open(hi, ceil, q, cp);
                sw.links.push((parent, below, End::Lower));
                sw.links.push((parent, above, End::Upper));
            }
            Some(CriticalKind::Close) => {
                let pos = sw
                    .find(|c| c.floor.hi == v && c.ceil.hi == v)
                    .ok_or_else(|| sweep_err(frame, q, "close vertex ends no cell"))?;
                sw.close(pos, q, q);
            }
            Some(CriticalKind::Merge) => {
                let lo_pos = sw
                    .find(|c| c.ceil.hi == v)
                    .ok_or_else(|| sweep_err(frame, q, "merge vertex has no lower cell"))?;
                let floor = sw.active[lo_pos].floor;
                let fp = rings.eval(floor, q.x, q.y);
                let lower = sw.close(lo_pos, fp, q).raw;
                let hi_pos = sw
                    .find(|c| c.floor.hi == v)
                    .ok_or_else(|| sweep_err(frame, q, "merge vertex has no upper cell"))?;
                let ceil = sw.active[hi_pos].ceil;
                let cp = rings.eval(ceil, q.x, q.y);
                let upper = sw.close(hi_pos, q, cp).raw;
                let merged = sw.open(floor, ceil, fp, cp);
                sw.links.push((lower, merged, End::Lower));
                sw.links.push((upper, merged, End::Upper));
            }
            None => {
                let next = rings.forward(v);
                if let Some(pos) = sw.find(|c| c.floor.hi == v) {
                    let c = &mut sw.active[pos];
                    c.floor_pts.push(q);
                    c.floor = next;
                } else if let Some(pos) = sw.find(|c| c.ceil.hi == v) {
                    let c = &mut sw.active[pos];
                    c.ceil_pts.push(q);
                    c.ceil = next;
                } else {
                    return Err(sweep_err(frame, q, "regular vertex continues no chain"));
                }
            }
        }
    }
    if !sw.active.is_empty() {
        return Err(sweep_err(
            frame,
            Point::default(),
            "cells left open after sweep",
        ));
    }
    let raw: Vec<RawCell> = sw
        .raw
        .into_iter()
        .map(|c| c.expect("every cell closed"))
        .collect();
    Ok(assemble(free, frame, raw, &sw.links))
}

/// Chain restricted to the part strictly between the vertical runs at its ends.
fn trim_chain(pts: &[Point], s0: f64, s1: f64) -> Vec<Point> {
    let pts = dedup(pts);
    let first = pts
        .iter()
        .rposition(|p| (p.x - s0).abs() <= EPS)
        .unwrap_or(0);
    let last = pts
        .iter()
        .position(|p| (p.x - s1).abs() <= EPS)
        .unwrap_or(pts.len() - 1);
    if first >= last {
        // Chain without sweep extent.
        return vec![pts[first.min(pts.len() - 1)]];
    }
    pts[first..=last].to_vec()
}

fn dedup(pts: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts {
        if out.last().is_none_or(|l: &Point| l.distance(p) > EPS) {
            out.push(p);
        }
    }
    out
}

/// Removes duplicate, collinear and fold-back vertices of a closed ring.
fn simplify_ring(pts: Vec<Point>) -> Vec<Point> {
    let mut ring = dedup(&pts);
    while ring.len() > 1 && ring[0].distance(*ring.last().unwrap()) <= EPS {
        ring.pop();
    }
    let mut changed = true;
    while changed && ring.len() >= 3 {
        changed = false;
        let n = ring.len();
        for i in 0..n {
            let p = ring[(i + n - 1) % n];
            let c = ring[i];
            let nx = ring[(i + 1) % n];
            let (u, w) = (c - p, nx - c);
            let scale = u.norm().max(w.norm()).max(1.0);
            if u.cross(w).abs() <= EPS * scale || c.distance(nx) <= EPS {
                ring.remove(i);
                changed = true;
                break;
            }
        }
    }
    ring
}

/// Interval covered by the cut at sweep value `s` between a floor and ceiling chain.
fn cut_interval(floor: &[Point], ceil: &[Point], s: f64) -> (f64, f64) {
    let lo = floor
        .iter()
        .filter(|p| (p.x - s).abs() <= EPS)
        .map(|p| p.y)
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = ceil
        .iter()
        .filter(|p| (p.x - s).abs() <= EPS)
        .map(|p| p.y)
        .fold(f64::INFINITY, f64::min);
    (lo, hi)
}

fn assemble(
    free: &FreeSpace,
    frame: &SweepFrame,
    raw: Vec<RawCell>,
    links: &[(usize, usize, End)],
) -> CellDecomposition {
    struct Kept {
        raw: usize,
        ring: Vec<Point>,
        floor: Vec<Point>,
        ceil: Vec<Point>,
        start_s: f64,
        end_s: f64,
        left: (f64, f64),
        right: (f64, f64),
    }

    let mut kept: Vec<Kept> = Vec::new();
    for (i, c) in raw.iter().enumerate() {
        let extent = c.end_s - c.start_s;
        let mut ring: Vec<Point> = c.floor_pts.clone();
        ring.extend(c.ceil_pts.iter().rev().copied());
        let ring = simplify_ring(ring);
        let area = if ring.len() >= 3 {
            crate::geometry::signed_area(&ring).unwrap_or(0.0)
        } else {
            0.0
        };
        // Slivers have no sweep extent or no thickness; they carry no area and
        // are absorbed by their neighbours.
        if extent < EPS || area <= 0.0 || area / extent < EPS {
            continue;
        }
        kept.push(Kept {
            raw: i,
            left: cut_interval(&c.floor_pts, &c.ceil_pts, c.start_s),
            right: cut_interval(&c.floor_pts, &c.ceil_pts, c.end_s),
            floor: trim_chain(&c.floor_pts, c.start_s, c.end_s),
            ceil: trim_chain(&c.ceil_pts, c.start_s, c.end_s),
            ring,
            start_s: c.start_s,
            end_s: c.end_s,
        });
    }
    kept.sort_by(|a, b| {
        a.start_s
            .total_cmp(&b.start_s)
            .then(a.left.0.total_cmp(&b.left.0))
            .then(a.raw.cmp(&b.raw))
    });

    let mut raw_to_cell = vec![usize::MAX; raw.len()];
    for (id, k) in kept.iter().enumerate() {
        raw_to_cell[k.raw] = id;
    }

    let mut adjacency = BTreeSet::new();
    for (i, a) in kept.iter().enumerate() {
        for (j, b) in kept.iter().enumerate() {
            if i == j || (a.end_s - b.start_s).abs() > EPS {
                continue;
            }
            let lo = a.right.0.max(b.left.0);
            let hi = a.right.1.min(b.left.1);
            if hi - lo > EPS {
                adjacency.insert((i.min(j), i.max(j)));
            }
        }
    }

    // Chain continuity through split/merge events, closed transitively so that
    // links passing through absorbed slivers survive.
    let mut dsu = UnionFind::<usize>::new(2 * raw.len());
    for &(a, b, side) in links {
        dsu.union(2 * a + side.index(), 2 * b + side.index());
    }
    let mut headland_links = Vec::new();
    for &(a, b) in &adjacency {
        for side in [End::Lower, End::Upper] {
            let ra = 2 * kept[a].raw + side.index();
            let rb = 2 * kept[b].raw + side.index();
            if dsu.equiv(ra, rb) {
                headland_links.push((HeadlandId::new(a, side), HeadlandId::new(b, side)));
            }
        }
    }

    let cells = kept
        .into_iter()
        .enumerate()
        .map(|(id, k)| {
            let world: Vec<Point> = k.ring.iter().map(|&p| frame.to_world(p)).collect();
            Cell {
                id,
                polygon: Polygon::new_unchecked(world),
                lower_headland: k.floor.iter().map(|&p| frame.to_world(p)).collect(),
                upper_headland: k.ceil.iter().map(|&p| frame.to_world(p)).collect(),
                sweep_interval: (k.start_s, k.end_s),
            }
        })
        .collect();

    CellDecomposition {
        frame: *frame,
        free: free.clone(),
        cells,
        adjacency: adjacency.into_iter().collect(),
        headland_links,
    }
}

/// Headland connectivity graph with components closed reflexively and transitively.
pub fn headland_connectivity(d: &CellDecomposition) -> HeadlandGraph {
    let n = 2 * d.cells.len();
    let mut dsu = UnionFind::<usize>::new(n);
    for &(a, b) in &d.headland_links {
        dsu.union(a.index(), b.index());
    }
    // Renumber components densely in order of first appearance.
    let mut label = vec![usize::MAX; n];
    let mut component = vec![0; n];
    let mut next = 0;
    for (i, slot) in component.iter_mut().enumerate() {
        let r = dsu.find_mut(i);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        *slot = label[r];
    }
    HeadlandGraph {
        edges: d.headland_links.clone(),
        component,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(f64, f64)]) -> Polygon {
        Polygon::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn square(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
        poly(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    }

    fn diamond(cx: f64, cy: f64, r: f64) -> Polygon {
        poly(&[(cx, cy - r), (cx + r, cy), (cx, cy + r), (cx - r, cy)])
    }

    fn sweep_x() -> SweepFrame {
        SweepFrame::from_degrees(90.0)
    }

    #[test]
    fn frame_for_north_is_axis_aligned() {
        let f = sweep_x();
        assert_eq!(f.direction(), Point::new(0.0, 1.0));
        assert_eq!(f.sweep_axis(), Point::new(1.0, 0.0));
        let p = Point::new(3.0, 7.0);
        assert_eq!(f.to_frame(p), Point::new(3.0, 7.0));
        let g = SweepFrame::from_degrees(30.0);
        let q = g.to_world(g.to_frame(p));
        assert!(q.distance(p) < 1e-12);
    }

    #[test]
    fn empty_square_has_open_and_close() {
        let fs = FreeSpace::new(square(0.0, 0.0, 10.0, 10.0), vec![]).unwrap();
        let cps = critical_points(&fs, &sweep_x()).unwrap();
        let kinds: Vec<_> = cps.iter().map(|c| c.kind).collect();
        assert_eq!(kinds, vec![CriticalKind::Open, CriticalKind::Close]);
        assert_eq!(cps[0].sweep_value, 0.0);
        assert_eq!(cps[1].sweep_value, 10.0);
    }

    #[test]
    fn diamond_events() {
        let fs =
            FreeSpace::new(square(0.0, 0.0, 10.0, 10.0), vec![diamond(5.0, 5.0, 2.0)]).unwrap();
        let cps = critical_points(&fs, &sweep_x()).unwrap();
        let kinds: Vec<_> = cps.iter().map(|c| c.kind).collect();
        use CriticalKind::*;
        assert_eq!(kinds, vec![Open, Split, Merge, Close]);
        assert_eq!(cps[1].location, Point::new(3.0, 5.0));
        assert_eq!(cps[2].location, Point::new(7.0, 5.0));
    }

    #[test]
    fn single_cell_for_empty_square() {
        let fs = FreeSpace::new(square(0.0, 0.0, 10.0, 10.0), vec![]).unwrap();
        let d = decompose(&fs, &sweep_x()).unwrap();
        assert_eq!(d.cells.len(), 1);
        assert!(d.adjacency.is_empty());
        let c = &d.cells[0];
        assert_eq!(c.sweep_interval, (0.0, 10.0));
        assert!((c.polygon.area() - 100.0).abs() < 1e-9);
        assert_eq!(
            c.lower_headland,
            vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0)]
        );
        assert_eq!(
            c.upper_headland,
            vec![Point::new(0.0, 10.0), Point::new(10.0, 10.0)]
        );
        let g = headland_connectivity(&d);
        assert_eq!(g.node_count(), 2);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn diamond_gives_four_cells() {
        let fs =
            FreeSpace::new(square(0.0, 0.0, 10.0, 10.0), vec![diamond(5.0, 5.0, 2.0)]).unwrap();
        let d = decompose(&fs, &sweep_x()).unwrap();
        assert_eq!(d.cells.len(), 4);
        // ids: 0 left, 1 below, 2 above, 3 right
        assert_eq!(d.cells[0].sweep_interval, (0.0, 3.0));
        assert_eq!(d.cells[1].sweep_interval, (3.0, 7.0));
        assert!(d.cells[1].polygon.centroid().y < 5.0);
        assert!(d.cells[2].polygon.centroid().y > 5.0);
        assert_eq!(d.adjacency, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!((d.total_area() - fs.area()).abs() < 1e-9);

        let g = headland_connectivity(&d);
        let h = HeadlandId::new;
        assert!(g.connected(h(0, End::Lower), h(1, End::Lower)));
        assert!(g.connected(h(0, End::Lower), h(3, End::Lower)));
        assert!(g.connected(h(0, End::Upper), h(2, End::Upper)));
        assert!(g.connected(h(2, End::Upper), h(3, End::Upper)));
        assert_eq!(g.degree(h(2, End::Lower)), 0);
        assert_eq!(g.degree(h(1, End::Upper)), 0);
        assert!(!g.connected(h(0, End::Lower), h(0, End::Upper)));
        assert!(!g.connected(h(2, End::Lower), h(1, End::Lower)));
    }

    #[test]
    fn notch_wall_produces_no_sliver() {
        // U-shape: notch from the top between x=3 and x=7.
        let u = poly(&[
            (0.0, 0.0),
            (10.0, 0.0),
            (10.0, 10.0),
            (7.0, 10.0),
            (7.0, 4.0),
            (3.0, 4.0),
            (3.0, 10.0),
            (0.0, 10.0),
        ]);
        let fs = FreeSpace::new(u, vec![]).unwrap();
        let d = decompose(&fs, &sweep_x()).unwrap();
        assert_eq!(d.cells.len(), 2);
        assert!((d.total_area() - fs.area()).abs() < 1e-9);
        assert_eq!(d.adjacency, vec![(0, 1)]);
        let right = &d.cells[1];
        assert_eq!(right.polygon.len(), 6);
        assert_eq!(
            right.upper_headland,
            vec![
                Point::new(3.0, 4.0),
                Point::new(7.0, 4.0),
                Point::new(7.0, 10.0),
                Point::new(10.0, 10.0)
            ]
        );
    }

    #[test]
    fn square_obstacle_with_walls_parallel_to_slices() {
        let fs = FreeSpace::new(
            square(0.0, 0.0, 10.0, 10.0),
            vec![square(4.0, 4.0, 6.0, 6.0)],
        )
        .unwrap();
        let d = decompose(&fs, &sweep_x()).unwrap();
        assert_eq!(d.cells.len(), 4);
        assert!((d.total_area() - 96.0).abs() < 1e-9);
        let above = &d.cells[2];
        assert!((above.polygon.area() - 8.0).abs() < 1e-9);
        assert_eq!(
            above.lower_headland,
            vec![Point::new(4.0, 6.0), Point::new(6.0, 6.0)]
        );
    }

    #[test]
    fn decompose_is_deterministic() {
        let fs = FreeSpace::new(
            square(0.0, 0.0, 20.0, 10.0),
            vec![diamond(5.0, 5.0, 2.0), diamond(14.0, 4.0, 1.5)],
        )
        .unwrap();
        let f = SweepFrame::from_degrees(75.0);
        assert_eq!(decompose(&fs, &f).unwrap(), decompose(&fs, &f).unwrap());
    }
}
