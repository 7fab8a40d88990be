//! Planar polygon primitives: points, simple polygons, free space with holes,
//! line clipping and point classification.
//!
//! All coordinates are meters. A single absolute tolerance [`EPS`] is used for
//! every coincidence test in the crate.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute geometric tolerance in meters.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon is not simple: edges {0} and {1} intersect")]
    SelfIntersection(usize, usize),
    #[error("obstacle {index} is not strictly inside the boundary")]
    ObstacleOutside { index: usize },
    #[error("obstacles {a} and {b} intersect or touch")]
    ObstaclesOverlap { a: usize, b: usize },
    #[error("direction vector must be nonzero and finite")]
    ZeroDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn midpoint(&self) -> Point {
        self.a.lerp(self.b, 0.5)
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        point_segment_distance(p, self.a, self.b)
    }
}

/// An infinite line through `origin` along `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub origin: Point,
    pub direction: Point,
}

impl Line {
    pub fn new(origin: Point, direction: Point) -> Self {
        Self { origin, direction }
    }
}

/// Shoelace signed area; positive for counter-clockwise rings.
pub fn signed_area(vertices: &[Point]) -> Result<f64, GeometryError> {
    if vertices.len() < 3 {
        return Err(GeometryError::TooFewVertices(vertices.len()));
    }
    Ok(ring_area(vertices))
}

fn ring_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        acc += a.cross(b);
    }
    0.5 * acc
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Orientation of `c` relative to the directed line `a -> b`, with values within
/// [`EPS`] (as a point-to-line distance) snapped to zero.
fn orient(a: Point, b: Point, c: Point) -> i8 {
    let ab = b - a;
    let len = ab.norm();
    let v = ab.cross(c - a);
    if v.abs() <= EPS * len.max(1.0) {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    point_segment_distance(p, a, b) <= EPS
}

/// True if the closed segments `ab` and `cd` share at least one point (within [`EPS`]).
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// Even-odd point-in-ring test. Points on the ring give an unspecified answer;
/// callers that care check edge distance first.
pub fn point_in_ring(ring: &[Point], p: Point) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let a = ring[i];
        let b = ring[j];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Distance from `p` to the nearest edge of `ring`.
pub fn ring_distance(ring: &[Point], p: Point) -> f64 {
    ring_edges(ring)
        .map(|(a, b)| point_segment_distance(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

pub fn ring_edges(ring: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    let n = ring.len();
    (0..n).map(move |i| (ring[i], ring[(i + 1) % n]))
}

/// Sorted parameter intervals `(t0, t1)` along the unit direction of `line`
/// where the line is inside the even-odd union of `rings`.
///
/// Vertices exactly on the line are assigned to the non-negative side, so every
/// crossing is counted once and the crossings always pair up.
pub(crate) fn clip_rings(rings: &[&[Point]], line: Line) -> Vec<(f64, f64)> {
    let len = line.direction.norm();
    if len == 0.0 || !len.is_finite() {
        return Vec::new();
    }
    let u = line.direction * (1.0 / len);
    let mut ts = Vec::new();
    for ring in rings {
        let side: Vec<f64> = ring.iter().map(|&p| u.cross(p - line.origin)).collect();
        let n = ring.len();
        for i in 0..n {
            let j = (i + 1) % n;
            let (sa, sb) = (side[i], side[j]);
            if (sa >= 0.0) != (sb >= 0.0) {
                let f = sa / (sa - sb);
                let p = ring[i].lerp(ring[j], f);
                ts.push(u.dot(p - line.origin));
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.chunks_exact(2)
        .map(|c| (c[0], c[1]))
        .filter(|(a, b)| b - a > EPS)
        .collect()
}

/// A simple polygon with at least three vertices and nonzero area.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if vertices[i].distance(vertices[j]) <= EPS {
                return Err(GeometryError::DuplicateVertex(i, j));
            }
        }
        if ring_area(&vertices).abs() <= EPS {
            return Err(GeometryError::ZeroArea);
        }
        check_simple(&vertices)?;
        Ok(Self { vertices })
    }

    /// Builds a polygon without validation. Callers guarantee the invariants.
    pub(crate) fn new_unchecked(vertices: Vec<Point>) -> Self {
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        ring_area(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > 0.0
    }

    pub fn reversed(&self) -> Polygon {
        let mut v = self.vertices.clone();
        v.reverse();
        Polygon { vertices: v }
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        ring_edges(&self.vertices)
    }

    /// Strict interior test: points within [`EPS`] of an edge are outside.
    pub fn contains(&self, p: Point) -> bool {
        ring_distance(&self.vertices, p) > EPS && point_in_ring(&self.vertices, p)
    }

    pub fn centroid(&self) -> Point {
        let a = self.signed_area();
        let n = self.vertices.len();
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let c = p.cross(q);
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point::new(cx / (6.0 * a), cy / (6.0 * a))
    }

    fn oriented(self, ccw: bool) -> Polygon {
        if self.is_ccw() == ccw {
            self
        } else {
            self.reversed()
        }
    }
}

fn check_simple(v: &[Point]) -> Result<(), GeometryError> {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (v[j], v[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared vertex is fine; a fold-back along the same line is not.
                let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let u = p - shared;
                let w = q - shared;
                if u.cross(w).abs() <= EPS * u.norm().max(w.norm()).max(1.0) && u.dot(w) > 0.0 {
                    return Err(GeometryError::SelfIntersection(i, j));
                }
            } else if segments_intersect(a, b, c, d) {
                return Err(GeometryError::SelfIntersection(i, j));
            }
        }
    }
    Ok(())
}

fn rings_touch(a: &[Point], b: &[Point]) -> bool {
    ring_edges(a).any(|(p, q)| ring_edges(b).any(|(r, s)| segments_intersect(p, q, r, s)))
}

/// Free space: an outer boundary (stored counter-clockwise) minus obstacle
/// holes (stored clockwise).
#[derive(Debug, Clone, PartialEq)]
pub struct FreeSpace {
    boundary: Polygon,
    obstacles: Vec<Polygon>,
}

impl FreeSpace {
    /// Validates containment and disjointness and normalizes ring orientation.
    pub fn new(boundary: Polygon, obstacles: Vec<Polygon>) -> Result<Self, GeometryError> {
        let boundary = boundary.oriented(true);
        let obstacles: Vec<Polygon> = obstacles.into_iter().map(|o| o.oriented(false)).collect();
        for (i, o) in obstacles.iter().enumerate() {
            let inside = o.vertices().iter().all(|&p| boundary.contains(p));
            if !inside || rings_touch(boundary.vertices(), o.vertices()) {
                return Err(GeometryError::ObstacleOutside { index: i });
            }
        }
        for i in 0..obstacles.len() {
            for j in (i + 1)..obstacles.len() {
                let (a, b) = (&obstacles[i], &obstacles[j]);
                let nested = point_in_ring(a.vertices(), b.vertices()[0])
                    || point_in_ring(b.vertices(), a.vertices()[0]);
                if nested || rings_touch(a.vertices(), b.vertices()) {
                    return Err(GeometryError::ObstaclesOverlap { a: i, b: j });
                }
            }
        }
        Ok(Self {
            boundary,
            obstacles,
        })
    }

    pub fn boundary(&self) -> &Polygon {
        &self.boundary
    }

    pub fn obstacles(&self) -> &[Polygon] {
        &self.obstacles
    }

    /// Boundary followed by obstacles.
    pub fn rings(&self) -> impl Iterator<Item = &Polygon> {
        std::iter::once(&self.boundary).chain(self.obstacles.iter())
    }

    pub fn area(&self) -> f64 {
        self.boundary.area() - self.obstacles.iter().map(Polygon::area).sum::<f64>()
    }

    /// Strict interior membership. Points on the outer boundary or on an obstacle
    /// boundary (within [`EPS`]) are not contained.
    pub fn contains(&self, p: Point) -> bool {
        self.boundary.contains(p)
            && self
                .obstacles
                .iter()
                .all(|o| ring_distance(o.vertices(), p) > EPS && !point_in_ring(o.vertices(), p))
    }

    /// Maximal pieces of `line` lying in the free space, ordered along the
    /// line direction. Pieces running along a boundary edge are dropped.
    pub fn clip_line(&self, line: Line) -> Vec<Segment> {
        let rings: Vec<&[Point]> = self.rings().map(Polygon::vertices).collect();
        let len = line.direction.norm();
        if len == 0.0 || !len.is_finite() {
            return Vec::new();
        }
        let u = line.direction * (1.0 / len);
        clip_rings(&rings, line)
            .into_iter()
            .map(|(t0, t1)| Segment::new(line.origin + u * t0, line.origin + u * t1))
            .filter(|s| self.contains(s.midpoint()))
            .collect()
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        bounding_box(self.boundary.vertices())
    }
}

pub fn bounding_box(points: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

pub fn polyline_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| w[0].distance(w[1])).sum()
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

    #[test]
    fn signed_area_examples() {
        let ccw = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(Point::from_tuple);
        assert_eq!(signed_area(&ccw).unwrap(), 1.0);
        let mut cw = ccw.to_vec();
        cw.reverse();
        assert_eq!(signed_area(&cw).unwrap(), -1.0);
        let tri = [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)].map(Point::from_tuple);
        assert_eq!(signed_area(&tri).unwrap(), 2.0);
        assert_eq!(
            signed_area(&ccw[..2]),
            Err(GeometryError::TooFewVertices(2))
        );
    }

    #[test]
    fn polygon_validation() {
        assert!(matches!(
            Polygon::new(vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(2.0, 0.0)
            ]),
            Err(GeometryError::ZeroArea)
        ));
        // bow tie
        let bow = Polygon::new(
            [(0.0, 0.0), (2.0, 2.0), (2.0, 0.0), (0.0, 3.0)]
                .map(Point::from_tuple)
                .to_vec(),
        );
        assert!(matches!(bow, Err(GeometryError::SelfIntersection(..))));
        let dup = Polygon::new(
            [(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
                .map(Point::from_tuple)
                .to_vec(),
        );
        assert!(matches!(dup, Err(GeometryError::DuplicateVertex(1, 2))));
        let nan = Polygon::new(
            [(0.0, 0.0), (f64::NAN, 0.0), (0.0, 1.0)]
                .map(Point::from_tuple)
                .to_vec(),
        );
        assert_eq!(nan, Err(GeometryError::NonFinite(1)));
    }

    #[test]
    fn free_space_rejects_bad_obstacles() {
        let outer = square(0.0, 0.0, 10.0, 10.0);
        let crossing = square(8.0, 8.0, 12.0, 12.0);
        assert_eq!(
            FreeSpace::new(outer.clone(), vec![square(1.0, 1.0, 2.0, 2.0), crossing]),
            Err(GeometryError::ObstacleOutside { index: 1 })
        );
        let touching = square(0.0, 4.0, 2.0, 6.0);
        assert!(FreeSpace::new(outer.clone(), vec![touching]).is_err());
        let overlap = FreeSpace::new(
            outer.clone(),
            vec![square(2.0, 2.0, 5.0, 5.0), square(4.0, 4.0, 6.0, 6.0)],
        );
        assert_eq!(overlap, Err(GeometryError::ObstaclesOverlap { a: 0, b: 1 }));
        let nested = FreeSpace::new(
            outer,
            vec![square(2.0, 2.0, 8.0, 8.0), square(4.0, 4.0, 5.0, 5.0)],
        );
        assert!(nested.is_err());
    }

    #[test]
    fn orientation_is_normalized() {
        let outer = square(0.0, 0.0, 10.0, 10.0).reversed();
        let hole = square(4.0, 4.0, 6.0, 6.0);
        let fs = FreeSpace::new(outer, vec![hole]).unwrap();
        assert!(fs.boundary().is_ccw());
        assert!(!fs.obstacles()[0].is_ccw());
        assert!((fs.area() - 96.0).abs() < 1e-12);
    }

    #[test]
    fn clip_line_examples() {
        let empty = FreeSpace::new(square(0.0, 0.0, 10.0, 10.0), vec![]).unwrap();
        let vertical = Line::new(Point::new(5.0, -3.0), Point::new(0.0, 1.0));
        let segs = empty.clip_line(vertical);
        assert_eq!(segs.len(), 1);
        assert!(segs[0].a.distance(Point::new(5.0, 0.0)) < 1e-12);
        assert!(segs[0].b.distance(Point::new(5.0, 10.0)) < 1e-12);

        let holed = FreeSpace::new(
            square(0.0, 0.0, 10.0, 10.0),
            vec![square(4.0, 4.0, 6.0, 6.0)],
        )
        .unwrap();
        let segs = holed.clip_line(vertical);
        let expect = [((5.0, 0.0), (5.0, 4.0)), ((5.0, 6.0), (5.0, 10.0))];
        assert_eq!(segs.len(), 2);
        for (s, (a, b)) in segs.iter().zip(expect) {
            assert!(s.a.distance(Point::from_tuple(a)) < 1e-12);
            assert!(s.b.distance(Point::from_tuple(b)) < 1e-12);
        }

        let outside = Line::new(Point::new(20.0, 0.0), Point::new(0.0, 1.0));
        assert!(holed.clip_line(outside).is_empty());
        // along a boundary edge: nothing strictly inside
        let along = Line::new(Point::new(0.0, 0.0), Point::new(0.0, 1.0));
        assert!(holed.clip_line(along).is_empty());
        let along_right = Line::new(Point::new(10.0, 0.0), Point::new(0.0, 1.0));
        assert!(holed.clip_line(along_right).is_empty());
    }

    #[test]
    fn clip_line_through_vertices() {
        let diamond = poly(&[(5.0, 3.0), (7.0, 5.0), (5.0, 7.0), (3.0, 5.0)]);
        let fs = FreeSpace::new(square(0.0, 0.0, 10.0, 10.0), vec![diamond]).unwrap();
        let segs = fs.clip_line(Line::new(Point::new(0.0, 5.0), Point::new(1.0, 0.0)));
        assert_eq!(segs.len(), 2);
        assert!((segs[0].b.x - 3.0).abs() < 1e-12);
        assert!((segs[1].a.x - 7.0).abs() < 1e-12);
    }

    #[test]
    fn contains_tie_breaks() {
        let fs = FreeSpace::new(
            square(0.0, 0.0, 10.0, 10.0),
            vec![square(4.0, 4.0, 6.0, 6.0)],
        )
        .unwrap();
        assert!(fs.contains(Point::new(1.0, 1.0)));
        assert!(!fs.contains(Point::new(5.0, 5.0)));
        assert!(!fs.contains(Point::new(11.0, 5.0)));
        assert!(!fs.contains(Point::new(0.0, 5.0)));
        assert!(!fs.contains(Point::new(4.0, 5.0)));
        for v in fs.boundary().vertices() {
            assert!(!fs.contains(*v));
        }
        let unit = FreeSpace::new(square(0.0, 0.0, 1.0, 1.0), vec![]).unwrap();
        assert!(unit.contains(Point::new(0.5, 0.5)));
    }

    #[test]
    fn centroid_of_square() {
        let c = square(2.0, 2.0, 4.0, 6.0).centroid();
        assert!((c.x - 3.0).abs() < 1e-12 && (c.y - 4.0).abs() < 1e-12);
    }

    impl Point {
        fn from_tuple(t: (f64, f64)) -> Point {
            Point::new(t.0, t.1)
        }
    }
}
