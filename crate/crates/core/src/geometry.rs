//! Plane primitives: points, similarities in complex form, convex polygons and
//! the predicates the rest of the crate is built on.
//!
//! Every predicate takes an absolute length tolerance `tol`. Systems derive it
//! once as `epsilon_rel * diam(P)` so that all coincidence tests agree.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("polygon is not strictly convex at vertex {0}")]
    NotConvex(usize),
    #[error("polygon is listed clockwise; vertices must be counterclockwise")]
    Clockwise,
    #[error("similarity coefficients must be finite")]
    NonFiniteMap,
    #[error("similarity ratio {0} is not in (0, 1)")]
    NotContraction(f64),
    #[error("vertex index {index} out of range for a {n}-gon")]
    VertexIndex { index: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point { x: z.re, y: z.im }
    }
}

impl From<Point> for Complex64 {
    fn from(p: Point) -> Self {
        Complex64::new(p.x, p.y)
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Lexicographic total order on (x, y).
    pub fn total_cmp(&self, o: &Point) -> Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Plane similarity `z ↦ a·z + b`, or `z ↦ a·z̄ + b` when `conjugate` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub a: Complex64,
    pub b: Complex64,
    pub conjugate: bool,
}

impl Similarity {
    /// Builds a contracting similarity; rejects non-finite coefficients and
    /// ratios outside `(0, 1)`.
    pub fn new(a: Complex64, b: Complex64, conjugate: bool) -> Result<Self, GeometryError> {
        if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(GeometryError::NonFiniteMap);
        }
        let ratio = a.norm();
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(GeometryError::NotContraction(ratio));
        }
        Ok(Similarity { a, b, conjugate })
    }

    pub const fn identity() -> Self {
        Similarity {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            conjugate: false,
        }
    }

    /// Lipschitz constant `|a|`.
    pub fn ratio(&self) -> f64 {
        self.a.norm()
    }

    pub fn apply(&self, p: Point) -> Point {
        let z = Complex64::from(p);
        let z = if self.conjugate { z.conj() } else { z };
        Point::from(self.a * z + self.b)
    }

    /// `self ∘ inner`, i.e. `p ↦ self(inner(p))`.
    pub fn compose(&self, inner: &Similarity) -> Similarity {
        let (a2, b2) = if self.conjugate {
            (inner.a.conj(), inner.b.conj())
        } else {
            (inner.a, inner.b)
        };
        Similarity {
            a: self.a * a2,
            b: self.a * b2 + self.b,
            conjugate: self.conjugate ^ inner.conjugate,
        }
    }

    pub fn inverse(&self) -> Similarity {
        // z = a·w + b  ⇒  w = (z − b)/a ; with conjugation w̄ = (z − b)/a.
        let inv = self.a.inv();
        if self.conjugate {
            Similarity {
                a: inv.conj(),
                b: -(self.b * inv).conj(),
                conjugate: true,
            }
        } else {
            Similarity {
                a: inv,
                b: -self.b * inv,
                conjugate: false,
            }
        }
    }

    /// Unique fixed point; `None` for maps with `|a| = 1` and no fixed point.
    pub fn fixed_point(&self) -> Option<Point> {
        if self.conjugate {
            // z = a z̄ + b. Writing the real-linear system explicitly.
            let (ar, ai, br, bi) = (self.a.re, self.a.im, self.b.re, self.b.im);
            // x + iy = (ar + i ai)(x − i y) + b
            // x = ar x + ai y + br ; y = ai x − ar y + bi
            let m = [[1.0 - ar, -ai], [-ai, 1.0 + ar]];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det.abs() < 1e-300 {
                return None;
            }
            let x = (br * m[1][1] - m[0][1] * bi) / det;
            let y = (m[0][0] * bi - m[1][0] * br) / det;
            Some(Point::new(x, y))
        } else {
            let d = Complex64::new(1.0, 0.0) - self.a;
            if d.norm() < 1e-300 {
                return None;
            }
            Some(Point::from(self.b / d))
        }
    }

    /// Applies the map to every vertex of `poly`; conjugate maps reverse the
    /// orientation, so the image list is re-ordered to stay counterclockwise
    /// while keeping the image of vertex 0 in front.
    pub fn map_polygon(&self, poly: &ConvexPolygon) -> ConvexPolygon {
        let mut v: Vec<Point> = poly.vertices.iter().map(|&p| self.apply(p)).collect();
        if self.conjugate {
            v[1..].reverse();
        }
        ConvexPolygon { vertices: v }
    }
}

/// How two closed convex polygons meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", content = "point")]
pub enum IntersectionClass {
    Empty,
    SharedVertex(Point),
    Overlap,
}

/// Result of clipping one convex polygon by another.
#[derive(Debug, Clone)]
pub struct ClipRegion {
    pub points: Vec<Point>,
}

impl ClipRegion {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn diameter(&self) -> f64 {
        max_pairwise_distance(&self.points)
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.points).abs()
    }

    pub fn centroid(&self) -> Point {
        centroid(&self.points)
    }
}

/// Strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>, tol: f64) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i].dist(vertices[j]) <= tol {
                    return Err(GeometryError::RepeatedVertex(i, j));
                }
            }
        }
        if shoelace(&vertices) < 0.0 {
            return Err(GeometryError::Clockwise);
        }
        for k in 0..n {
            let prev = vertices[(k + n - 1) % n];
            let cur = vertices[k];
            let next = vertices[(k + 1) % n];
            let e1 = cur - prev;
            let e2 = next - cur;
            // Distance of `next` from the line through the previous edge.
            if e1.cross(e2) <= tol * e1.norm() {
                return Err(GeometryError::NotConvex(k));
            }
        }
        // A star-shaped self-intersecting list can pass the local test; the
        // total turning of a simple convex polygon is exactly 2π.
        let turning: f64 = (0..n)
            .map(|k| {
                let e1 = vertices[k] - vertices[(k + n - 1) % n];
                let e2 = vertices[(k + 1) % n] - vertices[k];
                e1.cross(e2).atan2(e1.dot(e2))
            })
            .sum();
        if (turning - 2.0 * PI).abs() > 1e-6 {
            return Err(GeometryError::NotConvex(0));
        }
        Ok(ConvexPolygon { vertices })
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

    pub fn vertex(&self, k: usize) -> Point {
        self.vertices[k]
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n]))
    }

    pub fn diameter(&self) -> f64 {
        max_pairwise_distance(&self.vertices)
    }

    /// Vertex average; lies in the interior.
    pub fn centroid(&self) -> Point {
        centroid(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    /// Signed distance of `p` to the line of edge `k`; positive inside.
    fn edge_distance(&self, k: usize, p: Point) -> f64 {
        let a = self.vertices[k];
        let b = self.vertices[(k + 1) % self.vertices.len()];
        let e = b - a;
        e.cross(p - a) / e.norm()
    }

    /// Closed-region membership with tolerance.
    pub fn contains_point(&self, p: Point, tol: f64) -> bool {
        (0..self.vertices.len()).all(|k| self.edge_distance(k, p) >= -tol)
    }

    /// Every vertex of `other` lies in `self` (closed, with tolerance).
    pub fn contains(&self, other: &ConvexPolygon, tol: f64) -> bool {
        other.vertices.iter().all(|&q| self.contains_point(q, tol))
    }

    /// Index of a vertex within `tol` of `p`.
    pub fn vertex_index_of(&self, p: Point, tol: f64) -> Option<usize> {
        self.vertices.iter().position(|&v| v.dist(p) <= tol)
    }

    /// Interior angle at vertex `k`, in `(0, π)`.
    pub fn vertex_angle(&self, k: usize) -> Result<f64, GeometryError> {
        let n = self.vertices.len();
        if k >= n {
            return Err(GeometryError::VertexIndex { index: k, n });
        }
        let v = self.vertices[k];
        let u1 = self.vertices[(k + n - 1) % n] - v;
        let u2 = self.vertices[(k + 1) % n] - v;
        Ok(angle_between(u1, u2))
    }

    /// Euclidean distance from `p` to the closed region.
    pub fn distance_to_point(&self, p: Point) -> f64 {
        if self.contains_point(p, 0.0) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Clips `self` against the half-planes of `clipper`.
    ///
    /// Vertices within `tol` of a clipping line count as on the line and are
    /// kept unmoved; new crossing points are only created for edges running
    /// from strictly inside to strictly outside. A vertex touch therefore
    /// collapses to (copies of) the touching vertex instead of a sliver.
    pub fn clip_by(&self, clipper: &ConvexPolygon, tol: f64) -> ClipRegion {
        let mut out = self.vertices.clone();
        for k in 0..clipper.len() {
            if out.is_empty() {
                break;
            }
            let input = std::mem::take(&mut out);
            let dist: Vec<f64> = input.iter().map(|&p| clipper.edge_distance(k, p)).collect();
            let len = input.len();
            for idx in 0..len {
                let sidx = (idx + len - 1) % len;
                let (s, e) = (input[sidx], input[idx]);
                let (ds, de) = (dist[sidx], dist[idx]);
                let e_in = de >= -tol;
                let s_in = ds >= -tol;
                if e_in {
                    if !s_in && de > tol {
                        out.push(crossing(s, e, ds, de));
                    }
                    out.push(e);
                } else if s_in && ds > tol {
                    out.push(crossing(s, e, ds, de));
                }
            }
        }
        ClipRegion { points: out }
    }

    /// Canonical key used to make symmetric predicates order-independent.
    fn order_key(&self, other: &ConvexPolygon) -> Ordering {
        let n = self.vertices.len().min(other.vertices.len());
        for k in 0..n {
            let c = self.vertices[k].total_cmp(&other.vertices[k]);
            if c != Ordering::Equal {
                return c;
            }
        }
        self.vertices.len().cmp(&other.vertices.len())
    }

    /// Intersection of the two polygons, clipped in a canonical order so that
    /// `intersection_region(a, b)` and `intersection_region(b, a)` agree.
    pub fn intersection_region(&self, other: &ConvexPolygon, tol: f64) -> ClipRegion {
        if self.order_key(other) == Ordering::Greater {
            self.clip_by(other, tol)
        } else {
            other.clip_by(self, tol)
        }
    }
}

fn crossing(s: Point, e: Point, ds: f64, de: f64) -> Point {
    let t = ds / (ds - de);
    s + (e - s) * t
}

/// Classifies `P1 ∩ P2`: empty, a single common vertex, or anything larger
/// (including a single point that is not a vertex of both).
pub fn intersection_class(p1: &ConvexPolygon, p2: &ConvexPolygon, tol: f64) -> IntersectionClass {
    let region = p1.intersection_region(p2, tol);
    if region.is_empty() {
        return IntersectionClass::Empty;
    }
    if region.diameter() > tol {
        return IntersectionClass::Overlap;
    }
    let c = region.centroid();
    let (first, second) = if p1.order_key(p2) == Ordering::Greater {
        (p2, p1)
    } else {
        (p1, p2)
    };
    match (
        first.vertex_index_of(c, tol),
        second.vertex_index_of(c, tol),
    ) {
        (Some(i), Some(_)) => IntersectionClass::SharedVertex(first.vertex(i)),
        _ => IntersectionClass::Overlap,
    }
}

/// Distance between the closed regions; zero iff they intersect.
pub fn polygon_distance(p1: &ConvexPolygon, p2: &ConvexPolygon) -> f64 {
    if !separated(p1, p2) && !separated(p2, p1) {
        return 0.0;
    }
    let a = p1
        .vertices
        .iter()
        .map(|&v| p2.distance_to_point(v))
        .fold(f64::INFINITY, f64::min);
    let b = p2
        .vertices
        .iter()
        .map(|&v| p1.distance_to_point(v))
        .fold(f64::INFINITY, f64::min);
    a.min(b)
}

/// Some edge line of `p` has all of `q` strictly on its outer side.
fn separated(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    (0..p.len()).any(|k| q.vertices.iter().all(|&v| p.edge_distance(k, v) < 0.0))
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let len2 = e.dot(e);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(e) / len2).clamp(0.0, 1.0);
    p.dist(a + e * t)
}

/// Unsigned angle between two direction vectors, in `[0, π]`.
pub fn angle_between(u: Point, v: Point) -> f64 {
    u.cross(v).abs().atan2(u.dot(v))
}

fn shoelace(pts: &[Point]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n).map(|k| pts[k].cross(pts[(k + 1) % n])).sum::<f64>()
}

fn centroid(pts: &[Point]) -> Point {
    let n = pts.len().max(1) as f64;
    let s = pts.iter().fold(Point::default(), |acc, &p| acc + p);
    s * (1.0 / n)
}

/// Maximum distance between two points of the set (0 for fewer than two).
///
/// Above 512 points the search runs over the convex hull only.
pub fn max_pairwise_distance(pts: &[Point]) -> f64 {
    let hull;
    let pts = if pts.len() > 512 {
        hull = convex_hull(pts);
        &hull[..]
    } else {
        pts
    };
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.max(pts[i].dist(pts[j]));
        }
    }
    best
}

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
pub fn convex_hull(pts: &[Point]) -> Vec<Point> {
    let mut p: Vec<Point> = pts.to_vec();
    p.sort_by(|a, b| a.total_cmp(b));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 {
            let l = lower.len();
            if (lower[l - 1] - lower[l - 2]).cross(q - lower[l - 1]) <= 0.0 {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(q);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 {
            let l = upper.len();
            if (upper[l - 1] - upper[l - 2]).cross(q - upper[l - 1]) <= 0.0 {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-9;
    const R2: f64 = std::f64::consts::SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square(x0: f64, y0: f64, s: f64) -> ConvexPolygon {
        ConvexPolygon::new(
            vec![
                Point::new(x0, y0),
                Point::new(x0 + s, y0),
                Point::new(x0 + s, y0 + s),
                Point::new(x0, y0 + s),
            ],
            TOL,
        )
        .unwrap()
    }

    fn ex22_polygon() -> ConvexPolygon {
        ConvexPolygon::new(
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.0, 1.0 / R2),
                Point::new(0.5, 1.0 / R2),
            ],
            TOL,
        )
        .unwrap()
    }

    fn ex22_maps() -> (Similarity, Similarity) {
        (
            Similarity::new(c(0.5, 0.0), c(0.0, 0.0), false).unwrap(),
            Similarity::new(c(0.0, 1.0 / R2), c(1.0, 0.0), false).unwrap(),
        )
    }

    fn hata_maps() -> (Similarity, Similarity) {
        (
            Similarity::new(c(0.5, 0.5), c(0.0, 0.0), true).unwrap(),
            Similarity::new(c(0.5, 0.0), c(0.5, 0.0), true).unwrap(),
        )
    }

    #[test]
    fn apply_examples() {
        let (_, s2) = hata_maps();
        let p = s2.apply(Point::new(0.0, 0.0));
        assert_abs_diff_eq!(p.x, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-15);

        let (s1, _) = ex22_maps();
        let p = s1.apply(Point::new(1.0, 0.75));
        assert_abs_diff_eq!(p.x, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 0.375, epsilon = 1e-15);

        let s = Similarity::new(c(0.5, 0.0), c(0.0, 0.0), false).unwrap();
        assert_eq!(s.apply(Point::default()), Point::default());
    }

    #[test]
    fn compose_examples() {
        let (s1, _) = ex22_maps();
        let s11 = s1.compose(&s1);
        assert_abs_diff_eq!(s11.ratio(), 0.25, epsilon = 1e-15);
        assert_eq!(s11.apply(Point::new(1.0, 2.0)), Point::new(0.25, 0.5));

        // Two reflections cancel: (1+i)/2 · conj((z̄+1)/2) = (1+i)(z+1)/4.
        let (h1, h2) = hata_maps();
        let h = h1.compose(&h2);
        assert!(!h.conjugate);
        assert_abs_diff_eq!(h.ratio(), (1.0 / R2) * 0.5, epsilon = 1e-15);
        for p in [
            Point::new(0.3, -0.7),
            Point::new(2.0, 1.5),
            Point::new(-1.1, 0.4),
        ] {
            let by_hand = Complex64::from(p) * c(0.25, 0.25) + c(0.25, 0.25);
            let q = h.apply(p);
            assert_abs_diff_eq!(q.x, by_hand.re, epsilon = 1e-14);
            assert_abs_diff_eq!(q.y, by_hand.im, epsilon = 1e-14);
            let direct = h1.apply(h2.apply(p));
            assert_abs_diff_eq!(q.x, direct.x, epsilon = 1e-14);
            assert_abs_diff_eq!(q.y, direct.y, epsilon = 1e-14);
        }
    }

    #[test]
    fn rejects_non_contractions() {
        assert!(Similarity::new(c(1.0, 0.0), c(0.0, 0.0), false).is_err());
        assert!(Similarity::new(c(0.0, 0.0), c(0.0, 0.0), false).is_err());
        assert!(Similarity::new(c(f64::NAN, 0.0), c(0.0, 0.0), false).is_err());
    }

    #[test]
    fn inverse_and_fixed_point() {
        let (h1, h2) = hata_maps();
        for s in [h1, h2, h1.compose(&h2)] {
            let inv = s.inverse();
            let p = Point::new(0.37, -0.21);
            let q = inv.apply(s.apply(p));
            assert!(q.dist(p) < 1e-14);
            let f = s.fixed_point().unwrap();
            assert!(s.apply(f).dist(f) < 1e-14);
        }
        let (_, s2) = ex22_maps();
        let f = s2.fixed_point().unwrap();
        assert_abs_diff_eq!(f.x, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.y, R2 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn map_polygon_examples() {
        let p = ex22_polygon();
        let (s1, _) = ex22_maps();
        let q = s1.map_polygon(&p);
        let want = [(0.0, 0.0), (0.5, 0.0), (0.5, 0.5 / R2), (0.25, 0.5 / R2)];
        for (v, w) in q.vertices().iter().zip(want) {
            assert_abs_diff_eq!(v.x, w.0, epsilon = 1e-15);
            assert_abs_diff_eq!(v.y, w.1, epsilon = 1e-15);
        }
        let (_, h2) = hata_maps();
        let img = h2.map_polygon(&p);
        assert_eq!(img.len(), p.len());
        assert!(img.area() > 0.0);
        assert!(ConvexPolygon::new(img.vertices().to_vec(), TOL).is_ok());
        assert_eq!(img.vertex(0), h2.apply(p.vertex(0)));
    }

    #[test]
    fn polygon_validation() {
        assert_eq!(
            ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)], TOL),
            Err(GeometryError::TooFewVertices(2))
        );
        let cw = vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 0.0),
        ];
        assert_eq!(ConvexPolygon::new(cw, TOL), Err(GeometryError::Clockwise));
        let dart = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 0.3),
            Point::new(1.0, 2.0),
        ];
        assert!(matches!(
            ConvexPolygon::new(dart, TOL),
            Err(GeometryError::NotConvex(_))
        ));
        let collinear = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 1.0),
        ];
        assert!(matches!(
            ConvexPolygon::new(collinear, TOL),
            Err(GeometryError::NotConvex(_))
        ));
        let repeated = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(matches!(
            ConvexPolygon::new(repeated, TOL),
            Err(GeometryError::RepeatedVertex(1, 2))
        ));
    }

    #[test]
    fn contains_examples() {
        let p = ex22_polygon();
        let (s1, s2) = ex22_maps();
        assert!(p.contains(&s1.map_polygon(&p), TOL));
        assert!(p.contains(&s2.map_polygon(&p), TOL));
        assert!(p.contains(&p, TOL));
        let shifted = Similarity {
            a: c(1.0, 0.0),
            b: c(10.0, 0.0),
            conjugate: false,
        };
        assert!(!p.contains(&shifted.map_polygon(&p), TOL));
    }

    #[test]
    fn intersection_class_examples() {
        let p = ex22_polygon();
        let (s1, s2) = ex22_maps();
        let p1 = s1.map_polygon(&p);
        let p2 = s2.map_polygon(&p);
        match intersection_class(&p1, &p2, TOL) {
            IntersectionClass::SharedVertex(v) => {
                assert_abs_diff_eq!(v.x, 0.5, epsilon = 1e-12);
                assert_abs_diff_eq!(v.y, 0.5 / R2, epsilon = 1e-12);
            }
            other => panic!("expected a shared vertex, got {other:?}"),
        }
        assert_eq!(
            intersection_class(&square(0.0, 0.0, 1.0), &square(4.0, 0.0, 1.0), TOL),
            IntersectionClass::Empty
        );
        assert_eq!(intersection_class(&p, &p, TOL), IntersectionClass::Overlap);
        // Shared edge is more than one point.
        assert_eq!(
            intersection_class(&square(0.0, 0.0, 1.0), &square(1.0, 0.0, 1.0), TOL),
            IntersectionClass::Overlap
        );
        // Vertex of one polygon on the interior of the other's edge.
        let tri = ConvexPolygon::new(
            vec![
                Point::new(1.0, 0.5),
                Point::new(2.0, 0.0),
                Point::new(2.0, 1.0),
            ],
            TOL,
        )
        .unwrap();
        assert_eq!(
            intersection_class(&square(0.0, 0.0, 1.0), &tri, TOL),
            IntersectionClass::Overlap
        );
        // Corner to corner.
        assert_eq!(
            intersection_class(&square(0.0, 0.0, 1.0), &square(1.0, 1.0, 1.0), TOL),
            IntersectionClass::SharedVertex(Point::new(1.0, 1.0))
        );
    }

    #[test]
    fn vertex_angles() {
        let sq = square(0.0, 0.0, 1.0);
        for k in 0..4 {
            assert_abs_diff_eq!(sq.vertex_angle(k).unwrap(), PI / 2.0, epsilon = 1e-15);
        }
        assert!(sq.vertex_angle(4).is_err());
        let p = ex22_polygon();
        let total: f64 = (0..4).map(|k| p.vertex_angle(k).unwrap()).sum();
        assert_abs_diff_eq!(total, 2.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn kite_angle_at_apex() {
        let s =
            1.0 / (55f64.to_radians().sin() / 15f64.to_radians().tan() + 55f64.to_radians().cos());
        let t = s * 55f64.to_radians().sin() / 15f64.to_radians().sin();
        let (c15, s15) = (15f64.to_radians().cos(), 15f64.to_radians().sin());
        let kite = ConvexPolygon::new(
            vec![
                Point::new(0.0, 0.0),
                Point::new(t * c15, -t * s15),
                Point::new(1.0, 0.0),
                Point::new(t * c15, t * s15),
            ],
            TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(kite.vertex_angle(0).unwrap(), PI / 6.0, epsilon = 1e-12);
        for k in 1..4 {
            assert_abs_diff_eq!(
                kite.vertex_angle(k).unwrap(),
                110f64.to_radians(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn polygon_distance_examples() {
        assert_abs_diff_eq!(
            polygon_distance(&square(0.0, 0.0, 1.0), &square(2.0, 0.0, 1.0)),
            1.0,
            epsilon = 1e-15
        );
        assert_eq!(
            polygon_distance(&square(0.0, 0.0, 1.0), &square(1.0, 1.0, 1.0)),
            0.0
        );
        let p = ex22_polygon();
        let (s1, s2) = ex22_maps();
        assert!(polygon_distance(&s1.map_polygon(&p), &s2.map_polygon(&p)) < 1e-12);
        // diagonal gap
        let d = polygon_distance(&square(0.0, 0.0, 1.0), &square(2.0, 2.0, 1.0));
        assert_abs_diff_eq!(d, R2, epsilon = 1e-15);
    }

    #[test]
    fn hull_diameter_matches_brute_force() {
        let pts: Vec<Point> = (0..700)
            .map(|k| {
                let t = k as f64 * 0.37;
                Point::new(t.cos() * (1.0 + 0.3 * (3.0 * t).sin()), t.sin())
            })
            .collect();
        let mut brute = 0.0f64;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                brute = brute.max(pts[i].dist(pts[j]));
            }
        }
        assert_abs_diff_eq!(max_pairwise_distance(&pts), brute, epsilon = 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn similarity() -> impl Strategy<Value = Similarity> {
            (
                0.05f64..0.95,
                0.0f64..(2.0 * PI),
                -2.0f64..2.0,
                -2.0f64..2.0,
                any::<bool>(),
            )
                .prop_map(|(r, t, bx, by, conj)| {
                    Similarity::new(Complex64::from_polar(r, t), c(bx, by), conj).unwrap()
                })
        }

        fn point() -> impl Strategy<Value = Point> {
            (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(x, y)| Point::new(x, y))
        }

        proptest! {
            #[test]
            fn metric_identity(s in similarity(), p in point(), q in point()) {
                let d = p.dist(q);
                let lhs = s.apply(p).dist(s.apply(q));
                prop_assert!((lhs - s.ratio() * d).abs() <= 1e-12 * d.max(1e-300) + 1e-15);
            }

            #[test]
            fn compose_is_pointwise(s in similarity(), t in similarity(), p in point()) {
                let st = s.compose(&t);
                prop_assert!(st.apply(p).dist(s.apply(t.apply(p))) <= 1e-12);
                prop_assert!((st.ratio() - s.ratio() * t.ratio()).abs() <= 1e-15);
            }

            #[test]
            fn compose_associative(a in similarity(), b in similarity(), d in similarity(), p in point()) {
                let l = a.compose(&b).compose(&d).apply(p);
                let r = a.compose(&b.compose(&d)).apply(p);
                prop_assert!(l.dist(r) <= 1e-12 * (1.0 + l.norm()));
            }

            #[test]
            fn map_polygon_stays_ccw(s in similarity()) {
                let sq = square(0.0, 0.0, 1.0);
                let img = s.map_polygon(&sq);
                prop_assert!(img.area() > 0.0);
                prop_assert_eq!(img.len(), 4);
            }

            #[test]
            fn intersection_class_symmetric(s in similarity(), t in similarity()) {
                let sq = square(0.0, 0.0, 1.0);
                let a = s.map_polygon(&sq);
                let b = t.map_polygon(&sq);
                prop_assert_eq!(intersection_class(&a, &b, TOL), intersection_class(&b, &a, TOL));
            }

            #[test]
            fn nested_containment(i in 0usize..2, j in 0usize..2) {
                let p = ex22_polygon();
                let (s1, s2) = ex22_maps();
                let maps = [s1, s2];
                prop_assert!(p.contains(&maps[i].compose(&maps[j]).map_polygon(&p), TOL));
            }
        }
    }
}
