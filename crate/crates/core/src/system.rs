//! Polygonal tree systems: spec-file parsing, the four axioms and the contact
//! structure between first-level subpolygons.

use std::fmt;

use num_complex::Complex64;
use petgraph::algo::connected_components;
use petgraph::graph::UnGraph;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    intersection_class, max_pairwise_distance, ConvexPolygon, GeometryError, IntersectionClass,
    Point, Similarity,
};

pub const DEFAULT_EPSILON_REL: f64 = 1e-9;

/// On-disk form of a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: String,
    pub polygon: Vec<[f64; 2]>,
    pub maps: Vec<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_rel: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub a: [f64; 2],
    pub b: [f64; 2],
    #[serde(default)]
    pub conjugate: bool,
}

/// Polygon `P` with vertices `A_1..A_n` and contractions `S_1..S_m`.
#[derive(Debug, Clone)]
pub struct PolygonalTreeSystem {
    name: String,
    polygon: ConvexPolygon,
    maps: Vec<Similarity>,
    subpolygons: Vec<ConvexPolygon>,
    epsilon_rel: f64,
    tol: f64,
}

impl PolygonalTreeSystem {
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<Point>,
        maps: Vec<Similarity>,
        epsilon_rel: f64,
    ) -> Result<Self> {
        if !(epsilon_rel.is_finite() && epsilon_rel > 0.0) {
            return Err(Error::Schema {
                path: "epsilon_rel".into(),
                message: format!("must be a positive finite number, got {epsilon_rel}"),
            });
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::Polygon {
                path: format!("polygon[{i}]"),
                source: GeometryError::NonFinite(i),
            });
        }
        let tol = epsilon_rel * max_pairwise_distance(&vertices);
        let polygon = ConvexPolygon::new(vertices, tol).map_err(|source| Error::Polygon {
            path: "polygon".into(),
            source,
        })?;
        if maps.len() < 2 {
            return Err(Error::TooFewMaps(maps.len()));
        }
        for (k, s) in maps.iter().enumerate() {
            let fin = [s.a.re, s.a.im, s.b.re, s.b.im]
                .iter()
                .all(|v| v.is_finite());
            if !fin {
                return Err(Error::NonFiniteMap { index: k + 1 });
            }
            let r = s.ratio();
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::NotContraction {
                    index: k + 1,
                    ratio: r,
                });
            }
        }
        let subpolygons = maps.iter().map(|s| s.map_polygon(&polygon)).collect();
        Ok(PolygonalTreeSystem {
            name: name.into(),
            polygon,
            maps,
            subpolygons,
            epsilon_rel,
            tol,
        })
    }

    pub fn from_spec(spec: &SpecFile) -> Result<Self> {
        let vertices = spec.polygon.iter().map(|&p| Point::from(p)).collect();
        let maps = spec
            .maps
            .iter()
            .map(|m| Similarity {
                a: Complex64::new(m.a[0], m.a[1]),
                b: Complex64::new(m.b[0], m.b[1]),
                conjugate: m.conjugate,
            })
            .collect();
        Self::new(
            spec.name.clone(),
            vertices,
            maps,
            spec.epsilon_rel.unwrap_or(DEFAULT_EPSILON_REL),
        )
    }

    pub fn to_spec(&self) -> SpecFile {
        SpecFile {
            name: self.name.clone(),
            polygon: self.polygon.vertices().iter().map(|&p| p.into()).collect(),
            maps: self
                .maps
                .iter()
                .map(|s| MapSpec {
                    a: [s.a.re, s.a.im],
                    b: [s.b.re, s.b.im],
                    conjugate: s.conjugate,
                })
                .collect(),
            epsilon_rel: Some(self.epsilon_rel),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn polygon(&self) -> &ConvexPolygon {
        &self.polygon
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.polygon.vertex(i)
    }

    pub fn vertices(&self) -> &[Point] {
        self.polygon.vertices()
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn map(&self, k: usize) -> &Similarity {
        &self.maps[k]
    }

    /// First-level cells `P_k = S_k(P)`.
    pub fn subpolygons(&self) -> &[ConvexPolygon] {
        &self.subpolygons
    }

    /// Number of vertices of `P`.
    pub fn n(&self) -> usize {
        self.polygon.len()
    }

    /// Number of maps.
    pub fn m(&self) -> usize {
        self.maps.len()
    }

    pub fn epsilon_rel(&self) -> f64 {
        self.epsilon_rel
    }

    /// Absolute coincidence tolerance, `epsilon_rel · diam(P)`.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn diameter(&self) -> f64 {
        self.polygon.diameter()
    }

    /// Largest contraction ratio.
    pub fn q(&self) -> f64 {
        self.maps.iter().map(|s| s.ratio()).fold(0.0, f64::max)
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(|s| s.ratio()).collect()
    }

    /// `S_k(A_i)`.
    pub fn vertex_image(&self, k: usize, i: usize) -> Point {
        self.maps[k].apply(self.polygon.vertex(i))
    }

    /// Index `i` with `S_k(A_i) = p`, if any.
    pub fn preimage_vertex(&self, k: usize, p: Point) -> Option<usize> {
        (0..self.n()).find(|&i| self.vertex_image(k, i).dist(p) <= self.tol)
    }

    /// Index of the vertex of `P` at `p`, if any.
    pub fn vertex_index_of(&self, p: Point) -> Option<usize> {
        self.polygon.vertex_index_of(p, self.tol)
    }

    /// Same system with the vertex list rotated so that old vertex `shift`
    /// becomes vertex 0. Maps are untouched.
    pub fn rotate_vertices(&self, shift: usize) -> Result<Self> {
        let n = self.n();
        let v: Vec<Point> = (0..n).map(|k| self.vertex((k + shift) % n)).collect();
        Self::new(self.name.clone(), v, self.maps.clone(), self.epsilon_rel)
    }

    /// Applies a similarity to the whole configuration: `P ↦ T(P)` and
    /// `S_k ↦ T∘S_k∘T⁻¹`. Orientation-reversing `T` also reverses the
    /// vertex list to keep it counterclockwise.
    pub fn transformed(&self, t: &Similarity) -> Result<Self> {
        let mut v: Vec<Point> = self.vertices().iter().map(|&p| t.apply(p)).collect();
        if t.conjugate {
            v[1..].reverse();
        }
        let inv = t.inverse();
        let maps = self
            .maps
            .iter()
            .map(|s| t.compose(s).compose(&inv))
            .collect();
        Self::new(self.name.clone(), v, maps, self.epsilon_rel)
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// Parses a spec document; schema errors carry the offending field path.
pub fn parse_system(text: &str) -> Result<PolygonalTreeSystem> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: SpecFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    PolygonalTreeSystem::from_spec(&spec)
}

pub fn load_system(path: impl AsRef<std::path::Path>) -> Result<PolygonalTreeSystem> {
    let text = std::fs::read_to_string(path)?;
    parse_system(&text)
}

/// One failed check. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom")]
pub enum Violation {
    /// Vertex `vertex` of `S_map(P)` lies outside `P`.
    D1 {
        map: usize,
        vertex: usize,
        witness: Point,
    },
    /// `P_i ∩ P_j` is more than a common vertex.
    D2 {
        pair: (usize, usize),
        witness: Point,
    },
    /// Vertex `vertex` of `P` is not a vertex of any subpolygon.
    D3 { vertex: usize, witness: Point },
    /// The contact graph is disconnected or has a cycle.
    D4 { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub name: String,
    pub accepted: bool,
    pub d1_ok: bool,
    pub d2_ok: bool,
    pub d3_ok: bool,
    pub d4_ok: bool,
    pub osc_ok: bool,
    pub one_point_ok: bool,
    pub violations: Vec<Violation>,
}

pub fn validate(sys: &PolygonalTreeSystem) -> ValidationReport {
    let tol = sys.tol();
    let p = sys.polygon();
    let subs = sys.subpolygons();
    let m = sys.m();
    let mut violations = Vec::new();

    let mut d1_ok = true;
    for (k, sub) in subs.iter().enumerate() {
        for i in 0..sys.n() {
            let w = sys.vertex_image(k, i);
            if !p.contains_point(w, tol) {
                d1_ok = false;
                violations.push(Violation::D1 {
                    map: k + 1,
                    vertex: i + 1,
                    witness: w,
                });
            }
        }
        debug_assert_eq!(sub.len(), sys.n());
    }

    let mut d2_ok = true;
    let mut osc_pairs = true;
    let mut one_point = true;
    for i in 0..m {
        for j in i + 1..m {
            let region = subs[i].intersection_region(&subs[j], tol);
            if region.is_empty() {
                continue;
            }
            if region.area() > tol * sys.diameter() {
                osc_pairs = false;
            }
            if region.diameter() > tol {
                one_point = false;
            }
            if let IntersectionClass::Overlap = intersection_class(&subs[i], &subs[j], tol) {
                d2_ok = false;
                violations.push(Violation::D2 {
                    pair: (i + 1, j + 1),
                    witness: region.centroid(),
                });
            }
        }
    }

    let mut d3_ok = true;
    for a in 0..sys.n() {
        let v = sys.vertex(a);
        let covered = (0..m).any(|k| sys.preimage_vertex(k, v).is_some());
        if !covered {
            d3_ok = false;
            violations.push(Violation::D3 {
                vertex: a + 1,
                witness: v,
            });
        }
    }

    let d4_ok = if d2_ok {
        match contact_graph(sys) {
            Ok(g) => match g.tree_defect() {
                None => true,
                Some(reason) => {
                    violations.push(Violation::D4 { reason });
                    false
                }
            },
            Err(e) => {
                violations.push(Violation::D4 {
                    reason: e.to_string(),
                });
                false
            }
        }
    } else {
        violations.push(Violation::D4 {
            reason: "undecidable while subpolygons overlap".into(),
        });
        false
    };

    let accepted = d1_ok && d2_ok && d3_ok && d4_ok;
    ValidationReport {
        name: sys.name().to_string(),
        accepted,
        d1_ok,
        d2_ok,
        d3_ok,
        d4_ok,
        osc_ok: d1_ok && osc_pairs,
        one_point_ok: one_point,
        violations,
    }
}

/// Bipartite incidence between subpolygons and the points where at least two
/// of them meet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactGraph {
    /// Number of subpolygon nodes (`0..m`).
    pub polygons: usize,
    pub contacts: Vec<Point>,
    /// `(polygon, contact)` index pairs, both 0-based.
    pub edges: Vec<(usize, usize)>,
}

impl ContactGraph {
    /// Polygons incident to contact `c`, ascending.
    pub fn polygons_at(&self, c: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|e| e.1 == c)
            .map(|e| e.0)
            .collect()
    }

    /// Index of the contact point within `tol` of `p`.
    pub fn contact_index(&self, p: Point, tol: f64) -> Option<usize> {
        self.contacts.iter().position(|&c| c.dist(p) <= tol)
    }

    /// Bipartite graph; polygon `k` is node `k`, contact `c` is node `m + c`.
    pub fn graph(&self) -> UnGraph<(), ()> {
        let mut g = UnGraph::with_capacity(self.polygons + self.contacts.len(), self.edges.len());
        for _ in 0..self.polygons + self.contacts.len() {
            g.add_node(());
        }
        for &(p, c) in &self.edges {
            g.add_edge(
                petgraph::graph::NodeIndex::new(p),
                petgraph::graph::NodeIndex::new(self.polygons + c),
                (),
            );
        }
        g
    }

    pub fn is_tree(&self) -> bool {
        self.tree_defect().is_none()
    }

    fn tree_defect(&self) -> Option<String> {
        let g = self.graph();
        let nodes = g.node_count();
        let comps = connected_components(&g);
        if comps != 1 {
            return Some(format!("{comps} connected components"));
        }
        if g.edge_count() != nodes - 1 {
            return Some(format!(
                "{} independent cycle(s)",
                g.edge_count() + 1 - nodes
            ));
        }
        None
    }

    /// Whether the subpolygons form one cluster when joined through contacts.
    pub fn polygons_connected(&self) -> bool {
        let mut uf = UnionFind::<usize>::new(self.polygons);
        for c in 0..self.contacts.len() {
            let ps = self.polygons_at(c);
            for w in ps.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        (1..self.polygons).all(|k| uf.equiv(0, k))
    }
}

/// Contact structure of the first-level subpolygons. Fails when two of them
/// overlap.
pub fn contact_graph(sys: &PolygonalTreeSystem) -> Result<ContactGraph> {
    let tol = sys.tol();
    let subs = sys.subpolygons();
    let m = sys.m();
    let mut contacts: Vec<Point> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            match intersection_class(&subs[i], &subs[j], tol) {
                IntersectionClass::Empty => {}
                IntersectionClass::Overlap => return Err(Error::Overlap(i + 1, j + 1)),
                IntersectionClass::SharedVertex(p) => {
                    if !contacts.iter().any(|c| c.dist(p) <= tol) {
                        contacts.push(p);
                    }
                }
            }
        }
    }
    let mut edges = Vec::new();
    for (c, &pt) in contacts.iter().enumerate() {
        for (k, sub) in subs.iter().enumerate() {
            if sub.vertex_index_of(pt, tol).is_some() {
                edges.push((k, c));
            }
        }
    }
    edges.sort();
    Ok(ContactGraph {
        polygons: m,
        contacts,
        edges,
    })
}

/// System with maps `S_i ∘ S′_j` in lexicographic `(i, j)` order.
pub fn compose_systems(
    a: &PolygonalTreeSystem,
    b: &PolygonalTreeSystem,
) -> Result<PolygonalTreeSystem> {
    let tol = a.tol().max(b.tol());
    if a.n() != b.n()
        || a.vertices()
            .iter()
            .zip(b.vertices())
            .any(|(p, q)| p.dist(*q) > tol)
    {
        return Err(Error::PolygonsDiffer);
    }
    let maps = a
        .maps()
        .iter()
        .flat_map(|s| b.maps().iter().map(move |t| s.compose(t)))
        .collect();
    PolygonalTreeSystem::new(
        format!("{}∘{}", a.name(), b.name()),
        a.vertices().to_vec(),
        maps,
        a.epsilon_rel(),
    )
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: D1={} D2={} D3={} D4={} OSC={} one-point={}",
            self.name,
            self.d1_ok,
            self.d2_ok,
            self.d3_ok,
            self.d4_ok,
            self.osc_ok,
            self.one_point_ok
        )
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parse_ex22() {
        let s = fixtures::ex22();
        assert_eq!(s.n(), 4);
        assert_eq!(s.m(), 2);
        let r = s.ratios();
        assert_abs_diff_eq!(r[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.tol(), 1e-9 * s.diameter(), epsilon = 1e-24);
    }

    #[test]
    fn parse_rejects_empty_maps() {
        let text = r#"{"name":"x","polygon":[[0,0],[1,0],[0,1]],"maps":[]}"#;
        let err = parse_system(text).unwrap_err();
        assert!(matches!(err, Error::TooFewMaps(0)));
        assert!(err.to_string().contains("m ≥ 2 required"));
    }

    #[test]
    fn parse_reports_field_paths() {
        let text =
            r#"{"name":"x","polygon":[[0,0],[1,0],[0,1]],"maps":[{"a":[0.5,0],"b":[0,"x"]}]}"#;
        match parse_system(text).unwrap_err() {
            Error::Schema { path, .. } => assert_eq!(path, "maps[0].b[1]"),
            e => panic!("unexpected {e}"),
        }
        let text = r#"{"name":"x","polygon":[[0,0],[1,0],[0,1]]}"#;
        assert!(matches!(
            parse_system(text).unwrap_err(),
            Error::Schema { .. }
        ));
        let text = r#"{"name":"x","polygon":[[0,0],[0,1],[1,0]],"maps":[]}"#;
        assert!(matches!(
            parse_system(text).unwrap_err(),
            Error::Polygon { .. }
        ));
        let text = r#"{"name":"x","polygon":[[0,0],[1,0],[0,1]],
            "maps":[{"a":[0.5,0],"b":[0,0]},{"a":[1.5,0],"b":[0,0]}]}"#;
        let err = parse_system(text).unwrap_err();
        assert!(matches!(err, Error::NotContraction { index: 2, .. }));
        assert!(err.to_string().contains("maps[1]"));
    }

    #[test]
    fn hata_vertices_from_fixed_point_labels() {
        // Independent solve of the label equations, starting from the fixed
        // points of S_1 and S_2 and propagating through the other labels.
        let s = fixtures::hata();
        let s1 = *s.map(0);
        let s2 = *s.map(1);
        let a1 = s1.fixed_point().unwrap();
        let a4 = s2.fixed_point().unwrap();
        let a5 = s1.apply(a4);
        let a3 = s2.apply(a5);
        let a6 = s1.apply(a3);
        let a2 = s2.apply(a6);
        let a7 = s1.apply(a2);
        let want = [a1, a2, a3, a4, a5, a6, a7];
        assert_eq!(s.n(), 7);
        for (i, w) in want.iter().enumerate() {
            assert!(
                s.vertex(i).dist(*w) < 1e-15,
                "A_{} = {} vs {}",
                i + 1,
                s.vertex(i),
                w
            );
        }
        assert!(ConvexPolygon::new(want.to_vec(), 1e-9).is_ok());
    }

    #[test]
    fn validate_fixtures() {
        for s in [
            fixtures::ex22(),
            fixtures::hata(),
            fixtures::ex22_variant(),
            fixtures::zipper(),
        ] {
            let r = s.validate();
            assert!(r.accepted, "{r}: {:?}", r.violations);
            assert!(r.osc_ok && r.one_point_ok);
            assert!(r.violations.is_empty());
        }
    }

    #[test]
    fn validate_overlap_names_pair() {
        let r = fixtures::overlap().validate();
        assert!(!r.d2_ok);
        assert!(!r.accepted);
        assert!(!r.osc_ok);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::D2 { pair: (1, 2), .. })));
    }

    #[test]
    fn half_shift_only_touches_at_a_vertex() {
        // z/2 + 1/2 on the sheared quadrilateral meets z/2 in the single
        // common vertex (1/2, 0), so D2 holds there.
        let mut spec = fixtures::ex22().to_spec();
        spec.maps[1] = MapSpec {
            a: [0.5, 0.0],
            b: [0.5, 0.0],
            conjugate: false,
        };
        let s = PolygonalTreeSystem::from_spec(&spec).unwrap();
        let subs = s.subpolygons();
        assert_eq!(
            intersection_class(&subs[0], &subs[1], s.tol()),
            IntersectionClass::SharedVertex(Point::new(0.5, 0.0))
        );
        assert!(s.validate().d2_ok);
    }

    #[test]
    fn validate_disjoint_fails_d4() {
        let r = fixtures::disjoint().validate();
        assert!(r.d1_ok && r.d2_ok);
        assert!(!r.d4_ok);
        // corners (1,0) and (0,1) are not covered
        assert!(!r.d3_ok);
    }

    #[test]
    fn d1_violation_is_reported() {
        let s = PolygonalTreeSystem::new(
            "out",
            fixtures::unit_square(),
            vec![
                Similarity::new(Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0), false).unwrap(),
                Similarity::new(Complex64::new(0.5, 0.0), Complex64::new(0.8, 0.0), false).unwrap(),
            ],
            DEFAULT_EPSILON_REL,
        )
        .unwrap();
        let r = s.validate();
        assert!(!r.d1_ok);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::D1 { map: 2, .. })));
    }

    #[test]
    fn contact_graph_examples() {
        let g = contact_graph(&fixtures::ex22()).unwrap();
        assert_eq!(g.polygons, 2);
        assert_eq!(g.contacts.len(), 1);
        assert_eq!(g.edges.len(), 2);
        assert_abs_diff_eq!(g.contacts[0].x, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(g.contacts[0].y, 0.5 / 2f64.sqrt(), epsilon = 1e-12);

        let g = contact_graph(&fixtures::hata()).unwrap();
        assert_eq!((g.polygons, g.contacts.len(), g.edges.len()), (2, 1, 2));
        assert!(g.contacts[0].dist(Point::new(0.5, 0.0)) < 1e-12);

        assert!(contact_graph(&fixtures::overlap()).is_err());
    }

    #[test]
    fn star_contact_is_a_tree() {
        // The kite's far corner is shared by three subpolygons.
        let s = fixtures::ex24();
        let g = contact_graph(&s).unwrap();
        let c = g
            .contact_index(s.vertex(2), s.tol())
            .expect("corner is a contact");
        assert_eq!(g.polygons_at(c), vec![3, 4, 5]);
        assert!(g.is_tree());
        assert!(s.validate().d4_ok);
    }

    #[test]
    fn compose_examples() {
        let s = fixtures::ex22();
        let ss = compose_systems(&s, &s).unwrap();
        assert_eq!(ss.m(), 4);
        let want = [0.25, 0.5 / 2f64.sqrt(), 0.5 / 2f64.sqrt(), 0.5];
        for (r, w) in ss.ratios().iter().zip(want) {
            assert_abs_diff_eq!(*r, w, epsilon = 1e-15);
        }
        assert!(ss.validate().accepted);
        let h = fixtures::hata();
        let hh = compose_systems(&h, &h).unwrap();
        assert_eq!(hh.m(), 4);
        assert!(hh.validate().d4_ok);
        assert!(matches!(
            compose_systems(&s, &h),
            Err(Error::PolygonsDiffer)
        ));
    }

    #[test]
    fn d3_vertex_images() {
        for s in [fixtures::ex22(), fixtures::hata(), fixtures::ex24()] {
            for a in 0..s.n() {
                assert!((0..s.m()).any(|k| s.preimage_vertex(k, s.vertex(a)).is_some()));
            }
        }
    }

    #[test]
    fn rotation_keeps_validity() {
        let s = fixtures::hata().rotate_vertices(3).unwrap();
        assert!(s.validate().accepted);
        assert_eq!(s.vertex(0), fixtures::hata().vertex(3));
    }

    #[test]
    fn spec_round_trip() {
        let s = fixtures::hata();
        let text = serde_json::to_string(&s.to_spec()).unwrap();
        let t = parse_system(&text).unwrap();
        assert_eq!(t.vertices(), s.vertices());
        assert_eq!(t.maps(), s.maps());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn validated() -> impl Strategy<Value = PolygonalTreeSystem> {
            prop_oneof![
                Just(fixtures::ex22()),
                Just(fixtures::hata()),
                Just(fixtures::ex22_variant()),
                Just(fixtures::zipper()),
                Just(fixtures::ex24()),
            ]
        }

        fn motion() -> impl Strategy<Value = Similarity> {
            (
                0.2f64..5.0,
                0.0f64..std::f64::consts::TAU,
                -3.0f64..3.0,
                -3.0f64..3.0,
                any::<bool>(),
            )
                .prop_map(|(r, t, x, y, c)| Similarity {
                    a: Complex64::from_polar(r, t),
                    b: Complex64::new(x, y),
                    conjugate: c,
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn composition_closure(s in validated()) {
                let ss = compose_systems(&s, &s).unwrap();
                prop_assert!(ss.validate().accepted);
            }

            #[test]
            fn d2_restated(s in validated()) {
                let subs = s.subpolygons();
                for i in 0..s.m() {
                    for j in i + 1..s.m() {
                        let c = intersection_class(&subs[i], &subs[j], s.tol());
                        prop_assert!(!matches!(c, IntersectionClass::Overlap));
                    }
                }
            }

            #[test]
            fn contact_graph_is_tree(s in validated()) {
                prop_assert!(contact_graph(&s).unwrap().is_tree());
            }

            #[test]
            fn validity_is_similarity_invariant(s in validated(), t in motion()) {
                let moved = s.transformed(&t).unwrap();
                let r = moved.validate();
                prop_assert!(r.accepted, "{:?}", r.violations);
            }
        }
    }
}
