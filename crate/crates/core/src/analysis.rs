//! Metric constants of a system, ramification-order caps and the
//! bounded-turning certificate with its empirical check on skeletons.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::attractor::vertex_fiber;
use crate::error::{Error, Result};
use crate::geometry::{angle_between, max_pairwise_distance, polygon_distance, Point};
use crate::maintree::{PathIndex, SkeletonTree};
use crate::system::{contact_graph, PolygonalTreeSystem};

/// Separation constant: the least distance from a vertex of `P` to a
/// subpolygon not containing it, and between disjoint subpolygons.
pub fn compute_rho(sys: &PolygonalTreeSystem) -> f64 {
    let tol = sys.tol();
    let subs = sys.subpolygons();
    let mut rho = f64::INFINITY;
    for &a in sys.vertices() {
        for sub in subs {
            if !sub.contains_point(a, tol) {
                rho = rho.min(sub.distance_to_point(a));
            }
        }
    }
    for i in 0..subs.len() {
        for j in i + 1..subs.len() {
            let d = polygon_distance(&subs[i], &subs[j]);
            if d > tol {
                rho = rho.min(d);
            }
        }
    }
    rho
}

/// Least angle between a side of `P_i` and a side of `P_j` at a point they
/// share.
pub fn compute_alpha(sys: &PolygonalTreeSystem) -> Result<f64> {
    let tol = sys.tol();
    let g = contact_graph(sys)?;
    if g.contacts.is_empty() {
        return Err(Error::NoContacts);
    }
    let subs = sys.subpolygons();
    let sides = |k: usize, c: Point| -> [Point; 2] {
        let poly = &subs[k];
        let n = poly.len();
        let v = poly.vertex_index_of(c, tol).expect("contact is a vertex");
        [
            poly.vertex((v + n - 1) % n) - poly.vertex(v),
            poly.vertex((v + 1) % n) - poly.vertex(v),
        ]
    };
    let mut alpha = f64::INFINITY;
    for (c, &pt) in g.contacts.iter().enumerate() {
        let ks = g.polygons_at(c);
        for (x, &ki) in ks.iter().enumerate() {
            for &kj in &ks[x + 1..] {
                for si in sides(ki, pt) {
                    for sj in sides(kj, pt) {
                        alpha = alpha.min(angle_between(si, sj));
                    }
                }
            }
        }
    }
    Ok(alpha)
}

/// `diam P / (ρ · sin(α/2))`.
pub fn bt_formula(diam: f64, rho: f64, alpha: f64) -> f64 {
    diam / (rho * (alpha / 2.0).sin())
}

pub fn bt_constant(sys: &PolygonalTreeSystem) -> Result<f64> {
    Ok(bt_formula(
        sys.diameter(),
        compute_rho(sys),
        compute_alpha(sys)?,
    ))
}

/// `ceil` that ignores rounding noise just above an integer.
fn ceil_tol(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrderCaps {
    /// Vertices with a single address: `n − 1`.
    pub single: usize,
    /// Any vertex: `(n−1)(⌈θ_max/θ_min⌉ − 1)`.
    pub vertex: usize,
    /// Any cut point: `(n−1)(⌈2π/θ_min⌉ − 1)`.
    pub cutpoint: usize,
}

pub fn order_caps(n: usize, theta_min: f64, theta_max: f64) -> OrderCaps {
    let n1 = n.saturating_sub(1);
    OrderCaps {
        single: n1,
        vertex: n1 * ceil_tol(theta_max / theta_min).saturating_sub(1),
        cutpoint: n1 * ceil_tol(2.0 * PI / theta_min).saturating_sub(1),
    }
}

/// Extreme interior angles of `P`.
pub fn angle_range(sys: &PolygonalTreeSystem) -> (f64, f64) {
    let angles: Vec<f64> = (0..sys.n())
        .map(|k| sys.polygon().vertex_angle(k).expect("index in range"))
        .collect();
    let min = angles.iter().copied().fold(f64::INFINITY, f64::min);
    let max = angles.iter().copied().fold(0.0, f64::max);
    (min, max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexOrder {
    /// 1-based.
    pub vertex: usize,
    pub fiber_count: usize,
    pub skeleton_degree: usize,
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderReport {
    pub name: String,
    pub depth: usize,
    pub n: usize,
    pub theta_min_rad: f64,
    pub theta_max_rad: f64,
    pub caps: OrderCaps,
    pub vertices: Vec<VertexOrder>,
    pub max_skeleton_degree: usize,
}

/// Caps from the angles of `P` together with fiber counts and skeleton
/// degrees at the skeleton's depth.
pub fn order_bounds(sys: &PolygonalTreeSystem, skeleton: &SkeletonTree) -> OrderReport {
    let (tmin, tmax) = angle_range(sys);
    let caps = order_caps(sys.n(), tmin, tmax);
    let vertices = (0..sys.n())
        .map(|i| {
            let fiber_count = vertex_fiber(sys, i, skeleton.depth).count;
            VertexOrder {
                vertex: i + 1,
                fiber_count,
                skeleton_degree: skeleton.degrees[skeleton.vertex_nodes[i]],
                cap: if fiber_count == 1 {
                    caps.single
                } else {
                    caps.vertex
                },
            }
        })
        .collect();
    OrderReport {
        name: sys.name().to_string(),
        depth: skeleton.depth,
        n: sys.n(),
        theta_min_rad: tmin,
        theta_max_rad: tmax,
        caps,
        vertices,
        max_skeleton_degree: skeleton.degrees.iter().copied().max().unwrap_or(0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalBt {
    pub max_ratio: f64,
    pub witness: [Point; 2],
    pub samples: usize,
    pub seed: u64,
}

/// Samples `samples` pairs of skeleton nodes and returns the largest ratio
/// of path diameter to endpoint distance. Pairs closer than the tolerance
/// are redrawn.
pub fn empirical_bt(
    sys: &PolygonalTreeSystem,
    skeleton: &SkeletonTree,
    samples: usize,
    seed: u64,
) -> EmpiricalBt {
    let tol = sys.tol();
    let nodes = &skeleton.nodes;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(samples);
    let mut attempts = 0usize;
    while pairs.len() < samples && nodes.len() >= 2 && attempts < samples.saturating_mul(100) {
        attempts += 1;
        let a = rng.random_range(0..nodes.len());
        let b = rng.random_range(0..nodes.len());
        if nodes[a].dist(nodes[b]) > tol {
            pairs.push((a, b));
        }
    }
    let index = PathIndex::new(skeleton);
    let ratios: Vec<f64> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let path: Vec<Point> = index.path(a, b).into_iter().map(|k| nodes[k]).collect();
            max_pairwise_distance(&path) / nodes[a].dist(nodes[b])
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, 0usize);
    for (k, &r) in ratios.iter().enumerate() {
        if r > best.0 {
            best = (r, k);
        }
    }
    let witness = pairs
        .get(best.1)
        .map(|&(a, b)| [nodes[a], nodes[b]])
        .unwrap_or_default();
    EmpiricalBt {
        max_ratio: if pairs.is_empty() { 1.0 } else { best.0 },
        witness,
        samples: pairs.len(),
        seed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub name: String,
    pub rho: f64,
    pub alpha_rad: f64,
    pub theta_min_rad: f64,
    pub theta_max_rad: f64,
    pub q: f64,
    #[serde(rename = "diamP")]
    pub diam_p: f64,
    pub bt_constant: f64,
    pub caps: OrderCaps,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<EmpiricalBt>,
}

pub fn metrics(sys: &PolygonalTreeSystem) -> Result<MetricsReport> {
    let rho = compute_rho(sys);
    let alpha = compute_alpha(sys)?;
    let (tmin, tmax) = angle_range(sys);
    Ok(MetricsReport {
        name: sys.name().to_string(),
        rho,
        alpha_rad: alpha,
        theta_min_rad: tmin,
        theta_max_rad: tmax,
        q: sys.q(),
        diam_p: sys.diameter(),
        bt_constant: bt_formula(sys.diameter(), rho, alpha),
        caps: order_caps(sys.n(), tmin, tmax),
        empirical: None,
    })
}
