//! Combinatorial equivalence of two systems, the conjugacy it induces
//! between their attractors, and Hölder exponents for that conjugacy.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{compute_alpha, compute_rho};
use crate::attractor::{address_of, Address};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::maintree::MainTree;
use crate::system::PolygonalTreeSystem;

/// Incidences of a system, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct IncidenceSignature {
    /// `(k, i, j)` with `S_k(A_i) = A_j`.
    pub vertex_maps: BTreeSet<(usize, usize, usize)>,
    /// `(k1, i, k2, j)` with `k1 < k2` and `S_k1(A_i) = S_k2(A_j)`.
    pub contacts: BTreeSet<(usize, usize, usize, usize)>,
}

impl IncidenceSignature {
    /// Renames vertex `v` (1-based) to `perm[v − 1] + 1`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let r = |v: usize| perm[v - 1] + 1;
        IncidenceSignature {
            vertex_maps: self
                .vertex_maps
                .iter()
                .map(|&(k, i, j)| (k, r(i), r(j)))
                .collect(),
            contacts: self
                .contacts
                .iter()
                .map(|&(k1, i, k2, j)| (k1, r(i), k2, r(j)))
                .collect(),
        }
    }
}

pub fn signature(sys: &PolygonalTreeSystem) -> IncidenceSignature {
    let tol = sys.tol();
    let (n, m) = (sys.n(), sys.m());
    let mut sig = IncidenceSignature::default();
    for k in 0..m {
        for i in 0..n {
            let p = sys.vertex_image(k, i);
            for j in 0..n {
                if p.dist(sys.vertex(j)) <= tol {
                    sig.vertex_maps.insert((k + 1, i + 1, j + 1));
                }
            }
            for k2 in k + 1..m {
                for j in 0..n {
                    if p.dist(sys.vertex_image(k2, j)) <= tol {
                        sig.contacts.insert((k + 1, i + 1, k2 + 1, j + 1));
                    }
                }
            }
        }
    }
    sig
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equivalence {
    pub equivalent: bool,
    /// Tuples of the first system absent from the second.
    pub missing: IncidenceSignature,
    /// Tuples of the second system absent from the first.
    pub extra: IncidenceSignature,
    /// Vertex relabelling of the second system (1-based images), when one
    /// was searched for.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
}

fn same_shape(a: &PolygonalTreeSystem, b: &PolygonalTreeSystem) -> Result<()> {
    if a.n() != b.n() || a.m() != b.m() {
        return Err(Error::Mismatch(format!(
            "n = {} vs {}, m = {} vs {}",
            a.n(),
            b.n(),
            a.m(),
            b.m()
        )));
    }
    Ok(())
}

fn compare(s1: &IncidenceSignature, s2: &IncidenceSignature) -> Equivalence {
    let diff = |x: &IncidenceSignature, y: &IncidenceSignature| IncidenceSignature {
        vertex_maps: x.vertex_maps.difference(&y.vertex_maps).copied().collect(),
        contacts: x.contacts.difference(&y.contacts).copied().collect(),
    };
    Equivalence {
        equivalent: s1 == s2,
        missing: diff(s1, s2),
        extra: diff(s2, s1),
        permutation: None,
    }
}

/// Index-to-index comparison of signatures.
pub fn check_equivalence(a: &PolygonalTreeSystem, b: &PolygonalTreeSystem) -> Result<Equivalence> {
    same_shape(a, b)?;
    Ok(compare(&signature(a), &signature(b)))
}

pub const MAX_SEARCH_VERTICES: usize = 9;

/// Like [`check_equivalence`] but also tries every relabelling of the second
/// system's vertices; the lexicographically smallest match wins.
pub fn check_equivalence_permuted(
    a: &PolygonalTreeSystem,
    b: &PolygonalTreeSystem,
) -> Result<Equivalence> {
    same_shape(a, b)?;
    let n = a.n();
    if n > MAX_SEARCH_VERTICES {
        return Err(Error::SearchTooLarge(n));
    }
    let s1 = signature(a);
    let s2 = signature(b);
    let found = (0..n)
        .into_par_iter()
        .filter_map(|first| {
            let mut perm: Vec<usize> = std::iter::once(first)
                .chain((0..n).filter(|&x| x != first))
                .collect();
            loop {
                if s2.relabeled(&perm) == s1 {
                    return Some(perm);
                }
                if !next_permutation(&mut perm[1..]) {
                    return None;
                }
            }
        })
        .min();
    Ok(match found {
        Some(perm) => {
            let mut e = compare(&s1, &s2.relabeled(&perm));
            e.permutation = Some(perm.iter().map(|&x| x + 1).collect());
            e
        }
        None => compare(&s1, &s2),
    })
}

/// Advances to the next permutation in lexicographic order; false at the
/// last one.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugatePoint {
    pub point: Point,
    /// Guaranteed distance to the exact image: `q′^depth · diam(P′)`.
    pub bound: f64,
    pub address: Address,
    /// 1-based vertex of `P` whose image the point is, when it is one.
    pub vertex: Option<usize>,
}

/// Image of `p` under the conjugacy from the first attractor to the second,
/// evaluated through the smallest depth-`depth` address of `p`.
pub fn conjugate_point(
    a: &PolygonalTreeSystem,
    b: &PolygonalTreeSystem,
    p: Point,
    depth: usize,
) -> Result<ConjugatePoint> {
    same_shape(a, b)?;
    let addresses = address_of(a, p, depth);
    let Some(w) = addresses.into_iter().next() else {
        return Err(Error::PointOffAttractor(p.to_string(), depth));
    };
    let s = w.map(a);
    let vertex = (0..a.n()).find(|&i| s.apply(a.vertex(i)).dist(p) <= a.tol());
    let target = match vertex {
        Some(i) => b.vertex(i),
        None => b.polygon().centroid(),
    };
    Ok(ConjugatePoint {
        point: w.map(b).apply(target),
        bound: b.q().powi(depth as i32) * b.diameter(),
        address: w,
        vertex: vertex.map(|i| i + 1),
    })
}

/// `β = min log r′_i / log r_i` and `β′ = min log r_i / log r′_i`.
pub fn holder_exponents(r: &[f64], r_prime: &[f64]) -> (f64, f64) {
    let beta = r
        .iter()
        .zip(r_prime)
        .map(|(x, y)| y.ln() / x.ln())
        .fold(f64::INFINITY, f64::min);
    let beta_prime = r
        .iter()
        .zip(r_prime)
        .map(|(x, y)| x.ln() / y.ln())
        .fold(f64::INFINITY, f64::min);
    (beta, beta_prime)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderCertificate {
    pub beta: f64,
    pub beta_prime: f64,
    /// `C` in `d(φx, φy) ≤ C · d(x, y)^β`, namely `2|P′| (ρ sin(α/2))^−β`.
    pub forward_constant: f64,
    /// Same for the inverse map, `2|P| (ρ′ sin(α′/2))^−β′`.
    pub backward_constant: f64,
    pub rho: f64,
    pub rho_prime: f64,
    pub alpha: f64,
    pub alpha_prime: f64,
}

pub fn holder_certificate(
    a: &PolygonalTreeSystem,
    b: &PolygonalTreeSystem,
) -> Result<HolderCertificate> {
    same_shape(a, b)?;
    let (beta, beta_prime) = holder_exponents(&a.ratios(), &b.ratios());
    let (rho, rho_prime) = (compute_rho(a), compute_rho(b));
    let (alpha, alpha_prime) = (compute_alpha(a)?, compute_alpha(b)?);
    let sep = rho * (alpha / 2.0).sin();
    let sep_prime = rho_prime * (alpha_prime / 2.0).sin();
    Ok(HolderCertificate {
        beta,
        beta_prime,
        forward_constant: 2.0 * b.diameter() * sep.powf(-beta),
        backward_constant: 2.0 * a.diameter() * sep_prime.powf(-beta_prime),
        rho,
        rho_prime,
        alpha,
        alpha_prime,
    })
}

/// Largest observed `|ψ(S_i p) − S′_i ψ(p)|` over sampled skeleton nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub depth: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_residual: f64,
    /// `2 q′^depth diam(P′)`.
    pub bound: f64,
    pub within_bound: bool,
}

/// Depth of the skeleton whose nodes serve as sample points.
pub const SAMPLE_SKELETON_DEPTH: usize = 6;

pub fn conjugacy_residuals(
    a: &PolygonalTreeSystem,
    b: &PolygonalTreeSystem,
    depth: usize,
    samples: usize,
    seed: u64,
) -> Result<ResidualReport> {
    same_shape(a, b)?;
    let tree = MainTree::new(a)?.skeleton_tree(SAMPLE_SKELETON_DEPTH)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Point> = (0..samples)
        .map(|_| tree.nodes[rng.random_range(0..tree.nodes.len())])
        .collect();
    let residuals = points
        .par_iter()
        .map(|&p| {
            let fp = conjugate_point(a, b, p, depth)?.point;
            let mut worst = 0.0f64;
            for i in 0..a.m() {
                let lhs = conjugate_point(a, b, a.map(i).apply(p), depth)?.point;
                worst = worst.max(lhs.dist(b.map(i).apply(fp)));
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_residual = residuals.into_iter().fold(0.0, f64::max);
    let bound = 2.0 * b.q().powi(depth as i32) * b.diameter();
    Ok(ResidualReport {
        depth,
        samples,
        seed,
        max_residual,
        bound,
        within_bound: max_residual <= bound,
    })
}
