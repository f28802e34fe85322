//! Refinement of `P` into address-labelled cells, finite-depth addresses of
//! points and the fibers over vertices of `P`.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point, Similarity};
use crate::system::{contact_graph, PolygonalTreeSystem};

pub const DEFAULT_CELL_BUDGET: usize = 2_000_000;

/// Finite word over the map indices. Letters are stored 0-based and shown
/// 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address(pub Vec<u16>);

impl Address {
    pub fn empty() -> Self {
        Address(Vec::new())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    pub fn child(&self, letter: usize) -> Address {
        let mut w = self.0.clone();
        w.push(letter as u16);
        Address(w)
    }

    pub fn truncate(&self, depth: usize) -> Address {
        Address(self.0[..depth.min(self.0.len())].to_vec())
    }

    /// `S_{w1} ∘ … ∘ S_{wk}`.
    pub fn map(&self, sys: &PolygonalTreeSystem) -> Similarity {
        self.letters()
            .fold(Similarity::identity(), |acc, l| acc.compose(sys.map(l)))
    }

    /// 1-based rendering; letters are separated by dots when `m > 9`.
    pub fn to_string_for(&self, m: usize) -> String {
        let sep = if m > 9 { "." } else { "" };
        self.letters()
            .map(|l| (l + 1).to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self.0.iter().copied().max().unwrap_or(0) as usize;
        f.write_str(&self.to_string_for(max + 1))
    }
}

impl Serialize for Address {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0
            .iter()
            .map(|&l| l as usize + 1)
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub address: Address,
    pub map: Similarity,
    pub polygon: ConvexPolygon,
    pub ratio: f64,
}

fn root_cell(sys: &PolygonalTreeSystem) -> Cell {
    Cell {
        address: Address::empty(),
        map: Similarity::identity(),
        polygon: sys.polygon().clone(),
        ratio: 1.0,
    }
}

fn children<'a>(sys: &'a PolygonalTreeSystem, c: &Cell) -> impl Iterator<Item = Cell> + 'a {
    let parent = c.clone();
    (0..sys.m()).map(move |l| {
        let map = parent.map.compose(sys.map(l));
        Cell {
            address: parent.address.child(l),
            polygon: map.map_polygon(sys.polygon()),
            ratio: map.ratio(),
            map,
        }
    })
}

/// Checks `m^depth ≤ budget`.
pub fn check_budget(sys: &PolygonalTreeSystem, depth: usize, budget: usize) -> Result<()> {
    let cells = (sys.m() as f64).powi(depth as i32);
    if cells > budget as f64 {
        return Err(Error::BudgetExceeded {
            depth,
            cells,
            budget,
        });
    }
    Ok(())
}

/// All `m^depth` cells of the given depth, in lexicographic address order.
pub fn refine(sys: &PolygonalTreeSystem, depth: usize) -> Result<Vec<Cell>> {
    refine_with_budget(sys, depth, DEFAULT_CELL_BUDGET)
}

pub fn refine_with_budget(
    sys: &PolygonalTreeSystem,
    depth: usize,
    budget: usize,
) -> Result<Vec<Cell>> {
    check_budget(sys, depth, budget)?;
    let mut level = vec![root_cell(sys)];
    for _ in 0..depth {
        level = level
            .par_iter()
            .flat_map_iter(|c| children(sys, c))
            .collect();
    }
    Ok(level)
}

/// Depth-`depth` addresses whose closed cells contain `p`, sorted.
pub fn address_of(sys: &PolygonalTreeSystem, p: Point, depth: usize) -> Vec<Address> {
    let tol = sys.tol();
    let mut out = Vec::new();
    let mut stack = vec![root_cell(sys)];
    while let Some(c) = stack.pop() {
        if !c.polygon.contains_point(p, tol) {
            continue;
        }
        if c.address.depth() == depth {
            out.push(c.address);
            continue;
        }
        stack.extend(children(sys, &c));
    }
    out.sort();
    out
}

/// Eventually periodic infinite address `prefix · period^∞`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PeriodicAddress {
    pub prefix: Address,
    pub period: Address,
}

impl fmt::Display for PeriodicAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})…", self.prefix, self.period)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexFiber {
    /// 0-based vertex index.
    pub vertex: usize,
    pub depth: usize,
    /// Distinct nested branches of cells through the vertex at `depth`.
    pub count: usize,
    /// Every infinite address of the vertex.
    pub addresses: Vec<PeriodicAddress>,
}

/// `(map, preimage vertex)` pairs with `S_map(A_pre) = A_i`.
pub fn vertex_preimages(sys: &PolygonalTreeSystem) -> Vec<Vec<(usize, usize)>> {
    (0..sys.n())
        .map(|i| {
            let v = sys.vertex(i);
            let mut out = Vec::new();
            for k in 0..sys.m() {
                if let Some(a) = sys.preimage_vertex(k, v) {
                    out.push((k, a));
                }
            }
            out
        })
        .collect()
}

/// Branches of nested cells through `A_i`.
///
/// A vertex of `P` lying in a subpolygon is a vertex of it, so every cell
/// through `A_i` is reached by walking the vertex-preimage graph
/// `i → a` along map `k` whenever `S_k(A_a) = A_i`. Cells of equal depth with
/// distinct words have disjoint interiors, so walks never merge and the count
/// is the number of walks of length `depth`. The infinite addresses are the
/// lassos of that graph: a walk is closed off as soon as it revisits a vertex.
pub fn vertex_fiber(sys: &PolygonalTreeSystem, i: usize, depth: usize) -> VertexFiber {
    let pre = vertex_preimages(sys);
    let mut counts = vec![1usize; sys.n()];
    for _ in 0..depth {
        counts = (0..sys.n())
            .map(|a| pre[a].iter().map(|&(_, b)| counts[b]).sum())
            .collect();
    }
    let mut addresses = Vec::new();
    let mut word = Vec::new();
    let mut visited = vec![i];
    lassos(&pre, i, &mut word, &mut visited, &mut addresses);
    addresses.sort();
    VertexFiber {
        vertex: i,
        depth,
        count: counts[i],
        addresses,
    }
}

fn lassos(
    pre: &[Vec<(usize, usize)>],
    at: usize,
    word: &mut Vec<u16>,
    visited: &mut Vec<usize>,
    out: &mut Vec<PeriodicAddress>,
) {
    for &(k, b) in &pre[at] {
        word.push(k as u16);
        if let Some(pos) = visited.iter().position(|&v| v == b) {
            out.push(PeriodicAddress {
                prefix: Address(word[..pos].to_vec()),
                period: Address(word[pos..].to_vec()),
            });
        } else {
            visited.push(b);
            lassos(pre, b, word, visited, out);
            visited.pop();
        }
        word.pop();
    }
}

/// Kigami's criterion at the first level: the subpolygons are linked into one
/// cluster through shared points.
pub fn connectivity_check(sys: &PolygonalTreeSystem) -> bool {
    match contact_graph(sys) {
        Ok(g) => g.polygons_connected(),
        Err(_) => false,
    }
}

/// CSV rows `address,x1,y1,…,xn,yn` for the given cells.
pub fn write_cells_csv<W: Write>(
    sys: &PolygonalTreeSystem,
    cells: &[Cell],
    mut w: W,
) -> Result<()> {
    let n = sys.n();
    let mut header = String::from("address");
    for k in 1..=n {
        header.push_str(&format!(",x{k},y{k}"));
    }
    writeln!(w, "{header}")?;
    for c in cells {
        let mut line = c.address.to_string_for(sys.m());
        for v in c.polygon.vertices() {
            line.push_str(&format!(",{:?},{:?}", v.x, v.y));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}
