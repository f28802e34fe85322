//! Arcs between vertices of `P`, the multizipper that generates them, and the
//! main tree (the union of all those arcs) approximated by a finite skeleton.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Mutex;

use petgraph::graph::NodeIndex;
use serde::Serialize;

use crate::attractor::{check_budget, Address, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::{Point, Similarity};
use crate::system::{contact_graph, ContactGraph, PolygonalTreeSystem};

/// Chain of subpolygons joining `A_from` to `A_to`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chain {
    pub from: usize,
    pub to: usize,
    /// Subpolygon indices along the chain.
    pub links: Vec<usize>,
    /// `links.len() + 1` points; the first is `A_from`, the last `A_to`.
    pub contacts: Vec<Point>,
}

fn endpoint_node(sys: &PolygonalTreeSystem, g: &ContactGraph, i: usize) -> Option<usize> {
    let v = sys.vertex(i);
    if let Some(c) = g.contact_index(v, sys.tol()) {
        return Some(g.polygons + c);
    }
    (0..sys.m()).find(|&k| sys.preimage_vertex(k, v).is_some())
}

/// The unique chain from `A_i` to `A_j` (0-based).
pub fn find_chain(sys: &PolygonalTreeSystem, i: usize, j: usize) -> Result<Chain> {
    let g = contact_graph(sys)?;
    if !g.is_tree() {
        return Err(Error::ContactsNotTree("no unique chains".into()));
    }
    chain_in(sys, &g, i, j)
}

fn chain_in(sys: &PolygonalTreeSystem, g: &ContactGraph, i: usize, j: usize) -> Result<Chain> {
    if i == j {
        return Err(Error::SameVertex(i + 1));
    }
    let (Some(s), Some(t)) = (endpoint_node(sys, g, i), endpoint_node(sys, g, j)) else {
        return Err(Error::NoChain(i + 1, j + 1));
    };
    let graph = g.graph();
    let mut prev = vec![usize::MAX; graph.node_count()];
    prev[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if x == t {
            break;
        }
        for y in graph.neighbors(NodeIndex::new(x)) {
            let y = y.index();
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    if prev[t] == usize::MAX {
        return Err(Error::NoChain(i + 1, j + 1));
    }
    let mut path = vec![t];
    while *path.last().unwrap() != s {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    let mut links = Vec::new();
    let mut contacts = vec![sys.vertex(i)];
    for (pos, &node) in path.iter().enumerate() {
        if node < g.polygons {
            links.push(node);
        } else if pos != 0 && pos != path.len() - 1 {
            contacts.push(g.contacts[node - g.polygons]);
        }
    }
    contacts.push(sys.vertex(j));
    Ok(Chain {
        from: i,
        to: j,
        links,
        contacts,
    })
}

/// One piece `S_map(γ_{u v})` of an arc; `S_map(A_u) = start`, `S_map(A_v) = end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZipperEntry {
    pub map: usize,
    pub u: usize,
    pub v: usize,
    pub start: Point,
    pub end: Point,
}

impl ZipperEntry {
    fn reversed(&self) -> Self {
        ZipperEntry {
            map: self.map,
            u: self.v,
            v: self.u,
            start: self.end,
            end: self.start,
        }
    }
}

/// Graph-directed system whose components are the arcs `γ_ij`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Multizipper {
    /// Entries per vertex pair (0-based); closed under the `(u, v)` references.
    pub nodes: BTreeMap<(usize, usize), Vec<ZipperEntry>>,
}

impl Multizipper {
    /// Entries of `γ_ij`; a missing ordered pair is served by reversing
    /// `γ_ji`.
    pub fn entries(&self, i: usize, j: usize) -> Vec<ZipperEntry> {
        if let Some(e) = self.nodes.get(&(i, j)) {
            return e.clone();
        }
        self.nodes
            .get(&(j, i))
            .map(|e| e.iter().rev().map(ZipperEntry::reversed).collect())
            .unwrap_or_default()
    }
}

pub fn build_multizipper(sys: &PolygonalTreeSystem) -> Result<Multizipper> {
    let g = contact_graph(sys)?;
    if !g.is_tree() {
        return Err(Error::ContactsNotTree("no unique chains".into()));
    }
    let n = sys.n();
    let mut nodes = BTreeMap::new();
    let mut work: VecDeque<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    while let Some((i, j)) = work.pop_front() {
        if nodes.contains_key(&(i, j)) {
            continue;
        }
        let chain = chain_in(sys, &g, i, j)?;
        let mut entries = Vec::with_capacity(chain.links.len());
        for (k, &l) in chain.links.iter().enumerate() {
            let (start, end) = (chain.contacts[k], chain.contacts[k + 1]);
            let u = sys
                .preimage_vertex(l, start)
                .ok_or_else(|| Error::NotVertexImage(start.to_string(), l + 1))?;
            let v = sys
                .preimage_vertex(l, end)
                .ok_or_else(|| Error::NotVertexImage(end.to_string(), l + 1))?;
            if !nodes.contains_key(&(u, v)) && !nodes.contains_key(&(v, u)) {
                work.push_back((u, v));
            }
            entries.push(ZipperEntry {
                map: l,
                u,
                v,
                start,
                end,
            });
        }
        nodes.insert((i, j), entries);
    }
    Ok(Multizipper { nodes })
}

/// Combinatorial skeleton of the main tree with chord edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkeletonTree {
    pub depth: usize,
    pub nodes: Vec<Point>,
    pub edges: Vec<SkeletonEdge>,
    pub degrees: Vec<usize>,
    /// Node index of each vertex `A_i`.
    pub vertex_nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkeletonEdge {
    pub a: usize,
    pub b: usize,
    /// Cell whose piece of the main tree contains this edge.
    pub address: Address,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ramification {
    pub point: Point,
    pub degree: usize,
    /// Degree differs (or the node is missing) one level deeper.
    pub provisional: bool,
}

/// Small graph used while assembling trees.
#[derive(Debug, Clone, Default)]
struct Piece {
    points: Vec<Point>,
    edges: Vec<(usize, usize)>,
}

impl Piece {
    fn chord(a: Point, b: Point) -> Self {
        Piece {
            points: vec![a, b],
            edges: vec![(0, 1)],
        }
    }

    fn mapped(&self, s: &Similarity) -> Self {
        Piece {
            points: self.points.iter().map(|&p| s.apply(p)).collect(),
            edges: self.edges.clone(),
        }
    }

    fn append(&mut self, other: &Piece) {
        let off = self.points.len();
        self.points.extend_from_slice(&other.points);
        self.edges
            .extend(other.edges.iter().map(|&(a, b)| (a + off, b + off)));
    }

    /// Merges points within `tol` and drops duplicate or degenerate edges.
    fn welded(&self, tol: f64) -> Piece {
        let (points, index) = weld(&self.points, tol);
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                let (a, b) = (index[a], index[b]);
                (a != b).then(|| (a.min(b), a.max(b)))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Piece { points, edges }
    }

    fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.points.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    fn is_tree(&self) -> bool {
        let n = self.points.len();
        if n == 0 || self.edges.len() + 1 != n {
            return false;
        }
        let mut uf = petgraph::unionfind::UnionFind::<usize>::new(n);
        self.edges.iter().all(|&(a, b)| uf.union(a, b))
    }

    /// Replaces every degree-2 node not marked `keep` by a single edge.
    fn collapse(&self, keep: impl Fn(Point) -> bool) -> Piece {
        let n = self.points.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut alive = vec![true; n];
        for x in 0..n {
            if adj[x].len() == 2 && !keep(self.points[x]) {
                let (a, b) = (adj[x][0], adj[x][1]);
                if a == b || adj[a].contains(&b) {
                    continue;
                }
                for (p, q) in [(a, b), (b, a)] {
                    let slot = adj[p].iter().position(|&y| y == x).unwrap();
                    adj[p][slot] = q;
                }
                adj[x].clear();
                alive[x] = false;
            }
        }
        let mut renum = vec![usize::MAX; n];
        let mut points = Vec::new();
        for x in 0..n {
            if alive[x] {
                renum[x] = points.len();
                points.push(self.points[x]);
            }
        }
        let mut edges = Vec::new();
        for a in 0..n {
            for &b in &adj[a] {
                if a < b {
                    edges.push((renum[a], renum[b]));
                }
            }
        }
        edges.sort_unstable();
        Piece { points, edges }
    }
}

/// Groups points closer than `tol`, scanning in sorted order so the result
/// does not depend on input order. Returns the representatives (sorted) and
/// the representative index of each input point.
pub fn weld(points: &[Point], tol: f64) -> (Vec<Point>, Vec<usize>) {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].total_cmp(&points[b]));
    let cell = tol.max(f64::MIN_POSITIVE);
    let key = |p: Point| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut reps: Vec<Point> = Vec::new();
    let mut index = vec![0; points.len()];
    for &i in &order {
        let p = points[i];
        let (kx, ky) = key(p);
        let mut found = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = grid.get(&(kx + dx, ky + dy)) {
                    for &r in list {
                        if reps[r].dist(p) <= tol {
                            found = Some(r);
                            break 'search;
                        }
                    }
                }
            }
        }
        let r = found.unwrap_or_else(|| {
            reps.push(p);
            grid.entry((kx, ky)).or_default().push(reps.len() - 1);
            reps.len() - 1
        });
        index[i] = r;
    }
    (reps, index)
}

/// Everything needed to unroll arcs and assemble skeletons of one system.
pub struct MainTree<'a> {
    sys: &'a PolygonalTreeSystem,
    zipper: Multizipper,
    /// `between[a][u][v]`: `A_a` is an interior point of `γ_uv`.
    between: Vec<Vec<Vec<bool>>>,
    local: Mutex<HashMap<u64, Piece>>,
}

impl<'a> MainTree<'a> {
    pub fn new(sys: &'a PolygonalTreeSystem) -> Result<Self> {
        if sys.n() > 64 {
            return Err(Error::Mismatch(
                "main tree supports at most 64 vertices".into(),
            ));
        }
        let zipper = build_multizipper(sys)?;
        let between = betweenness(sys, &zipper);
        Ok(MainTree {
            sys,
            zipper,
            between,
            local: Mutex::new(HashMap::new()),
        })
    }

    pub fn system(&self) -> &PolygonalTreeSystem {
        self.sys
    }

    pub fn multizipper(&self) -> &Multizipper {
        &self.zipper
    }

    /// Whether `A_a` lies strictly inside the arc `γ_uv`.
    pub fn between(&self, a: usize, u: usize, v: usize) -> bool {
        self.between[a][u][v]
    }

    /// Depth-`depth` unrolling of `γ_ij` as an ordered polyline from `A_i`
    /// to `A_j`.
    pub fn arc_polyline(&self, i: usize, j: usize, depth: usize) -> Result<Vec<Point>> {
        if i == j {
            return Err(Error::SameVertex(i + 1));
        }
        let n = self.sys.n();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let entries: HashMap<(usize, usize), Vec<ZipperEntry>> = pairs
            .iter()
            .map(|&(a, b)| ((a, b), self.zipper.entries(a, b)))
            .collect();

        let mut len: HashMap<(usize, usize), f64> = pairs
            .iter()
            .map(|p| (*p, entries[p].len() as f64 + 1.0))
            .collect();
        for _ in 0..depth {
            len = pairs
                .iter()
                .map(|p| {
                    let l = entries[p]
                        .iter()
                        .map(|e| len[&(e.u, e.v)] - 1.0)
                        .sum::<f64>()
                        + 1.0;
                    (*p, l)
                })
                .collect();
        }
        if len[&(i, j)] > DEFAULT_CELL_BUDGET as f64 {
            return Err(Error::BudgetExceeded {
                depth,
                cells: len[&(i, j)],
                budget: DEFAULT_CELL_BUDGET,
            });
        }

        // Only pairs reachable from (i, j) within the remaining levels matter.
        let mut needed: Vec<Vec<(usize, usize)>> = vec![vec![(i, j)]];
        for _ in 0..depth {
            let mut next: Vec<(usize, usize)> = needed
                .last()
                .unwrap()
                .iter()
                .flat_map(|p| entries[p].iter().map(|e| (e.u, e.v)))
                .collect();
            next.sort_unstable();
            next.dedup();
            needed.push(next);
        }
        let mut level: HashMap<(usize, usize), Vec<Point>> = needed[depth]
            .iter()
            .map(|p| {
                let e = &entries[p];
                let mut pts: Vec<Point> = e.iter().map(|z| z.start).collect();
                pts.push(e.last().unwrap().end);
                (*p, pts)
            })
            .collect();
        for t in (0..depth).rev() {
            level = needed[t]
                .iter()
                .map(|&(a, b)| {
                    let mut pts = vec![self.sys.vertex(a)];
                    for e in &entries[&(a, b)] {
                        let s = self.sys.map(e.map);
                        pts.extend(level[&(e.u, e.v)].iter().skip(1).map(|&p| s.apply(p)));
                    }
                    *pts.last_mut().unwrap() = self.sys.vertex(b);
                    ((a, b), pts)
                })
                .collect();
        }
        Ok(level.remove(&(i, j)).unwrap())
    }

    /// Maps used by the pieces of the arcs between vertices in `mask`, with
    /// the vertices each piece connects.
    fn decomposition(&self, mask: u64) -> BTreeMap<usize, u64> {
        let mut out: BTreeMap<usize, u64> = BTreeMap::new();
        let idx = bits(mask);
        for (x, &a) in idx.iter().enumerate() {
            for &b in &idx[x + 1..] {
                for e in self.zipper.entries(a, b) {
                    *out.entry(e.map).or_default() |= (1 << e.u) | (1 << e.v);
                }
            }
        }
        out
    }

    /// Vertex in `mask` lying inside the arc between two others, if any.
    fn internal_vertex(&self, mask: u64) -> Option<usize> {
        let idx = bits(mask);
        idx.iter().copied().find(|&a| {
            idx.iter().any(|&b| {
                b != a
                    && idx
                        .iter()
                        .any(|&c| c != a && c != b && self.between[a][b][c])
            })
        })
    }

    /// Tree spanned by `{A_u : u ∈ mask}` in the coordinates of `P`, with
    /// straight edges between those vertices and branch points.
    fn local_tree(&self, mask: u64) -> Result<Piece> {
        if let Some(p) = self.local.lock().unwrap().get(&mask) {
            return Ok(p.clone());
        }
        let mut stack = Vec::new();
        let mut letters = Vec::new();
        self.local_tree_rec(mask, &mut stack, &mut letters)
    }

    fn local_tree_rec(
        &self,
        mask: u64,
        stack: &mut Vec<u64>,
        letters: &mut Vec<usize>,
    ) -> Result<Piece> {
        if let Some(p) = self.local.lock().unwrap().get(&mask) {
            return Ok(p.clone());
        }
        let sys = self.sys;
        let tol = sys.tol();
        let idx = bits(mask);
        let piece = if idx.len() == 2 {
            Piece::chord(sys.vertex(idx[0]), sys.vertex(idx[1]))
        } else if let Some(a) = self.internal_vertex(mask) {
            // Split at `a` into the groups of vertices on each side of it.
            let rest: Vec<usize> = idx.iter().copied().filter(|&b| b != a).collect();
            let mut uf = petgraph::unionfind::UnionFind::<usize>::new(rest.len());
            for x in 0..rest.len() {
                for y in x + 1..rest.len() {
                    if !self.between[a][rest[x]][rest[y]] {
                        uf.union(x, y);
                    }
                }
            }
            let mut groups: BTreeMap<usize, u64> = BTreeMap::new();
            for (x, &b) in rest.iter().enumerate() {
                *groups.entry(uf.find(x)).or_insert(1 << a) |= 1 << b;
            }
            let mut all = Piece::default();
            for g in groups.values() {
                all.append(&self.local_tree_rec(*g, stack, letters)?);
            }
            all.welded(tol)
        } else {
            stack.push(mask);
            let mut all = Piece::default();
            for (l, child) in self.decomposition(mask) {
                let s = sys.map(l);
                if let Some(pos) = stack.iter().position(|&x| x == child) {
                    // The state recurs: its tree is mapped into itself by the
                    // composite along the loop, so its only branch point is
                    // that composite's fixed point.
                    let t = letters[pos..]
                        .iter()
                        .fold(Similarity::identity(), |acc, &k| acc.compose(sys.map(k)))
                        .compose(s);
                    let c = t.fixed_point().expect("contraction has a fixed point");
                    let mut star = Piece {
                        points: vec![c],
                        edges: Vec::new(),
                    };
                    for u in bits(child) {
                        star.points.push(sys.vertex(u));
                        star.edges.push((0, star.points.len() - 1));
                    }
                    all.append(&star.mapped(s));
                } else {
                    letters.push(l);
                    let sub = self.local_tree_rec(child, stack, letters)?;
                    letters.pop();
                    all.append(&sub.mapped(s));
                }
            }
            stack.pop();
            let keep: Vec<Point> = idx.iter().map(|&u| sys.vertex(u)).collect();
            all.welded(tol)
                .collapse(|p| keep.iter().any(|k| k.dist(p) <= tol))
        };
        if !piece.is_tree() {
            return Err(Error::SkeletonCycle {
                nodes: piece.points.len(),
                edges: piece.edges.len(),
            });
        }
        self.local.lock().unwrap().insert(mask, piece.clone());
        Ok(piece)
    }

    /// Skeleton of the main tree: the cells of depth `depth` that meet it,
    /// each carrying the image of the exact local tree of the vertices
    /// through which the main tree enters the cell.
    pub fn skeleton_tree(&self, depth: usize) -> Result<SkeletonTree> {
        let sys = self.sys;
        let tol = sys.tol();
        let full: u64 = if sys.n() == 64 {
            u64::MAX
        } else {
            (1u64 << sys.n()) - 1
        };
        let mut cells = vec![(Address::empty(), Similarity::identity(), full)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (w, s, mask) in &cells {
                for (l, child) in self.decomposition(*mask) {
                    next.push((w.child(l), s.compose(sys.map(l)), child));
                }
            }
            if next.len() > DEFAULT_CELL_BUDGET {
                check_budget(sys, depth, DEFAULT_CELL_BUDGET)?;
            }
            cells = next;
        }
        let mut raw = Vec::new();
        let mut raw_edges = Vec::new();
        for (w, s, mask) in &cells {
            let piece = self.local_tree(*mask)?.mapped(s);
            let off = raw.len();
            raw.extend_from_slice(&piece.points);
            for &(a, b) in &piece.edges {
                raw_edges.push((a + off, b + off, w.clone()));
            }
        }
        let (mut nodes, index) = weld(&raw, tol);
        let mut seen = std::collections::BTreeSet::new();
        let mut edges = Vec::new();
        for (a, b, w) in raw_edges {
            let (a, b) = (index[a], index[b]);
            if a != b && seen.insert((a.min(b), a.max(b))) {
                edges.push(SkeletonEdge {
                    a: a.min(b),
                    b: a.max(b),
                    address: w,
                });
            }
        }
        let mut vertex_nodes = Vec::with_capacity(sys.n());
        for i in 0..sys.n() {
            let v = sys.vertex(i);
            let k = nodes
                .iter()
                .position(|p| p.dist(v) <= tol)
                .ok_or_else(|| Error::NoChain(i + 1, i + 1))?;
            nodes[k] = v;
            vertex_nodes.push(k);
        }
        let piece = Piece {
            points: nodes.clone(),
            edges: edges.iter().map(|e| (e.a, e.b)).collect(),
        };
        if !piece.is_tree() {
            return Err(Error::SkeletonCycle {
                nodes: nodes.len(),
                edges: edges.len(),
            });
        }
        let degrees = piece.degrees();
        Ok(SkeletonTree {
            depth,
            nodes,
            edges,
            degrees,
            vertex_nodes,
        })
    }

    /// Nodes of degree ≥ 3, checked against the skeleton one level deeper.
    pub fn main_ramification_points(&self, depth: usize) -> Result<Vec<Ramification>> {
        let here = self.skeleton_tree(depth)?;
        let deeper = self.skeleton_tree(depth + 1)?;
        Ok(ramifications(&here, &deeper, self.sys.tol()))
    }
}

/// Ramification nodes of `here`, flagged provisional when `deeper` disagrees.
pub fn ramifications(here: &SkeletonTree, deeper: &SkeletonTree, tol: f64) -> Vec<Ramification> {
    let mut out = Vec::new();
    for (k, &d) in here.degrees.iter().enumerate() {
        if d < 3 {
            continue;
        }
        let p = here.nodes[k];
        let matched = deeper
            .nodes
            .iter()
            .position(|q| q.dist(p) <= tol)
            .map(|m| deeper.degrees[m]);
        out.push(Ramification {
            point: p,
            degree: d,
            provisional: matched != Some(d),
        });
    }
    out
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&b| mask >> b & 1 == 1).collect()
}

/// Greatest fixpoint of: `A_a` is inside `γ_uv` iff it is an inner contact
/// of the chain, or `A_a = S_l(A_a′)` for a piece `S_l(γ_u′v′)` with `A_a′`
/// inside `γ_u′v′`. Self-supporting loops are sound because the composite
/// along a loop maps `γ_uv` into itself and `A_a` is its fixed point.
fn betweenness(sys: &PolygonalTreeSystem, z: &Multizipper) -> Vec<Vec<Vec<bool>>> {
    let n = sys.n();
    let tol = sys.tol();
    let entries: Vec<Vec<Vec<ZipperEntry>>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| if u == v { Vec::new() } else { z.entries(u, v) })
                .collect()
        })
        .collect();
    let mut b = vec![vec![vec![false; n]; n]; n];
    for (a, ba) in b.iter_mut().enumerate() {
        for (u, row) in ba.iter_mut().enumerate() {
            for (v, cell) in row.iter_mut().enumerate() {
                *cell = a != u && a != v && u != v;
            }
        }
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            let va = sys.vertex(a);
            for u in 0..n {
                for v in 0..n {
                    if !b[a][u][v] {
                        continue;
                    }
                    let es = &entries[u][v];
                    let inner = es.iter().skip(1).any(|e| e.start.dist(va) <= tol);
                    let nested = es.iter().any(|e| match sys.preimage_vertex(e.map, va) {
                        Some(a2) => a2 != e.u && a2 != e.v && b[a2][e.u][e.v],
                        None => false,
                    });
                    if !(inner || nested) {
                        b[a][u][v] = false;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return b;
        }
    }
}

/// Parent pointers from node 0, for repeated path queries.
#[derive(Debug, Clone)]
pub struct PathIndex {
    parent: Vec<usize>,
    level: Vec<usize>,
}

impl PathIndex {
    pub fn new(tree: &SkeletonTree) -> Self {
        let n = tree.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for e in &tree.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        let mut parent = vec![usize::MAX; n];
        let mut level = vec![0; n];
        if n > 0 {
            parent[0] = 0;
            let mut q = VecDeque::from([0]);
            while let Some(x) = q.pop_front() {
                for &y in &adj[x] {
                    if parent[y] == usize::MAX {
                        parent[y] = x;
                        level[y] = level[x] + 1;
                        q.push_back(y);
                    }
                }
            }
        }
        PathIndex { parent, level }
    }

    /// Node indices along the tree path from `a` to `b`.
    pub fn path(&self, mut a: usize, mut b: usize) -> Vec<usize> {
        let mut front = Vec::new();
        let mut back = Vec::new();
        while self.level[a] > self.level[b] {
            front.push(a);
            a = self.parent[a];
        }
        while self.level[b] > self.level[a] {
            back.push(b);
            b = self.parent[b];
        }
        while a != b {
            front.push(a);
            back.push(b);
            a = self.parent[a];
            b = self.parent[b];
        }
        front.push(a);
        front.extend(back.into_iter().rev());
        front
    }
}

/// JSON form of a skeleton with its ramification points.
#[derive(Debug, Clone, Serialize)]
pub struct MainTreeExport {
    pub name: String,
    pub depth: usize,
    pub nodes: Vec<Point>,
    pub edges: Vec<[usize; 2]>,
    pub degrees: Vec<usize>,
    /// 1-based vertex index per node, or null.
    pub vertex: Vec<Option<usize>>,
    pub ramification_points: Vec<Ramification>,
    pub provisional: Vec<bool>,
}

impl MainTreeExport {
    pub fn new(sys: &PolygonalTreeSystem, tree: &SkeletonTree, ram: &[Ramification]) -> Self {
        let mut vertex = vec![None; tree.nodes.len()];
        for (i, &k) in tree.vertex_nodes.iter().enumerate() {
            vertex[k] = Some(i + 1);
        }
        let provisional = tree
            .nodes
            .iter()
            .map(|p| ram.iter().any(|r| r.provisional && r.point == *p))
            .collect();
        MainTreeExport {
            name: sys.name().to_string(),
            depth: tree.depth,
            nodes: tree.nodes.clone(),
            edges: tree.edges.iter().map(|e| [e.a, e.b]).collect(),
            degrees: tree.degrees.clone(),
            vertex,
            ramification_points: ram.to_vec(),
            provisional,
        }
    }
}
