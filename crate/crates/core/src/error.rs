use thiserror::Error;

use crate::geometry::GeometryError;

/// Errors raised by the library. Indices in messages are 1-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("invalid polygon at `{path}`: {source}")]
    Polygon {
        path: String,
        #[source]
        source: GeometryError,
    },
    #[error("map {index} at `maps[{zero}]` is not a contraction (ratio {ratio})", zero = .index - 1)]
    NotContraction { index: usize, ratio: f64 },
    #[error("map {index} has non-finite coefficients")]
    NonFiniteMap { index: usize },
    #[error("m ≥ 2 required, got {0} map(s)")]
    TooFewMaps(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("depth {depth} needs {cells} cells, above the budget of {budget}")]
    BudgetExceeded {
        depth: usize,
        cells: f64,
        budget: usize,
    },
    #[error("subpolygons {0} and {1} overlap; contact structure is undefined")]
    Overlap(usize, usize),
    #[error("contact graph is not a tree: {0}")]
    ContactsNotTree(String),
    #[error("no chain connects vertex {0} to vertex {1}")]
    NoChain(usize, usize),
    #[error("chain endpoints must differ (got vertex {0} twice)")]
    SameVertex(usize),
    #[error("point {0} is a contact of the chain but not a vertex image of map {1}")]
    NotVertexImage(String, usize),
    #[error("system has no contact points between subpolygons")]
    NoContacts,
    #[error("welded skeleton contains a cycle ({nodes} nodes, {edges} edges)")]
    SkeletonCycle { nodes: usize, edges: usize },
    #[error("point {0} is not in the depth-{1} refinement, so it is not in the attractor")]
    PointOffAttractor(String, usize),
    #[error("systems are not comparable: {0}")]
    Mismatch(String),
    #[error("polygons of the two systems differ")]
    PolygonsDiffer,
    #[error("vertex permutation search supports n ≤ 9, got n = {0}")]
    SearchTooLarge(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
