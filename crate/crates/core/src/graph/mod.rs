//! Small simple undirected graphs stored as per-vertex neighbourhood bitmasks.
//!
//! Every vertex set fits in one `u64`, so the hard cap is 64 vertices. Loops are
//! never stored: the reflexive "pass" move lives in the game rules.

mod generators;
mod io;
mod metrics;
mod ops;

use std::fmt;

use thiserror::Error;

pub use generators::{generate, Family};
pub use io::{emit, parse, parse_many, Format};
pub use metrics::{distance_matrix, metrics, Metrics};

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} out of range 1..=64")]
    Size(usize),
    #[error("combined size {0} exceeds 64 vertices")]
    TooLarge(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("invalid generator parameter: {0}")]
    Parameter(String),
    #[error("no connected sample after {0} attempts")]
    Sampling(usize),
    #[error("empty vertex set")]
    EmptySet,
    #[error("vertices {0} and {1} are not adjacent")]
    NotAPath(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A set of vertices of one graph.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    /// The first `n` vertices.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        VertexSet(it.into_iter().fold(0u64, |m, v| m | (1u64 << v)))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < 64 && (self.0 >> v) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    #[inline]
    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_vertices(iter)
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for VertexIter {}

/// Which binary product built a graph, with the factor orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    Cartesian,
    Strong,
}

/// Structure remembered by binary constructors; strategies on joins and
/// products are defined in terms of the factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Vertices `0..left` came from the first operand, the rest from the second.
    Join { left: usize, right: usize },
    /// Vertex `(i, j)` lives at index `i * right + j`.
    Product { kind: ProductKind, left: usize, right: usize },
}

#[derive(Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    labels: Option<Vec<String>>,
    provenance: Option<Provenance>,
}

/// Structural equality: vertex count and adjacency. Labels and provenance are
/// metadata and do not survive a round trip through a file format.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

impl Graph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::Size(n));
        }
        Ok(Graph { n, adj: vec![0; n], labels: None, provenance: None })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        g.check_invariants();
        Ok(g)
    }

    /// Builds a graph from raw neighbourhood masks, validating symmetry,
    /// irreflexivity and range.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self, GraphError> {
        let n = adj.len();
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::Size(n));
        }
        let full = VertexSet::full(n).0;
        for (v, &m) in adj.iter().enumerate() {
            if m & !full != 0 {
                let bad = (m & !full).trailing_zeros() as usize;
                return Err(GraphError::VertexOutOfRange { vertex: bad, n });
            }
            if (m >> v) & 1 == 1 {
                return Err(GraphError::SelfLoop(v));
            }
            for u in VertexSet(m).iter() {
                if (adj[u] >> v) & 1 == 0 {
                    return Err(GraphError::Parse(format!("asymmetric adjacency {v}->{u}")));
                }
            }
        }
        Ok(Graph { n, adj, labels: None, provenance: None })
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let existed = (self.adj[u] >> v) & 1 == 1;
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(!existed)
    }

    pub(crate) fn with_metadata(
        mut self,
        labels: Option<Vec<String>>,
        provenance: Option<Provenance>,
    ) -> Self {
        self.labels = labels;
        self.provenance = provenance;
        self
    }

    fn check_invariants(&self) {
        let full = VertexSet::full(self.n).0;
        for v in 0..self.n {
            debug_assert_eq!(self.adj[v] & !full, 0, "bits beyond n at {v}");
            debug_assert_eq!((self.adj[v] >> v) & 1, 0, "stored loop at {v}");
            for u in VertexSet(self.adj[v]).iter() {
                debug_assert!((self.adj[u] >> v) & 1 == 1, "asymmetric {v}-{u}");
            }
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Open neighbourhood N(v).
    #[inline]
    pub fn neighbours(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    /// Closed neighbourhood N[v] = N(v) ∪ {v}.
    #[inline]
    pub fn closed_neighbours(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v] | (1u64 << v))
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        (self.adj[u] >> v) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet(self.adj[u] & !((2u64 << u).wrapping_sub(1))).iter().map(move |v| (u, v))
        })
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Union of closed neighbourhoods of every vertex in `s`.
    pub fn expand(&self, s: VertexSet) -> VertexSet {
        s.iter().fold(s, |acc, v| acc.union(self.neighbours(v)))
    }

    /// Vertices reachable from `start`.
    pub fn component_of(&self, start: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = self.expand(frontier).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    /// Connected components, each listed by its vertex set, ordered by smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut left = self.vertices();
        let mut out = Vec::new();
        while let Some(v) = left.first() {
            let c = self.component_of(v);
            left = left.difference(c);
            out.push(c);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0) == self.vertices()
    }

    /// Induced subgraph on `keep`, vertices renumbered in increasing order.
    /// Returns the subgraph and the map from new index to old index.
    pub fn induced(&self, keep: VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        let map: Vec<usize> = keep.iter().filter(|&v| v < self.n).collect();
        if map.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let mut inverse = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            inverse[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| {
                VertexSet(self.adj[v] & keep.0).iter().fold(0u64, |m, u| m | (1 << inverse[u]))
            })
            .collect();
        Ok((Graph::from_adjacency(adj)?, map))
    }

    /// Intersection of open neighbourhoods over `s`.
    pub fn common_neighbourhood(&self, s: VertexSet) -> Result<VertexSet, GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptySet);
        }
        if let Some(v) = s.iter().find(|&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(s.iter().fold(self.vertices(), |acc, v| acc.intersection(self.neighbours(v))))
    }

    /// True iff every pair of path vertices is as far apart in the graph as
    /// along the path.
    pub fn is_isometric_path(&self, path: &[usize]) -> Result<bool, GraphError> {
        if path.is_empty() {
            return Err(GraphError::EmptySet);
        }
        for &v in path {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        for w in path.windows(2) {
            if !self.adjacent(w[0], w[1]) {
                return Err(GraphError::NotAPath(w[0], w[1]));
            }
        }
        let mut seen = VertexSet::EMPTY;
        for &v in path {
            if seen.contains(v) {
                return Ok(false);
            }
            seen.insert(v);
        }
        let dist = distance_matrix(self);
        for i in 0..path.len() {
            for j in i + 1..path.len() {
                if dist[path[i]][path[j]] != Some(j - i) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Breadth-first distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut seen = VertexSet::singleton(source);
        let mut frontier = seen;
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let next = self.expand(frontier).difference(seen);
            for v in next.iter() {
                dist[v] = Some(d);
            }
            seen = seen.union(next);
            frontier = next;
        }
        dist
    }
}

pub use ops::{cartesian, disjoint_union, join, strong};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_set_basics() {
        let s = VertexSet::from_vertices([3, 1, 5]);
        assert_eq!(s.to_vec(), vec![1, 3, 5]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_string(), "{1,3,5}");
        assert_eq!(VertexSet::full(64).len(), 64);
        assert!(VertexSet::singleton(3).is_subset(s));
    }

    #[test]
    fn adjacency_validation() {
        assert!(matches!(Graph::from_adjacency(vec![0b10, 0b00]), Err(GraphError::Parse(_))));
        assert_eq!(Graph::from_adjacency(vec![0b1]), Err(GraphError::SelfLoop(0)));
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
        assert_eq!(Graph::empty(0).unwrap_err(), GraphError::Size(0));
        assert_eq!(Graph::empty(65).unwrap_err(), GraphError::Size(65));
    }

    #[test]
    fn common_neighbourhood_cases() {
        let k5 = generate(Family::Complete(5)).unwrap();
        let c = k5.common_neighbourhood(VertexSet::from_vertices([0, 1])).unwrap();
        assert_eq!(c, VertexSet::from_vertices([2, 3, 4]));
        assert_eq!(k5.common_neighbourhood(VertexSet::EMPTY), Err(GraphError::EmptySet));

        let g5 = generate(Family::LeafedComplete(5)).unwrap();
        let leaf = (0..g5.n()).find(|&v| g5.degree(v) == 1).unwrap();
        let support = g5.neighbours(leaf);
        assert_eq!(g5.common_neighbourhood(VertexSet::singleton(leaf)).unwrap(), support);
        assert_eq!(support.len(), 1);
    }

    #[test]
    fn common_neighbourhood_in_complete_grid() {
        // (v1,w1) = index 0, (v2,w2) = index 1*4+1 in K3 □ K4.
        let g = cartesian(
            &generate(Family::Complete(3)).unwrap(),
            &generate(Family::Complete(4)).unwrap(),
        )
        .unwrap();
        let a = 0;
        let b = 4 + 1;
        let c = g.common_neighbourhood(VertexSet::from_vertices([a, b])).unwrap();
        assert_eq!(c, VertexSet::from_vertices([1, 4]));
    }

    #[test]
    fn isometric_paths() {
        let sp = strong(&generate(Family::Path(2)).unwrap(), &generate(Family::Path(3)).unwrap())
            .unwrap();
        assert_eq!(sp.is_isometric_path(&[0, 1, 2]), Ok(true));
        assert_eq!(sp.is_isometric_path(&[0, 4]), Ok(true));
        assert_eq!(sp.is_isometric_path(&[0, 2]), Err(GraphError::NotAPath(0, 2)));
        let c4 = generate(Family::Cycle(4)).unwrap();
        // walking three edges around C4 ends next to the start
        assert_eq!(c4.is_isometric_path(&[0, 1, 2]), Ok(true));
        assert_eq!(c4.is_isometric_path(&[0, 1, 2, 3]), Ok(false));
    }

    #[test]
    fn induced_subgraph_renumbers() {
        let p = generate(Family::Path(5)).unwrap();
        let (sub, map) = p.induced(VertexSet::from_vertices([1, 2, 4])).unwrap();
        assert_eq!(map, vec![1, 2, 4]);
        assert_eq!(sub.edge_count(), 1);
        assert!(sub.adjacent(0, 1));
    }
}
