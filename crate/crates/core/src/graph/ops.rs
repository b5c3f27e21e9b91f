use super::{Graph, GraphError, ProductKind, Provenance, VertexSet, MAX_VERTICES};

/// G ∨ J: disjoint union plus every edge between the two sides. Vertices of
/// `g` keep their indices; vertices of `j` are shifted by `g.n()`.
pub fn join(g: &Graph, j: &Graph) -> Result<Graph, GraphError> {
    let total = g.n() + j.n();
    if total > MAX_VERTICES {
        return Err(GraphError::TooLarge(total));
    }
    let left = VertexSet::full(g.n()).bits();
    let right = VertexSet::full(total).bits() & !left;
    let mut adj = Vec::with_capacity(total);
    adj.extend(g.adjacency().iter().map(|&m| m | right));
    adj.extend(j.adjacency().iter().map(|&m| (m << g.n()) | left));
    let labels = (0..total)
        .map(|v| if v < g.n() { format!("G{}", g.label(v)) } else { format!("J{}", j.label(v - g.n())) })
        .collect();
    Ok(Graph::from_adjacency(adj)?
        .with_metadata(Some(labels), Some(Provenance::Join { left: g.n(), right: j.n() })))
}

/// Disjoint union, `j` shifted after `g`.
pub fn disjoint_union(g: &Graph, j: &Graph) -> Result<Graph, GraphError> {
    let total = g.n() + j.n();
    if total > MAX_VERTICES {
        return Err(GraphError::TooLarge(total));
    }
    let adj = g
        .adjacency()
        .iter()
        .copied()
        .chain(j.adjacency().iter().map(|&m| m << g.n()))
        .collect();
    Graph::from_adjacency(adj)
}

fn product(g: &Graph, j: &Graph, kind: ProductKind) -> Result<Graph, GraphError> {
    let total = g.n() * j.n();
    if total > MAX_VERTICES {
        return Err(GraphError::TooLarge(total));
    }
    let m = j.n();
    let idx = |a: usize, b: usize| a * m + b;
    let mut out = Graph::empty(total)?;
    for a in 0..g.n() {
        for b in 0..m {
            for b2 in j.neighbours(b).iter() {
                out.add_edge(idx(a, b), idx(a, b2))?;
            }
            for a2 in g.neighbours(a).iter() {
                out.add_edge(idx(a, b), idx(a2, b))?;
                if kind == ProductKind::Strong {
                    for b2 in j.neighbours(b).iter() {
                        out.add_edge(idx(a, b), idx(a2, b2))?;
                    }
                }
            }
        }
    }
    let labels = (0..total).map(|v| format!("({},{})", g.label(v / m), j.label(v % m))).collect();
    Ok(out.with_metadata(Some(labels), Some(Provenance::Product { kind, left: g.n(), right: m })))
}

/// G □ J. Vertex `(i, j)` is at index `i * |V(J)| + j`.
pub fn cartesian(g: &Graph, j: &Graph) -> Result<Graph, GraphError> {
    product(g, j, ProductKind::Cartesian)
}

/// G ⊠ J: the Cartesian product plus diagonal edges.
pub fn strong(g: &Graph, j: &Graph) -> Result<Graph, GraphError> {
    product(g, j, ProductKind::Strong)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, metrics, Family};

    fn k(n: usize) -> Graph {
        generate(Family::Complete(n)).unwrap()
    }

    fn p(n: usize) -> Graph {
        generate(Family::Path(n)).unwrap()
    }

    #[test]
    fn join_of_cliques_is_clique() {
        let j = join(&k(2), &k(3)).unwrap();
        assert_eq!(j, k(5));
        assert_eq!(j.provenance(), Some(&Provenance::Join { left: 2, right: 3 }));
    }

    #[test]
    fn join_degrees_and_universal_vertex() {
        let g = generate(Family::Cycle(5)).unwrap();
        let h = p(4);
        let jn = join(&g, &h).unwrap();
        for v in 0..5 {
            assert_eq!(jn.degree(v), g.degree(v) + 4);
        }
        let star = join(&p(1), &h).unwrap();
        assert_eq!(metrics(&star).universal_vertices.first(), Some(0));
        assert_eq!(join(&k(40), &k(25)).unwrap_err(), GraphError::TooLarge(65));
    }

    #[test]
    fn cartesian_edge_count_identity() {
        let g = cartesian(&k(3), &p(2)).unwrap();
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g.label(4), "(2,0)");
    }

    #[test]
    fn strong_p4_p2() {
        let h = strong(&p(4), &p(2)).unwrap();
        assert_eq!(h.n(), 8);
        // 3 path edges in each of 2 columns, 4 rungs, 2 diagonals per square
        assert_eq!(h.edge_count(), 6 + 4 + 6);
    }

    #[test]
    fn product_size_cap() {
        assert_eq!(cartesian(&k(9), &k(8)).unwrap_err(), GraphError::TooLarge(72));
    }
}
