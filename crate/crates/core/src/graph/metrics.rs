use serde::Serialize;

use super::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Metrics {
    /// `None` when the graph is disconnected.
    pub diameter: Option<usize>,
    pub is_connected: bool,
    pub is_triangle_free: bool,
    pub cut_vertices: VertexSet,
    pub universal_vertices: VertexSet,
    pub min_degree: usize,
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

pub fn distance_matrix(g: &Graph) -> Vec<Vec<Option<usize>>> {
    (0..g.n()).map(|v| g.distances_from(v)).collect()
}

pub fn metrics(g: &Graph) -> Metrics {
    let n = g.n();
    let is_connected = g.is_connected();
    let diameter = if is_connected {
        (0..n).map(|v| g.distances_from(v).into_iter().flatten().max().unwrap_or(0)).max()
    } else {
        None
    };
    let is_triangle_free = g.edges().all(|(u, v)| g.neighbours(u).intersection(g.neighbours(v)).is_empty());
    let universal_vertices =
        (0..n).filter(|&v| g.degree(v) + 1 == n).collect::<VertexSet>();
    let min_degree = (0..n).map(|v| g.degree(v)).min().unwrap_or(0);
    Metrics {
        diameter,
        is_connected,
        is_triangle_free,
        cut_vertices: articulation_points(g),
        universal_vertices,
        min_degree,
    }
}

/// Iterative Hopcroft–Tarjan low-link search over every component.
fn articulation_points(g: &Graph) -> VertexSet {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut cut = VertexSet::EMPTY;
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, neighbours not yet scanned)
        let mut stack = vec![(root, usize::MAX, g.neighbours(root))];
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if let Some(w) = top.2.first() {
                top.2.remove(w);
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, g.neighbours(w)));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        cut.insert(parent);
                    }
                }
            }
        }
        if root_children > 1 {
            cut.insert(root);
        }
    }
    cut
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, join, Family};

    /// Removing a cut vertex increases the number of components.
    fn brute_force_cuts(g: &Graph) -> VertexSet {
        let base = g.components().len();
        (0..g.n())
            .filter(|&v| {
                if g.n() == 1 {
                    return false;
                }
                let (sub, _) = g.induced(g.vertices().difference(VertexSet::singleton(v))).unwrap();
                sub.components().len() > base
            })
            .collect()
    }

    #[test]
    fn path_metrics() {
        let m = metrics(&generate(Family::Path(5)).unwrap());
        assert_eq!(m.diameter, Some(4));
        assert!(m.is_triangle_free);
        assert_eq!(m.cut_vertices, VertexSet::from_vertices([1, 2, 3]));
        assert_eq!(m.min_degree, 1);
    }

    #[test]
    fn leafed_complete_has_one_cut_vertex() {
        let m = metrics(&generate(Family::LeafedComplete(5)).unwrap());
        assert_eq!(m.cut_vertices.len(), 1);
        assert_eq!(m.diameter, Some(2));
    }

    #[test]
    fn disconnected_diameter_is_infinite() {
        let g = generate(Family::Empty(3)).unwrap();
        let m = metrics(&g);
        assert_eq!(m.diameter, None);
        assert!(!m.is_connected);
    }

    #[test]
    fn join_diameter_at_most_two() {
        for seed in 0..10 {
            let a = generate(Family::TreeRandom { n: 5, seed }).unwrap();
            let b = generate(Family::Cycle(4 + (seed as usize % 3))).unwrap();
            assert!(metrics(&join(&a, &b).unwrap()).diameter.unwrap() <= 2);
        }
    }

    #[test]
    fn lowlink_matches_brute_force() {
        for seed in 0..40 {
            let g = generate(Family::ErConnected { n: 10, p: 0.25, seed }).unwrap();
            assert_eq!(metrics(&g).cut_vertices, brute_force_cuts(&g), "seed {seed}");
            let t = generate(Family::TreeRandom { n: 9, seed }).unwrap();
            assert_eq!(metrics(&t).cut_vertices, brute_force_cuts(&t));
        }
    }
}
