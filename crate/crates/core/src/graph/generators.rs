use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError, MAX_VERTICES};

const ER_RETRY_CAP: usize = 1000;

/// Named graph families.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Complete(usize),
    Path(usize),
    Cycle(usize),
    /// K_n with the edge 0–1 removed.
    CompleteMinusEdge(usize),
    /// K_n on vertices `0..n` plus a leaf `n` hanging off vertex 0.
    LeafedComplete(usize),
    /// Uniform labelled tree from a seeded Prüfer sequence.
    TreeRandom { n: usize, seed: u64 },
    /// G(n, p) resampled until connected.
    ErConnected { n: usize, p: f64, seed: u64 },
    /// `n` isolated vertices.
    Empty(usize),
}

fn check_size(n: usize, min: usize) -> Result<(), GraphError> {
    if n < min.max(1) || n > MAX_VERTICES {
        return Err(GraphError::Size(n));
    }
    Ok(())
}

pub fn generate(family: Family) -> Result<Graph, GraphError> {
    match family {
        Family::Complete(n) => {
            check_size(n, 1)?;
            Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        Family::Path(n) => {
            check_size(n, 1)?;
            Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
        }
        Family::Cycle(n) => {
            check_size(n, 3)?;
            Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
        }
        Family::CompleteMinusEdge(n) => {
            check_size(n, 2)?;
            let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, edges.filter(|&e| e != (0, 1)))
        }
        Family::LeafedComplete(n) => {
            if n + 1 > MAX_VERTICES || n == 0 {
                return Err(GraphError::Size(n + 1));
            }
            let mut edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            edges.push((0, n));
            Graph::from_edges(n + 1, edges)
        }
        Family::TreeRandom { n, seed } => {
            check_size(n, 1)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_tree(n, &mut rng)
        }
        Family::ErConnected { n, p, seed } => {
            check_size(n, 1)?;
            if !(p > 0.0 && p < 1.0) {
                return Err(GraphError::Parameter(format!("edge probability {p} not in (0,1)")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..ER_RETRY_CAP {
                let mut g = Graph::empty(n)?;
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.gen_bool(p) {
                            g.add_edge(u, v)?;
                        }
                    }
                }
                if g.is_connected() {
                    return Ok(g);
                }
            }
            Err(GraphError::Sampling(ER_RETRY_CAP))
        }
        Family::Empty(n) => Graph::empty(n),
    }
}

/// Decodes a random Prüfer sequence.
pub(crate) fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Result<Graph, GraphError> {
    if n <= 2 {
        return generate(Family::Path(n));
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("Prüfer decoding always has a leaf");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, edges)
}
