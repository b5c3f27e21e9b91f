//! Two cops guarding an isometric path by playing on the robber's image.
//!
//! The image of a robber at `x` is `v_j` with `j = min(d(x, v_0), k)` for the
//! path `v_0 … v_k`. One cop holds `v_0`; for longer paths the second cop
//! walks along the path to the image, never closer to `v_0` than `v_3`, which
//! keeps the robber visible (a common neighbour of `v_0` and `v_j`, `j ≥ 3`,
//! would give `d(v_0, v_j) ≤ 2`).

use super::{give_up, greedy_capture, StrategyError};
use crate::game::{CopConfig, CopStrategy, GameError, Observation, RobberView};
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct IsometricGuard {
    path: Vec<usize>,
    dist: Vec<Option<usize>>,
}

pub fn isometric_guard(g: &Graph, path: &[usize]) -> Result<IsometricGuard, StrategyError> {
    if !g.is_isometric_path(path)? {
        return Err(StrategyError::Precondition("path is not isometric".into()));
    }
    Ok(IsometricGuard { path: path.to_vec(), dist: g.distances_from(path[0]) })
}

impl IsometricGuard {
    fn k(&self) -> usize {
        self.path.len() - 1
    }

    fn image(&self, r: usize) -> usize {
        self.dist[r].map_or(self.k(), |d| d.min(self.k()))
    }

    fn at(&self, i: usize) -> usize {
        self.path[i.min(self.k())]
    }
}

impl CopStrategy for IsometricGuard {
    /// Path index of the second cop.
    type Memory = usize;

    fn name(&self) -> String {
        "isometric-guard".into()
    }

    fn init(&self, _g: &Graph) -> Result<(CopConfig, usize), GameError> {
        let second = if self.k() > 2 { 3 } else { 1 };
        Ok((CopConfig::new(vec![self.at(0), self.at(second)]), second))
    }

    fn step(&self, g: &Graph, obs: &Observation, &j: &usize) -> Result<(CopConfig, usize), GameError> {
        if let Some(c) = greedy_capture(g, obs) {
            return Ok((c, j));
        }
        if self.k() <= 2 {
            return Ok((obs.cops.clone(), j));
        }
        let r = match obs.robber {
            RobberView::Visible(r) => r,
            RobberView::Invisible => return Err(give_up("robber hidden from a cop beyond v_2")),
        };
        let target = self.image(r).max(3);
        let next = match target.cmp(&j) {
            std::cmp::Ordering::Greater => j + 1,
            std::cmp::Ordering::Less => j - 1,
            std::cmp::Ordering::Equal => j,
        };
        Ok((CopConfig::new(vec![self.at(0), self.at(next)]), next))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use crate::solver::Objective;
    use crate::strategies::{best_response, Verdict};

    #[test]
    fn long_path_in_a_cycle() {
        // An isometric path of length 4 inside C_8.
        let g = generate(Family::Cycle(8)).unwrap();
        let p = vec![0, 1, 2, 3, 4];
        let s = isometric_guard(&g, &p).unwrap();
        let v = best_response(&g, &s, &Objective::Guard(p)).unwrap();
        assert!(matches!(v, Verdict::Certified(_)), "{v:?}");
    }

    #[test]
    fn single_edge_is_never_entered() {
        let g = generate(Family::Cycle(5)).unwrap();
        let s = isometric_guard(&g, &[0, 1]).unwrap();
        assert_eq!(best_response(&g, &s, &Objective::Guard(vec![0, 1])).unwrap(), Verdict::Certified(0));
    }

    #[test]
    fn rejects_non_isometric() {
        let g = generate(Family::Cycle(4)).unwrap();
        assert!(isometric_guard(&g, &[0, 1, 2, 3]).is_err());
    }
}
