//! Two cops on `K_n □ P_m`, vertex `(k, p)` at index `k·m + p`.
//!
//! A shadow cop starts in layer `p = 0` and a walker in layer `p = m − 1`.
//! After every robber move the shadow steps into the robber's K_n column if
//! it is not already there, and otherwise steps one layer towards the robber;
//! the walker walks along its column towards the robber's layer. A visible
//! robber next to either cop is taken; an invisible robber sits in the
//! common neighbourhood of the two cops, which has at most two vertices when
//! they stand apart, and both are covered at once.
//!
//! Letting the upper cop only descend layer by layer while the other waits in
//! layer 0 is not enough: once the descending cop enters the robber's layer
//! from another column, the robber climbs past it.

use super::{cover, give_up, greedy_capture};
use crate::game::{hidden_region, CopConfig, CopStrategy, GameError, Observation, RobberView};
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct KnPmSweep {
    n: usize,
    m: usize,
}

pub fn kn_pm_sweep(n: usize, m: usize) -> KnPmSweep {
    KnPmSweep { n, m }
}

impl KnPmSweep {
    fn idx(&self, k: usize, p: usize) -> usize {
        k * self.m + p
    }

    fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.m, v % self.m)
    }

    fn shadow_step(&self, s: usize, r: usize) -> usize {
        let ((sk, sp), (rk, rp)) = (self.coords(s), self.coords(r));
        if sk != rk {
            self.idx(rk, sp)
        } else {
            self.idx(sk, toward(sp, rp))
        }
    }

    fn walker_step(&self, w: usize, r: usize) -> usize {
        let ((wk, wp), (_, rp)) = (self.coords(w), self.coords(r));
        self.idx(wk, toward(wp, rp))
    }
}

fn toward(from: usize, to: usize) -> usize {
    match from.cmp(&to) {
        std::cmp::Ordering::Less => from + 1,
        std::cmp::Ordering::Greater => from - 1,
        std::cmp::Ordering::Equal => from,
    }
}

impl CopStrategy for KnPmSweep {
    /// (shadow, walker) positions.
    type Memory = (usize, usize);

    fn name(&self) -> String {
        format!("kn-pm-sweep({},{})", self.n, self.m)
    }

    fn init(&self, g: &Graph) -> Result<(CopConfig, Self::Memory), GameError> {
        if g.n() != self.n * self.m || self.m < 2 || self.n == 0 {
            return Err(give_up("graph is not K_n □ P_m with m ≥ 2"));
        }
        let s = self.idx(if self.n > 1 { 1 } else { 0 }, 0);
        let w = self.idx(0, self.m - 1);
        Ok((CopConfig::new(vec![s, w]), (s, w)))
    }

    fn step(&self, g: &Graph, obs: &Observation, &(s, w): &Self::Memory) -> Result<(CopConfig, Self::Memory), GameError> {
        if let Some(c) = greedy_capture(g, obs) {
            return Ok((c, (s, w)));
        }
        match obs.robber {
            RobberView::Invisible => {
                let movers = [s, w];
                let c = cover(g, &obs.cops, &movers, hidden_region(g, &obs.cops))?;
                Ok((c, (s, w)))
            }
            RobberView::Visible(r) => {
                let (s2, w2) = (self.shadow_step(s, r), self.walker_step(w, r));
                Ok((CopConfig::new(vec![s2, w2]), (s2, w2)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cartesian, generate, Family};
    use crate::solver::Objective;
    use crate::strategies::{best_response, Verdict};

    fn knpm(n: usize, m: usize) -> Graph {
        cartesian(&generate(Family::Complete(n)).unwrap(), &generate(Family::Path(m)).unwrap()).unwrap()
    }

    /// The upper cop descends to layer 1 while the lower one waits in layer 0.
    struct LiteralSweep {
        m: usize,
    }

    impl CopStrategy for LiteralSweep {
        type Memory = ();
        fn name(&self) -> String {
            "literal-sweep".into()
        }
        fn init(&self, _g: &Graph) -> Result<(CopConfig, ()), GameError> {
            Ok((CopConfig::new(vec![self.m, self.m - 1]), ()))
        }
        fn step(&self, g: &Graph, obs: &Observation, _: &()) -> Result<(CopConfig, ()), GameError> {
            if let Some(c) = greedy_capture(g, obs) {
                return Ok((c, ()));
            }
            if obs.robber == RobberView::Invisible {
                let p = obs.cops.positions().to_vec();
                return Ok((cover(g, &obs.cops, &p, hidden_region(g, &obs.cops))?, ()));
            }
            // cops sorted: [upper (0, p), guard (1, 0)]
            let p = obs.cops.positions();
            let upper = if p[0] > 1 { p[0] - 1 } else { p[0] };
            Ok((CopConfig::new(vec![upper, p[1]]), ()))
        }
    }

    #[test]
    fn certified_on_small_products() {
        for n in 1..=4 {
            for m in 2..=5 {
                let v = best_response(&knpm(n, m), &kn_pm_sweep(n, m), &Objective::Capture).unwrap();
                assert!(matches!(v, Verdict::Certified(_)), "n={n} m={m}: {v:?}");
            }
        }
    }

    #[test]
    fn two_layers_end_in_one_move() {
        for n in 1..=5 {
            let v = best_response(&knpm(n, 2), &kn_pm_sweep(n, 2), &Objective::Capture).unwrap();
            assert!(matches!(v, Verdict::Certified(w) if w <= 1), "n={n}: {v:?}");
        }
    }

    #[test]
    fn descending_alone_is_not_enough() {
        let v = best_response(&knpm(3, 4), &LiteralSweep { m: 4 }, &Objective::Capture).unwrap();
        assert!(matches!(v, Verdict::Refuted(_)));
    }
}
