//! Explicit node space of the belief game.
//!
//! Cop nodes are (configuration, candidate set) pairs with the cops to move.
//! Choosing an action `C'` at cop node `(C, B)` leads to the adversary node
//! `(C', B)`, whose successors are the cop nodes `(C', Y)` for every
//! observation after the cop move followed by every observation after the
//! robber move. Candidate sets are interned, and per-belief slot tables map a
//! configuration to its node index so the fixpoint sweeps never hash.

use rustc_hash::FxHashMap;

use super::SolveError;
use crate::game::{cop_actions, hidden_region, CopConfig, Visibility};
use crate::graph::Graph;

pub(crate) const NONE: u32 = u32::MAX;

pub(crate) struct Arena {
    pub k: usize,
    pub closed: Vec<u64>,
    pub rules: Visibility,
    /// Every canonical configuration, lexicographic.
    pub configs: Vec<CopConfig>,
    pub config_index: FxHashMap<u64, u32>,
    pub occ: Vec<u64>,
    pub hidden: Vec<u64>,
    actions: Vec<Option<Box<[u32]>>>,
    pub beliefs: Vec<u64>,
    belief_index: FxHashMap<u64, u32>,
    cop_slot: Vec<Box<[u32]>>,
    adv_slot: Vec<Box<[u32]>>,
    /// (belief id, config id)
    pub cop_nodes: Vec<(u32, u32)>,
    pub adv_nodes: Vec<(u32, u32)>,
    /// CSR successors of adversary nodes; empty means capture.
    adv_off: Vec<usize>,
    adv_succ: Vec<u32>,
    /// Per initial configuration, the cop nodes of the robber's placement
    /// branches. Empty when the cops occupy every vertex.
    pub initial: Vec<Vec<u32>>,
}

fn multisets(n: usize, k: usize) -> Vec<CopConfig> {
    fn rec(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<CopConfig>) {
        if cur.len() == k {
            out.push(CopConfig::new(cur.clone()));
            return;
        }
        for v in from..n {
            cur.push(v);
            rec(n, k, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

impl Arena {
    pub fn build(g: &Graph, k: usize, rules: Visibility, cap: usize) -> Result<Arena, SolveError> {
        let configs = multisets(g.n(), k);
        let config_index = configs.iter().enumerate().map(|(i, c)| (c.pack(), i as u32)).collect();
        let occ = configs.iter().map(|c| c.occupied().bits()).collect();
        let hidden = configs
            .iter()
            .map(|c| match rules {
                Visibility::Hyperopic => hidden_region(g, c).bits(),
                Visibility::Perfect => 0,
            })
            .collect();
        let mut arena = Arena {
            k,
            closed: (0..g.n()).map(|v| g.closed_neighbours(v).bits()).collect(),
            rules,
            actions: vec![None; configs.len()],
            configs,
            config_index,
            occ,
            hidden,
            beliefs: Vec::new(),
            belief_index: FxHashMap::default(),
            cop_slot: Vec::new(),
            adv_slot: Vec::new(),
            cop_nodes: Vec::new(),
            adv_nodes: Vec::new(),
            adv_off: vec![0],
            adv_succ: Vec::new(),
            initial: Vec::new(),
        };
        arena.explore(g, cap)?;
        Ok(arena)
    }

    pub fn explored(&self) -> usize {
        self.cop_nodes.len() + self.adv_nodes.len()
    }

    pub fn actions(&self, c: u32) -> &[u32] {
        self.actions[c as usize].as_deref().expect("actions computed during exploration")
    }

    pub fn adv_of(&self, belief: u32, config: u32) -> u32 {
        self.adv_slot[belief as usize][config as usize]
    }

    pub fn successors(&self, adv: u32) -> &[u32] {
        &self.adv_succ[self.adv_off[adv as usize]..self.adv_off[adv as usize + 1]]
    }

    fn expand(&self, set: u64) -> u64 {
        let mut out = 0;
        let mut s = set;
        while s != 0 {
            out |= self.closed[s.trailing_zeros() as usize];
            s &= s - 1;
        }
        out
    }

    /// Observation branches of a cop-free candidate set.
    fn split(&self, set: u64, config: u32, mut f: impl FnMut(u64)) {
        let hidden = set & self.hidden[config as usize];
        let mut visible = set & !hidden;
        while visible != 0 {
            f(visible & visible.wrapping_neg());
            visible &= visible - 1;
        }
        if hidden != 0 {
            f(hidden);
        }
    }

    fn intern(&mut self, belief: u64) -> u32 {
        if let Some(&b) = self.belief_index.get(&belief) {
            return b;
        }
        let id = self.beliefs.len() as u32;
        self.beliefs.push(belief);
        self.belief_index.insert(belief, id);
        let m = self.configs.len();
        self.cop_slot.push(vec![NONE; m].into_boxed_slice());
        self.adv_slot.push(vec![NONE; m].into_boxed_slice());
        id
    }

    fn cop_node(&mut self, belief: u64, config: u32) -> u32 {
        let b = self.intern(belief);
        let slot = &mut self.cop_slot[b as usize][config as usize];
        if *slot == NONE {
            *slot = self.cop_nodes.len() as u32;
            self.cop_nodes.push((b, config));
        }
        *slot
    }

    fn explore(&mut self, g: &Graph, cap: usize) -> Result<(), SolveError> {
        let all = g.vertices().bits();
        for c in 0..self.configs.len() as u32 {
            let mut branches = Vec::new();
            let mut ys = Vec::new();
            self.split(all & !self.occ[c as usize], c, |y| ys.push(y));
            for y in ys {
                branches.push(self.cop_node(y, c));
            }
            self.initial.push(branches);
        }
        let mut next = 0;
        let mut succ = Vec::new();
        while next < self.cop_nodes.len() {
            let (b, c) = self.cop_nodes[next];
            next += 1;
            if self.actions[c as usize].is_none() {
                let acts = cop_actions(g, &self.configs[c as usize])
                    .iter()
                    .map(|a| self.config_index[&a.pack()])
                    .collect();
                self.actions[c as usize] = Some(acts);
            }
            let acts = self.actions[c as usize].take().expect("just computed");
            for &a in acts.iter() {
                if self.adv_slot[b as usize][a as usize] != NONE {
                    continue;
                }
                self.adv_slot[b as usize][a as usize] = self.adv_nodes.len() as u32;
                self.adv_nodes.push((b, a));
                let remaining = self.beliefs[b as usize] & !self.occ[a as usize];
                succ.clear();
                let mut xs = Vec::new();
                self.split(remaining, a, |x| xs.push(x));
                for x in xs {
                    let expanded = self.expand(x) & !self.occ[a as usize];
                    let mut ys = Vec::new();
                    self.split(expanded, a, |y| ys.push(y));
                    for y in ys {
                        succ.push(self.cop_node(y, a));
                    }
                }
                succ.sort_unstable();
                succ.dedup();
                self.adv_succ.extend_from_slice(&succ);
                self.adv_off.push(self.adv_succ.len());
            }
            self.actions[c as usize] = Some(acts);
            if self.explored() > cap {
                return Err(SolveError::ResourceCap { k: self.k, explored: self.explored(), cap });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    #[test]
    fn multisets_are_counted_and_ordered() {
        let m = multisets(4, 2);
        assert_eq!(m.len(), 10);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn perfect_information_beliefs_are_singletons() {
        let g = generate(Family::Cycle(5)).unwrap();
        let a = Arena::build(&g, 1, Visibility::Perfect, usize::MAX).unwrap();
        assert!(a.beliefs.iter().all(|b| b.count_ones() == 1));
        assert_eq!(a.cop_nodes.len(), 5 * 4);
    }

    #[test]
    fn cap_is_enforced() {
        let g = generate(Family::Complete(6)).unwrap();
        assert!(matches!(
            Arena::build(&g, 2, Visibility::Hyperopic, 10),
            Err(SolveError::ResourceCap { .. })
        ));
    }
}
