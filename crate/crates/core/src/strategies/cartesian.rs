//! Two-phase strategy on a Cartesian product `G □ J` with
//! `c_H(G) + c_H(J)` cops, vertex `(x, y)` at index `x·|V(J)| + y`.
//!
//! Layer `y` is the copy of `G` with second coordinate `y`; column `x` is the
//! copy of `J` with first coordinate `x`.
//!
//! Phase 1: a cohort of `c_H(G)` cops plays the `G` policy inside one layer
//! against the robber's first coordinate. The cop that lands on it becomes a
//! shadow: it stays in its layer and copies every change of the robber's
//! first coordinate. The rest of the cohort, joined by a waiting cop, walks
//! to the next layer and repeats. The shadow layers are the vertices of the
//! `J` policy's initial placement, so once `c_H(J)` shadows exist they stand
//! on that placement inside the robber's column.
//!
//! Phase 2: the shadows play the `J` policy against the robber's second
//! coordinate and follow it whenever it changes column; the remaining cohort
//! walks into the robber's layer, plays the `G` policy there and follows it
//! whenever it changes layer. Every robber move advances at least one of the
//! two factor games, and each of those is won in finitely many of its own
//! rounds.
//!
//! The cops only ever use what the observations tell them. Each factor game
//! is fed the observation it would see on its own factor, derived from the
//! cops' candidate set; when the candidates disagree about it the strategy
//! gives up, which the verifier reports as a refutation.

use super::{cover, give_up, greedy_capture, StrategyError};
use crate::game::{BeliefState, CopConfig, CopStrategy, GameError, Observation, RobberView, Visibility};
use crate::graph::{Graph, ProductKind, Provenance, VertexSet};
use crate::solver::Policy;

#[derive(Clone, Debug)]
struct Factor {
    graph: Graph,
    policy: Policy,
    dist: Vec<Vec<Option<usize>>>,
}

impl Factor {
    fn new(graph: &Graph, policy: Policy) -> Result<Factor, StrategyError> {
        if policy.rules() != Visibility::Hyperopic {
            return Err(StrategyError::Precondition("factor policy is not hyperopic".into()));
        }
        if !graph.is_connected() {
            return Err(StrategyError::Precondition("factor is disconnected".into()));
        }
        let dist = (0..graph.n()).map(|v| graph.distances_from(v)).collect();
        Ok(Factor { graph: graph.clone(), policy, dist })
    }

    fn start(&self) -> &[usize] {
        self.policy.initial().positions()
    }

    /// Next vertex on a shortest path from `from` to `to`.
    fn hop(&self, from: usize, to: usize) -> usize {
        if from == to {
            return from;
        }
        let d = self.dist[from][to].expect("factor is connected");
        self.graph
            .neighbours(from)
            .iter()
            .find(|&x| self.dist[x][to] == Some(d - 1))
            .expect("a shortest path exists")
    }

    /// What the factor game would report about a robber on one of
    /// `projections`, if that report is the same for all of them.
    fn view(&self, cops: &[usize], projections: VertexSet) -> Option<View> {
        let mut out = None;
        for p in projections.iter() {
            let v = if cops.contains(&p) {
                View::Caught(p)
            } else if cops.iter().all(|&c| self.graph.adjacent(c, p)) {
                View::Seen(RobberView::Invisible)
            } else {
                View::Seen(RobberView::Visible(p))
            };
            match out {
                None => out = Some(v),
                Some(o) if o == v => {}
                Some(_) => return None,
            }
        }
        out
    }

    /// Advances the factor game by one robber move and returns the policy's
    /// reply with the belief it was chosen for.
    fn play(&self, cops: &[usize], state: &Sub, view: RobberView) -> Result<(Vec<usize>, VertexSet), GameError> {
        let obs = Observation { cops: CopConfig::new(cops.to_vec()), robber: view };
        let belief = match state {
            Sub::Ready => BeliefState::initial(&self.graph, &obs, Visibility::Hyperopic)?,
            Sub::Playing(b) => {
                BeliefState { candidates: *b }.after_robber_move(&self.graph, &obs, Visibility::Hyperopic)?
            }
            _ => return Err(give_up("factor game is not running")),
        }
        .candidates;
        let entry = self
            .policy
            .lookup(&obs.cops, belief)
            .ok_or_else(|| give_up(format!("factor policy has no move for {} {belief}", obs.cops)))?;
        Ok((entry.action.positions().to_vec(), belief))
    }

    /// Belief of the factor game after the cops' reply, or where the
    /// projection was caught.
    fn after_reply(&self, cops: &[usize], before: VertexSet, projections: VertexSet) -> Option<Sub> {
        match self.view(cops, projections)? {
            View::Caught(p) => Some(Sub::Caught(p)),
            View::Seen(robber) => {
                let obs = Observation { cops: CopConfig::new(cops.to_vec()), robber };
                let b = BeliefState { candidates: before }.after_cop_move(&self.graph, &obs, Visibility::Hyperopic);
                b.ok().map(|b| Sub::Playing(b.candidates))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum View {
    Caught(usize),
    Seen(RobberView),
}

/// Progress of one factor game.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sub {
    /// Cops walking to the policy's initial placement.
    Walking,
    /// On the initial placement; the next observation places the robber.
    Ready,
    /// Policy move just made from this belief; updated after the move.
    Moved(VertexSet),
    /// Belief after the last policy move.
    Playing(VertexSet),
    /// The projection was caught on this factor vertex.
    Caught(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoPhaseMemory {
    shadows: Vec<usize>,
    cohort: Vec<usize>,
    waiting: Vec<usize>,
    cohort_game: Sub,
    shadow_game: Sub,
    belief: Option<VertexSet>,
    broken: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CartesianTwoPhase {
    g: Factor,
    j: Factor,
    /// Layers of the Phase-1 sweeps, then the layer the last waiting cop starts in.
    layers: Vec<usize>,
}

pub fn cartesian_two_phase(
    g: &Graph,
    j: &Graph,
    policy_g: Policy,
    policy_j: Policy,
) -> Result<CartesianTwoPhase, StrategyError> {
    let g = Factor::new(g, policy_g)?;
    let j = Factor::new(j, policy_j)?;
    // The last waiting cop starts off the sweep layers when it can, so that
    // it never shares a vertex with the first cohort.
    let mut layers = j.start().to_vec();
    let spare = j.graph.vertices().iter().find(|y| !layers.contains(y)).unwrap_or(0);
    layers.push(spare);
    Ok(CartesianTwoPhase { g, j, layers })
}

impl CartesianTwoPhase {
    fn idx(&self, x: usize, y: usize) -> usize {
        x * self.j.graph.n() + y
    }

    fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.j.graph.n(), v % self.j.graph.n())
    }

    fn first(&self, s: VertexSet) -> VertexSet {
        s.iter().map(|v| self.coords(v).0).collect()
    }

    fn second(&self, s: VertexSet) -> VertexSet {
        s.iter().map(|v| self.coords(v).1).collect()
    }

    fn kj(&self) -> usize {
        self.j.policy.k()
    }

    fn config(&self, m: &TwoPhaseMemory) -> CopConfig {
        let mut p = m.shadows.clone();
        p.extend_from_slice(&m.cohort);
        p.extend_from_slice(&m.waiting);
        CopConfig::new(p)
    }

    /// One step of every cohort cop towards `(start[i], layer)`, moving the
    /// first coordinate before the second. `layer` is only needed once a cop
    /// is in its target column.
    fn walk(&self, cohort: &mut [usize], layer: Option<usize>) -> Result<bool, GameError> {
        let start = self.g.start();
        let mut arrived = true;
        for (i, c) in cohort.iter_mut().enumerate() {
            let (x, y) = self.coords(*c);
            if x != start[i] {
                *c = self.idx(self.g.hop(x, start[i]), y);
                arrived &= *c == self.idx(start[i], y) && Some(y) == layer;
            } else {
                let layer = layer.ok_or_else(|| give_up("robber's layer is ambiguous"))?;
                *c = self.idx(x, self.j.hop(y, layer));
                arrived &= self.coords(*c).1 == layer;
            }
        }
        Ok(arrived)
    }

    fn single(s: VertexSet, what: &str) -> Result<usize, GameError> {
        match s.len() {
            1 => Ok(s.first().expect("non-empty")),
            _ => Err(give_up(format!("robber's {what} is ambiguous among {s}"))),
        }
    }

    fn phase_one(&self, m: &mut TwoPhaseMemory, b: VertexSet) -> Result<(), GameError> {
        let firsts = self.first(b);
        let layer = self.layers[m.shadows.len()];
        if !m.shadows.is_empty() {
            let a = Self::single(firsts, "first coordinate")?;
            for s in m.shadows.iter_mut() {
                *s = self.idx(a, self.coords(*s).1);
            }
        }
        let caught = match m.cohort_game.clone() {
            Sub::Walking => {
                if self.walk(&mut m.cohort, Some(layer))? {
                    m.cohort_game = Sub::Ready;
                }
                return Ok(());
            }
            Sub::Caught(p) => p,
            state => {
                let xs: Vec<usize> = m.cohort.iter().map(|&c| self.coords(c).0).collect();
                match self.g.view(&xs, firsts) {
                    None => return Err(give_up(format!("first coordinate view is ambiguous among {firsts}"))),
                    Some(View::Caught(p)) => p,
                    Some(View::Seen(view)) => {
                        let (reply, belief) = self.g.play(&xs, &state, view)?;
                        m.cohort = reply.iter().map(|&x| self.idx(x, layer)).collect();
                        m.cohort_game = Sub::Moved(belief);
                        return Ok(());
                    }
                }
            }
        };
        // The cop on the robber's first coordinate becomes a shadow.
        let i = m
            .cohort
            .iter()
            .position(|&c| c == self.idx(caught, layer))
            .ok_or_else(|| give_up("no cohort cop on the caught coordinate"))?;
        m.cohort.remove(i);
        let a = Self::single(firsts, "first coordinate")?;
        m.shadows.push(self.idx(a, layer));
        m.cohort.push(m.waiting.remove(0));
        m.cohort_game = Sub::Walking;
        let target = if m.shadows.len() == self.kj() {
            m.shadow_game = Sub::Ready;
            Self::single(self.second(b), "layer").ok()
        } else {
            Some(self.layers[m.shadows.len()])
        };
        if self.walk(&mut m.cohort, target)? {
            m.cohort_game = Sub::Ready;
        }
        Ok(())
    }

    fn phase_two(&self, m: &mut TwoPhaseMemory, b: VertexSet) -> Result<(), GameError> {
        let (firsts, seconds) = (self.first(b), self.second(b));

        // Shadows: factor game on J inside the robber's column.
        let column = self.coords(m.shadows[0]).0;
        if firsts == VertexSet::singleton(column) {
            let ys: Vec<usize> = m.shadows.iter().map(|&s| self.coords(s).1).collect();
            match self.j.view(&ys, seconds) {
                Some(View::Seen(view)) => {
                    let (reply, belief) = self.j.play(&ys, &m.shadow_game, view)?;
                    m.shadows = reply.iter().map(|&y| self.idx(column, y)).collect();
                    m.shadow_game = Sub::Moved(belief);
                }
                _ => return Err(give_up(format!("second coordinate view is ambiguous among {seconds}"))),
            }
        } else if !firsts.contains(column) && firsts.len() == 1 {
            let a = Self::single(firsts, "first coordinate")?;
            for s in m.shadows.iter_mut() {
                *s = self.idx(a, self.coords(*s).1);
            }
        } else {
            return Err(give_up(format!("cannot tell whether the robber left column {column}")));
        }

        // Cohort: factor game on G inside the robber's layer.
        if m.cohort_game == Sub::Walking {
            if self.walk(&mut m.cohort, Self::single(seconds, "layer").ok())? {
                m.cohort_game = Sub::Ready;
            }
            return Ok(());
        }
        let layer = self.coords(m.cohort[0]).1;
        if seconds == VertexSet::singleton(layer) {
            let xs: Vec<usize> = m.cohort.iter().map(|&c| self.coords(c).0).collect();
            match self.g.view(&xs, firsts) {
                Some(View::Seen(view)) => {
                    let (reply, belief) = self.g.play(&xs, &m.cohort_game, view)?;
                    m.cohort = reply.iter().map(|&x| self.idx(x, layer)).collect();
                    m.cohort_game = Sub::Moved(belief);
                }
                _ => return Err(give_up(format!("first coordinate view is ambiguous among {firsts}"))),
            }
        } else if !seconds.contains(layer) && seconds.len() == 1 {
            let y = Self::single(seconds, "layer")?;
            if !self.j.graph.adjacent(layer, y) {
                return Err(give_up("robber jumped more than one layer"));
            }
            for c in m.cohort.iter_mut() {
                *c = self.idx(self.coords(*c).0, y);
            }
        } else {
            return Err(give_up(format!("cannot tell whether the robber left layer {layer}")));
        }
        Ok(())
    }
}

impl CopStrategy for CartesianTwoPhase {
    type Memory = TwoPhaseMemory;

    fn name(&self) -> String {
        format!("cartesian-two-phase({}+{})", self.g.policy.k(), self.kj())
    }

    fn init(&self, g: &Graph) -> Result<(CopConfig, TwoPhaseMemory), GameError> {
        let (ng, nj) = (self.g.graph.n(), self.j.graph.n());
        match g.provenance() {
            Some(&Provenance::Product { kind: ProductKind::Cartesian, left, right }) if left == ng && right == nj => {}
            _ => return Err(give_up("played on a graph that is not the expected Cartesian product")),
        }
        let start = self.g.start();
        let last = *start.last().expect("policies use at least one cop");
        let m = TwoPhaseMemory {
            shadows: Vec::new(),
            cohort: start.iter().map(|&x| self.idx(x, self.layers[0])).collect(),
            waiting: self.layers[1..].iter().map(|&y| self.idx(last, y)).collect(),
            cohort_game: Sub::Ready,
            shadow_game: Sub::Walking,
            belief: None,
            broken: None,
        };
        Ok((self.config(&m), m))
    }

    fn step(&self, g: &Graph, obs: &Observation, mem: &TwoPhaseMemory) -> Result<(CopConfig, TwoPhaseMemory), GameError> {
        if let Some(reason) = &mem.broken {
            return Err(give_up(reason.clone()));
        }
        let b = match mem.belief {
            None => BeliefState::initial(g, obs, Visibility::Hyperopic)?,
            Some(b) => BeliefState { candidates: b }.after_robber_move(g, obs, Visibility::Hyperopic)?,
        }
        .candidates;
        let mut m = mem.clone();
        m.belief = Some(b);
        if let Some(c) = greedy_capture(g, obs) {
            return Ok((c, m));
        }
        if obs.robber == RobberView::Invisible && b.len() <= obs.cops.len() {
            return Ok((cover(g, &obs.cops, obs.cops.positions(), b)?, m));
        }
        if m.shadows.len() < self.kj() {
            self.phase_one(&mut m, b)?;
        } else {
            self.phase_two(&mut m, b)?;
        }
        Ok((self.config(&m), m))
    }

    fn after_move(&self, g: &Graph, obs: &Observation, mem: &TwoPhaseMemory) -> TwoPhaseMemory {
        let mut m = mem.clone();
        let b = BeliefState { candidates: mem.belief.unwrap_or(VertexSet::EMPTY) };
        let b = match b.after_cop_move(g, obs, Visibility::Hyperopic) {
            Ok(b) => b.candidates,
            Err(e) => {
                m.broken = Some(e.to_string());
                return m;
            }
        };
        m.belief = Some(b);
        if let Sub::Moved(before) = m.cohort_game {
            let xs: Vec<usize> = m.cohort.iter().map(|&c| self.coords(c).0).collect();
            match self.g.after_reply(&xs, before, self.first(b)) {
                Some(s) => m.cohort_game = s,
                None => m.broken = Some(format!("first coordinate view is ambiguous among {}", self.first(b))),
            }
        }
        if let Sub::Moved(before) = m.shadow_game {
            let ys: Vec<usize> = m.shadows.iter().map(|&s| self.coords(s).1).collect();
            match self.j.after_reply(&ys, before, self.second(b)) {
                Some(s) => m.shadow_game = s,
                None => m.broken = Some(format!("second coordinate view is ambiguous among {}", self.second(b))),
            }
        }
        m
    }
}
