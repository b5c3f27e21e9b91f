//! Anchored cops keep the robber visible while a mobile cohort plays a
//! classic (perfect-information) winning policy.
//!
//! `anchored_classic` holds cops on a fixed anchor set; whenever the robber
//! is hidden, the candidates lie in the common neighbourhood of every cop, so
//! the anchors (or, failing that, all cops) step onto all candidates at once.
//! `cut_vertex` splits the graph at a cut vertex `u`: one sentinel guards the
//! side the robber did not start on, and the rest play on the other side.

use super::{cover, give_up, greedy_capture, StrategyError};
use crate::game::{BeliefState, CopConfig, CopStrategy, GameError, Observation, RobberView, Visibility};
use crate::graph::{metrics, Graph, VertexSet};
use crate::solver::{min_cops, Policy, SolverOptions};

/// A classic policy on an induced subgraph, played by a cohort that first
/// walks from wherever it stands to the policy's initial placement.
#[derive(Clone, Debug)]
struct Cohort {
    policy: Policy,
    to_g: Vec<usize>,
    to_sub: Vec<Option<usize>>,
    sub: Graph,
    dist: Vec<Vec<Option<usize>>>,
}

/// Cohort positions (policy cops first, then idle ones) and whether the
/// policy is being played yet.
type CohortState = (Vec<usize>, bool);

impl Cohort {
    fn new(g: &Graph, keep: VertexSet, max_cops: usize) -> Result<Cohort, StrategyError> {
        let (sub, to_g) = g.induced(keep)?;
        let policy = min_cops(&sub, Visibility::Perfect, 1, &SolverOptions::default())?
            .policy
            .expect("winning results carry a policy");
        if policy.k() > max_cops {
            return Err(StrategyError::Precondition(format!(
                "subgraph needs {} classic cops, only {max_cops} available",
                policy.k()
            )));
        }
        let mut to_sub = vec![None; g.n()];
        for (i, &v) in to_g.iter().enumerate() {
            to_sub[v] = Some(i);
        }
        let dist = (0..sub.n()).map(|v| sub.distances_from(v)).collect();
        Ok(Cohort { policy, to_g, to_sub, sub, dist })
    }

    fn targets(&self) -> Vec<usize> {
        self.policy.initial().positions().iter().map(|&v| self.to_g[v]).collect()
    }

    fn start(&self, positions: Vec<usize>) -> CohortState {
        let playing = positions[..self.policy.k()] == self.targets()[..];
        (positions, playing)
    }

    fn hop(&self, from: usize, to: usize) -> Result<usize, GameError> {
        let (Some(a), Some(b)) = (self.to_sub[from], self.to_sub[to]) else {
            return Err(give_up("cohort cop outside its subgraph"));
        };
        let d = self.dist[a][b].ok_or_else(|| give_up("subgraph is disconnected"))?;
        if d == 0 {
            return Ok(from);
        }
        let next = self
            .sub
            .neighbours(a)
            .iter()
            .find(|&x| self.dist[x][b] == Some(d - 1))
            .expect("a shortest path exists");
        Ok(self.to_g[next])
    }

    fn step(&self, (pos, playing): &CohortState, r: usize) -> Result<CohortState, GameError> {
        let k = self.policy.k();
        let mut next = pos.clone();
        if !playing {
            for (i, t) in self.targets().into_iter().enumerate() {
                next[i] = self.hop(pos[i], t)?;
            }
            let arrived = next[..k] == self.targets()[..];
            return Ok((next, arrived));
        }
        let rs = self.to_sub[r].ok_or_else(|| give_up("robber left the cohort's subgraph"))?;
        let active = pos[..k]
            .iter()
            .map(|&v| self.to_sub[v].ok_or_else(|| give_up("cohort cop outside its subgraph")))
            .collect::<Result<Vec<_>, _>>()?;
        let entry = self
            .policy
            .lookup(&CopConfig::new(active), VertexSet::singleton(rs))
            .ok_or_else(|| give_up("classic policy has no move here"))?;
        for (i, &v) in entry.action.positions().iter().enumerate() {
            next[i] = self.to_g[v];
        }
        Ok((next, true))
    }
}

fn update_belief(g: &Graph, obs: &Observation, belief: Option<VertexSet>) -> Result<VertexSet, GameError> {
    Ok(match belief {
        None => BeliefState::initial(g, obs, Visibility::Hyperopic)?,
        Some(b) => BeliefState { candidates: b }.after_robber_move(g, obs, Visibility::Hyperopic)?,
    }
    .candidates)
}

fn belief_after_cops(g: &Graph, obs: &Observation, belief: Option<VertexSet>) -> Option<VertexSet> {
    let b = BeliefState { candidates: belief.unwrap_or(VertexSet::EMPTY) };
    Some(b.after_cop_move(g, obs, Visibility::Hyperopic).map_or(VertexSet::EMPTY, |s| s.candidates))
}

/// Hidden robber: cover with `preferred` cops if they suffice, else with all.
fn cover_hidden(g: &Graph, obs: &Observation, preferred: &[usize], candidates: VertexSet) -> Result<CopConfig, GameError> {
    if candidates.len() <= preferred.len() {
        cover(g, &obs.cops, preferred, candidates)
    } else {
        cover(g, &obs.cops, obs.cops.positions(), candidates)
    }
}

#[derive(Clone, Debug)]
pub struct AnchoredClassic {
    anchors: Vec<usize>,
    cohort: Option<Cohort>,
}

/// Anchors on `anchors` plus `mobile` cops playing a classic winning policy
/// on the whole graph (`mobile = 0` for anchors alone).
pub fn anchored_classic(g: &Graph, anchors: &[usize], mobile: usize) -> Result<AnchoredClassic, StrategyError> {
    if anchors.iter().any(|&v| v >= g.n()) {
        return Err(StrategyError::Precondition("anchor out of range".into()));
    }
    let cohort = if mobile == 0 { None } else { Some(Cohort::new(g, g.vertices(), mobile)?) };
    let mut anchors = anchors.to_vec();
    anchors.sort_unstable();
    Ok(AnchoredClassic { anchors, cohort })
}

impl AnchoredClassic {
    fn config(&self, cohort: &CohortState) -> CopConfig {
        let mut p = self.anchors.clone();
        p.extend_from_slice(&cohort.0);
        CopConfig::new(p)
    }
}

impl CopStrategy for AnchoredClassic {
    type Memory = (CohortState, Option<VertexSet>);

    fn name(&self) -> String {
        format!("anchored-classic({} anchors)", self.anchors.len())
    }

    fn init(&self, _g: &Graph) -> Result<(CopConfig, Self::Memory), GameError> {
        let st = match &self.cohort {
            Some(c) => c.start(c.targets()),
            None => (Vec::new(), true),
        };
        Ok((self.config(&st), (st, None)))
    }

    fn step(&self, g: &Graph, obs: &Observation, (st, belief): &Self::Memory) -> Result<(CopConfig, Self::Memory), GameError> {
        let belief = update_belief(g, obs, *belief)?;
        if let Some(c) = greedy_capture(g, obs) {
            return Ok((c, (st.clone(), Some(belief))));
        }
        match (obs.robber, &self.cohort) {
            (RobberView::Invisible, _) => Ok((cover_hidden(g, obs, &self.anchors, belief)?, (st.clone(), Some(belief)))),
            (RobberView::Visible(_), None) => Err(give_up("visible robber out of reach and no mobile cops")),
            (RobberView::Visible(r), Some(c)) => {
                let next = c.step(st, r)?;
                Ok((self.config(&next), (next, Some(belief))))
            }
        }
    }

    fn after_move(&self, g: &Graph, obs: &Observation, (st, belief): &Self::Memory) -> Self::Memory {
        (st.clone(), belief_after_cops(g, obs, *belief))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    V,
    W,
}

#[derive(Clone, Debug)]
pub struct CutVertex {
    u: usize,
    v: usize,
    w: usize,
    extra: usize,
    side_v: VertexSet,
    cohort_v: Cohort,
    cohort_w: Cohort,
}

/// Sentinel strategy for a graph with a cut vertex: cops on `v`, `w` and
/// `c − 1` cops on `u`, where `v` and `w` are neighbours of the lowest cut
/// vertex `u` in different components of `G − u`.
pub fn cut_vertex(g: &Graph, classic_cops: usize) -> Result<CutVertex, StrategyError> {
    let m = metrics(g);
    let u = m.cut_vertices.first().ok_or_else(|| StrategyError::Precondition("no cut vertex".into()))?;
    let (rest, map) = g.induced(g.vertices().difference(VertexSet::singleton(u)))?;
    let v = g.neighbours(u).first().expect("a cut vertex has neighbours");
    let local_v = map.iter().position(|&x| x == v).expect("v survives the deletion");
    let side_v: VertexSet = rest.component_of(local_v).iter().map(|i| map[i]).collect();
    let w = g
        .neighbours(u)
        .difference(side_v)
        .first()
        .ok_or_else(|| StrategyError::Precondition("u does not separate its neighbours".into()))?;
    let with_u = |s: VertexSet| s.union(VertexSet::singleton(u));
    let side_w = g.vertices().difference(with_u(side_v));
    Ok(CutVertex {
        u,
        v,
        w,
        extra: classic_cops.saturating_sub(1),
        side_v,
        cohort_v: Cohort::new(g, with_u(side_v), classic_cops)?,
        cohort_w: Cohort::new(g, with_u(side_w), classic_cops)?,
    })
}

impl CutVertex {
    fn cohort(&self, side: Side) -> &Cohort {
        match side {
            Side::V => &self.cohort_v,
            Side::W => &self.cohort_w,
        }
    }

    fn sentinel(&self, side: Side) -> usize {
        match side {
            Side::V => self.w,
            Side::W => self.v,
        }
    }

    fn config(&self, side: Side, st: &CohortState) -> CopConfig {
        let mut p = st.0.clone();
        p.push(self.sentinel(side));
        CopConfig::new(p)
    }
}

impl CopStrategy for CutVertex {
    /// Robber's side (fixed at the first observation), cohort, candidates.
    type Memory = (Option<(Side, CohortState)>, Option<VertexSet>);

    fn name(&self) -> String {
        "cut-vertex".into()
    }

    fn init(&self, _g: &Graph) -> Result<(CopConfig, Self::Memory), GameError> {
        let mut p = vec![self.v, self.w];
        p.extend(std::iter::repeat_n(self.u, self.extra));
        Ok((CopConfig::new(p), (None, None)))
    }

    fn step(&self, g: &Graph, obs: &Observation, (play, belief): &Self::Memory) -> Result<(CopConfig, Self::Memory), GameError> {
        let belief = update_belief(g, obs, *belief)?;
        if let Some(c) = greedy_capture(g, obs) {
            return Ok((c, (play.clone(), Some(belief))));
        }
        let r = match obs.robber {
            RobberView::Invisible => {
                let preferred: Vec<usize> = match play {
                    Some((side, _)) => vec![self.sentinel(*side)],
                    None => Vec::new(),
                };
                return Ok((cover_hidden(g, obs, &preferred, belief)?, (play.clone(), Some(belief))));
            }
            RobberView::Visible(r) => r,
        };
        let (side, st) = match play {
            Some(x) => x.clone(),
            None => {
                let side = if self.side_v.contains(r) { Side::V } else { Side::W };
                let mut pos = vec![match side {
                    Side::V => self.v,
                    Side::W => self.w,
                }];
                pos.extend(std::iter::repeat_n(self.u, self.extra));
                // walk the cohort's policy cops first
                (side, self.cohort(side).start(pos))
            }
        };
        let next = self.cohort(side).step(&st, r)?;
        Ok((self.config(side, &next), (Some((side, next)), Some(belief))))
    }

    fn after_move(&self, g: &Graph, obs: &Observation, (play, belief): &Self::Memory) -> Self::Memory {
        (play.clone(), belief_after_cops(g, obs, *belief))
    }
}
