//! Strategies on joins `G ∨ J`, where every vertex of one side is adjacent
//! to every vertex of the other.
//!
//! A robber seen on one side is adjacent to every cop on the other side, so
//! as long as both sides hold a cop, visibility means capture on the next
//! move.

use super::{cover, give_up, greedy_capture, StrategyError};
use crate::game::{BeliefState, CopConfig, CopStrategy, GameError, Observation, RobberView, Visibility};
use crate::graph::{Graph, Provenance, VertexSet};
use crate::scn::upsilon;
use crate::solver::Policy;

/// Splits a join into its two sides: `(left size, left side, right side)`.
fn sides(joined: &Graph) -> Result<(usize, Graph, Graph), StrategyError> {
    let Some(&Provenance::Join { left, right }) = joined.provenance() else {
        return Err(StrategyError::Precondition("graph carries no join partition".into()));
    };
    let l: VertexSet = (0..left).collect();
    let r: VertexSet = (left..left + right).collect();
    Ok((left, joined.induced(l)?.0, joined.induced(r)?.0))
}

fn check_graph(g: &Graph, n: usize) -> Result<(), GameError> {
    match g.provenance() {
        Some(&Provenance::Join { left, right }) if left + right == n => Ok(()),
        _ => Err(give_up("played on a graph that is not the expected join")),
    }
}

#[derive(Clone, Debug)]
pub struct JoinScn {
    n: usize,
    shift: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

/// Cops on a minimum SCN set of each side.
pub fn join_scn(joined: &Graph) -> Result<JoinScn, StrategyError> {
    let (shift, g, j) = sides(joined)?;
    Ok(JoinScn {
        n: joined.n(),
        shift,
        left: upsilon(&g).witness.to_vec(),
        right: upsilon(&j).witness.iter().map(|v| v + shift).collect(),
    })
}

impl CopStrategy for JoinScn {
    type Memory = ();

    fn name(&self) -> String {
        format!("join-scn({}+{})", self.left.len(), self.right.len())
    }

    fn init(&self, g: &Graph) -> Result<(CopConfig, ()), GameError> {
        check_graph(g, self.n)?;
        let mut p = self.left.clone();
        p.extend_from_slice(&self.right);
        Ok((CopConfig::new(p), ()))
    }

    fn step(&self, g: &Graph, obs: &Observation, _: &()) -> Result<(CopConfig, ()), GameError> {
        if let Some(c) = greedy_capture(g, obs) {
            return Ok((c, ()));
        }
        if obs.robber != RobberView::Invisible {
            return Err(give_up("visible robber not adjacent to any cop"));
        }
        // Each side's hidden vertices lie in the common neighbourhood of that
        // side's witness; each cohort sweeps its own side in ascending order.
        let hidden = crate::game::hidden_region(g, &obs.cops);
        let left_side: VertexSet = (0..self.shift).collect();
        let mut p = obs.cops.positions().to_vec();
        let sweeps = [(&self.left, hidden.intersection(left_side)), (&self.right, hidden.difference(left_side))];
        for (cohort, candidates) in sweeps {
            let config = CopConfig::new(p.clone());
            p = cover(g, &config, cohort, candidates)?.positions().to_vec();
        }
        Ok((CopConfig::new(p), ()))
    }
}

#[derive(Clone, Debug)]
pub struct JoinConnectedDisconnected {
    n: usize,
    sentries: [usize; 2],
    policy: Policy,
}

/// Two sentries in different components of the disconnected side `J`
/// (vertices `left..`), plus a winning hyperopic policy for the connected
/// side `G` (vertices `0..left`).
pub fn join_connected_disconnected(joined: &Graph, policy_g: Policy) -> Result<JoinConnectedDisconnected, StrategyError> {
    let (shift, g, j) = sides(joined)?;
    if !g.is_connected() {
        return Err(StrategyError::Precondition("left side is disconnected".into()));
    }
    let comps = j.components();
    if comps.len() < 2 {
        return Err(StrategyError::Precondition("right side is connected".into()));
    }
    if policy_g.rules() != Visibility::Hyperopic {
        return Err(StrategyError::Precondition("policy for the left side is not hyperopic".into()));
    }
    let lowest = |c: VertexSet| c.first().expect("components are non-empty") + shift;
    Ok(JoinConnectedDisconnected { n: joined.n(), sentries: [lowest(comps[0]), lowest(comps[1])], policy: policy_g })
}

impl CopStrategy for JoinConnectedDisconnected {
    /// Candidate set on the join after the last cop move.
    type Memory = Option<VertexSet>;

    fn name(&self) -> String {
        format!("join-connected-disconnected({}+2)", self.policy.k())
    }

    fn init(&self, g: &Graph) -> Result<(CopConfig, Self::Memory), GameError> {
        check_graph(g, self.n)?;
        let mut p = self.policy.initial().positions().to_vec();
        p.extend_from_slice(&self.sentries);
        Ok((CopConfig::new(p), None))
    }

    fn step(&self, g: &Graph, obs: &Observation, mem: &Self::Memory) -> Result<(CopConfig, Self::Memory), GameError> {
        let belief = match mem {
            None => BeliefState::initial(g, obs, Visibility::Hyperopic)?,
            Some(b) => BeliefState { candidates: *b }.after_robber_move(g, obs, Visibility::Hyperopic)?,
        }
        .candidates;
        if let Some(c) = greedy_capture(g, obs) {
            return Ok((c, Some(belief)));
        }
        // No vertex of J is adjacent to both sentries, so a hidden robber is
        // inside G and the G game sees exactly the same observation.
        let mobile: Vec<usize> =
            obs.cops.positions().iter().copied().filter(|v| !self.sentries.contains(v)).collect();
        let mut rest = obs.cops.positions().to_vec();
        for s in self.sentries {
            let i = rest.iter().position(|&v| v == s).ok_or_else(|| give_up("a sentry left its post"))?;
            rest.remove(i);
        }
        debug_assert_eq!(rest.len(), mobile.len());
        let entry = self
            .policy
            .lookup(&CopConfig::new(rest), belief)
            .ok_or_else(|| give_up(format!("left policy has no move for {} {belief}", CopConfig::new(mobile))))?;
        let mut p = entry.action.positions().to_vec();
        p.extend_from_slice(&self.sentries);
        Ok((CopConfig::new(p), Some(belief)))
    }

    fn after_move(&self, g: &Graph, obs: &Observation, mem: &Self::Memory) -> Self::Memory {
        let b = BeliefState { candidates: mem.unwrap_or(VertexSet::EMPTY) };
        Some(b.after_cop_move(g, obs, Visibility::Hyperopic).map_or(VertexSet::EMPTY, |s| s.candidates))
    }
}
