//! Rules of Hyperopic Cops and Robber: moves, visibility, capture and the
//! cops' belief about where the robber can be.
//!
//! A round is a cop half-move followed by a robber half-move. The robber is
//! invisible exactly when it is adjacent to every cop; standing on a cop's
//! vertex is capture, never invisibility. Observations are issued after
//! every half-move.

mod referee;
mod trace;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

pub use referee::{referee, CopStrategy, RandomRobber, RobberStrategy, ScriptedRobber, StandStillRobber};
pub use trace::{Actor, Outcome, Trace, TraceEvent};

/// Largest supported number of cops.
pub const MAX_COPS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("a cop stands on the robber's vertex {0}")]
    CopOnRobber(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("cop configuration needs 1..={MAX_COPS} cops, got {0}")]
    CopCount(usize),
    #[error("{actor} made an illegal move in round {round}: {detail}")]
    RuleViolation { actor: Actor, round: usize, detail: String },
    #[error("observation inconsistent with belief {belief}")]
    InconsistentObservation { belief: VertexSet },
    #[error("strategy failure in round {round}: {detail}")]
    Strategy { round: usize, detail: String },
}

/// Canonical multiset of cop positions, sorted ascending.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CopConfig(Vec<usize>);

impl CopConfig {
    pub fn new(mut positions: Vec<usize>) -> Self {
        positions.sort_unstable();
        CopConfig(positions)
    }

    /// Validating constructor.
    pub fn checked(g: &Graph, positions: Vec<usize>) -> Result<Self, GameError> {
        if positions.is_empty() || positions.len() > MAX_COPS {
            return Err(GameError::CopCount(positions.len()));
        }
        if let Some(&v) = positions.iter().find(|&&v| v >= g.n()) {
            return Err(GameError::VertexOutOfRange(v));
        }
        Ok(CopConfig::new(positions))
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn occupied(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    /// Six bits per cop, first cop in the low bits.
    pub fn pack(&self) -> u64 {
        self.0.iter().rev().fold(0u64, |acc, &v| (acc << 6) | v as u64)
    }

    pub fn unpack(k: usize, code: u64) -> Self {
        CopConfig((0..k).map(|i| ((code >> (6 * i)) & 63) as usize).collect())
    }
}

impl fmt::Debug for CopConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CopConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Who sees what.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Visibility {
    /// Robber hidden exactly when adjacent to every cop.
    Hyperopic,
    /// Classic game: the robber is always seen.
    Perfect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RobberView {
    Visible(usize),
    Invisible,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Observation {
    pub cops: CopConfig,
    pub robber: RobberView,
}

/// ⋂ N(c) over the cop positions; the region where a robber is hidden.
#[inline]
pub fn hidden_region(g: &Graph, cops: &CopConfig) -> VertexSet {
    cops.positions().iter().fold(g.vertices(), |acc, &c| acc.intersection(g.neighbours(c)))
}

/// Whether a robber on `r` is seen by the cops.
pub fn visible(g: &Graph, cops: &CopConfig, r: usize) -> Result<bool, GameError> {
    if r >= g.n() {
        return Err(GameError::VertexOutOfRange(r));
    }
    if cops.positions().contains(&r) {
        return Err(GameError::CopOnRobber(r));
    }
    Ok(!hidden_region(g, cops).contains(r))
}

pub fn observe(g: &Graph, cops: &CopConfig, r: usize, rules: Visibility) -> Result<Observation, GameError> {
    let seen = rules == Visibility::Perfect || visible(g, cops, r)?;
    Ok(Observation {
        cops: cops.clone(),
        robber: if seen { RobberView::Visible(r) } else { RobberView::Invisible },
    })
}

/// N[r]: stay or step to a neighbour.
pub fn robber_moves(g: &Graph, r: usize) -> VertexSet {
    g.closed_neighbours(r)
}

/// Whether each cop can be matched to a distinct target in its closed
/// neighbourhood. Masks of used cops are tracked as bits of one `u64`.
fn reachable_in_one_move(g: &Graph, cops: &[usize], targets: &[usize]) -> bool {
    let mut states: u64 = 1;
    for &t in targets {
        let mut next = 0u64;
        let mut masks = states;
        while masks != 0 {
            let m = masks.trailing_zeros() as usize;
            masks &= masks - 1;
            for (i, &c) in cops.iter().enumerate() {
                if m & (1 << i) == 0 && g.closed_neighbours(c).contains(t) {
                    next |= 1u64 << (m | (1 << i));
                }
            }
        }
        if next == 0 {
            return false;
        }
        states = next;
    }
    true
}

fn multiset_count(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 + i) / (i + 1))
}

/// All canonical configurations reachable when each cop independently stays
/// or moves to a neighbour, in increasing lexicographic order.
pub fn cop_actions(g: &Graph, cops: &CopConfig) -> Vec<CopConfig> {
    let pos = cops.positions();
    let k = pos.len();
    let product: u128 = pos.iter().map(|&c| g.degree(c) as u128 + 1).product();
    let mut out: Vec<CopConfig> = if product <= 4 * multiset_count(g.n(), k) {
        let mut seen = HashSet::new();
        let mut current = vec![0usize; k];
        fn rec(
            g: &Graph,
            pos: &[usize],
            i: usize,
            current: &mut Vec<usize>,
            seen: &mut HashSet<CopConfig>,
        ) {
            if i == pos.len() {
                seen.insert(CopConfig::new(current.clone()));
                return;
            }
            for t in g.closed_neighbours(pos[i]).iter() {
                current[i] = t;
                rec(g, pos, i + 1, current, seen);
            }
        }
        rec(g, pos, 0, &mut current, &mut seen);
        seen.into_iter().collect()
    } else {
        let mut out = Vec::new();
        let reach = pos.iter().fold(VertexSet::EMPTY, |acc, &c| acc.union(g.closed_neighbours(c)));
        let cand = reach.to_vec();
        let mut current = Vec::with_capacity(k);
        fn rec(
            g: &Graph,
            pos: &[usize],
            cand: &[usize],
            from: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<CopConfig>,
        ) {
            if current.len() == pos.len() {
                if reachable_in_one_move(g, pos, current) {
                    out.push(CopConfig(current.clone()));
                }
                return;
            }
            for i in from..cand.len() {
                current.push(cand[i]);
                rec(g, pos, cand, i, current, out);
                current.pop();
            }
        }
        rec(g, pos, &cand, 0, &mut current, &mut out);
        out
    };
    out.sort_unstable();
    out
}

/// Whether `to` is reachable from `from` in one cop half-move.
pub fn is_legal_cop_move(g: &Graph, from: &CopConfig, to: &CopConfig) -> bool {
    from.len() == to.len()
        && to.positions().iter().all(|&v| v < g.n())
        && reachable_in_one_move(g, from.positions(), to.positions())
}

/// One observation-consistent refinement of the candidate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Branch {
    pub view: RobberView,
    pub candidates: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeliefSplit {
    /// Candidates not standing on a cop. Empty means certain capture.
    pub remaining: VertexSet,
    /// Visible singletons in increasing vertex order, then the hidden branch
    /// if non-empty. The branches partition `remaining`.
    pub branches: Vec<Branch>,
}

/// Splits a cop-free candidate set by what the cops would observe.
pub fn split(g: &Graph, set: VertexSet, cops: &CopConfig, rules: Visibility) -> Vec<Branch> {
    let hidden = match rules {
        Visibility::Hyperopic => set.intersection(hidden_region(g, cops)),
        Visibility::Perfect => VertexSet::EMPTY,
    };
    let mut out: Vec<Branch> = set
        .difference(hidden)
        .iter()
        .map(|v| Branch { view: RobberView::Visible(v), candidates: VertexSet::singleton(v) })
        .collect();
    if !hidden.is_empty() {
        out.push(Branch { view: RobberView::Invisible, candidates: hidden });
    }
    out
}

/// The cops moved to `new_cops`; candidates they landed on are captured.
pub fn belief_after_cop_move(
    g: &Graph,
    belief: VertexSet,
    new_cops: &CopConfig,
    rules: Visibility,
) -> BeliefSplit {
    let remaining = belief.difference(new_cops.occupied());
    BeliefSplit { remaining, branches: split(g, remaining, new_cops, rules) }
}

/// The robber moved: every candidate may stay or step to a neighbour, but never
/// onto a cop.
pub fn belief_after_robber_move(
    g: &Graph,
    belief: VertexSet,
    cops: &CopConfig,
    rules: Visibility,
) -> BeliefSplit {
    let remaining = g.expand(belief).difference(cops.occupied());
    BeliefSplit { remaining, branches: split(g, remaining, cops, rules) }
}

/// Picks the branch consistent with an observation.
pub fn select_branch(split: &BeliefSplit, view: RobberView) -> Option<VertexSet> {
    split.branches.iter().find(|b| b.view == view).map(|b| b.candidates)
}

/// The cops' knowledge, maintained from observations only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BeliefState {
    pub candidates: VertexSet,
}

impl BeliefState {
    /// Robber placed anywhere off the cops, then observed.
    pub fn initial(g: &Graph, obs: &Observation, rules: Visibility) -> Result<Self, GameError> {
        let all = g.vertices().difference(obs.cops.occupied());
        let branches = BeliefSplit { remaining: all, branches: split(g, all, &obs.cops, rules) };
        Self::pick(&branches, obs.robber, all)
    }

    pub fn after_cop_move(
        self,
        g: &Graph,
        obs: &Observation,
        rules: Visibility,
    ) -> Result<Self, GameError> {
        let s = belief_after_cop_move(g, self.candidates, &obs.cops, rules);
        Self::pick(&s, obs.robber, self.candidates)
    }

    pub fn after_robber_move(
        self,
        g: &Graph,
        obs: &Observation,
        rules: Visibility,
    ) -> Result<Self, GameError> {
        let s = belief_after_robber_move(g, self.candidates, &obs.cops, rules);
        Self::pick(&s, obs.robber, self.candidates)
    }

    fn pick(s: &BeliefSplit, view: RobberView, before: VertexSet) -> Result<Self, GameError> {
        select_branch(s, view)
            .map(|candidates| BeliefState { candidates })
            .ok_or(GameError::InconsistentObservation { belief: before })
    }
}
