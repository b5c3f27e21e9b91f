//! Executable cop strategies and an exhaustive best-response verifier.
//!
//! Strategies see observations only. Each keeps whatever it knows (including
//! its own candidate set for the robber) in a finite memory value, so the
//! verifier can explore the product of strategy memory, cop positions and
//! robber position exhaustively.

mod anchored;
mod cartesian;
mod guard;
mod join;
mod sweep;

use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use thiserror::Error;

pub use anchored::{anchored_classic, cut_vertex, AnchoredClassic, CutVertex};
pub use cartesian::{cartesian_two_phase, CartesianTwoPhase};
pub use guard::{isometric_guard, IsometricGuard};
pub use join::{join_connected_disconnected, join_scn, JoinConnectedDisconnected, JoinScn};
pub use sweep::{kn_pm_sweep, KnPmSweep};

pub use crate::game::CopStrategy;
use crate::game::{
    observe, Actor, BeliefState, CopConfig, GameError, Observation, Outcome, RobberView, Trace,
    TraceEvent, Visibility,
};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::solver::{Objective, Policy, SolveError};

/// Default cap on verifier states.
pub const DEFAULT_STATE_CAP: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("graph lacks the structure this strategy needs: {0}")]
    Precondition(String),
    #[error("verifier explored more than {0} states")]
    StateCap(usize),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Capture objective: every play ends in capture by this cop move.
    /// Guard objective: no robber survives on the path from this cop move on.
    Certified(usize),
    Refuted(Trace),
}

/// Runtime failure of a strategy whose assumptions did not hold.
pub(crate) fn give_up(detail: impl Into<String>) -> GameError {
    GameError::Strategy { round: 0, detail: detail.into() }
}

/// If the robber is seen on or next to a cop, the first such cop (in sorted
/// order) steps onto it and everyone else stays.
pub(crate) fn greedy_capture(g: &Graph, obs: &Observation) -> Option<CopConfig> {
    let RobberView::Visible(r) = obs.robber else { return None };
    let mut p = obs.cops.positions().to_vec();
    let i = p.iter().position(|&c| g.closed_neighbours(c).contains(r))?;
    p[i] = r;
    Some(CopConfig::new(p))
}

/// Moves the cops listed in `movers` (positions, in order) onto the sorted
/// candidates one by one; everyone else stays. Every mover must be adjacent
/// to every candidate it is sent to.
pub(crate) fn cover(
    g: &Graph,
    cops: &CopConfig,
    movers: &[usize],
    candidates: VertexSet,
) -> Result<CopConfig, GameError> {
    if candidates.len() > movers.len() {
        return Err(give_up(format!("{} candidates for {} cops", candidates.len(), movers.len())));
    }
    let mut p = cops.positions().to_vec();
    for (&from, to) in movers.iter().zip(candidates.iter()) {
        if !g.closed_neighbours(from).contains(to) {
            return Err(give_up(format!("cop at {from} cannot reach candidate {to}")));
        }
        let i = p.iter().position(|&c| c == from).ok_or_else(|| give_up("mover is not a cop"))?;
        p.remove(i);
        p.push(to);
    }
    // Movers were consumed from `p`; re-add nothing, they moved.
    Ok(CopConfig::new(p))
}

/// Plays a solver policy, tracking the candidate set from observations.
#[derive(Clone, Debug)]
pub struct PolicyStrategy {
    policy: Policy,
}

impl PolicyStrategy {
    pub fn new(policy: Policy) -> Self {
        PolicyStrategy { policy }
    }
}

impl CopStrategy for PolicyStrategy {
    /// `None` until the robber has been placed.
    type Memory = Option<VertexSet>;

    fn name(&self) -> String {
        format!("policy({} cops)", self.policy.k())
    }

    fn rules(&self) -> Visibility {
        self.policy.rules()
    }

    fn init(&self, _g: &Graph) -> Result<(CopConfig, Self::Memory), GameError> {
        Ok((self.policy.initial().clone(), None))
    }

    fn step(&self, g: &Graph, obs: &Observation, mem: &Self::Memory) -> Result<(CopConfig, Self::Memory), GameError> {
        let rules = self.policy.rules();
        let belief = match mem {
            None => BeliefState::initial(g, obs, rules)?,
            Some(b) => BeliefState { candidates: *b }.after_robber_move(g, obs, rules)?,
        };
        let entry = self
            .policy
            .lookup(&obs.cops, belief.candidates)
            .ok_or_else(|| give_up(format!("no policy entry for {} {}", obs.cops, belief.candidates)))?;
        Ok((entry.action.clone(), Some(belief.candidates)))
    }

    fn after_move(&self, g: &Graph, obs: &Observation, mem: &Self::Memory) -> Self::Memory {
        let b = mem.unwrap_or(VertexSet::EMPTY);
        Some(
            BeliefState { candidates: b }
                .after_cop_move(g, obs, self.policy.rules())
                .map_or(VertexSet::EMPTY, |s| s.candidates),
        )
    }
}

/// Cops that never leave their starting vertices.
#[derive(Clone, Debug)]
pub struct StandStill {
    pub positions: Vec<usize>,
}

impl CopStrategy for StandStill {
    type Memory = ();

    fn name(&self) -> String {
        "stand-still".into()
    }

    fn init(&self, g: &Graph) -> Result<(CopConfig, ()), GameError> {
        Ok((CopConfig::checked(g, self.positions.clone())?, ()))
    }

    fn step(&self, _g: &Graph, obs: &Observation, _mem: &()) -> Result<(CopConfig, ()), GameError> {
        Ok((obs.cops.clone(), ()))
    }
}

/// Runs a strategy with one cop deleted. The deleted cop is frozen at its
/// starting vertex: the inner strategy still believes it is there, but it
/// never moves and never captures. Whatever move the inner strategy makes
/// for it is dropped; the other cops move as instructed.
#[derive(Clone, Debug)]
pub struct RemoveCop<S> {
    pub inner: S,
    /// Index into the inner strategy's sorted initial configuration.
    pub removed: usize,
}

impl<S: CopStrategy> RemoveCop<S> {
    fn with_phantom(&self, obs: &Observation, phantom: usize) -> Observation {
        let mut p = obs.cops.positions().to_vec();
        p.push(phantom);
        Observation { cops: CopConfig::new(p), robber: obs.robber }
    }

    /// Drops one destination of `next` so that the real cops `from` can make
    /// the rest of the move, preferring the phantom's own vertex.
    fn without_phantom(&self, g: &Graph, from: &CopConfig, next: &CopConfig, phantom: usize) -> Result<CopConfig, GameError> {
        let p = next.positions();
        let order = p.iter().position(|&v| v == phantom).into_iter().chain(0..p.len());
        for i in order {
            let mut rest = p.to_vec();
            rest.remove(i);
            let rest = CopConfig::new(rest);
            if crate::game::is_legal_cop_move(g, from, &rest) {
                return Ok(rest);
            }
        }
        Err(give_up("the remaining cops cannot make the inner strategy's move"))
    }
}

impl<S: CopStrategy> CopStrategy for RemoveCop<S> {
    type Memory = (S::Memory, usize);

    fn name(&self) -> String {
        format!("{} without cop {}", self.inner.name(), self.removed)
    }

    fn rules(&self) -> Visibility {
        self.inner.rules()
    }

    fn init(&self, g: &Graph) -> Result<(CopConfig, Self::Memory), GameError> {
        let (c, m) = self.inner.init(g)?;
        if c.len() < 2 || self.removed >= c.len() {
            return Err(give_up("no cop to remove"));
        }
        let phantom = c.positions()[self.removed];
        let mut p = c.positions().to_vec();
        p.remove(self.removed);
        Ok((CopConfig::new(p), (m, phantom)))
    }

    fn step(&self, g: &Graph, obs: &Observation, mem: &Self::Memory) -> Result<(CopConfig, Self::Memory), GameError> {
        // The inner strategy reasons about a cop that is not really there, so
        // any failure of it is a failure of the weakened strategy.
        let (next, m) = self
            .inner
            .step(g, &self.with_phantom(obs, mem.1), &mem.0)
            .map_err(|e| give_up(format!("inner strategy failed: {e}")))?;
        Ok((self.without_phantom(g, &obs.cops, &next, mem.1)?, (m, mem.1)))
    }

    fn after_move(&self, g: &Graph, obs: &Observation, mem: &Self::Memory) -> Self::Memory {
        (self.inner.after_move(g, &self.with_phantom(obs, mem.1), &mem.0), mem.1)
    }
}

enum Kind {
    Capture,
    Fail(String),
    /// The cops moved to `after` without capturing; `violation` marks a robber
    /// that stood on the guarded path and survived the move.
    Moved { after: CopConfig, violation: bool, succ: Vec<u32> },
}

struct StateGraph<M> {
    states: Vec<(CopConfig, usize, M)>,
    kinds: Vec<Kind>,
    parent: Vec<Option<u32>>,
    roots: Vec<u32>,
}

fn explore<S: CopStrategy>(
    g: &Graph,
    s: &S,
    path: VertexSet,
    cap: usize,
) -> Result<StateGraph<S::Memory>, StrategyError> {
    let rules = s.rules();
    let (c0, m0) = s.init(g)?;
    if c0.positions().iter().any(|&v| v >= g.n()) {
        return Err(GameError::RuleViolation { actor: Actor::Cops, round: 0, detail: format!("placement {c0}") }.into());
    }
    let mut index: FxHashMap<(CopConfig, usize, S::Memory), u32> = FxHashMap::default();
    let mut sg = StateGraph { states: Vec::new(), kinds: Vec::new(), parent: Vec::new(), roots: Vec::new() };
    let mut queue = VecDeque::new();
    for r in g.vertices().difference(c0.occupied()).iter() {
        let id = sg.states.len() as u32;
        index.insert((c0.clone(), r, m0.clone()), id);
        sg.states.push((c0.clone(), r, m0.clone()));
        sg.parent.push(None);
        sg.roots.push(id);
        queue.push_back(id);
    }
    while let Some(id) = queue.pop_front() {
        let (cops, r, mem) = sg.states[id as usize].clone();
        let obs = observe(g, &cops, r, rules)?;
        let kind = match s.step(g, &obs, &mem) {
            Err(GameError::Strategy { detail, .. }) => Kind::Fail(detail),
            Err(e) => return Err(e.into()),
            Ok((next, next_mem)) => {
                if !crate::game::is_legal_cop_move(g, &cops, &next) {
                    return Err(GameError::RuleViolation {
                        actor: Actor::Cops,
                        round: 0,
                        detail: format!("{cops} -> {next} (robber at {r})"),
                    }
                    .into());
                }
                if next.positions().contains(&r) {
                    Kind::Capture
                } else {
                    let after_obs = observe(g, &next, r, rules)?;
                    let m2 = s.after_move(g, &after_obs, &next_mem);
                    let mut succ = Vec::new();
                    for r2 in g.closed_neighbours(r).difference(next.occupied()).iter() {
                        let key = (next.clone(), r2, m2.clone());
                        let sid = match index.get(&key) {
                            Some(&x) => x,
                            None => {
                                let x = sg.states.len() as u32;
                                if sg.states.len() >= cap {
                                    return Err(StrategyError::StateCap(cap));
                                }
                                index.insert(key.clone(), x);
                                sg.states.push(key);
                                sg.parent.push(Some(id));
                                queue.push_back(x);
                                x
                            }
                        };
                        succ.push(sid);
                    }
                    Kind::Moved { after: next, violation: path.contains(r), succ }
                }
            }
        };
        sg.kinds.push(kind);
        debug_assert_eq!(sg.kinds.len(), id as usize + 1);
    }
    Ok(sg)
}

/// Longest-path values over `adj`: value(s) = max(base(s), 1 + max value(t)).
/// A reachable cycle yields the DFS stack (a path from a root) and the stack
/// position the back edge returns to.
fn longest(adj: &[Vec<u32>], base: &[i64], roots: &[u32]) -> Result<Vec<i64>, (Vec<u32>, usize)> {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    let mut colour = vec![WHITE; adj.len()];
    let mut pos = vec![0usize; adj.len()];
    let mut value = base.to_vec();
    for &root in roots {
        if colour[root as usize] != WHITE {
            continue;
        }
        let mut stack: Vec<(u32, usize)> = vec![(root, 0)];
        colour[root as usize] = GREY;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if let Some(&w) = adj[v as usize].get(*i) {
                *i += 1;
                match colour[w as usize] {
                    WHITE => {
                        colour[w as usize] = GREY;
                        pos[w as usize] = stack.len();
                        stack.push((w, 0));
                    }
                    GREY => return Err((stack.iter().map(|f| f.0).collect(), pos[w as usize])),
                    _ => value[v as usize] = value[v as usize].max(1 + value[w as usize]),
                }
            } else {
                colour[v as usize] = 2;
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    value[p as usize] = value[p as usize].max(1 + value[v as usize]);
                }
            }
        }
    }
    Ok(value)
}

/// Builds the trace of the state path `path` (a root first, consecutive
/// states linked by robber moves), finishing with `ending`.
fn trace_along<M>(g: &Graph, sg: &StateGraph<M>, rules: Visibility, path: &[u32], ending: Outcome) -> Trace {
    let view = |c: &CopConfig, r: usize| {
        observe(g, c, r, rules).map(|o| o.robber).unwrap_or(RobberView::Visible(r))
    };
    let mut events = Vec::new();
    let (c0, r0, _) = &sg.states[path[0] as usize];
    events.push(TraceEvent {
        round: 0,
        actor: Actor::Robber,
        cops: c0.clone(),
        robber: *r0,
        observation: view(c0, *r0),
        belief: None,
        captured: false,
    });
    for (i, w) in path.windows(2).enumerate() {
        let r = sg.states[w[0] as usize].1;
        let (c, r2, _) = &sg.states[w[1] as usize];
        events.push(TraceEvent {
            round: i + 1,
            actor: Actor::Cops,
            cops: c.clone(),
            robber: r,
            observation: view(c, r),
            belief: None,
            captured: false,
        });
        events.push(TraceEvent {
            round: i + 1,
            actor: Actor::Robber,
            cops: c.clone(),
            robber: *r2,
            observation: view(c, *r2),
            belief: None,
            captured: false,
        });
    }
    let last = *path.last().expect("non-empty path");
    let round = path.len();
    match (&sg.kinds[last as usize], &ending) {
        (Kind::Moved { after, .. }, Outcome::PathEntered { .. }) => {
            let r = sg.states[last as usize].1;
            events.push(TraceEvent {
                round,
                actor: Actor::Cops,
                cops: after.clone(),
                robber: r,
                observation: view(after, r),
                belief: None,
                captured: false,
            });
        }
        (Kind::Moved { after, .. }, Outcome::Evaded { .. }) => {
            // the closing half-moves back into the repeated state
            let r = sg.states[last as usize].1;
            events.push(TraceEvent {
                round,
                actor: Actor::Cops,
                cops: after.clone(),
                robber: r,
                observation: view(after, r),
                belief: None,
                captured: false,
            });
        }
        _ => {}
    }
    Trace { events, outcome: ending }
}

fn path_to<M>(sg: &StateGraph<M>, mut id: u32) -> Vec<u32> {
    let mut out = vec![id];
    while let Some(p) = sg.parent[id as usize] {
        out.push(p);
        id = p;
    }
    out.reverse();
    out
}

/// Exhaustive adversarial verification of a deterministic strategy.
pub fn best_response<S: CopStrategy>(g: &Graph, s: &S, objective: &Objective) -> Result<Verdict, StrategyError> {
    best_response_with(g, s, objective, DEFAULT_STATE_CAP)
}

pub fn best_response_with<S: CopStrategy>(
    g: &Graph,
    s: &S,
    objective: &Objective,
    cap: usize,
) -> Result<Verdict, StrategyError> {
    let path = match objective {
        Objective::Capture => VertexSet::EMPTY,
        Objective::Guard(p) => {
            if !g.is_isometric_path(p)? {
                return Err(SolveError::NotIsometric.into());
            }
            p.iter().copied().collect()
        }
    };
    let rules = s.rules();
    let sg = explore(g, s, path, cap)?;
    if sg.roots.is_empty() {
        return Ok(Verdict::Certified(0));
    }

    // A strategy that runs out of moves is refuted outright.
    if let Some(id) = sg.kinds.iter().position(|k| matches!(k, Kind::Fail(_))) {
        let p = path_to(&sg, id as u32);
        let Kind::Fail(detail) = &sg.kinds[id] else { unreachable!() };
        let ending = Outcome::StrategyFailed { round: p.len(), detail: detail.clone() };
        return Ok(Verdict::Refuted(trace_along(g, &sg, rules, &p, ending)));
    }

    const NEG: i64 = i64::MIN / 4;
    match objective {
        Objective::Capture => {
            let adj: Vec<Vec<u32>> = sg
                .kinds
                .iter()
                .map(|k| match k {
                    Kind::Moved { succ, .. } => succ.clone(),
                    _ => Vec::new(),
                })
                .collect();
            let base: Vec<i64> =
                sg.kinds.iter().map(|k| if matches!(k, Kind::Capture) { 1 } else { NEG }).collect();
            match longest(&adj, &base, &sg.roots) {
                Ok(v) => Ok(Verdict::Certified(sg.roots.iter().map(|&r| v[r as usize]).max().unwrap_or(0) as usize)),
                Err((stack, back)) => {
                    let ending = Outcome::Evaded { round: stack.len(), cycle_start: back };
                    Ok(Verdict::Refuted(trace_along(g, &sg, rules, &stack, ending)))
                }
            }
        }
        Objective::Guard(_) => {
            // States from which the robber can still force a path violation.
            let n = sg.states.len();
            let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
            let mut bad = vec![false; n];
            let mut queue = VecDeque::new();
            for (i, k) in sg.kinds.iter().enumerate() {
                if let Kind::Moved { succ, violation, .. } = k {
                    for &t in succ {
                        rev[t as usize].push(i as u32);
                    }
                    if *violation {
                        bad[i] = true;
                        queue.push_back(i as u32);
                    }
                }
            }
            while let Some(t) = queue.pop_front() {
                for &p in &rev[t as usize] {
                    if !bad[p as usize] {
                        bad[p as usize] = true;
                        queue.push_back(p);
                    }
                }
            }
            let adj: Vec<Vec<u32>> = sg
                .kinds
                .iter()
                .enumerate()
                .map(|(i, k)| match k {
                    Kind::Moved { succ, .. } if bad[i] => succ.iter().copied().filter(|&t| bad[t as usize]).collect(),
                    _ => Vec::new(),
                })
                .collect();
            let base: Vec<i64> = sg
                .kinds
                .iter()
                .map(|k| if matches!(k, Kind::Moved { violation: true, .. }) { 0 } else { NEG })
                .collect();
            let roots: Vec<u32> = sg.roots.iter().copied().filter(|&r| bad[r as usize]).collect();
            match longest(&adj, &base, &roots) {
                Ok(v) => {
                    let worst = roots.iter().map(|&r| v[r as usize] + 1).max().unwrap_or(0);
                    Ok(Verdict::Certified(worst.max(0) as usize))
                }
                Err((mut stack, back)) => {
                    // Go round the cycle once more, then walk to a violation.
                    let cycle: Vec<u32> = stack[back..].to_vec();
                    stack.extend_from_slice(&cycle);
                    let from = *stack.last().expect("non-empty");
                    let mut prev: FxHashMap<u32, u32> = FxHashMap::default();
                    let mut q = VecDeque::from([from]);
                    let mut target = None;
                    while let Some(x) = q.pop_front() {
                        if matches!(sg.kinds[x as usize], Kind::Moved { violation: true, .. }) {
                            target = Some(x);
                            break;
                        }
                        for &y in &adj[x as usize] {
                            if y != from && !prev.contains_key(&y) {
                                prev.insert(y, x);
                                q.push_back(y);
                            }
                        }
                    }
                    let mut tail = Vec::new();
                    let mut x = target.expect("every state on the cycle can reach a violation");
                    while x != from {
                        tail.push(x);
                        x = prev[&x];
                    }
                    tail.reverse();
                    stack.extend(tail);
                    let ending = Outcome::PathEntered { round: stack.len() };
                    Ok(Verdict::Refuted(trace_along(g, &sg, rules, &stack, ending)))
                }
            }
        }
    }
}
