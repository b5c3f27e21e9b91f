//! Plays a cop strategy against a robber strategy under the game rules.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    is_legal_cop_move, observe, Actor, BeliefState, CopConfig, GameError, Observation, Outcome,
    Trace, TraceEvent, Visibility,
};
use crate::graph::{Graph, VertexSet};

/// A deterministic cop strategy. The strategy sees observations only; all of
/// its knowledge lives in `Memory`, which makes state repetition a sound
/// evasion certificate.
pub trait CopStrategy {
    type Memory: Clone + Eq + Hash + Debug;

    fn name(&self) -> String;

    /// Observation rules the strategy is written for.
    fn rules(&self) -> Visibility {
        Visibility::Hyperopic
    }

    /// Initial placement.
    fn init(&self, g: &Graph) -> Result<(CopConfig, Self::Memory), GameError>;

    /// The cops' half-move, given the latest observation (after the robber
    /// placed or moved).
    fn step(
        &self,
        g: &Graph,
        obs: &Observation,
        mem: &Self::Memory,
    ) -> Result<(CopConfig, Self::Memory), GameError>;

    /// Absorbs the observation issued right after the cops' own move.
    fn after_move(&self, _g: &Graph, _obs: &Observation, mem: &Self::Memory) -> Self::Memory {
        mem.clone()
    }
}

pub trait RobberStrategy {
    fn place(&mut self, g: &Graph, cops: &CopConfig) -> usize;
    fn step(&mut self, g: &Graph, cops: &CopConfig, r: usize) -> usize;
    /// Key of the robber's internal state, or `None` when it is not
    /// reproducible (which disables repetition detection).
    fn memory_key(&self) -> Option<u64> {
        None
    }
}

/// Uniformly random legal moves that avoid stepping onto a cop when possible.
pub struct RandomRobber {
    rng: ChaCha8Rng,
}

impl RandomRobber {
    pub fn new(seed: u64) -> Self {
        RandomRobber { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn pick(&mut self, set: VertexSet, fallback: usize) -> usize {
        set.iter().choose(&mut self.rng).unwrap_or(fallback)
    }
}

impl RobberStrategy for RandomRobber {
    fn place(&mut self, g: &Graph, cops: &CopConfig) -> usize {
        self.pick(g.vertices().difference(cops.occupied()), 0)
    }

    fn step(&mut self, g: &Graph, cops: &CopConfig, r: usize) -> usize {
        self.pick(g.closed_neighbours(r).difference(cops.occupied()), r)
    }
}

/// Places once and never moves. Without a fixed vertex it takes the highest
/// free vertex.
pub struct StandStillRobber {
    pub vertex: Option<usize>,
}

impl RobberStrategy for StandStillRobber {
    fn place(&mut self, g: &Graph, cops: &CopConfig) -> usize {
        self.vertex.unwrap_or_else(|| {
            let free = g.vertices().difference(cops.occupied());
            free.iter().last().unwrap_or(0)
        })
    }

    fn step(&mut self, _g: &Graph, _cops: &CopConfig, r: usize) -> usize {
        r
    }

    fn memory_key(&self) -> Option<u64> {
        Some(0)
    }
}

/// Follows a fixed list of vertices, then stands still.
pub struct ScriptedRobber {
    pub start: usize,
    pub moves: Vec<usize>,
    next: usize,
}

impl ScriptedRobber {
    pub fn new(start: usize, moves: Vec<usize>) -> Self {
        ScriptedRobber { start, moves, next: 0 }
    }
}

impl RobberStrategy for ScriptedRobber {
    fn place(&mut self, _g: &Graph, _cops: &CopConfig) -> usize {
        self.start
    }

    fn step(&mut self, _g: &Graph, _cops: &CopConfig, r: usize) -> usize {
        let v = self.moves.get(self.next).copied().unwrap_or(r);
        self.next = (self.next + 1).min(self.moves.len());
        v
    }

    fn memory_key(&self) -> Option<u64> {
        Some(self.next as u64)
    }
}

struct Recorder<'a> {
    g: &'a Graph,
    rules: Visibility,
    belief: Option<BeliefState>,
    events: Vec<TraceEvent>,
}

impl Recorder<'_> {
    /// Records a half-move; returns the observation, or `None` on capture.
    fn record(
        &mut self,
        round: usize,
        actor: Actor,
        cops: &CopConfig,
        r: usize,
    ) -> Result<Option<Observation>, GameError> {
        let captured = cops.positions().contains(&r);
        let obs = if captured {
            Observation { cops: cops.clone(), robber: super::RobberView::Visible(r) }
        } else {
            observe(self.g, cops, r, self.rules)?
        };
        if !captured {
            let next = match (self.belief, round, actor) {
                (_, 0, Actor::Robber) => BeliefState::initial(self.g, &obs, self.rules)?,
                (Some(b), _, Actor::Cops) => b.after_cop_move(self.g, &obs, self.rules)?,
                (Some(b), _, Actor::Robber) => b.after_robber_move(self.g, &obs, self.rules)?,
                (None, _, _) => unreachable!("belief exists after placement"),
            };
            if !next.candidates.contains(r) {
                return Err(GameError::InconsistentObservation { belief: next.candidates });
            }
            self.belief = Some(next);
        }
        self.events.push(TraceEvent {
            round,
            actor,
            cops: cops.clone(),
            robber: r,
            observation: obs.robber,
            belief: if captured { None } else { self.belief.map(|b| b.candidates) },
            captured,
        });
        Ok((!captured).then_some(obs))
    }
}

/// Plays up to `round_cap` rounds. Capture is checked after every half-move,
/// and the cops' belief is tracked alongside to check that the robber is
/// always among the candidates.
pub fn referee<S, R>(
    g: &Graph,
    cops: &S,
    robber: &mut R,
    round_cap: usize,
    rules: Visibility,
) -> Result<Trace, GameError>
where
    S: CopStrategy,
    R: RobberStrategy + ?Sized,
{
    let mut rec = Recorder { g, rules, belief: None, events: Vec::new() };
    let (mut config, mut mem) = cops.init(g)?;
    check_config(g, &config, Actor::Cops, 0)?;
    let mut r = robber.place(g, &config);
    if r >= g.n() {
        return Err(violation(Actor::Robber, 0, format!("placed on missing vertex {r}")));
    }
    let Some(mut obs) = rec.record(0, Actor::Robber, &config, r)? else {
        return Ok(Trace { events: rec.events, outcome: Outcome::Captured { round: 0 } });
    };

    let mut seen: HashMap<(CopConfig, usize, S::Memory, u64), usize> = HashMap::new();
    for round in 1..=round_cap {
        if let Some(key) = robber.memory_key() {
            if let Some(&first) = seen.get(&(config.clone(), r, mem.clone(), key)) {
                let outcome = Outcome::Evaded { round: round - 1, cycle_start: first };
                return Ok(Trace { events: rec.events, outcome });
            }
            seen.insert((config.clone(), r, mem.clone(), key), round - 1);
        }

        let (next, next_mem) = match cops.step(g, &obs, &mem) {
            Ok(x) => x,
            Err(GameError::Strategy { detail, .. }) => {
                let outcome = Outcome::StrategyFailed { round, detail };
                return Ok(Trace { events: rec.events, outcome });
            }
            Err(e) => return Err(e),
        };
        check_config(g, &next, Actor::Cops, round)?;
        if !is_legal_cop_move(g, &config, &next) {
            return Err(violation(Actor::Cops, round, format!("{config} -> {next}")));
        }
        config = next;
        let Some(after_cops) = rec.record(round, Actor::Cops, &config, r)? else {
            return Ok(Trace { events: rec.events, outcome: Outcome::Captured { round } });
        };
        mem = cops.after_move(g, &after_cops, &next_mem);

        let to = robber.step(g, &config, r);
        if to >= g.n() || !g.closed_neighbours(r).contains(to) {
            return Err(violation(Actor::Robber, round, format!("{r} -> {to}")));
        }
        r = to;
        match rec.record(round, Actor::Robber, &config, r)? {
            Some(o) => obs = o,
            None => return Ok(Trace { events: rec.events, outcome: Outcome::Captured { round } }),
        }
    }
    Ok(Trace { events: rec.events, outcome: Outcome::Cutoff { round: round_cap } })
}

fn check_config(g: &Graph, c: &CopConfig, actor: Actor, round: usize) -> Result<(), GameError> {
    match c.positions().iter().find(|&&v| v >= g.n()) {
        Some(v) => Err(violation(actor, round, format!("vertex {v} out of range"))),
        None => Ok(()),
    }
}

fn violation(actor: Actor, round: usize, detail: String) -> GameError {
    GameError::RuleViolation { actor, round, detail }
}
