//! Play-through records and their text/JSON serializations.

use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use super::{CopConfig, RobberView};
use crate::graph::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Actor {
    Cops,
    Robber,
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Actor::Cops => "cops",
            Actor::Robber => "robber",
        })
    }
}

/// One half-move and the observation issued after it. Round 0 holds the
/// placements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub round: usize,
    pub actor: Actor,
    pub cops: CopConfig,
    pub robber: usize,
    pub observation: RobberView,
    /// Cops' candidate set after the observation; `None` for traces built
    /// without belief tracking.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub belief: Option<VertexSet>,
    pub captured: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Captured { round: usize },
    /// A full game state repeated; the play loops from `cycle_start` forever.
    Evaded { round: usize, cycle_start: usize },
    Cutoff { round: usize },
    /// Guard objective: the robber entered the guarded path.
    PathEntered { round: usize },
    /// The cop strategy had no move for the observed position.
    StrategyFailed { round: usize, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
    pub outcome: Outcome,
}

impl Trace {
    /// One line per half-move, then the outcome.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let verb = match (e.round, e.actor) {
                (0, _) => "place",
                _ => "move",
            };
            let obs = match e.observation {
                _ if e.captured => "captured".to_string(),
                RobberView::Visible(r) => format!("visible({r})"),
                RobberView::Invisible => "invisible".to_string(),
            };
            let _ = write!(
                out,
                "round {} {} {}: cops {} robber {} obs {}",
                e.round, e.actor, verb, e.cops, e.robber, obs
            );
            if let Some(b) = e.belief {
                let _ = write!(out, " belief {b}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "outcome {}", self.outcome);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serialization cannot fail")
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Captured { round } => write!(f, "captured in round {round}"),
            Outcome::Evaded { round, cycle_start } => {
                write!(f, "evaded: state of round {round} repeats round {cycle_start}")
            }
            Outcome::Cutoff { round } => write!(f, "cutoff after round {round}"),
            Outcome::PathEntered { round } => write!(f, "robber entered the path in round {round}"),
            Outcome::StrategyFailed { round, detail } => {
                write!(f, "strategy failed in round {round}: {detail}")
            }
        }
    }
}
