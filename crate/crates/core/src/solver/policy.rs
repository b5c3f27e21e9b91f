use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::game::{Actor, CopConfig, Visibility};
use crate::graph::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RobberInfo {
    Exact(usize),
    Belief(VertexSet),
}

/// A game position as seen by the cops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveNode {
    pub cops: CopConfig,
    pub robber: RobberInfo,
    pub to_move: Actor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolicyEntry {
    pub action: CopConfig,
    /// Rounds until capture under optimal robber play; `None` for the guard
    /// objective.
    pub value: Option<usize>,
}

/// Winning cop moves on every cop node reachable from the initial placement
/// while the policy is followed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Policy {
    pub(crate) k: usize,
    pub(crate) rules: Visibility,
    pub(crate) initial: CopConfig,
    pub(crate) entries: FxHashMap<(u64, u64), PolicyEntry>,
}

impl Policy {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rules(&self) -> Visibility {
        self.rules
    }

    pub fn initial(&self) -> &CopConfig {
        &self.initial
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, cops: &CopConfig, belief: VertexSet) -> Option<&PolicyEntry> {
        self.entries.get(&(cops.pack(), belief.bits()))
    }

    /// Replaces or adds one entry. Meant for building test fixtures.
    pub fn set_action(&mut self, cops: &CopConfig, belief: VertexSet, action: CopConfig) {
        let value = self.lookup(cops, belief).and_then(|e| e.value);
        self.entries.insert((cops.pack(), belief.bits()), PolicyEntry { action, value });
    }

    /// Entries sorted by configuration, then candidate set.
    pub fn nodes(&self) -> Vec<(SolveNode, &PolicyEntry)> {
        let mut out: Vec<_> = self
            .entries
            .iter()
            .map(|(&(c, b), e)| {
                let belief = VertexSet(b);
                let robber = match (belief.len(), belief.first()) {
                    (1, Some(v)) => RobberInfo::Exact(v),
                    _ => RobberInfo::Belief(belief),
                };
                let node = SolveNode { cops: CopConfig::unpack(self.k, c), robber, to_move: Actor::Cops };
                (node, e, belief.to_vec())
            })
            .collect();
        out.sort_by(|a, b| (&a.0.cops, &a.2).cmp(&(&b.0.cops, &b.2)));
        out.into_iter().map(|(n, e, _)| (n, e)).collect()
    }

    /// Sorted `node -> action` table, one line per entry.
    pub fn dump(&self) -> String {
        let mut out = format!("initial {}\n", self.initial);
        for (node, e) in self.nodes() {
            let robber = match node.robber {
                RobberInfo::Exact(v) => format!("r={v}"),
                RobberInfo::Belief(b) => format!("r∈{b}"),
            };
            let value = e.value.map_or("-".to_string(), |v| v.to_string());
            let _ = writeln!(out, "{} {} -> {} {}", node.cops, robber, e.action, value);
        }
        out
    }
}
