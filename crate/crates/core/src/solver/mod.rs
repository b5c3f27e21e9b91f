//! Exact solving of the classic and hyperopic games.
//!
//! Both games are solved on the same belief-state arena: with perfect
//! information every candidate set is a singleton. The capture objective is a
//! layered reachability fixpoint (values count cop moves until capture); the
//! guard objective is a safety fixpoint.

mod arena;
mod policy;

use log::debug;
use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use arena::{Arena, NONE};
pub use policy::{Policy, PolicyEntry, RobberInfo, SolveNode};

use crate::game::{CopConfig, Visibility, MAX_COPS};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::strategies::{best_response, PolicyStrategy, Verdict};

pub const DEFAULT_NODE_CAP: usize = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("cop count must be in 1..={MAX_COPS}, got {0}")]
    CopCount(usize),
    #[error("resource cap: {explored} nodes explored with {k} cops, cap {cap}")]
    ResourceCap { k: usize, explored: usize, cap: usize },
    #[error("guard path is not an isometric path")]
    NotIsometric,
    #[error("no winning cop count up to {MAX_COPS}")]
    NoWinningCount,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Objective {
    Capture,
    /// Any robber stepping onto the path must be caught by the cops' next move.
    Guard(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Hard cap on explored cop plus adversary nodes.
    pub node_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { node_cap: DEFAULT_NODE_CAP }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub k: usize,
    pub rules: Visibility,
    pub objective: Objective,
    pub cops_win: bool,
    /// Capture horizon in cop moves; `None` when lost or for guarding.
    pub value: Option<usize>,
    pub initial: Option<CopConfig>,
    pub policy: Option<Policy>,
    pub explored: usize,
}

pub fn solve(
    g: &Graph,
    k: usize,
    objective: &Objective,
    rules: Visibility,
    opts: &SolverOptions,
) -> Result<SolveResult, SolveError> {
    if !g.is_connected() {
        return Err(SolveError::Disconnected);
    }
    if k == 0 || k > MAX_COPS {
        return Err(SolveError::CopCount(k));
    }
    let path_mask = match objective {
        Objective::Capture => None,
        Objective::Guard(p) => {
            if !g.is_isometric_path(p)? {
                return Err(SolveError::NotIsometric);
            }
            Some(p.iter().copied().collect::<VertexSet>().bits())
        }
    };
    let arena = Arena::build(g, k, rules, opts.node_cap)?;
    debug!(
        "k={k} {rules:?}: {} cop nodes, {} adversary nodes, {} beliefs",
        arena.cop_nodes.len(),
        arena.adv_nodes.len(),
        arena.beliefs.len()
    );
    let (choice, initial_value) = match path_mask {
        None => capture_fixpoint(&arena),
        Some(p) => guard_fixpoint(&arena, p),
    };
    let best = initial_value
        .iter()
        .enumerate()
        .filter_map(|(c, v)| v.map(|v| (v, c)))
        .min();
    let mut result = SolveResult {
        k,
        rules,
        objective: objective.clone(),
        cops_win: best.is_some(),
        value: None,
        initial: None,
        policy: None,
        explored: arena.explored(),
    };
    if let Some((value, c)) = best {
        result.initial = Some(arena.configs[c].clone());
        result.value = path_mask.is_none().then_some(value as usize);
        result.policy = Some(restrict_policy(&arena, &choice, c, path_mask.is_none()));
    }
    Ok(result)
}

/// A chosen action per cop node: (adversary node, action config, value).
type Choice = Vec<Option<(u32, u32, u32)>>;

/// Returns the chosen action per cop node and, per initial configuration,
/// the worst placement value (`Some(0)` for the guard objective) or `None`
/// when the robber has a winning placement.
fn capture_fixpoint(a: &Arena) -> (Choice, Vec<Option<u32>>) {
    let inf = u32::MAX;
    let mut adv_val: Vec<u32> = (0..a.adv_nodes.len() as u32)
        .map(|i| if a.successors(i).is_empty() { 1 } else { inf })
        .collect();
    let mut cop_val = vec![inf; a.cop_nodes.len()];
    let mut open_cops: Vec<u32> = (0..a.cop_nodes.len() as u32).collect();
    let mut open_advs: Vec<u32> = (0..a.adv_nodes.len() as u32).filter(|&i| adv_val[i as usize] == inf).collect();
    let mut t = 1;
    loop {
        let before = open_cops.len();
        open_cops.retain(|&i| {
            let (b, c) = a.cop_nodes[i as usize];
            let wins = a.actions(c).iter().any(|&x| adv_val[a.adv_of(b, x) as usize] <= t);
            if wins {
                cop_val[i as usize] = t;
            }
            !wins
        });
        if open_cops.len() == before {
            break;
        }
        open_advs.retain(|&i| {
            let succ = a.successors(i);
            if succ.iter().all(|&s| cop_val[s as usize] != inf) {
                adv_val[i as usize] = 1 + succ.iter().map(|&s| cop_val[s as usize]).max().unwrap_or(0);
                false
            } else {
                true
            }
        });
        t += 1;
    }
    // Minimal value, then the lexicographically first action.
    let choice = (0..a.cop_nodes.len())
        .map(|i| {
            (cop_val[i] != inf).then(|| {
                let (b, c) = a.cop_nodes[i];
                a.actions(c)
                    .iter()
                    .map(|&x| (a.adv_of(b, x), x))
                    .find(|&(adv, _)| adv_val[adv as usize] == cop_val[i])
                    .map(|(adv, x)| (adv, x, cop_val[i]))
                    .expect("a resolved cop node has an action achieving its value")
            })
        })
        .collect();
    let initial = a
        .initial
        .iter()
        .map(|branches| {
            branches.iter().try_fold(0u32, |acc, &i| {
                let v = cop_val[i as usize];
                (v != inf).then_some(acc.max(v))
            })
        })
        .collect();
    (choice, initial)
}

fn guard_fixpoint(a: &Arena, path: u64) -> (Choice, Vec<Option<u32>>) {
    let mut cop_win = vec![true; a.cop_nodes.len()];
    let mut adv_good = vec![true; a.adv_nodes.len()];
    let safe = |i: usize, x: u32| {
        let (b, _) = a.cop_nodes[i];
        a.beliefs[b as usize] & path & !a.occ[x as usize] == 0
    };
    loop {
        let mut changed = false;
        for (j, good) in adv_good.iter_mut().enumerate() {
            if *good && a.successors(j as u32).iter().any(|&s| !cop_win[s as usize]) {
                *good = false;
                changed = true;
            }
        }
        for (i, win) in cop_win.iter_mut().enumerate() {
            if !*win {
                continue;
            }
            let (b, c) = a.cop_nodes[i];
            if !a.actions(c).iter().any(|&x| safe(i, x) && adv_good[a.adv_of(b, x) as usize]) {
                *win = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let choice = (0..a.cop_nodes.len())
        .map(|i| {
            cop_win[i].then(|| {
                let (b, c) = a.cop_nodes[i];
                let &x = a
                    .actions(c)
                    .iter()
                    .find(|&&x| safe(i, x) && adv_good[a.adv_of(b, x) as usize])
                    .expect("a winning cop node has a safe action");
                (a.adv_of(b, x), x, 0)
            })
        })
        .collect();
    let initial = a
        .initial
        .iter()
        .map(|branches| branches.iter().all(|&i| cop_win[i as usize]).then_some(0))
        .collect();
    (choice, initial)
}

/// Keeps the entries reachable from `initial` under the chosen actions.
fn restrict_policy(a: &Arena, choice: &Choice, initial: usize, capture: bool) -> Policy {
    let mut entries = FxHashMap::default();
    let mut seen = vec![false; a.cop_nodes.len()];
    let mut stack: Vec<u32> = a.initial[initial].clone();
    for &i in &stack {
        seen[i as usize] = true;
    }
    while let Some(i) = stack.pop() {
        let (b, c) = a.cop_nodes[i as usize];
        let (adv, x, v) = choice[i as usize].expect("reachable nodes are winning");
        entries.insert(
            (a.configs[c as usize].pack(), a.beliefs[b as usize]),
            PolicyEntry {
                action: a.configs[x as usize].clone(),
                value: capture.then_some(v as usize),
            },
        );
        for &s in a.successors(adv) {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
    }
    debug_assert!(a.adv_nodes.iter().all(|&(b, c)| a.adv_of(b, c) != NONE));
    Policy { k: a.k, rules: a.rules, initial: a.configs[initial].clone(), entries }
}

pub fn solve_classic(g: &Graph, k: usize, objective: &Objective) -> Result<SolveResult, SolveError> {
    solve(g, k, objective, Visibility::Perfect, &SolverOptions::default())
}

pub fn solve_hyperopic(g: &Graph, k: usize, objective: &Objective) -> Result<SolveResult, SolveError> {
    solve(g, k, objective, Visibility::Hyperopic, &SolverOptions::default())
}

/// Smallest winning cop count for `rules`, searched upwards from `from`.
pub fn min_cops(
    g: &Graph,
    rules: Visibility,
    from: usize,
    opts: &SolverOptions,
) -> Result<SolveResult, SolveError> {
    for k in from.max(1)..=MAX_COPS {
        let r = solve(g, k, &Objective::Capture, rules, opts)?;
        if r.cops_win {
            return Ok(r);
        }
    }
    Err(SolveError::NoWinningCount)
}

/// c(G).
pub fn cop_number(g: &Graph) -> Result<usize, SolveError> {
    Ok(min_cops(g, Visibility::Perfect, 1, &SolverOptions::default())?.k)
}

/// c_H(G), searched from c(G) upwards.
pub fn hyperopic_cop_number(g: &Graph) -> Result<usize, SolveError> {
    let c = cop_number(g)?;
    Ok(min_cops(g, Visibility::Hyperopic, c, &SolverOptions::default())?.k)
}

/// Replays the result's policy against an exhaustive adversary and confirms
/// that every branch ends as promised: capture within `value` rounds, or the
/// path guarded forever.
pub fn extract_policy_check(g: &Graph, result: &SolveResult) -> bool {
    let Some(policy) = &result.policy else {
        return false;
    };
    let strategy = PolicyStrategy::new(policy.clone());
    match best_response(g, &strategy, &result.objective) {
        Ok(Verdict::Certified(worst)) => match result.value {
            Some(v) => worst <= v,
            // a safe guard policy never lets the robber stand on the path
            None => worst == 0,
        },
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cartesian, generate, Family};

    fn fam(f: Family) -> Graph {
        generate(f).unwrap()
    }

    #[test]
    fn classic_small_cases() {
        let c4 = fam(Family::Cycle(4));
        assert!(!solve_classic(&c4, 1, &Objective::Capture).unwrap().cops_win);
        assert!(solve_classic(&c4, 2, &Objective::Capture).unwrap().cops_win);
        for m in 1..7 {
            assert!(solve_classic(&fam(Family::Path(m)), 1, &Objective::Capture).unwrap().cops_win);
        }
        let k3 = fam(Family::Complete(3));
        let r = solve_classic(&cartesian(&k3, &k3).unwrap(), 2, &Objective::Capture).unwrap();
        assert!(r.cops_win);
        assert_eq!(cop_number(&fam(Family::Complete(6))).unwrap(), 1);
    }

    #[test]
    fn path_capture_horizon() {
        // One cop in the centre of P5 catches the robber within 2 moves.
        let r = solve_classic(&fam(Family::Path(5)), 1, &Objective::Capture).unwrap();
        assert_eq!(r.value, Some(2));
        assert_eq!(r.initial, Some(CopConfig::new(vec![2])));
    }

    #[test]
    fn hyperopic_cliques() {
        let k5 = fam(Family::Complete(5));
        assert!(!solve_hyperopic(&k5, 2, &Objective::Capture).unwrap().cops_win);
        let r = solve_hyperopic(&k5, 3, &Objective::Capture).unwrap();
        assert!(r.cops_win);
        assert!(extract_policy_check(&k5, &r));
        assert!(solve_hyperopic(&fam(Family::LeafedComplete(5)), 2, &Objective::Capture).unwrap().cops_win);
        let km = fam(Family::CompleteMinusEdge(6));
        assert!(!solve_hyperopic(&km, 2, &Objective::Capture).unwrap().cops_win);
        assert!(solve_hyperopic(&km, 3, &Objective::Capture).unwrap().cops_win);
    }

    #[test]
    fn covering_every_vertex_wins_at_once() {
        let r = solve_hyperopic(&fam(Family::Complete(2)), 2, &Objective::Capture).unwrap();
        assert_eq!(r.value, Some(0));
    }

    #[test]
    fn input_checks() {
        let e = fam(Family::Empty(3));
        assert_eq!(solve_hyperopic(&e, 1, &Objective::Capture).unwrap_err(), SolveError::Disconnected);
        let p = fam(Family::Path(3));
        assert_eq!(solve_hyperopic(&p, 0, &Objective::Capture).unwrap_err(), SolveError::CopCount(0));
        assert_eq!(
            solve_hyperopic(&fam(Family::Cycle(4)), 1, &Objective::Guard(vec![0, 1, 2, 3])).unwrap_err(),
            SolveError::NotIsometric
        );
    }

    #[test]
    fn policy_dump_is_sorted_and_stable() {
        let r = solve_hyperopic(&fam(Family::Path(3)), 1, &Objective::Capture).unwrap();
        let dump = r.policy.unwrap().dump();
        assert_eq!(dump, "initial [0]\n[0] r=1 -> [1] 1\n[0] r=2 -> [1] 2\n[1] r=2 -> [2] 1\n");
    }
}
