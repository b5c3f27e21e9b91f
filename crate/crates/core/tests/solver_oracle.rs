//! Cross-checks the belief-state solver against a deliberately naive game
//! search written from the rules alone, and the classic one-cop case against
//! dismantlability.

use std::collections::{BTreeSet, HashMap};

use hyperopic::game::Visibility;
use hyperopic::graph::{parse_many, Format, Graph};
use hyperopic::solver::{solve, Objective, SolverOptions};

const LE6: &str = include_str!("data/connected_le6.g6");

type State = (Vec<usize>, BTreeSet<usize>);

struct Naive<'a> {
    g: &'a Graph,
    k: usize,
    perfect: bool,
}

impl Naive<'_> {
    fn closed(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        out.extend((0..self.g.n()).filter(|&u| self.g.adjacent(u, v)));
        out
    }

    fn hidden(&self, cops: &[usize], r: usize) -> bool {
        !self.perfect && !cops.contains(&r) && cops.iter().all(|&c| self.g.adjacent(c, r))
    }

    fn configs(&self) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![vec![]];
        while let Some(c) = stack.pop() {
            if c.len() == self.k {
                let mut s = c.clone();
                s.sort();
                out.insert(s);
                continue;
            }
            for v in 0..self.g.n() {
                let mut d = c.clone();
                d.push(v);
                stack.push(d);
            }
        }
        out.into_iter().collect()
    }

    fn moves(&self, cops: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &c in cops {
            out = out
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    self.closed(c).into_iter().map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        for p in &mut out {
            p.sort();
        }
        out.sort();
        out.dedup();
        out
    }

    /// Splits surviving positions into what the cops can tell apart.
    fn classes(&self, cops: &[usize], positions: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut out = Vec::new();
        let hidden: BTreeSet<usize> = positions.iter().copied().filter(|&r| self.hidden(cops, r)).collect();
        for &r in positions {
            if !hidden.contains(&r) {
                out.push(BTreeSet::from([r]));
            }
        }
        if !hidden.is_empty() {
            out.push(hidden);
        }
        out
    }

    /// States the robber can reach against the cop move `next` from `(_, b)`.
    fn successors(&self, next: &[usize], b: &BTreeSet<usize>) -> Vec<State> {
        let alive: BTreeSet<usize> = b.iter().copied().filter(|r| !next.contains(r)).collect();
        let mut out = Vec::new();
        for class in self.classes(next, &alive) {
            let reach: BTreeSet<usize> =
                class.iter().flat_map(|&r| self.closed(r)).filter(|r| !next.contains(r)).collect();
            for c in self.classes(next, &reach) {
                out.push((next.to_vec(), c));
            }
        }
        out
    }

    /// Fewest cop moves that force capture, or `None` if the robber escapes.
    fn value(&self) -> Option<usize> {
        let all: BTreeSet<usize> = (0..self.g.n()).collect();
        let starts: Vec<(Vec<usize>, Vec<State>)> = self
            .configs()
            .into_iter()
            .map(|c| {
                let free: BTreeSet<usize> = all.iter().copied().filter(|r| !c.contains(r)).collect();
                let s = self.classes(&c, &free).into_iter().map(|b| (c.clone(), b)).collect();
                (c, s)
            })
            .collect();
        let mut states: Vec<State> = Vec::new();
        let mut index: HashMap<State, usize> = HashMap::new();
        let mut stack: Vec<State> = starts.iter().flat_map(|(_, s)| s.clone()).collect();
        while let Some(s) = stack.pop() {
            if index.contains_key(&s) {
                continue;
            }
            index.insert(s.clone(), states.len());
            for m in self.moves(&s.0) {
                stack.extend(self.successors(&m, &s.1));
            }
            states.push(s);
        }
        let edges: Vec<Vec<Vec<usize>>> = states
            .iter()
            .map(|s| {
                self.moves(&s.0)
                    .iter()
                    .map(|m| self.successors(m, &s.1).iter().map(|t| index[t]).collect())
                    .collect()
            })
            .collect();
        let mut val = vec![usize::MAX; states.len()];
        loop {
            let mut changed = false;
            for i in 0..states.len() {
                let best = edges[i]
                    .iter()
                    .filter_map(|succ| {
                        succ.iter().try_fold(0, |acc: usize, &t| (val[t] != usize::MAX).then(|| acc.max(val[t])))
                    })
                    .map(|v| v + 1)
                    .min()
                    .unwrap_or(usize::MAX);
                if best < val[i] {
                    val[i] = best;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        starts
            .iter()
            .filter_map(|(_, s)| s.iter().try_fold(0, |acc: usize, t| {
                let v = val[index[t]];
                (v != usize::MAX).then(|| acc.max(v))
            }))
            .min()
    }
}

/// One cop wins the classic game iff the graph dismantles by repeatedly
/// removing a vertex whose closed neighbourhood lies inside another's.
fn dismantlable(g: &Graph) -> bool {
    let mut alive: Vec<usize> = (0..g.n()).collect();
    let closed = |v: usize, alive: &[usize]| -> BTreeSet<usize> {
        alive.iter().copied().filter(|&u| u == v || g.adjacent(u, v)).collect()
    };
    loop {
        if alive.len() <= 1 {
            return true;
        }
        let corner = alive.iter().copied().find(|&v| {
            let nv = closed(v, &alive);
            alive.iter().any(|&u| u != v && nv.is_subset(&closed(u, &alive)))
        });
        match corner {
            Some(v) => alive.retain(|&u| u != v),
            None => return false,
        }
    }
}

fn corpus(max_n: usize) -> Vec<Graph> {
    parse_many(LE6, Format::Graph6).unwrap().into_iter().filter(|g| g.n() <= max_n).collect()
}

#[test]
fn hyperopic_solver_matches_naive_search() {
    for g in corpus(5) {
        for k in 1..=3 {
            let want = Naive { g: &g, k, perfect: false }.value();
            let got = solve(&g, k, &Objective::Capture, Visibility::Hyperopic, &SolverOptions::default()).unwrap();
            assert_eq!(got.cops_win, want.is_some(), "{g:?} k={k}");
            assert_eq!(got.value, want, "{g:?} k={k}");
        }
    }
}

#[test]
fn classic_solver_matches_naive_search() {
    for g in corpus(5) {
        for k in 1..=3 {
            let want = Naive { g: &g, k, perfect: true }.value();
            let got = solve(&g, k, &Objective::Capture, Visibility::Perfect, &SolverOptions::default()).unwrap();
            assert_eq!(got.value, want, "{g:?} k={k}");
        }
    }
}

#[test]
fn one_classic_cop_wins_exactly_on_dismantlable_graphs() {
    for g in corpus(6) {
        let got = solve(&g, 1, &Objective::Capture, Visibility::Perfect, &SolverOptions::default()).unwrap();
        assert_eq!(got.cops_win, dismantlable(&g), "{g:?}");
    }
}
