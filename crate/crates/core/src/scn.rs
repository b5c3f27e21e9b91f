//! Small common neighbourhood sets.
//!
//! A non-empty `S` is a small common neighbourhood (SCN) set when
//! `|⋂_{v∈S} N(v)| ≤ |S|`; Υ(G) is the least size of such a set. The whole
//! vertex set always qualifies, so Υ is well defined.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScnResult {
    pub upsilon: usize,
    /// Lexicographically smallest minimum SCN set.
    pub witness: VertexSet,
    /// Common open neighbourhood of the witness.
    pub common: VertexSet,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScnError {
    #[error("oracle limited to 20 vertices, got {0}")]
    TooLarge(usize),
}

pub const ORACLE_MAX_VERTICES: usize = 20;

/// Visits k-subsets of `0..n` in lexicographic order of their sorted index
/// lists, carrying the running intersection. Stops at the first subset for
/// which `accept` returns true.
fn first_subset<F>(g: &Graph, k: usize, mut accept: F) -> Option<VertexSet>
where
    F: FnMut(VertexSet, VertexSet) -> bool,
{
    fn rec<F: FnMut(VertexSet, VertexSet) -> bool>(
        g: &Graph,
        start: usize,
        left: usize,
        chosen: VertexSet,
        inter: VertexSet,
        accept: &mut F,
    ) -> Option<VertexSet> {
        if left == 0 {
            return accept(chosen, inter).then_some(chosen);
        }
        for v in start..=g.n() - left {
            let mut next = chosen;
            next.insert(v);
            if let Some(found) =
                rec(g, v + 1, left - 1, next, inter.intersection(g.neighbours(v)), accept)
            {
                return Some(found);
            }
        }
        None
    }
    rec(g, 0, k, VertexSet::EMPTY, g.vertices(), &mut accept)
}

/// Υ(G) by increasing cardinality, first hit in lexicographic order.
pub fn upsilon(g: &Graph) -> ScnResult {
    for k in 1..=g.n() {
        if let Some(witness) = first_subset(g, k, |_, inter| inter.len() <= k) {
            let common = g.common_neighbourhood(witness).expect("witness is non-empty");
            return ScnResult { upsilon: k, witness, common };
        }
    }
    unreachable!("the full vertex set is always a small common neighbourhood set")
}

/// Every SCN set of minimum size, in lexicographic order.
pub fn minimum_scn_sets(g: &Graph) -> Vec<VertexSet> {
    let k = upsilon(g).upsilon;
    let mut all = Vec::new();
    first_subset(g, k, |s, inter| {
        if inter.len() <= k {
            all.push(s);
        }
        false
    });
    all
}

/// Unpruned scan over the power set: for i = 1, 2, ... test every set of
/// size i and stop at the first one that qualifies. Test-only reference.
pub fn upsilon_oracle(g: &Graph) -> Result<ScnResult, ScnError> {
    let n = g.n();
    if n > ORACLE_MAX_VERTICES {
        return Err(ScnError::TooLarge(n));
    }
    for i in 1..=n {
        let mut best: Option<VertexSet> = None;
        for mask in 1u64..(1u64 << n) {
            if mask.count_ones() as usize != i {
                continue;
            }
            let z = VertexSet(mask);
            let common = z.iter().fold(g.vertices(), |acc, v| acc.intersection(g.neighbours(v)));
            if common.len() <= i {
                let better = match best {
                    None => true,
                    Some(b) => z.to_vec() < b.to_vec(),
                };
                if better {
                    best = Some(z);
                }
            }
        }
        if let Some(witness) = best {
            let common = g.common_neighbourhood(witness).expect("non-empty");
            return Ok(ScnResult { upsilon: i, witness, common });
        }
    }
    unreachable!("the full vertex set always qualifies")
}
