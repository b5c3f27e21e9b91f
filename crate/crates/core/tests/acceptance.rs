//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the summary lines are always printed;
//! the process exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperopic::bounds::{audit, conjecture_scan, connected_pairs};
use hyperopic::game::{referee, CopStrategy, Outcome, RandomRobber, Visibility};
use hyperopic::graph::{
    cartesian, disjoint_union, emit, generate, join, parse, parse_many, strong, Family, Format, Graph,
};
use hyperopic::scn::{upsilon, upsilon_oracle};
use hyperopic::solver::{extract_policy_check, min_cops, solve, Objective, Policy, SolverOptions};
use hyperopic::strategies::{
    best_response, cartesian_two_phase, isometric_guard, join_connected_disconnected, join_scn, kn_pm_sweep,
    PolicyStrategy, RemoveCop, Verdict,
};

type Outcome_ = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome_);

const LE6: &str = include_str!("data/connected_le6.g6");
const LE7: &str = include_str!("data/connected_le7.g6");

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn c_h(g: &Graph) -> usize {
    min_cops(g, Visibility::Hyperopic, 1, &opts()).expect("solvable").k
}

fn wins(g: &Graph, k: usize, rules: Visibility) -> bool {
    solve(g, k, &Objective::Capture, rules, &opts()).expect("solvable").cops_win
}

fn policy(g: &Graph) -> Policy {
    min_cops(g, Visibility::Hyperopic, 1, &opts()).expect("solvable").policy.expect("winning policy")
}

fn certified<S: CopStrategy>(g: &Graph, s: &S) -> Result<usize, String> {
    match best_response(g, s, &Objective::Capture) {
        Ok(Verdict::Certified(w)) => Ok(w),
        Ok(Verdict::Refuted(t)) => Err(format!("{} refuted:\n{}", s.name(), t.to_text())),
        Err(e) => Err(format!("{}: {e}", s.name())),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1() -> Outcome_ {
    let mut slowest = Duration::ZERO;
    for n in 2..=7 {
        let t = Instant::now();
        let k = c_h(&generate(Family::Complete(n)).unwrap());
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        ensure(k == n.div_ceil(2), || format!("c_H(K_{n}) = {k}"))?;
        ensure(dt < Duration::from_secs(60), || format!("K_{n} took {dt:?}"))?;
    }
    Ok(format!("n = 2..7, slowest {:.2}s", slowest.as_secs_f64()))
}

fn c2() -> Outcome_ {
    for n in 4..=7 {
        let k = c_h(&generate(Family::CompleteMinusEdge(n)).unwrap());
        ensure(k == n / 2, || format!("c_H(K_{n} - e) = {k}"))?;
    }
    Ok("n = 4..7".into())
}

fn c3() -> Outcome_ {
    for n in 4..=6 {
        let k = c_h(&generate(Family::LeafedComplete(n)).unwrap());
        ensure(k == 2, || format!("c_H(G_{n}) = {k}"))?;
    }
    for n in [5, 6] {
        let kn = c_h(&generate(Family::Complete(n)).unwrap());
        ensure(kn > 2, || format!("c_H(K_{n}) = {kn} is not above c_H(G_{n}) = 2"))?;
    }
    Ok("c_H(G_n) = 2 for n = 4..6; c_H(K_5), c_H(K_6) = 3".into())
}

fn c4() -> Outcome_ {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..20 {
        let n = rng.gen_range(1..=10);
        let t = generate(Family::TreeRandom { n, seed: rng.gen() }).unwrap();
        ensure(c_h(&t) == 1, || format!("tree #{i} on {n} vertices: c_H != 1"))?;
    }
    for n in 4..=8 {
        let g = generate(Family::Cycle(n)).unwrap();
        ensure(!wins(&g, 1, Visibility::Hyperopic), || format!("one cop wins on C_{n}"))?;
    }
    Ok("20 random trees c_H = 1; C_4..C_8 need 2 cops".into())
}

fn c5() -> Outcome_ {
    let h = strong(&generate(Family::Path(4)).unwrap(), &generate(Family::Path(2)).unwrap()).unwrap();
    let uh = upsilon(&h).upsilon;
    ensure(uh == 2, || format!("Υ(H) = {uh}"))?;
    let hh = upsilon(&join(&h, &h).unwrap()).upsilon;
    ensure(hh == 3, || format!("Υ(H ∨ H) = {hh}"))?;
    let corpus = parse_many(LE7, Format::Graph6).map_err(|e| e.to_string())?;
    for (i, g) in corpus.iter().enumerate() {
        let (a, b) = (upsilon(g), upsilon_oracle(g).map_err(|e| e.to_string())?);
        ensure(a.upsilon == b.upsilon, || format!("corpus graph #{i}: {} vs oracle {}", a.upsilon, b.upsilon))?;
    }
    Ok(format!("Υ(H) = 2, Υ(H ∨ H) = 3, {} corpus graphs agree with the oracle", corpus.len()))
}

fn c6() -> Outcome_ {
    // P_2 ⊠ P_3 with vertex (i, j) at 3i + j; the guarded path is the row i = 1.
    let g = strong(&generate(Family::Path(2)).unwrap(), &generate(Family::Path(3)).unwrap()).unwrap();
    let path = vec![3, 4, 5];
    let guard = Objective::Guard(path.clone());
    let one_h = solve(&g, 1, &guard, Visibility::Hyperopic, &opts()).map_err(|e| e.to_string())?;
    ensure(!one_h.cops_win, || "one hyperopic cop guards the path".into())?;
    let s = isometric_guard(&g, &path).map_err(|e| e.to_string())?;
    match best_response(&g, &s, &guard).map_err(|e| e.to_string())? {
        Verdict::Certified(_) => {}
        Verdict::Refuted(t) => return Err(format!("isometric guard refuted:\n{}", t.to_text())),
    }
    let one_p = solve(&g, 1, &guard, Visibility::Perfect, &opts()).map_err(|e| e.to_string())?;
    ensure(one_p.cops_win, || "one perfect-information cop cannot guard the path".into())?;
    ensure(extract_policy_check(&g, &one_p), || "perfect-information guard policy fails its self-check".into())?;
    let weakened = RemoveCop { inner: s, removed: 1 };
    ensure(matches!(best_response(&g, &weakened, &guard), Ok(Verdict::Refuted(_))), || {
        "guard with one cop removed is not refuted".into()
    })?;
    Ok("1 hyperopic cop loses, 2 guard cops certified, 1 perfect cop guards".into())
}

fn c7() -> Outcome_ {
    let mut worst = 0;
    for n in 2..=4 {
        for m in 2..=5 {
            let g = cartesian(&generate(Family::Complete(n)).unwrap(), &generate(Family::Path(m)).unwrap()).unwrap();
            ensure(!wins(&g, 1, Visibility::Hyperopic), || format!("one cop wins on K_{n} □ P_{m}"))?;
            ensure(wins(&g, 2, Visibility::Hyperopic), || format!("two cops lose on K_{n} □ P_{m}"))?;
            let w = certified(&g, &kn_pm_sweep(n, m))?;
            worst = worst.max(w);
        }
    }
    Ok(format!("12 instances, sweep worst case {worst} cop moves"))
}

fn c8() -> Outcome_ {
    for n in 2..=4 {
        for m in 2..=4 {
            let g = cartesian(&generate(Family::Complete(n)).unwrap(), &generate(Family::Complete(m)).unwrap()).unwrap();
            let k = min_cops(&g, Visibility::Hyperopic, 1, &opts()).map_err(|e| e.to_string())?.k;
            ensure(k <= 4, || format!("c_H(K_{n} □ K_{m}) = {k}"))?;
            let u = upsilon(&g).upsilon;
            ensure(u == 2, || format!("Υ(K_{n} □ K_{m}) = {u}"))?;
        }
    }
    Ok("n, m = 2..4".into())
}

fn c9() -> Outcome_ {
    let corpus = parse_many(LE6, Format::Graph6).map_err(|e| e.to_string())?;
    let mut checks = 0;
    for (i, g) in corpus.iter().enumerate() {
        let r = audit(g, &opts());
        ensure(r.skipped() == 0, || format!("graph #{i}: {} checks skipped", r.skipped()))?;
        if let Some(q) = r.failures().next() {
            return Err(format!("graph #{i} ({}): {} fails", r.graphs[0].graph6, q.name));
        }
        checks += r.checks.len();
    }
    Ok(format!("{} graphs, {checks} checks, zero violations", corpus.len()))
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    if rng.gen_bool(0.5) {
        generate(Family::TreeRandom { n, seed: rng.gen() }).unwrap()
    } else {
        generate(Family::ErConnected { n, p: 0.5, seed: rng.gen() }).unwrap()
    }
}

fn random_disconnected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let a = rng.gen_range(1..n);
    disjoint_union(&random_connected(rng, a), &random_connected(rng, n - a)).unwrap()
}

fn c10() -> Outcome_ {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut count = 0;
    for kind in 0..3 {
        for _ in 0..4 {
            let total = rng.gen_range(4..=10);
            let a = rng.gen_range(2..=total - 2);
            let (g, j) = match kind {
                0 => (random_connected(&mut rng, a), random_connected(&mut rng, total - a)),
                1 => (random_disconnected(&mut rng, a), random_disconnected(&mut rng, total - a)),
                _ => (random_connected(&mut rng, a), random_disconnected(&mut rng, total - a)),
            };
            let h = join(&g, &j).unwrap();
            let tag = format!("{} ∨ {}", emit(&g, Format::Graph6).trim(), emit(&j, Format::Graph6).trim());
            let k = c_h(&h);
            let (ug, uj) = (upsilon(&g).upsilon, upsilon(&j).upsilon);
            ensure(k <= ug + uj, || format!("{tag}: c_H = {k} > Υ(G) + Υ(J) = {}", ug + uj))?;
            let s = join_scn(&h).map_err(|e| e.to_string())?;
            ensure(s.init(&h).map_err(|e| e.to_string())?.0.len() == ug + uj, || format!("{tag}: join_scn cop count"))?;
            certified(&h, &s).map_err(|e| format!("{tag}: {e}"))?;
            if kind == 1 {
                ensure(k <= 4, || format!("{tag}: c_H = {k} > 4"))?;
            }
            if kind == 2 {
                let pg = policy(&g);
                let bound = pg.k() + 2;
                ensure(k <= bound, || format!("{tag}: c_H = {k} > c_H(G) + 2 = {bound}"))?;
                let s = join_connected_disconnected(&h, pg).map_err(|e| e.to_string())?;
                ensure(s.init(&h).map_err(|e| e.to_string())?.0.len() == bound, || format!("{tag}: cop count"))?;
                certified(&h, &s).map_err(|e| format!("{tag}: {e}"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} random joins (4 per connectivity class)"))
}

fn c11() -> Outcome_ {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    let mut refuted = Vec::new();
    while done < 10 {
        let a = rng.gen_range(2..=5);
        let b = rng.gen_range(2..=(20 / a).min(5));
        let (g, j) = (random_connected(&mut rng, a), random_connected(&mut rng, b));
        let (pg, pj) = (policy(&g), policy(&j));
        let cops = pg.k() + pj.k();
        let s = cartesian_two_phase(&g, &j, pg, pj).map_err(|e| e.to_string())?;
        let h = cartesian(&g, &j).unwrap();
        let tag = format!("{} □ {}", emit(&g, Format::Graph6).trim(), emit(&j, Format::Graph6).trim());
        ensure(s.init(&h).map_err(|e| e.to_string())?.0.len() == cops, || format!("{tag}: cop count"))?;
        if let Err(e) = certified(&h, &s) {
            refuted.push(format!("{tag}: {e}"));
        }
        done += 1;
    }
    if refuted.is_empty() {
        Ok("10 random factor pairs certified".into())
    } else {
        Err(format!("{} of 10 pairs not certified; first: {}", refuted.len(), refuted[0]))
    }
}

fn c12() -> Outcome_ {
    // Belief soundness: the referee checks the cops' candidate set after
    // every observation and errors out if the robber ever leaves it.
    let corpus = parse_many(LE6, Format::Graph6).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let policies: Vec<(Graph, Policy)> = corpus.iter().step_by(7).map(|g| (g.clone(), policy(g))).collect();
    for play in 0..1000 {
        let (g, p) = &policies[play % policies.len()];
        let mut robber = RandomRobber::new(rng.gen());
        let t = referee(g, &PolicyStrategy::new(p.clone()), &mut robber, 60, Visibility::Hyperopic)
            .map_err(|e| format!("play {play}: {e}"))?;
        ensure(matches!(t.outcome, Outcome::Captured { .. }), || format!("play {play}: {}", t.outcome))?;
    }

    // Monotonicity in k and policy self-checks on the corpus.
    let mut solves = 0;
    for (i, g) in corpus.iter().enumerate() {
        for rules in [Visibility::Perfect, Visibility::Hyperopic] {
            let mut won = false;
            for k in 1..=g.n().min(4) {
                let r = solve(g, k, &Objective::Capture, rules, &opts()).map_err(|e| e.to_string())?;
                ensure(!won || r.cops_win, || format!("graph #{i}: {rules:?} wins with {} but not {k} cops", k - 1))?;
                if r.cops_win {
                    ensure(extract_policy_check(g, &r), || format!("graph #{i}: {rules:?} policy self-check, k = {k}"))?;
                    solves += 1;
                }
                won = r.cops_win;
            }
        }
    }

    // graph6 round trip.
    for i in 0..500 {
        let n = rng.gen_range(1..=64);
        let p: f64 = rng.gen();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let back = parse(&emit(&g, Format::Graph6), Format::Graph6).map_err(|e| e.to_string())?;
        ensure(back.adjacency() == g.adjacency(), || format!("round trip #{i} on {n} vertices"))?;
    }
    Ok(format!("1000 plays sound, {solves} winning solves self-checked, 500 round trips"))
}

fn c13() -> Outcome_ {
    let corpus = parse_many(LE6, Format::Graph6).map_err(|e| e.to_string())?;
    let pairs = connected_pairs(&corpus, 4);
    let first = conjecture_scan(&pairs, &opts()).map_err(|e| e.to_string())?;
    let second = conjecture_scan(&pairs, &opts()).map_err(|e| e.to_string())?;
    ensure(first.to_json() == second.to_json() && first.to_csv() == second.to_csv(), || {
        "scan output differs between runs".into()
    })?;
    let skipped = first.rows.iter().filter(|r| r.c_h_join.is_none()).count();
    ensure(skipped == 0, || format!("{skipped} pairs skipped"))?;
    let found = first.counterexamples().count();
    ensure(first.counterexamples().all(|r| r.certificate.is_some()), || "counterexample without certificate".into())?;
    Ok(format!("{} pairs, {found} candidates, corpus {}", pairs.len(), &first.corpus_hash[..12]))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("complete graphs", c1),
        ("complete minus an edge", c2),
        ("leafed complete graphs", c3),
        ("trees and cycles", c4),
        ("small common neighbourhoods", c5),
        ("isometric path guarding", c6),
        ("complete by path products", c7),
        ("complete by complete products", c8),
        ("bound audit", c9),
        ("joins", c10),
        ("two-phase products", c11),
        ("property suite", c12),
        ("conjecture scan", c13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
