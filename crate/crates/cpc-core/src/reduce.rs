//! The reduction relation, barbs, reachability, and dead-code pruning.

use crate::canon::{canonicalize, strip, CanonicalForm};
use crate::name::Name;
use crate::pattern::Pattern;
use crate::process::{alpha_rename, free_names_proc, subst_proc, Process};
use crate::subst::Substitution;
use crate::unify::unify;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

/// Bound on nested replication unfolding while enumerating redexes. A single
/// interaction consumes two cases, so two copies per replicated thread
/// suffice at each nesting level; the depth covers replications nested under
/// replications.
pub(crate) const REP_DEPTH: u32 = 6;

/// All ways to expose unguarded material by unfolding replications: each
/// `!P` contributes zero, one or two freshly α-renamed copies alongside
/// itself, recursively.
pub(crate) fn expansions(p: &Process, budget: u32) -> Vec<Process> {
    match p {
        Process::Par(l, r) => {
            let ls = expansions(l, budget);
            let rs = expansions(r, budget);
            let mut out = Vec::with_capacity(ls.len() * rs.len());
            for a in &ls {
                for b in &rs {
                    out.push(Process::par(a.clone(), b.clone()));
                }
            }
            out
        }
        Process::Restrict(n, body) => expansions(body, budget)
            .into_iter()
            .map(|b| Process::restrict(n.clone(), b))
            .collect(),
        Process::Replicate(body) => {
            let mut out = alloc::vec![p.clone()];
            if budget > 0 {
                let firsts = expansions(&alpha_rename(body), budget - 1);
                let seconds = expansions(&alpha_rename(body), budget - 1);
                for c1 in &firsts {
                    out.push(Process::par(c1.clone(), p.clone()));
                }
                for c1 in &firsts {
                    for c2 in &seconds {
                        out.push(Process::par(
                            c1.clone(),
                            Process::par(c2.clone(), p.clone()),
                        ));
                    }
                }
            }
            out
        }
        _ => alloc::vec![p.clone()],
    }
}

/// One enumerated interaction: the two case patterns that fired (as exposed
/// in the unfolded term, so binders may be machine-renamed), the matches
/// applied to their bodies, and the resulting process.
#[derive(Clone, Debug)]
pub struct Redex {
    pub left_pattern: Pattern,
    pub right_pattern: Pattern,
    pub left_subst: Substitution,
    pub right_subst: Substitution,
    pub reduct: Process,
}

/// All one-step interactions, one representative per canonical reduct, in
/// canonical-reduct order.
///
/// Enumerates every pair of unguarded cases reachable by structural
/// rearrangement — including the replication unfoldings needed to expose
/// them — and fires each pair whose patterns unify.
pub fn redexes(p: &Process) -> Vec<Redex> {
    let mut out: BTreeMap<CanonicalForm, Redex> = BTreeMap::new();
    for e in expansions(p, REP_DEPTH) {
        let (res, threads) = strip(&e);
        for i in 0..threads.len() {
            let Process::Case(pi, bi) = &threads[i] else {
                continue;
            };
            for j in (i + 1)..threads.len() {
                let Process::Case(pj, bj) = &threads[j] else {
                    continue;
                };
                let outcome = unify(pi, pj).expect("case patterns are well-formed");
                let Some(ur) = outcome else {
                    continue;
                };
                let mut rest: Vec<Process> = threads
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, t)| t.clone())
                    .collect();
                rest.push(subst_proc(&ur.left, bi));
                rest.push(subst_proc(&ur.right, bj));
                let reduct =
                    Process::restrict_all(res.iter().cloned(), Process::par_all(rest));
                out.entry(canonicalize(&reduct)).or_insert_with(|| Redex {
                    left_pattern: pi.clone(),
                    right_pattern: pj.clone(),
                    left_subst: ur.left,
                    right_subst: ur.right,
                    reduct,
                });
            }
        }
    }
    out.into_values().collect()
}

/// One-step reducts, deduplicated by canonical form.
pub fn reductions(p: &Process) -> Vec<Process> {
    redexes(p).into_iter().map(|r| r.reduct).collect()
}

/// A barb: the set of free names an unguarded, interaction-capable pattern
/// exposes after discounting restricted names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Barb {
    pub names: BTreeSet<Name>,
}

/// All barbs of a process. A case under restriction contributes only if its
/// protected names avoid the restricted set (a hidden protected name can
/// never be matched from outside); replication is transparent.
pub fn barbs(p: &Process) -> BTreeSet<Barb> {
    let mut out = BTreeSet::new();
    collect_barbs(p, &BTreeSet::new(), &mut out);
    out
}

fn collect_barbs(p: &Process, outer: &BTreeSet<Name>, out: &mut BTreeSet<Barb>) {
    let (res, threads) = strip(p);
    let mut restricted = outer.clone();
    restricted.extend(res);
    for t in threads {
        match t {
            Process::Case(pattern, _) => {
                if pattern.protected_names().is_disjoint(&restricted) {
                    let names = pattern
                        .free_names()
                        .difference(&restricted)
                        .cloned()
                        .collect();
                    out.insert(Barb { names });
                }
            }
            Process::Replicate(body) => collect_barbs(&body, &restricted, out),
            _ => {}
        }
    }
}

/// Whether the process exposes an unguarded success leaf, through any
/// parallel/restriction/replication structure.
pub fn has_top_success(p: &Process) -> bool {
    let (_, threads) = strip(p);
    threads.iter().any(|t| match t {
        Process::Success => true,
        Process::Replicate(body) => has_top_success(body),
        _ => false,
    })
}

/// Whether some reduction sequence of length ≤ `depth` reaches a state with
/// an unguarded success leaf.
pub fn succeeds(p: &Process, depth: usize) -> bool {
    bfs_find(p, depth, &mut |state| has_top_success(state)).is_some()
}

/// The least number of steps to a state with a barb containing `name`,
/// searching up to `depth` steps.
pub fn min_steps_to_barb(p: &Process, name: &Name, depth: usize) -> Option<usize> {
    bfs_find(p, depth, &mut |state| {
        barbs(state).iter().any(|b| b.names.contains(name))
    })
}

/// Breadth-first search over canonical states; returns the level at which
/// the predicate first holds.
fn bfs_find(
    p: &Process,
    depth: usize,
    found: &mut dyn FnMut(&Process) -> bool,
) -> Option<usize> {
    let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
    seen.insert(canonicalize(p));
    let mut frontier = alloc::vec![p.clone()];
    if frontier.iter().any(&mut *found) {
        return Some(0);
    }
    for level in 1..=depth {
        let mut next = Vec::new();
        for state in &frontier {
            for r in reductions(state) {
                if seen.insert(canonicalize(&r)) {
                    next.push(r);
                }
            }
        }
        if next.iter().any(&mut *found) {
            return Some(level);
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

/// The reachable-state graph of a process, explored breadth-first to a step
/// bound, states deduplicated by canonical form.
pub struct StateGraph {
    pub states: Vec<Process>,
    /// Edges as (source index, target index); parallel reduction paths to
    /// the same canonical target collapse into one edge per source.
    pub edges: Vec<(usize, usize)>,
    /// States grouped by first-discovery distance from the root.
    pub levels: Vec<Vec<usize>>,
    /// Out-degree per state; `None` when the step bound cut exploration off
    /// before the state was expanded.
    pub out_degree: Vec<Option<usize>>,
    /// True when the bound was reached with unexplored successors pending:
    /// distinct from deadlock, where nothing can reduce.
    pub truncated: bool,
}

impl StateGraph {
    /// Fully-explored states with no successor at all.
    pub fn deadlocked(&self) -> Vec<usize> {
        self.out_degree
            .iter()
            .enumerate()
            .filter(|(_, d)| **d == Some(0))
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn explore(p: &Process, max_steps: usize) -> StateGraph {
    let mut index: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    let mut states = alloc::vec![p.clone()];
    let mut out_degree: Vec<Option<usize>> = alloc::vec![None];
    index.insert(canonicalize(p), 0);
    let mut edges = Vec::new();
    let mut levels = alloc::vec![alloc::vec![0usize]];
    let mut truncated = false;

    for step in 0..=max_steps {
        let frontier = levels[step].clone();
        if frontier.is_empty() {
            levels.pop();
            break;
        }
        let at_bound = step == max_steps;
        let mut next = Vec::new();
        for s in frontier {
            let reducts = reductions(&states[s]);
            if at_bound {
                if !reducts.is_empty() {
                    truncated = true;
                }
                continue;
            }
            out_degree[s] = Some(0);
            for r in reducts {
                let cf = canonicalize(&r);
                let id = match index.get(&cf) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        states.push(r);
                        out_degree.push(None);
                        index.insert(cf, id);
                        next.push(id);
                        id
                    }
                };
                if !edges.contains(&(s, id)) {
                    edges.push((s, id));
                }
                *out_degree[s].as_mut().expect("just set") += 1;
            }
        }
        if !at_bound {
            levels.push(next);
        }
    }
    if levels.last().map(|l| l.is_empty()).unwrap_or(false) {
        levels.pop();
    }

    StateGraph {
        states,
        edges,
        levels,
        out_degree,
        truncated,
    }
}

/// Removes inert garbage: a group of parallel components guarded by a
/// restricted protected head — `(new n)(#n.p1 -> P1 | … | #n.pk -> Pk)`
/// where `n` occurs nowhere else and the guarded patterns cannot unify with
/// one another — can never interact with anything and is dropped.
pub fn prune_dead(p: &Process) -> Process {
    let (mut res, mut threads) = strip(p);
    loop {
        let mut changed = false;
        for n in res.clone() {
            let involving: Vec<usize> = threads
                .iter()
                .enumerate()
                .filter(|(_, t)| free_names_proc(t).contains(&n))
                .map(|(i, _)| i)
                .collect();
            if involving.is_empty() {
                res.retain(|m| *m != n);
                changed = true;
                continue;
            }
            let mut shapes: Vec<&Pattern> = Vec::new();
            let guarded = involving.iter().all(|&i| match &threads[i] {
                Process::Case(pattern @ Pattern::Compound(head, rest), body)
                    if **head == Pattern::Protected(n.clone()) =>
                {
                    let elsewhere = rest.all_names().contains(&n)
                        || free_names_proc(body).contains(&n);
                    if elsewhere {
                        false
                    } else {
                        shapes.push(pattern);
                        true
                    }
                }
                _ => false,
            });
            if !guarded {
                continue;
            }
            let inert = shapes.iter().enumerate().all(|(a, pa)| {
                shapes[a + 1..].iter().all(|pb| {
                    unify(pa, pb).map(|o| o.is_none()).unwrap_or(false)
                })
            });
            if !inert {
                continue;
            }
            let drop: BTreeSet<usize> = involving.into_iter().collect();
            threads = threads
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, t)| t)
                .collect();
            res.retain(|m| *m != n);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let still_free: BTreeSet<Name> = threads.iter().flat_map(free_names_proc).collect();
    res.retain(|n| still_free.contains(n));
    Process::restrict_all(res, Process::par_all(threads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::struct_eq;
    use crate::process::testutil::*;

    #[test]
    fn self_matching_pair_reduces() {
        let p = Process::par(
            case(v("x"), Process::Success),
            case(v("x"), Process::Success),
        );
        let rs = reductions(&p);
        assert_eq!(rs.len(), 1);
        assert!(struct_eq(
            &rs[0],
            &Process::par(Process::Success, Process::Success)
        ));
    }

    #[test]
    fn single_case_alone_is_stuck() {
        let p = Process::restrict(n("n"), case(pr("n"), Process::Null));
        assert!(reductions(&p).is_empty());
        let q = case(v("x"), Process::Success);
        assert!(reductions(&q).is_empty());
    }

    #[test]
    fn replication_self_communication() {
        let p = Process::replicate(case(v("x"), Process::Success));
        let rs = reductions(&p);
        assert_eq!(rs.len(), 1);
        let expected = Process::par(
            Process::Success,
            Process::par(Process::Success, p.clone()),
        );
        assert!(struct_eq(&rs[0], &expected));
    }

    #[test]
    fn barb_examples() {
        // (new n)(#n -> 0) has no barb: the protected name is hidden.
        let p = Process::restrict(n("n"), case(pr("n"), Process::Null));
        assert!(barbs(&p).is_empty());

        // (new n)(n -> 0) has the empty barb.
        let p = Process::restrict(n("n"), case(v("n"), Process::Null));
        let bs = barbs(&p);
        assert_eq!(bs.len(), 1);
        assert!(bs.iter().next().unwrap().names.is_empty());

        // s.\m -> P shows {s}.
        let p = case(c(v("s"), b("m")), Process::Null);
        let bs = barbs(&p);
        assert_eq!(bs.len(), 1);
        assert_eq!(bs.iter().next().unwrap().names, [n("s")].into());

        // replication is transparent to barbs
        let p = Process::replicate(case(v("a"), Process::Null));
        assert_eq!(barbs(&p).len(), 1);
    }

    #[test]
    fn succeeds_examples() {
        assert!(succeeds(&Process::Success, 0));
        let pair = Process::par(
            case(v("x"), Process::Success),
            case(v("x"), Process::Success),
        );
        assert!(!succeeds(&pair, 0));
        assert!(succeeds(&pair, 1));
        let single = case(v("x"), Process::Success);
        assert!(!succeeds(&single, 5));
    }

    #[test]
    fn success_under_replication_counts() {
        let p = Process::replicate(Process::par(Process::Success, Process::Null));
        assert!(succeeds(&p, 0));
    }

    #[test]
    fn prune_dead_examples() {
        // (new n)(#n.#z -> P) | Q  with n unused elsewhere: dropped.
        let garbage = Process::restrict(
            n("n"),
            case(c(pr("n"), pr("z")), case(v("p"), Process::Null)),
        );
        let q = case(c(v("a"), v("b")), Process::Success);
        let pruned = prune_dead(&Process::par(garbage, q.clone()));
        assert!(struct_eq(&pruned, &q));

        // nothing to prune
        assert!(struct_eq(&prune_dead(&Process::Success), &Process::Success));

        // n occurs elsewhere: kept.
        let keep = Process::restrict(
            n("n"),
            Process::par(
                case(c(pr("n"), v("q")), Process::Null),
                case(c(v("n"), v("q")), Process::Null),
            ),
        );
        assert!(struct_eq(&prune_dead(&keep), &keep));

        // guarded components that can unify with each other: kept.
        let live = Process::restrict(
            n("n"),
            Process::par(
                case(c(pr("n"), v("a")), Process::Success),
                case(c(pr("n"), b("x")), Process::Null),
            ),
        );
        assert!(struct_eq(&prune_dead(&live), &live));
    }

    #[test]
    fn prune_dead_preserves_behavior_here() {
        let garbage = Process::restrict(
            n("n"),
            Process::par(
                case(c(pr("n"), pr("zero")), Process::Null),
                case(c(pr("n"), c(pr("suc"), b("x"))), Process::Null),
            ),
        );
        let live = Process::par(
            case(v("go"), Process::Success),
            case(v("go"), Process::Null),
        );
        let whole = Process::par(garbage, live.clone());
        let pruned = prune_dead(&whole);
        assert!(struct_eq(&pruned, &live));
        // same reducts modulo the garbage
        let whole_reducts = reductions(&whole);
        let live_reducts = reductions(&live);
        assert_eq!(whole_reducts.len(), live_reducts.len());
        for r in whole_reducts {
            let r = prune_dead(&r);
            assert!(live_reducts.iter().any(|l| struct_eq(&r, l)));
        }
    }

    #[test]
    fn explore_reports_deadlock_vs_truncation() {
        let pair = Process::par(
            case(v("x"), Process::Success),
            case(v("x"), Process::Success),
        );
        let g = explore(&pair, 5);
        assert_eq!(g.states.len(), 2);
        assert!(!g.truncated);
        assert_eq!(g.deadlocked(), alloc::vec![1]);

        let spin = Process::replicate(case(v("x"), case(v("x"), Process::Null)));
        let spin = Process::par(spin.clone(), case(v("x"), Process::Null));
        let g = explore(&spin, 1);
        assert!(g.truncated);
    }
}
