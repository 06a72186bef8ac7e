//! Canonical forms for structural congruence.
//!
//! A canonical form flattens parallel composition into a sorted thread
//! multiset, drops nulls, hoists restrictions as far out as scope extension
//! allows, and renumbers bound names (restrictions and pattern binders)
//! positionally. Replication is deliberately *not* unfolded here — unfolding
//! has no normal form — so `struct_eq` is sound for structural congruence
//! and complete for it minus the unfolding axiom; the reduction engine and
//! the transition system honor unfolding operationally instead.

use crate::name::Name;
use crate::pattern::Pattern;
use crate::process::{free_names_proc, rename_free_name, Process};
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

/// A name as it appears in a canonical form: a restricted name (by hoisting
/// index), a pattern binder reference, or a free name kept verbatim.
/// `Hole` is a placeholder used only while deciding the numbering order;
/// finished forms never contain it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonName {
    Res(u32),
    Bound(u32),
    Free(Name),
    Hole,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonPat {
    Variable(CanonName),
    Protected(CanonName),
    Binding(u32),
    Compound(Box<CanonPat>, Box<CanonPat>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonThread {
    Success,
    Case(CanonPat, CanonicalForm),
    Repl(CanonicalForm),
}

/// The canonical form of one restriction scope: how many names are
/// restricted here, and the sorted multiset of threads under them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub restricted: u32,
    pub threads: Vec<CanonThread>,
}

/// How many numbering branches a tie between identical-looking threads may
/// spawn before the search settles for the first choice. Soundness is not
/// affected; only the tie-breaking completeness of `struct_eq` is.
const TIE_BUDGET: usize = 128;

/// Splits a process into its top-level restriction set and thread list,
/// applying the parallel-monoid axioms and scope extension. Restricted
/// names are freshened so hoisting can never capture.
pub(crate) fn strip(p: &Process) -> (Vec<Name>, Vec<Process>) {
    let mut res = Vec::new();
    let mut threads = Vec::new();
    let mut stack = alloc::vec![p.clone()];
    while let Some(q) = stack.pop() {
        match q {
            Process::Null => {}
            Process::Par(l, r) => {
                stack.push(*l);
                stack.push(*r);
            }
            Process::Restrict(n, body) => {
                let fresh = Name::fresh();
                let body = rename_free_name(&body, &n, &fresh);
                res.push(fresh);
                stack.push(body);
            }
            leaf => threads.push(leaf),
        }
    }
    (res, threads)
}

pub fn canonicalize(p: &Process) -> CanonicalForm {
    let mut trace = Vec::new();
    let mut budget = TIE_BUDGET;
    canon_scope(p, &BTreeMap::new(), 0, 0, &mut trace, &mut budget)
}

pub fn struct_eq(p: &Process, q: &Process) -> bool {
    canonicalize(p) == canonicalize(q)
}

/// Canonicalizes one restriction scope. `trace` records, in canonical
/// emission order, each name the renderer finds still unnumbered (mapped to
/// `Hole`) — the enclosing scope uses it to decide first-use order.
fn canon_scope(
    p: &Process,
    env: &BTreeMap<Name, CanonName>,
    res_base: u32,
    bind_base: u32,
    trace: &mut Vec<Name>,
    budget: &mut usize,
) -> CanonicalForm {
    let (res, threads) = strip(p);
    let free_union: BTreeSet<Name> = threads
        .iter()
        .flat_map(free_names_proc)
        .collect();
    // Unused restrictions are structurally removable.
    let used: BTreeSet<Name> = res.into_iter().filter(|n| free_union.contains(n)).collect();
    let total = used.len() as u32;

    let mut best: Option<(CanonicalForm, Vec<Name>)> = None;
    solve(
        &threads,
        env,
        res_base,
        bind_base,
        total,
        &mut BTreeMap::new(),
        &used.into_iter().collect::<Vec<_>>(),
        &mut best,
        budget,
    );
    let (form, sub_trace) = best.expect("at least one numbering exists");
    trace.extend(sub_trace);
    form
}

/// Depth-first numbering search: repeatedly renders the scope with the
/// still-unnumbered restricted names as holes, and gives the next index to
/// the first hole of the least thread — branching when threads tie.
#[allow(clippy::too_many_arguments)]
fn solve(
    threads: &[Process],
    env: &BTreeMap<Name, CanonName>,
    res_base: u32,
    bind_base: u32,
    total: u32,
    assigned: &mut BTreeMap<Name, CanonName>,
    remaining: &[Name],
    best: &mut Option<(CanonicalForm, Vec<Name>)>,
    budget: &mut usize,
) {
    let mut scope_env = env.clone();
    for (name, token) in assigned.iter() {
        scope_env.insert(name.clone(), token.clone());
    }
    for name in remaining {
        scope_env.insert(name.clone(), CanonName::Hole);
    }

    let mut rendered: Vec<(CanonThread, Vec<Name>)> = threads
        .iter()
        .map(|t| {
            let mut tr = Vec::new();
            let thread = render_thread(t, &scope_env, res_base + total, bind_base, &mut tr, budget);
            (thread, tr)
        })
        .collect();
    rendered.sort_by(|a, b| a.0.cmp(&b.0));

    if remaining.is_empty() {
        let mut trace = Vec::new();
        let mut out = Vec::with_capacity(rendered.len());
        for (thread, tr) in rendered {
            trace.extend(tr);
            out.push(thread);
        }
        let form = CanonicalForm {
            restricted: total,
            threads: out,
        };
        let better = best.as_ref().map(|(b, _)| form < *b).unwrap_or(true);
        if better {
            *best = Some((form, trace));
        }
        return;
    }

    // Find the earliest thread group (by key) whose traces reach an
    // unnumbered name; tied threads each nominate their first such name.
    let remaining_set: BTreeSet<&Name> = remaining.iter().collect();
    let mut candidates: Vec<Name> = Vec::new();
    let mut i = 0;
    while i < rendered.len() && candidates.is_empty() {
        let mut j = i;
        while j < rendered.len() && rendered[j].0 == rendered[i].0 {
            if let Some(first) = rendered[j]
                .1
                .iter()
                .find(|n| remaining_set.contains(n))
            {
                if !candidates.contains(first) {
                    candidates.push(first.clone());
                }
            }
            j += 1;
        }
        i = j;
    }
    debug_assert!(
        !candidates.is_empty(),
        "every used restricted name occurs in some thread"
    );

    let next_index = CanonName::Res(res_base + assigned.len() as u32);
    let explore = if *budget == 0 { 1 } else { candidates.len() };
    for cand in candidates.into_iter().take(explore) {
        if explore > 1 {
            *budget = budget.saturating_sub(1);
        }
        assigned.insert(cand.clone(), next_index.clone());
        let rest: Vec<Name> = remaining.iter().filter(|n| **n != cand).cloned().collect();
        solve(
            threads, env, res_base, bind_base, total, assigned, &rest, best, budget,
        );
        assigned.remove(&cand);
    }
}

fn render_thread(
    t: &Process,
    env: &BTreeMap<Name, CanonName>,
    res_next: u32,
    bind_next: u32,
    trace: &mut Vec<Name>,
    budget: &mut usize,
) -> CanonThread {
    match t {
        Process::Success => CanonThread::Success,
        Process::Case(pattern, body) => {
            let binders = pattern.binders_in_order();
            let mut env2 = env.clone();
            let mut binder_index = BTreeMap::new();
            for (i, binder) in binders.iter().enumerate() {
                let idx = bind_next + i as u32;
                binder_index.insert(binder.clone(), idx);
                env2.insert(binder.clone(), CanonName::Bound(idx));
            }
            let cpat = render_pat(pattern, &env2, &binder_index, trace);
            let cbody = canon_scope(
                body,
                &env2,
                res_next,
                bind_next + binders.len() as u32,
                trace,
                budget,
            );
            CanonThread::Case(cpat, cbody)
        }
        Process::Replicate(body) => CanonThread::Repl(canon_scope(
            body, env, res_next, bind_next, trace, budget,
        )),
        other => unreachable!("strip leaves only threads, got {other:?}"),
    }
}

fn render_pat(
    p: &Pattern,
    env: &BTreeMap<Name, CanonName>,
    binder_index: &BTreeMap<Name, u32>,
    trace: &mut Vec<Name>,
) -> CanonPat {
    let lookup = |n: &Name, trace: &mut Vec<Name>| -> CanonName {
        match env.get(n) {
            Some(CanonName::Hole) => {
                trace.push(n.clone());
                CanonName::Hole
            }
            Some(token) => token.clone(),
            None => CanonName::Free(n.clone()),
        }
    };
    match p {
        Pattern::Variable(n) => CanonPat::Variable(lookup(n, trace)),
        Pattern::Protected(n) => CanonPat::Protected(lookup(n, trace)),
        Pattern::Binding(n) => CanonPat::Binding(binder_index[n]),
        Pattern::Compound(l, r) => CanonPat::Compound(
            Box::new(render_pat(l, env, binder_index, trace)),
            Box::new(render_pat(r, env, binder_index, trace)),
        ),
    }
}

impl CanonicalForm {
    /// Rebuilds a process from the canonical form, minting fresh names for
    /// every restricted name and binder. `canonicalize` of the result is the
    /// form itself.
    pub fn to_process(&self) -> Process {
        let mut res_names = BTreeMap::new();
        let mut bound_names = BTreeMap::new();
        let mut next_res = 0u32;
        scope_to_process(self, &mut res_names, &mut bound_names, &mut next_res)
    }
}

fn scope_to_process(
    cf: &CanonicalForm,
    res_names: &mut BTreeMap<u32, Name>,
    bound_names: &mut BTreeMap<u32, Name>,
    next_res: &mut u32,
) -> Process {
    let here: Vec<Name> = (0..cf.restricted)
        .map(|i| {
            let name = Name::fresh();
            res_names.insert(*next_res + i, name.clone());
            name
        })
        .collect();
    *next_res += cf.restricted;
    let threads: Vec<Process> = cf
        .threads
        .iter()
        .map(|t| match t {
            CanonThread::Success => Process::Success,
            CanonThread::Case(cpat, body) => {
                let pattern = pat_to_pattern(cpat, res_names, bound_names);
                Process::case(
                    pattern,
                    scope_to_process(body, res_names, bound_names, next_res),
                )
            }
            CanonThread::Repl(body) => {
                Process::replicate(scope_to_process(body, res_names, bound_names, next_res))
            }
        })
        .collect();
    Process::restrict_all(here, Process::par_all(threads))
}

fn pat_to_pattern(
    p: &CanonPat,
    res_names: &BTreeMap<u32, Name>,
    bound_names: &mut BTreeMap<u32, Name>,
) -> Pattern {
    let resolve = |n: &CanonName, bound_names: &BTreeMap<u32, Name>| -> Name {
        match n {
            CanonName::Res(i) => res_names[i].clone(),
            CanonName::Bound(i) => bound_names[i].clone(),
            CanonName::Free(name) => name.clone(),
            CanonName::Hole => unreachable!("finished forms contain no holes"),
        }
    };
    match p {
        CanonPat::Variable(n) => Pattern::Variable(resolve(n, bound_names)),
        CanonPat::Protected(n) => Pattern::Protected(resolve(n, bound_names)),
        CanonPat::Binding(i) => {
            let name = Name::fresh();
            bound_names.insert(*i, name.clone());
            Pattern::Binding(name)
        }
        CanonPat::Compound(l, r) => Pattern::compound(
            pat_to_pattern(l, res_names, bound_names),
            pat_to_pattern(r, res_names, bound_names),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::testutil::*;

    #[test]
    fn par_monoid() {
        let p = case(v("a"), Process::Null);
        assert!(struct_eq(&Process::par(p.clone(), Process::Null), &p));
        assert!(struct_eq(
            &Process::par(p.clone(), case(v("b"), Process::Null)),
            &Process::par(case(v("b"), Process::Null), p.clone())
        ));
        let q = case(v("b"), Process::Null);
        let r = Process::Success;
        assert!(struct_eq(
            &Process::par(p.clone(), Process::par(q.clone(), r.clone())),
            &Process::par(Process::par(p, q), r)
        ));
    }

    #[test]
    fn restriction_axioms() {
        let body = case(c(v("m"), v("n")), Process::Null);
        let pq = Process::restrict(n("n"), Process::restrict(n("m"), body.clone()));
        let qp = Process::restrict(n("m"), Process::restrict(n("n"), body));
        assert!(struct_eq(&pq, &qp));

        assert!(struct_eq(
            &Process::restrict(n("n"), Process::Null),
            &Process::Null
        ));
    }

    #[test]
    fn scope_extension() {
        let p = case(v("a"), Process::Null);
        let q = case(v("x"), Process::Success);
        let separate = Process::par(p.clone(), Process::restrict(n("x"), q.clone()));
        let extended = Process::restrict(n("x"), Process::par(p, q));
        assert!(struct_eq(&separate, &extended));
    }

    #[test]
    fn alpha_insensitive() {
        let p = Process::restrict(n("x"), case(v("x"), Process::Null));
        let q = Process::restrict(n("y"), case(v("y"), Process::Null));
        assert!(struct_eq(&p, &q));

        let p = case(b("x"), case(v("x"), Process::Null));
        let q = case(b("y"), case(v("y"), Process::Null));
        assert!(struct_eq(&p, &q));
    }

    #[test]
    fn replication_not_unfolded() {
        let p = case(v("a"), Process::Null);
        let bang = Process::replicate(p.clone());
        assert!(!struct_eq(&bang, &Process::par(p, bang.clone())));
    }

    #[test]
    fn distinct_restrictions_not_conflated() {
        // (new a)(new b)(a -> b -> 0) vs (new a)(a -> a -> 0)
        let two = Process::restrict(
            n("a"),
            Process::restrict(n("b"), case(v("a"), case(v("b"), Process::Null))),
        );
        let one = Process::restrict(n("a"), case(v("a"), case(v("a"), Process::Null)));
        assert!(!struct_eq(&two, &one));
    }

    #[test]
    fn symmetric_restricted_pair_has_one_form() {
        // (new a)(new b)(a.b -> 0 | b.a -> 0) is symmetric in a,b: both
        // numberings must collapse to a single canonical form.
        let body = Process::par(
            case(c(v("a"), v("b")), Process::Null),
            case(c(v("b"), v("a")), Process::Null),
        );
        let p = Process::restrict(n("a"), Process::restrict(n("b"), body));
        let swapped = {
            let body = Process::par(
                case(c(v("b"), v("a")), Process::Null),
                case(c(v("a"), v("b")), Process::Null),
            );
            Process::restrict(n("a"), Process::restrict(n("b"), body))
        };
        assert!(struct_eq(&p, &swapped));
    }

    #[test]
    fn success_multiset_kept() {
        let two = Process::par(Process::Success, Process::Success);
        assert!(!struct_eq(&two, &Process::Success));
        assert!(struct_eq(&two, &two.clone()));
    }

    #[test]
    fn unused_restriction_dropped() {
        let p = case(v("a"), Process::Null);
        assert!(struct_eq(&Process::restrict(n("z"), p.clone()), &p));
    }

    #[test]
    fn to_process_round_trip() {
        let terms = [
            Process::Null,
            Process::Success,
            Process::restrict(
                n("a"),
                Process::par(
                    case(c(v("a"), b("x")), case(v("x"), Process::Success)),
                    Process::replicate(case(c(pr("a"), v("free")), Process::Null)),
                ),
            ),
            Process::par(
                Process::restrict(n("m"), case(c(v("m"), v("k")), Process::Null)),
                case(b("y"), Process::restrict(n("z"), case(c(v("z"), v("y")), Process::Null))),
            ),
        ];
        for p in terms {
            let cf = canonicalize(&p);
            let rebuilt = cf.to_process();
            assert_eq!(canonicalize(&rebuilt), cf, "round trip failed for {p:?}");
        }
    }

    #[test]
    fn binder_positions_distinguish() {
        // \x.\y -> x  vs  \x.\y -> y
        let p = case(c(b("x"), b("y")), case(v("x"), Process::Null));
        let q = case(c(b("x"), b("y")), case(v("y"), Process::Null));
        assert!(!struct_eq(&p, &q));
    }
}
