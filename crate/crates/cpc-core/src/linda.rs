//! A tuple-space coordination calculus and its translation into patterns.
//!
//! Processes drop tuples of names into a shared space (`Output`) and fish
//! them out with templates (`Input`): a template field either binds
//! whatever name it finds or insists on an exact one. Matching is
//! all-or-nothing over a whole tuple.
//!
//! The translation turns both sides into single patterns so that one
//! unification step plays the role of one tuple exchange. Arity is encoded
//! by shape and a reserved terminator name, which is what keeps tuples of
//! different length from matching each other.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::canon::{canonicalize, CanonicalForm};
use crate::name::Name;
use crate::pattern::Pattern;
use crate::process::Process;
use crate::subst::Substitution;

/// The reserved terminator name `_hash`.
///
/// Encoded templates and tuples use it to mark their spine; surface
/// programs must not use it as an ordinary name.
pub fn hash_name() -> Name {
    Name::surface("_hash")
}

/// One field of an input template.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TemplateField {
    /// `\x` — receive any name, binding it in the continuation.
    Bind(Name),
    /// `=b` — match only the exact name `b`.
    Exact(Name),
}

/// A tuple-space process.
///
/// Input binders within one template must be pairwise distinct; the
/// interpreter and the encoder both assume it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LindaProcess {
    Null,
    Ok,
    Output(Vec<Name>),
    Input(Vec<TemplateField>, Box<LindaProcess>),
    Par(Box<LindaProcess>, Box<LindaProcess>),
    Replicate(Box<LindaProcess>),
    Restrict(Name, Box<LindaProcess>),
}

impl LindaProcess {
    pub fn input(template: Vec<TemplateField>, body: LindaProcess) -> LindaProcess {
        LindaProcess::Input(template, Box::new(body))
    }

    pub fn par(l: LindaProcess, r: LindaProcess) -> LindaProcess {
        LindaProcess::Par(Box::new(l), Box::new(r))
    }

    pub fn replicate(body: LindaProcess) -> LindaProcess {
        LindaProcess::Replicate(Box::new(body))
    }

    pub fn restrict(n: Name, body: LindaProcess) -> LindaProcess {
        LindaProcess::Restrict(n, Box::new(body))
    }

    /// Binders of every template are pairwise distinct.
    pub fn well_formed(&self) -> bool {
        match self {
            LindaProcess::Null | LindaProcess::Ok | LindaProcess::Output(_) => true,
            LindaProcess::Input(t, body) => {
                let mut seen = BTreeSet::new();
                for f in t {
                    if let TemplateField::Bind(x) = f {
                        if !seen.insert(x.clone()) {
                            return false;
                        }
                    }
                }
                body.well_formed()
            }
            LindaProcess::Par(l, r) => l.well_formed() && r.well_formed(),
            LindaProcess::Replicate(b) | LindaProcess::Restrict(_, b) => b.well_formed(),
        }
    }
}

/// Matches a template against a tuple: defined only for equal arity with
/// every exact field satisfied, binding the rest.
pub fn linda_match(template: &[TemplateField], data: &[Name]) -> Option<Substitution> {
    if template.len() != data.len() {
        return None;
    }
    let mut result = Substitution::new();
    for (field, datum) in template.iter().zip(data) {
        match field {
            TemplateField::Exact(b) => {
                if b != datum {
                    return None;
                }
            }
            TemplateField::Bind(x) => {
                let one = Substitution::singleton(x.clone(), Pattern::Variable(datum.clone()))
                    .expect("a name is communicable");
                result = result.union_disjoint(one).ok()?;
            }
        }
    }
    Some(result)
}

/// The pattern of an input template: each field pairs with the terminator,
/// and the spine ends in a terminator carrying a throwaway binder.
pub fn template_pattern(template: &[TemplateField]) -> Pattern {
    match template.split_first() {
        None => Pattern::compound(
            Pattern::Binding(Name::fresh()),
            Pattern::Variable(hash_name()),
        ),
        Some((field, rest)) => {
            let head = match field {
                TemplateField::Bind(x) => Pattern::Binding(x.clone()),
                TemplateField::Exact(b) => Pattern::Protected(b.clone()),
            };
            Pattern::compound(
                Pattern::compound(head, Pattern::Variable(hash_name())),
                template_pattern(rest),
            )
        }
    }
}

/// The pattern of an output tuple: the mirror of `template_pattern`, with
/// the terminator and binder seats swapped so the two spines interlock.
pub fn data_pattern(data: &[Name]) -> Pattern {
    match data.split_first() {
        None => Pattern::compound(
            Pattern::Variable(hash_name()),
            Pattern::Binding(Name::fresh()),
        ),
        Some((datum, rest)) => Pattern::compound(
            Pattern::compound(
                Pattern::Variable(datum.clone()),
                Pattern::Binding(Name::fresh()),
            ),
            data_pattern(rest),
        ),
    }
}

/// Translates a tuple-space process into a pattern process: outputs become
/// bare tuple patterns, inputs become template cases, everything else maps
/// across one-to-one.
///
/// A template binder that collides with an exact name of the same template
/// (or with the terminator) is renamed first; the collision is invisible on
/// the source side, where binders scope only over the continuation, but
/// would make the template's pattern ill-formed.
pub fn encode_linda(p: &LindaProcess) -> Process {
    match p {
        LindaProcess::Null => Process::Null,
        LindaProcess::Ok => Process::Success,
        LindaProcess::Output(data) => Process::case(data_pattern(data), Process::Null),
        LindaProcess::Input(t, body) => {
            let mut clashing: BTreeSet<Name> = t
                .iter()
                .filter_map(|f| match f {
                    TemplateField::Exact(b) => Some(b.clone()),
                    TemplateField::Bind(_) => None,
                })
                .collect();
            clashing.insert(hash_name());
            let renames: BTreeMap<Name, Name> = t
                .iter()
                .filter_map(|f| match f {
                    TemplateField::Bind(x) if clashing.contains(x) => {
                        Some((x.clone(), Name::fresh()))
                    }
                    _ => None,
                })
                .collect();
            let template: Vec<TemplateField> = t
                .iter()
                .map(|f| match f {
                    TemplateField::Bind(x) => {
                        TemplateField::Bind(renames.get(x).cloned().unwrap_or_else(|| x.clone()))
                    }
                    exact => exact.clone(),
                })
                .collect();
            let body = if renames.is_empty() {
                encode_linda(body)
            } else {
                encode_linda(&subst_linda(&renames, body))
            };
            Process::case(template_pattern(&template), body)
        }
        LindaProcess::Par(l, r) => Process::par(encode_linda(l), encode_linda(r)),
        LindaProcess::Replicate(b) => Process::replicate(encode_linda(b)),
        LindaProcess::Restrict(n, b) => Process::restrict(n.clone(), encode_linda(b)),
    }
}

/// Free names: tuple data, exact template fields, and whatever the bodies
/// leave unbound.
pub fn linda_free_names(p: &LindaProcess) -> BTreeSet<Name> {
    match p {
        LindaProcess::Null | LindaProcess::Ok => BTreeSet::new(),
        LindaProcess::Output(data) => data.iter().cloned().collect(),
        LindaProcess::Input(t, body) => {
            let mut out = linda_free_names(body);
            for f in t {
                match f {
                    TemplateField::Bind(x) => {
                        out.remove(x);
                    }
                    TemplateField::Exact(b) => {
                        out.insert(b.clone());
                    }
                }
            }
            out
        }
        LindaProcess::Par(l, r) => {
            let mut out = linda_free_names(l);
            out.extend(linda_free_names(r));
            out
        }
        LindaProcess::Replicate(b) => linda_free_names(b),
        LindaProcess::Restrict(n, b) => {
            let mut out = linda_free_names(b);
            out.remove(n);
            out
        }
    }
}

/// Renames free names, freshening binders that would capture an image.
fn subst_linda(map: &BTreeMap<Name, Name>, p: &LindaProcess) -> LindaProcess {
    let rename = |n: &Name| map.get(n).cloned().unwrap_or_else(|| n.clone());
    match p {
        LindaProcess::Null => LindaProcess::Null,
        LindaProcess::Ok => LindaProcess::Ok,
        LindaProcess::Output(data) => LindaProcess::Output(data.iter().map(rename).collect()),
        LindaProcess::Input(t, body) => {
            let mut inner = map.clone();
            for f in t {
                if let TemplateField::Bind(x) = f {
                    inner.remove(x);
                }
            }
            let captured: BTreeSet<Name> = inner.values().cloned().collect();
            let mut template = Vec::with_capacity(t.len());
            let mut body = (**body).clone();
            for f in t {
                template.push(match f {
                    TemplateField::Exact(b) => TemplateField::Exact(rename(b)),
                    TemplateField::Bind(x) if captured.contains(x) => {
                        let fresh = Name::fresh();
                        let mut swap = BTreeMap::new();
                        swap.insert(x.clone(), fresh.clone());
                        body = subst_linda(&swap, &body);
                        TemplateField::Bind(fresh)
                    }
                    TemplateField::Bind(x) => TemplateField::Bind(x.clone()),
                });
            }
            LindaProcess::input(template, subst_linda(&inner, &body))
        }
        LindaProcess::Par(l, r) => {
            LindaProcess::par(subst_linda(map, l), subst_linda(map, r))
        }
        LindaProcess::Replicate(b) => LindaProcess::replicate(subst_linda(map, b)),
        LindaProcess::Restrict(n, b) => {
            let mut inner = map.clone();
            inner.remove(n);
            let captured: BTreeSet<Name> = inner.values().cloned().collect();
            if captured.contains(n) {
                let fresh = Name::fresh();
                let mut swap = BTreeMap::new();
                swap.insert(n.clone(), fresh.clone());
                let body = subst_linda(&swap, b);
                LindaProcess::restrict(fresh, subst_linda(&inner, &body))
            } else {
                LindaProcess::restrict(n.clone(), subst_linda(&inner, b))
            }
        }
    }
}

/// Converts a name-for-name substitution produced by `linda_match` into a
/// rename map for source terms.
fn as_rename(s: &Substitution) -> BTreeMap<Name, Name> {
    s.iter()
        .map(|(k, v)| match v {
            Pattern::Variable(n) => (k.clone(), n.clone()),
            other => unreachable!("tuple matching binds names, got {other:?}"),
        })
        .collect()
}

/// Splits into restricted names and parallel threads, freshening restricted
/// names so hoisting cannot capture.
fn strip_linda(p: &LindaProcess) -> (Vec<Name>, Vec<LindaProcess>) {
    let mut res = Vec::new();
    let mut threads = Vec::new();
    let mut stack = alloc::vec![p.clone()];
    while let Some(q) = stack.pop() {
        match q {
            LindaProcess::Null => {}
            LindaProcess::Par(l, r) => {
                stack.push(*l);
                stack.push(*r);
            }
            LindaProcess::Restrict(n, body) => {
                let fresh = Name::fresh();
                let mut swap = BTreeMap::new();
                swap.insert(n, fresh.clone());
                res.push(fresh);
                stack.push(subst_linda(&swap, &body));
            }
            leaf => threads.push(leaf),
        }
    }
    (res, threads)
}

/// How many replicated copies a single exploration step may peel off.
const LINDA_REP_DEPTH: u32 = 4;

/// The thread lists reachable by unfolding replications up to two copies
/// each, mirroring the pattern-process engine.
fn expansions_linda(p: &LindaProcess, budget: u32) -> Vec<LindaProcess> {
    match p {
        LindaProcess::Par(l, r) => {
            let ls = expansions_linda(l, budget);
            let rs = expansions_linda(r, budget);
            let mut out = Vec::with_capacity(ls.len() * rs.len());
            for a in &ls {
                for b in &rs {
                    out.push(LindaProcess::par(a.clone(), b.clone()));
                }
            }
            out
        }
        LindaProcess::Restrict(n, b) => expansions_linda(b, budget)
            .into_iter()
            .map(|q| LindaProcess::restrict(n.clone(), q))
            .collect(),
        LindaProcess::Replicate(b) if budget > 0 => {
            let mut out = alloc::vec![p.clone()];
            for copies in 1..=2usize {
                for inner in expansions_linda(b, budget - 1) {
                    let mut q = p.clone();
                    for _ in 0..copies {
                        q = LindaProcess::par(inner.clone(), q);
                    }
                    out.push(q);
                }
            }
            out
        }
        other => alloc::vec![other.clone()],
    }
}

/// All one-step reducts: an output tuple meets an input template whose
/// match is defined, deduplicated up to structural congruence of the
/// encodings.
pub fn linda_reduce(p: &LindaProcess) -> Vec<LindaProcess> {
    let mut seen: BTreeMap<CanonicalForm, LindaProcess> = BTreeMap::new();
    for expansion in expansions_linda(p, LINDA_REP_DEPTH) {
        let (res, threads) = strip_linda(&expansion);
        for i in 0..threads.len() {
            for j in 0..threads.len() {
                if i == j {
                    continue;
                }
                let (LindaProcess::Output(data), LindaProcess::Input(t, body)) =
                    (&threads[i], &threads[j])
                else {
                    continue;
                };
                let Some(sigma) = linda_match(t, data) else {
                    continue;
                };
                let mut rest: Vec<LindaProcess> = Vec::with_capacity(threads.len() - 1);
                for (k, thread) in threads.iter().enumerate() {
                    if k != i && k != j {
                        rest.push(thread.clone());
                    }
                }
                rest.push(subst_linda(&as_rename(&sigma), body));
                let mut reduct = rest
                    .into_iter()
                    .reduce(LindaProcess::par)
                    .unwrap_or(LindaProcess::Null);
                for n in res.iter().rev() {
                    reduct = LindaProcess::restrict(n.clone(), reduct);
                }
                seen.entry(canonicalize(&encode_linda(&reduct)))
                    .or_insert(reduct);
            }
        }
    }
    seen.into_values().collect()
}

/// Whether an unguarded success marker is visible, looking through
/// restriction and replication.
pub fn linda_has_ok(p: &LindaProcess) -> bool {
    let (_, threads) = strip_linda(p);
    threads.iter().any(|t| match t {
        LindaProcess::Ok => true,
        LindaProcess::Replicate(b) => linda_has_ok(b),
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::testutil::n;
    use crate::unify::unify;
    use TemplateField::{Bind, Exact};

    fn out(names: &[&str]) -> LindaProcess {
        LindaProcess::Output(names.iter().map(|s| n(s)).collect())
    }

    #[test]
    fn match_rule_table() {
        let got = linda_match(&[Bind(n("x")), Exact(n("b"))], &[n("a"), n("b")])
            .expect("one binder, one hit");
        assert_eq!(got.get(&n("x")), Some(&Pattern::Variable(n("a"))));
        assert_eq!(got.len(), 1);

        assert!(linda_match(&[Exact(n("b"))], &[n("c")]).is_none());
        assert_eq!(linda_match(&[], &[]), Some(Substitution::new()));
        assert!(linda_match(&[Bind(n("x"))], &[]).is_none());
        assert!(linda_match(&[], &[n("a")]).is_none());
    }

    #[test]
    fn encoded_exchange_carries_the_match() {
        // The encodings of (\y).0 and <b> unify into the match {b/y} plus
        // terminator bookkeeping on both sides.
        let t = template_pattern(&[Bind(n("y"))]);
        let d = data_pattern(&[n("b")]);
        let ur = unify(&t, &d).expect("well-formed").expect("arity agrees");
        assert_eq!(ur.left.get(&n("y")), Some(&Pattern::Variable(n("b"))));
        let hash = Pattern::Variable(hash_name());
        for (x, img) in ur.left.iter() {
            if *x != n("y") {
                assert_eq!(img, &hash);
            }
        }
        assert_eq!(ur.left.len(), 2);
        assert!(ur.right.iter().all(|(_, img)| img == &hash));
        assert_eq!(ur.right.len(), 2);
    }

    #[test]
    fn matching_correspondence_on_small_tuples() {
        // Binders are drawn from a pool of their own: their identity is
        // immaterial to matching, and a binder shadowing an exact name
        // would leave the raw template pattern ill-formed.
        let pool = [n("a"), n("b")];
        let binders = [n("x"), n("y")];
        let fields: Vec<TemplateField> = binders
            .iter()
            .map(|x| Bind(x.clone()))
            .chain(pool.iter().map(|x| Exact(x.clone())))
            .collect();
        let templates: Vec<Vec<TemplateField>> = core::iter::once(Vec::new())
            .chain(fields.iter().map(|f| alloc::vec![f.clone()]))
            .chain(fields.iter().flat_map(|f| {
                fields
                    .iter()
                    .map(move |g| alloc::vec![f.clone(), g.clone()])
            }))
            .collect();
        let tuples: Vec<Vec<Name>> = core::iter::once(Vec::new())
            .chain(pool.iter().map(|x| alloc::vec![x.clone()]))
            .chain(pool.iter().flat_map(|x| {
                pool.iter().map(move |y| alloc::vec![x.clone(), y.clone()])
            }))
            .collect();
        for t in &templates {
            if !LindaProcess::input(t.clone(), LindaProcess::Null).well_formed() {
                continue;
            }
            for d in &tuples {
                let direct = linda_match(t, d);
                let unified = unify(&template_pattern(t), &data_pattern(d))
                    .expect("encodings are well-formed");
                match direct {
                    None => assert!(unified.is_none(), "t={t:?} d={d:?}"),
                    Some(sigma) => {
                        let ur = unified.expect("match defined, encodings must unify");
                        let binders: BTreeSet<Name> = t
                            .iter()
                            .filter_map(|f| match f {
                                Bind(x) => Some(x.clone()),
                                Exact(_) => None,
                            })
                            .collect();
                        assert_eq!(ur.left.restricted_to(&binders), sigma);
                        let hash = Pattern::Variable(hash_name());
                        assert!(ur
                            .left
                            .iter()
                            .filter(|(x, _)| !binders.contains(x))
                            .all(|(_, img)| img == &hash));
                        assert!(ur.right.iter().all(|(_, img)| img == &hash));
                    }
                }
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let p = LindaProcess::par(
            out(&["b"]),
            LindaProcess::input(alloc::vec![Bind(n("x"))], LindaProcess::Ok),
        );
        let reducts = linda_reduce(&p);
        assert_eq!(reducts.len(), 1);
        assert!(linda_has_ok(&reducts[0]));

        // Two outputs never co-react.
        assert!(linda_reduce(&LindaProcess::par(out(&["b"]), out(&["b"]))).is_empty());

        // Arity mismatch never fires.
        let p = LindaProcess::par(
            out(&["b", "b"]),
            LindaProcess::input(alloc::vec![Bind(n("x"))], LindaProcess::Ok),
        );
        assert!(linda_reduce(&p).is_empty());
    }

    #[test]
    fn exact_fields_select_their_tuple() {
        let p = LindaProcess::par(
            out(&["a"]),
            LindaProcess::par(
                out(&["b"]),
                LindaProcess::input(alloc::vec![Exact(n("b"))], LindaProcess::Ok),
            ),
        );
        let reducts = linda_reduce(&p);
        assert_eq!(reducts.len(), 1);
        assert!(linda_has_ok(&reducts[0]));
    }

    #[test]
    fn replicated_listener_serves_many_tuples() {
        // Each tuple can meet a copy of the listener, with or without a
        // second unfolded copy left standing: four distinct states.
        let listener =
            LindaProcess::replicate(LindaProcess::input(alloc::vec![Bind(n("x"))], LindaProcess::Ok));
        let p = LindaProcess::par(out(&["a"]), LindaProcess::par(out(&["b"]), listener));
        let reducts = linda_reduce(&p);
        assert_eq!(reducts.len(), 4);
        assert!(reducts.iter().all(linda_has_ok));
    }

    #[test]
    fn self_composition_never_unlocks_a_reduction() {
        // Every tuple-space process that can react against a copy of
        // itself already contains both halves of the exchange, unlike the
        // self-matching pattern processes the encoding targets.
        let pool = [n("a"), n("b")];
        let mut terms: Vec<LindaProcess> = Vec::new();
        let mut smalls = alloc::vec![LindaProcess::Null, LindaProcess::Ok];
        for x in &pool {
            smalls.push(LindaProcess::Output(alloc::vec![x.clone()]));
            smalls.push(LindaProcess::input(
                alloc::vec![Bind(n("v"))],
                LindaProcess::Null,
            ));
            smalls.push(LindaProcess::input(
                alloc::vec![Exact(x.clone())],
                LindaProcess::Ok,
            ));
        }
        terms.extend(smalls.iter().cloned());
        for a in &smalls {
            for b in &smalls {
                terms.push(LindaProcess::par(a.clone(), b.clone()));
            }
        }
        for t in &terms {
            let doubled = LindaProcess::par(t.clone(), t.clone());
            if !linda_reduce(&doubled).is_empty() {
                assert!(
                    !linda_reduce(t).is_empty(),
                    "self-composition unlocked {t:?}"
                );
            }
        }
    }

    #[test]
    fn substitution_respects_binders() {
        // {b/x} must not touch the x bound by the inner template.
        let p = LindaProcess::par(
            out(&["x"]),
            LindaProcess::input(
                alloc::vec![Bind(n("x"))],
                LindaProcess::Output(alloc::vec![n("x")]),
            ),
        );
        let mut map = BTreeMap::new();
        map.insert(n("x"), n("b"));
        let q = subst_linda(&map, &p);
        let LindaProcess::Par(l, r) = &q else {
            panic!("shape preserved")
        };
        assert_eq!(**l, out(&["b"]));
        let LindaProcess::Input(t, body) = &**r else {
            panic!("shape preserved")
        };
        let Bind(x) = &t[0] else { panic!("binder kept") };
        assert_eq!(**body, LindaProcess::Output(alloc::vec![x.clone()]));
        assert_ne!(*x, n("b"));
    }
}
