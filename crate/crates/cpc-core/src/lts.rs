//! The labelled transition system, its size measure, and the check that
//! silent transitions coincide with the reduction relation.
//!
//! Replication uses the image-finite rule pair: a single unfold alongside
//! the replication, plus a dedicated self-communication rule, instead of
//! unfolding under the hood of every derivation.

use crate::canon::{canonicalize, strip, CanonicalForm};
use crate::name::Name;
use crate::pattern::Pattern;
use crate::process::{rename_free_name, Process};
use crate::reduce::{expansions, reductions, REP_DEPTH};
use crate::unify::unify;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

/// A transition label: silent, or a pattern exposed to the environment
/// together with the restricted names it extrudes.
///
/// Extruded names always sit in variable position: a protected restricted
/// name blocks the transition instead, and binding names are never
/// restricted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Tau,
    Out {
        extruded: BTreeSet<Name>,
        pattern: Pattern,
    },
}

impl Label {
    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }

    /// Every name occurring in the label.
    pub fn names(&self) -> BTreeSet<Name> {
        match self {
            Label::Tau => BTreeSet::new(),
            Label::Out { extruded, pattern } => {
                let mut out = extruded.clone();
                out.extend(pattern.all_names());
                out
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: Process,
    pub label: Label,
    pub target: Process,
}

/// Labels compared up to renaming of their bound material (extruded names
/// and binding names).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LabelKey {
    Tau,
    Out(CanonicalForm),
}

pub fn label_key(label: &Label) -> LabelKey {
    match label {
        Label::Tau => LabelKey::Tau,
        Label::Out { extruded, pattern } => LabelKey::Out(canonicalize(&Process::restrict_all(
            extruded.iter().cloned(),
            Process::case(pattern.clone(), Process::Null),
        ))),
    }
}

/// Label and target together, up to renaming of the label's bound material:
/// extruded names and binding names both scope over the target, so the pair
/// is keyed as one term that binds them.
pub(crate) fn joint_key(label: &Label, target: &Process) -> (u8, CanonicalForm) {
    match label {
        Label::Tau => (0, canonicalize(target)),
        Label::Out { extruded, pattern } => (
            1,
            canonicalize(&Process::restrict_all(
                extruded.iter().cloned(),
                Process::case(pattern.clone(), target.clone()),
            )),
        ),
    }
}

/// All transitions of a process, deduplicated by label-and-target up to
/// renaming of bound material.
pub fn transitions(p: &Process) -> Vec<Transition> {
    let mut seen: BTreeMap<(u8, CanonicalForm), ()> = BTreeMap::new();
    let mut out = Vec::new();
    for (label, target) in trans(p) {
        if seen.insert(joint_key(&label, &target), ()).is_none() {
            out.push(Transition {
                source: p.clone(),
                label,
                target,
            });
        }
    }
    out
}

/// Renames one extruded name to a fresh one across the label and target.
fn freshen_extruded(
    extruded: &mut BTreeSet<Name>,
    pattern: &mut Pattern,
    target: &mut Process,
    from: &Name,
) {
    let to = Name::fresh();
    extruded.remove(from);
    extruded.insert(to.clone());
    let mut map = BTreeMap::new();
    map.insert(from.clone(), to.clone());
    *pattern = pattern.rename_all(&map);
    *target = rename_free_name(target, from, &to);
}

/// Renames one binding name of the label to a fresh one; the binder scopes
/// over the target, where it occurs free.
fn freshen_binder(pattern: &mut Pattern, target: &mut Process, from: &Name) {
    let to = Name::fresh();
    let mut map = BTreeMap::new();
    map.insert(from.clone(), to.clone());
    *pattern = pattern.rename_binders(&map);
    *target = rename_free_name(target, from, &to);
}

/// Renames all of a label's bound material away from a set of names to
/// avoid.
fn avoid(label: &mut Label, target: &mut Process, forbidden: &BTreeSet<Name>) {
    let Label::Out { extruded, pattern } = label else {
        return;
    };
    for n in extruded.clone() {
        if forbidden.contains(&n) {
            freshen_extruded(extruded, pattern, target, &n);
        }
    }
    for n in pattern.binding_names() {
        if forbidden.contains(&n) {
            freshen_binder(pattern, target, &n);
        }
    }
}

/// Composes two visible transitions into a silent one: their patterns must
/// unify, and each side's extrusions are freshened so neither clashes with
/// the other side or captures its free names.
fn combine_tau(
    left: (Label, Process),
    right: (Label, Process),
    left_free: &BTreeSet<Name>,
    right_free: &BTreeSet<Name>,
) -> Option<(Label, Process)> {
    let (mut llabel, mut ltarget) = left;
    let (mut rlabel, mut rtarget) = right;
    avoid(&mut llabel, &mut ltarget, right_free);
    let Label::Out {
        extruded: lext,
        pattern: lpat,
    } = llabel
    else {
        return None;
    };
    let mut lfree = left_free.clone();
    lfree.extend(lext.iter().cloned());
    avoid(&mut rlabel, &mut rtarget, &lfree);
    let Label::Out {
        extruded: rext,
        pattern: rpat,
    } = rlabel
    else {
        return None;
    };
    let outcome = unify(&lpat, &rpat).expect("case patterns are well-formed");
    let ur = outcome?;
    let mut all_ext: Vec<Name> = lext.into_iter().collect();
    all_ext.extend(rext);
    let target = Process::restrict_all(
        all_ext,
        Process::par(
            crate::process::subst_proc(&ur.left, &ltarget),
            crate::process::subst_proc(&ur.right, &rtarget),
        ),
    );
    Some((Label::Tau, target))
}

fn trans(p: &Process) -> Vec<(Label, Process)> {
    match p {
        Process::Null | Process::Success => Vec::new(),
        Process::Case(pattern, body) => alloc::vec![(
            Label::Out {
                extruded: BTreeSet::new(),
                pattern: pattern.clone(),
            },
            (**body).clone(),
        )],
        Process::Restrict(n, body) => {
            let mut out = Vec::new();
            for (label, target) in trans(body) {
                match label {
                    Label::Tau => {
                        out.push((Label::Tau, Process::restrict(n.clone(), target)))
                    }
                    Label::Out {
                        mut extruded,
                        mut pattern,
                    } => {
                        let mut target = target;
                        // bound material named like the restriction is
                        // renamed; any remaining occurrence is free.
                        if extruded.contains(n) {
                            freshen_extruded(&mut extruded, &mut pattern, &mut target, n);
                        }
                        if pattern.binding_names().contains(n) {
                            freshen_binder(&mut pattern, &mut target, n);
                        }
                        if pattern.protected_names().contains(n) {
                            // a hidden protected name can never be matched
                            continue;
                        }
                        let label = if pattern.variable_names().contains(n) {
                            extruded.insert(n.clone());
                            Label::Out { extruded, pattern }
                        } else {
                            target = Process::restrict(n.clone(), target);
                            Label::Out { extruded, pattern }
                        };
                        out.push((label, target));
                    }
                }
            }
            out
        }
        Process::Par(l, r) => {
            let ls = trans(l);
            let rs = trans(r);
            let lfree = l.free_names();
            let rfree = r.free_names();
            let mut out = Vec::new();
            for (label, target) in &ls {
                let mut label = label.clone();
                let mut target = target.clone();
                avoid(&mut label, &mut target, &rfree);
                out.push((label, Process::par(target, (**r).clone())));
            }
            for (label, target) in &rs {
                let mut label = label.clone();
                let mut target = target.clone();
                avoid(&mut label, &mut target, &lfree);
                out.push((label, Process::par((**l).clone(), target)));
            }
            for lt in &ls {
                for rt in &rs {
                    if let Some(tau) =
                        combine_tau(lt.clone(), rt.clone(), &lfree, &rfree)
                    {
                        out.push(tau);
                    }
                }
            }
            out
        }
        Process::Replicate(body) => {
            let ts = trans(body);
            let free = body.free_names();
            let mut out = Vec::new();
            for (label, target) in &ts {
                let mut label = label.clone();
                let mut target = target.clone();
                avoid(&mut label, &mut target, &free);
                out.push((label, Process::par(target, p.clone())));
            }
            for i in 0..ts.len() {
                for j in i..ts.len() {
                    if let Some((lab, tau_target)) =
                        combine_tau(ts[i].clone(), ts[j].clone(), &free, &free)
                    {
                        out.push((lab, Process::par(tau_target, p.clone())));
                    }
                }
            }
            out
        }
    }
}

/// The size measure bounding transition fan-out.
pub fn meas(p: &Process) -> u128 {
    match p {
        Process::Null | Process::Success => 0,
        Process::Case(_, _) => 1,
        Process::Par(l, r) => {
            let (a, b) = (meas(l), meas(r));
            a.saturating_add(b).saturating_add(a.saturating_mul(b))
        }
        Process::Replicate(body) => {
            let a = meas(body);
            a.saturating_add(a.saturating_mul(a))
        }
        Process::Restrict(_, body) => meas(body),
    }
}

/// Whether the silent transitions and the reduction relation reach the same
/// states, compared canonically.
pub fn tau_matches_reduction(p: &Process) -> bool {
    let lhs: BTreeSet<CanonicalForm> = transitions(p)
        .iter()
        .filter(|t| t.label.is_tau())
        .map(|t| canonicalize(&t.target))
        .collect();
    let rhs: BTreeSet<CanonicalForm> = reductions(p).iter().map(canonicalize).collect();
    lhs == rhs
}

/// Checks that a visible transition's source decomposes as a restricted
/// parallel composition with the acting case at top level, and that the
/// target is that decomposition with the case consumed. Silent transitions
/// pass vacuously.
pub fn exhibits_decomposition(t: &Transition) -> bool {
    let Label::Out { .. } = &t.label else {
        return true;
    };
    let key = joint_key(&t.label, &t.target);
    for e in expansions(&t.source, REP_DEPTH) {
        let (res, threads) = strip(&e);
        let res_set: BTreeSet<Name> = res.iter().cloned().collect();
        for (i, thread) in threads.iter().enumerate() {
            let Process::Case(q, body) = thread else {
                continue;
            };
            if !q.protected_names().is_disjoint(&res_set) {
                continue;
            }
            let extruded: BTreeSet<Name> = q
                .variable_names()
                .intersection(&res_set)
                .cloned()
                .collect();
            let inner: Vec<Name> = res
                .iter()
                .filter(|n| !extruded.contains(n))
                .cloned()
                .collect();
            let others: Vec<Process> = threads
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, t)| t.clone())
                .collect();
            let mut parts = alloc::vec![(**body).clone()];
            parts.extend(others);
            let candidate_target = Process::restrict_all(inner, Process::par_all(parts));
            let candidate_label = Label::Out {
                extruded,
                pattern: q.clone(),
            };
            if joint_key(&candidate_label, &candidate_target) == key {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::struct_eq;
    use crate::corpus;
    use crate::process::testutil::*;

    fn tau_targets(p: &Process) -> Vec<Process> {
        transitions(p)
            .into_iter()
            .filter(|t| t.label.is_tau())
            .map(|t| t.target)
            .collect()
    }

    #[test]
    fn case_has_one_transition() {
        let p = case(c(v("s"), b("m")), Process::Success);
        let ts = transitions(&p);
        assert_eq!(ts.len(), 1);
        assert_eq!(
            ts[0].label,
            Label::Out {
                extruded: BTreeSet::new(),
                pattern: c(v("s"), b("m")),
            }
        );
        assert!(struct_eq(&ts[0].target, &Process::Success));
    }

    #[test]
    fn open_extrudes_a_variable_name() {
        let p = Process::restrict(n("m"), case(c(v("m"), v("x")), Process::Null));
        let ts = transitions(&p);
        assert_eq!(ts.len(), 1);
        let Label::Out { extruded, pattern } = &ts[0].label else {
            panic!("visible transition expected");
        };
        assert_eq!(extruded.len(), 1);
        let opened = extruded.iter().next().unwrap();
        assert!(pattern.variable_names().contains(opened));
        assert!(pattern.variable_names().contains(&n("x")));
    }

    #[test]
    fn hidden_protected_name_blocks() {
        let p = Process::restrict(n("n"), case(pr("n"), Process::Success));
        assert!(transitions(&p).is_empty());
        let q = Process::restrict(
            n("n"),
            case(c(pr("n"), b("x")), Process::Success),
        );
        assert!(transitions(&q).is_empty());
    }

    #[test]
    fn restriction_passes_unrelated_labels() {
        let p = Process::restrict(n("k"), case(v("x"), Process::Success));
        let ts = transitions(&p);
        assert_eq!(ts.len(), 1);
        assert!(struct_eq(
            &ts[0].target,
            &Process::restrict(n("k"), Process::Success)
        ));
    }

    #[test]
    fn parallel_pair_unifies_internally() {
        let p = Process::par(
            case(v("x"), Process::Success),
            case(v("x"), Process::Success),
        );
        let ts = transitions(&p);
        assert_eq!(ts.iter().filter(|t| t.label.is_tau()).count(), 1);
        // the two visible halves are the same transition up to symmetry
        assert_eq!(ts.iter().filter(|t| !t.label.is_tau()).count(), 1);
        let tau = tau_targets(&p);
        assert!(struct_eq(
            &tau[0],
            &Process::par(Process::Success, Process::Success)
        ));
    }

    #[test]
    fn replication_transitions() {
        let p = Process::replicate(case(v("x"), Process::Success));
        let ts = transitions(&p);
        assert_eq!(ts.len(), 2);
        let tau = tau_targets(&p);
        assert_eq!(tau.len(), 1);
        let expected = Process::par(
            Process::par(Process::Success, Process::Success),
            p.clone(),
        );
        assert!(struct_eq(&tau[0], &expected));
    }

    #[test]
    fn parext_renames_clashing_binder() {
        // the left binder m collides with the right component's free m
        let p = Process::par(
            case(c(v("s"), b("m")), case(v("m"), Process::Null)),
            case(v("m"), Process::Success),
        );
        let ts = transitions(&p);
        for t in &ts {
            if let Label::Out { pattern, .. } = &t.label {
                if pattern.variable_names().contains(&n("s")) {
                    assert!(!pattern.binding_names().contains(&n("m")));
                }
            }
        }
        assert!(tau_matches_reduction(&p));
    }

    #[test]
    fn measure_examples() {
        let one = case(v("p"), Process::Null);
        assert_eq!(meas(&one), 1);
        let two = Process::par(one.clone(), case(v("q"), Process::Null));
        assert_eq!(meas(&two), 3);
        let rep = Process::replicate(one.clone());
        assert_eq!(meas(&rep), 2);
        assert_eq!(meas(&Process::Null), 0);
        assert_eq!(meas(&Process::restrict(n("a"), two)), 3);
    }

    #[test]
    fn tau_matches_reduction_on_corpus() {
        for p in [
            Process::Null,
            Process::par(
                case(v("x"), Process::Success),
                case(v("x"), Process::Success),
            ),
            Process::replicate(case(v("x"), Process::Success)),
            corpus::solution1(),
            corpus::solution2(),
            Process::par(corpus::solution1(), corpus::promiscuous()),
        ] {
            assert!(tau_matches_reduction(&p));
        }
    }

    #[test]
    fn tau_matches_reduction_along_traces() {
        let mut frontier = alloc::vec![Process::par(
            corpus::solution2(),
            corpus::promiscuous()
        )];
        for _ in 0..3 {
            let mut next = Vec::new();
            for p in &frontier {
                assert!(tau_matches_reduction(p));
                next.extend(reductions(p));
            }
            frontier = next;
        }
    }

    #[test]
    fn image_count_bounded_by_measure() {
        for p in [
            corpus::solution1(),
            corpus::solution2(),
            Process::replicate(case(v("x"), Process::Success)),
            Process::par(
                Process::replicate(case(b("z"), Process::Null)),
                case(c(b("x"), b("y")), Process::Null),
            ),
        ] {
            let bound = meas(&p);
            let mut per_label: BTreeMap<LabelKey, BTreeSet<CanonicalForm>> = BTreeMap::new();
            for t in transitions(&p) {
                per_label
                    .entry(label_key(&t.label))
                    .or_default()
                    .insert(canonicalize(&t.target));
            }
            for (_, targets) in per_label {
                assert!((targets.len() as u128) <= bound);
            }
        }
    }

    #[test]
    fn visible_transitions_decompose() {
        for p in [
            corpus::solution1(),
            corpus::solution2(),
            corpus::solution3(),
            Process::replicate(case(v("x"), Process::Success)),
        ] {
            for t in transitions(&p) {
                assert!(exhibits_decomposition(&t));
            }
        }
    }

    #[test]
    fn extrusion_then_restriction_outside() {
        // (new n)(n.x -> P | x.\y -> Q) extrudes n on the left label and
        // keeps the restriction on unrelated ones.
        let p = Process::restrict(
            n("n"),
            Process::par(
                case(c(v("n"), v("x")), Process::Success),
                case(c(v("x"), b("y")), Process::Null),
            ),
        );
        let ts = transitions(&p);
        let opened: Vec<_> = ts
            .iter()
            .filter(|t| match &t.label {
                Label::Out { extruded, .. } => !extruded.is_empty(),
                _ => false,
            })
            .collect();
        assert_eq!(opened.len(), 1);
        let kept: Vec<_> = ts
            .iter()
            .filter_map(|t| match &t.label {
                Label::Out { extruded, pattern } if extruded.is_empty() => {
                    Some((pattern.clone(), t.target.clone()))
                }
                _ => None,
            })
            .collect();
        assert_eq!(kept.len(), 1);
        assert!(matches!(&kept[0].1, Process::Restrict(_, _)));
        // no internal step: n.x and x.\y disagree on the first component
        assert!(tau_targets(&p).is_empty());
        assert!(tau_matches_reduction(&p));
    }
}
