//! Process terms and capture-avoiding operations on them.

use crate::name::Name;
use crate::pattern::Pattern;
use crate::subst::Substitution;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};

/// A process term.
///
/// `Success` is the reserved `ok` leaf used to observe outcomes; it has no
/// continuation. A `Case` guards its body with a pattern whose binding
/// names bind their free occurrences in the body.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Process {
    Null,
    Success,
    Case(Pattern, Box<Process>),
    Par(Box<Process>, Box<Process>),
    Replicate(Box<Process>),
    Restrict(Name, Box<Process>),
}

impl Process {
    pub fn case(pattern: Pattern, body: Process) -> Process {
        Process::Case(pattern, Box::new(body))
    }

    pub fn par(left: Process, right: Process) -> Process {
        Process::Par(Box::new(left), Box::new(right))
    }

    /// Right-nested parallel composition of the given components;
    /// empty input is `0`.
    pub fn par_all<I>(parts: I) -> Process
    where
        I: IntoIterator<Item = Process>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = parts.into_iter().rev();
        let Some(last) = iter.next() else {
            return Process::Null;
        };
        iter.fold(last, |acc, p| Process::par(p, acc))
    }

    pub fn replicate(body: Process) -> Process {
        Process::Replicate(Box::new(body))
    }

    pub fn restrict(name: Name, body: Process) -> Process {
        Process::Restrict(name, Box::new(body))
    }

    /// `(new n1)(new n2)… body`, outermost first.
    pub fn restrict_all<I>(names: I, body: Process) -> Process
    where
        I: IntoIterator<Item = Name>,
        I::IntoIter: DoubleEndedIterator,
    {
        names
            .into_iter()
            .rev()
            .fold(body, |acc, n| Process::restrict(n, acc))
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        free_names_proc(self)
    }

    /// Every name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_all_names(&mut out);
        out
    }

    fn collect_all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Process::Null | Process::Success => {}
            Process::Case(p, body) => {
                out.extend(p.all_names());
                body.collect_all_names(out);
            }
            Process::Par(l, r) => {
                l.collect_all_names(out);
                r.collect_all_names(out);
            }
            Process::Replicate(body) => body.collect_all_names(out),
            Process::Restrict(n, body) => {
                out.insert(n.clone());
                body.collect_all_names(out);
            }
        }
    }
}

/// Free names: `fn(p→P) = fn(p) ∪ (fn(P) \ bn(p))`; restriction removes its
/// name; the rest is structural.
pub fn free_names_proc(p: &Process) -> BTreeSet<Name> {
    match p {
        Process::Null | Process::Success => BTreeSet::new(),
        Process::Case(pattern, body) => {
            let mut out = pattern.free_names();
            let binders = pattern.binding_names();
            out.extend(
                free_names_proc(body)
                    .into_iter()
                    .filter(|n| !binders.contains(n)),
            );
            out
        }
        Process::Par(l, r) => {
            let mut out = free_names_proc(l);
            out.extend(free_names_proc(r));
            out
        }
        Process::Replicate(body) => free_names_proc(body),
        Process::Restrict(n, body) => {
            let mut out = free_names_proc(body);
            out.remove(n);
            out
        }
    }
}

/// Capture-avoiding substitution on processes.
///
/// Case patterns receive [`crate::subst::apply_subst`] on their free names;
/// binders that would capture an image name are α-renamed first, as are
/// restrictions.
pub fn subst_proc(s: &Substitution, p: &Process) -> Process {
    match p {
        Process::Null | Process::Success => p.clone(),
        Process::Case(pattern, body) => {
            let binders = pattern.binding_names();
            let s2 = s.without(&binders);
            if s2.is_empty() {
                return p.clone();
            }
            let clashing: BTreeSet<Name> = binders
                .intersection(&s2.range_names())
                .cloned()
                .collect();
            let (pattern, body) = if clashing.is_empty() {
                (pattern.clone(), (**body).clone())
            } else {
                let renames: BTreeMap<Name, Name> = clashing
                    .iter()
                    .map(|n| (n.clone(), Name::fresh()))
                    .collect();
                let renamed_pattern = pattern.rename_binders(&renames);
                let rename_sub = Substitution::from_map_unchecked(
                    renames
                        .iter()
                        .map(|(from, to)| (from.clone(), Pattern::Variable(to.clone())))
                        .collect(),
                );
                (renamed_pattern, subst_proc(&rename_sub, body))
            };
            Process::case(s2.apply(&pattern), subst_proc(&s2, &body))
        }
        Process::Par(l, r) => Process::par(subst_proc(s, l), subst_proc(s, r)),
        Process::Replicate(body) => Process::replicate(subst_proc(s, body)),
        Process::Restrict(n, body) => {
            let mut shadow = BTreeSet::new();
            shadow.insert(n.clone());
            let s2 = s.without(&shadow);
            if s2.is_empty() {
                return p.clone();
            }
            if s2.range_names().contains(n) {
                let fresh = Name::fresh();
                let body = rename_free_name(body, n, &fresh);
                Process::restrict(fresh, subst_proc(&s2, &body))
            } else {
                Process::restrict(n.clone(), subst_proc(&s2, body))
            }
        }
    }
}

/// Renames free occurrences of one name (a single-point injective renaming).
pub(crate) fn rename_free_name(p: &Process, from: &Name, to: &Name) -> Process {
    let s = Substitution::from_map_unchecked(
        [(from.clone(), Pattern::Variable(to.clone()))].into(),
    );
    subst_proc(&s, p)
}

/// Freshens every bound name — restriction names and pattern binders — so
/// they are pairwise distinct and distinct from everything else in the run.
/// Free names are untouched.
pub fn alpha_rename(p: &Process) -> Process {
    alpha_with(p, &BTreeMap::new())
}

fn alpha_with(p: &Process, env: &BTreeMap<Name, Name>) -> Process {
    match p {
        Process::Null | Process::Success => p.clone(),
        Process::Case(pattern, body) => {
            let mut env2 = env.clone();
            for binder in pattern.binders_in_order() {
                env2.insert(binder, Name::fresh());
            }
            Process::case(pattern.rename_all(&env2), alpha_with(body, &env2))
        }
        Process::Par(l, r) => Process::par(alpha_with(l, env), alpha_with(r, env)),
        Process::Replicate(body) => Process::replicate(alpha_with(body, env)),
        Process::Restrict(n, body) => {
            let fresh = Name::fresh();
            let mut env2 = env.clone();
            env2.insert(n.clone(), fresh.clone());
            Process::restrict(fresh, alpha_with(body, &env2))
        }
    }
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use crate::subst::subst_of;

    #[test]
    fn free_names_examples() {
        // (new n)(n -> 0)
        let p = Process::restrict(n("n"), case(v("n"), Process::Null));
        assert!(free_names_proc(&p).is_empty());

        // \x -> (x.y -> 0)
        let p = case(b("x"), case(c(v("x"), v("y")), Process::Null));
        assert_eq!(free_names_proc(&p), [n("y")].into());
    }

    #[test]
    fn buyer_free_names() {
        // s.\m -> (m.b.\x -> buyer.x -> ok)
        let buyer = case(
            c(v("s"), b("m")),
            case(
                c3(v("m"), v("b"), b("x")),
                case(c(v("buyer"), v("x")), Process::Success),
            ),
        );
        assert_eq!(
            free_names_proc(&buyer),
            [n("s"), n("b"), n("buyer")].into()
        );
    }

    #[test]
    fn subst_simple_body() {
        // {b/y} applied to (save.y -> 0) gives (save.b -> 0)
        let p = case(c(v("save"), v("y")), Process::Null);
        let s = subst_of(vec![(n("y"), v("b"))]);
        assert_eq!(subst_proc(&s, &p), case(c(v("save"), v("b")), Process::Null));
    }

    #[test]
    fn subst_identity() {
        let p = case(c(v("a"), b("x")), Process::Success);
        assert_eq!(subst_proc(&Substitution::new(), &p), p);
    }

    #[test]
    fn subst_respects_binder_shadowing() {
        // {k/x} applied to \x -> x : the binder shadows, nothing changes.
        let p = case(b("x"), case(v("x"), Process::Null));
        let s = subst_of(vec![(n("x"), v("k"))]);
        assert_eq!(subst_proc(&s, &p), p);
    }

    #[test]
    fn subst_avoids_binder_capture() {
        // {x/y} applied to \x -> y : the binder must not capture the image.
        let p = case(b("x"), case(v("y"), Process::Null));
        let s = subst_of(vec![(n("y"), v("x"))]);
        let q = subst_proc(&s, &p);
        match q {
            Process::Case(Pattern::Binding(fresh), body) => {
                assert!(fresh.is_fresh());
                assert_eq!(*body, case(v("x"), Process::Null));
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn subst_avoids_restriction_capture() {
        // {m/y} applied to (new m)(y -> 0): the restriction must not capture m.
        let p = Process::restrict(n("m"), case(v("y"), Process::Null));
        let s = subst_of(vec![(n("y"), v("m"))]);
        let q = subst_proc(&s, &p);
        match q {
            Process::Restrict(fresh, body) => {
                assert!(fresh.is_fresh());
                assert_eq!(*body, case(v("m"), Process::Null));
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn fn_of_subst_is_bounded() {
        let p = case(c(v("a"), b("x")), case(c(v("x"), v("y")), Process::Null));
        let s = subst_of(vec![(n("y"), c(v("u"), v("w")))]);
        let q = subst_proc(&s, &p);
        let mut bound = free_names_proc(&p);
        bound.extend(s.range_names());
        assert!(free_names_proc(&q).is_subset(&bound));
    }

    #[test]
    fn alpha_keeps_free_names() {
        let p = Process::restrict(
            n("m"),
            Process::par(
                case(c(v("m"), b("x")), case(v("x"), Process::Null)),
                case(v("free"), Process::Success),
            ),
        );
        let q = alpha_rename(&p);
        assert_eq!(free_names_proc(&p), free_names_proc(&q));
        assert_ne!(p, q);
    }
}
