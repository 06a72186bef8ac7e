//! Compatibility: the ordering on pattern/substitution matches that defines
//! a proper reply in the bisimulation game.

use crate::name::Name;
use crate::pattern::{Pattern, PatternError};
use crate::subst::Substitution;

/// A pattern together with a substitution whose domain is exactly the
/// pattern's binding names — the shape a unification result has.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pattern: Pattern,
    subst: Substitution,
}

impl Match {
    pub fn new(pattern: Pattern, subst: Substitution) -> Result<Match, PatternError> {
        if !pattern.is_well_formed() {
            return Err(PatternError::IllFormed);
        }
        if subst.domain() != pattern.binding_names() {
            return Err(PatternError::DomainMismatch);
        }
        Ok(Match { pattern, subst })
    }

    /// The match pairing `p` with the identity over its binders.
    pub fn identity(pattern: Pattern) -> Result<Match, PatternError> {
        let id = Substitution::identity_over(pattern.binding_names());
        Match::new(pattern, id)
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn subst(&self) -> &Substitution {
        &self.subst
    }
}

/// Whether `(p,σ)` is compatible with `(q,ρ)`.
///
/// The inductive rules:
/// * `(p,σ) ◁ (\y, {σ̂p/y})` whenever `fn(p) = ∅`;
/// * `(n,{}) ◁ (n,{})` and `(#n,{}) ◁ (#n,{})`;
/// * `(#n,{}) ◁ (n,{})` — protection may be dropped by the larger side,
///   never added;
/// * compounds componentwise, uniting the substitutions.
///
/// Given `(p,σ,q)` the witnessing `ρ` is unique, so this reduces to deriving
/// it and comparing.
pub fn compat(m1: &Match, m2: &Match) -> bool {
    compat_subst(m1.pattern(), m1.subst(), m2.pattern()).as_ref() == Some(m2.subst())
}

/// Derives the unique `ρ` with `(p,σ) ◁ (q,ρ)`, if one exists.
///
/// `sigma`'s domain must be the binding names of `p` (a valid match);
/// callers violating that get `None`.
pub fn compat_subst(p: &Pattern, sigma: &Substitution, q: &Pattern) -> Option<Substitution> {
    if !p.is_well_formed() || !q.is_well_formed() || sigma.domain() != p.binding_names() {
        return None;
    }
    derive(p, sigma, q)
}

fn derive(p: &Pattern, sigma: &Substitution, q: &Pattern) -> Option<Substitution> {
    use Pattern::*;
    match q {
        Binding(y) => {
            if !p.free_names().is_empty() {
                return None;
            }
            let image = sigma.apply_binding(p);
            if !image.is_communicable() {
                return None;
            }
            Some(Substitution::singleton(y.clone(), image).expect("communicable image"))
        }
        Variable(n) => match p {
            Variable(m) | Protected(m) if m == n => Some(Substitution::new()),
            _ => None,
        },
        Protected(n) => match p {
            Protected(m) if m == n => Some(Substitution::new()),
            _ => None,
        },
        Compound(q1, q2) => match p {
            Compound(p1, p2) => {
                let s1 = sigma.restricted_to(&p1.binding_names());
                let s2 = sigma.restricted_to(&p2.binding_names());
                let r1 = derive(p1, &s1, q1)?;
                let r2 = derive(p2, &s2, q2)?;
                r1.union_disjoint(r2).ok()
            }
            _ => None,
        },
    }
}

/// The largest pattern (in the compatibility order) a given pattern can
/// reply to: subtrees without free names collapse into a single fresh
/// binder, protection is dropped, the rest is kept.
pub fn maximal_pattern(p: &Pattern) -> Pattern {
    if p.free_names().is_empty() {
        return Pattern::Binding(Name::fresh());
    }
    match p {
        Pattern::Variable(n) | Pattern::Protected(n) => Pattern::Variable(n.clone()),
        Pattern::Compound(l, r) => Pattern::compound(maximal_pattern(l), maximal_pattern(r)),
        // A bare binder has no free names and was handled above.
        Pattern::Binding(_) => unreachable!("binders have no free names"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subst::subst_of;

    fn n(s: &str) -> Name {
        Name::surface(s)
    }
    fn v(s: &str) -> Pattern {
        Pattern::Variable(n(s))
    }
    fn b(s: &str) -> Pattern {
        Pattern::Binding(n(s))
    }
    fn pr(s: &str) -> Pattern {
        Pattern::Protected(n(s))
    }
    fn c(l: Pattern, r: Pattern) -> Pattern {
        Pattern::compound(l, r)
    }

    fn m(p: Pattern, s: Substitution) -> Match {
        Match::new(p, s).expect("valid match")
    }

    #[test]
    fn binder_collapse_rule() {
        // (\x.\y, {a/x, b/y}) ◁ (\z, {a.b/z})
        let p = c(b("x"), b("y"));
        let sigma = subst_of(vec![(n("x"), v("a")), (n("y"), v("b"))]);
        let q = b("z");
        let rho = compat_subst(&p, &sigma, &q).expect("compatible");
        assert_eq!(rho, subst_of(vec![(n("z"), c(v("a"), v("b")))]));
        assert!(compat(
            &m(p, sigma),
            &m(q, subst_of(vec![(n("z"), c(v("a"), v("b")))]))
        ));
    }

    #[test]
    fn protection_drops_one_way() {
        let empty = Substitution::new();
        assert!(compat(
            &m(pr("n"), empty.clone()),
            &m(v("n"), empty.clone())
        ));
        assert!(!compat(
            &m(v("n"), empty.clone()),
            &m(pr("n"), empty.clone())
        ));
        assert!(compat(&m(v("n"), empty.clone()), &m(v("n"), empty.clone())));
        assert!(compat(
            &m(pr("n"), empty.clone()),
            &m(pr("n"), empty.clone())
        ));
    }

    #[test]
    fn binder_rule_needs_no_free_names() {
        // p = \x.a has the free name a, so it cannot collapse into \z.
        let p = c(b("x"), v("a"));
        let sigma = subst_of(vec![(n("x"), v("k"))]);
        assert_eq!(compat_subst(&p, &sigma, &b("z")), None);
    }

    #[test]
    fn compound_componentwise() {
        // (#n.(\x.\y), id-ish) ◁ (n.\w, ...)
        let p = c(pr("n"), c(b("x"), b("y")));
        let sigma = subst_of(vec![(n("x"), v("a")), (n("y"), v("b"))]);
        let q = c(v("n"), b("w"));
        let rho = compat_subst(&p, &sigma, &q).expect("compatible");
        assert_eq!(rho, subst_of(vec![(n("w"), c(v("a"), v("b")))]));
    }

    #[test]
    fn reflexivity() {
        let p = c(c(pr("n"), v("s")), b("x"));
        let sigma = subst_of(vec![(n("x"), c(v("a"), v("b")))]);
        let matched = m(p, sigma);
        assert!(compat(&matched, &matched));
    }

    #[test]
    fn maximal_pattern_examples() {
        assert_eq!(maximal_pattern(&pr("n")), v("n"));

        let q = maximal_pattern(&c(b("x"), b("y")));
        assert!(matches!(q, Pattern::Binding(ref w) if w.is_fresh()));

        let q = maximal_pattern(&c(pr("n"), c(b("x"), b("y"))));
        match q {
            Pattern::Compound(l, r) => {
                assert_eq!(*l, v("n"));
                assert!(matches!(*r, Pattern::Binding(ref w) if w.is_fresh()));
            }
            other => panic!("expected compound, got {other:?}"),
        }
    }

    #[test]
    fn maximal_pattern_admits_the_original() {
        let p = c(pr("n"), c(b("x"), b("y")));
        let q = maximal_pattern(&p);
        let id = Substitution::identity_over(p.binding_names());
        assert!(compat_subst(&p, &id, &q).is_some());
    }
}
