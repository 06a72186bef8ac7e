//! Symmetric unification of two patterns.

use crate::name::Name;
use crate::pattern::{Pattern, PatternError};
use crate::subst::Substitution;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// The two substitutions a successful unification produces: `left` binds the
/// binders of the first pattern, `right` those of the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnifyResult {
    pub left: Substitution,
    pub right: Substitution,
}

/// Unifies two patterns symmetrically.
///
/// Rule table:
/// * name-on-name atoms unify when the names agree, in all four
///   variable/protected combinations, yielding empty substitutions;
/// * `\x` against a communicable `q` yields `{q/x}` on its own side,
///   and symmetrically;
/// * compounds unify componentwise, uniting the per-side substitutions;
/// * everything else is undefined (`Ok(None)`).
///
/// Undefined unification is normal control flow in reduction search, so it
/// is an absent value, not an error; ill-formed input is an error. Binder
/// overlap between the two sides carries no meaning (each side binds only in
/// its own body), so `q`'s clashing binders are renamed apart and the result
/// is mapped back to the original names.
pub fn unify(p: &Pattern, q: &Pattern) -> Result<Option<UnifyResult>, PatternError> {
    if !p.is_well_formed() || !q.is_well_formed() {
        return Err(PatternError::IllFormed);
    }
    let shared: Vec<Name> = p
        .binding_names()
        .intersection(&q.binding_names())
        .cloned()
        .collect();
    if shared.is_empty() {
        return Ok(go(p, q).map(|(left, right)| UnifyResult { left, right }));
    }
    let forward: BTreeMap<Name, Name> =
        shared.iter().map(|n| (n.clone(), Name::fresh())).collect();
    let q_apart = q.rename_binders(&forward);
    Ok(go(p, &q_apart).map(|(left, right)| {
        let mut map = BTreeMap::new();
        for (x, image) in right.iter() {
            let original = forward
                .iter()
                .find(|(_, fresh)| *fresh == x)
                .map(|(orig, _)| orig.clone())
                .unwrap_or_else(|| x.clone());
            map.insert(original, image.clone());
        }
        UnifyResult {
            left,
            right: Substitution::from_map_unchecked(map),
        }
    }))
}

fn go(p: &Pattern, q: &Pattern) -> Option<(Substitution, Substitution)> {
    use Pattern::*;
    match (p, q) {
        (Variable(m), Variable(n))
        | (Variable(m), Protected(n))
        | (Protected(m), Variable(n))
        | (Protected(m), Protected(n)) => {
            if m == n {
                Some((Substitution::new(), Substitution::new()))
            } else {
                None
            }
        }
        (Binding(x), _) if q.is_communicable() => {
            let left = Substitution::singleton(x.clone(), q.clone())
                .expect("communicable image");
            Some((left, Substitution::new()))
        }
        (_, Binding(y)) if p.is_communicable() => {
            let right = Substitution::singleton(y.clone(), p.clone())
                .expect("communicable image");
            Some((Substitution::new(), right))
        }
        (Compound(p1, p2), Compound(q1, q2)) => {
            let (l1, r1) = go(p1, q1)?;
            let (l2, r2) = go(p2, q2)?;
            // Disjointness is guaranteed by well-formedness of each side.
            let left = l1
                .union_disjoint(l2)
                .expect("well-formed patterns have disjoint binders");
            let right = r1
                .union_disjoint(r2)
                .expect("well-formed patterns have disjoint binders");
            Some((left, right))
        }
        _ => None,
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

    fn unify_ok(p: &Pattern, q: &Pattern) -> Option<UnifyResult> {
        unify(p, q).expect("well-formed")
    }

    #[test]
    fn atom_knowledge_cases() {
        for (p, q) in [
            (v("x"), v("x")),
            (v("x"), pr("x")),
            (pr("x"), v("x")),
            (pr("x"), pr("x")),
        ] {
            let r = unify_ok(&p, &q).expect("defined");
            assert!(r.left.is_empty() && r.right.is_empty(), "{p:?} vs {q:?}");
        }
        assert!(unify_ok(&v("x"), &v("y")).is_none());
        assert!(unify_ok(&pr("x"), &v("y")).is_none());
    }

    #[test]
    fn binding_cases() {
        let r = unify_ok(&b("z"), &c(v("a"), v("b"))).expect("defined");
        assert_eq!(r.left, subst_of(vec![(n("z"), c(v("a"), v("b")))]));
        assert!(r.right.is_empty());

        let r = unify_ok(&c(v("a"), v("b")), &b("z")).expect("defined");
        assert!(r.left.is_empty());
        assert_eq!(r.right, subst_of(vec![(n("z"), c(v("a"), v("b")))]));
    }

    #[test]
    fn undefined_cases() {
        // neither side communicable
        assert!(unify_ok(&b("x"), &b("y")).is_none());
        // binder against protected content
        assert!(unify_ok(&b("x"), &pr("a")).is_none());
        assert!(unify_ok(&b("x"), &c(v("a"), pr("b"))).is_none());
        // arity mismatch
        assert!(unify_ok(&v("a"), &c(v("a"), v("a"))).is_none());
        // protected against compound
        assert!(unify_ok(&pr("a"), &c(v("a"), v("a"))).is_none());
        // compound components disagree
        assert!(unify_ok(&c(v("a"), v("b")), &c(v("a"), v("c"))).is_none());
    }

    #[test]
    fn trade_example() {
        // #ABCShares . sharesID . \x  vs  #ABCShares . \y . bankAcc
        let p = c(c(pr("ABCShares"), v("sharesID")), b("x"));
        let q = c(c(pr("ABCShares"), b("y")), v("bankAcc"));
        let r = unify_ok(&p, &q).expect("defined");
        assert_eq!(r.left, subst_of(vec![(n("x"), v("bankAcc"))]));
        assert_eq!(r.right, subst_of(vec![(n("y"), v("sharesID"))]));
    }

    #[test]
    fn ill_formed_is_an_error() {
        let bad = c(b("x"), b("x"));
        assert_eq!(unify(&bad, &v("a")).unwrap_err(), PatternError::IllFormed);
        assert_eq!(unify(&v("a"), &bad).unwrap_err(), PatternError::IllFormed);
    }

    #[test]
    fn shared_binders_are_kept_apart() {
        // \x . a  vs  \x . \y : cross-side binder overlap on x
        let p = c(b("x"), v("a"));
        let q = c(b("x"), b("y"));
        let r = unify_ok(&p, &q);
        // \x vs \x is undefined, so the whole unification is undefined;
        // overlap handling must not manufacture a result.
        assert!(r.is_none());

        // a . \x  vs  \x . b : same binder name on both sides, but each
        // unifies against a communicable atom.
        let p = c(v("a"), b("x"));
        let q = c(b("x"), v("b"));
        let r = unify_ok(&p, &q).expect("defined");
        assert_eq!(r.left, subst_of(vec![(n("x"), v("b"))]));
        assert_eq!(r.right, subst_of(vec![(n("x"), v("a"))]));
    }

    #[test]
    fn symmetry_on_examples() {
        let cases = [
            (c(c(pr("A"), v("s")), b("x")), c(c(pr("A"), b("y")), v("t"))),
            (b("z"), c(v("a"), v("b"))),
            (v("a"), v("a")),
            (c(v("a"), b("x")), c(v("a"), v("b"))),
        ];
        for (p, q) in cases {
            let pq = unify_ok(&p, &q);
            let qp = unify_ok(&q, &p);
            match (pq, qp) {
                (Some(r1), Some(r2)) => {
                    assert_eq!(r1.left, r2.right);
                    assert_eq!(r1.right, r2.left);
                }
                (None, None) => {}
                other => panic!("asymmetric outcome: {other:?}"),
            }
        }
    }
}
