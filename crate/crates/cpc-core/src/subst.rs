//! Substitutions: finite maps from names to communicable patterns.

use crate::name::Name;
use crate::pattern::{protect, Pattern, PatternError};
use alloc::collections::{BTreeMap, BTreeSet};
use core::fmt;

/// A finite map from names to communicable patterns.
///
/// Communicability of every image is an invariant, enforced at every entry
/// point; it is what lets `apply_subst` re-protect images under `#x` without
/// failing.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<Name, Pattern>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn singleton(name: Name, image: Pattern) -> Result<Substitution, PatternError> {
        Substitution::from_pairs([(name, image)])
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Substitution, PatternError>
    where
        I: IntoIterator<Item = (Name, Pattern)>,
    {
        let mut map = BTreeMap::new();
        for (name, image) in pairs {
            if !image.is_communicable() {
                return Err(PatternError::NonCommunicableImage);
            }
            if map.insert(name, image).is_some() {
                return Err(PatternError::DomainOverlap);
            }
        }
        Ok(Substitution { map })
    }

    /// The identity on the given names: each `x` maps to the variable `x`.
    pub fn identity_over<I>(names: I) -> Substitution
    where
        I: IntoIterator<Item = Name>,
    {
        Substitution {
            map: names
                .into_iter()
                .map(|n| (n.clone(), Pattern::Variable(n)))
                .collect(),
        }
    }

    /// Wraps a map whose images are already known communicable.
    pub(crate) fn from_map_unchecked(map: BTreeMap<Name, Pattern>) -> Substitution {
        debug_assert!(map.values().all(Pattern::is_communicable));
        Substitution { map }
    }

    pub fn get(&self, name: &Name) -> Option<&Pattern> {
        self.map.get(name)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.map.contains_key(name)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn domain(&self) -> BTreeSet<Name> {
        self.map.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Pattern)> {
        self.map.iter()
    }

    /// Every name occurring in an image.
    pub fn range_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for image in self.map.values() {
            out.extend(image.all_names());
        }
        out
    }

    /// The restriction of this substitution to the given names.
    pub fn restricted_to(&self, names: &BTreeSet<Name>) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(k, _)| names.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// This substitution with the given names removed from its domain.
    pub fn without(&self, names: &BTreeSet<Name>) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(k, _)| !names.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn union_disjoint(
        self,
        other: Substitution,
    ) -> Result<Substitution, PatternError> {
        let mut map = self.map;
        for (k, v) in other.map {
            if map.insert(k, v).is_some() {
                return Err(PatternError::DomainOverlap);
            }
        }
        Ok(Substitution { map })
    }

    pub fn apply(&self, p: &Pattern) -> Pattern {
        apply_subst(self, p)
    }

    pub fn apply_binding(&self, p: &Pattern) -> Pattern {
        apply_subst_binding(self, p)
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v:?}/{k}")?;
        }
        f.write_str("}")
    }
}

/// Applies a substitution to the free names of a pattern:
/// `x` becomes the image; `#x` becomes the protected image; binders are
/// untouched; compounds map componentwise.
pub fn apply_subst(s: &Substitution, p: &Pattern) -> Pattern {
    match p {
        Pattern::Variable(n) => match s.get(n) {
            Some(image) => image.clone(),
            None => p.clone(),
        },
        Pattern::Protected(n) => match s.get(n) {
            Some(image) => {
                protect(image).expect("substitution images are communicable")
            }
            None => p.clone(),
        },
        Pattern::Binding(_) => p.clone(),
        Pattern::Compound(l, r) => Pattern::compound(apply_subst(s, l), apply_subst(s, r)),
    }
}

/// The binder-directed application: `\x` becomes the image of `x` when
/// mapped, variables and protected names are untouched.
pub fn apply_subst_binding(s: &Substitution, p: &Pattern) -> Pattern {
    match p {
        Pattern::Binding(n) => match s.get(n) {
            Some(image) => image.clone(),
            None => p.clone(),
        },
        Pattern::Variable(_) | Pattern::Protected(_) => p.clone(),
        Pattern::Compound(l, r) => {
            Pattern::compound(apply_subst_binding(s, l), apply_subst_binding(s, r))
        }
    }
}

/// Composition with domain limited to `sigma`'s: each `x` in dom(sigma) maps
/// to `theta` applied to `sigma(x)`.
pub fn compose_limited(theta: &Substitution, sigma: &Substitution) -> Substitution {
    let map: BTreeMap<Name, Pattern> = sigma
        .iter()
        .map(|(x, image)| (x.clone(), theta.apply(image)))
        .collect();
    debug_assert!(
        map.values().all(Pattern::is_communicable),
        "composition of valid substitutions stays communicable"
    );
    Substitution::from_map_unchecked(map)
}

/// Convenience for tests with known-good pairs.
#[cfg(test)]
pub(crate) fn subst_of(pairs: alloc::vec::Vec<(Name, Pattern)>) -> Substitution {
    Substitution::from_pairs(pairs).expect("valid substitution")
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn rejects_non_communicable_image() {
        assert_eq!(
            Substitution::singleton(n("x"), b("y")).unwrap_err(),
            PatternError::NonCommunicableImage
        );
        assert_eq!(
            Substitution::singleton(n("x"), pr("y")).unwrap_err(),
            PatternError::NonCommunicableImage
        );
    }

    #[test]
    fn apply_protects_communicable_image() {
        // {a.b/x} applied to #x
        let s = subst_of(alloc::vec![(n("x"), c(v("a"), v("b")))]);
        assert_eq!(apply_subst(&s, &pr("x")), c(pr("a"), pr("b")));
    }

    #[test]
    fn apply_leaves_binders_alone() {
        // {a/x} applied to x.\x
        let s = subst_of(alloc::vec![(n("x"), v("a"))]);
        assert_eq!(apply_subst(&s, &c(v("x"), b("x"))), c(v("a"), b("x")));
    }

    #[test]
    fn apply_binding_hat_rules() {
        // {a/x} applied under the hat to \x.x
        let s = subst_of(alloc::vec![(n("x"), v("a"))]);
        assert_eq!(
            apply_subst_binding(&s, &c(b("x"), v("x"))),
            c(v("a"), v("x"))
        );
        // {a.b/z} applied under the hat to \z
        let s = subst_of(alloc::vec![(n("z"), c(v("a"), v("b")))]);
        assert_eq!(apply_subst_binding(&s, &b("z")), c(v("a"), v("b")));
        // the empty substitution is the identity
        let empty = Substitution::new();
        let p = c(b("x"), c(v("y"), pr("w")));
        assert_eq!(apply_subst_binding(&empty, &p), p);
        assert_eq!(apply_subst(&empty, &p), p);
    }

    #[test]
    fn compose_limited_examples() {
        // theta = {c/a}, sigma = {a.b/x}  =>  {c.b/x}
        let theta = subst_of(alloc::vec![(n("a"), v("c"))]);
        let sigma = subst_of(alloc::vec![(n("x"), c(v("a"), v("b")))]);
        let got = compose_limited(&theta, &sigma);
        assert_eq!(got.get(&n("x")), Some(&c(v("c"), v("b"))));
        assert_eq!(got.len(), 1);

        // identity theta
        let sigma = subst_of(alloc::vec![(n("x"), v("a")), (n("y"), v("b"))]);
        assert_eq!(compose_limited(&Substitution::new(), &sigma), sigma);

        // theta = {m/n}, sigma = {n/y}  =>  {m/y}
        let theta = subst_of(alloc::vec![(n("n"), v("m"))]);
        let sigma = subst_of(alloc::vec![(n("y"), v("n"))]);
        let got = compose_limited(&theta, &sigma);
        assert_eq!(got.get(&n("y")), Some(&v("m")));
    }

    #[test]
    fn union_disjoint_detects_overlap() {
        let a = subst_of(alloc::vec![(n("x"), v("a"))]);
        let b_ = subst_of(alloc::vec![(n("x"), v("b"))]);
        assert_eq!(
            a.clone().union_disjoint(b_).unwrap_err(),
            PatternError::DomainOverlap
        );
        let c_ = subst_of(alloc::vec![(n("y"), v("b"))]);
        let u = a.union_disjoint(c_).unwrap();
        assert_eq!(u.len(), 2);
    }

    #[test]
    fn identity_over_names() {
        let id = Substitution::identity_over([n("x"), n("y")]);
        assert_eq!(id.get(&n("x")), Some(&v("x")));
        assert_eq!(id.get(&n("y")), Some(&v("y")));
    }
}
