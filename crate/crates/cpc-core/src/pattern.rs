//! The pattern language: binding, variable and protected names, compounds.

use crate::name::Name;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

/// A pattern. Atoms are the three name forms; `Compound` is left-associative
/// juxtaposition in the surface syntax (`p . q`).
///
/// The derived ordering (atoms before compounds, names in interned order) is
/// the one used for canonical printing and sorted sets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    // Variants ordered so atoms sort before compounds.
    /// `\x` — a binder: information the pattern wants to receive.
    Binding(Name),
    /// `x` — a variable name: information the pattern offers.
    Variable(Name),
    /// `#x` — a protected name: testable in place but never traded.
    Protected(Name),
    Compound(Box<Pattern>, Box<Pattern>),
}

/// The three name classes of a pattern, disjointly collected.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NameClasses {
    pub variable: BTreeSet<Name>,
    pub protected: BTreeSet<Name>,
    pub binding: BTreeSet<Name>,
}

impl NameClasses {
    /// Free names: variable plus protected.
    pub fn free(&self) -> BTreeSet<Name> {
        self.variable.union(&self.protected).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternError {
    /// `protect` was handed a pattern containing a binder or protection.
    NotCommunicable,
    /// A substitution image contained a binder or protection.
    NonCommunicableImage,
    /// A pattern whose binding names repeat or collide with its free names.
    IllFormed,
    /// Two substitutions with overlapping domains were united.
    DomainOverlap,
    /// A match whose substitution domain differs from the pattern's binders.
    DomainMismatch,
}

impl fmt::Display for PatternError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternError::NotCommunicable => f.write_str("protect requires communicable pattern"),
            PatternError::NonCommunicableImage => {
                f.write_str("substitution images must be communicable patterns")
            }
            PatternError::IllFormed => {
                f.write_str("pattern is ill-formed: binding names must be pairwise distinct and disjoint from free names")
            }
            PatternError::DomainOverlap => f.write_str("substitution domains overlap"),
            PatternError::DomainMismatch => {
                f.write_str("substitution domain must equal the pattern's binding names")
            }
        }
    }
}

impl core::error::Error for PatternError {}

impl Pattern {
    pub fn compound(left: Pattern, right: Pattern) -> Pattern {
        Pattern::Compound(Box::new(left), Box::new(right))
    }

    pub fn classify_names(&self) -> NameClasses {
        let mut classes = NameClasses::default();
        self.collect_classes(&mut classes);
        classes
    }

    fn collect_classes(&self, classes: &mut NameClasses) {
        match self {
            Pattern::Binding(n) => {
                classes.binding.insert(n.clone());
            }
            Pattern::Variable(n) => {
                classes.variable.insert(n.clone());
            }
            Pattern::Protected(n) => {
                classes.protected.insert(n.clone());
            }
            Pattern::Compound(l, r) => {
                l.collect_classes(classes);
                r.collect_classes(classes);
            }
        }
    }

    pub fn variable_names(&self) -> BTreeSet<Name> {
        self.classify_names().variable
    }

    pub fn protected_names(&self) -> BTreeSet<Name> {
        self.classify_names().protected
    }

    pub fn binding_names(&self) -> BTreeSet<Name> {
        self.classify_names().binding
    }

    /// Free names: variables and protected names together.
    pub fn free_names(&self) -> BTreeSet<Name> {
        self.classify_names().free()
    }

    /// Every name occurring anywhere, binders included.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let classes = self.classify_names();
        let mut out = classes.free();
        out.extend(classes.binding);
        out
    }

    /// Binding names in left-to-right occurrence order, duplicates kept.
    pub fn binders_in_order(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_binders(&mut out);
        out
    }

    fn collect_binders(&self, out: &mut Vec<Name>) {
        match self {
            Pattern::Binding(n) => out.push(n.clone()),
            Pattern::Variable(_) | Pattern::Protected(_) => {}
            Pattern::Compound(l, r) => {
                l.collect_binders(out);
                r.collect_binders(out);
            }
        }
    }

    /// Binding names pairwise distinct and disjoint from free names.
    pub fn is_well_formed(&self) -> bool {
        let binders = self.binders_in_order();
        let distinct: BTreeSet<&Name> = binders.iter().collect();
        if distinct.len() != binders.len() {
            return false;
        }
        let classes = self.classify_names();
        classes.binding.is_disjoint(&classes.variable)
            && classes.binding.is_disjoint(&classes.protected)
    }

    /// No protected and no binding name anywhere.
    pub fn is_communicable(&self) -> bool {
        match self {
            Pattern::Variable(_) => true,
            Pattern::Binding(_) | Pattern::Protected(_) => false,
            Pattern::Compound(l, r) => l.is_communicable() && r.is_communicable(),
        }
    }

    /// Renames binding occurrences listed in `map`; free occurrences are
    /// untouched. Callers guarantee well-formedness keeps the two disjoint.
    pub(crate) fn rename_binders(&self, map: &BTreeMap<Name, Name>) -> Pattern {
        match self {
            Pattern::Binding(n) => {
                Pattern::Binding(map.get(n).cloned().unwrap_or_else(|| n.clone()))
            }
            Pattern::Variable(_) | Pattern::Protected(_) => self.clone(),
            Pattern::Compound(l, r) => {
                Pattern::compound(l.rename_binders(map), r.rename_binders(map))
            }
        }
    }

    /// Renames every occurrence of the mapped names, binding or free.
    pub(crate) fn rename_all(&self, map: &BTreeMap<Name, Name>) -> Pattern {
        let rename = |n: &Name| map.get(n).cloned().unwrap_or_else(|| n.clone());
        match self {
            Pattern::Binding(n) => Pattern::Binding(rename(n)),
            Pattern::Variable(n) => Pattern::Variable(rename(n)),
            Pattern::Protected(n) => Pattern::Protected(rename(n)),
            Pattern::Compound(l, r) => Pattern::compound(l.rename_all(map), r.rename_all(map)),
        }
    }
}

impl fmt::Debug for Pattern {
    /// Prints in surface notation: `\x`, `x`, `#x`, `p . q` with parentheses
    /// only where the left-associative reading needs them.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Binding(n) => write!(f, "\\{n}"),
            Pattern::Variable(n) => write!(f, "{n}"),
            Pattern::Protected(n) => write!(f, "#{n}"),
            Pattern::Compound(l, r) => {
                write!(f, "{l:?} . ")?;
                if matches!(**r, Pattern::Compound(_, _)) {
                    write!(f, "({:?})", r)
                } else {
                    write!(f, "{r:?}")
                }
            }
        }
    }
}

/// Protection extended from names to communicable patterns:
/// every variable becomes protected, compounds map componentwise.
pub fn protect(p: &Pattern) -> Result<Pattern, PatternError> {
    match p {
        Pattern::Variable(n) => Ok(Pattern::Protected(n.clone())),
        Pattern::Binding(_) | Pattern::Protected(_) => Err(PatternError::NotCommunicable),
        Pattern::Compound(l, r) => Ok(Pattern::compound(protect(l)?, protect(r)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Pattern {
        Pattern::Variable(Name::surface(n))
    }
    fn b(n: &str) -> Pattern {
        Pattern::Binding(Name::surface(n))
    }
    fn pr(n: &str) -> Pattern {
        Pattern::Protected(Name::surface(n))
    }
    fn c(l: Pattern, r: Pattern) -> Pattern {
        Pattern::compound(l, r)
    }

    #[test]
    fn classify_trade_pattern() {
        // #ABCShares . sharesID . \x
        let p = c(c(pr("ABCShares"), v("sharesID")), b("x"));
        let classes = p.classify_names();
        assert_eq!(classes.variable, [Name::surface("sharesID")].into());
        assert_eq!(classes.protected, [Name::surface("ABCShares")].into());
        assert_eq!(classes.binding, [Name::surface("x")].into());
        assert_eq!(
            classes.free(),
            [Name::surface("sharesID"), Name::surface("ABCShares")].into()
        );
    }

    #[test]
    fn classify_atoms_and_compound() {
        let p = c(c(v("a"), pr("b")), b("c"));
        let classes = p.classify_names();
        assert_eq!(classes.variable, [Name::surface("a")].into());
        assert_eq!(classes.protected, [Name::surface("b")].into());
        assert_eq!(classes.binding, [Name::surface("c")].into());

        let single = b("x");
        let classes = single.classify_names();
        assert!(classes.variable.is_empty() && classes.protected.is_empty());
        assert_eq!(classes.binding, [Name::surface("x")].into());
    }

    #[test]
    fn well_formedness() {
        assert!(!c(b("x"), b("x")).is_well_formed());
        assert!(!c(b("x"), v("x")).is_well_formed());
        assert!(c(c(b("x"), b("y")), v("n")).is_well_formed());
    }

    #[test]
    fn communicability() {
        assert!(c(v("a"), v("b")).is_communicable());
        assert!(!pr("a").is_communicable());
        assert!(!c(v("a"), b("x")).is_communicable());
    }

    #[test]
    fn protect_componentwise() {
        assert_eq!(protect(&c(v("a"), v("b"))).unwrap(), c(pr("a"), pr("b")));
        assert_eq!(protect(&v("n")).unwrap(), pr("n"));
        assert_eq!(
            protect(&c(c(v("a"), v("b")), v("c"))).unwrap(),
            c(c(pr("a"), pr("b")), pr("c"))
        );
        let err = protect(&b("x")).unwrap_err();
        assert_eq!(err, PatternError::NotCommunicable);
        assert_eq!(
            alloc::format!("{err}"),
            "protect requires communicable pattern"
        );
    }

    #[test]
    fn atoms_order_before_compounds() {
        let atom = v("z");
        let comp = c(v("a"), v("a"));
        assert!(atom < comp);
    }
}
