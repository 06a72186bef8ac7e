//! Names, with a collision-free supply of fresh ones.

use alloc::sync::Arc;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

static FRESH_COUNTER: AtomicU64 = AtomicU64::new(0);

/// A name is either a surface identifier or a machine-minted fresh name.
///
/// Fresh names are drawn from a process-wide monotonic counter, so they are
/// unique within a run and can never collide with surface identifiers.
/// The derived ordering puts all surface names (lexicographically) before
/// all fresh names (by mint order); canonical printing relies on this being
/// total and stable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Name {
    Surface(Arc<str>),
    Fresh(u64),
}

impl Name {
    pub fn surface(text: &str) -> Name {
        Name::Surface(Arc::from(text))
    }

    /// Mints a name guaranteed distinct from every other name in the run.
    pub fn fresh() -> Name {
        Name::Fresh(FRESH_COUNTER.fetch_add(1, Ordering::Relaxed))
    }

    pub fn is_fresh(&self) -> bool {
        matches!(self, Name::Fresh(_))
    }

    pub fn as_surface(&self) -> Option<&str> {
        match self {
            Name::Surface(s) => Some(s),
            Name::Fresh(_) => None,
        }
    }
}

impl From<&str> for Name {
    fn from(text: &str) -> Name {
        Name::surface(text)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::Surface(s) => f.write_str(s),
            // Not valid surface syntax; printers rename fresh names before
            // emitting parseable text.
            Name::Fresh(k) => write!(f, "%{k}"),
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_names_are_distinct() {
        let a = Name::fresh();
        let b = Name::fresh();
        assert_ne!(a, b);
    }

    #[test]
    fn surface_before_fresh_in_order() {
        let s = Name::surface("zzz");
        let f = Name::fresh();
        assert!(s < f);
        assert!(Name::surface("a") < Name::surface("b"));
    }
}
