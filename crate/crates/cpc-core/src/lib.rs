//! Core engine for a pattern-matching process calculus.
//!
//! Patterns carry three kinds of names: binders (`\x`) that receive
//! information, variables (`x`) that offer it, and protected names (`#x`)
//! that can be tested but never traded away. Two patterns exchange
//! information in a single symmetric unification step, which is what makes
//! the calculus strictly more expressive than channel-based message passing.
//!
//! The crate is split along the tool's pipeline:
//!
//! * [`name`], [`pattern`], [`subst`], [`unify`], [`compat`] — the term
//!   language and its unification/compatibility orders;
//! * [`process`], [`canon`], [`reduce`] — process terms, structural
//!   congruence via canonical forms, and the reduction relation;
//! * [`lts`] — the finitely-branching labelled transition system and the
//!   τ-versus-reduction cross-check;
//! * [`equiv`] — test gadgets, characteristic processes and a bounded
//!   bisimilarity checker with replayable counterexamples;
//! * [`linda`], [`spi`], [`encoding_check`] — two source calculi, their
//!   translations into the pattern calculus, and a differential harness
//!   that validates the translations step by step.
//!
//! The crate is `no_std` (with `alloc`) so the engine can be embedded; all
//! I/O, parsing and printing live in the companion `cpc` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod canon;
pub mod compat;
pub mod corpus;
pub mod encoding_check;
pub mod equiv;
pub mod linda;
pub mod lts;
pub mod name;
pub mod pattern;
pub mod process;
pub mod reduce;
pub mod spi;
pub mod subst;
pub mod unify;

pub use canon::{canonicalize, struct_eq, CanonicalForm};
pub use compat::{compat, compat_subst, maximal_pattern, Match};
pub use encoding_check::{check_linda, check_spi, EncodingReport};
pub use equiv::{
    bounded_bisim, char_context, char_proc, failure_name, spec, succeeds_with, verify_witness,
    BisimConfig, BisimOutcome, CharContext, DistinguishingWitness, Side, Specification,
    WitnessReply, WitnessStep,
};
pub use linda::{
    encode_linda, linda_free_names, linda_has_ok, linda_match, linda_reduce, LindaProcess,
    TemplateField,
};
pub use lts::{label_key, meas, tau_matches_reduction, transitions, Label, LabelKey, Transition};
pub use name::Name;
pub use pattern::{protect, Pattern, PatternError};
pub use process::{alpha_rename, free_names_proc, subst_proc, Process};
pub use reduce::{
    barbs, explore, min_steps_to_barb, prune_dead, redexes, reductions, succeeds, Barb, Redex,
    StateGraph,
};
pub use spi::{
    encode_spi_proc, encode_spi_term, norm, norm_eq, spi_has_ok, spi_reduce, subst_spi,
    SpiEncodeError, SpiProcess, SpiTerm,
};
pub use subst::{apply_subst, apply_subst_binding, compose_limited, Substitution};
pub use unify::{unify, UnifyResult};
