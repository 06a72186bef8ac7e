//! A cryptographic message-passing calculus and its translation into
//! patterns.
//!
//! Messages here are structured terms: pairs, numerals and ciphertexts,
//! alongside plain names and variables. Processes communicate terms over
//! term-valued channels and take them apart with dedicated analysers
//! (equality test, pair split, decryption, integer case).
//!
//! The translation maps each term constructor to a tagged compound pattern
//! and each analyser to a pair of restricted cases that unify exactly when
//! the corresponding source rule fires. Tags keep differently built terms
//! apart: without them a ciphertext could be mistaken for a pair.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::canon::{canonicalize, CanonicalForm};
use crate::linda::hash_name;
use crate::name::Name;
use crate::pattern::Pattern;
use crate::process::Process;

/// A message term. `Int(i)` abbreviates the `i`-fold successor of zero and
/// is unfolded by [`norm`] before any comparison or translation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpiTerm {
    Name(Name),
    Var(Name),
    Pair(Box<SpiTerm>, Box<SpiTerm>),
    Zero,
    Int(u64),
    Suc(Box<SpiTerm>),
    Encrypt(Box<SpiTerm>, Box<SpiTerm>),
}

impl SpiTerm {
    pub fn pair(l: SpiTerm, r: SpiTerm) -> SpiTerm {
        SpiTerm::Pair(Box::new(l), Box::new(r))
    }

    pub fn suc(t: SpiTerm) -> SpiTerm {
        SpiTerm::Suc(Box::new(t))
    }

    /// `{body}key`.
    pub fn encrypt(body: SpiTerm, key: SpiTerm) -> SpiTerm {
        SpiTerm::Encrypt(Box::new(body), Box::new(key))
    }
}

/// A process over message terms.
///
/// Binders (input, split, decrypt, successor case) bind variables in their
/// continuation only; restriction binds a name. Names and variables live
/// in separate namespaces even when spelled alike.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpiProcess {
    Null,
    Ok,
    Par(Box<SpiProcess>, Box<SpiProcess>),
    Replicate(Box<SpiProcess>),
    Restrict(Name, Box<SpiProcess>),
    /// `M(x).P` — receive a term on channel `M`, binding it to `x`.
    Input(SpiTerm, Name, Box<SpiProcess>),
    /// `M!<N>.P` — send term `N` on channel `M`.
    Output(SpiTerm, SpiTerm, Box<SpiProcess>),
    /// `[M is N]P` — proceed only when the terms are equal.
    MatchEq(SpiTerm, SpiTerm, Box<SpiProcess>),
    /// `let (x,y) = M in P` — take a pair apart.
    SplitPair(Name, Name, SpiTerm, Box<SpiProcess>),
    /// `case M of {x}N : P` — decrypt under key `N`.
    CaseDecrypt(SpiTerm, Name, SpiTerm, Box<SpiProcess>),
    /// `case M of 0 : P suc(x) : Q` — discriminate a numeral.
    CaseInt(SpiTerm, Box<SpiProcess>, Name, Box<SpiProcess>),
}

impl SpiProcess {
    pub fn par(l: SpiProcess, r: SpiProcess) -> SpiProcess {
        SpiProcess::Par(Box::new(l), Box::new(r))
    }

    pub fn replicate(body: SpiProcess) -> SpiProcess {
        SpiProcess::Replicate(Box::new(body))
    }

    pub fn restrict(n: Name, body: SpiProcess) -> SpiProcess {
        SpiProcess::Restrict(n, Box::new(body))
    }

    pub fn input(channel: SpiTerm, x: Name, body: SpiProcess) -> SpiProcess {
        SpiProcess::Input(channel, x, Box::new(body))
    }

    pub fn output(channel: SpiTerm, payload: SpiTerm, body: SpiProcess) -> SpiProcess {
        SpiProcess::Output(channel, payload, Box::new(body))
    }

    pub fn match_eq(m: SpiTerm, n: SpiTerm, body: SpiProcess) -> SpiProcess {
        SpiProcess::MatchEq(m, n, Box::new(body))
    }

    pub fn split_pair(x: Name, y: Name, m: SpiTerm, body: SpiProcess) -> SpiProcess {
        SpiProcess::SplitPair(x, y, m, Box::new(body))
    }

    pub fn case_decrypt(m: SpiTerm, x: Name, key: SpiTerm, body: SpiProcess) -> SpiProcess {
        SpiProcess::CaseDecrypt(m, x, key, Box::new(body))
    }

    pub fn case_int(m: SpiTerm, zero: SpiProcess, x: Name, suc: SpiProcess) -> SpiProcess {
        SpiProcess::CaseInt(m, Box::new(zero), x, Box::new(suc))
    }
}

/// Unfolds integer literals into iterated successors, recursively.
pub fn norm(t: &SpiTerm) -> SpiTerm {
    match t {
        SpiTerm::Name(_) | SpiTerm::Var(_) | SpiTerm::Zero => t.clone(),
        SpiTerm::Int(i) => {
            let mut out = SpiTerm::Zero;
            for _ in 0..*i {
                out = SpiTerm::suc(out);
            }
            out
        }
        SpiTerm::Suc(m) => SpiTerm::suc(norm(m)),
        SpiTerm::Pair(l, r) => SpiTerm::pair(norm(l), norm(r)),
        SpiTerm::Encrypt(m, k) => SpiTerm::encrypt(norm(m), norm(k)),
    }
}

/// Term equality modulo integer unfolding.
pub fn norm_eq(a: &SpiTerm, b: &SpiTerm) -> bool {
    norm(a) == norm(b)
}

fn term_vars(t: &SpiTerm, out: &mut BTreeSet<Name>) {
    match t {
        SpiTerm::Var(x) => {
            out.insert(x.clone());
        }
        SpiTerm::Name(_) | SpiTerm::Zero | SpiTerm::Int(_) => {}
        SpiTerm::Suc(m) => term_vars(m, out),
        SpiTerm::Pair(l, r) | SpiTerm::Encrypt(l, r) => {
            term_vars(l, out);
            term_vars(r, out);
        }
    }
}

fn term_names(t: &SpiTerm, out: &mut BTreeSet<Name>) {
    match t {
        SpiTerm::Name(n) => {
            out.insert(n.clone());
        }
        SpiTerm::Var(_) | SpiTerm::Zero | SpiTerm::Int(_) => {}
        SpiTerm::Suc(m) => term_names(m, out),
        SpiTerm::Pair(l, r) | SpiTerm::Encrypt(l, r) => {
            term_names(l, out);
            term_names(r, out);
        }
    }
}

/// Every identifier a term mentions, regardless of namespace.
fn term_idents(t: &SpiTerm) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    term_names(t, &mut out);
    term_vars(t, &mut out);
    out
}

fn subst_term(map: &BTreeMap<Name, SpiTerm>, t: &SpiTerm) -> SpiTerm {
    match t {
        SpiTerm::Var(x) => map.get(x).cloned().unwrap_or_else(|| t.clone()),
        SpiTerm::Name(_) | SpiTerm::Zero | SpiTerm::Int(_) => t.clone(),
        SpiTerm::Suc(m) => SpiTerm::suc(subst_term(map, m)),
        SpiTerm::Pair(l, r) => SpiTerm::pair(subst_term(map, l), subst_term(map, r)),
        SpiTerm::Encrypt(m, k) => SpiTerm::encrypt(subst_term(map, m), subst_term(map, k)),
    }
}

/// Renames one free name occurrence-wise, stopping at a shadowing
/// restriction. Safe without a capture check because callers rename to a
/// fresh target only.
fn rename_name(from: &Name, to: &Name, p: &SpiProcess) -> SpiProcess {
    let t = |term: &SpiTerm| {
        let mut map = BTreeMap::new();
        map.insert(from.clone(), to.clone());
        rename_term_name(&map, term)
    };
    match p {
        SpiProcess::Null => SpiProcess::Null,
        SpiProcess::Ok => SpiProcess::Ok,
        SpiProcess::Par(l, r) => SpiProcess::par(rename_name(from, to, l), rename_name(from, to, r)),
        SpiProcess::Replicate(b) => SpiProcess::replicate(rename_name(from, to, b)),
        SpiProcess::Restrict(n, _) if n == from => p.clone(),
        SpiProcess::Restrict(n, b) => SpiProcess::restrict(n.clone(), rename_name(from, to, b)),
        SpiProcess::Input(m, x, b) => {
            SpiProcess::input(t(m), x.clone(), rename_name(from, to, b))
        }
        SpiProcess::Output(m, n, b) => SpiProcess::output(t(m), t(n), rename_name(from, to, b)),
        SpiProcess::MatchEq(m, n, b) => SpiProcess::match_eq(t(m), t(n), rename_name(from, to, b)),
        SpiProcess::SplitPair(x, y, m, b) => {
            SpiProcess::split_pair(x.clone(), y.clone(), t(m), rename_name(from, to, b))
        }
        SpiProcess::CaseDecrypt(m, x, k, b) => {
            SpiProcess::case_decrypt(t(m), x.clone(), t(k), rename_name(from, to, b))
        }
        SpiProcess::CaseInt(m, z, x, s) => SpiProcess::case_int(
            t(m),
            rename_name(from, to, z),
            x.clone(),
            rename_name(from, to, s),
        ),
    }
}

fn rename_term_name(map: &BTreeMap<Name, Name>, t: &SpiTerm) -> SpiTerm {
    match t {
        SpiTerm::Name(n) => {
            SpiTerm::Name(map.get(n).cloned().unwrap_or_else(|| n.clone()))
        }
        SpiTerm::Var(_) | SpiTerm::Zero | SpiTerm::Int(_) => t.clone(),
        SpiTerm::Suc(m) => SpiTerm::suc(rename_term_name(map, m)),
        SpiTerm::Pair(l, r) => {
            SpiTerm::pair(rename_term_name(map, l), rename_term_name(map, r))
        }
        SpiTerm::Encrypt(m, k) => {
            SpiTerm::encrypt(rename_term_name(map, m), rename_term_name(map, k))
        }
    }
}

/// Applies a variable-to-term substitution, renaming variable binders and
/// restricted names that would capture an image.
pub fn subst_spi(map: &BTreeMap<Name, SpiTerm>, p: &SpiProcess) -> SpiProcess {
    if map.is_empty() {
        return p.clone();
    }
    let t = |term: &SpiTerm| subst_term(map, term);
    // Refreshes one variable binder against the images it must not touch.
    let binder = |x: &Name, body: &SpiProcess, scope: &mut BTreeMap<Name, SpiTerm>| {
        scope.remove(x);
        let mut image_vars = BTreeSet::new();
        for img in scope.values() {
            term_vars(img, &mut image_vars);
        }
        if image_vars.contains(x) {
            let fresh = Name::fresh();
            let mut swap = BTreeMap::new();
            swap.insert(x.clone(), SpiTerm::Var(fresh.clone()));
            (fresh, subst_spi(&swap, body))
        } else {
            (x.clone(), body.clone())
        }
    };
    match p {
        SpiProcess::Null => SpiProcess::Null,
        SpiProcess::Ok => SpiProcess::Ok,
        SpiProcess::Par(l, r) => SpiProcess::par(subst_spi(map, l), subst_spi(map, r)),
        SpiProcess::Replicate(b) => SpiProcess::replicate(subst_spi(map, b)),
        SpiProcess::Restrict(n, b) => {
            let mut image_names = BTreeSet::new();
            for img in map.values() {
                term_names(img, &mut image_names);
            }
            if image_names.contains(n) {
                let fresh = Name::fresh();
                let body = rename_name(n, &fresh, b);
                SpiProcess::restrict(fresh, subst_spi(map, &body))
            } else {
                SpiProcess::restrict(n.clone(), subst_spi(map, b))
            }
        }
        SpiProcess::Input(m, x, b) => {
            let mut scope = map.clone();
            let (x, body) = binder(x, b, &mut scope);
            SpiProcess::input(t(m), x, subst_spi(&scope, &body))
        }
        SpiProcess::Output(m, n, b) => SpiProcess::output(t(m), t(n), subst_spi(map, b)),
        SpiProcess::MatchEq(m, n, b) => SpiProcess::match_eq(t(m), t(n), subst_spi(map, b)),
        SpiProcess::SplitPair(x, y, m, b) => {
            let m = t(m);
            let mut scope = map.clone();
            let (x, body) = binder(x, b, &mut scope);
            let (y, body) = binder(y, &body, &mut scope);
            SpiProcess::split_pair(x, y, m, subst_spi(&scope, &body))
        }
        SpiProcess::CaseDecrypt(m, x, k, b) => {
            let m = t(m);
            let k = t(k);
            let mut scope = map.clone();
            let (x, body) = binder(x, b, &mut scope);
            SpiProcess::case_decrypt(m, x, k, subst_spi(&scope, &body))
        }
        SpiProcess::CaseInt(m, z, x, s) => {
            let m = t(m);
            let zero = subst_spi(map, z);
            let mut scope = map.clone();
            let (x, body) = binder(x, s, &mut scope);
            SpiProcess::case_int(m, zero, x, subst_spi(&scope, &body))
        }
    }
}

fn strip_spi(p: &SpiProcess) -> (Vec<Name>, Vec<SpiProcess>) {
    let mut res = Vec::new();
    let mut threads = Vec::new();
    let mut stack = alloc::vec![p.clone()];
    while let Some(q) = stack.pop() {
        match q {
            SpiProcess::Null => {}
            SpiProcess::Par(l, r) => {
                stack.push(*l);
                stack.push(*r);
            }
            SpiProcess::Restrict(n, body) => {
                let fresh = Name::fresh();
                res.push(fresh.clone());
                stack.push(rename_name(&n, &fresh, &body));
            }
            leaf => threads.push(leaf),
        }
    }
    (res, threads)
}

const SPI_REP_DEPTH: u32 = 4;

fn expansions_spi(p: &SpiProcess, budget: u32) -> Vec<SpiProcess> {
    match p {
        SpiProcess::Par(l, r) => {
            let ls = expansions_spi(l, budget);
            let rs = expansions_spi(r, budget);
            let mut out = Vec::with_capacity(ls.len() * rs.len());
            for a in &ls {
                for b in &rs {
                    out.push(SpiProcess::par(a.clone(), b.clone()));
                }
            }
            out
        }
        SpiProcess::Restrict(n, b) => expansions_spi(b, budget)
            .into_iter()
            .map(|q| SpiProcess::restrict(n.clone(), q))
            .collect(),
        SpiProcess::Replicate(b) if budget > 0 => {
            let mut out = alloc::vec![p.clone()];
            for copies in 1..=2usize {
                for inner in expansions_spi(b, budget - 1) {
                    let mut q = p.clone();
                    for _ in 0..copies {
                        q = SpiProcess::par(inner.clone(), q);
                    }
                    out.push(q);
                }
            }
            out
        }
        other => alloc::vec![other.clone()],
    }
}

/// The analyser axioms, each rewriting a single thread in place.
fn unary_step(t: &SpiProcess) -> Option<SpiProcess> {
    match t {
        SpiProcess::MatchEq(m, n, body) if norm_eq(m, n) => Some((**body).clone()),
        SpiProcess::SplitPair(x, y, m, body) if x != y => {
            let SpiTerm::Pair(l, r) = norm(m) else {
                return None;
            };
            let mut map = BTreeMap::new();
            map.insert(x.clone(), *l);
            map.insert(y.clone(), *r);
            Some(subst_spi(&map, body))
        }
        SpiProcess::CaseDecrypt(m, x, key, body) => {
            let SpiTerm::Encrypt(inner, used) = norm(m) else {
                return None;
            };
            if !norm_eq(&used, key) {
                return None;
            }
            let mut map = BTreeMap::new();
            map.insert(x.clone(), *inner);
            Some(subst_spi(&map, body))
        }
        SpiProcess::CaseInt(m, zero, x, suc) => match norm(m) {
            SpiTerm::Zero => Some((**zero).clone()),
            SpiTerm::Suc(inner) => {
                let mut map = BTreeMap::new();
                map.insert(x.clone(), *inner);
                Some(subst_spi(&map, suc))
            }
            _ => None,
        },
        _ => None,
    }
}

fn rewrap(res: &[Name], threads: Vec<SpiProcess>) -> SpiProcess {
    let mut out = threads
        .into_iter()
        .reduce(SpiProcess::par)
        .unwrap_or(SpiProcess::Null);
    for n in res.iter().rev() {
        out = SpiProcess::restrict(n.clone(), out);
    }
    out
}

/// All one-step reducts: communication on term-equal channels plus the
/// four analyser axioms, deduplicated up to structural congruence of the
/// encodings.
pub fn spi_reduce(p: &SpiProcess) -> Vec<SpiProcess> {
    let mut seen: BTreeMap<CanonicalForm, SpiProcess> = BTreeMap::new();
    let mut record = |reduct: SpiProcess| {
        seen.entry(canonicalize(&encode_proc_raw(&reduct)))
            .or_insert(reduct);
    };
    for expansion in expansions_spi(p, SPI_REP_DEPTH) {
        let (res, threads) = strip_spi(&expansion);
        for (i, thread) in threads.iter().enumerate() {
            if let Some(next) = unary_step(thread) {
                let mut rest: Vec<SpiProcess> = Vec::with_capacity(threads.len());
                for (k, other) in threads.iter().enumerate() {
                    if k != i {
                        rest.push(other.clone());
                    }
                }
                rest.push(next);
                record(rewrap(&res, rest));
            }
        }
        for i in 0..threads.len() {
            for j in 0..threads.len() {
                if i == j {
                    continue;
                }
                let (SpiProcess::Output(cm, payload, pb), SpiProcess::Input(cn, x, qb)) =
                    (&threads[i], &threads[j])
                else {
                    continue;
                };
                if !norm_eq(cm, cn) {
                    continue;
                }
                let mut map = BTreeMap::new();
                map.insert(x.clone(), payload.clone());
                let mut rest: Vec<SpiProcess> = Vec::with_capacity(threads.len());
                for (k, other) in threads.iter().enumerate() {
                    if k != i && k != j {
                        rest.push(other.clone());
                    }
                }
                rest.push((**pb).clone());
                rest.push(subst_spi(&map, qb));
                record(rewrap(&res, rest));
            }
        }
    }
    seen.into_values().collect()
}

/// Whether an unguarded success marker is visible, looking through
/// restriction and replication.
pub fn spi_has_ok(p: &SpiProcess) -> bool {
    let (_, threads) = strip_spi(p);
    threads.iter().any(|t| match t {
        SpiProcess::Ok => true,
        SpiProcess::Replicate(b) => spi_has_ok(b),
        _ => false,
    })
}

/// Why a process could not be translated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpiEncodeError {
    /// The program mentions a name the translation reserves for tags.
    ReservedName(Name),
    /// A pair split binds the same variable twice.
    SplitBindersEqual(Name),
}

impl fmt::Display for SpiEncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpiEncodeError::ReservedName(n) => {
                write!(f, "name `{n}` is reserved for the translation's tags")
            }
            SpiEncodeError::SplitBindersEqual(n) => {
                write!(f, "pair split binds `{n}` twice")
            }
        }
    }
}

impl core::error::Error for SpiEncodeError {}

fn tag(s: &str) -> Name {
    Name::surface(s)
}

/// Names the translation claims for itself: the four term tags and the
/// terminator shared with the tuple-space translation.
pub fn spi_reserved_names() -> [Name; 5] {
    [tag("pair"), tag("encr"), tag("0"), tag("suc"), hash_name()]
}

fn check_ident(n: &Name) -> Result<(), SpiEncodeError> {
    if spi_reserved_names().contains(n) {
        Err(SpiEncodeError::ReservedName(n.clone()))
    } else {
        Ok(())
    }
}

fn check_term(t: &SpiTerm) -> Result<(), SpiEncodeError> {
    for n in term_idents(t) {
        check_ident(&n)?;
    }
    Ok(())
}

fn validate(p: &SpiProcess) -> Result<(), SpiEncodeError> {
    match p {
        SpiProcess::Null | SpiProcess::Ok => Ok(()),
        SpiProcess::Par(l, r) => {
            validate(l)?;
            validate(r)
        }
        SpiProcess::Replicate(b) => validate(b),
        SpiProcess::Restrict(n, b) => {
            check_ident(n)?;
            validate(b)
        }
        SpiProcess::Input(m, x, b) => {
            check_term(m)?;
            check_ident(x)?;
            validate(b)
        }
        SpiProcess::Output(m, n, b) => {
            check_term(m)?;
            check_term(n)?;
            validate(b)
        }
        SpiProcess::MatchEq(m, n, b) => {
            check_term(m)?;
            check_term(n)?;
            validate(b)
        }
        SpiProcess::SplitPair(x, y, m, b) => {
            if x == y {
                return Err(SpiEncodeError::SplitBindersEqual(x.clone()));
            }
            check_ident(x)?;
            check_ident(y)?;
            check_term(m)?;
            validate(b)
        }
        SpiProcess::CaseDecrypt(m, x, k, b) => {
            check_term(m)?;
            check_ident(x)?;
            check_term(k)?;
            validate(b)
        }
        SpiProcess::CaseInt(m, z, x, s) => {
            check_term(m)?;
            validate(z)?;
            check_ident(x)?;
            validate(s)
        }
    }
}

fn enc_term(t: &SpiTerm) -> Pattern {
    match t {
        SpiTerm::Name(n) | SpiTerm::Var(n) => Pattern::Variable(n.clone()),
        SpiTerm::Zero => Pattern::Variable(tag("0")),
        SpiTerm::Int(_) => enc_term(&norm(t)),
        SpiTerm::Suc(m) => Pattern::compound(Pattern::Variable(tag("suc")), enc_term(m)),
        SpiTerm::Pair(l, r) => Pattern::compound(
            Pattern::compound(Pattern::Variable(tag("pair")), enc_term(l)),
            enc_term(r),
        ),
        SpiTerm::Encrypt(m, k) => Pattern::compound(
            Pattern::compound(Pattern::Variable(tag("encr")), enc_term(m)),
            enc_term(k),
        ),
    }
}

/// Translates a term into its tagged pattern.
pub fn encode_spi_term(t: &SpiTerm) -> Pattern {
    enc_term(&norm(t))
}

/// A two-thread analyser: the probe pattern meets the scrutinised term
/// under a private name, so nothing else can interfere.
fn gadget(probe: Pattern, continuation: Process, scrutinee: &SpiTerm) -> Process {
    let g = Name::fresh();
    let guard = |p: Pattern| Pattern::compound(Pattern::Protected(g.clone()), p);
    let body = Process::par(
        Process::case(guard(probe), continuation),
        Process::case(guard(enc_term(&norm(scrutinee))), Process::Null),
    );
    Process::restrict(g, body)
}

fn enc_proc(p: &SpiProcess) -> Process {
    match p {
        SpiProcess::Null => Process::Null,
        SpiProcess::Ok => Process::Success,
        SpiProcess::Par(l, r) => Process::par(enc_proc(l), enc_proc(r)),
        SpiProcess::Replicate(b) => Process::replicate(enc_proc(b)),
        SpiProcess::Restrict(n, b) => Process::restrict(n.clone(), enc_proc(b)),
        SpiProcess::Input(m, x, b) => {
            // A binder spelled like an identifier of its own channel would
            // leave the pattern ill-formed; rename it out of the way.
            let (x, body) = if term_idents(m).contains(x) {
                let fresh = Name::fresh();
                let mut swap = BTreeMap::new();
                swap.insert(x.clone(), SpiTerm::Var(fresh.clone()));
                (fresh, subst_spi(&swap, b))
            } else {
                (x.clone(), (**b).clone())
            };
            Process::case(
                Pattern::compound(
                    Pattern::compound(enc_term(&norm(m)), Pattern::Binding(x)),
                    Pattern::Variable(hash_name()),
                ),
                enc_proc(&body),
            )
        }
        SpiProcess::Output(m, n, b) => Process::case(
            Pattern::compound(
                Pattern::compound(enc_term(&norm(m)), enc_term(&norm(n))),
                Pattern::Binding(Name::fresh()),
            ),
            enc_proc(b),
        ),
        SpiProcess::MatchEq(m, n, b) => {
            gadget(enc_term(&norm(m)), enc_proc(b), n)
        }
        SpiProcess::SplitPair(x, y, m, b) => {
            let probe = Pattern::compound(
                Pattern::compound(Pattern::Protected(tag("pair")), Pattern::Binding(x.clone())),
                Pattern::Binding(y.clone()),
            );
            gadget(probe, enc_proc(b), m)
        }
        SpiProcess::CaseDecrypt(m, x, key, b) => {
            let (x, body) = if term_idents(key).contains(x) {
                let fresh = Name::fresh();
                let mut swap = BTreeMap::new();
                swap.insert(x.clone(), SpiTerm::Var(fresh.clone()));
                (fresh, subst_spi(&swap, b))
            } else {
                (x.clone(), (**b).clone())
            };
            let probe = Pattern::compound(
                Pattern::compound(Pattern::Protected(tag("encr")), Pattern::Binding(x)),
                enc_term(&norm(key)),
            );
            gadget(probe, enc_proc(&body), m)
        }
        SpiProcess::CaseInt(m, zero, x, suc) => {
            let g = Name::fresh();
            let guard = |p: Pattern| Pattern::compound(Pattern::Protected(g.clone()), p);
            let zero_probe = Pattern::Protected(tag("0"));
            let suc_probe = Pattern::compound(
                Pattern::Protected(tag("suc")),
                Pattern::Binding(x.clone()),
            );
            let body = Process::par(
                Process::case(guard(zero_probe), enc_proc(zero)),
                Process::par(
                    Process::case(guard(suc_probe), enc_proc(suc)),
                    Process::case(guard(enc_term(&norm(m))), Process::Null),
                ),
            );
            Process::restrict(g, body)
        }
    }
}

/// Raw translation without the reserved-name check; dependable only as a
/// structural fingerprint (reduct deduplication), never for running.
pub(crate) fn encode_proc_raw(p: &SpiProcess) -> Process {
    enc_proc(p)
}

/// Translates a process into the pattern calculus.
///
/// Rejects programs that mention a reserved tag name or bind the same
/// variable twice in one pair split; either would let the result's
/// patterns collide with the translation's own machinery.
pub fn encode_spi_proc(p: &SpiProcess) -> Result<Process, SpiEncodeError> {
    validate(p)?;
    Ok(enc_proc(p))
}
