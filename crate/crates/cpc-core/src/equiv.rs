//! Pattern complements, the interrogation gadgets built from them, and a
//! bounded bisimulation game over the labelled semantics.
//!
//! The gadget half turns a pattern into a process that cross-examines an
//! unknown partner: the partner's pattern is consumed by the complement, and
//! a battery of follow-up tests checks every equality the exchange left
//! open. Success means a `w` barb becomes reachable and the failure name
//! never does, which happens exactly against compatible partners.
//!
//! The game half plays challenge against reply to a depth bound. A challenge
//! is a transition plus an instantiation of its binders; a reply is a
//! transition of the other process whose pattern is compatible under that
//! instantiation. Failures come back as a replayable witness.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::canon::{canonicalize, CanonicalForm};
use crate::compat::compat_subst;
use crate::lts::{joint_key, transitions, Label, Transition};
use crate::name::Name;
use crate::pattern::Pattern;
use crate::process::{rename_free_name, subst_proc, Process};
use crate::reduce::{barbs, explore};
use crate::subst::Substitution;

/// The reserved failure name `_f`.
///
/// Every gadget raises the same name on a violated probe, so one
/// reachability check covers all failure modes of a composed test. Surface
/// programs must not use it.
pub fn failure_name() -> Name {
    Name::surface("_f")
}

/// The complement of a pattern relative to a set of known names: a pattern
/// the original unifies with, plus the equality obligations that
/// unification leaves open.
///
/// `free_expect` pairs each minted binder with the known name it must
/// receive; `rest_expect` pairs each minted binder with the hidden name it
/// stands in for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specification {
    pub complementary: Pattern,
    pub free_expect: BTreeSet<(Name, Name)>,
    pub rest_expect: BTreeSet<(Name, Name)>,
}

/// Splits a pattern into its communication complement.
///
/// Binders flip into variables of the same name; a known name hides behind
/// a minted binder recorded in `free_expect`; an unknown name likewise in
/// `rest_expect`; a protected name must be matched verbatim. Minted binders
/// are fresh, so the two obligation sets stay disjoint by construction.
pub fn spec(known: &BTreeSet<Name>, p: &Pattern) -> Specification {
    match p {
        Pattern::Binding(x) => Specification {
            complementary: Pattern::Variable(x.clone()),
            free_expect: BTreeSet::new(),
            rest_expect: BTreeSet::new(),
        },
        Pattern::Variable(n) => {
            let x = Name::fresh();
            let mut free_expect = BTreeSet::new();
            let mut rest_expect = BTreeSet::new();
            if known.contains(n) {
                free_expect.insert((x.clone(), n.clone()));
            } else {
                rest_expect.insert((x.clone(), n.clone()));
            }
            Specification {
                complementary: Pattern::Binding(x),
                free_expect,
                rest_expect,
            }
        }
        Pattern::Protected(n) => Specification {
            complementary: Pattern::Protected(n.clone()),
            free_expect: BTreeSet::new(),
            rest_expect: BTreeSet::new(),
        },
        Pattern::Compound(l, r) => {
            let sl = spec(known, l);
            let sr = spec(known, r);
            let mut free_expect = sl.free_expect;
            free_expect.extend(sr.free_expect);
            let mut rest_expect = sl.rest_expect;
            rest_expect.extend(sr.rest_expect);
            Specification {
                complementary: Pattern::compound(sl.complementary, sr.complementary),
                free_expect,
                rest_expect,
            }
        }
    }
}

fn var(n: &Name) -> Pattern {
    Pattern::Variable(n.clone())
}

fn prot(n: &Name) -> Pattern {
    Pattern::Protected(n.clone())
}

fn pair(l: Pattern, r: Pattern) -> Pattern {
    Pattern::compound(l, r)
}

fn triple(a: Pattern, b: Pattern, c: Pattern) -> Pattern {
    pair(pair(a, b), c)
}

fn bind_fresh() -> Pattern {
    Pattern::Binding(Name::fresh())
}

/// A case that only exposes its pattern.
fn done(p: Pattern) -> Process {
    Process::case(p, Process::Null)
}

/// Raises the failure name. The trailing binder keeps two raised failures
/// from unifying with each other.
fn fail_thread() -> Process {
    done(pair(prot(&failure_name()), bind_fresh()))
}

/// A one-shot probe that `x` and `y` received names related the way `m` and
/// `n` are: equal when `m = n`, distinct otherwise.
///
/// The `m = n` shape hides `w` behind the probe; the `m ≠ n` shape exposes
/// `w` at once and raises the failure name when the probe fires anyway.
/// Either way `w` stays reachable without a failure exactly when
/// `m = n ⇔ θ(x) = θ(y)` for the names `θ` delivered.
pub fn build_check(x: &Name, m: &Name, y: &Name, n: &Name, w: &Name) -> Process {
    let z = Name::fresh();
    if m == n {
        Process::restrict(
            z.clone(),
            Process::par(
                done(pair(prot(&z), prot(x))),
                Process::case(pair(prot(&z), prot(y)), done(prot(w))),
            ),
        )
    } else {
        Process::par(
            done(prot(w)),
            Process::restrict(
                z.clone(),
                Process::par(
                    done(pair(prot(&z), prot(x))),
                    Process::case(pair(prot(&z), prot(y)), fail_thread()),
                ),
            ),
        )
    }
}

/// Succeeds exactly when `x` received the known name `n`: the hidden
/// channel pairs a protected `n` against whatever `x` holds.
pub fn build_free_test(x: &Name, n: &Name, w: &Name) -> Process {
    let m = Name::fresh();
    Process::restrict(
        m.clone(),
        Process::par(
            Process::case(pair(prot(&m), prot(n)), done(prot(w))),
            done(pair(prot(&m), var(x))),
        ),
    )
}

/// Succeeds exactly when `x` received a name outside `known`.
///
/// A compound is caught by the two-binder consumer and each known name by
/// its own consumer, raising the failure name; a name outside `known`
/// matches no consumer and leaves the immediate `w` barb unchallenged.
pub fn build_rest_test(known: &BTreeSet<Name>, x: &Name, w: &Name) -> Process {
    let m = Name::fresh();
    let z = Name::fresh();
    let mut threads = vec![
        done(triple(prot(&m), var(x), var(&z))),
        Process::case(
            triple(prot(&m), pair(bind_fresh(), bind_fresh()), bind_fresh()),
            fail_thread(),
        ),
    ];
    for n in known {
        threads.push(Process::case(
            triple(prot(&m), prot(n), bind_fresh()),
            fail_thread(),
        ));
    }
    Process::par(
        done(prot(w)),
        Process::restrict(m, Process::restrict(z, Process::par_all(threads))),
    )
}

/// Succeeds exactly when `x`'s received name relates to every binder in
/// `rest` the way `m` relates to that binder's hidden name: one check per
/// pair, chained behind hidden gates so `w` appears only once all agree.
pub fn build_equality_test(
    rest: &BTreeSet<(Name, Name)>,
    x: &Name,
    m: &Name,
    w: &Name,
) -> Process {
    let gates: Vec<(&(Name, Name), Name)> = rest.iter().map(|p| (p, Name::fresh())).collect();
    let mut chain = done(prot(w));
    for (_, g) in gates.iter().rev() {
        chain = Process::case(prot(g), chain);
    }
    let mut threads = vec![chain];
    for ((y, n), g) in &gates {
        threads.push(build_check(x, m, y, n, g));
    }
    Process::restrict_all(
        gates.iter().map(|(_, g)| g.clone()),
        Process::par_all(threads),
    )
}

/// The joint test battery for a specification's obligations: every
/// component test reports through its own hidden gate, and the success head
/// `w` applied to the hidden-name binders appears once every gate has
/// reported.
fn build_tests(
    known: &BTreeSet<Name>,
    free_expect: &BTreeSet<(Name, Name)>,
    rest_expect: &BTreeSet<(Name, Name)>,
    w: &Name,
) -> Process {
    let eq_gates: Vec<(&(Name, Name), Name)> =
        rest_expect.iter().map(|p| (p, Name::fresh())).collect();
    let mut component: BTreeMap<&Name, (Name, Option<&Name>)> = BTreeMap::new();
    for (y, n) in free_expect {
        component.insert(y, (Name::fresh(), Some(n)));
    }
    for (y, _) in rest_expect {
        component.insert(y, (Name::fresh(), None));
    }

    let mut head = prot(w);
    for (x, _) in rest_expect {
        head = pair(head, var(x));
    }
    let mut chain = done(head);
    for (gate, _) in component.values().rev() {
        chain = Process::case(prot(gate), chain);
    }
    for (_, g) in eq_gates.iter().rev() {
        chain = Process::case(prot(g), chain);
    }

    let mut threads = vec![chain];
    for ((x, n), g) in &eq_gates {
        threads.push(build_equality_test(rest_expect, x, n, g));
    }
    for (y, (gate, expected)) in &component {
        match expected {
            Some(n) => threads.push(build_free_test(y, n, gate)),
            None => threads.push(build_rest_test(known, y, gate)),
        }
    }

    let all_gates = eq_gates
        .iter()
        .map(|(_, g)| g.clone())
        .chain(component.values().map(|(g, _)| g.clone()));
    Process::restrict_all(all_gates, Process::par_all(threads))
}

/// A pattern's interrogation process together with the names that report
/// its verdict.
#[derive(Clone, Debug)]
pub struct CharContext {
    pub process: Process,
    pub success: Name,
    pub failure: Name,
}

/// Builds the process that consumes a partner through `p`'s complement and
/// then tests every equality obligation the exchange left open. Run it in
/// parallel with a partner and watch for `success` and `failure` barbs.
pub fn char_context(known: &BTreeSet<Name>, p: &Pattern) -> CharContext {
    let s = spec(known, p);
    let w = Name::fresh();
    let tests = build_tests(known, &s.free_expect, &s.rest_expect, &w);
    CharContext {
        process: Process::case(s.complementary, tests),
        success: w,
        failure: failure_name(),
    }
}

/// `char_context` when only the process is needed.
pub fn char_proc(known: &BTreeSet<Name>, p: &Pattern) -> Process {
    char_context(known, p).process
}

/// Whether a `success` barb is reachable within `depth` steps while no
/// explored state shows a `failure` barb.
pub fn succeeds_with(p: &Process, success: &Name, failure: &Name, depth: usize) -> bool {
    let g = explore(p, depth);
    let mut saw = false;
    for s in &g.states {
        for b in barbs(s) {
            if b.names.contains(failure) {
                return false;
            }
            if b.names.contains(success) {
                saw = true;
            }
        }
    }
    saw
}

/// Knobs for the bounded bisimulation game.
///
/// `name_pool` is extended with the free names of both processes and at
/// least two extra fresh names before play, so injective-renaming
/// distinctions survive the finitization. `instantiation_depth` bounds the
/// compound nesting of challenge instantiations; 0 means bare names.
#[derive(Clone, Debug)]
pub struct BisimConfig {
    pub depth: usize,
    pub name_pool: BTreeSet<Name>,
    pub instantiation_depth: usize,
}

impl BisimConfig {
    pub fn new(depth: usize) -> BisimConfig {
        BisimConfig {
            depth,
            name_pool: BTreeSet::new(),
            instantiation_depth: 1,
        }
    }
}

/// Which process issued a challenge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The reply half of one game exchange.
#[derive(Clone, Debug)]
pub struct WitnessReply {
    pub label: Label,
    pub target: Process,
    pub subst: Substitution,
}

/// One game exchange: a challenge transition, the binder instantiation it
/// was played under, and the reply the search descended through. The final
/// step of a witness has no reply: nothing compatible existed.
#[derive(Clone, Debug)]
pub struct WitnessStep {
    pub side: Side,
    pub label: Label,
    pub instantiation: Substitution,
    pub challenge_target: Process,
    pub reply: Option<WitnessReply>,
}

/// A replayable refutation: apply `pre_subst` to both processes, then walk
/// the trace. Every challenge and reply is a genuine transition, every
/// reply is compatible as recorded, and the last challenge has no
/// compatible reply at all.
#[derive(Clone, Debug)]
pub struct DistinguishingWitness {
    pub pre_subst: Substitution,
    pub trace: Vec<WitnessStep>,
    pub verdict: String,
}

/// Outcome of the bounded game.
#[derive(Clone, Debug)]
pub enum BisimOutcome {
    BisimilarToDepth(usize),
    Distinguished(DistinguishingWitness),
}

impl BisimOutcome {
    pub fn is_bisimilar(&self) -> bool {
        matches!(self, BisimOutcome::BisimilarToDepth(_))
    }
}

/// Substitution pre-rounds are cut off past this many assignments.
const PRE_ROUND_CAP: usize = 20_000;

struct GameCtx {
    /// Candidate instantiation images: communicable patterns over the pool.
    images: Vec<Pattern>,
    /// Canonical pairs that already survived to a given depth.
    memo: BTreeMap<(CanonicalForm, CanonicalForm), usize>,
    /// Pairs on the current exploration path; revisiting one is a loop
    /// through replication and counts as surviving.
    inflight: BTreeSet<(CanonicalForm, CanonicalForm)>,
}

/// Plays the challenge-reply game to `cfg.depth` after one round of
/// pool-substitutions over the free names of both sides.
pub fn bounded_bisim(p: &Process, q: &Process, cfg: &BisimConfig) -> BisimOutcome {
    let mut free = p.free_names();
    free.extend(q.free_names());
    let mut pool = cfg.name_pool.clone();
    pool.extend(free.iter().cloned());
    while pool.difference(&free).count() < 2 {
        pool.insert(Name::fresh());
    }
    let mut ctx = GameCtx {
        images: pool_patterns(&pool, cfg.instantiation_depth),
        memo: BTreeMap::new(),
        inflight: BTreeSet::new(),
    };
    let frees: Vec<Name> = free.into_iter().collect();
    let pool_vec: Vec<Name> = pool.into_iter().collect();
    for theta in pool_assignments(&frees, &pool_vec) {
        let tp = subst_proc(&theta, p);
        let tq = subst_proc(&theta, q);
        if let Err(trace) = game(&tp, &tq, cfg.depth, &mut ctx) {
            let verdict = describe(&trace);
            return BisimOutcome::Distinguished(DistinguishingWitness {
                pre_subst: theta,
                trace,
                verdict,
            });
        }
    }
    BisimOutcome::BisimilarToDepth(cfg.depth)
}

/// All communicable patterns over the pool with compound nesting at most
/// `depth`.
fn pool_patterns(pool: &BTreeSet<Name>, depth: usize) -> Vec<Pattern> {
    let mut acc: BTreeSet<Pattern> = pool.iter().map(var).collect();
    for _ in 0..depth {
        let prev: Vec<Pattern> = acc.iter().cloned().collect();
        for l in &prev {
            for r in &prev {
                acc.insert(pair(l.clone(), r.clone()));
            }
        }
    }
    acc.into_iter().collect()
}

/// Name-for-name assignments of the free names into the pool, identity
/// first, in a deterministic order, cut off at the pre-round cap.
fn pool_assignments(frees: &[Name], pool: &[Name]) -> Vec<Substitution> {
    let mut out = vec![Substitution::new()];
    if frees.is_empty() || pool.is_empty() {
        return out;
    }
    let total = (pool.len() as u128)
        .saturating_pow(frees.len() as u32)
        .min(PRE_ROUND_CAP as u128) as usize;
    for idx in 0..total {
        let mut k = idx;
        let mut pairs = Vec::with_capacity(frees.len());
        let mut identity = true;
        for f in frees {
            let image = &pool[k % pool.len()];
            k /= pool.len();
            identity &= image == f;
            pairs.push((f.clone(), var(image)));
        }
        if identity {
            continue;
        }
        out.push(Substitution::from_pairs(pairs).expect("name images are communicable"));
    }
    out
}

/// One game node. `Ok` means every challenge within `depth` was answered;
/// `Err` carries the failing exchange sequence, deepest failure last.
fn game(
    p: &Process,
    q: &Process,
    depth: usize,
    ctx: &mut GameCtx,
) -> Result<(), Vec<WitnessStep>> {
    if depth == 0 {
        return Ok(());
    }
    let key = (canonicalize(p), canonicalize(q));
    if key.0 == key.1 {
        return Ok(());
    }
    if ctx.memo.get(&key).is_some_and(|d| *d >= depth) {
        return Ok(());
    }
    if !ctx.inflight.insert(key.clone()) {
        return Ok(());
    }
    let result = play(p, q, depth, ctx);
    ctx.inflight.remove(&key);
    if result.is_ok() {
        let entry = ctx.memo.entry(key).or_insert(0);
        if *entry < depth {
            *entry = depth;
        }
    }
    result
}

fn play(
    p: &Process,
    q: &Process,
    depth: usize,
    ctx: &mut GameCtx,
) -> Result<(), Vec<WitnessStep>> {
    for side in [Side::Left, Side::Right] {
        let (challenger, defender) = match side {
            Side::Left => (p, q),
            Side::Right => (q, p),
        };
        let def_trans = transitions(defender);
        for t in transitions(challenger) {
            let (label, target) = normalize_challenge(&t.label, &t.target);
            let binders = match &label {
                Label::Tau => BTreeSet::new(),
                Label::Out { pattern, .. } => pattern.binding_names(),
            };
            for sigma in instantiations(&binders, &ctx.images) {
                let challenge_next = subst_proc(&sigma, &target);
                let mut answered = false;
                let mut first_fail: Option<(WitnessReply, Vec<WitnessStep>)> = None;
                for (rl, rt, rho) in reply_candidates(&def_trans, &label, &sigma) {
                    let defence_next = subst_proc(&rho, &rt);
                    match game(&challenge_next, &defence_next, depth - 1, ctx) {
                        Ok(()) => {
                            answered = true;
                            break;
                        }
                        Err(tr) => {
                            if first_fail.is_none() {
                                first_fail = Some((
                                    WitnessReply {
                                        label: rl,
                                        target: rt,
                                        subst: rho,
                                    },
                                    tr,
                                ));
                            }
                        }
                    }
                }
                if !answered {
                    let (reply, mut rest) = match first_fail {
                        Some((r, tr)) => (Some(r), tr),
                        None => (None, Vec::new()),
                    };
                    let mut trace = Vec::with_capacity(rest.len() + 1);
                    trace.push(WitnessStep {
                        side,
                        label,
                        instantiation: sigma,
                        challenge_target: target,
                        reply,
                    });
                    trace.append(&mut rest);
                    return Err(trace);
                }
            }
        }
    }
    Ok(())
}

/// Renames a transition's bound material (extruded names, then pattern
/// binders) to globally fresh names across label and target, discharging
/// every freshness side condition of the game.
fn normalize_challenge(label: &Label, target: &Process) -> (Label, Process) {
    match label {
        Label::Tau => (Label::Tau, target.clone()),
        Label::Out { extruded, pattern } => {
            let mut pat = pattern.clone();
            let mut tgt = target.clone();
            let mut ext = BTreeSet::new();
            for n in extruded {
                let f = Name::fresh();
                let mut m = BTreeMap::new();
                m.insert(n.clone(), f.clone());
                pat = pat.rename_all(&m);
                tgt = rename_free_name(&tgt, n, &f);
                ext.insert(f);
            }
            for b in pat.binders_in_order() {
                let f = Name::fresh();
                let mut m = BTreeMap::new();
                m.insert(b.clone(), f.clone());
                pat = pat.rename_binders(&m);
                tgt = rename_free_name(&tgt, &b, &f);
            }
            (
                Label::Out {
                    extruded: ext,
                    pattern: pat,
                },
                tgt,
            )
        }
    }
}

/// All instantiations of the binders drawn from the image set.
fn instantiations(binders: &BTreeSet<Name>, images: &[Pattern]) -> Vec<Substitution> {
    let mut rows: Vec<Vec<(Name, Pattern)>> = vec![Vec::new()];
    for b in binders {
        let mut next = Vec::with_capacity(rows.len() * images.len());
        for row in &rows {
            for img in images {
                let mut extended = row.clone();
                extended.push((b.clone(), img.clone()));
                next.push(extended);
            }
        }
        rows = next;
    }
    rows.into_iter()
        .map(|row| Substitution::from_pairs(row).expect("pool images are communicable"))
        .collect()
}

/// Defender moves answering a challenge: same label kind, extruded sets
/// aligned by some bijection onto the challenge's, and a pattern compatible
/// under the challenge instantiation. Returned labels and targets are
/// renamed onto the challenge's extruded names.
fn reply_candidates(
    def_trans: &[Transition],
    label: &Label,
    sigma: &Substitution,
) -> Vec<(Label, Process, Substitution)> {
    let mut out = Vec::new();
    match label {
        Label::Tau => {
            for t in def_trans {
                if t.label.is_tau() {
                    out.push((Label::Tau, t.target.clone(), Substitution::new()));
                }
            }
        }
        Label::Out { extruded, pattern } => {
            let want: Vec<Name> = extruded.iter().cloned().collect();
            for t in def_trans {
                let Label::Out { extruded: de, .. } = &t.label else {
                    continue;
                };
                if de.len() != want.len() {
                    continue;
                }
                let (dl, dt) = normalize_challenge(&t.label, &t.target);
                let Label::Out {
                    extruded: dext,
                    pattern: dpat,
                } = dl
                else {
                    unreachable!("normalization preserves the label kind");
                };
                let dev: Vec<Name> = dext.iter().cloned().collect();
                for perm in permutations(&want) {
                    let mut pat = dpat.clone();
                    let mut tgt = dt.clone();
                    for (from, to) in dev.iter().zip(perm.iter()) {
                        let mut m = BTreeMap::new();
                        m.insert(from.clone(), to.clone());
                        pat = pat.rename_all(&m);
                        tgt = rename_free_name(&tgt, from, to);
                    }
                    if let Some(rho) = compat_subst(pattern, sigma, &pat) {
                        out.push((
                            Label::Out {
                                extruded: extruded.clone(),
                                pattern: pat,
                            },
                            tgt,
                            rho,
                        ));
                    }
                }
            }
        }
    }
    out
}

fn permutations(names: &[Name]) -> Vec<Vec<Name>> {
    if names.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, n) in names.iter().enumerate() {
        let mut rest: Vec<Name> = names.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, n.clone());
            out.push(tail);
        }
    }
    out
}

fn describe(trace: &[WitnessStep]) -> String {
    let last = trace.last().expect("a witness has at least one step");
    let side = match last.side {
        Side::Left => "left",
        Side::Right => "right",
    };
    let moves = trace.len() - 1;
    match &last.label {
        Label::Tau => format!(
            "after {moves} exchanged moves the {side} process takes an internal step the other cannot answer"
        ),
        Label::Out { .. } => format!(
            "after {moves} exchanged moves the {side} process offers a pattern with no compatible reply"
        ),
    }
}

/// Replays a witness against the original processes: every challenge and
/// reply must be a genuine transition, every recorded reply compatible, and
/// the final challenge must have no compatible reply at all.
pub fn verify_witness(p: &Process, q: &Process, w: &DistinguishingWitness) -> bool {
    if w.trace.is_empty() {
        return false;
    }
    let mut left = subst_proc(&w.pre_subst, p);
    let mut right = subst_proc(&w.pre_subst, q);
    for (i, step) in w.trace.iter().enumerate() {
        let last = i + 1 == w.trace.len();
        let (challenger, defender) = match step.side {
            Side::Left => (&left, &right),
            Side::Right => (&right, &left),
        };
        let ck = joint_key(&step.label, &step.challenge_target);
        if !transitions(challenger)
            .iter()
            .any(|t| joint_key(&t.label, &t.target) == ck)
        {
            return false;
        }
        let binders = match &step.label {
            Label::Tau => BTreeSet::new(),
            Label::Out { pattern, .. } => pattern.binding_names(),
        };
        if step.instantiation.domain() != binders {
            return false;
        }
        match (&step.reply, last) {
            (Some(_), true) | (None, false) => return false,
            (Some(reply), false) => {
                let rk = joint_key(&reply.label, &reply.target);
                if !transitions(defender)
                    .iter()
                    .any(|t| joint_key(&t.label, &t.target) == rk)
                {
                    return false;
                }
                match (&step.label, &reply.label) {
                    (Label::Tau, Label::Tau) => {
                        if !reply.subst.is_empty() {
                            return false;
                        }
                    }
                    (
                        Label::Out {
                            extruded: ce,
                            pattern: cp,
                        },
                        Label::Out {
                            extruded: re,
                            pattern: rp,
                        },
                    ) => {
                        if ce != re {
                            return false;
                        }
                        match compat_subst(cp, &step.instantiation, rp) {
                            Some(rho) if rho == reply.subst => {}
                            _ => return false,
                        }
                    }
                    _ => return false,
                }
                let challenge_next = subst_proc(&step.instantiation, &step.challenge_target);
                let defence_next = subst_proc(&reply.subst, &reply.target);
                match step.side {
                    Side::Left => {
                        left = challenge_next;
                        right = defence_next;
                    }
                    Side::Right => {
                        right = challenge_next;
                        left = defence_next;
                    }
                }
            }
            (None, true) => {
                let def_trans = transitions(defender);
                return reply_candidates(&def_trans, &step.label, &step.instantiation).is_empty();
            }
        }
    }
    false
}
