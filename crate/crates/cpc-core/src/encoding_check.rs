//! A differential harness that validates a translation step by step.
//!
//! Both source calculi come with their own interpreters, so a translation
//! can be tested instead of trusted: walk the source state space to a
//! bound and, at every state, compare the source's one-step reducts with
//! the translated process's one-step reducts. Four clauses are checked,
//! one per way a translation can silently go wrong: dropped steps, added
//! steps, disagreeing success, and introduced divergence.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::canon::{canonicalize, CanonicalForm};
use crate::linda::{encode_linda, linda_has_ok, linda_reduce, LindaProcess};
use crate::process::Process;
use crate::reduce::{explore, prune_dead, reductions, succeeds};
use crate::spi::{encode_proc_raw, encode_spi_proc, spi_has_ok, spi_reduce, SpiEncodeError, SpiProcess};

/// Keeps failure lists readable when a translation is badly broken.
const FAILURE_CAP: usize = 8;

/// The verdict of one harness run.
#[derive(Clone, Debug)]
pub struct EncodingReport {
    /// The step bound the walk was run to.
    pub steps: usize,
    /// Source states whose outgoing steps were compared.
    pub states_checked: usize,
    /// Every source step is matched by an encoded step landing, after
    /// dead-thread pruning, on the encoded reduct.
    pub forward_ok: bool,
    /// Every encoded step maps back to a source step the same way.
    pub backward_ok: bool,
    /// The source reaches success within the bound exactly when the
    /// encoding does.
    pub success_ok: bool,
    /// If the encoding can run for the full bound, so can the source.
    pub divergence_ok: bool,
    /// Human-readable descriptions of the first few violations.
    pub failures: Vec<String>,
}

impl EncodingReport {
    pub fn valid(&self) -> bool {
        self.forward_ok && self.backward_ok && self.success_ok && self.divergence_ok
    }
}

/// Longest-run probe: whether the recorded graph admits a run of at least
/// `bound` steps from state 0. A reachable cycle means runs of every
/// length.
fn has_long_run(state_count: usize, edges: &[(usize, usize)], bound: usize) -> bool {
    if bound == 0 {
        return true;
    }
    let mut succ: Vec<Vec<usize>> = Vec::new();
    succ.resize(state_count, Vec::new());
    for (a, b) in edges {
        succ[*a].push(*b);
    }
    // None in `memo` marks a state on the current path; a hit is a cycle.
    #[derive(Clone, PartialEq)]
    enum Seen {
        No,
        OnPath,
        Longest(Option<usize>),
    }
    fn walk(v: usize, succ: &[Vec<usize>], memo: &mut Vec<Seen>) -> Option<usize> {
        match memo[v] {
            Seen::OnPath => return None,
            Seen::Longest(k) => return k,
            Seen::No => {}
        }
        memo[v] = Seen::OnPath;
        let mut best = Some(0usize);
        for w in &succ[v] {
            match walk(*w, succ, memo) {
                None => {
                    best = None;
                    break;
                }
                Some(k) => {
                    best = best.map(|b| b.max(k + 1));
                }
            }
        }
        memo[v] = Seen::Longest(best);
        best
    }
    let mut memo = Vec::new();
    memo.resize(state_count, Seen::No);
    match walk(0, &succ, &mut memo) {
        None => true,
        Some(k) => k >= bound,
    }
}

/// Walks the source state space to `steps` and compares each state's
/// outgoing behaviour against its translation's.
fn check<S: Clone>(
    root: S,
    steps: usize,
    reducts: impl Fn(&S) -> Vec<S>,
    encode: impl Fn(&S) -> Process,
    has_ok: impl Fn(&S) -> bool,
) -> EncodingReport {
    let mut states: Vec<S> = alloc::vec![root];
    let mut levels: Vec<usize> = alloc::vec![0];
    let mut index: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    index.insert(canonicalize(&encode(&states[0])), 0);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut source_succeeds = false;

    let mut forward_ok = true;
    let mut backward_ok = true;
    let mut failures: Vec<String> = Vec::new();
    let mut states_checked = 0usize;

    let mut cursor = 0usize;
    while cursor < states.len() {
        let state = states[cursor].clone();
        let level = levels[cursor];
        if has_ok(&state) {
            source_succeeds = true;
        }
        if level >= steps {
            cursor += 1;
            continue;
        }
        states_checked += 1;

        let source_next = reducts(&state);
        let mut source_keys: BTreeSet<CanonicalForm> = BTreeSet::new();
        for next in &source_next {
            let key = canonicalize(&encode(next));
            let target = *index.entry(key.clone()).or_insert_with(|| {
                states.push(next.clone());
                levels.push(level + 1);
                states.len() - 1
            });
            edges.push((cursor, target));
            source_keys.insert(key);
        }

        let encoded = encode(&state);
        let encoded_keys: BTreeSet<CanonicalForm> = reductions(&encoded)
            .iter()
            .map(|r| canonicalize(&prune_dead(r)))
            .collect();

        for missing in source_keys.difference(&encoded_keys) {
            forward_ok = false;
            if failures.len() < FAILURE_CAP {
                failures.push(format!(
                    "state {cursor} (depth {level}): a source step has no encoded counterpart ({} source vs {} encoded); unmatched target {missing:?}",
                    source_keys.len(),
                    encoded_keys.len(),
                ));
            }
        }
        for extra in encoded_keys.difference(&source_keys) {
            backward_ok = false;
            if failures.len() < FAILURE_CAP {
                failures.push(format!(
                    "state {cursor} (depth {level}): an encoded step has no source counterpart ({} source vs {} encoded); unmatched target {extra:?}",
                    source_keys.len(),
                    encoded_keys.len(),
                ));
            }
        }
        cursor += 1;
    }

    let encoded_root = encode(&states[0]);
    let encoded_succeeds = succeeds(&encoded_root, steps);
    let success_ok = source_succeeds == encoded_succeeds;
    if !success_ok && failures.len() < FAILURE_CAP {
        failures.push(format!(
            "success disagrees within {steps} steps: source {source_succeeds}, encoding {encoded_succeeds}",
        ));
    }

    let graph = explore(&encoded_root, steps);
    let encoded_diverges = has_long_run(graph.states.len(), &graph.edges, steps);
    let source_diverges = has_long_run(states.len(), &edges, steps);
    let divergence_ok = !encoded_diverges || source_diverges;
    if !divergence_ok && failures.len() < FAILURE_CAP {
        failures.push(format!(
            "the encoding can run for {steps} steps but the source cannot",
        ));
    }

    EncodingReport {
        steps,
        states_checked,
        forward_ok,
        backward_ok,
        success_ok,
        divergence_ok,
        failures,
    }
}

/// Validates the tuple-space translation on one program.
pub fn check_linda(p: &LindaProcess, steps: usize) -> EncodingReport {
    check(p.clone(), steps, linda_reduce, encode_linda, linda_has_ok)
}

/// Validates the message-term translation on one program. Rejects up front
/// any program the translation itself would reject.
pub fn check_spi(p: &SpiProcess, steps: usize) -> Result<EncodingReport, SpiEncodeError> {
    encode_spi_proc(p)?;
    Ok(check(p.clone(), steps, spi_reduce, encode_proc_raw, spi_has_ok))
}
