//! Linear runs: one interaction per step, chosen by a seeded generator or
//! replayed from a recorded trace. State ids are keyed by canonical form,
//! so revisiting a state reuses its id and two runs with the same seed
//! produce the same trace byte for byte.

use cpc_core::{canonicalize, redexes, CanonicalForm, Pattern, Process, Substitution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// One scheduled interaction: the two patterns that matched and the
/// substitutions applied to their bodies, plus the id of the state the step
/// produced.
pub struct TraceEvent {
    pub step: usize,
    pub left: Pattern,
    pub right: Pattern,
    pub left_subst: Substitution,
    pub right_subst: Substitution,
    pub state: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RunOutcome {
    /// No interaction was available.
    Deadlock,
    /// The step bound was reached with interactions still available.
    StepBound,
}

pub struct Trace {
    /// Distinct states in order of first visit; id 0 is the start state.
    pub states: Vec<Process>,
    pub events: Vec<TraceEvent>,
    pub outcome: RunOutcome,
}

impl Trace {
    /// State ids in visit order, the start state first.
    pub fn state_sequence(&self) -> Vec<usize> {
        let mut seq = vec![0];
        seq.extend(self.events.iter().map(|e| e.state));
        seq
    }
}

struct StateTable {
    ids: BTreeMap<CanonicalForm, usize>,
    states: Vec<Process>,
}

impl StateTable {
    fn new(start: &Process) -> StateTable {
        let mut t = StateTable {
            ids: BTreeMap::new(),
            states: Vec::new(),
        };
        t.intern(start);
        t
    }

    fn intern(&mut self, p: &Process) -> usize {
        let key = canonicalize(p);
        *self.ids.entry(key).or_insert_with(|| {
            self.states.push(p.clone());
            self.states.len() - 1
        })
    }
}

/// Runs up to `steps` interactions, picking uniformly at random with a
/// stream seeded from `seed`.
pub fn random_run(p: &Process, steps: usize, seed: u64) -> Trace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_with(p, steps, |options| rng.gen_range(0..options))
}

fn run_with<F>(p: &Process, steps: usize, mut pick: F) -> Trace
where
    F: FnMut(usize) -> usize,
{
    let mut table = StateTable::new(p);
    let mut events = Vec::new();
    let mut current = p.clone();
    let outcome = loop {
        let options = redexes(&current);
        if options.is_empty() {
            break RunOutcome::Deadlock;
        }
        if events.len() == steps {
            break RunOutcome::StepBound;
        }
        let r = &options[pick(options.len())];
        current = r.reduct.clone();
        let state = table.intern(&current);
        events.push(TraceEvent {
            step: events.len() + 1,
            left: r.left_pattern.clone(),
            right: r.right_pattern.clone(),
            left_subst: r.left_subst.clone(),
            right_subst: r.right_subst.clone(),
            state,
        });
    };
    Trace {
        states: table.states,
        events,
        outcome,
    }
}

/// Every maximal finite path through an explored graph, as (steps, terminal
/// state id) pairs. Only fully expanded dead ends count as terminals, so on
/// a truncated graph the result understates; paths that revisit a state are
/// cycles and are dropped rather than unrolled.
pub fn maximal_paths(g: &cpc_core::StateGraph) -> std::collections::BTreeSet<(usize, usize)> {
    let mut adj = vec![Vec::new(); g.states.len()];
    for &(s, t) in &g.edges {
        adj[s].push(t);
    }
    let mut out = std::collections::BTreeSet::new();
    let mut on_path = vec![false; g.states.len()];
    fn dfs(
        v: usize,
        depth: usize,
        adj: &[Vec<usize>],
        degree: &[Option<usize>],
        on_path: &mut [bool],
        out: &mut std::collections::BTreeSet<(usize, usize)>,
    ) {
        if degree[v] == Some(0) {
            out.insert((depth, v));
            return;
        }
        on_path[v] = true;
        for &w in &adj[v] {
            if !on_path[w] {
                dfs(w, depth + 1, adj, degree, on_path, out);
            }
        }
        on_path[v] = false;
    }
    if !g.states.is_empty() {
        dfs(0, 0, &adj, &g.out_degree, &mut on_path, &mut out);
    }
    out
}

/// Re-executes a recorded trace against its start state: at every event
/// some currently available interaction must land in the recorded state.
/// Returns the step number of the first event that cannot be matched.
pub fn replay(trace: &Trace) -> Result<(), usize> {
    let mut current = trace.states[0].clone();
    for e in &trace.events {
        let want = canonicalize(&trace.states[e.state]);
        let next = redexes(&current)
            .into_iter()
            .map(|r| r.reduct)
            .find(|q| canonicalize(q) == want);
        match next {
            Some(q) => current = q,
            None => return Err(e.step),
        }
    }
    Ok(())
}
