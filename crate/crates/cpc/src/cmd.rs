//! Drivers behind the binary's subcommands. Each driver does the whole job
//! and returns the text to print plus the process exit code, so the command
//! surface is testable in-process; only the interactive loop takes handles.
//!
//! Exit codes: 0 = success / bisimilar / valid encoding, 1 = distinguished
//! or invalid encoding (and an undefined unification), 2 = usage or parse
//! error.

use crate::corpus_data;
use crate::parse::{parse_pattern, parse_process};
use crate::parse_linda::parse_linda;
use crate::parse_spi::parse_spi;
use crate::print::{
    print_label, print_linda, print_pattern, print_process, print_spi, print_subst,
    surfaced_process, Style, Surfacer,
};
use crate::run::{maximal_paths, random_run, replay, RunOutcome};
use cpc_core::{
    barbs, bounded_bisim, canonicalize, check_linda, check_spi, corpus, encode_linda,
    encode_spi_proc, explore, min_steps_to_barb, redexes, struct_eq, transitions, unify,
    verify_witness, BisimConfig, BisimOutcome, CanonicalForm, DistinguishingWitness,
    EncodingReport, Label, Name, Process, Side,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dialect {
    Cpc,
    Linda,
    Spi,
}

impl Dialect {
    /// File-extension inference for commands without an explicit flag.
    pub fn from_path(path: &str) -> Dialect {
        if path.ends_with(".linda") {
            Dialect::Linda
        } else if path.ends_with(".spi") {
            Dialect::Spi
        } else {
            Dialect::Cpc
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Dialect::Cpc => "cpc",
            Dialect::Linda => "linda",
            Dialect::Spi => "spi",
        }
    }
}

/// What a driver hands back: finished output and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

fn done(text: String, code: i32) -> Result<Outcome, String> {
    Ok(Outcome { text, code })
}

fn style(unicode: bool) -> Style {
    if unicode {
        Style::Unicode
    } else {
        Style::Ascii
    }
}

fn jout(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

/// `label:line:col: message`.
fn perr(label: &str, e: impl std::fmt::Display) -> String {
    format!("{label}:{e}")
}

fn cpc_term(label: &str, text: &str) -> Result<Process, String> {
    parse_process(text).map_err(|e| perr(label, e))
}

// -------------------------------------------------------------------- parse

pub fn parse_cmd(
    label: &str,
    dialect: Dialect,
    text: &str,
    unicode: bool,
    json_out: bool,
) -> Result<Outcome, String> {
    let st = style(unicode);
    let (printed, machine) = match dialect {
        Dialect::Cpc => {
            let p = cpc_term(label, text)?;
            (print_process(&p, st), print_process(&p, Style::Ascii))
        }
        Dialect::Linda => {
            let p = parse_linda(text).map_err(|e| perr(label, e))?;
            (print_linda(&p, st), print_linda(&p, Style::Ascii))
        }
        Dialect::Spi => {
            let p = parse_spi(text).map_err(|e| perr(label, e))?;
            (print_spi(&p), print_spi(&p))
        }
    };
    if json_out {
        done(
            jout(&json!({"dialect": dialect.label(), "term": machine})),
            EXIT_OK,
        )
    } else {
        done(format!("{printed}\n"), EXIT_OK)
    }
}

// ---------------------------------------------------------------------- run

pub fn run_exhaustive(
    label: &str,
    text: &str,
    steps: usize,
    unicode: bool,
    json_out: bool,
) -> Result<Outcome, String> {
    let p = cpc_term(label, text)?;
    let g = explore(&p, steps);
    let st = style(unicode);

    let mut sf = Surfacer::new();
    for s in &g.states {
        sf.reserve_process(s);
    }
    let states: Vec<Process> = g.states.iter().map(|s| sf.process(s)).collect();

    if json_out {
        let v = json!({
            "mode": "exhaustive",
            "steps": steps,
            "truncated": g.truncated,
            "states": states.iter().map(|s| print_process(s, Style::Ascii)).collect::<Vec<_>>(),
            "terminal": g.deadlocked(),
            "edges": g.edges,
            "levels": g.levels,
        });
        return done(jout(&v), EXIT_OK);
    }

    let terminal = g.deadlocked();
    let mut out = String::new();
    for (i, s) in states.iter().enumerate() {
        let mark = if terminal.contains(&i) { "  [terminal]" } else { "" };
        out.push_str(&format!("state {i}: {}{mark}\n", print_process(s, st)));
    }
    for (a, b) in &g.edges {
        out.push_str(&format!("edge {a} -> {b}\n"));
    }
    let sizes: Vec<String> = g.levels.iter().map(|l| l.len().to_string()).collect();
    out.push_str(&format!("levels: {}\n", sizes.join(" ")));
    out.push_str(if g.truncated {
        "truncated at the step bound\n"
    } else {
        "complete\n"
    });
    done(out, EXIT_OK)
}

pub fn run_random(
    label: &str,
    text: &str,
    steps: usize,
    seed: u64,
    unicode: bool,
    json_out: bool,
) -> Result<Outcome, String> {
    let p = cpc_term(label, text)?;
    let t = random_run(&p, steps, seed);
    debug_assert_eq!(replay(&t), Ok(()));
    let st = style(unicode);

    let mut sf = Surfacer::new();
    for s in &t.states {
        sf.reserve_process(s);
    }
    for e in &t.events {
        sf.reserve_pattern(&e.left);
        sf.reserve_pattern(&e.right);
        sf.reserve_subst(&e.left_subst);
        sf.reserve_subst(&e.right_subst);
    }
    let states: Vec<Process> = t.states.iter().map(|s| sf.process(s)).collect();

    let outcome = match t.outcome {
        RunOutcome::Deadlock => "deadlock",
        RunOutcome::StepBound => "step bound",
    };

    if json_out {
        let events: Vec<Value> = t
            .events
            .iter()
            .map(|e| {
                json!({
                    "step": e.step,
                    "left": print_pattern(&sf.pattern(&e.left), Style::Ascii),
                    "right": print_pattern(&sf.pattern(&e.right), Style::Ascii),
                    "left_subst": print_subst(&sf.subst(&e.left_subst), Style::Ascii),
                    "right_subst": print_subst(&sf.subst(&e.right_subst), Style::Ascii),
                    "state": e.state,
                })
            })
            .collect();
        let v = json!({
            "mode": "random",
            "seed": seed,
            "steps": steps,
            "outcome": outcome,
            "states": states.iter().map(|s| print_process(s, Style::Ascii)).collect::<Vec<_>>(),
            "events": events,
            "path": t.state_sequence(),
        });
        return done(jout(&v), EXIT_OK);
    }

    let mut out = String::new();
    out.push_str(&format!("state 0: {}\n", print_process(&states[0], st)));
    let mut shown = 1;
    for e in &t.events {
        out.push_str(&format!(
            "step {}: ({}) ~ ({})  left {}  right {}  -> state {}\n",
            e.step,
            print_pattern(&sf.pattern(&e.left), st),
            print_pattern(&sf.pattern(&e.right), st),
            print_subst(&sf.subst(&e.left_subst), st),
            print_subst(&sf.subst(&e.right_subst), st),
            e.state,
        ));
        if e.state == shown {
            out.push_str(&format!(
                "state {}: {}\n",
                e.state,
                print_process(&states[e.state], st)
            ));
            shown += 1;
        }
    }
    out.push_str(&match t.outcome {
        RunOutcome::Deadlock => format!(
            "outcome: deadlock after {} steps (no interaction available)\n",
            t.events.len()
        ),
        RunOutcome::StepBound => format!(
            "outcome: step bound reached after {} steps, interactions remain\n",
            t.events.len()
        ),
    });
    done(out, EXIT_OK)
}

pub fn run_interactive(
    label: &str,
    text: &str,
    steps: usize,
    unicode: bool,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let p = cpc_term(label, text)?;
    let st = style(unicode);
    let mut current = p;
    let mut step = 0;
    let io = |e: std::io::Error| e.to_string();
    writeln!(out, "state: {}", print_process(&surfaced_process(&current), st)).map_err(io)?;
    loop {
        let options = redexes(&current);
        if options.is_empty() {
            writeln!(out, "deadlock: no interaction available").map_err(io)?;
            return Ok(EXIT_OK);
        }
        if step == steps {
            writeln!(out, "step bound reached after {steps} steps, interactions remain")
                .map_err(io)?;
            return Ok(EXIT_OK);
        }
        let mut sf = Surfacer::new();
        for r in &options {
            sf.reserve_pattern(&r.left_pattern);
            sf.reserve_pattern(&r.right_pattern);
        }
        for (i, r) in options.iter().enumerate() {
            writeln!(
                out,
                "  [{i}] ({}) ~ ({})",
                print_pattern(&sf.pattern(&r.left_pattern), st),
                print_pattern(&sf.pattern(&r.right_pattern), st),
            )
            .map_err(io)?;
        }
        write!(out, "choose 0-{}, or q to quit: ", options.len() - 1).map_err(io)?;
        out.flush().map_err(io)?;
        let mut line = String::new();
        if input.read_line(&mut line).map_err(io)? == 0 {
            writeln!(out).map_err(io)?;
            return Ok(EXIT_OK);
        }
        let choice = line.trim();
        if choice == "q" || choice == "quit" {
            return Ok(EXIT_OK);
        }
        let Ok(i) = choice.parse::<usize>() else {
            writeln!(out, "unrecognized choice `{choice}`").map_err(io)?;
            continue;
        };
        if i >= options.len() {
            writeln!(out, "no option {i}").map_err(io)?;
            continue;
        }
        current = options[i].reduct.clone();
        step += 1;
        writeln!(out, "state: {}", print_process(&surfaced_process(&current), st))
            .map_err(io)?;
    }
}

// -------------------------------------------------------------------- unify

pub fn unify_cmd(
    left_src: &str,
    right_src: &str,
    unicode: bool,
    json_out: bool,
) -> Result<Outcome, String> {
    let l = parse_pattern(left_src).map_err(|e| perr("left", e))?;
    let r = parse_pattern(right_src).map_err(|e| perr("right", e))?;
    let st = style(unicode);
    let unified = unify(&l, &r).expect("parsed patterns are well-formed");
    match unified {
        Some(u) => {
            if json_out {
                let v = json!({
                    "defined": true,
                    "left": print_subst(&u.left, Style::Ascii),
                    "right": print_subst(&u.right, Style::Ascii),
                });
                done(jout(&v), EXIT_OK)
            } else {
                done(
                    format!(
                        "left:  {}\nright: {}\n",
                        print_subst(&u.left, st),
                        print_subst(&u.right, st)
                    ),
                    EXIT_OK,
                )
            }
        }
        None => {
            if json_out {
                let v = json!({"defined": false, "left": Value::Null, "right": Value::Null});
                done(jout(&v), EXIT_VERDICT)
            } else {
                done("undefined\n".into(), EXIT_VERDICT)
            }
        }
    }
}

// -------------------------------------------------------------------- barbs

pub fn barbs_cmd(label: &str, text: &str, json_out: bool) -> Result<Outcome, String> {
    let p = cpc_term(label, text)?;
    let set = barbs(&p);
    if json_out {
        let list: Vec<Vec<String>> = set
            .iter()
            .map(|b| b.names.iter().map(|n| n.to_string()).collect())
            .collect();
        return done(jout(&json!({ "barbs": list })), EXIT_OK);
    }
    let mut out = String::new();
    if set.is_empty() {
        out.push_str("(none)\n");
    }
    for b in &set {
        let names: Vec<String> = b.names.iter().map(|n| n.to_string()).collect();
        out.push_str(&format!("{{{}}}\n", names.join(", ")));
    }
    done(out, EXIT_OK)
}

// ---------------------------------------------------------------------- lts

pub fn lts_cmd(
    label: &str,
    text: &str,
    depth: usize,
    unicode: bool,
    json_out: bool,
) -> Result<Outcome, String> {
    let p = cpc_term(label, text)?;
    let st = style(unicode);

    let mut ids: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    let mut states: Vec<Process> = Vec::new();
    let mut intern = |q: &Process, states: &mut Vec<Process>| -> (usize, bool) {
        let key = canonicalize(q);
        match ids.get(&key) {
            Some(&i) => (i, false),
            None => {
                let i = states.len();
                ids.insert(key, i);
                states.push(q.clone());
                (i, true)
            }
        }
    };
    let (root, _) = intern(&p, &mut states);
    let mut triples: Vec<(usize, Label, usize)> = Vec::new();
    let mut frontier = vec![root];
    for _ in 0..depth {
        let mut next = Vec::new();
        for sid in frontier {
            let source = states[sid].clone();
            for t in transitions(&source) {
                let (tid, fresh_state) = intern(&t.target, &mut states);
                triples.push((sid, t.label, tid));
                if fresh_state {
                    next.push(tid);
                }
            }
        }
        frontier = next;
    }

    let mut sf = Surfacer::new();
    for s in &states {
        sf.reserve_process(s);
    }
    for (_, l, _) in &triples {
        sf.reserve_label(l);
    }

    if json_out {
        let v = json!({
            "depth": depth,
            "states": states.iter().map(|s| print_process(&sf.process(s), Style::Ascii)).collect::<Vec<_>>(),
            "transitions": triples.iter().map(|(a, l, b)| json!({
                "source": a,
                "label": print_label(&sf.label(l), Style::Ascii),
                "target": b,
            })).collect::<Vec<_>>(),
        });
        return done(jout(&v), EXIT_OK);
    }

    let mut out = String::new();
    for (i, s) in states.iter().enumerate() {
        out.push_str(&format!("state {i}: {}\n", print_process(&sf.process(s), st)));
    }
    for (a, l, b) in &triples {
        out.push_str(&format!("({a}, {}, {b})\n", print_label(&sf.label(l), st)));
    }
    done(out, EXIT_OK)
}

// -------------------------------------------------------------------- bisim

fn witness_json(w: &DistinguishingWitness, sf: &mut Surfacer) -> Value {
    let steps: Vec<Value> = w
        .trace
        .iter()
        .map(|s| {
            let side = match s.side {
                Side::Left => "left",
                Side::Right => "right",
            };
            let reply = match &s.reply {
                Some(r) => json!({
                    "label": print_label(&sf.label(&r.label), Style::Ascii),
                    "target": print_process(&sf.process(&r.target), Style::Ascii),
                    "subst": print_subst(&sf.subst(&r.subst), Style::Ascii),
                }),
                None => Value::Null,
            };
            json!({
                "side": side,
                "instantiation": print_subst(&sf.subst(&s.instantiation), Style::Ascii),
                "label": print_label(&sf.label(&s.label), Style::Ascii),
                "target": print_process(&sf.process(&s.challenge_target), Style::Ascii),
                "reply": reply,
            })
        })
        .collect();
    json!({
        "pre": print_subst(&sf.subst(&w.pre_subst), Style::Ascii),
        "steps": steps,
        "note": w.verdict,
    })
}

fn witness_text(w: &DistinguishingWitness, sf: &mut Surfacer, st: Style) -> String {
    let mut out = String::new();
    out.push_str(&format!("note: {}\n", w.verdict));
    out.push_str(&format!("pre: {}\n", print_subst(&sf.subst(&w.pre_subst), st)));
    for (i, s) in w.trace.iter().enumerate() {
        let side = match s.side {
            Side::Left => "left",
            Side::Right => "right",
        };
        out.push_str(&format!(
            "{}. challenge ({side}) under {}: {} => {}\n",
            i + 1,
            print_subst(&sf.subst(&s.instantiation), st),
            print_label(&sf.label(&s.label), st),
            print_process(&sf.process(&s.challenge_target), st),
        ));
        match &s.reply {
            Some(r) => out.push_str(&format!(
                "   reply: {} => {}  matching {}\n",
                print_label(&sf.label(&r.label), st),
                print_process(&sf.process(&r.target), st),
                print_subst(&sf.subst(&r.subst), st),
            )),
            None => out.push_str("   no compatible reply\n"),
        }
    }
    out
}

fn reserve_witness(w: &DistinguishingWitness, sf: &mut Surfacer) {
    sf.reserve_subst(&w.pre_subst);
    for s in &w.trace {
        sf.reserve_label(&s.label);
        sf.reserve_subst(&s.instantiation);
        sf.reserve_process(&s.challenge_target);
        if let Some(r) = &s.reply {
            sf.reserve_label(&r.label);
            sf.reserve_process(&r.target);
            sf.reserve_subst(&r.subst);
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn bisim_cmd(
    label_p: &str,
    text_p: &str,
    label_q: &str,
    text_q: &str,
    depth: usize,
    pool: &[String],
    inst_depth: usize,
    show_witness: bool,
    unicode: bool,
    json_out: bool,
) -> Result<Outcome, String> {
    let p = cpc_term(label_p, text_p)?;
    let q = cpc_term(label_q, text_q)?;
    let cfg = BisimConfig {
        depth,
        name_pool: pool.iter().map(|s| Name::surface(s)).collect(),
        instantiation_depth: inst_depth,
    };
    match bounded_bisim(&p, &q, &cfg) {
        BisimOutcome::BisimilarToDepth(d) => {
            if json_out {
                let v = json!({"verdict": "bisimilar", "depth": d, "witness": Value::Null});
                done(jout(&v), EXIT_OK)
            } else {
                done(format!("bisimilar to depth {d}\n"), EXIT_OK)
            }
        }
        BisimOutcome::Distinguished(w) => {
            let mut sf = Surfacer::new();
            reserve_witness(&w, &mut sf);
            if json_out {
                let v = json!({
                    "verdict": "distinguished",
                    "depth": depth,
                    "witness": witness_json(&w, &mut sf),
                });
                done(jout(&v), EXIT_VERDICT)
            } else {
                let mut out = String::from("distinguished\n");
                if show_witness {
                    out.push_str(&witness_text(&w, &mut sf, style(unicode)));
                }
                done(out, EXIT_VERDICT)
            }
        }
    }
}

// ------------------------------------------------------------------- encode

pub fn encode_cmd(
    label: &str,
    from: Dialect,
    text: &str,
    unicode: bool,
) -> Result<Outcome, String> {
    let encoded = match from {
        Dialect::Linda => encode_linda(&parse_linda(text).map_err(|e| perr(label, e))?),
        Dialect::Spi => {
            let p = parse_spi(text).map_err(|e| perr(label, e))?;
            encode_spi_proc(&p).map_err(|e| format!("{label}: {e}"))?
        }
        Dialect::Cpc => return Err("encode needs --from linda or --from spi".into()),
    };
    let surfaced = surfaced_process(&encoded);
    done(
        format!("{}\n", print_process(&surfaced, style(unicode))),
        EXIT_OK,
    )
}

pub fn check_encoding_cmd(
    label: &str,
    from: Dialect,
    text: &str,
    steps: usize,
    json_out: bool,
) -> Result<Outcome, String> {
    let report: EncodingReport = match from {
        Dialect::Linda => check_linda(&parse_linda(text).map_err(|e| perr(label, e))?, steps),
        Dialect::Spi => {
            let p = parse_spi(text).map_err(|e| perr(label, e))?;
            check_spi(&p, steps).map_err(|e| format!("{label}: {e}"))?
        }
        Dialect::Cpc => return Err("check-encoding needs --from linda or --from spi".into()),
    };
    let code = if report.valid() { EXIT_OK } else { EXIT_VERDICT };
    if json_out {
        let v = json!({
            "steps": report.steps,
            "states_checked": report.states_checked,
            "forward_ok": report.forward_ok,
            "backward_ok": report.backward_ok,
            "success_ok": report.success_ok,
            "divergence_ok": report.divergence_ok,
            "failures": report.failures,
            "valid": report.valid(),
        });
        return done(jout(&v), code);
    }
    let flag = |b: bool| if b { "ok" } else { "FAIL" };
    let mut out = String::new();
    out.push_str(&format!("steps: {}\n", report.steps));
    out.push_str(&format!("states checked: {}\n", report.states_checked));
    out.push_str(&format!("forward: {}\n", flag(report.forward_ok)));
    out.push_str(&format!("backward: {}\n", flag(report.backward_ok)));
    out.push_str(&format!("success: {}\n", flag(report.success_ok)));
    out.push_str(&format!("divergence: {}\n", flag(report.divergence_ok)));
    for f in &report.failures {
        out.push_str(&format!("failure: {f}\n"));
    }
    out.push_str(if report.valid() { "valid\n" } else { "invalid\n" });
    done(out, code)
}

// ------------------------------------------------------------------- corpus

/// The bundled suites: the trade protocols against their bystander, and the
/// equivalence regression pairs, plus a round-trip sweep of every shipped
/// program.
pub fn corpus_cmd(json_out: bool) -> Result<Outcome, String> {
    let mut checks: Vec<(&str, bool)> = Vec::new();

    checks.push(("round-trip on all bundled programs", roundtrip_all()));

    let sol1 = parse_process(corpus_data::TRADE_SOLUTION_1).map_err(|e| e.to_string())?;
    let sol2 = parse_process(corpus_data::TRADE_SOLUTION_2).map_err(|e| e.to_string())?;
    let sol3 = parse_process(corpus_data::TRADE_SOLUTION_3).map_err(|e| e.to_string())?;
    let prom = parse_process(corpus_data::PROMISCUOUS).map_err(|e| e.to_string())?;

    checks.push((
        "bundled files match the built-in scenarios",
        struct_eq(&sol1, &corpus::solution1())
            && struct_eq(&sol2, &corpus::solution2())
            && struct_eq(&sol3, &corpus::solution3())
            && struct_eq(&prom, &corpus::promiscuous()),
    ));

    checks.push(("solution 1 settles in two steps", {
        let g = explore(&sol1, 8);
        let paths = maximal_paths(&g);
        !g.truncated
            && paths.len() == 1
            && paths.iter().all(|&(len, fin)| {
                len == 2 && struct_eq(&g.states[fin], &corpus::solution1_final())
            })
    }));

    checks.push(("solution 2 settles in four steps every way", {
        let g = explore(&sol2, 10);
        let paths = maximal_paths(&g);
        !g.truncated
            && !paths.is_empty()
            && paths.iter().all(|&(len, fin)| {
                len == 4 && struct_eq(&g.states[fin], &corpus::solution1_final())
            })
    }));

    let (thief, bank) = corpus::theft_names();
    let robbed = |sol: &Process| {
        let attacked = Process::par(sol.clone(), prom.clone());
        let g = explore(&attacked, 6);
        g.states.iter().any(|s| {
            barbs(s)
                .iter()
                .any(|b| b.names.contains(&thief) && b.names.contains(&bank))
        })
    };
    checks.push((
        "bystander robs the first protocol",
        robbed(&sol1) && min_steps_to_barb(&Process::par(sol1.clone(), prom.clone()), &thief, 6)
            == Some(2),
    ));
    checks.push(("third protocol resists the bystander", !robbed(&sol3)));

    for (name, left, right) in corpus_data::EQUIV_PAIRS {
        let l = parse_process(left).map_err(|e| e.to_string())?;
        let r = parse_process(right).map_err(|e| e.to_string())?;
        let verdict = bounded_bisim(&l, &r, &BisimConfig::new(3));
        checks.push((name, verdict.is_bisimilar()));
    }

    checks.push(("echoing near-miss is distinguished, witness replays", {
        let l = parse_process(corpus_data::INEQUIV_PAIR.1).map_err(|e| e.to_string())?;
        let r = parse_process(corpus_data::INEQUIV_PAIR.2).map_err(|e| e.to_string())?;
        match bounded_bisim(&l, &r, &BisimConfig::new(3)) {
            BisimOutcome::Distinguished(w) => verify_witness(&l, &r, &w),
            BisimOutcome::BisimilarToDepth(_) => false,
        }
    }));

    let all_ok = checks.iter().all(|(_, ok)| *ok);
    let code = if all_ok { EXIT_OK } else { EXIT_VERDICT };
    if json_out {
        let v = json!({
            "checks": checks.iter().map(|(n, ok)| json!({"name": n, "ok": ok})).collect::<Vec<_>>(),
            "ok": all_ok,
        });
        return done(jout(&v), code);
    }
    let mut out = String::new();
    for (name, ok) in &checks {
        out.push_str(&format!("{name}: {}\n", if *ok { "pass" } else { "FAIL" }));
    }
    let failed = checks.iter().filter(|(_, ok)| !ok).count();
    if failed == 0 {
        out.push_str(&format!("all {} checks passed\n", checks.len()));
    } else {
        out.push_str(&format!("{failed} of {} checks failed\n", checks.len()));
    }
    done(out, code)
}

fn roundtrip_all() -> bool {
    corpus_data::all_files().iter().all(|f| match f.dialect {
        Dialect::Cpc => parse_process(f.text).is_ok_and(|p| {
            parse_process(&print_process(&p, Style::Ascii)).is_ok_and(|q| q == p)
                && parse_process(&print_process(&p, Style::Unicode)).is_ok_and(|q| q == p)
        }),
        Dialect::Linda => parse_linda(f.text).is_ok_and(|p| {
            parse_linda(&print_linda(&p, Style::Ascii)).is_ok_and(|q| q == p)
        }),
        Dialect::Spi => {
            parse_spi(f.text).is_ok_and(|p| parse_spi(&print_spi(&p)).is_ok_and(|q| q == p))
        }
    })
}
