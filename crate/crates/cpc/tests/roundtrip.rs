//! Printer/parser round-trips on generated terms: whatever the printers
//! emit, the parsers read back as the same tree, in both mark styles.

use cpc::parse::{parse_pattern, parse_process};
use cpc::parse_linda::parse_linda;
use cpc::parse_spi::parse_spi;
use cpc::print::{print_linda, print_pattern, print_process, print_spi, Style};
use cpc_core::{LindaProcess, Name, Pattern, Process, SpiProcess, SpiTerm, TemplateField};
use proptest::prelude::*;

fn n(s: &str) -> Name {
    Name::surface(s)
}

const FREE: [&str; 3] = ["a", "b", "c"];

// Generated binding occurrences carry placeholder indices; this pass gives
// them distinct spellings disjoint from the free pool, so every pattern is
// well-formed by construction.
fn number_binders(p: &Pattern, next: &mut usize) -> Pattern {
    match p {
        Pattern::Binding(_) => {
            let name = n(&format!("x{next}"));
            *next += 1;
            Pattern::Binding(name)
        }
        Pattern::Variable(v) => Pattern::Variable(v.clone()),
        Pattern::Protected(v) => Pattern::Protected(v.clone()),
        Pattern::Compound(l, r) => Pattern::compound(
            number_binders(l, next),
            number_binders(r, next),
        ),
    }
}

fn raw_pattern() -> impl Strategy<Value = Pattern> {
    let leaf = prop_oneof![
        proptest::sample::select(&FREE[..]).prop_map(|s| Pattern::Variable(n(s))),
        proptest::sample::select(&FREE[..]).prop_map(|s| Pattern::Protected(n(s))),
        Just(Pattern::Binding(n("placeholder"))),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| Pattern::compound(l, r))
    })
}

fn wf_pattern() -> impl Strategy<Value = Pattern> {
    raw_pattern().prop_map(|p| number_binders(&p, &mut 0))
}

fn process() -> impl Strategy<Value = Process> {
    let leaf = prop_oneof![
        Just(Process::Null),
        Just(Process::Success),
        wf_pattern().prop_map(|p| Process::case(p, Process::Null)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (wf_pattern(), inner.clone()).prop_map(|(p, b)| Process::case(p, b)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Process::par(l, r)),
            inner.clone().prop_map(Process::replicate),
            (proptest::sample::select(&FREE[..]), inner)
                .prop_map(|(s, b)| Process::restrict(n(s), b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn pattern_roundtrips(p in wf_pattern()) {
        for style in [Style::Ascii, Style::Unicode] {
            let s = print_pattern(&p, style);
            prop_assert_eq!(parse_pattern(&s).unwrap(), p.clone(), "printed `{}`", s);
        }
    }

    #[test]
    fn process_roundtrips(p in process()) {
        for style in [Style::Ascii, Style::Unicode] {
            let s = print_process(&p, style);
            prop_assert_eq!(parse_process(&s).unwrap(), p.clone(), "printed `{}`", s);
        }
    }
}

// ---------------------------------------------------------------- tuple space

fn linda_template() -> impl Strategy<Value = Vec<TemplateField>> {
    proptest::collection::vec(
        prop_oneof![
            Just(None),
            proptest::sample::select(&FREE[..]).prop_map(Some),
        ],
        0..3,
    )
    .prop_map(|fields| {
        let mut next = 0;
        fields
            .into_iter()
            .map(|f| match f {
                None => {
                    let b = TemplateField::Bind(n(&format!("x{next}")));
                    next += 1;
                    b
                }
                Some(s) => TemplateField::Exact(n(s)),
            })
            .collect()
    })
}

fn linda_process() -> impl Strategy<Value = LindaProcess> {
    let tuple = proptest::collection::vec(proptest::sample::select(&FREE[..]), 0..3)
        .prop_map(|xs| LindaProcess::Output(xs.into_iter().map(n).collect()));
    let leaf = prop_oneof![Just(LindaProcess::Null), Just(LindaProcess::Ok), tuple];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (linda_template(), inner.clone())
                .prop_map(|(t, b)| LindaProcess::input(t, b)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| LindaProcess::par(l, r)),
            inner.clone().prop_map(LindaProcess::replicate),
            (proptest::sample::select(&FREE[..]), inner)
                .prop_map(|(s, b)| LindaProcess::restrict(n(s), b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn linda_roundtrips(p in linda_process()) {
        for style in [Style::Ascii, Style::Unicode] {
            let s = print_linda(&p, style);
            prop_assert_eq!(parse_linda(&s).unwrap(), p.clone(), "printed `{}`", s);
        }
    }
}

// ------------------------------------------------------------ message passing

const VARS: [&str; 3] = ["x", "y", "z"];

fn spi_term() -> impl Strategy<Value = SpiTerm> {
    let leaf = prop_oneof![
        proptest::sample::select(&FREE[..]).prop_map(|s| SpiTerm::Name(n(s))),
        proptest::sample::select(&VARS[..]).prop_map(|s| SpiTerm::Var(n(s))),
        Just(SpiTerm::Zero),
        (1u64..5).prop_map(SpiTerm::Int),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(SpiTerm::suc),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| SpiTerm::pair(l, r)),
            (inner.clone(), inner).prop_map(|(b, k)| SpiTerm::encrypt(b, k)),
        ]
    })
}

fn spi_process() -> impl Strategy<Value = SpiProcess> {
    let leaf = prop_oneof![Just(SpiProcess::Null), Just(SpiProcess::Ok)];
    let var = || proptest::sample::select(&VARS[..]).prop_map(n);
    leaf.prop_recursive(3, 16, 2, move |inner| {
        prop_oneof![
            (spi_term(), var(), inner.clone())
                .prop_map(|(c, x, b)| SpiProcess::input(c, x, b)),
            (spi_term(), spi_term(), inner.clone())
                .prop_map(|(c, m, b)| SpiProcess::output(c, m, b)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| SpiProcess::par(l, r)),
            inner.clone().prop_map(SpiProcess::replicate),
            (proptest::sample::select(&FREE[..]), inner.clone())
                .prop_map(|(s, b)| SpiProcess::restrict(n(s), b)),
            (spi_term(), spi_term(), inner.clone())
                .prop_map(|(m, k, b)| SpiProcess::match_eq(m, k, b)),
            (var(), var(), spi_term(), inner.clone())
                .prop_filter("split binders differ", |(x, y, _, _)| x != y)
                .prop_map(|(x, y, m, b)| SpiProcess::split_pair(x, y, m, b)),
            (spi_term(), var(), spi_term(), inner.clone())
                .prop_map(|(m, x, k, b)| SpiProcess::case_decrypt(m, x, k, b)),
            (spi_term(), inner.clone(), var(), inner)
                .prop_map(|(m, z, x, s)| SpiProcess::case_int(m, z, x, s)),
        ]
    })
}

/// Turns variable references with no enclosing binder into channel names, so
/// the printed form resolves every identifier back to the same namespace.
fn close_vars(p: &SpiProcess, scope: &std::collections::BTreeSet<Name>) -> SpiProcess {
    fn close_term(t: &SpiTerm, scope: &std::collections::BTreeSet<Name>) -> SpiTerm {
        match t {
            SpiTerm::Var(v) if !scope.contains(v) => SpiTerm::Name(v.clone()),
            SpiTerm::Var(_) | SpiTerm::Name(_) | SpiTerm::Zero | SpiTerm::Int(_) => t.clone(),
            SpiTerm::Suc(b) => SpiTerm::suc(close_term(b, scope)),
            SpiTerm::Pair(l, r) => {
                SpiTerm::pair(close_term(l, scope), close_term(r, scope))
            }
            SpiTerm::Encrypt(b, k) => {
                SpiTerm::encrypt(close_term(b, scope), close_term(k, scope))
            }
        }
    }
    let with = |scope: &std::collections::BTreeSet<Name>, x: &Name| {
        let mut s = scope.clone();
        s.insert(x.clone());
        s
    };
    match p {
        SpiProcess::Null => SpiProcess::Null,
        SpiProcess::Ok => SpiProcess::Ok,
        SpiProcess::Par(l, r) => {
            SpiProcess::par(close_vars(l, scope), close_vars(r, scope))
        }
        SpiProcess::Replicate(b) => SpiProcess::replicate(close_vars(b, scope)),
        SpiProcess::Restrict(x, b) => SpiProcess::restrict(x.clone(), close_vars(b, scope)),
        SpiProcess::Input(c, x, b) => SpiProcess::input(
            close_term(c, scope),
            x.clone(),
            close_vars(b, &with(scope, x)),
        ),
        SpiProcess::Output(c, m, b) => SpiProcess::output(
            close_term(c, scope),
            close_term(m, scope),
            close_vars(b, scope),
        ),
        SpiProcess::MatchEq(m, k, b) => SpiProcess::match_eq(
            close_term(m, scope),
            close_term(k, scope),
            close_vars(b, scope),
        ),
        SpiProcess::SplitPair(x, y, m, b) => {
            let inner = with(&with(scope, x), y);
            SpiProcess::split_pair(
                x.clone(),
                y.clone(),
                close_term(m, scope),
                close_vars(b, &inner),
            )
        }
        SpiProcess::CaseDecrypt(m, x, k, b) => SpiProcess::case_decrypt(
            close_term(m, scope),
            x.clone(),
            close_term(k, scope),
            close_vars(b, &with(scope, x)),
        ),
        SpiProcess::CaseInt(m, z, x, s) => SpiProcess::case_int(
            close_term(m, scope),
            close_vars(z, scope),
            x.clone(),
            close_vars(s, &with(scope, x)),
        ),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn spi_roundtrips(raw in spi_process()) {
        let p = close_vars(&raw, &Default::default());
        let s = print_spi(&p);
        prop_assert_eq!(parse_spi(&s).unwrap(), p.clone(), "printed `{}`", s);
    }
}
