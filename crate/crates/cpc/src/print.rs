//! Pretty-printers, the inverse of the parsers: parse∘print is the
//! identity on every term. ASCII is the default; `Style::Unicode` swaps in
//! the mathematical marks (`λ`, `⌐x¬`, `•`, `→`, `ν`), which the lexer also
//! accepts.
//!
//! Machine-minted names print as `%k`, which does not reparse. Callers that
//! need parseable output run a [`Surfacer`] over the material first; one
//! surfacer can span several items so a minted name shared between, say, a
//! pattern and a match keeps one face.

use cpc_core::{Label, LindaProcess, Name, Pattern, Process, SpiProcess, SpiTerm, Substitution};
use cpc_core::{SpiProcess as SP, SpiTerm as ST};
use cpc_core::TemplateField;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Ascii,
    Unicode,
}

impl Style {
    fn arrow(self) -> &'static str {
        match self {
            Style::Ascii => "->",
            Style::Unicode => "→",
        }
    }

    fn new_kw(self) -> &'static str {
        match self {
            Style::Ascii => "new ",
            Style::Unicode => "ν ",
        }
    }
}

/// Containing position, loosest to tightest: a parallel composition is bare
/// only at `Par`, a case or restriction also at `Term`, leaves anywhere.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Ctx {
    Par,
    Term,
    Atom,
}

pub fn print_process(p: &Process, style: Style) -> String {
    proc_str(p, style, Ctx::Par)
}

pub fn print_pattern(p: &Pattern, style: Style) -> String {
    pat_str(p, style, false)
}

fn name_str(n: &Name) -> String {
    n.to_string()
}

fn pat_str(p: &Pattern, style: Style, right_of_compound: bool) -> String {
    match p {
        Pattern::Binding(n) => match style {
            Style::Ascii => format!("\\{}", name_str(n)),
            Style::Unicode => format!("λ{}", name_str(n)),
        },
        Pattern::Variable(n) => name_str(n),
        Pattern::Protected(n) => match style {
            Style::Ascii => format!("#{}", name_str(n)),
            Style::Unicode => format!("⌐{}¬", name_str(n)),
        },
        Pattern::Compound(l, r) => {
            let sep = match style {
                Style::Ascii => " . ",
                Style::Unicode => "•",
            };
            let s = format!(
                "{}{sep}{}",
                pat_str(l, style, false),
                pat_str(r, style, true)
            );
            if right_of_compound {
                format!("({s})")
            } else {
                s
            }
        }
    }
}

fn proc_str(p: &Process, style: Style, ctx: Ctx) -> String {
    match p {
        Process::Null => "0".into(),
        Process::Success => "ok".into(),
        Process::Case(pat, body) => {
            if **body == Process::Null {
                // `p` is shorthand for `p -> 0`, and a pattern after `!` is
                // read whole, so the shorthand is safe in any position.
                pat_str(pat, style, false)
            } else {
                let s = format!(
                    "{} {} {}",
                    pat_str(pat, style, false),
                    style.arrow(),
                    proc_str(body, style, Ctx::Term)
                );
                if ctx == Ctx::Atom {
                    format!("({s})")
                } else {
                    s
                }
            }
        }
        Process::Par(l, r) => {
            let s = format!(
                "{} | {}",
                proc_str(l, style, Ctx::Par),
                proc_str(r, style, Ctx::Term)
            );
            if ctx > Ctx::Par {
                format!("({s})")
            } else {
                s
            }
        }
        Process::Replicate(b) => format!("!{}", proc_str(b, style, Ctx::Atom)),
        Process::Restrict(..) => {
            let mut names = Vec::new();
            let mut body = p;
            while let Process::Restrict(n, b) = body {
                names.push(name_str(n));
                body = b;
            }
            format!(
                "({}{}) {}",
                style.new_kw(),
                names.join(", "),
                proc_str(body, style, Ctx::Term)
            )
        }
    }
}

/// `{image/name, ...}`, keyed order.
pub fn print_subst(s: &Substitution, style: Style) -> String {
    let inner: Vec<String> = s
        .iter()
        .map(|(n, img)| format!("{}/{}", pat_str(img, style, false), name_str(n)))
        .collect();
    format!("{{{}}}", inner.join(", "))
}

/// `tau`, or the emitted pattern prefixed by its extruded names: `nu{n} p`.
pub fn print_label(l: &Label, style: Style) -> String {
    match l {
        Label::Tau => "tau".into(),
        Label::Out { extruded, pattern } => {
            let names: Vec<String> = extruded.iter().map(name_str).collect();
            format!("nu{{{}}} {}", names.join(", "), pat_str(pattern, style, false))
        }
    }
}

// ---------------------------------------------------------------- surfacing

/// Rewrites machine-minted names to unused surface identifiers (`_r0`,
/// `_r1`, ...) in first-appearance order. Reserve every item first, then
/// rewrite; minted names are globally unique, so the simultaneous rewrite
/// cannot capture.
pub struct Surfacer {
    used: BTreeSet<String>,
    map: BTreeMap<Name, Name>,
    next: usize,
}

impl Default for Surfacer {
    fn default() -> Self {
        Surfacer::new()
    }
}

impl Surfacer {
    pub fn new() -> Surfacer {
        Surfacer {
            used: BTreeSet::new(),
            map: BTreeMap::new(),
            next: 0,
        }
    }

    fn reserve(&mut self, n: &Name) {
        if let Some(s) = n.as_surface() {
            self.used.insert(s.to_string());
        }
    }

    fn rename(&mut self, n: &Name) -> Name {
        if !n.is_fresh() {
            return n.clone();
        }
        if let Some(m) = self.map.get(n) {
            return m.clone();
        }
        loop {
            let cand = format!("_r{}", self.next);
            self.next += 1;
            if self.used.insert(cand.clone()) {
                let m = Name::surface(&cand);
                self.map.insert(n.clone(), m.clone());
                return m;
            }
        }
    }

    pub fn reserve_pattern(&mut self, p: &Pattern) {
        match p {
            Pattern::Binding(n) | Pattern::Variable(n) | Pattern::Protected(n) => {
                self.reserve(n)
            }
            Pattern::Compound(l, r) => {
                self.reserve_pattern(l);
                self.reserve_pattern(r);
            }
        }
    }

    pub fn reserve_process(&mut self, p: &Process) {
        match p {
            Process::Null | Process::Success => {}
            Process::Case(pat, body) => {
                self.reserve_pattern(pat);
                self.reserve_process(body);
            }
            Process::Par(l, r) => {
                self.reserve_process(l);
                self.reserve_process(r);
            }
            Process::Replicate(b) => self.reserve_process(b),
            Process::Restrict(n, b) => {
                self.reserve(n);
                self.reserve_process(b);
            }
        }
    }

    pub fn reserve_subst(&mut self, s: &Substitution) {
        for (n, img) in s.iter() {
            self.reserve(n);
            self.reserve_pattern(img);
        }
    }

    pub fn reserve_label(&mut self, l: &Label) {
        if let Label::Out { extruded, pattern } = l {
            for n in extruded {
                self.reserve(n);
            }
            self.reserve_pattern(pattern);
        }
    }

    pub fn pattern(&mut self, p: &Pattern) -> Pattern {
        match p {
            Pattern::Binding(n) => Pattern::Binding(self.rename(n)),
            Pattern::Variable(n) => Pattern::Variable(self.rename(n)),
            Pattern::Protected(n) => Pattern::Protected(self.rename(n)),
            Pattern::Compound(l, r) => {
                Pattern::compound(self.pattern(l), self.pattern(r))
            }
        }
    }

    pub fn process(&mut self, p: &Process) -> Process {
        match p {
            Process::Null => Process::Null,
            Process::Success => Process::Success,
            Process::Case(pat, body) => {
                let pat = self.pattern(pat);
                Process::case(pat, self.process(body))
            }
            Process::Par(l, r) => Process::par(self.process(l), self.process(r)),
            Process::Replicate(b) => Process::replicate(self.process(b)),
            Process::Restrict(n, b) => {
                let n = self.rename(n);
                Process::restrict(n, self.process(b))
            }
        }
    }

    pub fn subst(&mut self, s: &Substitution) -> Substitution {
        Substitution::from_pairs(
            s.iter()
                .map(|(n, img)| (self.rename(n), self.pattern(img))),
        )
        .expect("renaming preserves image shape")
    }

    pub fn label(&mut self, l: &Label) -> Label {
        match l {
            Label::Tau => Label::Tau,
            Label::Out { extruded, pattern } => Label::Out {
                extruded: extruded.iter().map(|n| self.rename(n)).collect(),
                pattern: self.pattern(pattern),
            },
        }
    }
}

/// One-shot surfacing of a standalone process.
pub fn surfaced_process(p: &Process) -> Process {
    let mut s = Surfacer::new();
    s.reserve_process(p);
    s.process(p)
}

// ------------------------------------------------------------- tuple space

pub fn print_linda(p: &LindaProcess, style: Style) -> String {
    linda_str(p, style, Ctx::Par)
}

fn linda_str(p: &LindaProcess, style: Style, ctx: Ctx) -> String {
    match p {
        LindaProcess::Null => "0".into(),
        LindaProcess::Ok => "ok".into(),
        LindaProcess::Output(tuple) => {
            let names: Vec<String> = tuple.iter().map(name_str).collect();
            format!("out({})", names.join(", "))
        }
        LindaProcess::Input(template, body) => {
            let fields: Vec<String> = template
                .iter()
                .map(|f| match f {
                    TemplateField::Bind(x) => match style {
                        Style::Ascii => format!("\\{}", name_str(x)),
                        Style::Unicode => format!("λ{}", name_str(x)),
                    },
                    TemplateField::Exact(b) => format!("={}", name_str(b)),
                })
                .collect();
            let head = format!("in({})", fields.join(", "));
            if **body == LindaProcess::Null {
                head
            } else {
                format!("{head}.{}", linda_str(body, style, Ctx::Term))
            }
        }
        LindaProcess::Par(l, r) => {
            let s = format!(
                "{} | {}",
                linda_str(l, style, Ctx::Par),
                linda_str(r, style, Ctx::Term)
            );
            if ctx > Ctx::Par {
                format!("({s})")
            } else {
                s
            }
        }
        LindaProcess::Replicate(b) => format!("!{}", linda_str(b, style, Ctx::Term)),
        LindaProcess::Restrict(..) => {
            let mut names = Vec::new();
            let mut body = p;
            while let LindaProcess::Restrict(n, b) = body {
                names.push(name_str(n));
                body = b;
            }
            format!(
                "({}{}) {}",
                style.new_kw(),
                names.join(", "),
                linda_str(body, style, Ctx::Term)
            )
        }
    }
}

// ---------------------------------------------------------- message passing

pub fn print_spi(p: &SpiProcess) -> String {
    spi_str(&presentable_spi(p), Ctx::Par)
}

pub fn print_spi_term(t: &SpiTerm) -> String {
    sterm_str(t)
}

fn sterm_str(t: &SpiTerm) -> String {
    match t {
        ST::Name(n) | ST::Var(n) => name_str(n),
        ST::Zero => "0".into(),
        ST::Int(k) => k.to_string(),
        ST::Suc(b) => format!("suc({})", sterm_str(b)),
        ST::Pair(l, r) => format!("({}, {})", sterm_str(l), sterm_str(r)),
        ST::Encrypt(b, k) => format!("{{{}}}{}", sterm_str(b), sterm_str(k)),
    }
}

fn spi_str(p: &SpiProcess, ctx: Ctx) -> String {
    match p {
        SP::Null => "0".into(),
        SP::Ok => "ok".into(),
        SP::Par(l, r) => {
            let s = format!("{} | {}", spi_str(l, Ctx::Par), spi_str(r, Ctx::Term));
            if ctx > Ctx::Par {
                format!("({s})")
            } else {
                s
            }
        }
        SP::Replicate(b) => format!("!{}", spi_str(b, Ctx::Term)),
        SP::Restrict(..) => {
            let mut names = Vec::new();
            let mut body = p;
            while let SP::Restrict(n, b) = body {
                names.push(name_str(n));
                body = b;
            }
            format!("(new {}) {}", names.join(", "), spi_str(body, Ctx::Term))
        }
        SP::Input(chan, x, b) => format!(
            "{}?({}).{}",
            sterm_str(chan),
            name_str(x),
            spi_str(b, Ctx::Term)
        ),
        SP::Output(chan, payload, b) => format!(
            "{}!<{}>.{}",
            sterm_str(chan),
            sterm_str(payload),
            spi_str(b, Ctx::Term)
        ),
        SP::MatchEq(m, n, b) => format!(
            "[{} is {}]{}",
            sterm_str(m),
            sterm_str(n),
            spi_str(b, Ctx::Term)
        ),
        SP::SplitPair(x, y, m, b) => format!(
            "let ({}, {}) = {} in {}",
            name_str(x),
            name_str(y),
            sterm_str(m),
            spi_str(b, Ctx::Term)
        ),
        SP::CaseDecrypt(m, x, key, b) => format!(
            "case {} of {{{}}}{} : {}",
            sterm_str(m),
            name_str(x),
            sterm_str(key),
            spi_str(b, Ctx::Term)
        ),
        SP::CaseInt(m, z, x, s) => format!(
            "case {} of 0 : {} suc({}) : {}",
            sterm_str(m),
            spi_str(z, Ctx::Term),
            name_str(x),
            spi_str(s, Ctx::Term)
        ),
    }
}

/// Prepares a message-passing process for printing: minted names get fresh
/// surface spellings, and a binder whose scope holds a free occurrence of
/// the same spelling in the other namespace is α-renamed away, since the
/// parser would otherwise hand that occurrence to the binder.
fn presentable_spi(p: &SpiProcess) -> SpiProcess {
    let mut used: BTreeSet<String> = BTreeSet::new();
    collect_spellings(p, &mut used);
    let mut fresh = 0usize;
    fix_spi(p, &mut used, &mut fresh)
}

fn collect_spellings(p: &SpiProcess, out: &mut BTreeSet<String>) {
    fn term(t: &SpiTerm, out: &mut BTreeSet<String>) {
        collect_term_spellings(t, out);
    }
    match p {
        SP::Null | SP::Ok => {}
        SP::Par(l, r) => {
            collect_spellings(l, out);
            collect_spellings(r, out);
        }
        SP::Replicate(b) => collect_spellings(b, out),
        SP::Restrict(n, b) => {
            if let Some(s) = n.as_surface() {
                out.insert(s.into());
            }
            collect_spellings(b, out);
        }
        SP::Input(c, x, b) => {
            term(c, out);
            if let Some(s) = x.as_surface() {
                out.insert(s.into());
            }
            collect_spellings(b, out);
        }
        SP::Output(c, m, b) => {
            term(c, out);
            term(m, out);
            collect_spellings(b, out);
        }
        SP::MatchEq(m, n, b) => {
            term(m, out);
            term(n, out);
            collect_spellings(b, out);
        }
        SP::SplitPair(x, y, m, b) => {
            for v in [x, y] {
                if let Some(s) = v.as_surface() {
                    out.insert(s.into());
                }
            }
            term(m, out);
            collect_spellings(b, out);
        }
        SP::CaseDecrypt(m, x, k, b) => {
            term(m, out);
            term(k, out);
            if let Some(s) = x.as_surface() {
                out.insert(s.into());
            }
            collect_spellings(b, out);
        }
        SP::CaseInt(m, z, x, s) => {
            term(m, out);
            collect_spellings(z, out);
            if let Some(sp) = x.as_surface() {
                out.insert(sp.into());
            }
            collect_spellings(s, out);
        }
    }
}

fn collect_term_spellings(t: &SpiTerm, out: &mut BTreeSet<String>) {
    match t {
        ST::Name(n) | ST::Var(n) => {
            if let Some(s) = n.as_surface() {
                out.insert(s.into());
            }
        }
        ST::Zero | ST::Int(_) => {}
        ST::Suc(b) => collect_term_spellings(b, out),
        ST::Pair(l, r) | ST::Encrypt(l, r) => {
            collect_term_spellings(l, out);
            collect_term_spellings(r, out);
        }
    }
}

fn mint(used: &mut BTreeSet<String>, fresh: &mut usize) -> Name {
    loop {
        let cand = format!("_r{}", *fresh);
        *fresh += 1;
        if used.insert(cand.clone()) {
            return Name::surface(&cand);
        }
    }
}

/// Free names (restriction namespace) of a message-passing process.
fn spi_free_chans(p: &SpiProcess) -> BTreeSet<Name> {
    fn term(t: &SpiTerm, out: &mut BTreeSet<Name>) {
        match t {
            ST::Name(n) => {
                out.insert(n.clone());
            }
            ST::Var(_) | ST::Zero | ST::Int(_) => {}
            ST::Suc(b) => term(b, out),
            ST::Pair(l, r) | ST::Encrypt(l, r) => {
                term(l, out);
                term(r, out);
            }
        }
    }
    fn go(p: &SpiProcess, out: &mut BTreeSet<Name>) {
        match p {
            SP::Null | SP::Ok => {}
            SP::Par(l, r) => {
                go(l, out);
                go(r, out);
            }
            SP::Replicate(b) => go(b, out),
            SP::Restrict(n, b) => {
                let mut inner = BTreeSet::new();
                go(b, &mut inner);
                inner.remove(n);
                out.extend(inner);
            }
            SP::Input(c, _, b) => {
                term(c, out);
                go(b, out);
            }
            SP::Output(c, m, b) => {
                term(c, out);
                term(m, out);
                go(b, out);
            }
            SP::MatchEq(m, n, b) => {
                term(m, out);
                term(n, out);
                go(b, out);
            }
            SP::SplitPair(_, _, m, b) => {
                term(m, out);
                go(b, out);
            }
            SP::CaseDecrypt(m, _, k, b) => {
                term(m, out);
                term(k, out);
                go(b, out);
            }
            SP::CaseInt(m, z, _, s) => {
                term(m, out);
                go(z, out);
                go(s, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(p, &mut out);
    out
}

/// Free variables (binder namespace) of a message-passing process.
fn spi_free_vars(p: &SpiProcess) -> BTreeSet<Name> {
    fn term(t: &SpiTerm, out: &mut BTreeSet<Name>) {
        match t {
            ST::Var(n) => {
                out.insert(n.clone());
            }
            ST::Name(_) | ST::Zero | ST::Int(_) => {}
            ST::Suc(b) => term(b, out),
            ST::Pair(l, r) | ST::Encrypt(l, r) => {
                term(l, out);
                term(r, out);
            }
        }
    }
    fn go(p: &SpiProcess, out: &mut BTreeSet<Name>) {
        match p {
            SP::Null | SP::Ok => {}
            SP::Par(l, r) => {
                go(l, out);
                go(r, out);
            }
            SP::Replicate(b) | SP::Restrict(_, b) => go(b, out),
            SP::Input(c, x, b) => {
                term(c, out);
                scoped(b, &[x], out);
            }
            SP::Output(c, m, b) => {
                term(c, out);
                term(m, out);
                go(b, out);
            }
            SP::MatchEq(m, n, b) => {
                term(m, out);
                term(n, out);
                go(b, out);
            }
            SP::SplitPair(x, y, m, b) => {
                term(m, out);
                scoped(b, &[x, y], out);
            }
            SP::CaseDecrypt(m, x, k, b) => {
                term(m, out);
                term(k, out);
                scoped(b, &[x], out);
            }
            SP::CaseInt(m, z, x, s) => {
                term(m, out);
                go(z, out);
                scoped(s, &[x], out);
            }
        }
    }
    fn scoped(b: &SpiProcess, binders: &[&Name], out: &mut BTreeSet<Name>) {
        let mut inner = BTreeSet::new();
        go(b, &mut inner);
        for x in binders {
            inner.remove(*x);
        }
        out.extend(inner);
    }
    let mut out = BTreeSet::new();
    go(p, &mut out);
    out
}

fn spells(n: &Name, set: &BTreeSet<Name>) -> bool {
    match n.as_surface() {
        Some(s) => set
            .iter()
            .any(|m| m.as_surface().map(|t| t == s).unwrap_or(false)),
        None => false,
    }
}

/// Renames all free occurrences of variable `from` to `to`.
fn rename_free_var(p: &SpiProcess, from: &Name, to: &Name) -> SpiProcess {
    let map: BTreeMap<Name, SpiTerm> =
        [(from.clone(), SpiTerm::Var(to.clone()))].into();
    cpc_core::subst_spi(&map, p)
}

/// Renames all free occurrences of channel name `from` to `to`; `to` is
/// globally unused, so no capture check is needed.
fn rename_free_chan(p: &SpiProcess, from: &Name, to: &Name) -> SpiProcess {
    fn term(t: &SpiTerm, from: &Name, to: &Name) -> SpiTerm {
        match t {
            ST::Name(n) if n == from => SpiTerm::Name(to.clone()),
            ST::Name(_) | ST::Var(_) | ST::Zero | ST::Int(_) => t.clone(),
            ST::Suc(b) => SpiTerm::suc(term(b, from, to)),
            ST::Pair(l, r) => SpiTerm::pair(term(l, from, to), term(r, from, to)),
            ST::Encrypt(l, r) => SpiTerm::encrypt(term(l, from, to), term(r, from, to)),
        }
    }
    match p {
        SP::Null => SP::Null,
        SP::Ok => SP::Ok,
        SP::Par(l, r) => SpiProcess::par(
            rename_free_chan(l, from, to),
            rename_free_chan(r, from, to),
        ),
        SP::Replicate(b) => SpiProcess::replicate(rename_free_chan(b, from, to)),
        SP::Restrict(n, _) if n == from => p.clone(),
        SP::Restrict(n, b) => SpiProcess::restrict(n.clone(), rename_free_chan(b, from, to)),
        SP::Input(c, x, b) => SpiProcess::input(
            term(c, from, to),
            x.clone(),
            rename_free_chan(b, from, to),
        ),
        SP::Output(c, m, b) => SpiProcess::output(
            term(c, from, to),
            term(m, from, to),
            rename_free_chan(b, from, to),
        ),
        SP::MatchEq(m, n, b) => SpiProcess::match_eq(
            term(m, from, to),
            term(n, from, to),
            rename_free_chan(b, from, to),
        ),
        SP::SplitPair(x, y, m, b) => SpiProcess::split_pair(
            x.clone(),
            y.clone(),
            term(m, from, to),
            rename_free_chan(b, from, to),
        ),
        SP::CaseDecrypt(m, x, k, b) => SpiProcess::case_decrypt(
            term(m, from, to),
            x.clone(),
            term(k, from, to),
            rename_free_chan(b, from, to),
        ),
        SP::CaseInt(m, z, x, s) => SpiProcess::case_int(
            term(m, from, to),
            rename_free_chan(z, from, to),
            x.clone(),
            rename_free_chan(s, from, to),
        ),
    }
}

fn fix_spi(p: &SpiProcess, used: &mut BTreeSet<String>, fresh: &mut usize) -> SpiProcess {
    // A variable binder must not cover a free channel of the same spelling,
    // and vice versa; minted names need a spelling at all.
    let fix_var = |x: &Name, b: &SpiProcess, used: &mut BTreeSet<String>, fresh: &mut usize| {
        if x.is_fresh() || spells(x, &spi_free_chans(b)) {
            let nx = mint(used, fresh);
            (nx.clone(), rename_free_var(b, x, &nx))
        } else {
            (x.clone(), b.clone())
        }
    };
    match p {
        SP::Null => SP::Null,
        SP::Ok => SP::Ok,
        SP::Par(l, r) => {
            SpiProcess::par(fix_spi(l, used, fresh), fix_spi(r, used, fresh))
        }
        SP::Replicate(b) => SpiProcess::replicate(fix_spi(b, used, fresh)),
        SP::Restrict(n, b) => {
            let (n, b) = if n.is_fresh() || spells(n, &spi_free_vars(b)) {
                let nn = mint(used, fresh);
                (nn.clone(), rename_free_chan(b, n, &nn))
            } else {
                (n.clone(), (**b).clone())
            };
            SpiProcess::restrict(n, fix_spi(&b, used, fresh))
        }
        SP::Input(c, x, b) => {
            let (x, b) = fix_var(x, b, used, fresh);
            SpiProcess::input(fix_term(c, used, fresh), x, fix_spi(&b, used, fresh))
        }
        SP::Output(c, m, b) => SpiProcess::output(
            fix_term(c, used, fresh),
            fix_term(m, used, fresh),
            fix_spi(b, used, fresh),
        ),
        SP::MatchEq(m, n, b) => SpiProcess::match_eq(
            fix_term(m, used, fresh),
            fix_term(n, used, fresh),
            fix_spi(b, used, fresh),
        ),
        SP::SplitPair(x, y, m, b) => {
            let (x, b) = fix_var(x, b, used, fresh);
            let (y, b) = fix_var(y, &b, used, fresh);
            SpiProcess::split_pair(x, y, fix_term(m, used, fresh), fix_spi(&b, used, fresh))
        }
        SP::CaseDecrypt(m, x, k, b) => {
            let (x, b) = fix_var(x, b, used, fresh);
            SpiProcess::case_decrypt(
                fix_term(m, used, fresh),
                x,
                fix_term(k, used, fresh),
                fix_spi(&b, used, fresh),
            )
        }
        SP::CaseInt(m, z, x, s) => {
            let (x, s) = fix_var(x, s, used, fresh);
            SpiProcess::case_int(
                fix_term(m, used, fresh),
                fix_spi(z, used, fresh),
                x,
                fix_spi(&s, used, fresh),
            )
        }
    }
}

/// Minted names inside terms (free positions) get spellings too.
fn fix_term(t: &SpiTerm, used: &mut BTreeSet<String>, fresh: &mut usize) -> SpiTerm {
    match t {
        ST::Name(n) if n.is_fresh() => SpiTerm::Name(mint(used, fresh)),
        ST::Var(n) if n.is_fresh() => SpiTerm::Var(mint(used, fresh)),
        ST::Name(_) | ST::Var(_) | ST::Zero | ST::Int(_) => t.clone(),
        ST::Suc(b) => SpiTerm::suc(fix_term(b, used, fresh)),
        ST::Pair(l, r) => SpiTerm::pair(fix_term(l, used, fresh), fix_term(r, used, fresh)),
        ST::Encrypt(l, r) => {
            SpiTerm::encrypt(fix_term(l, used, fresh), fix_term(r, used, fresh))
        }
    }
}
