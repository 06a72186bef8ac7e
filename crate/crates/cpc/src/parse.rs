//! Parser for the calculus surface syntax.
//!
//! Grammar, loosest to tightest: `P | Q`, then `p -> P` and `(new x) P`
//! (both stop at `|`), then `!`. The replication operand is a single unit,
//! so a replicated case must be written `!(p -> P)`; a bare pattern `p` is
//! shorthand for `p -> 0`. Case patterns are checked for well-formedness as
//! they are built, so duplicate binders fail with a position.

use crate::lex::{Cursor, ParseError, Pos, Tok};
use cpc_core::{Name, Pattern, Process};
use std::collections::BTreeSet;

/// Words with fixed meaning in process or pattern position.
const RESERVED: &[&str] = &["ok", "new"];

pub fn parse_process(src: &str) -> Result<Process, ParseError> {
    let mut cur = Cursor::new(src)?;
    let p = par(&mut cur)?;
    cur.expect_eof()?;
    Ok(p)
}

/// Parses a single pattern (the `unify` entry point).
pub fn parse_pattern(src: &str) -> Result<Pattern, ParseError> {
    let mut cur = Cursor::new(src)?;
    let start = cur.pos();
    let p = pattern(&mut cur)?;
    cur.expect_eof()?;
    well_formed(&p, start)?;
    Ok(p)
}

fn par(cur: &mut Cursor) -> Result<Process, ParseError> {
    let mut acc = term(cur)?;
    while cur.eat(&Tok::Bar) {
        let rhs = term(cur)?;
        acc = Process::par(acc, rhs);
    }
    Ok(acc)
}

fn starts_restriction(cur: &Cursor) -> bool {
    cur.peek() == &Tok::LParen && cur.peek2() == &Tok::Ident("new".into())
}

fn term(cur: &mut Cursor) -> Result<Process, ParseError> {
    match cur.peek() {
        Tok::Bang => {
            cur.bump();
            Ok(Process::replicate(bang_operand(cur)?))
        }
        Tok::Int(0) => {
            cur.bump();
            Ok(Process::Null)
        }
        Tok::Ident(s) if s == "ok" => {
            cur.bump();
            Ok(Process::Success)
        }
        Tok::LParen if starts_restriction(cur) => restriction(cur),
        _ => case_or_group(cur, true),
    }
}

/// `(new a, b) P` desugars to nested single restrictions.
fn restriction(cur: &mut Cursor) -> Result<Process, ParseError> {
    cur.expect(&Tok::LParen, "`(`")?;
    cur.bump(); // the `new` keyword, already sighted
    let mut names = vec![cur.name(RESERVED, "a name")?];
    while cur.eat(&Tok::Comma) {
        names.push(cur.name(RESERVED, "a name")?);
    }
    cur.expect(&Tok::RParen, "`)`")?;
    let body = term(cur)?;
    Ok(names.into_iter().rev().fold(body, |acc, n| {
        Process::restrict(Name::surface(&n), acc)
    }))
}

/// The unit after `!`: another `!`, a leaf, a restriction, a group, or a
/// bare pattern. A case arrow here would read two ways, so it is refused.
fn bang_operand(cur: &mut Cursor) -> Result<Process, ParseError> {
    match cur.peek() {
        Tok::Bang => {
            cur.bump();
            Ok(Process::replicate(bang_operand(cur)?))
        }
        Tok::Int(0) => {
            cur.bump();
            Ok(Process::Null)
        }
        Tok::Ident(s) if s == "ok" => {
            cur.bump();
            Ok(Process::Success)
        }
        Tok::LParen if starts_restriction(cur) => restriction(cur),
        _ => case_or_group(cur, false),
    }
}

/// A case, a bare-pattern shorthand, or a parenthesized process. Decided by
/// attempting a pattern first: `->` after it makes a case, anything else
/// leaves the shorthand; on pattern failure a leading `(` reopens as a
/// group.
fn case_or_group(cur: &mut Cursor, allow_arrow: bool) -> Result<Process, ParseError> {
    let start = cur.pos();
    let mark = cur.save();
    match pattern(cur) {
        Ok(p) => {
            if cur.peek() == &Tok::Arrow {
                if !allow_arrow {
                    return Err(ParseError::new(
                        cur.pos(),
                        "a replicated case needs parentheses: `!(p -> P)`",
                    ));
                }
                cur.bump();
                well_formed(&p, start)?;
                let body = term(cur)?;
                Ok(Process::case(p, body))
            } else {
                well_formed(&p, start)?;
                Ok(Process::case(p, Process::Null))
            }
        }
        Err(e) => {
            cur.restore(mark);
            if cur.peek() == &Tok::LParen {
                cur.bump();
                let p = par(cur)?;
                cur.expect(&Tok::RParen, "`)`")?;
                Ok(p)
            } else {
                Err(e)
            }
        }
    }
}

fn pattern(cur: &mut Cursor) -> Result<Pattern, ParseError> {
    let mut acc = patom(cur)?;
    while cur.eat(&Tok::Dot) {
        acc = Pattern::compound(acc, patom(cur)?);
    }
    Ok(acc)
}

fn patom(cur: &mut Cursor) -> Result<Pattern, ParseError> {
    match cur.peek().clone() {
        Tok::Backslash => {
            cur.bump();
            Ok(Pattern::Binding(Name::surface(&cur.name(RESERVED, "a name")?)))
        }
        Tok::Hash => {
            cur.bump();
            Ok(Pattern::Protected(Name::surface(
                &cur.name(RESERVED, "a name")?,
            )))
        }
        Tok::Ident(_) => Ok(Pattern::Variable(Name::surface(
            &cur.name(RESERVED, "a name")?,
        ))),
        Tok::LParen => {
            cur.bump();
            let p = pattern(cur)?;
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(p)
        }
        other => Err(ParseError::new(
            cur.pos(),
            format!("expected a pattern, found {other}"),
        )),
    }
}

/// Rejects duplicate binders and binder/free overlap, naming the culprit.
fn well_formed(p: &Pattern, pos: Pos) -> Result<(), ParseError> {
    let mut seen = BTreeSet::new();
    for b in p.binders_in_order() {
        if !seen.insert(b.clone()) {
            return Err(ParseError::new(pos, format!("pattern binds `{b}` twice")));
        }
    }
    let free = p.free_names();
    for b in &seen {
        if free.contains(b) {
            return Err(ParseError::new(
                pos,
                format!("pattern both binds and uses `{b}`"),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        Name::surface(s)
    }

    fn v(s: &str) -> Pattern {
        Pattern::Variable(n(s))
    }

    fn b(s: &str) -> Pattern {
        Pattern::Binding(n(s))
    }

    #[test]
    fn seller_pattern_from_the_trade_example() {
        let p = parse_process("#ABCShares . sharesID . \\x -> ok").unwrap();
        let want = Process::case(
            Pattern::compound(
                Pattern::compound(Pattern::Protected(n("ABCShares")), v("sharesID")),
                b("x"),
            ),
            Process::Success,
        );
        assert_eq!(p, want);
    }

    #[test]
    fn duplicate_binder_is_an_error_with_the_name() {
        let e = parse_process("\\x . \\x -> 0").unwrap_err();
        assert!(e.msg.contains("binds `x` twice"), "{e}");
        let e = parse_process("\\x . x -> 0").unwrap_err();
        assert!(e.msg.contains("binds and uses `x`"), "{e}");
    }

    #[test]
    fn precedence_arrow_tighter_than_bar() {
        let p = parse_process("x -> ok | y").unwrap();
        let want = Process::par(
            Process::case(v("x"), Process::Success),
            Process::case(v("y"), Process::Null),
        );
        assert_eq!(p, want);
    }

    #[test]
    fn arrow_chains_nest_to_the_right() {
        let p = parse_process("x -> y -> ok").unwrap();
        let want = Process::case(v("x"), Process::case(v("y"), Process::Success));
        assert_eq!(p, want);
    }

    #[test]
    fn replication_takes_one_unit() {
        let p = parse_process("!x | y").unwrap();
        let want = Process::par(
            Process::replicate(Process::case(v("x"), Process::Null)),
            Process::case(v("y"), Process::Null),
        );
        assert_eq!(p, want);
        assert!(parse_process("!x -> ok").is_err());
        assert!(parse_process("!(x -> ok)").is_ok());
    }

    #[test]
    fn restriction_scope_stops_at_bar() {
        let p = parse_process("(new a) x -> 0 | y").unwrap();
        let want = Process::par(
            Process::restrict(n("a"), Process::case(v("x"), Process::Null)),
            Process::case(v("y"), Process::Null),
        );
        assert_eq!(p, want);
    }

    #[test]
    fn comma_restriction_nests() {
        let p = parse_process("(new a, b) 0").unwrap();
        let want = Process::restrict(n("a"), Process::restrict(n("b"), Process::Null));
        assert_eq!(p, want);
    }

    #[test]
    fn groups_and_patterns_share_parentheses() {
        // a parenthesized pattern before an arrow
        let p = parse_process("(x . y) -> 0").unwrap();
        let want = Process::case(Pattern::compound(v("x"), v("y")), Process::Null);
        assert_eq!(p, want);
        // a parenthesized process where a pattern fails to parse
        let p = parse_process("(x -> 0 | y) | z").unwrap();
        assert!(matches!(p, Process::Par(_, _)));
    }

    #[test]
    fn unicode_marks_are_accepted() {
        let a = parse_process("⌐a¬ • b • λx → ok").unwrap();
        let bmk = parse_process("#a . b . \\x -> ok").unwrap();
        assert_eq!(a, bmk);
        let a = parse_process("(ν n) n → 0").unwrap();
        let bmk = parse_process("(new n) n -> 0").unwrap();
        assert_eq!(a, bmk);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_process("x ->\n  | y").unwrap_err();
        assert_eq!((e.pos.line, e.pos.col), (2, 3));
        let e = parse_pattern("a . ").unwrap_err();
        assert_eq!(e.pos.line, 1);
    }

    #[test]
    fn reserved_words_cannot_name_things() {
        assert!(parse_process("ok . x -> 0").is_err());
        assert!(parse_process("\\new -> 0").is_err());
    }
}
