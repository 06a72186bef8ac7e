//! Parser for the tuple-space surface syntax.
//!
//! `out(a, b)` drops a tuple, `in(\x, =b).P` consumes one; the continuation
//! dot may be omitted when the continuation is `0`. `|`, `!`, `(new x)`,
//! `0` and `ok` read as in the calculus syntax.

use crate::lex::{Cursor, ParseError, Tok};
use cpc_core::{LindaProcess, Name, TemplateField};
use std::collections::BTreeSet;

const RESERVED: &[&str] = &["ok", "new", "in", "out"];

pub fn parse_linda(src: &str) -> Result<LindaProcess, ParseError> {
    let mut cur = Cursor::new(src)?;
    let p = par(&mut cur)?;
    cur.expect_eof()?;
    Ok(p)
}

fn par(cur: &mut Cursor) -> Result<LindaProcess, ParseError> {
    let mut acc = term(cur)?;
    while cur.eat(&Tok::Bar) {
        let rhs = term(cur)?;
        acc = LindaProcess::par(acc, rhs);
    }
    Ok(acc)
}

fn term(cur: &mut Cursor) -> Result<LindaProcess, ParseError> {
    match cur.peek().clone() {
        Tok::Bang => {
            cur.bump();
            Ok(LindaProcess::replicate(term(cur)?))
        }
        Tok::Int(0) => {
            cur.bump();
            Ok(LindaProcess::Null)
        }
        Tok::Ident(s) if s == "ok" => {
            cur.bump();
            Ok(LindaProcess::Ok)
        }
        Tok::Ident(s) if s == "out" => {
            cur.bump();
            cur.expect(&Tok::LParen, "`(` after `out`")?;
            let mut tuple = Vec::new();
            if cur.peek() != &Tok::RParen {
                tuple.push(Name::surface(&cur.name(RESERVED, "a name")?));
                while cur.eat(&Tok::Comma) {
                    tuple.push(Name::surface(&cur.name(RESERVED, "a name")?));
                }
            }
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(LindaProcess::Output(tuple))
        }
        Tok::Ident(s) if s == "in" => {
            cur.bump();
            let start = cur.pos();
            cur.expect(&Tok::LParen, "`(` after `in`")?;
            let mut template = Vec::new();
            if cur.peek() != &Tok::RParen {
                template.push(field(cur)?);
                while cur.eat(&Tok::Comma) {
                    template.push(field(cur)?);
                }
            }
            cur.expect(&Tok::RParen, "`)`")?;
            let mut seen = BTreeSet::new();
            for f in &template {
                if let TemplateField::Bind(x) = f {
                    if !seen.insert(x.clone()) {
                        return Err(ParseError::new(
                            start,
                            format!("template binds `{x}` twice"),
                        ));
                    }
                }
            }
            let body = if cur.eat(&Tok::Dot) {
                term(cur)?
            } else {
                LindaProcess::Null
            };
            Ok(LindaProcess::input(template, body))
        }
        Tok::LParen if cur.peek2() == &Tok::Ident("new".into()) => {
            cur.bump();
            cur.bump();
            let mut names = vec![cur.name(RESERVED, "a name")?];
            while cur.eat(&Tok::Comma) {
                names.push(cur.name(RESERVED, "a name")?);
            }
            cur.expect(&Tok::RParen, "`)`")?;
            let body = term(cur)?;
            Ok(names.into_iter().rev().fold(body, |acc, n| {
                LindaProcess::restrict(Name::surface(&n), acc)
            }))
        }
        Tok::LParen => {
            cur.bump();
            let p = par(cur)?;
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(p)
        }
        other => Err(ParseError::new(
            cur.pos(),
            format!("expected a tuple-space process, found {other}"),
        )),
    }
}

fn field(cur: &mut Cursor) -> Result<TemplateField, ParseError> {
    match cur.peek().clone() {
        Tok::Backslash => {
            cur.bump();
            Ok(TemplateField::Bind(Name::surface(
                &cur.name(RESERVED, "a name")?,
            )))
        }
        Tok::Eq => {
            cur.bump();
            Ok(TemplateField::Exact(Name::surface(
                &cur.name(RESERVED, "a name")?,
            )))
        }
        other => Err(ParseError::new(
            cur.pos(),
            format!("expected `\\x` or `=x` in a template, found {other}"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        Name::surface(s)
    }

    #[test]
    fn output_and_input_forms() {
        let p = parse_linda("out(a, b) | in(\\x, =b).out(x)").unwrap();
        let want = LindaProcess::par(
            LindaProcess::Output(vec![n("a"), n("b")]),
            LindaProcess::input(
                vec![
                    TemplateField::Bind(n("x")),
                    TemplateField::Exact(n("b")),
                ],
                LindaProcess::Output(vec![n("x")]),
            ),
        );
        assert_eq!(p, want);
    }

    #[test]
    fn empty_tuples_and_bare_input() {
        let p = parse_linda("out() | in()").unwrap();
        let want = LindaProcess::par(
            LindaProcess::Output(vec![]),
            LindaProcess::input(vec![], LindaProcess::Null),
        );
        assert_eq!(p, want);
    }

    #[test]
    fn replication_and_restriction() {
        let p = parse_linda("(new c) (out(c) | !in(=c).ok)").unwrap();
        match p {
            LindaProcess::Restrict(name, _) => assert_eq!(name, n("c")),
            other => panic!("wrong shape: {other:?}"),
        }
    }

    #[test]
    fn duplicate_template_binder_is_rejected() {
        let e = parse_linda("in(\\x, \\x).ok").unwrap_err();
        assert!(e.msg.contains("binds `x` twice"), "{e}");
        assert!(parse_linda("in(\\x, =x).ok").is_ok());
    }
}
