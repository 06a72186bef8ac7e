//! Parser for the message-passing surface syntax.
//!
//! Prefixes are `M!<N>.P` and `M?(x).P`; guards are `[M is N]P`,
//! `let (x,y) = M in P`, `case M of {x}N : P` and `case M of 0 : P
//! suc(x) : Q`. Terms are names, variables, `(M,N)`, `{M}N`, `suc(M)`, `0`
//! and integer literals; every composite is self-delimiting, so terms need
//! no precedence.
//!
//! The abstract syntax keeps names and variables in separate namespaces,
//! while the surface has one pool of identifiers. The parser resolves each
//! identifier against the binders in scope: bound by an input, split,
//! decryption or successor arm it is a variable; bound by `(new x)` or free
//! it is a name. A decryption key is read in the scope outside its own
//! binder.

use crate::lex::{Cursor, ParseError, Tok};
use cpc_core::{Name, SpiProcess, SpiTerm};
use std::collections::BTreeMap;

const RESERVED: &[&str] = &["ok", "new", "let", "in", "case", "of", "is", "suc"];

pub fn parse_spi(src: &str) -> Result<SpiProcess, ParseError> {
    let mut cur = Cursor::new(src)?;
    let p = par(&mut cur)?;
    cur.expect_eof()?;
    Ok(resolve_proc(&p, &BTreeMap::new()))
}

fn par(cur: &mut Cursor) -> Result<SpiProcess, ParseError> {
    let mut acc = term(cur)?;
    while cur.eat(&Tok::Bar) {
        let rhs = term(cur)?;
        acc = SpiProcess::par(acc, rhs);
    }
    Ok(acc)
}

fn term(cur: &mut Cursor) -> Result<SpiProcess, ParseError> {
    match cur.peek().clone() {
        Tok::Bang => {
            cur.bump();
            Ok(SpiProcess::replicate(term(cur)?))
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
                SpiProcess::restrict(Name::surface(&n), acc)
            }))
        }
        Tok::Ident(s) if s == "ok" => {
            cur.bump();
            Ok(SpiProcess::Ok)
        }
        Tok::LBracket => {
            cur.bump();
            let m = sterm(cur)?;
            match cur.bump() {
                Tok::Ident(s) if s == "is" => {}
                other => {
                    return Err(ParseError::new(
                        cur.pos(),
                        format!("expected `is`, found {other}"),
                    ))
                }
            }
            let n = sterm(cur)?;
            cur.expect(&Tok::RBracket, "`]`")?;
            let body = term(cur)?;
            Ok(SpiProcess::match_eq(m, n, body))
        }
        Tok::Ident(s) if s == "let" => {
            let start = cur.pos();
            cur.bump();
            cur.expect(&Tok::LParen, "`(` after `let`")?;
            let x = cur.name(RESERVED, "a name")?;
            cur.expect(&Tok::Comma, "`,`")?;
            let y = cur.name(RESERVED, "a name")?;
            cur.expect(&Tok::RParen, "`)`")?;
            if x == y {
                return Err(ParseError::new(
                    start,
                    format!("pair split binds `{x}` twice"),
                ));
            }
            cur.expect(&Tok::Eq, "`=`")?;
            let m = sterm(cur)?;
            match cur.bump() {
                Tok::Ident(s) if s == "in" => {}
                other => {
                    return Err(ParseError::new(
                        cur.pos(),
                        format!("expected `in`, found {other}"),
                    ))
                }
            }
            let body = term(cur)?;
            Ok(SpiProcess::split_pair(
                Name::surface(&x),
                Name::surface(&y),
                m,
                body,
            ))
        }
        Tok::Ident(s) if s == "case" => {
            cur.bump();
            let m = sterm(cur)?;
            match cur.bump() {
                Tok::Ident(s) if s == "of" => {}
                other => {
                    return Err(ParseError::new(
                        cur.pos(),
                        format!("expected `of`, found {other}"),
                    ))
                }
            }
            match cur.peek().clone() {
                Tok::LBrace => {
                    cur.bump();
                    let x = cur.name(RESERVED, "a name")?;
                    cur.expect(&Tok::RBrace, "`}`")?;
                    let key = sterm(cur)?;
                    cur.expect(&Tok::Colon, "`:`")?;
                    let body = term(cur)?;
                    Ok(SpiProcess::case_decrypt(m, Name::surface(&x), key, body))
                }
                Tok::Int(0) => {
                    cur.bump();
                    cur.expect(&Tok::Colon, "`:`")?;
                    let zero = term(cur)?;
                    match cur.bump() {
                        Tok::Ident(s) if s == "suc" => {}
                        other => {
                            return Err(ParseError::new(
                                cur.pos(),
                                format!("expected `suc`, found {other}"),
                            ))
                        }
                    }
                    cur.expect(&Tok::LParen, "`(`")?;
                    let x = cur.name(RESERVED, "a name")?;
                    cur.expect(&Tok::RParen, "`)`")?;
                    cur.expect(&Tok::Colon, "`:`")?;
                    let sucb = term(cur)?;
                    Ok(SpiProcess::case_int(m, zero, Name::surface(&x), sucb))
                }
                other => Err(ParseError::new(
                    cur.pos(),
                    format!("expected `{{x}}key : P` or `0 : P suc(x) : Q`, found {other}"),
                )),
            }
        }
        Tok::Int(0)
            if cur.peek2() != &Tok::Bang && cur.peek2() != &Tok::Question =>
        {
            cur.bump();
            Ok(SpiProcess::Null)
        }
        _ => prefix_or_group(cur),
    }
}

/// A send, a receive, or a parenthesized process; decided by reading a
/// message term first and looking for `!<` or `?(` behind it.
fn prefix_or_group(cur: &mut Cursor) -> Result<SpiProcess, ParseError> {
    let mark = cur.save();
    let channel = match sterm(cur) {
        Ok(m) => m,
        Err(e) => {
            cur.restore(mark);
            if cur.peek() == &Tok::LParen {
                cur.bump();
                let p = par(cur)?;
                cur.expect(&Tok::RParen, "`)`")?;
                return Ok(p);
            }
            return Err(e);
        }
    };
    if cur.peek() == &Tok::Bang && cur.peek2() == &Tok::Lt {
        cur.bump();
        cur.bump();
        let payload = sterm(cur)?;
        cur.expect(&Tok::Gt, "`>`")?;
        cur.expect(&Tok::Dot, "`.`")?;
        let body = term(cur)?;
        Ok(SpiProcess::output(channel, payload, body))
    } else if cur.eat(&Tok::Question) {
        cur.expect(&Tok::LParen, "`(`")?;
        let x = cur.name(RESERVED, "a name")?;
        cur.expect(&Tok::RParen, "`)`")?;
        cur.expect(&Tok::Dot, "`.`")?;
        let body = term(cur)?;
        Ok(SpiProcess::input(channel, Name::surface(&x), body))
    } else {
        cur.restore(mark);
        if cur.peek() == &Tok::LParen {
            cur.bump();
            let p = par(cur)?;
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(p)
        } else {
            Err(ParseError::new(
                cur.pos(),
                "expected `!<N>.P` or `?(x).P` after a message term",
            ))
        }
    }
}

fn sterm(cur: &mut Cursor) -> Result<SpiTerm, ParseError> {
    match cur.peek().clone() {
        Tok::Ident(s) if s == "suc" => {
            cur.bump();
            cur.expect(&Tok::LParen, "`(` after `suc`")?;
            let t = sterm(cur)?;
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(SpiTerm::suc(t))
        }
        Tok::Ident(_) => {
            // Provisionally a variable; the resolution pass decides.
            Ok(SpiTerm::Var(Name::surface(&cur.name(RESERVED, "a name")?)))
        }
        Tok::Int(0) => {
            cur.bump();
            Ok(SpiTerm::Zero)
        }
        Tok::Int(k) => {
            cur.bump();
            Ok(SpiTerm::Int(k))
        }
        Tok::LBrace => {
            cur.bump();
            let body = sterm(cur)?;
            cur.expect(&Tok::RBrace, "`}`")?;
            let key = sterm(cur)?;
            Ok(SpiTerm::encrypt(body, key))
        }
        Tok::LParen => {
            cur.bump();
            let l = sterm(cur)?;
            if cur.eat(&Tok::Comma) {
                let r = sterm(cur)?;
                cur.expect(&Tok::RParen, "`)`")?;
                Ok(SpiTerm::pair(l, r))
            } else {
                cur.expect(&Tok::RParen, "`)`")?;
                Ok(l)
            }
        }
        other => Err(ParseError::new(
            cur.pos(),
            format!("expected a message term, found {other}"),
        )),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Var,
    Chan,
}

fn spelling(n: &Name) -> String {
    n.as_surface().expect("parsed names are surface").to_string()
}

fn resolve_term(t: &SpiTerm, env: &BTreeMap<String, Kind>) -> SpiTerm {
    match t {
        SpiTerm::Var(n) => match env.get(&spelling(n)) {
            Some(Kind::Var) => SpiTerm::Var(n.clone()),
            _ => SpiTerm::Name(n.clone()),
        },
        SpiTerm::Name(_) | SpiTerm::Zero | SpiTerm::Int(_) => t.clone(),
        SpiTerm::Pair(l, r) => SpiTerm::pair(resolve_term(l, env), resolve_term(r, env)),
        SpiTerm::Suc(b) => SpiTerm::suc(resolve_term(b, env)),
        SpiTerm::Encrypt(b, k) => {
            SpiTerm::encrypt(resolve_term(b, env), resolve_term(k, env))
        }
    }
}

fn with(env: &BTreeMap<String, Kind>, n: &Name, k: Kind) -> BTreeMap<String, Kind> {
    let mut e = env.clone();
    e.insert(spelling(n), k);
    e
}

fn resolve_proc(p: &SpiProcess, env: &BTreeMap<String, Kind>) -> SpiProcess {
    match p {
        SpiProcess::Null => SpiProcess::Null,
        SpiProcess::Ok => SpiProcess::Ok,
        SpiProcess::Par(l, r) => {
            SpiProcess::par(resolve_proc(l, env), resolve_proc(r, env))
        }
        SpiProcess::Replicate(b) => SpiProcess::replicate(resolve_proc(b, env)),
        SpiProcess::Restrict(n, b) => {
            SpiProcess::restrict(n.clone(), resolve_proc(b, &with(env, n, Kind::Chan)))
        }
        SpiProcess::Input(chan, x, b) => SpiProcess::input(
            resolve_term(chan, env),
            x.clone(),
            resolve_proc(b, &with(env, x, Kind::Var)),
        ),
        SpiProcess::Output(chan, payload, b) => SpiProcess::output(
            resolve_term(chan, env),
            resolve_term(payload, env),
            resolve_proc(b, env),
        ),
        SpiProcess::MatchEq(m, n, b) => SpiProcess::match_eq(
            resolve_term(m, env),
            resolve_term(n, env),
            resolve_proc(b, env),
        ),
        SpiProcess::SplitPair(x, y, m, b) => {
            let inner = with(&with(env, x, Kind::Var), y, Kind::Var);
            SpiProcess::split_pair(
                x.clone(),
                y.clone(),
                resolve_term(m, env),
                resolve_proc(b, &inner),
            )
        }
        SpiProcess::CaseDecrypt(m, x, key, b) => SpiProcess::case_decrypt(
            resolve_term(m, env),
            x.clone(),
            resolve_term(key, env),
            resolve_proc(b, &with(env, x, Kind::Var)),
        ),
        SpiProcess::CaseInt(m, z, x, s) => SpiProcess::case_int(
            resolve_term(m, env),
            resolve_proc(z, env),
            x.clone(),
            resolve_proc(s, &with(env, x, Kind::Var)),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nm(s: &str) -> Name {
        Name::surface(s)
    }

    fn name(s: &str) -> SpiTerm {
        SpiTerm::Name(nm(s))
    }

    fn var(s: &str) -> SpiTerm {
        SpiTerm::Var(nm(s))
    }

    #[test]
    fn send_receive_and_scope() {
        let p = parse_spi("a?(x).x!<m>.0 | x!<n>.0").unwrap();
        let want = SpiProcess::par(
            SpiProcess::input(
                name("a"),
                nm("x"),
                SpiProcess::output(var("x"), name("m"), SpiProcess::Null),
            ),
            SpiProcess::output(name("x"), name("n"), SpiProcess::Null),
        );
        assert_eq!(p, want);
    }

    #[test]
    fn decryption_key_is_outside_the_binder() {
        let p = parse_spi("case {m}x of {x}x : x!<0>.0").unwrap();
        let want = SpiProcess::case_decrypt(
            SpiTerm::encrypt(name("m"), name("x")),
            nm("x"),
            name("x"),
            SpiProcess::output(var("x"), SpiTerm::Zero, SpiProcess::Null),
        );
        assert_eq!(p, want);
    }

    #[test]
    fn restriction_binds_a_channel_name() {
        let p = parse_spi("(new k) k!<m>.0").unwrap();
        let want = SpiProcess::restrict(
            nm("k"),
            SpiProcess::output(name("k"), name("m"), SpiProcess::Null),
        );
        assert_eq!(p, want);
    }

    #[test]
    fn guards_and_numerals() {
        let p = parse_spi("[suc(0) is 1]ok").unwrap();
        let want = SpiProcess::match_eq(
            SpiTerm::suc(SpiTerm::Zero),
            SpiTerm::Int(1),
            SpiProcess::Ok,
        );
        assert_eq!(p, want);

        let p = parse_spi("case 2 of 0 : ok suc(y) : y!<0>.0").unwrap();
        let want = SpiProcess::case_int(
            SpiTerm::Int(2),
            SpiProcess::Ok,
            nm("y"),
            SpiProcess::output(var("y"), SpiTerm::Zero, SpiProcess::Null),
        );
        assert_eq!(p, want);
    }

    #[test]
    fn splits_and_pairs() {
        let p = parse_spi("let (x, y) = (m, n) in x!<y>.0").unwrap();
        let want = SpiProcess::split_pair(
            nm("x"),
            nm("y"),
            SpiTerm::pair(name("m"), name("n")),
            SpiProcess::output(var("x"), var("y"), SpiProcess::Null),
        );
        assert_eq!(p, want);
        let e = parse_spi("let (x, x) = (m, n) in 0").unwrap_err();
        assert!(e.msg.contains("binds `x` twice"), "{e}");
    }

    #[test]
    fn zero_channel_prefixes_still_parse() {
        let p = parse_spi("0!<m>.0").unwrap();
        let want = SpiProcess::output(SpiTerm::Zero, name("m"), SpiProcess::Null);
        assert_eq!(p, want);
        assert_eq!(parse_spi("0").unwrap(), SpiProcess::Null);
    }

    #[test]
    fn groups_against_prefixes() {
        let p = parse_spi("(a!<m>.0 | b?(x).ok)").unwrap();
        assert!(matches!(p, SpiProcess::Par(_, _)));
        // a parenthesized pair used as a channel
        let p = parse_spi("(m, n)!<k>.0").unwrap();
        assert!(matches!(p, SpiProcess::Output(SpiTerm::Pair(_, _), _, _)));
    }

    #[test]
    fn replication_spans_the_prefix() {
        let p = parse_spi("!a?(x).a!<x>.0 | a!<m>.0").unwrap();
        match p {
            SpiProcess::Par(l, _) => assert!(matches!(*l, SpiProcess::Replicate(_))),
            other => panic!("wrong shape: {other:?}"),
        }
    }
}
