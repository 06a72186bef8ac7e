//! Shared lexer for the three surface syntaxes.
//!
//! One token set covers all dialects; each parser rejects the tokens it has
//! no rule for. Keywords are left as identifiers so that, say, `out` can
//! name a channel in a dialect that has no tuple output. The pattern marks
//! have Unicode spellings (`λ`, `⌐x¬`, `•`, `→`, `ν`) accepted on input and
//! available to the printer behind a flag.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Backslash,
    Hash,
    Dot,
    Arrow,
    Bar,
    Bang,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Comma,
    Eq,
    Question,
    Colon,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(k) => write!(f, "`{k}`"),
            Tok::Backslash => f.write_str("`\\`"),
            Tok::Hash => f.write_str("`#`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Question => f.write_str("`?`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

/// A parse or lex failure, positioned as line:column (both 1-based).
#[derive(Clone, Debug, thiserror::Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes the whole input. `//` starts a comment running to end of line.
pub fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    loop {
        let pos = Pos { line, col };
        let Some(&c) = chars.peek() else {
            out.push((Tok::Eof, pos));
            return Ok(out);
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '/' => {
                bump!();
                if chars.peek() == Some(&'/') {
                    while let Some(&d) = chars.peek() {
                        if d == '\n' {
                            break;
                        }
                        bump!();
                    }
                } else {
                    return Err(ParseError::new(pos, "stray `/` (comments are `//`)"));
                }
            }
            '\\' | 'λ' => {
                bump!();
                out.push((Tok::Backslash, pos));
            }
            '#' => {
                bump!();
                out.push((Tok::Hash, pos));
            }
            '⌐' => {
                // The bracketed protected form lexes to the same tokens as
                // the `#` prefix form.
                bump!();
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if ident_continue(d) {
                        name.push(d);
                        bump!();
                    } else {
                        break;
                    }
                }
                if name.is_empty() || !ident_start(name.chars().next().unwrap()) {
                    return Err(ParseError::new(pos, "expected a name after `⌐`"));
                }
                if chars.peek() != Some(&'¬') {
                    return Err(ParseError::new(pos, "unclosed `⌐...¬`"));
                }
                bump!();
                out.push((Tok::Hash, pos));
                out.push((Tok::Ident(name), pos));
            }
            '.' | '•' => {
                bump!();
                out.push((Tok::Dot, pos));
            }
            '→' => {
                bump!();
                out.push((Tok::Arrow, pos));
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    out.push((Tok::Arrow, pos));
                } else {
                    return Err(ParseError::new(pos, "stray `-` (did you mean `->`?)"));
                }
            }
            '|' => {
                bump!();
                out.push((Tok::Bar, pos));
            }
            '!' => {
                bump!();
                out.push((Tok::Bang, pos));
            }
            '(' => {
                bump!();
                out.push((Tok::LParen, pos));
            }
            ')' => {
                bump!();
                out.push((Tok::RParen, pos));
            }
            '{' => {
                bump!();
                out.push((Tok::LBrace, pos));
            }
            '}' => {
                bump!();
                out.push((Tok::RBrace, pos));
            }
            '[' => {
                bump!();
                out.push((Tok::LBracket, pos));
            }
            ']' => {
                bump!();
                out.push((Tok::RBracket, pos));
            }
            '<' => {
                bump!();
                out.push((Tok::Lt, pos));
            }
            '>' => {
                bump!();
                out.push((Tok::Gt, pos));
            }
            ',' => {
                bump!();
                out.push((Tok::Comma, pos));
            }
            '=' => {
                bump!();
                out.push((Tok::Eq, pos));
            }
            '?' => {
                bump!();
                out.push((Tok::Question, pos));
            }
            ':' => {
                bump!();
                out.push((Tok::Colon, pos));
            }
            'ν' => {
                bump!();
                out.push((Tok::Ident("new".into()), pos));
            }
            d if d.is_ascii_digit() => {
                let mut text = String::new();
                while let Some(&e) = chars.peek() {
                    if e.is_ascii_digit() {
                        text.push(e);
                        bump!();
                    } else {
                        break;
                    }
                }
                if chars.peek().map(|&e| ident_start(e)).unwrap_or(false) {
                    return Err(ParseError::new(pos, "a name may not start with a digit"));
                }
                let k: u64 = text
                    .parse()
                    .map_err(|_| ParseError::new(pos, format!("number `{text}` out of range")))?;
                out.push((Tok::Int(k), pos));
            }
            d if ident_start(d) => {
                let mut text = String::new();
                while let Some(&e) = chars.peek() {
                    if ident_continue(e) {
                        text.push(e);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(text), pos));
            }
            other => {
                return Err(ParseError::new(pos, format!("unexpected character `{other}`")));
            }
        }
    }
}

/// A token cursor with one-token lookahead and positioned errors.
pub struct Cursor {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Cursor, ParseError> {
        Ok(Cursor {
            toks: lex(src)?,
            at: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub fn peek2(&self) -> &Tok {
        let i = (self.at + 1).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub fn save(&self) -> usize {
        self.at
    }

    pub fn restore(&mut self, mark: usize) {
        self.at = mark;
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(ParseError::new(
                self.pos(),
                format!("expected {what}, found {}", self.peek()),
            ))
        }
    }

    /// Consumes an identifier that is not a reserved word of the dialect.
    pub fn name(&mut self, reserved: &[&str], what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                if reserved.contains(&s.as_str()) {
                    Err(ParseError::new(
                        self.pos(),
                        format!("`{s}` is a reserved word and cannot name anything"),
                    ))
                } else {
                    self.bump();
                    Ok(s)
                }
            }
            other => Err(ParseError::new(
                self.pos(),
                format!("expected {what}, found {other}"),
            )),
        }
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            Err(ParseError::new(
                self.pos(),
                format!("expected end of input, found {}", self.peek()),
            ))
        }
    }
}
