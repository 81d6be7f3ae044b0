//! Text format: one clause per line, `head :- b1, not b2.` or `fact.`;
//! `%` starts a comment. Identifiers shaped like `X`, `Z3`, `Per1` are
//! variables; anything else, or anything in single quotes, is a constant.

use crate::error::{Error, Result};

use super::types::{Atom, HornClause, Literal, Program, Term};

pub fn is_variable_name(id: &str) -> bool {
    let mut chars = id.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if !first.is_ascii_uppercase() {
        return false;
    }
    let rest = chars.as_str();
    let letters = rest.trim_end_matches(|c: char| c.is_ascii_digit());
    let digits = &rest[letters.len()..];
    letters.is_empty() || (letters.chars().all(|c| c.is_ascii_lowercase()) && !digits.is_empty())
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn needs_quotes(constant: &str) -> bool {
    constant.is_empty() || !constant.chars().all(is_ident_char) || is_variable_name(constant)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Quoted(String),
    Open,
    Close,
    Comma,
    Neck,
    Dot,
}

fn tokenize(line: &str, n: usize) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            '%' => break,
            c if c.is_whitespace() => {}
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            ',' => out.push(Tok::Comma),
            '.' => out.push(Tok::Dot),
            ':' => match chars.next() {
                Some((_, '-')) => out.push(Tok::Neck),
                _ => return Err(Error::parse(n, format!("expected `:-` at column {}", i + 1))),
            },
            '\'' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some((_, '\'')) => break,
                        Some((_, ch)) => s.push(ch),
                        None => return Err(Error::parse(n, "unterminated quoted constant")),
                    }
                }
                out.push(Tok::Quoted(s));
            }
            c if is_ident_char(c) => {
                let mut s = String::from(c);
                while let Some(&(_, ch)) = chars.peek() {
                    if !is_ident_char(ch) {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                out.push(Tok::Ident(s));
            }
            other => {
                return Err(Error::parse(
                    n,
                    format!("unexpected `{other}` at column {}", i + 1),
                ))
            }
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.next() {
            Some(t) if *t == want => Ok(()),
            _ => Err(Error::parse(self.line, format!("expected {what}"))),
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let line = self.line;
        let name = match self.next() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(Error::parse(line, "expected relation name")),
        };
        if self.peek() != Some(&Tok::Open) {
            return Err(Error::ZeroArity(name));
        }
        self.next();
        let mut args = Vec::new();
        loop {
            let term = match self.next() {
                Some(Tok::Ident(s)) => Term::from_ident(s),
                Some(Tok::Quoted(s)) => Term::Const(s.clone()),
                Some(Tok::Close) if args.is_empty() => return Err(Error::ZeroArity(name)),
                _ => return Err(Error::parse(line, format!("bad argument list for `{name}`"))),
            };
            args.push(term);
            match self.next() {
                Some(Tok::Comma) => {}
                Some(Tok::Close) => break,
                _ => return Err(Error::parse(line, "expected `,` or `)`")),
            }
        }
        Ok(Atom::new(name, args))
    }

    fn literal(&mut self) -> Result<Literal> {
        if let (Some(Tok::Ident(kw)), Some(Tok::Ident(_))) =
            (self.peek(), self.toks.get(self.pos + 1))
        {
            if kw == "not" {
                self.next();
                return Ok(Literal::neg(self.atom()?));
            }
        }
        Ok(Literal::pos(self.atom()?))
    }

    fn clause(&mut self) -> Result<HornClause> {
        let head = self.atom()?;
        let mut body = Vec::new();
        if self.peek() == Some(&Tok::Neck) {
            self.next();
            loop {
                body.push(self.literal()?);
                if self.peek() == Some(&Tok::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Dot, "`.` at end of clause")?;
        if self.pos != self.toks.len() {
            return Err(Error::parse(self.line, "trailing input after clause"));
        }
        Ok(HornClause { head, body })
    }
}

pub fn parse_program(text: &str) -> Result<Program> {
    let mut clauses = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks = tokenize(line, i + 1)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line: i + 1,
        };
        clauses.push(cur.clause()?);
    }
    Program::new(clauses)
}

/// Parses a single atom such as `parent(Bob, Z1)`.
pub fn parse_atom(text: &str) -> Result<Atom> {
    let toks = tokenize(text, 1)?;
    let mut cur = Cursor {
        toks: &toks,
        pos: 0,
        line: 1,
    };
    let atom = cur.atom()?;
    if cur.pos != toks.len() {
        return Err(Error::parse(1, "trailing input after atom"));
    }
    Ok(atom)
}
