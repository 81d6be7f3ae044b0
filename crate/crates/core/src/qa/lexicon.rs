//! Sentence templates.
//!
//! ```text
//! % statements: relation, then the sentence with numbered entity slots
//! fact MoveTo {0} went to the {1}.
//! % questions: relation/arity; slots beyond the template are holes
//! query CurrentlyAt/2 Where is {0}?
//! ```
//!
//! Matching ignores a trailing `.`, `?` or `!` and surrounding whitespace.

use std::fmt;

use regex::Regex;

use crate::error::{Error, Result};
use crate::herbrand::Atom;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateKind {
    Fact,
    Query,
}

#[derive(Debug, Clone)]
pub struct Template {
    pub kind: TemplateKind,
    pub relation: String,
    pub arity: usize,
    pub text: String,
    slots: Vec<usize>,
    pattern: Regex,
}

/// Question atom; `None` marks the argument being asked for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryAtom {
    pub relation: String,
    pub args: Vec<Option<String>>,
}

impl QueryAtom {
    pub fn given(&self) -> impl Iterator<Item = &str> {
        self.args.iter().flatten().map(String::as_str)
    }

    pub fn hole(&self) -> Option<usize> {
        self.args.iter().position(Option::is_none)
    }

    /// The atom with every argument given, for yes/no questions.
    pub fn to_atom(&self) -> Option<Atom> {
        let args: Option<Vec<&str>> = self.args.iter().map(|a| a.as_deref()).collect();
        args.map(|a| Atom::ground(self.relation.clone(), &a))
    }
}

impl fmt::Display for QueryAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<&str> = self
            .args
            .iter()
            .map(|a| a.as_deref().unwrap_or("?"))
            .collect();
        write!(f, "{}({})", self.relation, args.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sentence {
    Fact(Atom),
    Query(QueryAtom),
}

fn strip_end(s: &str) -> &str {
    s.trim().trim_end_matches(['.', '?', '!']).trim_end()
}

impl Template {
    pub fn new(kind: TemplateKind, relation: &str, arity: Option<usize>, text: &str) -> Result<Self> {
        let body = strip_end(text);
        let slot_re = Regex::new(r"\{(\d+)\}").expect("static pattern");
        let mut pattern = String::from("^");
        let mut slots = Vec::new();
        let mut last = 0;
        for cap in slot_re.captures_iter(body) {
            let m = cap.get(0).expect("whole match");
            pattern.push_str(&regex::escape(&body[last..m.start()]));
            pattern.push_str(r"([A-Za-z][A-Za-z0-9_\-]*)");
            slots.push(cap[1].parse::<usize>().map_err(|e| Error::Config(e.to_string()))?);
            last = m.end();
        }
        pattern.push_str(&regex::escape(&body[last..]));
        pattern.push('$');
        let arity = arity.unwrap_or(slots.len());
        if slots.iter().any(|&s| s >= arity) {
            return Err(Error::Config(format!("template `{text}` has a slot beyond arity {arity}")));
        }
        let mut sorted = slots.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != slots.len() {
            return Err(Error::Config(format!("template `{text}` repeats a slot")));
        }
        if kind == TemplateKind::Fact && slots.len() != arity {
            return Err(Error::Config(format!("fact template `{text}` must fill every argument")));
        }
        if arity == 0 {
            return Err(Error::ZeroArity(relation.into()));
        }
        Ok(Self {
            kind,
            relation: relation.into(),
            arity,
            text: text.into(),
            slots,
            pattern: Regex::new(&pattern).map_err(|e| Error::Config(e.to_string()))?,
        })
    }

    fn capture(&self, sentence: &str) -> Option<Sentence> {
        let caps = self.pattern.captures(strip_end(sentence))?;
        let mut args: Vec<Option<String>> = vec![None; self.arity];
        for (i, &slot) in self.slots.iter().enumerate() {
            args[slot] = Some(caps[i + 1].to_string());
        }
        Some(match self.kind {
            TemplateKind::Fact => Sentence::Fact(Atom::ground(
                self.relation.clone(),
                &args.into_iter().flatten().collect::<Vec<_>>(),
            )),
            TemplateKind::Query => Sentence::Query(QueryAtom {
                relation: self.relation.clone(),
                args,
            }),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    templates: Vec<Template>,
}

const MOVEMENT: &str = "\
fact MoveTo {0} went to the {1}.
fact MoveTo {0} moved to the {1}.
fact MoveTo {0} walked to the {1}.
fact MoveTo {0} journeyed to the {1}.
fact MoveTo {0} travelled to the {1}.
query CurrentlyAt/2 Where is {0}?
";

const PARENTAGE: &str = "\
fact parent {0} is a parent of {1}.
query grandparent/2 Is {0} a grandparent of {1}?
query child/2 Is {0} a child of {1}?
";

impl Lexicon {
    pub fn new(templates: Vec<Template>) -> Self {
        Self { templates }
    }

    pub fn movement() -> Self {
        Self::parse(MOVEMENT).expect("built-in lexicon")
    }

    pub fn parentage() -> Self {
        Self::parse(PARENTAGE).expect("built-in lexicon")
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut templates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('%') {
                continue;
            }
            let mut parts = line.splitn(3, char::is_whitespace);
            let (kind, head, body) = match (parts.next(), parts.next(), parts.next()) {
                (Some(k), Some(h), Some(b)) => (k, h, b.trim()),
                _ => return Err(Error::parse(i + 1, "expected `fact|query <Relation> <template>`")),
            };
            let kind = match kind {
                "fact" => TemplateKind::Fact,
                "query" => TemplateKind::Query,
                other => return Err(Error::parse(i + 1, format!("unknown directive `{other}`"))),
            };
            let (relation, arity) = match head.split_once('/') {
                Some((r, a)) => (
                    r,
                    Some(a.parse::<usize>().map_err(|_| Error::parse(i + 1, "bad arity"))?),
                ),
                None => (head, None),
            };
            templates.push(
                Template::new(kind, relation, arity, body).map_err(|e| Error::parse(i + 1, e.to_string()))?,
            );
        }
        Ok(Self { templates })
    }

    /// The single template reading of `text`.
    pub fn parse_sentence(&self, text: &str) -> Result<Sentence> {
        let mut hits: Vec<Sentence> = self.templates.iter().filter_map(|t| t.capture(text)).collect();
        match hits.len() {
            0 => Err(Error::NoTemplate(text.to_string())),
            1 => Ok(hits.pop().expect("one hit")),
            count => Err(Error::AmbiguousTemplate {
                sentence: text.to_string(),
                count,
            }),
        }
    }
}

impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.templates {
            match t.kind {
                TemplateKind::Fact => writeln!(f, "fact {} {}", t.relation, t.text)?,
                TemplateKind::Query => writeln!(f, "query {}/{} {}", t.relation, t.arity, t.text)?,
            }
        }
        Ok(())
    }
}
