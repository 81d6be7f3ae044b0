use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

use super::syntax::{is_variable_name, needs_quotes};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

impl RelationSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn constant(id: impl Into<String>) -> Self {
        Term::Const(id.into())
    }

    pub fn var(id: impl Into<String>) -> Self {
        Term::Var(id.into())
    }

    /// Classifies an identifier with the lexical variable rule.
    pub fn from_ident(id: &str) -> Self {
        if is_variable_name(id) {
            Term::Var(id.to_string())
        } else {
            Term::Const(id.to_string())
        }
    }

    pub fn id(&self) -> &str {
        match self {
            Term::Const(s) | Term::Var(s) => s,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) if needs_quotes(c) => write!(f, "'{c}'"),
            Term::Const(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub relation: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(relation: impl Into<String>, args: Vec<Term>) -> Self {
        Self {
            relation: relation.into(),
            args,
        }
    }

    /// Ground atom from constant names.
    pub fn ground<S: AsRef<str>>(relation: impl Into<String>, args: &[S]) -> Self {
        Self::new(
            relation,
            args.iter().map(|a| Term::constant(a.as_ref())).collect(),
        )
    }

    pub fn symbol(&self) -> RelationSymbol {
        RelationSymbol::new(self.relation.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Const(_) => None,
        })
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Const(c) => Some(c.as_str()),
            Term::Var(_) => None,
        })
    }

    /// Replaces bound variables; unbound ones are left in place.
    pub fn substitute(&self, binding: &BTreeMap<String, String>) -> Atom {
        Atom {
            relation: self.relation.clone(),
            args: self
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => binding
                        .get(v)
                        .map(|c| Term::Const(c.clone()))
                        .unwrap_or_else(|| t.clone()),
                    Term::Const(_) => t.clone(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation)?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

/// A body literal; negation is evaluated as absence under the closed world.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Self {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Self {
            atom,
            negated: true,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HornClause {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl HornClause {
    pub fn fact(head: Atom) -> Self {
        Self { head, body: vec![] }
    }

    pub fn rule(head: Atom, body: Vec<Literal>) -> Self {
        Self { head, body }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars: BTreeSet<String> = self.head.variables().map(str::to_string).collect();
        for l in &self.body {
            vars.extend(l.atom.variables().map(str::to_string));
        }
        vars
    }

    pub fn substitute(&self, binding: &BTreeMap<String, String>) -> HornClause {
        HornClause {
            head: self.head.substitute(binding),
            body: self
                .body
                .iter()
                .map(|l| Literal {
                    atom: l.atom.substitute(binding),
                    negated: l.negated,
                })
                .collect(),
        }
    }
}

impl fmt::Display for HornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, l) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l}")?;
            }
        }
        f.write_str(".")
    }
}

/// A set of ground atoms.
pub type Interpretation = BTreeSet<Atom>;

/// Facts and rules with a consistent arity per relation name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    clauses: Vec<HornClause>,
}

impl Program {
    pub fn new(clauses: Vec<HornClause>) -> Result<Self> {
        let mut arities: BTreeMap<&str, usize> = BTreeMap::new();
        for c in &clauses {
            for atom in std::iter::once(&c.head).chain(c.body.iter().map(|l| &l.atom)) {
                if atom.args.is_empty() {
                    return Err(Error::ZeroArity(atom.relation.clone()));
                }
                match arities.get(atom.relation.as_str()) {
                    Some(&a) if a != atom.args.len() => {
                        return Err(Error::ArityMismatch {
                            name: atom.relation.clone(),
                            expected: a,
                            found: atom.args.len(),
                        })
                    }
                    Some(_) => {}
                    None => {
                        arities.insert(&atom.relation, atom.args.len());
                    }
                }
            }
        }
        Ok(Self { clauses })
    }

    pub fn clauses(&self) -> &[HornClause] {
        &self.clauses
    }

    pub fn into_clauses(self) -> Vec<HornClause> {
        self.clauses
    }

    /// Appends the clauses of `other`, rechecking arities.
    pub fn extend(&self, other: &Program) -> Result<Program> {
        let mut all = self.clauses.clone();
        all.extend(other.clauses.iter().cloned());
        Program::new(all)
    }

    pub fn relations(&self) -> BTreeSet<RelationSymbol> {
        let mut out = BTreeSet::new();
        for c in &self.clauses {
            out.insert(c.head.symbol());
            for l in &c.body {
                out.insert(l.atom.symbol());
            }
        }
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for c in &self.clauses {
            out.extend(c.head.constants().map(str::to_string));
            for l in &c.body {
                out.extend(l.atom.constants().map(str::to_string));
            }
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
