//! Entity types, relation signatures and vocabularies.
//!
//! ```text
//! % comment
//! type Person Per : Mary John Sandra
//! type Location Loc : office garden
//! relation MoveTo Person Location
//! query CurrentlyAt Person Location
//! ```

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityType {
    pub name: String,
    /// Placeholder prefix, e.g. `Per` gives `Per1`, `Per2`, ...
    pub prefix: String,
    pub constants: Vec<String>,
}

impl EntityType {
    pub fn placeholder(&self, k: usize) -> String {
        format!("{}{}", self.prefix, k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDecl {
    pub name: String,
    pub arg_types: Vec<String>,
}

impl RelationDecl {
    pub fn arity(&self) -> usize {
        self.arg_types.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub types: Vec<EntityType>,
    pub relations: Vec<RelationDecl>,
    pub query: RelationDecl,
}

impl Schema {
    pub fn new(types: Vec<EntityType>, relations: Vec<RelationDecl>, query: RelationDecl) -> Result<Self> {
        let schema = Self {
            types,
            relations,
            query,
        };
        schema.validate()?;
        Ok(schema)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for t in &self.types {
            if t.constants.is_empty() {
                return Err(Error::Config(format!("type `{}` has no constants", t.name)));
            }
            if !crate::herbrand::is_variable_name(&t.placeholder(1)) {
                return Err(Error::Config(format!(
                    "prefix `{}` does not form variable names",
                    t.prefix
                )));
            }
            for c in &t.constants {
                if !seen.insert(c.as_str()) {
                    return Err(Error::Config(format!("constant `{c}` declared twice")));
                }
            }
        }
        for r in self.relations.iter().chain(std::iter::once(&self.query)) {
            if r.arg_types.is_empty() {
                return Err(Error::ZeroArity(r.name.clone()));
            }
            for t in &r.arg_types {
                self.entity_type(t)?;
            }
        }
        Ok(())
    }

    pub fn entity_type(&self, name: &str) -> Result<&EntityType> {
        self.types
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| Error::Config(format!("unknown type `{name}`")))
    }

    pub fn relation(&self, name: &str) -> Result<&RelationDecl> {
        self.relations
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::Config(format!("unknown relation `{name}`")))
    }

    /// Type that owns `constant`, if any.
    pub fn type_of(&self, constant: &str) -> Option<&EntityType> {
        self.types
            .iter()
            .find(|t| t.constants.iter().any(|c| c == constant))
    }

    /// Movement task: `MoveTo(Person, Location)`, queried by `CurrentlyAt`.
    pub fn movement(persons: &[String], locations: &[String]) -> Result<Self> {
        Self::new(
            vec![
                EntityType {
                    name: "Person".into(),
                    prefix: "Per".into(),
                    constants: persons.to_vec(),
                },
                EntityType {
                    name: "Location".into(),
                    prefix: "Loc".into(),
                    constants: locations.to_vec(),
                },
            ],
            vec![RelationDecl {
                name: "MoveTo".into(),
                arg_types: vec!["Person".into(), "Location".into()],
            }],
            RelationDecl {
                name: "CurrentlyAt".into(),
                arg_types: vec!["Person".into(), "Location".into()],
            },
        )
    }

    /// Parentage tasks: `parent(Person, Person)` queried by `query`.
    pub fn parentage(persons: &[String], query: &str) -> Result<Self> {
        Self::new(
            vec![EntityType {
                name: "Person".into(),
                prefix: "Z".into(),
                constants: persons.to_vec(),
            }],
            vec![RelationDecl {
                name: "parent".into(),
                arg_types: vec!["Person".into(), "Person".into()],
            }],
            RelationDecl {
                name: query.into(),
                arg_types: vec!["Person".into(), "Person".into()],
            },
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut types = Vec::new();
        let mut relations = Vec::new();
        let mut query = None;
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('%').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("type") => {
                    let (name, prefix) = match (words.next(), words.next(), words.next()) {
                        (Some(name), Some(prefix), Some(":")) => (name, prefix),
                        _ => return Err(Error::parse(n, "expected `type <Name> <Prefix> : constants...`")),
                    };
                    types.push(EntityType {
                        name: name.into(),
                        prefix: prefix.into(),
                        constants: words.map(str::to_string).collect(),
                    });
                }
                Some(kind @ ("relation" | "query")) => {
                    let name = words
                        .next()
                        .ok_or_else(|| Error::parse(n, format!("`{kind}` needs a name")))?;
                    let decl = RelationDecl {
                        name: name.into(),
                        arg_types: words.map(str::to_string).collect(),
                    };
                    if kind == "query" {
                        if query.replace(decl).is_some() {
                            return Err(Error::parse(n, "more than one query declaration"));
                        }
                    } else {
                        relations.push(decl);
                    }
                }
                Some(other) => return Err(Error::parse(n, format!("unknown directive `{other}`"))),
                None => {}
            }
        }
        let query = query.ok_or_else(|| Error::Config("schema has no query declaration".into()))?;
        Self::new(types, relations, query)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.types {
            writeln!(f, "type {} {} : {}", t.name, t.prefix, t.constants.join(" "))?;
        }
        for r in &self.relations {
            writeln!(f, "relation {} {}", r.name, r.arg_types.join(" "))?;
        }
        writeln!(f, "query {} {}", self.query.name, self.query.arg_types.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn round_trips_through_text() {
        let s = Schema::movement(&names(&["Mary", "John"]), &names(&["office", "garden"])).unwrap();
        assert_eq!(Schema::parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn rejects_shared_constants() {
        assert!(Schema::movement(&names(&["Mary"]), &names(&["Mary"])).is_err());
    }

    #[test]
    fn rejects_unknown_type() {
        let err = Schema::parse("type Person Per : a\nrelation r Person Thing\nquery q Person\n");
        assert!(err.is_err());
    }

    #[test]
    fn requires_query() {
        assert!(Schema::parse("type Person Per : a\n").is_err());
    }
}
