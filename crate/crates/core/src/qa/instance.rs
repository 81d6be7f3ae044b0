use std::collections::BTreeMap;

use crate::conv::WindowSet;
use crate::encoder::{permutations, rename_variables, AtomIndex, Schema};
use crate::error::{Error, Result};
use crate::herbrand::{Atom, Term};

use super::lexicon::{Lexicon, QueryAtom, Sentence};

/// A story: ordered statements, one question and its answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QAInstance {
    pub id: usize,
    pub statements: Vec<String>,
    pub question: String,
    pub answer: String,
    /// 1-based positions of the statements that support the answer.
    pub support: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstance {
    /// Statement atoms in story order.
    pub facts: Vec<Atom>,
    pub query: QueryAtom,
    pub answer: String,
}

pub fn parse_instance(instance: &QAInstance, lexicon: &Lexicon) -> Result<ParsedInstance> {
    if instance.statements.is_empty() {
        return Err(Error::MalformedInstance(format!(
            "instance {} has no statements",
            instance.id
        )));
    }
    let mut facts = Vec::with_capacity(instance.statements.len());
    for s in &instance.statements {
        match lexicon.parse_sentence(s)? {
            Sentence::Fact(a) => facts.push(a),
            Sentence::Query(_) => {
                return Err(Error::MalformedInstance(format!(
                    "instance {}: question `{s}` among statements",
                    instance.id
                )))
            }
        }
    }
    let query = match lexicon.parse_sentence(&instance.question)? {
        Sentence::Query(q) => q,
        Sentence::Fact(_) => {
            return Err(Error::MalformedInstance(format!(
                "instance {}: `{}` is not a question",
                instance.id, instance.question
            )))
        }
    };
    Ok(ParsedInstance {
        facts,
        query,
        answer: instance.answer.clone(),
    })
}

/// Marker relation naming the entities a question is about.
pub const QUERY_MARKER: &str = "Q";

/// Statement atoms, optionally with the story position `S1, S2, ...` as a
/// new first argument.
pub fn encode_with_order(facts: &[Atom], tag_sentence_order: bool) -> Vec<Atom> {
    if !tag_sentence_order {
        return facts.to_vec();
    }
    facts
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut args = vec![Term::constant(format!("S{}", i + 1))];
            args.extend(a.args.iter().cloned());
            Atom::new(a.relation.clone(), args)
        })
        .collect()
}

/// `Q(..)` over the given arguments of a question.
pub fn query_marker(query: &QueryAtom) -> Atom {
    Atom::new(
        QUERY_MARKER,
        query.given().map(Term::from_ident).collect(),
    )
}

/// Constant to typed placeholder map, in binding order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EntityBinding {
    entries: Vec<BindingEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BindingEntry {
    constant: String,
    placeholder: String,
    type_name: String,
}

impl EntityBinding {
    pub fn placeholder_of(&self, constant: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.constant == constant)
            .map(|e| e.placeholder.as_str())
    }

    pub fn constant_of(&self, placeholder: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.placeholder == placeholder)
            .map(|e| e.constant.as_str())
    }

    /// Placeholders of one type in binding order.
    pub fn placeholders(&self, type_name: &str) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| e.type_name == type_name)
            .map(|e| e.placeholder.clone())
            .collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries
            .iter()
            .map(|e| (e.constant.as_str(), e.placeholder.as_str()))
    }

    fn bind(&mut self, constant: &str, ty: &crate::encoder::EntityType) -> Result<()> {
        if let Some(e) = self.entries.iter().find(|e| e.constant == constant) {
            if e.type_name != ty.name {
                return Err(Error::MalformedInstance(format!(
                    "`{constant}` used as both {} and {}",
                    e.type_name, ty.name
                )));
            }
            return Ok(());
        }
        let k = self.entries.iter().filter(|e| e.type_name == ty.name).count() + 1;
        self.entries.push(BindingEntry {
            constant: constant.to_string(),
            placeholder: ty.placeholder(k),
            type_name: ty.name.clone(),
        });
        Ok(())
    }

    fn apply(&self, atom: &Atom) -> Atom {
        Atom::new(
            atom.relation.clone(),
            atom.args
                .iter()
                .map(|t| match t {
                    Term::Const(c) => match self.placeholder_of(c) {
                        Some(p) => Term::var(p),
                        None => t.clone(),
                    },
                    Term::Var(_) => t.clone(),
                })
                .collect(),
        )
    }
}

/// Instance with constants replaced by typed placeholders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generalized {
    pub facts: Vec<Atom>,
    pub query: QueryAtom,
    pub binding: EntityBinding,
    /// Placeholders of the asked-for type present in the instance.
    pub classes: Vec<String>,
    /// Type of the asked-for argument, if the question has a hole.
    pub answer_type: Option<String>,
}

impl Generalized {
    /// Statement atoms plus the question marker.
    pub fn atoms(&self, tag_sentence_order: bool) -> Vec<Atom> {
        let mut atoms = encode_with_order(&self.facts, tag_sentence_order);
        atoms.push(query_marker(&self.query));
        atoms
    }
}

/// Binds the question's entities first, then every other constant by first
/// occurrence within its type: `Per1` is always the person asked about.
pub fn generalize_entities(parsed: &ParsedInstance, schema: &Schema) -> Result<Generalized> {
    let mut binding = EntityBinding::default();
    let query_types = &schema.query.arg_types;
    if parsed.query.args.len() != query_types.len() {
        return Err(Error::ArityMismatch {
            name: parsed.query.relation.clone(),
            expected: query_types.len(),
            found: parsed.query.args.len(),
        });
    }
    for (arg, ty) in parsed.query.args.iter().zip(query_types) {
        if let Some(c) = arg {
            binding.bind(c, schema.entity_type(ty)?)?;
        }
    }
    for fact in &parsed.facts {
        let decl = schema.relation(&fact.relation)?;
        if decl.arity() != fact.args.len() {
            return Err(Error::ArityMismatch {
                name: fact.relation.clone(),
                expected: decl.arity(),
                found: fact.args.len(),
            });
        }
        for (t, ty) in fact.args.iter().zip(&decl.arg_types) {
            if let Term::Const(c) = t {
                binding.bind(c, schema.entity_type(ty)?)?;
            }
        }
    }
    let answer_type = parsed.query.hole().map(|h| query_types[h].clone());
    let classes = answer_type
        .as_deref()
        .map(|t| binding.placeholders(t))
        .unwrap_or_default();
    let query = QueryAtom {
        relation: parsed.query.relation.clone(),
        args: parsed
            .query
            .args
            .iter()
            .map(|a| a.as_ref().map(|c| binding.placeholder_of(c).unwrap_or(c).to_string()))
            .collect(),
    };
    Ok(Generalized {
        facts: parsed.facts.iter().map(|a| binding.apply(a)).collect(),
        query,
        binding,
        classes,
        answer_type,
    })
}

/// Placeholder renamings that permute every type except the answer type,
/// identity first.
pub fn type_respecting_renamings(g: &Generalized, schema: &Schema) -> Vec<BTreeMap<String, String>> {
    let mut maps = vec![BTreeMap::new()];
    for ty in &schema.types {
        if Some(&ty.name) == g.answer_type.as_ref() {
            continue;
        }
        let vars = g.binding.placeholders(&ty.name);
        if vars.len() < 2 {
            continue;
        }
        let mut next = Vec::new();
        for m in &maps {
            for p in permutations(vars.len()) {
                let mut m = m.clone();
                for (i, &j) in p.iter().enumerate() {
                    m.insert(vars[i].clone(), vars[j].clone());
                }
                next.push(m);
            }
        }
        maps = next;
    }
    maps
}

/// Windows for every type-respecting renaming of the instance, statement
/// order kept and the question marker renamed along with the statements.
pub fn permute_instance(
    g: &Generalized,
    schema: &Schema,
    index: &AtomIndex,
    tag_sentence_order: bool,
) -> Result<WindowSet> {
    let atoms = g.atoms(tag_sentence_order);
    let mut windows = Vec::new();
    let mut provenance = Vec::new();
    for map in type_respecting_renamings(g, schema) {
        windows.push(index.encode(&rename_variables(&atoms, &map))?);
        let moved: Vec<String> = map
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| format!("{a}->{b}"))
            .collect();
        provenance.push(if moved.is_empty() {
            "identity".to_string()
        } else {
            moved.join(",")
        });
    }
    WindowSet::new(windows, provenance)
}

/// Maps between answer constants and class labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelMap {
    Identity,
    Binding(EntityBinding),
}

impl LabelMap {
    pub fn to_constant(&self, label: &str) -> Result<String> {
        match self {
            LabelMap::Identity => Ok(label.to_string()),
            LabelMap::Binding(b) => b
                .constant_of(label)
                .map(str::to_string)
                .ok_or_else(|| Error::UnmappedLabel(label.to_string())),
        }
    }

    pub fn to_label(&self, constant: &str) -> Result<String> {
        match self {
            LabelMap::Identity => Ok(constant.to_string()),
            LabelMap::Binding(b) => b
                .placeholder_of(constant)
                .map(str::to_string)
                .ok_or_else(|| Error::UnmappedLabel(constant.to_string())),
        }
    }
}
