use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::conv::WindowSet;
use crate::encoder::{
    encode_observation, product_atoms, variable_budget, variable_index, AtomIndex, Mode,
    Observation, Schema,
};
use crate::error::{Error, Result};
use crate::herbrand::{Atom, Term};

use super::instance::{
    encode_with_order, generalize_entities, permute_instance, query_marker, LabelMap,
    ParsedInstance, QUERY_MARKER,
};
use super::lexicon::Lexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Task {
    /// Where is a person after a sequence of moves.
    Movement,
    /// Is X a grandparent of Y.
    Grandparent,
    /// Is X a child of Y.
    Child,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Movement => "movement",
            Task::Grandparent => "parentage",
            Task::Child => "child",
        })
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "movement" => Ok(Task::Movement),
            "parentage" | "grandparent" => Ok(Task::Grandparent),
            "child" => Ok(Task::Child),
            other => Err(Error::Config(format!("unknown task `{other}`"))),
        }
    }
}

/// Class labels of the yes/no tasks, in bank order.
pub const YES_NO: [&str; 2] = ["no", "yes"];

impl Task {
    pub fn lexicon(self) -> Lexicon {
        match self {
            Task::Movement => Lexicon::movement(),
            Task::Grandparent | Task::Child => Lexicon::parentage(),
        }
    }

    pub fn query_relation(self) -> &'static str {
        match self {
            Task::Movement => "CurrentlyAt",
            Task::Grandparent => "grandparent",
            Task::Child => "child",
        }
    }

    pub fn is_yes_no(self) -> bool {
        self != Task::Movement
    }

    pub fn schema(self, persons: &[String], locations: &[String]) -> Result<Schema> {
        match self {
            Task::Movement => Schema::movement(persons, locations),
            Task::Grandparent | Task::Child => Schema::parentage(persons, self.query_relation()),
        }
    }

    /// Schema whose vocabularies are the sorted constants seen in `data`.
    pub fn infer_schema<'a>(self, data: impl IntoIterator<Item = &'a ParsedInstance>) -> Result<Schema> {
        let mut persons = BTreeSet::new();
        let mut locations = BTreeSet::new();
        for p in data {
            for f in &p.facts {
                for (i, c) in f.constants().enumerate() {
                    if self == Task::Movement && i == 1 {
                        locations.insert(c.to_string());
                    } else {
                        persons.insert(c.to_string());
                    }
                }
            }
            persons.extend(p.query.given().map(str::to_string));
            if self == Task::Movement {
                locations.insert(p.answer.clone());
            }
        }
        let persons: Vec<String> = persons.into_iter().collect();
        let locations: Vec<String> = locations.into_iter().collect();
        self.schema(&persons, &locations)
    }
}

/// How instances become windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaskSettings {
    pub task: Task,
    pub mode: Mode,
    pub conv: bool,
    /// Adds the statement position `S1, S2, ...` to every statement atom.
    pub order_tags: bool,
    /// Placeholders per entity type in generalized movement, and the
    /// statement positions available to order tags.
    pub slots: usize,
}

impl Default for TaskSettings {
    fn default() -> Self {
        Self {
            task: Task::Movement,
            mode: Mode::Generalized,
            conv: false,
            order_tags: false,
            slots: 3,
        }
    }
}

/// One encoded instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoded {
    pub windows: WindowSet,
    /// Class index of the instance's answer.
    pub label: usize,
    pub label_map: LabelMap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskEncoder {
    settings: TaskSettings,
    schema: Schema,
    index: AtomIndex,
    classes: Vec<String>,
}

impl TaskEncoder {
    /// Builds the feature index and class list; the parentage variable
    /// budget is the largest constant count among `train`.
    pub fn fit(settings: TaskSettings, schema: Schema, train: &[ParsedInstance]) -> Result<Self> {
        let (index, classes) = match (settings.task, settings.mode) {
            (Task::Movement, Mode::Constants) => {
                let persons = terms(&schema.entity_type("Person")?.constants, Term::constant);
                let locations = terms(&schema.entity_type("Location")?.constants, Term::constant);
                let classes = schema.entity_type("Location")?.constants.clone();
                (movement_index(&settings, persons, locations), classes)
            }
            (Task::Movement, Mode::Generalized) => {
                let per = placeholders("Per", settings.slots);
                let loc = placeholders("Loc", settings.slots);
                // the extra class stands for a location the story never mentions
                let classes = (1..=settings.slots + 1).map(|k| format!("Loc{k}")).collect();
                (movement_index(&settings, per, loc), classes)
            }
            (_, Mode::Constants) => {
                return Err(Error::Config(
                    "yes/no tasks need generalized mode: the question is the target atom".into(),
                ))
            }
            (_, Mode::Generalized) => {
                if settings.order_tags {
                    return Err(Error::Config("order tags apply to the movement task only".into()));
                }
                let observations = train
                    .iter()
                    .map(|p| observation(settings.task, p))
                    .collect::<Result<Vec<_>>>()?;
                let z = variable_budget(&observations).max(2);
                let classes = YES_NO.iter().map(|s| s.to_string()).collect();
                (variable_index(&schema, z), classes)
            }
        };
        Ok(Self {
            settings,
            schema,
            index,
            classes,
        })
    }

    pub fn from_parts(settings: TaskSettings, schema: Schema, index: AtomIndex, classes: Vec<String>) -> Self {
        Self {
            settings,
            schema,
            index,
            classes,
        }
    }

    pub fn settings(&self) -> &TaskSettings {
        &self.settings
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn index(&self) -> &AtomIndex {
        &self.index
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    fn class_of(&self, label: &str) -> Result<usize> {
        self.classes
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| Error::UnmappedLabel(label.to_string()))
    }

    /// Input atoms of the instance's first window, as seen by the machine.
    pub fn input_atoms(&self, p: &ParsedInstance) -> Result<Vec<Atom>> {
        match (self.settings.task, self.settings.mode) {
            (Task::Movement, Mode::Constants) => {
                let mut atoms = encode_with_order(&p.facts, self.settings.order_tags);
                atoms.push(query_marker(&p.query));
                Ok(atoms)
            }
            (Task::Movement, Mode::Generalized) => Ok(generalize_entities(p, &self.schema)?.atoms(self.settings.order_tags)),
            _ => {
                let w = self.encode(p)?;
                Ok(self.index.decode(&w.windows.windows()[0])?.into_iter().collect())
            }
        }
    }

    pub fn encode(&self, p: &ParsedInstance) -> Result<Encoded> {
        let s = &self.settings;
        match (s.task, s.mode) {
            (Task::Movement, Mode::Constants) => {
                let atoms = self.input_atoms(p)?;
                Ok(Encoded {
                    windows: WindowSet::single(self.index.encode(&atoms)?),
                    label: self.class_of(&p.answer)?,
                    label_map: LabelMap::Identity,
                })
            }
            (Task::Movement, Mode::Generalized) => {
                let g = generalize_entities(p, &self.schema)?;
                let windows = if s.conv {
                    permute_instance(&g, &self.schema, &self.index, s.order_tags)?
                } else {
                    WindowSet::single(self.index.encode(&g.atoms(s.order_tags))?)
                };
                // an answer outside the story takes the next unused placeholder
                let label = match g.binding.placeholder_of(&p.answer) {
                    Some(l) => l.to_string(),
                    None => format!("Loc{}", g.classes.len() + 1),
                };
                Ok(Encoded {
                    windows,
                    label: self.class_of(&label)?,
                    label_map: LabelMap::Binding(g.binding),
                })
            }
            (_, Mode::Generalized) => {
                let obs = observation(s.task, p)?;
                let all = encode_observation(&obs, &self.index, Mode::Generalized)?;
                let windows = if s.conv {
                    all
                } else {
                    WindowSet::single(all.windows()[0].clone())
                };
                Ok(Encoded {
                    windows,
                    label: usize::from(obs.truth),
                    label_map: LabelMap::Identity,
                })
            }
            (_, Mode::Constants) => Err(Error::Config("yes/no tasks need generalized mode".into())),
        }
    }
}

fn terms(names: &[String], make: fn(String) -> Term) -> Vec<Term> {
    names.iter().cloned().map(make).collect()
}

fn placeholders(prefix: &str, n: usize) -> Vec<Term> {
    (1..=n).map(|k| Term::var(format!("{prefix}{k}"))).collect()
}

fn movement_index(settings: &TaskSettings, persons: Vec<Term>, locations: Vec<Term>) -> AtomIndex {
    let mut atoms = if settings.order_tags {
        let steps = (1..=settings.slots).map(|k| Term::constant(format!("S{k}"))).collect();
        product_atoms("MoveTo", &[steps, persons.clone(), locations])
    } else {
        product_atoms("MoveTo", &[persons.clone(), locations])
    };
    atoms.extend(product_atoms(QUERY_MARKER, &[persons]));
    AtomIndex::new(atoms)
}

/// Statements as inputs and the question as the target atom.
pub fn observation(task: Task, p: &ParsedInstance) -> Result<Observation> {
    let target = p.query.to_atom().ok_or_else(|| {
        Error::MalformedInstance(format!("{task} question `{}` has a hole", p.query))
    })?;
    let truth = match p.answer.as_str() {
        "yes" => true,
        "no" => false,
        other => return Err(Error::UnmappedLabel(other.to_string())),
    };
    Ok(Observation {
        inputs: p.facts.clone(),
        target,
        truth,
    })
}
