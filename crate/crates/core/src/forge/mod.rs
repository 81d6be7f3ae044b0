//! Seeded generators for the movement and parentage tasks, label noise and
//! story-file IO.

mod babi;

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::herbrand::{least_herbrand_model, parse_program, Atom, HornClause, Program, Term};
use crate::qa::{QAInstance, Task};

pub use babi::{parse_babi, read_babi, to_babi_string, write_babi};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dataset {
    pub instances: Vec<QAInstance>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// First `fraction` of the instances for training, the rest for testing.
    pub fn split(&self, fraction: f64) -> (Dataset, Dataset) {
        let cut = ((self.len() as f64) * fraction).round() as usize;
        let cut = cut.min(self.len());
        let renumber = |v: &[QAInstance]| Dataset {
            instances: v
                .iter()
                .enumerate()
                .map(|(i, inst)| QAInstance { id: i, ..inst.clone() })
                .collect(),
        };
        (renumber(&self.instances[..cut]), renumber(&self.instances[cut..]))
    }
}

pub const DEFAULT_PERSONS: [&str; 6] = ["Mary", "John", "Sandra", "Daniel", "William", "Susan"];
pub const DEFAULT_LOCATIONS: [&str; 5] = ["office", "garden", "pantry", "foyer", "kitchen"];
pub const DEFAULT_PARENTAGE_PERSONS: [&str; 8] =
    ["Bob", "Mary", "Peter", "Jane", "Ann", "Tom", "Lucy", "Mark"];
const VERBS: [&str; 5] = ["went", "moved", "walked", "journeyed", "travelled"];

/// Generator settings; plain `key=value` lines in files.
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub task: Task,
    pub persons: Vec<String>,
    pub locations: Vec<String>,
    /// Upper bound on statements per story.
    pub statements: usize,
    pub train: usize,
    pub test: usize,
    /// Share of training answers replaced by a wrong label.
    pub noise: f64,
    pub seed: u64,
}

fn owned(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            task: Task::Movement,
            persons: owned(&DEFAULT_PERSONS),
            locations: owned(&DEFAULT_LOCATIONS),
            statements: 3,
            train: 10_000,
            test: 1_000,
            noise: 0.0,
            seed: 42,
        }
    }
}

impl GenConfig {
    /// Defaults for `task`, with the parentage vocabulary where it applies.
    pub fn for_task(task: Task) -> Self {
        let mut c = Self {
            task,
            ..Self::default()
        };
        if task.is_yes_no() {
            c.persons = owned(&DEFAULT_PARENTAGE_PERSONS);
            c.locations = vec![];
            c.train = 2_000;
            c.test = 500;
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::Config(format!("noise rate {} outside [0, 1]", self.noise)));
        }
        if self.statements == 0 {
            return Err(Error::Config("statements per story must be positive".into()));
        }
        let persons: BTreeSet<&String> = self.persons.iter().collect();
        let locations: BTreeSet<&String> = self.locations.iter().collect();
        if persons.len() != self.persons.len() || locations.len() != self.locations.len() {
            return Err(Error::Config("vocabulary lists contain duplicates".into()));
        }
        if !persons.is_disjoint(&locations) {
            return Err(Error::Config("persons and locations overlap".into()));
        }
        match self.task {
            Task::Movement => {
                if self.persons.is_empty() || self.locations.len() < 2 {
                    return Err(Error::Config("movement needs a person and two locations".into()));
                }
            }
            Task::Grandparent | Task::Child => {
                if self.persons.len() < 3 {
                    return Err(Error::Config("parentage needs at least three persons".into()));
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = GenConfig::default();
        let mut task_set = false;
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, "expected key=value"))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "task" {
                c = GenConfig::for_task(v.parse()?);
                task_set = true;
            } else {
                lines.push((i + 1, k.to_string(), v.to_string()));
            }
        }
        let _ = task_set;
        for (n, k, v) in lines {
            c.set(&k, &v).map_err(|e| Error::parse(n, e.to_string()))?;
        }
        c.validate()?;
        Ok(c)
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("`{key}` needs an integer, got `{v}`")))
        };
        let list = |v: &str| -> Vec<String> {
            v.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        };
        match key {
            "task" => self.task = value.parse()?,
            "persons" => self.persons = list(value),
            "locations" => self.locations = list(value),
            "statements" => self.statements = num(value)?,
            "train" => self.train = num(value)?,
            "test" => self.test = num(value)?,
            "noise" => {
                self.noise = value
                    .parse()
                    .map_err(|_| Error::Config(format!("bad noise rate `{value}`")))?
            }
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::Config(format!("bad seed `{value}`")))?
            }
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }
}

impl fmt::Display for GenConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "task={}", self.task)?;
        writeln!(f, "persons={}", self.persons.join(","))?;
        writeln!(f, "locations={}", self.locations.join(","))?;
        writeln!(f, "statements={}", self.statements)?;
        writeln!(f, "train={}", self.train)?;
        writeln!(f, "test={}", self.test)?;
        writeln!(f, "noise={}", self.noise)?;
        writeln!(f, "seed={}", self.seed)
    }
}

const MOVEMENT_RULES: &str = "\
CurrentlyAt(P, L) :- MovedAt(P, L, T), not Superseded(P, T).
Superseded(P, T) :- MovedAt(P, L, U), After(U, T).
";

/// Where `person` is according to the least Herbrand model of the moves
/// (timestamped by position) and the supersession rules.
pub fn movement_oracle(moves: &[(String, String)], person: &str) -> Result<Option<String>> {
    let mut clauses = parse_program(MOVEMENT_RULES)?.into_clauses();
    let step = |i: usize| Term::constant(format!("t{i}"));
    for (i, (p, l)) in moves.iter().enumerate() {
        clauses.push(HornClause::fact(Atom::new(
            "MovedAt",
            vec![Term::constant(p.as_str()), Term::constant(l.as_str()), step(i)],
        )));
        for j in 0..i {
            clauses.push(HornClause::fact(Atom::new("After", vec![step(i), step(j)])));
        }
    }
    let lhm = least_herbrand_model(&Program::new(clauses)?)?;
    let hits: Vec<&Atom> = lhm
        .iter()
        .filter(|a| a.relation == "CurrentlyAt" && a.args[0] == Term::constant(person))
        .collect();
    match hits.as_slice() {
        [] => Ok(None),
        [a] => Ok(Some(a.args[1].id().to_string())),
        _ => Err(Error::MalformedInstance(format!("{person} is in several places"))),
    }
}

/// Location of the last move of `person`, scanning backwards.
pub fn last_move(moves: &[(String, String)], person: &str) -> Option<String> {
    moves
        .iter()
        .rev()
        .find(|(p, _)| p == person)
        .map(|(_, l)| l.clone())
}

const PARENTAGE_RULES: &str = "\
grandparent(X, Y) :- parent(X, Z), parent(Z, Y).
child(X, Y) :- parent(Y, X).
";

/// Truth of `query` in the least Herbrand model of the parent facts and the
/// grandparent and child rules.
pub fn parentage_oracle(parents: &[(String, String)], query: &Atom) -> Result<bool> {
    let mut clauses = parse_program(PARENTAGE_RULES)?.into_clauses();
    for (a, b) in parents {
        clauses.push(HornClause::fact(Atom::ground("parent", &[a, b])));
    }
    Ok(least_herbrand_model(&Program::new(clauses)?)?.contains(query))
}

pub fn generate(config: &GenConfig, rng: &mut impl Rng, count: usize) -> Result<Dataset> {
    match config.task {
        Task::Movement => generate_movement(config, rng, count),
        Task::Grandparent | Task::Child => generate_parentage(config, rng, count),
    }
}

/// Stories of 1 to `statements` moves by uniformly drawn persons to
/// uniformly drawn locations; a move identical to the one before it is
/// redrawn. The question asks about a uniformly drawn mentioned person.
pub fn generate_movement(config: &GenConfig, rng: &mut impl Rng, count: usize) -> Result<Dataset> {
    config.validate()?;
    let mut instances = Vec::with_capacity(count);
    for id in 0..count {
        let n = rng.random_range(1..=config.statements);
        let mut moves: Vec<(String, String)> = Vec::with_capacity(n);
        let mut statements = Vec::with_capacity(n);
        while moves.len() < n {
            let p = config.persons.choose(rng).expect("nonempty").clone();
            let l = config.locations.choose(rng).expect("nonempty").clone();
            if moves.last() == Some(&(p.clone(), l.clone())) {
                continue;
            }
            let verb = VERBS.choose(rng).expect("nonempty");
            statements.push(format!("{p} {verb} to the {l}."));
            moves.push((p, l));
        }
        let mut mentioned: Vec<&String> = Vec::new();
        for (p, _) in &moves {
            if !mentioned.contains(&p) {
                mentioned.push(p);
            }
        }
        let person = (*mentioned.choose(rng).expect("nonempty")).clone();
        let answer = movement_oracle(&moves, &person)?
            .ok_or_else(|| Error::MalformedInstance("query person never moved".into()))?;
        let support = moves.iter().rposition(|(p, _)| *p == person).expect("mentioned") + 1;
        instances.push(QAInstance {
            id,
            statements,
            question: format!("Where is {person}?"),
            answer,
            support: vec![support],
        });
    }
    Ok(Dataset { instances })
}

/// Random parent facts among a few persons with a grandparent or child
/// question, alternating yes and no answers. Labels come from the oracle.
pub fn generate_parentage(config: &GenConfig, rng: &mut impl Rng, count: usize) -> Result<Dataset> {
    config.validate()?;
    let (cast, max_facts, relation, phrase) = match config.task {
        Task::Grandparent => (4, 3, "grandparent", "a grandparent of"),
        Task::Child => (3, 2, "child", "a child of"),
        Task::Movement => return Err(Error::Config("not a parentage task".into())),
    };
    let cast = cast.min(config.persons.len());
    let mut instances = Vec::with_capacity(count);
    while instances.len() < count {
        let want = instances.len() % 2 == 0;
        let people: Vec<&String> = config.persons.choose_multiple(rng, cast).collect();
        let k = rng.random_range(max_facts - 1..=max_facts);
        let mut facts: Vec<(String, String)> = Vec::new();
        while facts.len() < k {
            let pair: Vec<&&String> = people.choose_multiple(rng, 2).collect();
            let (a, b) = ((*pair[0]).clone(), (*pair[1]).clone());
            // no repeated facts and no two-person cycles
            if facts.iter().any(|(x, y)| (x == &a && y == &b) || (x == &b && y == &a)) {
                continue;
            }
            facts.push((a, b));
        }
        let pair: Vec<&&String> = people.choose_multiple(rng, 2).collect();
        let (x, y) = ((*pair[0]).clone(), (*pair[1]).clone());
        let query = Atom::ground(relation, &[&x, &y]);
        let truth = parentage_oracle(&facts, &query)?;
        if truth != want {
            continue;
        }
        let support = if truth {
            support_for(&facts, config.task, &x, &y)
        } else {
            vec![]
        };
        instances.push(QAInstance {
            id: instances.len(),
            statements: facts
                .iter()
                .map(|(a, b)| format!("{a} is a parent of {b}."))
                .collect(),
            question: format!("Is {x} {phrase} {y}?"),
            answer: if truth { "yes" } else { "no" }.into(),
            support,
        });
    }
    Ok(Dataset { instances })
}

fn support_for(facts: &[(String, String)], task: Task, x: &str, y: &str) -> Vec<usize> {
    let pos = |a: &str, b: &str| facts.iter().position(|(p, c)| p == a && c == b);
    match task {
        Task::Child => pos(y, x).map(|i| vec![i + 1]).unwrap_or_default(),
        _ => facts
            .iter()
            .filter(|(p, _)| p == x)
            .find_map(|(_, mid)| Some(vec![pos(x, mid)? + 1, pos(mid, y)? + 1]))
            .unwrap_or_default(),
    }
}

/// Replaces each answer with probability `rate` by a uniformly drawn wrong
/// one: another vocabulary location, or the opposite yes/no answer. Returns
/// the noisy copy and the number of replaced answers.
pub fn inject_noise(
    data: &Dataset,
    rate: f64,
    task: Task,
    locations: &[String],
    rng: &mut impl Rng,
) -> Result<(Dataset, usize)> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::Config(format!("noise rate {rate} outside [0, 1]")));
    }
    let mut out = data.clone();
    let mut changed = 0;
    for inst in &mut out.instances {
        if rate == 0.0 || rng.random::<f64>() >= rate {
            continue;
        }
        let wrong = if task.is_yes_no() {
            if inst.answer == "yes" { "no" } else { "yes" }.to_string()
        } else {
            let pool: Vec<&String> = locations.iter().filter(|l| **l != inst.answer).collect();
            (*pool.choose(rng)
                .ok_or_else(|| Error::Config("no wrong label available".into()))?)
                .clone()
        };
        inst.answer = wrong;
        changed += 1;
    }
    Ok((out, changed))
}
