//! Maps sets of atoms to literal vectors, detaches constants into
//! variables and expands free variables into convolution windows.

mod schema;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::automata::LiteralVector;
use crate::conv::WindowSet;
use crate::error::{Error, Result};
use crate::herbrand::{Atom, RelationSymbol, Term};
use crate::multiclass::MultiClassMachine;

pub use schema::{EntityType, RelationDecl, Schema};

/// Largest free-variable count expanded into windows (`5! = 120`).
pub const MAX_FREE_VARIABLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Features name the constants themselves.
    Constants,
    /// Constants are replaced by placeholders before encoding.
    Generalized,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Constants => "constants",
            Mode::Generalized => "generalized",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constants" => Ok(Mode::Constants),
            "generalized" => Ok(Mode::Generalized),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// Bijection between atoms and feature positions, ordered by relation name
/// and then argument symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomIndex {
    atoms: Vec<Atom>,
    positions: BTreeMap<Atom, usize>,
}

fn sort_key(a: &Atom) -> (String, Vec<String>) {
    (
        a.relation.clone(),
        a.args.iter().map(|t| t.id().to_string()).collect(),
    )
}

impl AtomIndex {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let unique: BTreeSet<Atom> = atoms.into_iter().collect();
        let mut atoms: Vec<Atom> = unique.into_iter().collect();
        atoms.sort_by_key(sort_key);
        let positions = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        Self { atoms, positions }
    }

    /// Every atom of `relations` whose arguments range over `terms`.
    pub fn over_terms(relations: &[RelationSymbol], terms: &[Term]) -> Self {
        let mut atoms = Vec::new();
        for r in relations {
            let domains = vec![terms.to_vec(); r.arity];
            atoms.extend(product_atoms(&r.name, &domains));
        }
        Self::new(atoms)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn position(&self, atom: &Atom) -> Option<usize> {
        self.positions.get(atom).copied()
    }

    /// Bit `k` is set iff atom `k` is present; the negated half follows.
    pub fn encode<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> Result<LiteralVector> {
        let mut active = Vec::new();
        for a in atoms {
            let k = self
                .position(a)
                .ok_or_else(|| Error::AtomOutsideSchema(a.to_string()))?;
            active.push(k);
        }
        Ok(LiteralVector::from_active(self.len(), active))
    }

    pub fn decode(&self, x: &LiteralVector) -> Result<BTreeSet<Atom>> {
        if x.features() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: x.features(),
            });
        }
        Ok(x.active_features().map(|k| self.atoms[k].clone()).collect())
    }
}

/// All atoms of `relation` with argument `i` drawn from `domains[i]`.
pub fn product_atoms(relation: &str, domains: &[Vec<Term>]) -> Vec<Atom> {
    let mut rows: Vec<Vec<Term>> = vec![vec![]];
    for d in domains {
        rows = rows
            .into_iter()
            .flat_map(|row| {
                d.iter().map(move |t| {
                    let mut r = row.clone();
                    r.push(t.clone());
                    r
                })
            })
            .collect();
    }
    rows.into_iter().map(|args| Atom::new(relation, args)).collect()
}

/// A possibly noisy pair of input atoms and one target atom with its truth
/// value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub inputs: Vec<Atom>,
    pub target: Atom,
    pub truth: bool,
}

/// Constants in order of first appearance.
pub fn obtain_constants<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in atoms {
        for c in a.constants() {
            if seen.insert(c.to_string()) {
                out.push(c.to_string());
            }
        }
    }
    out
}

/// Constant to variable map. The first `bound` entries come from the target.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VariableBinding {
    pub entries: Vec<(String, String)>,
    pub bound: usize,
}

impl VariableBinding {
    pub fn variable_of(&self, constant: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(c, _)| c == constant)
            .map(|(_, v)| v.as_str())
    }

    pub fn constant_of(&self, variable: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(_, v)| v == variable)
            .map(|(c, _)| c.as_str())
    }

    pub fn free_variables(&self) -> Vec<String> {
        self.entries[self.bound..]
            .iter()
            .map(|(_, v)| v.clone())
            .collect()
    }

    fn as_map(&self) -> BTreeMap<&str, &str> {
        self.entries
            .iter()
            .map(|(c, v)| (c.as_str(), v.as_str()))
            .collect()
    }
}

fn replace_in(atom: &Atom, map: &BTreeMap<&str, &str>) -> Atom {
    Atom::new(
        atom.relation.clone(),
        atom.args
            .iter()
            .map(|t| match t {
                Term::Const(c) => match map.get(c.as_str()) {
                    Some(v) => Term::Var(v.to_string()),
                    None => t.clone(),
                },
                Term::Var(_) => t.clone(),
            })
            .collect(),
    )
}

/// Target constants become `Z1, Z2, ...` left to right; leftover input
/// constants become fresh free variables in order of first appearance.
pub fn variables_replace_constants(obs: &Observation) -> (Observation, VariableBinding) {
    let mut binding = VariableBinding::default();
    let target_consts = obtain_constants([&obs.target]);
    for c in &target_consts {
        let v = format!("Z{}", binding.entries.len() + 1);
        binding.entries.push((c.clone(), v));
    }
    binding.bound = binding.entries.len();
    for c in obtain_constants(&obs.inputs) {
        if binding.variable_of(&c).is_none() {
            let v = format!("Z{}", binding.entries.len() + 1);
            binding.entries.push((c, v));
        }
    }
    let map = binding.as_map();
    let detached = Observation {
        inputs: obs.inputs.iter().map(|a| replace_in(a, &map)).collect(),
        target: replace_in(&obs.target, &map),
        truth: obs.truth,
    };
    (detached, binding)
}

/// All `n!` permutations of `0..n` in lexicographic order, identity first.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Renames variables of every atom through `map`.
pub fn rename_variables(atoms: &[Atom], map: &BTreeMap<String, String>) -> Vec<Atom> {
    atoms
        .iter()
        .map(|a| {
            Atom::new(
                a.relation.clone(),
                a.args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
                        Term::Const(_) => t.clone(),
                    })
                    .collect(),
            )
        })
        .collect()
}

/// One window per reassignment of the free variables among themselves,
/// `v!` in total. Provenance reads `Z3->Z4,Z4->Z3`; the identity window
/// comes first.
pub fn generate_variable_permutations(
    inputs: &[Atom],
    free: &[String],
    index: &AtomIndex,
) -> Result<WindowSet> {
    if free.len() > MAX_FREE_VARIABLES {
        return Err(Error::TooManyFreeVariables {
            free: free.len(),
            cap: MAX_FREE_VARIABLES,
        });
    }
    let mut windows = Vec::new();
    let mut provenance = Vec::new();
    for perm in permutations(free.len()) {
        let map: BTreeMap<String, String> = free
            .iter()
            .zip(&perm)
            .map(|(v, &j)| (v.clone(), free[j].clone()))
            .collect();
        windows.push(index.encode(&rename_variables(inputs, &map))?);
        provenance.push(if map.is_empty() {
            "identity".to_string()
        } else {
            map.iter()
                .map(|(a, b)| format!("{a}->{b}"))
                .collect::<Vec<_>>()
                .join(",")
        });
    }
    WindowSet::new(windows, provenance)
}

/// Input atoms over the variables `Z1..Zz` for the relations in `schema`.
pub fn variable_index(schema: &Schema, z: usize) -> AtomIndex {
    let terms: Vec<Term> = (1..=z).map(|k| Term::var(format!("Z{k}"))).collect();
    let relations: Vec<RelationSymbol> = schema
        .relations
        .iter()
        .map(|r| RelationSymbol::new(r.name.clone(), r.arity()))
        .collect();
    AtomIndex::over_terms(&relations, &terms)
}

/// Ground input atoms over the schema vocabulary.
pub fn constant_index(schema: &Schema) -> Result<AtomIndex> {
    let mut atoms = Vec::new();
    for r in &schema.relations {
        let domains = r
            .arg_types
            .iter()
            .map(|t| {
                Ok(schema
                    .entity_type(t)?
                    .constants
                    .iter()
                    .map(|c| Term::constant(c.as_str()))
                    .collect())
            })
            .collect::<Result<Vec<Vec<Term>>>>()?;
        atoms.extend(product_atoms(&r.name, &domains));
    }
    Ok(AtomIndex::new(atoms))
}

/// Largest number of distinct constants in a single observation.
pub fn variable_budget<'a>(observations: impl IntoIterator<Item = &'a Observation>) -> usize {
    observations
        .into_iter()
        .map(|o| obtain_constants(o.inputs.iter().chain(std::iter::once(&o.target))).len())
        .max()
        .unwrap_or(0)
}

/// Window set for an observation: the plain encoding in constants mode, or
/// the free-variable permutations of its detached form.
pub fn encode_observation(obs: &Observation, index: &AtomIndex, mode: Mode) -> Result<WindowSet> {
    match mode {
        Mode::Constants => Ok(WindowSet::single(index.encode(&obs.inputs)?)),
        Mode::Generalized => {
            let (detached, binding) = variables_replace_constants(obs);
            generate_variable_permutations(&detached.inputs, &binding.free_variables(), index)
        }
    }
}

/// Encodes, detaches and permutes one observation, then applies a
/// convolutional update to the two-bank machine `[false, true]`.
pub fn relational_train_step<R: Rng + ?Sized>(
    machine: &mut MultiClassMachine,
    obs: &Observation,
    index: &AtomIndex,
    mode: Mode,
    rng: &mut R,
) -> Result<()> {
    let ws = encode_observation(obs, index, mode)?;
    machine.train_step_conv(&ws, usize::from(obs.truth), rng)
}

/// Sizes that drive the feature-count formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthParams {
    /// Cardinality of every entity set.
    pub entity_sizes: Vec<usize>,
    /// Relations per sample.
    pub relations: usize,
    /// Entities per relation.
    pub entities: usize,
}

/// Constants: `(∏ |E_i|) · r`. Generalized: `r^(e+1)`.
pub fn feature_width(p: &WidthParams, mode: Mode) -> usize {
    match mode {
        Mode::Constants => p.entity_sizes.iter().product::<usize>() * p.relations,
        Mode::Generalized => p.relations.pow(p.entities as u32 + 1),
    }
}
