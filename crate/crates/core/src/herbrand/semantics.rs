use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

use super::types::{Atom, HornClause, Interpretation, Literal, Program, RelationSymbol, Term};

/// Every ground atom over `constants`; `Σ_u q^(arity_u)` atoms.
pub fn herbrand_base(
    constants: &BTreeSet<String>,
    relations: &BTreeSet<RelationSymbol>,
) -> Result<Interpretation> {
    if constants.is_empty() {
        return Err(Error::Empty("constant set"));
    }
    if relations.is_empty() {
        return Err(Error::Empty("relation set"));
    }
    let consts: Vec<&String> = constants.iter().collect();
    let mut base = Interpretation::new();
    for r in relations {
        if r.arity == 0 {
            return Err(Error::ZeroArity(r.name.clone()));
        }
        for tuple in tuples(consts.len(), r.arity) {
            base.insert(Atom::ground(
                r.name.clone(),
                &tuple.iter().map(|&i| consts[i].as_str()).collect::<Vec<_>>(),
            ));
        }
    }
    Ok(base)
}

/// All `q^k` index tuples in lexicographic order.
fn tuples(q: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..q).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every clause instantiated under every substitution of its variables by
/// `constants`. Variable-free clauses pass through unchanged.
pub fn ground(program: &Program, constants: &BTreeSet<String>) -> Vec<HornClause> {
    let consts: Vec<&String> = constants.iter().collect();
    let mut out = Vec::new();
    for clause in program.clauses() {
        let vars: Vec<String> = clause.variables().into_iter().collect();
        if vars.is_empty() {
            out.push(clause.clone());
            continue;
        }
        for tuple in tuples(consts.len(), vars.len()) {
            let binding = vars
                .iter()
                .cloned()
                .zip(tuple.iter().map(|&i| consts[i].clone()))
                .collect();
            out.push(clause.substitute(&binding));
        }
    }
    out
}

fn body_holds(body: &[Literal], interp: &Interpretation) -> bool {
    body.iter()
        .all(|l| interp.contains(&l.atom) != l.negated)
}

/// `TP(I) ∪ I` over already ground clauses.
pub fn immediate_consequence_ground(clauses: &[HornClause], interp: &Interpretation) -> Interpretation {
    let mut out = interp.clone();
    for c in clauses {
        if c.head.is_ground() && body_holds(&c.body, interp) {
            out.insert(c.head.clone());
        }
    }
    out
}

fn universe(program: &Program, interp: &Interpretation) -> BTreeSet<String> {
    let mut u = program.constants();
    for a in interp {
        u.extend(a.constants().map(str::to_string));
    }
    u
}

fn unify(pattern: &Atom, fact: &Atom, binding: &mut BTreeMap<String, String>) -> Option<Vec<String>> {
    if pattern.relation != fact.relation || pattern.args.len() != fact.args.len() {
        return None;
    }
    let mut added = Vec::new();
    for (p, f) in pattern.args.iter().zip(&fact.args) {
        let Term::Const(fc) = f else { return None };
        let ok = match p {
            Term::Const(pc) => pc == fc,
            Term::Var(v) => match binding.get(v) {
                Some(bound) => bound == fc,
                None => {
                    binding.insert(v.clone(), fc.clone());
                    added.push(v.clone());
                    true
                }
            },
        };
        if !ok {
            for v in &added {
                binding.remove(v);
            }
            return None;
        }
    }
    Some(added)
}

/// Backtracking join over the positive body atoms, then enumeration of any
/// variable that only occurs in negated atoms or the head.
fn derive(
    clause: &HornClause,
    positives: &[&Atom],
    interp: &Interpretation,
    consts: &[String],
    binding: &mut BTreeMap<String, String>,
    out: &mut Interpretation,
) {
    if let Some((first, rest)) = positives.split_first() {
        let lo = Atom::new(first.relation.clone(), vec![]);
        for fact in interp.range(lo..).take_while(|a| a.relation == first.relation) {
            if let Some(added) = unify(first, fact, binding) {
                derive(clause, rest, interp, consts, binding, out);
                for v in added {
                    binding.remove(&v);
                }
            }
        }
        return;
    }
    let free: Vec<String> = clause
        .variables()
        .into_iter()
        .filter(|v| !binding.contains_key(v))
        .collect();
    for tuple in tuples(consts.len(), free.len()) {
        for (v, &i) in free.iter().zip(&tuple) {
            binding.insert(v.clone(), consts[i].clone());
        }
        let negatives_hold = clause
            .body
            .iter()
            .filter(|l| l.negated)
            .all(|l| !interp.contains(&l.atom.substitute(binding)));
        if negatives_hold {
            out.insert(clause.head.substitute(binding));
        }
        for v in &free {
            binding.remove(v);
        }
    }
}

fn consequence_of(clauses: &[&HornClause], program: &Program, interp: &Interpretation) -> Interpretation {
    let consts: Vec<String> = universe(program, interp).into_iter().collect();
    let mut out = interp.clone();
    for clause in clauses {
        let positives: Vec<&Atom> = clause
            .body
            .iter()
            .filter(|l| !l.negated)
            .map(|l| &l.atom)
            .collect();
        derive(clause, &positives, interp, &consts, &mut BTreeMap::new(), &mut out);
    }
    out
}

/// `TP(I) ∪ I`. Variables range over the constants of the program and of
/// `I`; a negated body atom holds iff it is absent from `I`.
pub fn immediate_consequence(program: &Program, interp: &Interpretation) -> Interpretation {
    let clauses: Vec<&HornClause> = program.clauses().iter().collect();
    consequence_of(&clauses, program, interp)
}

/// Iterates `TP` from the empty set until nothing changes. Returns the
/// fixpoint and the number of rounds that added atoms.
pub fn naive_fixpoint(program: &Program) -> (Interpretation, usize) {
    let mut interp = Interpretation::new();
    let mut rounds = 0;
    loop {
        let next = immediate_consequence(program, &interp);
        if next == interp {
            return (interp, rounds);
        }
        interp = next;
        rounds += 1;
    }
}

/// Stratum per relation: a head sits at or above every positive body
/// relation and strictly above every negated one.
pub fn strata(program: &Program) -> Result<BTreeMap<String, usize>> {
    let mut level: BTreeMap<String, usize> = program
        .relations()
        .into_iter()
        .map(|r| (r.name, 0))
        .collect();
    let limit = level.len();
    loop {
        let mut changed = false;
        for c in program.clauses() {
            for l in &c.body {
                let need = level[&l.atom.relation] + usize::from(l.negated);
                if level[&c.head.relation] < need {
                    if need > limit {
                        return Err(Error::NotStratifiable(c.head.relation.clone()));
                    }
                    level.insert(c.head.relation.clone(), need);
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(level);
        }
    }
}

/// Least Herbrand model, computed stratum by stratum so that negated atoms
/// are only tested once their relation is complete. For programs without
/// negation this is `lfp(TP)`.
pub fn least_herbrand_model(program: &Program) -> Result<Interpretation> {
    let level = strata(program)?;
    let top = level.values().copied().max().unwrap_or(0);
    let mut interp = Interpretation::new();
    for s in 0..=top {
        let clauses: Vec<&HornClause> = program
            .clauses()
            .iter()
            .filter(|c| level[&c.head.relation] == s)
            .collect();
        loop {
            let next = consequence_of(&clauses, program, &interp);
            if next == interp {
                break;
            }
            interp = next;
        }
    }
    Ok(interp)
}
