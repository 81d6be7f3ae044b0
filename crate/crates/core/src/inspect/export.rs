use std::collections::HashSet;

use crate::encoder::Mode;
use crate::error::{Error, Result};
use crate::herbrand::{parse_program, Atom, HornClause, Literal, Program, Term};
use crate::multiclass::MultiClassMachine;
use crate::qa::TaskEncoder;

#[derive(Debug, Clone, PartialEq)]
pub struct HornExport {
    pub program: Program,
    /// Empty positive clauses left out of the program.
    pub skipped_empty: usize,
    /// Rules equal to an earlier one.
    pub duplicates: usize,
    pub warnings: Vec<String>,
}

impl HornExport {
    pub fn text(&self) -> String {
        self.program.to_string()
    }
}

/// Head atom of the rules voting for `class`, or `None` for classes that
/// export nothing (the `no` class of yes/no tasks).
fn head_for(encoder: &TaskEncoder, class: &str) -> Option<Atom> {
    let task = encoder.settings().task;
    let relation = task.query_relation();
    if task.is_yes_no() {
        if class != "yes" {
            return None;
        }
        let arity = encoder.schema().query.arg_types.len();
        let args = (1..=arity).map(|k| Term::var(format!("Z{k}"))).collect();
        Some(Atom::new(relation, args))
    } else {
        Some(Atom::new(relation, vec![Term::var("Per1"), Term::from_ident(class)]))
    }
}

/// Positive clauses as Horn rules whose head is the query relation applied
/// to the class placeholder; excluded literals are left out and negated
/// literals become `not` atoms.
pub fn export_horn(machine: &MultiClassMachine, encoder: &TaskEncoder) -> Result<HornExport> {
    if encoder.settings().mode == Mode::Constants {
        return Err(Error::Config(
            "Horn export needs generalized mode: constant-mode clauses have no variables to bind".into(),
        ));
    }
    if machine.features() != encoder.index().len() {
        return Err(Error::DimensionMismatch {
            expected: encoder.index().len(),
            actual: machine.features(),
        });
    }
    let atoms = encoder.index().atoms();
    let o = atoms.len();
    let mut rules = Vec::new();
    let mut seen = HashSet::new();
    let (mut skipped_empty, mut duplicates) = (0, 0);
    let mut warnings = Vec::new();
    for bank in machine.banks() {
        let Some(head) = head_for(encoder, &bank.label) else {
            continue;
        };
        for (i, team) in bank.machine.positive().iter().enumerate() {
            let body: Vec<Literal> = team
                .included_literals()
                .map(|k| {
                    if k < o {
                        Literal::pos(atoms[k].clone())
                    } else {
                        Literal::neg(atoms[k - o].clone())
                    }
                })
                .collect();
            if body.is_empty() {
                skipped_empty += 1;
                warnings.push(format!("class {} clause {i}: empty, skipped", bank.label));
                continue;
            }
            let rule = HornClause::rule(head.clone(), body);
            if seen.insert(rule.to_string()) {
                rules.push(rule);
            } else {
                duplicates += 1;
            }
        }
    }
    let program = Program::new(rules)?;
    // the text form must read back as the same program
    debug_assert_eq!(parse_program(&program.to_string()).ok().as_ref(), Some(&program));
    Ok(HornExport {
        program,
        skipped_empty,
        duplicates,
        warnings,
    })
}

