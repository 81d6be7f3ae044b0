use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automata::{EvalMode, Polarity, TsetlinMachine};
use crate::conv::WindowSet;
use crate::error::{Error, Result};
use crate::multiclass::{argmax_first, MultiClassMachine};

use super::render::{render_clause, FeatureNames};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiringClause {
    pub polarity: char,
    /// Position within the clauses of its polarity.
    pub index: usize,
    pub text: String,
    pub vote: i32,
    /// Provenance of the first window on which the clause fires.
    pub window: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSnapshot {
    pub label: String,
    pub firing: Vec<FiringClause>,
    pub total: i32,
}

/// Clauses that fire on one instance, per class, and the resulting decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSnapshot {
    pub classes: Vec<ClassSnapshot>,
    pub winner: usize,
}

impl LocalSnapshot {
    pub fn winner_label(&self) -> &str {
        &self.classes[self.winner].label
    }
}

/// Whether every automaton still sits on one of the two boundary states, as
/// right after initialisation.
pub fn is_untrained(machine: &TsetlinMachine) -> bool {
    let n = machine.params().states_per_action;
    machine
        .clauses()
        .all(|c| c.states().iter().all(|&s| s == n || s == n + 1))
}

pub fn local_snapshot(
    machine: &MultiClassMachine,
    ws: &WindowSet,
    names: &FeatureNames,
) -> Result<LocalSnapshot> {
    if ws.features() != machine.features() {
        return Err(Error::DimensionMismatch {
            expected: machine.features(),
            actual: ws.features(),
        });
    }
    if machine.banks().iter().all(|b| is_untrained(&b.machine)) {
        return Err(Error::Untrained);
    }
    let mut classes = Vec::with_capacity(machine.banks().len());
    for bank in machine.banks() {
        let mut firing = Vec::new();
        for (polarity, teams) in [
            (Polarity::Positive, bank.machine.positive()),
            (Polarity::Negative, bank.machine.negative()),
        ] {
            for (index, team) in teams.iter().enumerate() {
                let hit = ws
                    .windows()
                    .iter()
                    .position(|w| team.fires(w, EvalMode::Classify));
                if let Some(w) = hit {
                    firing.push(FiringClause {
                        polarity: polarity.symbol(),
                        index,
                        text: render_clause(team, names),
                        vote: polarity.sign(),
                        window: ws.provenance()[w].clone(),
                    });
                }
            }
        }
        let total = firing.iter().map(|f| f.vote).sum();
        classes.push(ClassSnapshot {
            label: bank.label.clone(),
            firing,
            total,
        });
    }
    let totals: Vec<i32> = classes.iter().map(|c| c.total).collect();
    Ok(LocalSnapshot {
        winner: argmax_first(&totals),
        classes,
    })
}

impl fmt::Display for LocalSnapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.classes {
            writeln!(f, "class {} total {:+}", c.label, c.total)?;
            for fc in &c.firing {
                write!(f, "  {} #{:<4} {:+}  {}", fc.polarity, fc.index, fc.vote, fc.text)?;
                if fc.window != "identity" {
                    write!(f, "  [{}]", fc.window)?;
                }
                writeln!(f)?;
            }
        }
        writeln!(f, "winner {}", self.winner_label())
    }
}
