use crate::automata::{ClauseTeam, Polarity, TsetlinMachine};
use crate::error::{Error, Result};
use crate::multiclass::MultiClassMachine;

use super::render::{render_clause, FeatureNames, EMPTY_CLAUSE};

/// Every clause, ordered by class, polarity (positive first) and index:
///
/// ```text
/// class Loc3
/// + 0 | Q(Per1) AND MoveTo(Per1, Loc3)
/// - 0 | TRUE
/// ```
pub fn global_dump(machine: &MultiClassMachine, names: &FeatureNames) -> String {
    machine
        .banks()
        .iter()
        .map(|b| dump_bank(&b.label, &b.machine, names))
        .collect()
}

/// Dump of a single binary machine under the class line `label`.
pub fn dump_bank(label: &str, machine: &TsetlinMachine, names: &FeatureNames) -> String {
    let mut out = format!("class {label}\n");
    for teams in [machine.positive(), machine.negative()] {
        for (i, team) in teams.iter().enumerate() {
            out.push_str(&dump_line(team, i, names));
        }
    }
    out
}

fn dump_line(team: &ClauseTeam, index: usize, names: &FeatureNames) -> String {
    format!("{} {} | {}\n", team.polarity().symbol(), index, render_clause(team, names))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DumpedClause {
    pub class: String,
    pub polarity: Polarity,
    pub index: usize,
    /// `(negated, literal name)` in rendering order.
    pub literals: Vec<(bool, String)>,
}

pub fn parse_dump(text: &str) -> Result<Vec<DumpedClause>> {
    let mut class: Option<String> = None;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(label) = line.strip_prefix("class ") {
            class = Some(label.trim().to_string());
            continue;
        }
        let class = class
            .clone()
            .ok_or_else(|| Error::parse(n, "clause before any class line"))?;
        let (head, body) = line
            .split_once(" | ")
            .ok_or_else(|| Error::parse(n, "expected `<polarity> <index> | <clause>`"))?;
        let (sign, index) = head
            .split_once(' ')
            .ok_or_else(|| Error::parse(n, "missing clause index"))?;
        let polarity = sign
            .chars()
            .next()
            .filter(|_| sign.len() == 1)
            .and_then(Polarity::from_symbol)
            .ok_or_else(|| Error::parse(n, format!("bad polarity `{sign}`")))?;
        let index = index
            .trim()
            .parse()
            .map_err(|_| Error::parse(n, format!("bad clause index `{index}`")))?;
        let literals = if body.trim() == EMPTY_CLAUSE {
            vec![]
        } else {
            body.split(" AND ")
                .map(|lit| match lit.trim().strip_prefix("NOT ") {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, lit.trim().to_string()),
                })
                .collect()
        };
        out.push(DumpedClause {
            class,
            polarity,
            index,
            literals,
        });
    }
    Ok(out)
}
