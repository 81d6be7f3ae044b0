use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::encoder::{constant_index, Mode, Schema};
use crate::error::{Error, Result};
use crate::herbrand::Atom;
use crate::qa::{query_marker, ParsedInstance, Task, TaskEncoder, TaskSettings};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KbMetrics {
    pub constants_width: usize,
    pub generalized_width: usize,
    /// Distinct input atoms met in the data, per representation.
    pub constants_atoms_seen: usize,
    pub generalized_atoms_seen: usize,
    /// `constants_width / generalized_width`.
    pub ratio: f64,
}

/// Feature widths of both representations of `task` over `schema`, and the
/// distinct atoms `data` actually uses in each.
pub fn kb_metrics(task: Task, schema: &Schema, data: &[ParsedInstance]) -> Result<KbMetrics> {
    let settings = |mode| TaskSettings {
        task,
        mode,
        ..TaskSettings::default()
    };
    let generalized = TaskEncoder::fit(settings(Mode::Generalized), schema.clone(), data)?;
    let constants_width = if task.is_yes_no() {
        constant_index(schema)?.len()
    } else {
        TaskEncoder::fit(settings(Mode::Constants), schema.clone(), data)?
            .index()
            .len()
    };
    let mut ground: BTreeSet<Atom> = BTreeSet::new();
    let mut lifted: BTreeSet<Atom> = BTreeSet::new();
    for p in data {
        ground.extend(p.facts.iter().cloned());
        if !task.is_yes_no() {
            ground.insert(query_marker(&p.query));
        }
        lifted.extend(generalized.input_atoms(p)?);
    }
    let generalized_width = generalized.index().len();
    if generalized_width == 0 {
        return Err(Error::Empty("generalized feature index"));
    }
    Ok(KbMetrics {
        constants_width,
        generalized_width,
        constants_atoms_seen: ground.len(),
        generalized_atoms_seen: lifted.len(),
        ratio: constants_width as f64 / generalized_width as f64,
    })
}

/// Unit costs of one conjunction step, one vote addition and one automaton
/// update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
        }
    }
}

fn factorial(v: u32) -> f64 {
    (1..=v).map(f64::from).product()
}

/// Worst-case training cost over `d` samples of `o` features with `m`
/// clauses: `d·(γ(2o+1)m + α·2o·m + β(m-1))`. The convolutional variant
/// evaluates clauses on `v!` windows.
pub fn cost_estimate(d: f64, o: f64, m: f64, v: u32, params: CostParams, convolutional: bool) -> Result<f64> {
    let CostParams { alpha, beta, gamma } = params;
    if [d, o, m, alpha, beta, gamma].iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::Config("cost inputs must be nonnegative".into()));
    }
    let windows = if convolutional { factorial(v) } else { 1.0 };
    let additions = if m >= 1.0 { m - 1.0 } else { 0.0 };
    Ok(d * (gamma * (2.0 * o + 1.0) * m + windows * alpha * 2.0 * o * m + beta * additions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herbrand::parse_atom;

    fn vocab(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{}", (b'a' + i as u8) as char)).collect()
    }

    fn movement(persons: usize, locations: usize) -> Schema {
        Task::Movement
            .schema(&vocab("P", persons), &vocab("l", locations))
            .unwrap()
    }

    /// Counts `MoveTo(p, l)` and `Q(p)` atoms by enumeration.
    fn enumerated(persons: usize, locations: usize) -> usize {
        let mut n = 0;
        for _ in 0..persons {
            n += 1;
            for _ in 0..locations {
                n += 1;
            }
        }
        n
    }

    #[test]
    fn twenty_by_ten() {
        let m = kb_metrics(Task::Movement, &movement(20, 10), &[]).unwrap();
        assert_eq!(m.constants_width, enumerated(20, 10));
        assert_eq!(m.constants_width, 220);
        assert_eq!(m.generalized_width, 12);
        assert!(m.ratio > 18.0);
    }

    #[test]
    fn small_vocabularies() {
        let m = kb_metrics(Task::Movement, &movement(6, 5), &[]).unwrap();
        assert!(m.ratio >= 3.0);
        let m = kb_metrics(Task::Movement, &movement(3, 3), &[]).unwrap();
        assert!(m.ratio >= 1.0);
    }

    #[test]
    fn generalized_width_ignores_vocabulary_size() {
        let a = kb_metrics(Task::Movement, &movement(6, 5), &[]).unwrap();
        let b = kb_metrics(Task::Movement, &movement(12, 10), &[]).unwrap();
        assert_eq!(a.generalized_width, b.generalized_width);
        assert!(b.constants_width > a.constants_width);
    }

    #[test]
    fn cost_examples() {
        let p = CostParams::default();
        assert_eq!(cost_estimate(1.0, 1.0, 2.0, 0, p, false).unwrap(), 11.0);
        assert_eq!(cost_estimate(1.0, 1.0, 2.0, 2, p, true).unwrap(), 15.0);
        assert_eq!(cost_estimate(0.0, 5.0, 7.0, 3, p, true).unwrap(), 0.0);
        assert!(cost_estimate(-1.0, 1.0, 1.0, 0, p, false).is_err());
    }

    #[test]
    fn seen_atoms_are_counted() {
        let p = ParsedInstance {
            facts: vec![parse_atom("MoveTo(Pa, la)").unwrap(), parse_atom("MoveTo(Pb, la)").unwrap()],
            query: crate::qa::QueryAtom {
                relation: "CurrentlyAt".into(),
                args: vec![Some("Pa".into()), None],
            },
            answer: "la".into(),
        };
        let m = kb_metrics(Task::Movement, &movement(2, 2), &[p]).unwrap();
        assert_eq!(m.constants_atoms_seen, 3);
        assert_eq!(m.generalized_atoms_seen, 3);
    }

    proptest::proptest! {
        #[test]
        fn convolution_with_at_most_one_free_variable_costs_the_same(
            d in 0.0..1e4f64, o in 0.0..500.0f64, m in 0.0..500.0f64, v in 0u32..2,
            a in 0.0..5.0f64, b in 0.0..5.0f64, g in 0.0..5.0f64,
        ) {
            let p = CostParams { alpha: a, beta: b, gamma: g };
            proptest::prop_assert_eq!(
                cost_estimate(d, o, m, v, p, true).unwrap(),
                cost_estimate(d, o, m, v, p, false).unwrap()
            );
        }
    }
}
