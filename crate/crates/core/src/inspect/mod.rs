//! Clause views, Horn export, knowledge-base size and cost estimates, and
//! run reports.

mod dump;
mod export;
mod metrics;
mod render;
mod report;
mod snapshot;

pub use dump::{dump_bank, global_dump, parse_dump, DumpedClause};
pub use export::{export_horn, HornExport};
pub use metrics::{cost_estimate, kb_metrics, CostParams, KbMetrics};
pub use render::{render_clause, FeatureNames, EMPTY_CLAUSE};
pub use report::RunReport;
pub use snapshot::{is_untrained, local_snapshot, ClassSnapshot, FiringClause, LocalSnapshot};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{ClauseTeam, HyperParams, Polarity, TsetlinMachine};
    use crate::encoder::Mode;
    use crate::experiment::{run, Experiment};
    use crate::herbrand::parse_program;
    use crate::multiclass::{ClassBank, MultiClassMachine};
    use crate::qa::{Task, TaskEncoder, TaskSettings};

    fn trained_child() -> (MultiClassMachine, TaskEncoder) {
        let mut e = Experiment::new(Task::Child);
        e.data.train = 400;
        e.data.test = 50;
        e.params.clauses = 20;
        e.params.epochs = 20;
        let out = run(&e).unwrap();
        (out.trained.machine, out.trained.encoder)
    }

    #[test]
    fn exported_program_parses_back() {
        let (m, enc) = trained_child();
        let export = export_horn(&m, &enc).unwrap();
        let text = export.text();
        assert_eq!(parse_program(&text).unwrap(), export.program);
        assert!(export.program.clauses().iter().all(|c| c.head.relation == "child"));
        assert!(text.contains("parent(Z2, Z1)"));
    }

    fn movement_encoder() -> TaskEncoder {
        let schema = Task::Movement
            .schema(&["Mary".into(), "John".into()], &["office".into(), "garden".into()])
            .unwrap();
        TaskEncoder::fit(TaskSettings::default(), schema, &[]).unwrap()
    }

    /// Machine whose first positive clause per class has the given states
    /// and all other clauses are empty.
    fn handmade(enc: &TaskEncoder, first: &[u16]) -> MultiClassMachine {
        let o = enc.index().len();
        let params = HyperParams { clauses: 4, ..HyperParams::default() };
        let empty = || ClauseTeam::from_states(Polarity::Positive, 100, vec![1; 2 * o]).unwrap();
        let banks = enc
            .classes()
            .iter()
            .map(|label| {
                let pos = vec![ClauseTeam::from_states(Polarity::Positive, 100, first.to_vec()).unwrap(), empty()];
                let neg = (0..2)
                    .map(|_| ClauseTeam::from_states(Polarity::Negative, 100, vec![1; 2 * o]).unwrap())
                    .collect();
                ClassBank {
                    label: label.clone(),
                    machine: TsetlinMachine::from_clauses(params.clone(), pos, neg).unwrap(),
                }
            })
            .collect();
        MultiClassMachine::from_banks(banks).unwrap()
    }

    #[test]
    fn movement_heads_and_negations() {
        let enc = movement_encoder();
        let o = enc.index().len();
        let mut states = vec![1u16; 2 * o];
        states[0] = 150;
        states[o + 1] = 150;
        let export = export_horn(&handmade(&enc, &states), &enc).unwrap();
        let text = export.text();
        let a0 = &enc.index().atoms()[0];
        let a1 = &enc.index().atoms()[1];
        assert!(text.contains(&format!("CurrentlyAt(Per1, Loc1) :- {a0}, not {a1}.")), "{text}");
        assert_eq!(export.program.clauses().len(), enc.classes().len());
        assert_eq!(export.skipped_empty, enc.classes().len());
        assert_eq!(export.warnings.len(), export.skipped_empty);
        parse_program(&text).unwrap();
    }

    #[test]
    fn duplicates_are_dropped() {
        let enc = movement_encoder();
        let o = enc.index().len();
        let mut states = vec![1u16; 2 * o];
        states[2] = 150;
        let mut m = handmade(&enc, &states);
        let bank = &m.banks()[0];
        let dup = MultiClassMachine::from_banks(
            std::iter::once(ClassBank {
                label: bank.label.clone(),
                machine: TsetlinMachine::from_clauses(
                    bank.machine.params().clone(),
                    vec![bank.machine.positive()[0].clone(), bank.machine.positive()[0].clone()],
                    bank.machine.negative().to_vec(),
                )
                .unwrap(),
            })
            .chain(m.banks()[1..].iter().cloned())
            .collect(),
        )
        .unwrap();
        m = dup;
        let export = export_horn(&m, &enc).unwrap();
        assert_eq!(export.duplicates, 1);
    }

    #[test]
    fn constants_mode_cannot_export() {
        let schema = Task::Movement.schema(&["Mary".into()], &["office".into(), "garden".into()]).unwrap();
        let settings = TaskSettings { mode: Mode::Constants, ..TaskSettings::default() };
        let enc = TaskEncoder::fit(settings, schema, &[]).unwrap();
        let m = MultiClassMachine::new(enc.classes(), enc.index().len(), HyperParams { clauses: 2, ..HyperParams::default() }, &mut crate::rng::rng_from_seed(1)).unwrap();
        assert!(export_horn(&m, &enc).is_err());
    }
}
