//! Tsetlin automata, conjunctive clauses and the binary Tsetlin machine.

mod automaton;
mod clause;
mod feedback;
mod literals;
mod machine;
mod params;

pub use automaton::{Action, AutomatonState, Event};
pub use clause::{ClauseTeam, EvalMode, Polarity};
pub use feedback::{type_i_feedback, type_ii_feedback, FeedbackConfig};
pub use literals::LiteralVector;
pub use machine::{clip, decide, vote_sum, TsetlinMachine};
pub(crate) use machine::FeedbackKind;
pub use params::HyperParams;
