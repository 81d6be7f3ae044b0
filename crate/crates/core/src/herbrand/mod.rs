//! Ground Horn programs: Herbrand base, immediate consequence and least
//! Herbrand model, plus a line-oriented text format.

mod semantics;
mod syntax;
mod types;

pub use semantics::{
    ground, herbrand_base, immediate_consequence, immediate_consequence_ground,
    least_herbrand_model, naive_fixpoint, strata,
};
pub use syntax::{is_variable_name, parse_atom, parse_program};
pub use types::{Atom, HornClause, Interpretation, Literal, Program, RelationSymbol, Term};
