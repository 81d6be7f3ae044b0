//! Tsetlin machines over propositional and relational inputs, Horn-clause
//! export, and a closed-domain question answering pipeline built on top.

pub mod automata;
pub mod conv;
pub mod encoder;
pub mod error;
pub mod experiment;
pub mod forge;
pub mod herbrand;
pub mod inspect;
pub mod model;
pub mod multiclass;
pub mod qa;
pub mod rng;
pub mod testing;

pub use automata::{HyperParams, LiteralVector, TsetlinMachine};
pub use error::{Error, Result};
pub use multiclass::{ClassBank, Metrics, MultiClassMachine};
