//! Template parsing of stories, entity generalization and the task-level
//! encoding of instances into windows and class labels.

mod instance;
mod lexicon;
mod task;

pub use instance::{
    encode_with_order, generalize_entities, parse_instance, permute_instance, query_marker,
    type_respecting_renamings, EntityBinding, Generalized, LabelMap, ParsedInstance, QAInstance,
    QUERY_MARKER,
};
pub use lexicon::{Lexicon, QueryAtom, Sentence, Template, TemplateKind};
pub use task::{observation, Encoded, Task, TaskEncoder, TaskSettings, YES_NO};
