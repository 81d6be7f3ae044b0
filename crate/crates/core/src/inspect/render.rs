use crate::automata::ClauseTeam;
use crate::encoder::AtomIndex;

/// Literal names for clause rendering: feature `k` is `names[k]`, its
/// negation `NOT names[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureNames(Vec<String>);

impl FeatureNames {
    pub fn new(names: Vec<String>) -> Self {
        Self(names)
    }

    /// `x1, x2, ...`
    pub fn numbered(features: usize) -> Self {
        Self((1..=features).map(|k| format!("x{k}")).collect())
    }

    pub fn from_index(index: &AtomIndex) -> Self {
        Self(index.atoms().iter().map(|a| a.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn literal(&self, k: usize) -> String {
        let o = self.0.len();
        if k < o {
            self.0[k].clone()
        } else {
            format!("NOT {}", self.0[k - o])
        }
    }
}

/// Shown for a clause without included literals.
pub const EMPTY_CLAUSE: &str = "TRUE";

pub fn render_clause(team: &ClauseTeam, names: &FeatureNames) -> String {
    let parts: Vec<String> = team.included_literals().map(|k| names.literal(k)).collect();
    if parts.is_empty() {
        EMPTY_CLAUSE.to_string()
    } else {
        parts.join(" AND ")
    }
}
