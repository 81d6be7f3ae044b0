use crate::error::{Error, Result};

/// Hyperparameters shared by every clause bank of a machine.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperParams {
    /// Total clauses per bank, half of each polarity.
    pub clauses: usize,
    /// Voting target `T`, also the clipping bound.
    pub threshold: i32,
    /// Specificity `s > 1`.
    pub specificity: f64,
    /// States per action `N`; automata live in `1..=2N`.
    pub states_per_action: u16,
    pub epochs: usize,
    /// Replace `(s-1)/s` by 1 in the strong Type I branch.
    pub boost_true_positive: bool,
    /// When off, negated literals are never included.
    pub negative_literals: bool,
    pub seed: u64,
}

impl Default for HyperParams {
    fn default() -> Self {
        Self {
            clauses: 200,
            threshold: 15,
            specificity: 3.0,
            states_per_action: 100,
            epochs: 100,
            boost_true_positive: false,
            negative_literals: true,
            seed: 42,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        if self.clauses == 0 || self.clauses % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "clause count must be even and positive, got {}",
                self.clauses
            )));
        }
        if self.threshold < 1 {
            return Err(Error::InvalidParams(format!(
                "voting target must be at least 1, got {}",
                self.threshold
            )));
        }
        if !(self.specificity > 1.0) {
            return Err(Error::InvalidParams(format!(
                "specificity must exceed 1, got {}",
                self.specificity
            )));
        }
        if self.states_per_action == 0 || self.states_per_action > u16::MAX / 2 {
            return Err(Error::InvalidParams(format!(
                "states per action must be in 1..={}, got {}",
                u16::MAX / 2,
                self.states_per_action
            )));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidParams("epochs must be positive".into()));
        }
        Ok(())
    }
}
