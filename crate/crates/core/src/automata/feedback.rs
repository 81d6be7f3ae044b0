//! Type I and Type II feedback.

use rand::Rng;

use super::automaton::Action;
use super::clause::{ClauseTeam, EvalMode};
use super::literals::LiteralVector;

/// Knobs the feedback rules need from the hyperparameters.
#[derive(Debug, Clone, Copy)]
pub struct FeedbackConfig {
    pub specificity: f64,
    pub boost_true_positive: bool,
    pub negative_literals: bool,
}

impl FeedbackConfig {
    fn active_literals(&self, team: &ClauseTeam) -> usize {
        if self.negative_literals {
            2 * team.features()
        } else {
            team.features()
        }
    }
}

/// Type I feedback: recognise and refine frequent patterns.
///
/// When the clause and the literal are both 1 the automaton moves towards
/// Include with probability `(s-1)/s` (1 when boosting). Otherwise it moves
/// towards Exclude with probability `1/s`. One uniform draw per automaton,
/// none in the boosted strong branch.
pub fn type_i_feedback<R: Rng + ?Sized>(
    team: &mut ClauseTeam,
    x: &LiteralVector,
    config: &FeedbackConfig,
    rng: &mut R,
) {
    let fires = team.fires(x, EvalMode::Learn);
    let s = config.specificity;
    let strong = (s - 1.0) / s;
    let weak = 1.0 / s;
    for k in 0..config.active_literals(team) {
        if fires && x.literal(k) {
            if config.boost_true_positive || rng.random::<f64>() < strong {
                team.step_toward_include(k);
            }
        } else if rng.random::<f64>() < weak {
            team.step_toward_exclude(k);
        }
    }
}

/// Type II feedback: when the clause fires, every automaton excluding a
/// literal of value 0 is penalised, pushing the clause to output 0 on this
/// input next time.
pub fn type_ii_feedback(team: &mut ClauseTeam, x: &LiteralVector, config: &FeedbackConfig) {
    if !team.fires(x, EvalMode::Learn) {
        return;
    }
    for k in 0..config.active_literals(team) {
        if !x.literal(k) && team.action(k) == Action::Exclude {
            team.step_toward_include(k);
        }
    }
}
