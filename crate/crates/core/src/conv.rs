//! Convolution over variable-assignment windows.
//!
//! A clause fires on a window set iff it fires on at least one window.
//! Feedback for a clause is applied on one witness window.

use rand::Rng;

use crate::automata::{
    type_i_feedback, type_ii_feedback, ClauseTeam, EvalMode, FeedbackKind, LiteralVector,
    TsetlinMachine,
};
use crate::error::{Error, Result};
use crate::multiclass::{argmax_first, MultiClassMachine};

/// Equal-width literal vectors, one per variable assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSet {
    windows: Vec<LiteralVector>,
    provenance: Vec<String>,
}

impl WindowSet {
    /// `provenance[i]` describes the assignment that produced `windows[i]`.
    pub fn new(windows: Vec<LiteralVector>, provenance: Vec<String>) -> Result<Self> {
        let first = windows.first().ok_or(Error::Empty("window set"))?;
        if provenance.len() != windows.len() {
            return Err(Error::DimensionMismatch {
                expected: windows.len(),
                actual: provenance.len(),
            });
        }
        for w in &windows[1..] {
            if w.features() != first.features() {
                return Err(Error::DimensionMismatch {
                    expected: first.features(),
                    actual: w.features(),
                });
            }
        }
        Ok(Self {
            windows,
            provenance,
        })
    }

    pub fn single(x: LiteralVector) -> Self {
        Self {
            windows: vec![x],
            provenance: vec!["identity".into()],
        }
    }

    /// Windows with provenance `#0`, `#1`, ...
    pub fn unlabelled(windows: Vec<LiteralVector>) -> Result<Self> {
        let provenance = (0..windows.len()).map(|i| format!("#{i}")).collect();
        Self::new(windows, provenance)
    }

    pub fn windows(&self) -> &[LiteralVector] {
        &self.windows
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn features(&self) -> usize {
        self.windows[0].features()
    }
}

/// Checked existential clause output over all windows.
pub fn clause_evaluate_conv(team: &ClauseTeam, ws: &WindowSet, mode: EvalMode) -> Result<bool> {
    if ws.features() != team.features() {
        return Err(Error::DimensionMismatch {
            expected: team.features(),
            actual: ws.features(),
        });
    }
    Ok(fires_any(team, ws, mode))
}

fn fires_any(team: &ClauseTeam, ws: &WindowSet, mode: EvalMode) -> bool {
    ws.windows.iter().any(|w| team.fires(w, mode))
}

/// Index of the window that receives feedback for `team`: uniform among the
/// windows where the clause fires in learning mode, or uniform among all of
/// them when none fires. A single candidate consumes no randomness.
pub fn select_feedback_window<R: Rng + ?Sized>(
    team: &ClauseTeam,
    ws: &WindowSet,
    rng: &mut R,
) -> Result<usize> {
    if ws.is_empty() {
        return Err(Error::Empty("window set"));
    }
    let firing: Vec<usize> = (0..ws.len())
        .filter(|&i| team.fires(&ws.windows[i], EvalMode::Learn))
        .collect();
    let pick = |n: usize, rng: &mut R| if n == 1 { 0 } else { rng.random_range(0..n) };
    Ok(if firing.is_empty() {
        pick(ws.len(), rng)
    } else {
        firing[pick(firing.len(), rng)]
    })
}

impl TsetlinMachine {
    fn check_windows(&self, ws: &WindowSet) -> Result<()> {
        self.check_width(&ws.windows[0])
    }

    pub fn votes_conv(&self, ws: &WindowSet, mode: EvalMode) -> i32 {
        crate::automata::vote_sum(self.clauses().map(|c| (c.polarity(), fires_any(c, ws, mode))))
    }

    pub fn predict_conv(&self, ws: &WindowSet) -> Result<bool> {
        self.check_windows(ws)?;
        Ok(crate::automata::decide(self.votes_conv(ws, EvalMode::Classify)))
    }

    /// One online update where every clause output is existential over the
    /// windows and each selected clause learns from its own witness window.
    pub fn train_step_conv<R: Rng + ?Sized>(
        &mut self,
        ws: &WindowSet,
        y: bool,
        rng: &mut R,
    ) -> Result<()> {
        self.check_windows(ws)?;
        self.train_step_conv_unchecked(ws, y, rng);
        Ok(())
    }

    pub(crate) fn train_step_conv_unchecked<R: Rng + ?Sized>(
        &mut self,
        ws: &WindowSet,
        y: bool,
        rng: &mut R,
    ) {
        let vote = self.votes_conv(ws, EvalMode::Learn);
        self.gated_update(y, vote, rng, |team, kind, cfg, rng| {
            let w = select_feedback_window(team, ws, rng).expect("window set is never empty");
            let x = &ws.windows[w];
            match kind {
                FeedbackKind::TypeI => type_i_feedback(team, x, cfg, rng),
                FeedbackKind::TypeII => type_ii_feedback(team, x, cfg),
            }
        });
    }
}

impl MultiClassMachine {
    pub fn class_votes_conv(&self, ws: &WindowSet) -> Result<Vec<i32>> {
        self.check_width(&ws.windows[0])?;
        Ok(self
            .banks()
            .iter()
            .map(|b| b.machine.votes_conv(ws, EvalMode::Classify))
            .collect())
    }

    pub fn predict_conv(&self, ws: &WindowSet) -> Result<usize> {
        Ok(argmax_first(&self.class_votes_conv(ws)?))
    }

    /// Convolutional counterpart of [`MultiClassMachine::train_step`], with
    /// the same bank schedule and draw order.
    pub fn train_step_conv<R: Rng + ?Sized>(
        &mut self,
        ws: &WindowSet,
        class: usize,
        rng: &mut R,
    ) -> Result<()> {
        self.check_width(&ws.windows[0])?;
        self.check_class(class)?;
        self.banks_mut()[class]
            .machine
            .train_step_conv_unchecked(ws, true, rng);
        let other = self.sample_negative(class, rng);
        self.banks_mut()[other]
            .machine
            .train_step_conv_unchecked(ws, false, rng);
        Ok(())
    }
}
