//! Binary Tsetlin machine: clause banks, voting and the training loop.

use rand::seq::SliceRandom;
use rand::Rng;

use super::clause::{ClauseTeam, EvalMode, Polarity};
use super::feedback::{type_i_feedback, type_ii_feedback, FeedbackConfig};
use super::literals::LiteralVector;
use super::params::HyperParams;
use crate::error::{Error, Result};

/// `v = Σ C⁺ − Σ C⁻` over `(polarity, output)` pairs.
pub fn vote_sum(outputs: impl IntoIterator<Item = (Polarity, bool)>) -> i32 {
    outputs
        .into_iter()
        .filter(|&(_, fired)| fired)
        .map(|(p, _)| p.sign())
        .sum()
}

pub fn clip(v: i32, threshold: i32) -> i32 {
    v.clamp(-threshold, threshold)
}

/// Unit step `u(v)`: class 1 iff `v >= 0`.
pub fn decide(v: i32) -> bool {
    v >= 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FeedbackKind {
    TypeI,
    TypeII,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TsetlinMachine {
    params: HyperParams,
    features: usize,
    positive: Vec<ClauseTeam>,
    negative: Vec<ClauseTeam>,
}

impl TsetlinMachine {
    /// Fresh machine with boundary-random automata.
    pub fn new<R: Rng + ?Sized>(features: usize, params: HyperParams, rng: &mut R) -> Result<Self> {
        params.validate()?;
        if features == 0 {
            return Err(Error::Empty("feature set"));
        }
        let half = params.clauses / 2;
        let mut positive = Vec::with_capacity(half);
        let mut negative = Vec::with_capacity(half);
        for _ in 0..half {
            positive.push(ClauseTeam::random(
                features,
                Polarity::Positive,
                params.states_per_action,
                params.negative_literals,
                rng,
            ));
            negative.push(ClauseTeam::random(
                features,
                Polarity::Negative,
                params.states_per_action,
                params.negative_literals,
                rng,
            ));
        }
        Ok(Self {
            params,
            features,
            positive,
            negative,
        })
    }

    pub fn from_clauses(
        params: HyperParams,
        positive: Vec<ClauseTeam>,
        negative: Vec<ClauseTeam>,
    ) -> Result<Self> {
        params.validate()?;
        if positive.len() != params.clauses / 2 || negative.len() != params.clauses / 2 {
            return Err(Error::Model(format!(
                "expected {} clauses of each polarity, got {} positive and {} negative",
                params.clauses / 2,
                positive.len(),
                negative.len()
            )));
        }
        let features = positive
            .first()
            .map(ClauseTeam::features)
            .ok_or(Error::Empty("clause bank"))?;
        for team in positive.iter().chain(&negative) {
            if team.features() != features {
                return Err(Error::DimensionMismatch {
                    expected: features,
                    actual: team.features(),
                });
            }
            if team.states_per_action() != params.states_per_action {
                return Err(Error::Model("automaton depth differs from hyperparameters".into()));
            }
        }
        if positive.iter().any(|c| c.polarity() != Polarity::Positive)
            || negative.iter().any(|c| c.polarity() != Polarity::Negative)
        {
            return Err(Error::Model("clause polarity does not match its bank".into()));
        }
        Ok(Self {
            params,
            features,
            positive,
            negative,
        })
    }

    pub fn params(&self) -> &HyperParams {
        &self.params
    }

    pub fn features(&self) -> usize {
        self.features
    }

    pub fn positive(&self) -> &[ClauseTeam] {
        &self.positive
    }

    pub fn negative(&self) -> &[ClauseTeam] {
        &self.negative
    }

    /// All clauses, positive bank first.
    pub fn clauses(&self) -> impl Iterator<Item = &ClauseTeam> {
        self.positive.iter().chain(&self.negative)
    }

    pub(crate) fn feedback_config(&self) -> FeedbackConfig {
        FeedbackConfig {
            specificity: self.params.specificity,
            boost_true_positive: self.params.boost_true_positive,
            negative_literals: self.params.negative_literals,
        }
    }

    pub(crate) fn check_width(&self, x: &LiteralVector) -> Result<()> {
        if x.features() == self.features {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.features,
                actual: x.features(),
            })
        }
    }

    pub fn votes(&self, x: &LiteralVector, mode: EvalMode) -> i32 {
        vote_sum(self.clauses().map(|c| (c.polarity(), c.fires(x, mode))))
    }

    pub fn predict(&self, x: &LiteralVector) -> Result<bool> {
        self.check_width(x)?;
        Ok(decide(self.votes(x, EvalMode::Classify)))
    }

    /// One online update on `(x, y)`.
    pub fn train_step<R: Rng + ?Sized>(&mut self, x: &LiteralVector, y: bool, rng: &mut R) {
        let vote = self.votes(x, EvalMode::Learn);
        self.gated_update(y, vote, rng, |team, kind, cfg, rng| match kind {
            FeedbackKind::TypeI => type_i_feedback(team, x, cfg, rng),
            FeedbackKind::TypeII => type_ii_feedback(team, x, cfg),
        });
    }

    /// Feedback gating shared by plain and convolutional steps.
    ///
    /// Each clause gets its own uniform draw against `ε / 2T`, positive clause
    /// first within every pair. With zero voting error nothing is drawn.
    pub(crate) fn gated_update<R, F>(&mut self, y: bool, vote: i32, rng: &mut R, mut apply: F)
    where
        R: Rng + ?Sized,
        F: FnMut(&mut ClauseTeam, FeedbackKind, &FeedbackConfig, &mut R),
    {
        let t = self.params.threshold;
        let clipped = clip(vote, t);
        let error = if y { t - clipped } else { t + clipped };
        if error == 0 {
            return;
        }
        let p = f64::from(error) / f64::from(2 * t);
        let cfg = self.feedback_config();
        let (pos_kind, neg_kind) = if y {
            (FeedbackKind::TypeI, FeedbackKind::TypeII)
        } else {
            (FeedbackKind::TypeII, FeedbackKind::TypeI)
        };
        for j in 0..self.positive.len() {
            if rng.random::<f64>() < p {
                apply(&mut self.positive[j], pos_kind, &cfg, rng);
            }
            if rng.random::<f64>() < p {
                apply(&mut self.negative[j], neg_kind, &cfg, rng);
            }
        }
    }

    /// Trains for `epochs` passes, reshuffling the sample order each pass.
    pub fn fit<R: Rng + ?Sized>(
        &mut self,
        samples: &[(LiteralVector, bool)],
        epochs: usize,
        rng: &mut R,
    ) -> Result<()> {
        if samples.is_empty() {
            return Err(Error::Empty("training set"));
        }
        for (x, _) in samples {
            self.check_width(x)?;
        }
        let mut order: Vec<usize> = (0..samples.len()).collect();
        for _ in 0..epochs {
            order.shuffle(rng);
            for &i in &order {
                let (x, y) = &samples[i];
                self.train_step(x, *y, rng);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::testing::AlwaysFire;

    fn params(clauses: usize, threshold: i32) -> HyperParams {
        HyperParams {
            clauses,
            threshold,
            specificity: 3.0,
            ..Default::default()
        }
    }

    fn xor_samples() -> Vec<(LiteralVector, bool)> {
        [(false, false), (false, true), (true, false), (true, true)]
            .iter()
            .map(|&(a, b)| (LiteralVector::from_features(&[a, b]), a ^ b))
            .collect()
    }

    /// Positive x1¬x2, ¬x1x2; negative x1x2, ¬x1¬x2.
    fn handmade_xor() -> TsetlinMachine {
        const N: u16 = 100;
        let team = |p, inc: &[usize]| {
            let states = (0..4).map(|k| if inc.contains(&k) { N + 1 } else { N }).collect();
            ClauseTeam::from_states(p, N, states).unwrap()
        };
        TsetlinMachine::from_clauses(
            params(4, 1),
            vec![team(Polarity::Positive, &[0, 3]), team(Polarity::Positive, &[2, 1])],
            vec![team(Polarity::Negative, &[0, 1]), team(Polarity::Negative, &[2, 3])],
        )
        .unwrap()
    }

    #[test]
    fn handmade_xor_votes() {
        let tm = handmade_xor();
        let x = LiteralVector::from_features(&[true, false]);
        assert_eq!(tm.votes(&x, EvalMode::Classify), 1);
        assert!(tm.predict(&x).unwrap());
        for (x, y) in xor_samples() {
            assert_eq!(tm.predict(&x).unwrap(), y);
        }
    }

    #[test]
    fn vote_sum_arithmetic() {
        use Polarity::*;
        let outs = [(Positive, true), (Positive, true), (Positive, true), (Negative, true), (Negative, false)];
        assert_eq!(vote_sum(outs), 2);
        assert_eq!(vote_sum([(Positive, false), (Negative, false)]), 0);
        assert!(decide(0));
    }

    #[test]
    fn clip_bounds() {
        assert_eq!(clip(7, 5), 5);
        assert_eq!(clip(-9, 5), -5);
        assert_eq!(clip(3, 5), 3);
    }

    #[test]
    fn quiescent_at_target() {
        // Every clause in the handmade machine is non-empty; with T = 1 the
        // vote on (1,0) is already clipped to +T.
        let mut tm = handmade_xor();
        let before = tm.clone();
        let x = LiteralVector::from_features(&[true, false]);
        tm.train_step(&x, true, &mut AlwaysFire);
        assert_eq!(tm, before);
        let x = LiteralVector::from_features(&[true, true]);
        tm.train_step(&x, false, &mut AlwaysFire);
        assert_eq!(tm, before);
    }

    #[test]
    fn full_error_gives_every_clause_feedback() {
        // y = 1 with vote clipped at -T: ε / 2T = 1.
        const N: u16 = 100;
        let neg_firing = ClauseTeam::from_states(Polarity::Negative, N, vec![N + 1, N, N, N]).unwrap();
        let mut tm = TsetlinMachine::from_clauses(
            params(2, 1),
            vec![ClauseTeam::from_states(Polarity::Positive, N, vec![N, N + 1, N, N]).unwrap()],
            vec![neg_firing],
        )
        .unwrap();
        let x = LiteralVector::from_features(&[true, false]);
        assert_eq!(tm.votes(&x, EvalMode::Learn), -1);
        tm.train_step(&x, true, &mut AlwaysFire);
        // Positive clause (x2 included, silent): Type I weak branch lowers all.
        assert_eq!(tm.positive()[0].states(), &[N - 1, N, N - 1, N - 1]);
        // Negative clause fires: Type II raises excluded zero literals x2, ¬x1.
        assert_eq!(tm.negative()[0].states(), &[N + 1, N + 1, N + 1, N]);
    }

    #[test]
    fn learns_xor() {
        let mut rng = rng_from_seed(1);
        let mut tm = TsetlinMachine::new(2, params(20, 10), &mut rng).unwrap();
        tm.fit(&xor_samples(), 200, &mut rng).unwrap();
        for (x, y) in xor_samples() {
            assert_eq!(tm.predict(&x).unwrap(), y);
        }
    }

    #[test]
    fn constant_label_predicts_one() {
        let mut rng = rng_from_seed(5);
        let mut tm = TsetlinMachine::new(3, params(10, 5), &mut rng).unwrap();
        let samples: Vec<_> = (0..8)
            .map(|i| {
                let bits = [(i & 1) == 1, (i & 2) == 2, (i & 4) == 4];
                (LiteralVector::from_features(&bits), true)
            })
            .collect();
        tm.fit(&samples, 50, &mut rng).unwrap();
        for (x, _) in &samples {
            assert!(tm.predict(x).unwrap());
        }
    }

    #[test]
    fn same_seed_same_states() {
        let run = || {
            let mut rng = rng_from_seed(99);
            let mut tm = TsetlinMachine::new(2, params(20, 10), &mut rng).unwrap();
            tm.fit(&xor_samples(), 30, &mut rng).unwrap();
            tm
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn empty_training_set_rejected() {
        let mut rng = rng_from_seed(1);
        let mut tm = TsetlinMachine::new(2, params(4, 2), &mut rng).unwrap();
        assert!(matches!(tm.fit(&[], 1, &mut rng), Err(Error::Empty(_))));
    }
}
