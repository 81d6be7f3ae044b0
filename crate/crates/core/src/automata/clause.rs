//! Conjunctive clauses backed by a team of Tsetlin automata.

use rand::Rng;

use super::automaton::{action_of, transition, Action, Event};
use super::literals::{word_count, LiteralVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn sign(self) -> i32 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '+' => Some(Polarity::Positive),
            '-' => Some(Polarity::Negative),
            _ => None,
        }
    }
}

/// Whether a clause is evaluated while learning or while classifying.
///
/// An empty clause (no included literal) outputs 1 while learning so that it
/// can pick up Type I feedback, and 0 while classifying so that it casts no
/// vacuous vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Learn,
    Classify,
}

/// One clause: `2f` automata, one per literal, plus a polarity.
///
/// The include mask mirrors the automata actions and is kept in sync on every
/// transition, so evaluation is a handful of word operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseTeam {
    polarity: Polarity,
    features: usize,
    states_per_action: u16,
    states: Vec<u16>,
    include: Vec<u64>,
    included: usize,
}

impl ClauseTeam {
    /// Builds a team from explicit automaton states (layout `[x.., ¬x..]`).
    pub fn from_states(polarity: Polarity, states_per_action: u16, states: Vec<u16>) -> Result<Self> {
        if states.len() % 2 != 0 {
            return Err(Error::Model(format!(
                "clause has {} automata, expected an even count",
                states.len()
            )));
        }
        let max = 2 * states_per_action;
        if let Some(bad) = states.iter().find(|&&s| s < 1 || s > max) {
            return Err(Error::Model(format!("automaton state {bad} outside 1..={max}")));
        }
        let features = states.len() / 2;
        let mut team = Self {
            polarity,
            features,
            states_per_action,
            include: vec![0; word_count(states.len())],
            states,
            included: 0,
        };
        for k in 0..team.states.len() {
            if action_of(team.states[k], states_per_action) == Action::Include {
                team.include[k / 64] |= 1 << (k % 64);
                team.included += 1;
            }
        }
        Ok(team)
    }

    /// Every automaton starts at `N` or `N + 1`, chosen uniformly. With
    /// `negative_literals` off the negated half is pinned to `N` (Exclude).
    pub fn random<R: Rng + ?Sized>(
        features: usize,
        polarity: Polarity,
        states_per_action: u16,
        negative_literals: bool,
        rng: &mut R,
    ) -> Self {
        let n = states_per_action;
        let states = (0..2 * features)
            .map(|k| {
                if k >= features && !negative_literals {
                    n
                } else if rng.random::<bool>() {
                    n + 1
                } else {
                    n
                }
            })
            .collect();
        Self::from_states(polarity, n, states).expect("states within range by construction")
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn features(&self) -> usize {
        self.features
    }

    pub fn states_per_action(&self) -> u16 {
        self.states_per_action
    }

    pub fn states(&self) -> &[u16] {
        &self.states
    }

    pub fn state(&self, literal: usize) -> u16 {
        self.states[literal]
    }

    pub fn action(&self, literal: usize) -> Action {
        action_of(self.states[literal], self.states_per_action)
    }

    pub fn is_empty(&self) -> bool {
        self.included == 0
    }

    /// Literal indices currently included, ascending.
    pub fn included_literals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(|&k| self.include[k / 64] >> (k % 64) & 1 == 1)
    }

    /// Clause output, checking that `x` has the same feature count.
    pub fn evaluate(&self, x: &LiteralVector, mode: EvalMode) -> Result<bool> {
        if x.features() != self.features {
            return Err(Error::DimensionMismatch {
                expected: self.features,
                actual: x.features(),
            });
        }
        Ok(self.fires(x, mode))
    }

    /// Unchecked evaluation for the training hot path.
    #[inline]
    pub fn fires(&self, x: &LiteralVector, mode: EvalMode) -> bool {
        debug_assert_eq!(x.features(), self.features);
        if self.included == 0 {
            return mode == EvalMode::Learn;
        }
        self.include
            .iter()
            .zip(x.words())
            .all(|(&inc, &lit)| inc & !lit == 0)
    }

    pub fn apply(&mut self, literal: usize, event: Event) {
        let before = action_of(self.states[literal], self.states_per_action);
        self.states[literal] = transition(self.states[literal], self.states_per_action, event);
        let after = action_of(self.states[literal], self.states_per_action);
        if before != after {
            let (word, bit) = (literal / 64, 1u64 << (literal % 64));
            match after {
                Action::Include => {
                    self.include[word] |= bit;
                    self.included += 1;
                }
                Action::Exclude => {
                    self.include[word] &= !bit;
                    self.included -= 1;
                }
            }
        }
    }

    /// One step towards Include regardless of current side.
    #[inline]
    pub(crate) fn step_toward_include(&mut self, literal: usize) {
        let event = match self.action(literal) {
            Action::Include => Event::Reward,
            Action::Exclude => Event::Penalty,
        };
        self.apply(literal, event);
    }

    /// One step towards Exclude regardless of current side.
    #[inline]
    pub(crate) fn step_toward_exclude(&mut self, literal: usize) {
        let event = match self.action(literal) {
            Action::Include => Event::Penalty,
            Action::Exclude => Event::Reward,
        };
        self.apply(literal, event);
    }
}
