//! Two-action Tsetlin automaton.

/// Feedback signal delivered to a single automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    Reward,
    Penalty,
}

/// The two actions an automaton can take on its literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Exclude,
    Include,
}

/// State of one automaton with `2N` states.
///
/// States `1..=N` select [`Action::Exclude`], states `N+1..=2N` select
/// [`Action::Include`]. A reward moves the state away from the `N`/`N+1`
/// boundary, a penalty moves it towards (and possibly across) it. Both
/// saturate at `1` and `2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutomatonState {
    value: u16,
    states_per_action: u16,
}

impl AutomatonState {
    /// Panics if `value` is outside `1..=2N` or `N` is zero.
    pub fn new(value: u16, states_per_action: u16) -> Self {
        assert!(states_per_action > 0, "states per action must be positive");
        assert!(
            (1..=2 * states_per_action).contains(&value),
            "automaton state {value} outside 1..={}",
            2 * states_per_action
        );
        Self {
            value,
            states_per_action,
        }
    }

    pub fn value(&self) -> u16 {
        self.value
    }

    pub fn states_per_action(&self) -> u16 {
        self.states_per_action
    }

    pub fn action(&self) -> Action {
        action_of(self.value, self.states_per_action)
    }

    pub fn transition(self, event: Event) -> Self {
        Self {
            value: transition(self.value, self.states_per_action, event),
            ..self
        }
    }
}

#[inline]
pub(crate) fn action_of(value: u16, n: u16) -> Action {
    if value > n {
        Action::Include
    } else {
        Action::Exclude
    }
}

/// Raw transition used by clause teams, which store bare state values.
#[inline]
pub(crate) fn transition(value: u16, n: u16, event: Event) -> u16 {
    let toward_include = match (action_of(value, n), event) {
        (Action::Include, Event::Reward) | (Action::Exclude, Event::Penalty) => true,
        (Action::Include, Event::Penalty) | (Action::Exclude, Event::Reward) => false,
    };
    if toward_include {
        value.saturating_add(1).min(2 * n)
    } else {
        value.saturating_sub(1).max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reward_deepens_include() {
        let s = AutomatonState::new(150, 100).transition(Event::Reward);
        assert_eq!(s.value(), 151);
    }

    #[test]
    fn reward_saturates_at_top() {
        let s = AutomatonState::new(200, 100).transition(Event::Reward);
        assert_eq!(s.value(), 200);
    }

    #[test]
    fn penalty_crosses_boundary() {
        let s = AutomatonState::new(100, 100);
        assert_eq!(s.action(), Action::Exclude);
        let s = s.transition(Event::Penalty);
        assert_eq!(s.value(), 101);
        assert_eq!(s.action(), Action::Include);
    }

    #[test]
    fn reward_deepens_exclude_and_saturates_at_one() {
        let s = AutomatonState::new(2, 100).transition(Event::Reward);
        assert_eq!(s.value(), 1);
        assert_eq!(s.transition(Event::Reward).value(), 1);
    }

    #[test]
    fn penalty_on_include_moves_down() {
        let s = AutomatonState::new(101, 100).transition(Event::Penalty);
        assert_eq!(s.value(), 100);
        assert_eq!(s.action(), Action::Exclude);
    }

    #[test]
    #[should_panic]
    fn rejects_out_of_range() {
        AutomatonState::new(0, 10);
    }
}
