//! Properties shared by the invariant tests and the acceptance run, plus a
//! brute-force rule equivalence oracle.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestError, TestRunner};
use rand::Rng;

use rtm_core::automata::{
    clip, type_ii_feedback, Action, AutomatonState, ClauseTeam, EvalMode, Event, FeedbackConfig,
    HyperParams, LiteralVector, Polarity, TsetlinMachine,
};
use rtm_core::encoder::{constant_index, relational_train_step, Mode, Observation, Schema};
use rtm_core::herbrand::{
    immediate_consequence, least_herbrand_model, naive_fixpoint, Atom, HornClause, Interpretation,
    Literal, Program, Term,
};
use rtm_core::multiclass::MultiClassMachine;
use rtm_core::rng::rng_from_seed;

pub type PropResult = Result<(), TestCaseError>;

/// Runs `prop` on `cases` generated inputs with a fixed seed.
pub fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    prop: impl Fn(S::Value) -> PropResult,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, prop).map_err(|e| match e {
        TestError::Fail(why, value) => format!("{why} for {value:?}"),
        TestError::Abort(why) => format!("aborted: {why}"),
    })
}

pub fn event() -> impl Strategy<Value = Event> {
    prop_oneof![Just(Event::Reward), Just(Event::Penalty)]
}

/// Walks an automaton through random events; the state never leaves
/// `1..=2N` and the action always follows the state.
pub fn automaton_walk() -> impl Strategy<Value = (u16, u16, Vec<Event>)> {
    (1u16..50).prop_flat_map(|n| (Just(n), 1..=2 * n, prop::collection::vec(event(), 0..200)))
}

pub fn prop_automaton_bounds((n, start, events): (u16, u16, Vec<Event>)) -> PropResult {
    let mut a = AutomatonState::new(start, n);
    for e in events {
        let before = a.value();
        a = a.transition(e);
        let v = a.value();
        prop_assert!((1..=2 * n).contains(&v));
        prop_assert!(v.abs_diff(before) <= 1);
        prop_assert_eq!(a.action() == Action::Include, v > n);
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SmallMachine {
    pub features: usize,
    pub params: HyperParams,
    pub samples: Vec<(Vec<bool>, bool)>,
}

pub fn small_machine() -> impl Strategy<Value = SmallMachine> {
    (1usize..5, 1usize..5, 1i32..6, 1.5f64..12.0, 1u16..4, any::<bool>(), any::<bool>(), any::<u64>())
        .prop_flat_map(|(features, half, threshold, s, n, boost, neg, seed)| {
            let params = HyperParams {
                clauses: 2 * half,
                threshold,
                specificity: s,
                states_per_action: n,
                epochs: 1,
                boost_true_positive: boost,
                negative_literals: neg,
                seed,
            };
            let sample = (prop::collection::vec(any::<bool>(), features), any::<bool>());
            (Just(features), Just(params), prop::collection::vec(sample, 1..30))
        })
        .prop_map(|(features, params, samples)| SmallMachine { features, params, samples })
}

/// Training never pushes an automaton outside `1..=2N`, even with few
/// states per action.
pub fn prop_training_bounds(m: SmallMachine) -> PropResult {
    let mut rng = rng_from_seed(m.params.seed);
    let mut tm = TsetlinMachine::new(m.features, m.params.clone(), &mut rng).unwrap();
    let max = 2 * m.params.states_per_action;
    for (x, y) in &m.samples {
        tm.train_step(&LiteralVector::from_features(x), *y, &mut rng);
        for c in tm.clauses() {
            prop_assert!(c.states().iter().all(|&s| (1..=max).contains(&s)));
        }
    }
    Ok(())
}

const N: u16 = 10;

pub fn clause_case() -> impl Strategy<Value = (Vec<u16>, Vec<bool>, usize)> {
    (1usize..7).prop_flat_map(|f| {
        (
            prop::collection::vec(1..=2 * N, 2 * f),
            prop::collection::vec(any::<bool>(), f),
            0..2 * f,
        )
    })
}

/// Including one more literal can only switch a clause from 1 to 0.
pub fn prop_clause_monotone((states, x, k): (Vec<u16>, Vec<bool>, usize)) -> PropResult {
    let x = LiteralVector::from_features(&x);
    let base = ClauseTeam::from_states(Polarity::Positive, N, states.clone()).unwrap();
    let mut more = states;
    more[k] = more[k].max(N + 1);
    let more = ClauseTeam::from_states(Polarity::Positive, N, more).unwrap();
    prop_assert!(!more.fires(&x, EvalMode::Learn) || base.fires(&x, EvalMode::Learn));
    if !base.is_empty() {
        prop_assert!(!more.fires(&x, EvalMode::Classify) || base.fires(&x, EvalMode::Classify));
    }
    Ok(())
}

/// Type II only moves excluded automata of 0-valued literals one step
/// towards Include, and only when the clause fires.
pub fn prop_type_ii_direction((states, x, k): (Vec<u16>, Vec<bool>, usize)) -> PropResult {
    let negative_literals = k % 2 == 0;
    let x = LiteralVector::from_features(&x);
    let mut team = ClauseTeam::from_states(Polarity::Negative, N, states.clone()).unwrap();
    let fired = team.fires(&x, EvalMode::Learn);
    let config = FeedbackConfig {
        specificity: 3.0,
        boost_true_positive: false,
        negative_literals,
    };
    type_ii_feedback(&mut team, &x, &config);
    let f = x.features();
    for (j, (&before, &after)) in states.iter().zip(team.states()).enumerate() {
        let eligible = fired && !x.literal(j) && before <= N && (negative_literals || j < f);
        if eligible {
            prop_assert_eq!(after, before + 1);
        } else {
            prop_assert_eq!(after, before);
        }
    }
    Ok(())
}

/// Machines whose vote already sits on the target for the label.
pub fn at_target() -> impl Strategy<Value = (usize, usize, Vec<Vec<u16>>, Vec<bool>, bool, u64)> {
    (1usize..5, 1usize..6).prop_flat_map(|(f, half)| {
        (
            Just(f),
            1..=half,
            prop::collection::vec(prop::collection::vec(1..=2 * N, 2 * f), half),
            prop::collection::vec(any::<bool>(), f),
            any::<bool>(),
            any::<u64>(),
        )
    })
}

/// With `y = 1` and a clipped vote of `T`, or `y = 0` and `-T`, an update
/// changes no automaton and draws nothing.
pub fn prop_quiescent(
    (f, firing, random, x, y, seed): (usize, usize, Vec<Vec<u16>>, Vec<bool>, bool, u64),
) -> PropResult {
    let half = random.len();
    let x = LiteralVector::from_features(&x);
    // `firing` voters are empty (fire while learning); the rest and the
    // opposing side are contradictory and never fire
    let contradictory = || {
        let mut s = vec![1; 2 * f];
        s[0] = N + 1;
        s[f] = N + 1;
        s
    };
    let (voter, opponent) = if y {
        (Polarity::Positive, Polarity::Negative)
    } else {
        (Polarity::Negative, Polarity::Positive)
    };
    let mut voters = Vec::new();
    for (i, mut s) in random.into_iter().enumerate() {
        if i < firing {
            s.iter_mut().for_each(|v| *v = (*v).min(N));
        } else {
            s = contradictory();
        }
        voters.push(ClauseTeam::from_states(voter, N, s).unwrap());
    }
    let opponents: Vec<ClauseTeam> = (0..half)
        .map(|_| ClauseTeam::from_states(opponent, N, contradictory()).unwrap())
        .collect();
    let params = HyperParams {
        clauses: 2 * half,
        threshold: firing as i32,
        states_per_action: N,
        ..HyperParams::default()
    };
    let (pos, neg) = if y { (voters, opponents) } else { (opponents, voters) };
    let mut tm = TsetlinMachine::from_clauses(params, pos, neg).unwrap();
    let v = tm.votes(&x, EvalMode::Learn);
    let t = firing as i32;
    prop_assert_eq!(clip(v, t), if y { t } else { -t });
    let before = tm.clone();
    let mut rng = rng_from_seed(seed);
    let mut untouched = rng.clone();
    tm.train_step(&x, y, &mut rng);
    prop_assert_eq!(&tm, &before);
    prop_assert_eq!(rng.random::<u64>(), untouched.random::<u64>());
    Ok(())
}

const CONSTS: [&str; 3] = ["a", "b", "c"];
const VARS: [&str; 3] = ["X", "Y", "Z"];
const RELATIONS: [(&str, usize); 4] = [("p", 1), ("q", 1), ("r", 2), ("s", 2)];

fn term() -> impl Strategy<Value = Term> + Clone {
    prop_oneof![
        (0usize..3).prop_map(|i| Term::constant(CONSTS[i])),
        (0usize..3).prop_map(|i| Term::var(VARS[i])),
    ]
}

fn atom_with(args: impl Strategy<Value = Term> + Clone) -> impl Strategy<Value = Atom> {
    (0usize..4, args.clone(), args).prop_map(|(r, a, b)| {
        let (name, arity) = RELATIONS[r];
        Atom::new(name, if arity == 1 { vec![a] } else { vec![a, b] })
    })
}

pub fn ground_atom() -> impl Strategy<Value = Atom> {
    atom_with((0usize..3).prop_map(|i| Term::constant(CONSTS[i])))
}

/// Definite programs over `{a, b, c}`, unary `p, q` and binary `r, s`.
pub fn definite_program() -> impl Strategy<Value = Program> {
    let fact = ground_atom().prop_map(HornClause::fact);
    let rule = (atom_with(term()), prop::collection::vec(atom_with(term()), 1..3))
        .prop_map(|(h, b)| HornClause::rule(h, b.into_iter().map(Literal::pos).collect()));
    prop::collection::vec(prop_oneof![fact, rule], 0..6).prop_map(|c| Program::new(c).unwrap())
}

pub fn tp_case() -> impl Strategy<Value = (Program, Vec<Atom>, Vec<Atom>)> {
    (
        definite_program(),
        prop::collection::vec(ground_atom(), 0..8),
        prop::collection::vec(ground_atom(), 0..8),
    )
}

/// `T_P` is inflationary and monotone, and its least fixpoint is the least
/// Herbrand model, reached within `|HB|` rounds.
pub fn prop_tp((program, i, extra): (Program, Vec<Atom>, Vec<Atom>)) -> PropResult {
    let i: Interpretation = i.into_iter().collect();
    let mut j = i.clone();
    j.extend(extra);
    let ti = immediate_consequence(&program, &i);
    let tj = immediate_consequence(&program, &j);
    prop_assert!(ti.is_superset(&i));
    prop_assert!(ti.is_subset(&tj));
    let (fix, rounds) = naive_fixpoint(&program);
    prop_assert!(rounds <= 24 + 1);
    prop_assert_eq!(&immediate_consequence(&program, &fix), &fix);
    prop_assert_eq!(least_herbrand_model(&program).unwrap(), fix);
    Ok(())
}

pub const PERSONS: [&str; 4] = ["Bob", "Mary", "Jane", "Ann"];

fn persons() -> Vec<String> {
    PERSONS.iter().map(|s| s.to_string()).collect()
}

pub fn parent_atoms() -> impl Strategy<Value = Vec<Atom>> {
    prop::collection::vec(
        (0usize..4, 0usize..4).prop_map(|(a, b)| Atom::ground("parent", &[PERSONS[a], PERSONS[b]])),
        0..10,
    )
}

/// Atom sets and feature vectors correspond one to one.
pub fn prop_bijection((set, bits): (Vec<Atom>, Vec<bool>)) -> PropResult {
    let schema = Schema::parentage(&persons(), "child").unwrap();
    let index = constant_index(&schema).unwrap();
    let x = index.encode(&set).unwrap();
    let back = index.decode(&x).unwrap();
    prop_assert_eq!(&back, &set.into_iter().collect::<BTreeSet<_>>());
    let y = LiteralVector::from_features(&bits[..index.len()]);
    let atoms: Vec<Atom> = index.decode(&y).unwrap().into_iter().collect();
    prop_assert_eq!(index.encode(&atoms).unwrap(), y);
    Ok(())
}

pub fn bijection_case() -> impl Strategy<Value = (Vec<Atom>, Vec<bool>)> {
    (parent_atoms(), prop::collection::vec(any::<bool>(), 16))
}

pub fn stream_case() -> impl Strategy<Value = (Vec<(Vec<Atom>, usize, usize)>, usize, i32, u64)> {
    (
        prop::collection::vec((parent_atoms(), 0usize..4, 0usize..4), 1..12),
        1usize..4,
        1i32..5,
        any::<u64>(),
    )
}

/// Constants-mode relational training is the plain two-class machine on
/// the ground encoding: same draws, same states, same predictions.
pub fn prop_constants_equivalence(
    (stream, half, threshold, seed): (Vec<(Vec<Atom>, usize, usize)>, usize, i32, u64),
) -> PropResult {
    let schema = Schema::parentage(&persons(), "child").unwrap();
    let index = constant_index(&schema).unwrap();
    let params = HyperParams {
        clauses: 2 * half,
        threshold,
        ..HyperParams::default()
    };
    let labels = vec!["no".to_string(), "yes".to_string()];
    let mut relational = MultiClassMachine::new(&labels, index.len(), params, &mut rng_from_seed(seed)).unwrap();
    let mut plain = relational.clone();
    let (mut r1, mut r2) = (rng_from_seed(seed ^ 1), rng_from_seed(seed ^ 1));
    for (facts, a, b) in stream.iter().cycle().take(3 * stream.len()) {
        let target = Atom::ground("child", &[PERSONS[*a], PERSONS[*b]]);
        let truth = facts.contains(&Atom::ground("parent", &[PERSONS[*b], PERSONS[*a]]));
        let obs = Observation { inputs: facts.clone(), target, truth };
        relational_train_step(&mut relational, &obs, &index, Mode::Constants, &mut r1).unwrap();
        let x = index.encode(&obs.inputs).unwrap();
        plain.train_step(&x, usize::from(truth), &mut r2).unwrap();
        prop_assert_eq!(relational.predict(&x).unwrap(), plain.predict(&x).unwrap());
    }
    prop_assert_eq!(&relational, &plain);
    Ok(())
}

/// Compiled literal: relation offset, argument slots and sign.
struct Compiled {
    offset: usize,
    args: Vec<Slot>,
    negated: bool,
}

enum Slot {
    Var(usize),
    Const(usize),
}

fn compile(atom: &Atom, negated: bool, relations: &[(&str, usize)], domain: &[&str], vars: &[String]) -> Option<Compiled> {
    let mut offset = 0;
    for (name, arity) in relations {
        if *name == atom.relation && *arity == atom.args.len() {
            let args = atom
                .args
                .iter()
                .map(|t| {
                    if t.is_var() {
                        vars.iter().position(|v| v == t.id()).map(Slot::Var)
                    } else {
                        domain.iter().position(|c| *c == t.id()).map(Slot::Const)
                    }
                })
                .collect::<Option<Vec<_>>>()?;
            return Some(Compiled { offset, args, negated });
        }
        offset += domain.len().pow(*arity as u32);
    }
    None
}

fn bit(c: &Compiled, assignment: &[usize], d: usize) -> usize {
    c.args.iter().fold(0, |acc, s| {
        acc * d
            + match s {
                Slot::Var(i) => assignment[*i],
                Slot::Const(k) => *k,
            }
    }) + c.offset
}

/// Head atoms (as bits) that `rule` derives in one step from `facts`.
fn derived(rule: &HornClause, facts: u64, relations: &[(&str, usize)], domain: &[&str]) -> Option<u64> {
    let vars: Vec<String> = rule.variables().into_iter().collect();
    let head = compile(&rule.head, false, relations, domain, &vars)?;
    let body = rule
        .body
        .iter()
        .map(|l| compile(&l.atom, l.negated, relations, domain, &vars))
        .collect::<Option<Vec<_>>>()?;
    let d = domain.len();
    let mut out = 0u64;
    let mut assignment = vec![0usize; vars.len()];
    loop {
        if body
            .iter()
            .all(|c| (facts >> bit(c, &assignment, d) & 1 == 1) != c.negated)
        {
            out |= 1 << (bit(&head, &assignment, d) - head.offset);
        }
        let mut i = 0;
        loop {
            if i == assignment.len() {
                return Some(out);
            }
            assignment[i] += 1;
            if assignment[i] < d {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

/// Whether two rules derive the same head atoms from every set of ground
/// `inputs` atoms over `domain`. Heads use `head` and must fit in 64 bits.
pub fn rules_equivalent(a: &HornClause, b: &HornClause, inputs: &[(&str, usize)], head: (&str, usize), domain: &[&str]) -> bool {
    let mut relations = inputs.to_vec();
    relations.push(head);
    let ground: usize = inputs.iter().map(|(_, k)| domain.len().pow(*k as u32)).sum();
    assert!(ground <= 20, "too many ground input atoms to enumerate");
    (0u64..1 << ground).all(|facts| {
        match (derived(a, facts, &relations, domain), derived(b, facts, &relations, domain)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    })
}
