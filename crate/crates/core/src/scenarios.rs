//! Preset decision problems and ε-sweeps.
//!
//! * `race`: bet on one of two horses, or play it safe, with a weather report
//!   available that shifts the odds to 3/4 for one horse.
//! * `gamblers`: two fair independent flips; after seeing the first flip the
//!   agent may, with probability ε, become 9/10 confident the second lands
//!   the other way.
//! * `unknown-bias`: an exchangeable two-flip joint in which the first flip
//!   raises the probability of a repeat to 2/3; with probability ε the agent
//!   overreacts and becomes confident of a repeat.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::decision::{best_action_index, expected_utilities, Action, ChoiceSet, DecisionProblem, OutcomeSpace};
use crate::error::{Error, Result};
use crate::prob::{Credence, StateSpace};
use crate::rational::{display_rational, format_rational, in_unit_interval, int, rat, Rational};
use crate::update::{conditionalization_policy, mixture_expand, DeviationSpec, DispositionLabels, EvidencePartition, UpdatePolicy, STATE_JOIN};
use crate::voi::{val_general, val_good};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    Race,
    Gamblers,
    UnknownBias,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [ScenarioKind::Race, ScenarioKind::Gamblers, ScenarioKind::UnknownBias];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Race => "race",
            ScenarioKind::Gamblers => "gamblers",
            ScenarioKind::UnknownBias => "unknown-bias",
        }
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "race" => Ok(ScenarioKind::Race),
            "gamblers" => Ok(ScenarioKind::Gamblers),
            "unknown-bias" | "unknown_bias" => Ok(ScenarioKind::UnknownBias),
            other => Err(Error::UnknownScenario(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub epsilon: Rational,
    pub fallacy_confidence: Option<Rational>,
    pub problem: DecisionProblem,
    pub policy: UpdatePolicy,
}

impl Scenario {
    pub fn build(kind: ScenarioKind, epsilon: &Rational, confidence: Option<&Rational>) -> Result<Self> {
        match kind {
            ScenarioKind::Race => Ok(scenario_race()),
            ScenarioKind::Gamblers => scenario_gamblers(epsilon),
            ScenarioKind::UnknownBias => {
                scenario_unknown_bias(epsilon, confidence.cloned().unwrap_or_else(default_confidence))
            }
        }
    }

    pub fn partition(&self) -> &EvidencePartition {
        self.policy.partition()
    }

    pub fn val_good(&self) -> Result<Rational> {
        val_good(&self.problem, self.partition())
    }

    pub fn val_general(&self) -> Result<Rational> {
        val_general(&self.problem, &self.policy)
    }
}

/// Deviant confidence used by `unknown-bias` unless overridden. At 9/10 the
/// slightly and very risky bets tie under the deviant posterior.
pub fn default_confidence() -> Rational {
    rat(91, 100)
}

fn join(parts: &[&str]) -> String {
    parts.join(STATE_JOIN)
}

fn two_flip_space() -> Arc<StateSpace> {
    StateSpace::new(["H", "T"].iter().flat_map(|a| ["H", "T"].map(|b| join(&[a, b])))).expect("four ids")
}

fn first_flip_partition(space: &Arc<StateSpace>) -> EvidencePartition {
    EvidencePartition::from_ids(space, [[join(&["H", "H"]), join(&["H", "T"])], [join(&["T", "H"]), join(&["T", "T"])]])
        .expect("first-flip cells partition the space")
}

/// Bet paying outcome `win` when `pred` holds and `lose` otherwise.
fn bet(
    id: &str,
    space: &StateSpace,
    outcomes: &OutcomeSpace,
    pred: impl Fn(&str) -> bool,
    win: &str,
    lose: &str,
) -> Action {
    let map: Vec<(String, &str)> = space
        .ids()
        .iter()
        .map(|s| (s.clone(), if pred(s) { win } else { lose }))
        .collect();
    Action::new(id, space, outcomes, map).expect("preset actions are total")
}

fn second_is(face: char) -> impl Fn(&str) -> bool {
    move |s: &str| s.ends_with(face)
}

/// Horse race with a weather report.
pub fn scenario_race() -> Scenario {
    let space = StateSpace::new(
        ["Rain", "Shine"]
            .iter()
            .flat_map(|w| ["A", "B"].map(|h| join(&[w, h]))),
    )
    .expect("four ids");
    let prior = Credence::new(&space, vec![rat(3, 8), rat(1, 8), rat(1, 8), rat(3, 8)]).expect("normalized");
    let outcomes = OutcomeSpace::new([("nothing", int(0)), ("gain", int(1)), ("loss", int(-2))]).expect("distinct");
    let choice = ChoiceSet::new(vec![
        bet("safe", &space, &outcomes, |_| true, "nothing", "nothing"),
        bet("bet-A", &space, &outcomes, |s| s.ends_with('A'), "gain", "loss"),
        bet("bet-B", &space, &outcomes, |s| s.ends_with('B'), "gain", "loss"),
    ])
    .expect("distinct ids");
    let partition = EvidencePartition::from_ids(
        &space,
        [[join(&["Rain", "A"]), join(&["Rain", "B"])], [join(&["Shine", "A"]), join(&["Shine", "B"])]],
    )
    .expect("weather cells");
    let problem = DecisionProblem::new(Arc::clone(&space), outcomes, prior, choice).expect("consistent");
    let policy = conditionalization_policy(problem.prior(), &partition).expect("positive cells");
    Scenario {
        name: ScenarioKind::Race.name().into(),
        epsilon: Rational::zero(),
        fallacy_confidence: None,
        problem,
        policy,
    }
}

fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if in_unit_interval(epsilon) {
        Ok(())
    } else {
        Err(Error::Config(format!("epsilon {} is outside [0, 1]", display_rational(epsilon))))
    }
}

/// Deviant posteriors over the first-flip cells putting `confidence_same` on
/// the second flip repeating the first.
fn repeat_posteriors(space: &Arc<StateSpace>, confidence_same: &Rational) -> Vec<Credence> {
    let other = Rational::from_integer(1.into()) - confidence_same;
    ["H", "T"]
        .iter()
        .map(|first| {
            let repeat = join(&[first, first]);
            let flip = join(&[first, if *first == "H" { "T" } else { "H" }]);
            Credence::from_pairs(space, [(repeat, confidence_same.clone()), (flip, other.clone())])
                .expect("masses in [0, 1] summing to 1")
        })
        .collect()
}

/// Gambler's fallacy on two fair flips.
pub fn scenario_gamblers(epsilon: &Rational) -> Result<Scenario> {
    check_epsilon(epsilon)?;
    let space = two_flip_space();
    let outcomes = OutcomeSpace::new([("zero", int(0)), ("win", int(1)), ("lose", int(-2))]).expect("distinct");
    let choice = ChoiceSet::new(vec![
        bet("safe", &space, &outcomes, |_| true, "zero", "zero"),
        bet("risky-heads", &space, &outcomes, second_is('H'), "win", "lose"),
        bet("risky-tails", &space, &outcomes, second_is('T'), "win", "lose"),
    ])
    .expect("distinct ids");
    let base = DecisionProblem::new(Arc::clone(&space), outcomes, Credence::uniform(&space), choice)?;
    let partition = first_flip_partition(&space);
    // 9/10 on the opposite face is 1/10 on a repeat.
    let spec = DeviationSpec::new(epsilon.clone(), repeat_posteriors(&space, &rat(1, 10)))?;
    let (problem, policy) = mixture_expand(&base, &partition, &spec, &DispositionLabels::default())?;
    Ok(Scenario {
        name: ScenarioKind::Gamblers.name().into(),
        epsilon: epsilon.clone(),
        fallacy_confidence: Some(rat(9, 10)),
        problem,
        policy,
    })
}

/// Overconfidence about a coin of unknown bias.
pub fn scenario_unknown_bias(epsilon: &Rational, fallacy_confidence: Rational) -> Result<Scenario> {
    check_epsilon(epsilon)?;
    if !in_unit_interval(&fallacy_confidence) {
        return Err(Error::Config(format!(
            "fallacy confidence {} is outside [0, 1]",
            display_rational(&fallacy_confidence)
        )));
    }
    let space = two_flip_space();
    // Uniform prior over the bias: P(HH) = ∫θ² = 1/3, P(HT) = ∫θ(1-θ) = 1/6.
    let prior = Credence::new(&space, vec![rat(1, 3), rat(1, 6), rat(1, 6), rat(1, 3)]).expect("normalized");
    let outcomes = OutcomeSpace::new([
        ("zero", int(0)),
        ("plus-1", int(1)),
        ("minus-1", int(-1)),
        ("plus-2", int(2)),
        ("minus-10", int(-10)),
    ])
    .expect("distinct");
    let choice = ChoiceSet::new(vec![
        bet("safe", &space, &outcomes, |_| true, "zero", "zero"),
        bet("heads", &space, &outcomes, second_is('H'), "plus-1", "minus-1"),
        bet("tails", &space, &outcomes, second_is('T'), "plus-1", "minus-1"),
        bet("v-risky-heads", &space, &outcomes, second_is('H'), "plus-2", "minus-10"),
        bet("v-risky-tails", &space, &outcomes, second_is('T'), "plus-2", "minus-10"),
    ])
    .expect("distinct ids");
    let base = DecisionProblem::new(Arc::clone(&space), outcomes, prior, choice)?;
    let partition = first_flip_partition(&space);
    let deviant = repeat_posteriors(&space, &fallacy_confidence);
    for (cell, (post, expected)) in deviant.iter().zip(["v-risky-heads", "v-risky-tails"]).enumerate() {
        validate_deviant_choice(&base, post, expected, cell)?;
    }
    let spec = DeviationSpec::new(epsilon.clone(), deviant)?;
    let (problem, policy) = mixture_expand(&base, &partition, &spec, &DispositionLabels::default())?;
    Ok(Scenario {
        name: ScenarioKind::UnknownBias.name().into(),
        epsilon: epsilon.clone(),
        fallacy_confidence: Some(fallacy_confidence),
        problem,
        policy,
    })
}

fn validate_deviant_choice(problem: &DecisionProblem, posterior: &Credence, expected: &str, cell: usize) -> Result<()> {
    let eus = expected_utilities(posterior, problem)?;
    let (best, max) = best_action_index(posterior, problem, crate::decision::TiePolicy::FirstByOrder)?;
    let tying: Vec<&str> = eus
        .iter()
        .enumerate()
        .filter(|(_, eu)| **eu == max)
        .map(|(i, _)| problem.choice_set().get(i).id())
        .collect();
    if tying.len() > 1 {
        return Err(Error::Config(format!(
            "fallacy confidence makes {} tie at expected utility {} after cell {cell}",
            tying.join(" and "),
            display_rational(&max)
        )));
    }
    let chosen = problem.choice_set().get(best).id();
    if chosen != expected {
        return Err(Error::Config(format!(
            "fallacy confidence makes `{chosen}` best after cell {cell}, not `{expected}`"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Learn,
    Refuse,
}

impl Decision {
    /// Refuse only on strictly negative value; indifference learns.
    pub fn from_value(val_general: &Rational) -> Self {
        if *val_general < Rational::zero() {
            Decision::Refuse
        } else {
            Decision::Learn
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Learn => "learn",
            Decision::Refuse => "refuse",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub epsilon: Rational,
    pub val_good: Rational,
    pub val_general: Rational,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepTable {
    pub scenario: String,
    pub rows: Vec<SweepRow>,
}

/// Evaluates `scenario` at every ε, rows sorted by ε.
pub fn sweep(scenario: &str, epsilons: &[Rational], confidence: Option<&Rational>) -> Result<SweepTable> {
    let kind: ScenarioKind = scenario.parse()?;
    let mut epsilons = epsilons.to_vec();
    epsilons.sort();
    let rows = epsilons
        .into_iter()
        .map(|eps| {
            let sc = Scenario::build(kind, &eps, confidence)?;
            let val_general = sc.val_general()?;
            Ok(SweepRow {
                decision: Decision::from_value(&val_general),
                val_good: sc.val_good()?,
                val_general,
                epsilon: eps,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        scenario: kind.name().into(),
        rows,
    })
}

impl SweepTable {
    pub const HEADER: [&'static str; 4] = ["epsilon", "val_good", "val_general", "decision"];

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(Self::HEADER).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record([
                    format_rational(&row.epsilon),
                    format_rational(&row.val_good),
                    format_rational(&row.val_general),
                    row.decision.to_string(),
                ])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }
}

impl fmt::Display for SweepTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario: {}", self.scenario)?;
        writeln!(f, "{:>10}  {:>12}  {:>12}  {}", Self::HEADER[0], Self::HEADER[1], Self::HEADER[2], Self::HEADER[3])?;
        for row in &self.rows {
            writeln!(
                f,
                "{:>10}  {:>12}  {:>12}  {}",
                display_rational(&row.epsilon),
                display_rational(&row.val_good),
                display_rational(&row.val_general),
                row.decision
            )?;
        }
        Ok(())
    }
}
