//! Outcomes, actions, choice sets and expected-utility maximization.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::prob::{ensure_same, Credence, StateFunction, StateSpace};
use crate::rational::Rational;
use crate::update::EvidencePartition;

/// Outcome identifiers with their utilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSpace {
    ids: Vec<String>,
    utility: Vec<Rational>,
    index: HashMap<String, usize>,
}

impl OutcomeSpace {
    pub fn new<I, S>(outcomes: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut ids = Vec::new();
        let mut utility = Vec::new();
        let mut index = HashMap::new();
        for (id, u) in outcomes {
            let id = id.into();
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::Outcomes(format!("duplicate outcome id `{id}`")));
            }
            ids.push(id);
            utility.push(u);
        }
        if ids.is_empty() {
            return Err(Error::Outcomes("no outcomes".into()));
        }
        Ok(Arc::new(OutcomeSpace { ids, utility, index }))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn utility(&self, index: usize) -> &Rational {
        &self.utility[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }
}

/// A function from states to outcomes, stored as outcome indices in state
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    id: String,
    assignment: Vec<usize>,
}

impl Action {
    pub fn new<I, S, O>(
        id: impl Into<String>,
        space: &StateSpace,
        outcomes: &OutcomeSpace,
        map: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (S, O)>,
        S: AsRef<str>,
        O: AsRef<str>,
    {
        let id = id.into();
        let fail = |reason: String| Error::Action {
            action: id.clone(),
            reason,
        };
        let mut assignment: Vec<Option<usize>> = vec![None; space.len()];
        for (state, outcome) in map {
            let (state, outcome) = (state.as_ref(), outcome.as_ref());
            let s = space
                .index_of(state)
                .ok_or_else(|| fail(format!("unknown state `{state}`")))?;
            let o = outcomes
                .index_of(outcome)
                .ok_or_else(|| fail(format!("unknown outcome `{outcome}`")))?;
            if assignment[s].replace(o).is_some() {
                return Err(fail(format!("state `{state}` assigned twice")));
            }
        }
        let assignment = assignment
            .into_iter()
            .enumerate()
            .map(|(s, o)| o.ok_or_else(|| fail(format!("no outcome for state `{}`", space.id(s)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Action { id, assignment })
    }

    /// Builds an action directly from outcome indices; used when lifting
    /// actions onto derived spaces.
    pub(crate) fn from_assignment(id: impl Into<String>, assignment: Vec<usize>) -> Self {
        Action {
            id: id.into(),
            assignment,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn outcome_at(&self, state: usize) -> usize {
        self.assignment[state]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }
}

/// Non-empty, ordered set of actions; order is the tie-break order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceSet {
    actions: Vec<Action>,
}

impl ChoiceSet {
    pub fn new(actions: Vec<Action>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::ChoiceSet("choice set is empty".into()));
        }
        let mut seen = HashSet::new();
        for a in &actions {
            if !seen.insert(a.id.as_str()) {
                return Err(Error::ChoiceSet(format!("duplicate action id `{}`", a.id)));
            }
        }
        Ok(ChoiceSet { actions })
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn get(&self, index: usize) -> &Action {
        &self.actions[index]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Resolve ties to the earliest maximizer in choice-set order.
    #[default]
    FirstByOrder,
    /// Report a tie as [`Error::Tie`].
    ErrorOnTie,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionProblem {
    space: Arc<StateSpace>,
    outcomes: Arc<OutcomeSpace>,
    prior: Credence,
    choice_set: ChoiceSet,
    tie_policy: TiePolicy,
}

impl DecisionProblem {
    pub fn new(
        space: Arc<StateSpace>,
        outcomes: Arc<OutcomeSpace>,
        prior: Credence,
        choice_set: ChoiceSet,
    ) -> Result<Self> {
        ensure_same(&space, prior.space())?;
        for a in choice_set.actions() {
            if a.assignment.len() != space.len() {
                return Err(Error::Action {
                    action: a.id.clone(),
                    reason: "not defined over the problem's state space".into(),
                });
            }
            if let Some(&o) = a.assignment.iter().find(|&&o| o >= outcomes.len()) {
                return Err(Error::Action {
                    action: a.id.clone(),
                    reason: format!("outcome index {o} out of range"),
                });
            }
        }
        Ok(DecisionProblem {
            space,
            outcomes,
            prior,
            choice_set,
            tie_policy: TiePolicy::default(),
        })
    }

    pub fn with_tie_policy(mut self, tie_policy: TiePolicy) -> Self {
        self.tie_policy = tie_policy;
        self
    }

    /// Same states and prior, different outcomes and actions.
    pub fn with_choice_set(&self, outcomes: Arc<OutcomeSpace>, choice_set: ChoiceSet) -> Result<Self> {
        Ok(DecisionProblem::new(Arc::clone(&self.space), outcomes, self.prior.clone(), choice_set)?
            .with_tie_policy(self.tie_policy))
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn outcomes(&self) -> &Arc<OutcomeSpace> {
        &self.outcomes
    }

    pub fn prior(&self) -> &Credence {
        &self.prior
    }

    pub fn choice_set(&self) -> &ChoiceSet {
        &self.choice_set
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie_policy
    }

    /// Utility of `action` at `state`.
    pub fn utility(&self, action: &Action, state: usize) -> &Rational {
        self.outcomes.utility(action.outcome_at(state))
    }

    /// `u ∘ f` as a state function.
    pub fn utility_function(&self, action: &Action) -> StateFunction {
        StateFunction::new(
            &self.space,
            (0..self.space.len())
                .map(|s| self.utility(action, s).clone())
                .collect(),
        )
        .expect("action assignment matches space length")
    }
}

/// `Σ_ω p(ω)·u(f(ω))`.
pub fn expected_utility(p: &Credence, action: &Action, problem: &DecisionProblem) -> Result<Rational> {
    ensure_same(p.space(), problem.space())?;
    if action.assignment.len() != problem.space.len() {
        return Err(Error::SpaceMismatch);
    }
    Ok(p.support()
        .map(|s| p.mass(s) * problem.utility(action, s))
        .sum())
}

/// Expected utility of every action, in choice-set order.
pub fn expected_utilities(p: &Credence, problem: &DecisionProblem) -> Result<Vec<Rational>> {
    problem
        .choice_set
        .actions()
        .iter()
        .map(|a| expected_utility(p, a, problem))
        .collect()
}

/// Index and value of the best action under `p`.
pub fn best_action_index(
    p: &Credence,
    problem: &DecisionProblem,
    tie_policy: TiePolicy,
) -> Result<(usize, Rational)> {
    let eus = expected_utilities(p, problem)?;
    let (best, value) = argmax_first(&eus);
    if tie_policy == TiePolicy::ErrorOnTie {
        let maximizers: Vec<String> = eus
            .iter()
            .enumerate()
            .filter(|(_, eu)| **eu == value)
            .map(|(i, _)| problem.choice_set.get(i).id.clone())
            .collect();
        if maximizers.len() > 1 {
            return Err(Error::Tie { maximizers });
        }
    }
    Ok((best, value))
}

pub fn best_action<'a>(
    p: &Credence,
    problem: &'a DecisionProblem,
    tie_policy: TiePolicy,
) -> Result<(&'a Action, Rational)> {
    let (i, value) = best_action_index(p, problem, tie_policy)?;
    Ok((problem.choice_set.get(i), value))
}

/// `max_f E_p(f)`; insensitive to ties.
pub fn max_expected_utility(p: &Credence, problem: &DecisionProblem) -> Result<Rational> {
    Ok(argmax_first(&expected_utilities(p, problem)?).1)
}

pub(crate) fn argmax_first(values: &[Rational]) -> (usize, Rational) {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if v > &values[best] {
            best = i;
        }
    }
    (best, values[best].clone())
}

/// True iff no single action maximizes conditional expected utility in
/// every cell of `partition`.
pub fn is_relevant(problem: &DecisionProblem, partition: &EvidencePartition) -> Result<bool> {
    ensure_same(problem.space(), partition.space())?;
    let mut always_best = vec![true; problem.choice_set.len()];
    for cell in partition.cells() {
        let posterior = problem.prior.condition(cell)?;
        let eus = expected_utilities(&posterior, problem)?;
        let (_, max) = argmax_first(&eus);
        for (flag, eu) in always_best.iter_mut().zip(&eus) {
            *flag &= *eu == max;
        }
    }
    Ok(!always_best.into_iter().any(|b| b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Event;
    use crate::rational::{int, rat};

    fn coin_problem(payoffs: &[(&str, i64, i64)]) -> DecisionProblem {
        let space = StateSpace::new(["H", "T"]).unwrap();
        let mut values: Vec<i64> = payoffs.iter().flat_map(|&(_, h, t)| [h, t]).collect();
        values.sort();
        values.dedup();
        let outcomes =
            OutcomeSpace::new(values.iter().map(|v| (format!("u{v}"), int(*v)))).unwrap();
        let actions = payoffs
            .iter()
            .map(|&(id, h, t)| {
                Action::new(id, &space, &outcomes, [("H", format!("u{h}")), ("T", format!("u{t}"))])
                    .unwrap()
            })
            .collect();
        let prior = Credence::uniform(&space);
        DecisionProblem::new(space, outcomes, prior, ChoiceSet::new(actions).unwrap()).unwrap()
    }

    #[test]
    fn action_must_be_total_and_use_known_outcomes() {
        let space = StateSpace::new(["a", "b"]).unwrap();
        let outcomes = OutcomeSpace::new([("o", int(0))]).unwrap();
        assert!(Action::new("f", &space, &outcomes, [("a", "o")]).is_err());
        assert!(Action::new("f", &space, &outcomes, [("a", "o"), ("b", "x")]).is_err());
        assert!(Action::new("f", &space, &outcomes, [("a", "o"), ("b", "o")]).is_ok());
    }

    #[test]
    fn choice_set_rejects_duplicates_and_empties() {
        assert!(ChoiceSet::new(vec![]).is_err());
        let a = Action::from_assignment("f", vec![0]);
        assert!(ChoiceSet::new(vec![a.clone(), a]).is_err());
    }

    #[test]
    fn expected_utility_of_safe_and_risky() {
        let problem = coin_problem(&[("safe", 0, 0), ("risky", 1, -2)]);
        let p = problem.prior().clone();
        assert_eq!(expected_utility(&p, problem.choice_set().get(0), &problem).unwrap(), int(0));
        assert_eq!(expected_utility(&p, problem.choice_set().get(1), &problem).unwrap(), rat(-1, 2));
    }

    #[test]
    fn ties_follow_the_policy() {
        let problem = coin_problem(&[("left", 1, -1), ("right", -1, 1), ("safe", 0, 0)]);
        let p = problem.prior().clone();
        let (a, v) = best_action(&p, &problem, TiePolicy::FirstByOrder).unwrap();
        assert_eq!((a.id(), v), ("left", int(0)));
        match best_action(&p, &problem, TiePolicy::ErrorOnTie) {
            Err(Error::Tie { maximizers }) => assert_eq!(maximizers, ["left", "right", "safe"]),
            other => panic!("expected tie, got {other:?}"),
        }
        assert_eq!(max_expected_utility(&p, &problem).unwrap(), int(0));
    }

    #[test]
    fn singleton_choice_set() {
        let problem = coin_problem(&[("only", 3, -5)]);
        let (a, v) = best_action(problem.prior(), &problem, TiePolicy::ErrorOnTie).unwrap();
        assert_eq!((a.id(), v), ("only", int(-1)));
        let partition = EvidencePartition::new(
            problem.space(),
            vec![
                Event::from_ids(problem.space(), ["H"]).unwrap(),
                Event::from_ids(problem.space(), ["T"]).unwrap(),
            ],
        )
        .unwrap();
        assert!(!is_relevant(&problem, &partition).unwrap());
    }

    #[test]
    fn relevance_of_a_revealing_partition() {
        let problem = coin_problem(&[("safe", 0, 0), ("heads", 1, -2), ("tails", -2, 1)]);
        let space = problem.space();
        let reveal = EvidencePartition::new(
            space,
            vec![Event::from_ids(space, ["H"]).unwrap(), Event::from_ids(space, ["T"]).unwrap()],
        )
        .unwrap();
        let trivial = EvidencePartition::new(space, vec![Event::full(space)]).unwrap();
        assert!(is_relevant(&problem, &reveal).unwrap());
        assert!(!is_relevant(&problem, &trivial).unwrap());
    }
}
