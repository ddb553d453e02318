//! Evidence partitions and update policies.
//!
//! An [`UpdatePolicy`] is a posterior field: for every state it records the
//! credence the agent would hold after learning the cell containing that
//! state. Uncertainty about whether the agent will conditionalize is encoded
//! inside the state space by [`mixture_expand`], which pairs every state with
//! a disposition coordinate.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::decision::{expected_utilities, Action, ChoiceSet, DecisionProblem};
use crate::error::{Error, Result};
use crate::prob::{ensure_same, is_partition, Credence, Event, StateSpace};
use crate::rational::{display_rational, in_unit_interval, Rational};
use crate::voi::chosen_by_state;

/// Separator used when composing structured state ids.
pub const STATE_JOIN: &str = "·";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidencePartition {
    space: Arc<StateSpace>,
    cells: Vec<Event>,
    cell_of: Vec<usize>,
}

impl EvidencePartition {
    pub fn new(space: &Arc<StateSpace>, cells: Vec<Event>) -> Result<Self> {
        if !is_partition(space, &cells) {
            return Err(Error::Partition(describe_partition_failure(space, &cells)));
        }
        let mut cell_of = vec![0; space.len()];
        for (c, cell) in cells.iter().enumerate() {
            for s in cell.members() {
                cell_of[s] = c;
            }
        }
        Ok(EvidencePartition {
            space: Arc::clone(space),
            cells,
            cell_of,
        })
    }

    pub fn from_ids<C, I, S>(space: &Arc<StateSpace>, cells: C) -> Result<Self>
    where
        C: IntoIterator<Item = I>,
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let cells = cells
            .into_iter()
            .map(|ids| Event::from_ids(space, ids))
            .collect::<Result<Vec<_>>>()?;
        EvidencePartition::new(space, cells)
    }

    /// The one-cell partition: learning nothing.
    pub fn trivial(space: &Arc<StateSpace>) -> Self {
        EvidencePartition::new(space, vec![Event::full(space)]).expect("full event partitions")
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn cells(&self) -> &[Event] {
        &self.cells
    }

    pub fn cell(&self, index: usize) -> &Event {
        &self.cells[index]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index of the cell containing `state`.
    pub fn cell_of(&self, state: usize) -> usize {
        self.cell_of[state]
    }

    /// Errors unless every cell has positive probability under `prior`.
    pub fn check_positive(&self, prior: &Credence) -> Result<()> {
        ensure_same(&self.space, prior.space())?;
        for (c, cell) in self.cells.iter().enumerate() {
            if prior.probability(cell)?.is_zero() {
                return Err(Error::Partition(format!(
                    "cell {c} {cell} has prior probability 0"
                )));
            }
        }
        Ok(())
    }
}

fn describe_partition_failure(space: &Arc<StateSpace>, cells: &[Event]) -> String {
    let mut owner: Vec<Option<usize>> = vec![None; space.len()];
    for (c, cell) in cells.iter().enumerate() {
        if !crate::prob::same_space(space, cell.space()) {
            return format!("cell {c} is over a different state space");
        }
        if cell.is_empty() {
            return format!("cell {c} is empty");
        }
        for s in cell.members() {
            if let Some(prev) = owner[s].replace(c) {
                return format!("state `{}` lies in cells {prev} and {c}", space.id(s));
            }
        }
    }
    match owner.iter().position(Option::is_none) {
        Some(s) => format!("state `{}` is not covered by any cell", space.id(s)),
        None => "cells do not form a partition".into(),
    }
}

/// Maps the states of a disposition-expanded space back to the base space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseProjection {
    pub base: Arc<StateSpace>,
    pub project: Vec<usize>,
}

impl BaseProjection {
    /// Lifts the base singleton `{b}` to its preimage.
    pub fn lift_state(&self, expanded: &Arc<StateSpace>, base_state: usize) -> Event {
        Event::from_predicate(expanded, |s| self.project[s] == base_state)
    }

    /// Recovers a projection from ids of the form `base·label`, splitting at
    /// the last join. Requires every id to split and every base to carry at
    /// least two labels.
    pub fn infer(expanded: &StateSpace) -> Option<Self> {
        let mut bases: Vec<&str> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        let mut project = Vec::with_capacity(expanded.len());
        for id in expanded.ids() {
            let (base, _) = id.rsplit_once(STATE_JOIN)?;
            let b = match bases.iter().position(|&x| x == base) {
                Some(b) => b,
                None => {
                    bases.push(base);
                    counts.push(0);
                    bases.len() - 1
                }
            };
            counts[b] += 1;
            project.push(b);
        }
        if counts.iter().any(|&c| c < 2) {
            return None;
        }
        let base = StateSpace::new(bases.iter().map(|b| b.to_string())).ok()?;
        Some(BaseProjection { base, project })
    }
}

/// State-indexed posterior field over an evidence partition.
///
/// Equality is extensional: the optional base projection is ignored.
#[derive(Debug, Clone)]
pub struct UpdatePolicy {
    partition: EvidencePartition,
    posteriors: Vec<Option<Arc<Credence>>>,
    base: Option<BaseProjection>,
}

impl PartialEq for UpdatePolicy {
    fn eq(&self, other: &Self) -> bool {
        self.partition == other.partition && self.posteriors == other.posteriors
    }
}

impl Eq for UpdatePolicy {}

impl UpdatePolicy {
    /// Validates a posterior field against `prior`.
    ///
    /// Every cell must have positive prior probability, every state with
    /// positive prior must carry a posterior, and each posterior must be
    /// certain of the cell it belongs to.
    pub fn new(
        prior: &Credence,
        partition: EvidencePartition,
        posteriors: Vec<Option<Arc<Credence>>>,
    ) -> Result<Self> {
        let space = partition.space();
        ensure_same(space, prior.space())?;
        partition.check_positive(prior)?;
        if posteriors.len() != space.len() {
            return Err(Error::SpaceMismatch);
        }
        for (s, post) in posteriors.iter().enumerate() {
            match post {
                None if !prior.mass(s).is_zero() => {
                    return Err(Error::Policy {
                        state: space.id(s).to_string(),
                        reason: "state has positive prior but no posterior".into(),
                    })
                }
                None => {}
                Some(post) => {
                    if ensure_same(space, post.space()).is_err() {
                        return Err(Error::Policy {
                            state: space.id(s).to_string(),
                            reason: "posterior is over a different state space".into(),
                        });
                    }
                    let inside = post.probability(partition.cell(partition.cell_of(s)))?;
                    if !inside.is_one() {
                        return Err(Error::Certainty {
                            state: space.id(s).to_string(),
                            outside: display_rational(&(Rational::one() - inside)),
                        });
                    }
                }
            }
        }
        Ok(UpdatePolicy {
            partition,
            posteriors,
            base: None,
        })
    }

    pub(crate) fn with_base(mut self, base: BaseProjection) -> Self {
        self.base = Some(base);
        self
    }

    pub fn partition(&self) -> &EvidencePartition {
        &self.partition
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        self.partition.space()
    }

    /// Posterior adopted at `state`, if one is recorded.
    pub fn posterior(&self, state: usize) -> Option<&Credence> {
        self.posteriors[state].as_deref()
    }

    /// The base-space projection, for policies built by [`mixture_expand`].
    pub fn base(&self) -> Option<&BaseProjection> {
        self.base.as_ref()
    }
}

/// Conditionalization as a policy: every state in `E` adopts `p(· | E)`.
pub fn conditionalization_policy(prior: &Credence, partition: &EvidencePartition) -> Result<UpdatePolicy> {
    ensure_same(prior.space(), partition.space())?;
    let conditioned = conditioned_cells(prior, partition)?;
    let posteriors = (0..prior.space().len())
        .map(|s| Some(Arc::clone(&conditioned[partition.cell_of(s)])))
        .collect();
    UpdatePolicy::new(prior, partition.clone(), posteriors)
}

fn conditioned_cells(prior: &Credence, partition: &EvidencePartition) -> Result<Vec<Arc<Credence>>> {
    partition
        .cells()
        .iter()
        .map(|cell| prior.condition(cell).map(Arc::new))
        .collect()
}

/// Labels for the disposition coordinate added by [`mixture_expand`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DispositionLabels {
    pub stay: String,
    pub deviate: String,
}

impl Default for DispositionLabels {
    fn default() -> Self {
        DispositionLabels {
            stay: "stay".into(),
            deviate: "deviate".into(),
        }
    }
}

/// Probability of deviating plus the posterior adopted, per cell, when the
/// agent deviates. Deviant posteriors live on the base space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationSpec {
    epsilon: Rational,
    deviant: Vec<Credence>,
}

impl DeviationSpec {
    pub fn new(epsilon: Rational, deviant: Vec<Credence>) -> Result<Self> {
        if !in_unit_interval(&epsilon) {
            return Err(Error::Deviation(format!(
                "epsilon {} is outside [0, 1]",
                display_rational(&epsilon)
            )));
        }
        Ok(DeviationSpec { epsilon, deviant })
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn deviant(&self, cell: usize) -> &Credence {
        &self.deviant[cell]
    }

    fn validate(&self, partition: &EvidencePartition) -> Result<()> {
        if self.deviant.len() != partition.len() {
            return Err(Error::Deviation(format!(
                "{} deviant posteriors for {} cells",
                self.deviant.len(),
                partition.len()
            )));
        }
        for (c, post) in self.deviant.iter().enumerate() {
            ensure_same(post.space(), partition.space())?;
            if !post.probability(partition.cell(c))?.is_one() {
                return Err(Error::Deviation(format!(
                    "deviant posterior for cell {c} is not certain of {}",
                    partition.cell(c)
                )));
            }
        }
        Ok(())
    }
}

/// Expands `problem` with an independent disposition coordinate.
///
/// Each base state `s` becomes `s·stay` and `s·deviate` with prior masses
/// `p(s)(1-ε)` and `p(s)ε`. Actions and cells are lifted so they ignore the
/// disposition. Stay-states conditionalize on the expanded prior;
/// deviate-states adopt the cell's deviant posterior, paired with the
/// conditioned disposition marginal `(1-ε, ε)`.
pub fn mixture_expand(
    problem: &DecisionProblem,
    partition: &EvidencePartition,
    spec: &DeviationSpec,
    labels: &DispositionLabels,
) -> Result<(DecisionProblem, UpdatePolicy)> {
    let base = problem.space();
    ensure_same(base, partition.space())?;
    spec.validate(partition)?;
    if labels.stay == labels.deviate {
        return Err(Error::LabelCollision(format!(
            "stay and deviate labels are both `{}`",
            labels.stay
        )));
    }
    for label in [&labels.stay, &labels.deviate] {
        if label.is_empty() {
            return Err(Error::LabelCollision("empty disposition label".into()));
        }
        if base.index_of(label).is_some() {
            return Err(Error::LabelCollision(format!(
                "label `{label}` is already a state id"
            )));
        }
    }

    let n = base.len();
    let mut ids = Vec::with_capacity(2 * n);
    let mut project = Vec::with_capacity(2 * n);
    for (b, id) in base.ids().iter().enumerate() {
        for label in [&labels.stay, &labels.deviate] {
            ids.push(format!("{id}{STATE_JOIN}{label}"));
            project.push(b);
        }
    }
    let space = StateSpace::new(ids).map_err(|e| match e {
        Error::DuplicateState(id) => Error::LabelCollision(format!("expanded state `{id}` is not unique")),
        other => other,
    })?;
    let is_deviate = |s: usize| s % 2 == 1;

    let eps = spec.epsilon.clone();
    let stay_w = Rational::one() - &eps;
    let weight = |s: usize| if is_deviate(s) { &eps } else { &stay_w };

    let prior = Credence::from_raw(
        &space,
        (0..2 * n)
            .map(|s| problem.prior().mass(project[s]) * weight(s))
            .collect(),
    );

    let actions = problem
        .choice_set()
        .actions()
        .iter()
        .map(|a| {
            Action::from_assignment(
                a.id(),
                project.iter().map(|&b| a.outcome_at(b)).collect(),
            )
        })
        .collect();
    let lifted = DecisionProblem::new(
        Arc::clone(&space),
        Arc::clone(problem.outcomes()),
        prior.clone(),
        ChoiceSet::new(actions)?,
    )?
    .with_tie_policy(problem.tie_policy());

    let cells = partition
        .cells()
        .iter()
        .map(|cell| Event::from_predicate(&space, |s| cell.contains(project[s])))
        .collect();
    let lifted_partition = EvidencePartition::new(&space, cells)?;

    let conditioned = conditioned_cells(&prior, &lifted_partition)?;
    let deviant: Vec<Arc<Credence>> = (0..partition.len())
        .map(|c| {
            let dev = spec.deviant(c);
            Arc::new(Credence::from_raw(
                &space,
                (0..2 * n).map(|s| dev.mass(project[s]) * weight(s)).collect(),
            ))
        })
        .collect();
    let posteriors = (0..2 * n)
        .map(|s| {
            let c = lifted_partition.cell_of(s);
            Some(Arc::clone(if is_deviate(s) { &deviant[c] } else { &conditioned[c] }))
        })
        .collect();

    let policy = UpdatePolicy::new(&prior, lifted_partition, posteriors)?.with_base(BaseProjection {
        base: Arc::clone(base),
        project,
    });
    Ok((lifted, policy))
}

fn deviating_mass(policy: &UpdatePolicy, prior: &Credence) -> Result<Rational> {
    ensure_same(policy.space(), prior.space())?;
    let partition = policy.partition();
    let conditioned = conditioned_cells(prior, partition)?;
    let mut mass = Rational::zero();
    for s in prior.support() {
        let expected = &conditioned[partition.cell_of(s)];
        if policy.posterior(s) != Some(expected.as_ref()) {
            mass += prior.mass(s);
        }
    }
    Ok(mass)
}

/// True iff the policy conditionalizes on every positive-prior state.
pub fn is_immodest(policy: &UpdatePolicy, prior: &Credence) -> bool {
    matches!(deviating_mass(policy, prior), Ok(m) if m.is_zero())
}

/// Prior probability of failing to conditionalize.
pub fn modesty_degree(policy: &UpdatePolicy, prior: &Credence) -> Result<Rational> {
    deviating_mass(policy, prior)
}

/// A cell, an action choice event within it, and an action whose expected
/// utility shifts when conditioning on that event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceViolation {
    pub cell: usize,
    pub action: String,
    pub witness: String,
}

impl From<IndependenceViolation> for Error {
    fn from(v: IndependenceViolation) -> Self {
        Error::IndependenceBroken {
            cell: v.cell,
            action: v.action,
            witness: v.witness,
        }
    }
}

/// First failure of evidential independence, if any.
pub fn independence_violation(
    problem: &DecisionProblem,
    policy: &UpdatePolicy,
) -> Result<Option<IndependenceViolation>> {
    ensure_same(problem.space(), policy.space())?;
    let chosen = chosen_by_state(problem, policy)?;
    for c in 0..policy.partition().len() {
        if let Some(v) = cell_violation(problem, policy, &chosen, c)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

pub(crate) fn cell_violation(
    problem: &DecisionProblem,
    policy: &UpdatePolicy,
    chosen: &[Option<usize>],
    c: usize,
) -> Result<Option<IndependenceViolation>> {
    let prior = problem.prior();
    let cell = policy.partition().cell(c);
    let baseline = expected_utilities(&prior.condition(cell)?, problem)?;
    for f in 0..problem.choice_set().len() {
        let choose = Event::from_predicate(problem.space(), |s| cell.contains(s) && chosen[s] == Some(f));
        if prior.probability(&choose)?.is_zero() {
            continue;
        }
        let shifted = expected_utilities(&prior.condition(&choose)?, problem)?;
        if let Some(g) = (0..baseline.len()).find(|&g| shifted[g] != baseline[g]) {
            return Ok(Some(IndependenceViolation {
                cell: c,
                action: problem.choice_set().get(f).id().to_string(),
                witness: problem.choice_set().get(g).id().to_string(),
            }));
        }
    }
    Ok(None)
}

/// Within every cell, learning which action will be chosen leaves every
/// action's conditional expected utility unchanged.
pub fn check_evidential_independence(problem: &DecisionProblem, policy: &UpdatePolicy) -> Result<bool> {
    Ok(independence_violation(problem, policy)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::OutcomeSpace;
    use crate::rational::{int, rat};

    /// Two fair, independent flips; bets on the second flip.
    fn flips() -> (DecisionProblem, EvidencePartition) {
        let space = StateSpace::new(["H·H", "H·T", "T·H", "T·T"]).unwrap();
        let outcomes = OutcomeSpace::new([("zero", int(0)), ("win", int(1)), ("lose", int(-2))]).unwrap();
        let bet = |id: &str, on: char| {
            let map: Vec<(String, &str)> = space
                .ids()
                .iter()
                .map(|s| (s.clone(), if s.ends_with(on) { "win" } else { "lose" }))
                .collect();
            Action::new(id, &space, &outcomes, map).unwrap()
        };
        let safe = Action::new("safe", &space, &outcomes, space.ids().iter().map(|s| (s.clone(), "zero"))).unwrap();
        let choice = ChoiceSet::new(vec![safe, bet("risky-heads", 'H'), bet("risky-tails", 'T')]).unwrap();
        let problem = DecisionProblem::new(Arc::clone(&space), outcomes, Credence::uniform(&space), choice).unwrap();
        let partition = EvidencePartition::from_ids(&space, [["H·H", "H·T"], ["T·H", "T·T"]]).unwrap();
        (problem, partition)
    }

    fn fallacy(problem: &DecisionProblem, eps: Rational) -> DeviationSpec {
        let space = problem.space();
        DeviationSpec::new(
            eps,
            vec![
                Credence::from_pairs(space, [("H·H", rat(1, 10)), ("H·T", rat(9, 10))]).unwrap(),
                Credence::from_pairs(space, [("T·H", rat(9, 10)), ("T·T", rat(1, 10))]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn partition_diagnostics() {
        let space = StateSpace::new(["a", "b", "c"]).unwrap();
        let err = EvidencePartition::from_ids(&space, [vec!["a", "b"], vec!["b", "c"]]).unwrap_err();
        assert!(matches!(err, Error::Partition(ref m) if m.contains("`b`")), "{err}");
        let err = EvidencePartition::from_ids(&space, [vec!["a"], vec!["b"]]).unwrap_err();
        assert!(matches!(err, Error::Partition(ref m) if m.contains("not covered")), "{err}");
    }

    #[test]
    fn conditionalization_shares_one_posterior_per_cell() {
        let (problem, partition) = flips();
        let policy = conditionalization_policy(problem.prior(), &partition).unwrap();
        assert_eq!(policy.posterior(0), policy.posterior(1));
        assert_ne!(policy.posterior(0), policy.posterior(2));
        assert!(is_immodest(&policy, problem.prior()));
        assert_eq!(modesty_degree(&policy, problem.prior()).unwrap(), int(0));
        assert!(check_evidential_independence(&problem, &policy).unwrap());
    }

    #[test]
    fn conditionalization_on_the_exchangeable_joint() {
        let space = StateSpace::new(["H·H", "H·T", "T·H", "T·T"]).unwrap();
        let prior = Credence::new(&space, vec![rat(1, 3), rat(1, 6), rat(1, 6), rat(1, 3)]).unwrap();
        let partition = EvidencePartition::from_ids(&space, [["H·H", "H·T"], ["T·H", "T·T"]]).unwrap();
        let policy = conditionalization_policy(&prior, &partition).unwrap();
        assert_eq!(policy.posterior(1).unwrap().mass(0), &rat(2, 3));
    }

    #[test]
    fn zero_probability_cells_are_rejected() {
        let space = StateSpace::new(["a", "b"]).unwrap();
        let prior = Credence::new(&space, vec![int(1), int(0)]).unwrap();
        let partition = EvidencePartition::from_ids(&space, [["a"], ["b"]]).unwrap();
        assert!(conditionalization_policy(&prior, &partition).is_err());
    }

    #[test]
    fn certainty_constraint_is_enforced() {
        let (problem, partition) = flips();
        let space = problem.space();
        let leaky = Arc::new(Credence::uniform(space));
        let posteriors = vec![Some(leaky); 4];
        let err = UpdatePolicy::new(problem.prior(), partition, posteriors).unwrap_err();
        assert!(matches!(err, Error::Certainty { ref outside, .. } if outside == "1/2"), "{err}");
    }

    #[test]
    fn mixture_preserves_the_base_marginal() {
        let (problem, partition) = flips();
        let (lifted, policy) =
            mixture_expand(&problem, &partition, &fallacy(&problem, rat(1, 10)), &Default::default()).unwrap();
        assert_eq!(lifted.space().len(), 8);
        assert_eq!(lifted.space().id(1), "H·H·deviate");
        let proj = policy.base().unwrap();
        for b in 0..4 {
            let preimage = proj.lift_state(lifted.space(), b);
            assert_eq!(lifted.prior().probability(&preimage).unwrap(), *problem.prior().mass(b));
        }
        assert_eq!(modesty_degree(&policy, lifted.prior()).unwrap(), rat(1, 10));
        assert!(!is_immodest(&policy, lifted.prior()));
    }

    #[test]
    fn degenerate_mixtures() {
        let (problem, partition) = flips();
        let labels = DispositionLabels::default();
        let (lifted, policy) = mixture_expand(&problem, &partition, &fallacy(&problem, int(0)), &labels).unwrap();
        assert!(is_immodest(&policy, lifted.prior()));
        assert_eq!(modesty_degree(&policy, lifted.prior()).unwrap(), int(0));
        let (lifted, policy) = mixture_expand(&problem, &partition, &fallacy(&problem, int(1)), &labels).unwrap();
        assert_eq!(modesty_degree(&policy, lifted.prior()).unwrap(), int(1));
    }

    #[test]
    fn every_mixture_posterior_is_certain_of_its_cell() {
        let (problem, partition) = flips();
        let (_, policy) =
            mixture_expand(&problem, &partition, &fallacy(&problem, rat(1, 3)), &Default::default()).unwrap();
        for s in 0..policy.space().len() {
            let cell = policy.partition().cell(policy.partition().cell_of(s));
            assert_eq!(policy.posterior(s).unwrap().probability(cell).unwrap(), int(1));
        }
    }

    #[test]
    fn label_collisions() {
        let (problem, partition) = flips();
        let spec = fallacy(&problem, rat(1, 2));
        let same = DispositionLabels { stay: "x".into(), deviate: "x".into() };
        assert!(matches!(mixture_expand(&problem, &partition, &spec, &same), Err(Error::LabelCollision(_))));
        let clash = DispositionLabels { stay: "H·H".into(), deviate: "d".into() };
        assert!(matches!(mixture_expand(&problem, &partition, &spec, &clash), Err(Error::LabelCollision(_))));
    }

    #[test]
    fn epsilon_outside_unit_interval() {
        let (problem, _) = flips();
        let dev = fallacy(&problem, int(0)).deviant.clone();
        assert!(DeviationSpec::new(rat(3, 2), dev.clone()).is_err());
        assert!(DeviationSpec::new(rat(-1, 2), dev).is_err());
    }

    #[test]
    fn mixture_satisfies_independence() {
        let (problem, partition) = flips();
        let (lifted, policy) =
            mixture_expand(&problem, &partition, &fallacy(&problem, rat(1, 10)), &Default::default()).unwrap();
        assert!(check_evidential_independence(&lifted, &policy).unwrap());
    }

    #[test]
    fn clairvoyant_policy_breaks_independence() {
        // Deviates (towards the truth) exactly when the second flip lands heads.
        let (problem, partition) = flips();
        let space = problem.space();
        let prior = problem.prior();
        let mut posteriors = Vec::new();
        for s in 0..4 {
            let cell = partition.cell(partition.cell_of(s));
            let post = if space.id(s).ends_with('H') {
                Credence::dirac(space, s)
            } else {
                prior.condition(cell).unwrap()
            };
            posteriors.push(Some(Arc::new(post)));
        }
        let policy = UpdatePolicy::new(prior, partition, posteriors).unwrap();
        assert!(!check_evidential_independence(&problem, &policy).unwrap());
        let v = independence_violation(&problem, &policy).unwrap().unwrap();
        assert_eq!(v.cell, 0);
    }
}
