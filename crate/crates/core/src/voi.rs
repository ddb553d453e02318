//! Value of information for conditionalizers and for sophisticated choosers.
//!
//! `val_good` averages the best conditional expected utility over the cells
//! of a partition. `val_general` instead predicts, state by state, which
//! action the agent will pick under the posterior she actually adopts, and
//! scores that action with the current prior. Both subtract the value of
//! choosing now.
//!
//! `val_general` has two computation routes: the definitional per-state sum
//! and a per-cell decomposition into "choose f" events. The second is only
//! valid under evidential independence, and the two are cross-checked by the
//! property suite.

use num_traits::Zero;
use serde::Serialize;

use crate::decision::{best_action_index, expected_utilities, max_expected_utility, Action, DecisionProblem};
use crate::error::{Error, Result};
use crate::prob::{ensure_same, Credence, Event};
use crate::rational::{format_rational, Rational};
use crate::update::{cell_violation, EvidencePartition, UpdatePolicy};

/// `Σ_E p(E)·max_f E_{p(·|E)}(f) − max_f E_p(f)`.
pub fn val_good(problem: &DecisionProblem, partition: &EvidencePartition) -> Result<Rational> {
    ensure_same(problem.space(), partition.space())?;
    let prior = problem.prior();
    let mut after = Rational::zero();
    for cell in partition.cells() {
        let pe = prior.probability(cell)?;
        let posterior = prior.condition(cell)?;
        after += pe * max_expected_utility(&posterior, problem)?;
    }
    Ok(after - max_expected_utility(prior, problem)?)
}

/// The action chosen at `state` under the posterior adopted there.
pub fn sophisticated_choice<'a>(
    problem: &'a DecisionProblem,
    policy: &UpdatePolicy,
    state: usize,
) -> Result<&'a Action> {
    Ok(problem.choice_set().get(choice_index(problem, policy, state)?))
}

fn choice_index(problem: &DecisionProblem, policy: &UpdatePolicy, state: usize) -> Result<usize> {
    let posterior = policy.posterior(state).ok_or_else(|| Error::Policy {
        state: problem.space().id(state).to_string(),
        reason: "no posterior recorded".into(),
    })?;
    Ok(best_action_index(posterior, problem, problem.tie_policy())?.0)
}

/// Chosen action index at every positive-prior state; `None` elsewhere.
pub fn chosen_by_state(problem: &DecisionProblem, policy: &UpdatePolicy) -> Result<Vec<Option<usize>>> {
    ensure_same(problem.space(), policy.space())?;
    let prior = problem.prior();
    // States sharing one posterior share one argmax.
    let mut memo: Vec<(&Credence, usize)> = Vec::new();
    let mut chosen = Vec::with_capacity(problem.space().len());
    for s in 0..problem.space().len() {
        if prior.mass(s).is_zero() {
            chosen.push(None);
            continue;
        }
        let post = policy.posterior(s);
        let hit = post.and_then(|p| memo.iter().find(|(m, _)| std::ptr::eq(*m, p)).map(|&(_, i)| i));
        let i = match hit {
            Some(i) => i,
            None => {
                let i = choice_index(problem, policy, s)?;
                if let Some(p) = post {
                    memo.push((p, i));
                }
                i
            }
        };
        chosen.push(Some(i));
    }
    Ok(chosen)
}

/// Definitional route: `Σ_ω p(ω)·u(chosen(ω)(ω)) − max_f E_p(f)`.
pub fn val_general(problem: &DecisionProblem, policy: &UpdatePolicy) -> Result<Rational> {
    let prior = problem.prior();
    policy.partition().check_positive(prior)?;
    let chosen = chosen_by_state(problem, policy)?;
    let after: Rational = chosen
        .iter()
        .enumerate()
        .filter_map(|(s, c)| c.map(|f| prior.mass(s) * problem.utility(problem.choice_set().get(f), s)))
        .sum();
    Ok(after - max_expected_utility(prior, problem)?)
}

/// One term of the per-cell decomposition: the probability, given the cell,
/// of choosing an action, and that action's conditional expected utility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaOneRow {
    pub cell: usize,
    pub action: String,
    pub choose_prob: Rational,
    pub cond_eu: Rational,
}

/// Decomposes the value of acting after learning `cell` into
/// `Σ_i p(choose f_i | E)·E_{p(·|E)}(f_i)`.
///
/// Fails with [`Error::IndependenceBroken`] when choosing some action is
/// evidence about the payoffs inside the cell.
pub fn lemma1_decompose(
    problem: &DecisionProblem,
    policy: &UpdatePolicy,
    cell: usize,
) -> Result<Vec<LemmaOneRow>> {
    let chosen = chosen_by_state(problem, policy)?;
    lemma1_rows(problem, policy, &chosen, cell)
}

fn lemma1_rows(
    problem: &DecisionProblem,
    policy: &UpdatePolicy,
    chosen: &[Option<usize>],
    c: usize,
) -> Result<Vec<LemmaOneRow>> {
    if let Some(v) = cell_violation(problem, policy, chosen, c)? {
        return Err(v.into());
    }
    let prior = problem.prior();
    let cell = policy.partition().cell(c);
    let pe = prior.probability(cell)?;
    let cond_eus = expected_utilities(&prior.condition(cell)?, problem)?;
    let mut choose_mass = vec![Rational::zero(); problem.choice_set().len()];
    for s in cell.members() {
        if let Some(f) = chosen[s] {
            choose_mass[f] += prior.mass(s);
        }
    }
    Ok(choose_mass
        .into_iter()
        .zip(cond_eus)
        .enumerate()
        .filter(|(_, (m, _))| !m.is_zero())
        .map(|(f, (m, eu))| LemmaOneRow {
            cell: c,
            action: problem.choice_set().get(f).id().to_string(),
            choose_prob: m / &pe,
            cond_eu: eu,
        })
        .collect())
}

pub fn lemma1_sum(rows: &[LemmaOneRow]) -> Rational {
    rows.iter().map(|r| &r.choose_prob * &r.cond_eu).sum()
}

/// Per-cell route: `Σ_E p(E)·(Σ_i p(choose f_i | E)·E_{p(·|E)}(f_i)) − max_f E_p(f)`.
pub fn val_general_by_cells(problem: &DecisionProblem, policy: &UpdatePolicy) -> Result<Rational> {
    let prior = problem.prior();
    policy.partition().check_positive(prior)?;
    let chosen = chosen_by_state(problem, policy)?;
    let mut after = Rational::zero();
    for (c, cell) in policy.partition().cells().iter().enumerate() {
        let rows = lemma1_rows(problem, policy, &chosen, c)?;
        after += prior.probability(cell)? * lemma1_sum(&rows);
    }
    Ok(after - max_expected_utility(prior, problem)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellReport {
    pub cell: Event,
    pub probability: Rational,
    pub max_conditional_eu: Rational,
    /// `None` when evidential independence fails in this cell.
    pub lemma_rows: Option<Vec<LemmaOneRow>>,
}

/// Everything `eval` prints for one problem and policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoiReport {
    pub prior_max_eu: Rational,
    pub val_good: Rational,
    pub val_general: Rational,
    pub per_cell: Vec<CellReport>,
    pub chosen_by_state: Vec<(String, String)>,
}

impl VoiReport {
    /// `Σ p(E)·maxEU − max prior EU`, rebuilt from the cell rows.
    pub fn val_good_from_cells(&self) -> Rational {
        self.per_cell
            .iter()
            .map(|c| &c.probability * &c.max_conditional_eu)
            .sum::<Rational>()
            - &self.prior_max_eu
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row<'a> {
            action: &'a str,
            choose_prob: String,
            cond_eu: String,
        }
        #[derive(Serialize)]
        struct Cell<'a> {
            cell: Vec<&'a str>,
            probability: String,
            max_conditional_eu: String,
            lemma_rows: Option<Vec<Row<'a>>>,
        }
        let cells: Vec<Cell> = self
            .per_cell
            .iter()
            .map(|c| Cell {
                cell: c.cell.member_ids(),
                probability: format_rational(&c.probability),
                max_conditional_eu: format_rational(&c.max_conditional_eu),
                lemma_rows: c.lemma_rows.as_ref().map(|rows| {
                    rows.iter()
                        .map(|r| Row {
                            action: &r.action,
                            choose_prob: format_rational(&r.choose_prob),
                            cond_eu: format_rational(&r.cond_eu),
                        })
                        .collect()
                }),
            })
            .collect();
        serde_json::json!({
            "prior_max_eu": format_rational(&self.prior_max_eu),
            "val_good": format_rational(&self.val_good),
            "val_general": format_rational(&self.val_general),
            "per_cell": cells,
            "chosen_by_state": self.chosen_by_state.iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
        })
    }
}

pub fn evaluate(problem: &DecisionProblem, policy: &UpdatePolicy) -> Result<VoiReport> {
    let prior = problem.prior();
    let partition = policy.partition();
    partition.check_positive(prior)?;
    let chosen = chosen_by_state(problem, policy)?;
    let mut per_cell = Vec::with_capacity(partition.len());
    for (c, cell) in partition.cells().iter().enumerate() {
        let lemma_rows = match lemma1_rows(problem, policy, &chosen, c) {
            Ok(rows) => Some(rows),
            Err(Error::IndependenceBroken { .. }) => None,
            Err(e) => return Err(e),
        };
        per_cell.push(CellReport {
            cell: cell.clone(),
            probability: prior.probability(cell)?,
            max_conditional_eu: max_expected_utility(&prior.condition(cell)?, problem)?,
            lemma_rows,
        });
    }
    let chosen_by_state = chosen
        .iter()
        .enumerate()
        .filter_map(|(s, c)| {
            c.map(|f| {
                (
                    problem.space().id(s).to_string(),
                    problem.choice_set().get(f).id().to_string(),
                )
            })
        })
        .collect();
    Ok(VoiReport {
        prior_max_eu: max_expected_utility(prior, problem)?,
        val_good: val_good(problem, partition)?,
        val_general: val_general(problem, policy)?,
        per_cell,
        chosen_by_state,
    })
}
