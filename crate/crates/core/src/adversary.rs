//! Synthesis of choice sets on which a modest agent should refuse to learn.
//!
//! Given a policy that fails to conditionalize somewhere, [`find_deviation`]
//! locates a cell `E`, a positive-prior state in it, and an event `A` whose
//! deviant posterior mass `q` differs from `r = p(A | E)`. A two-act choice
//! set is then built: `safe` pays 0 everywhere and `risky` pays `a` on
//! `A ∩ E`, `-b` on `Aᶜ ∩ E` and 0 off `E`. Stakes are chosen so that the
//! deviant posterior strictly prefers `risky` while the conditioned one
//! strictly rejects it, which drives the generalized value of information
//! below zero.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::decision::{expected_utility, max_expected_utility, Action, ChoiceSet, DecisionProblem, OutcomeSpace, TiePolicy};
use crate::error::{Error, Result};
use crate::prob::{Credence, Event};
use crate::rational::{display_rational, in_unit_interval, Rational};
use crate::update::{independence_violation, UpdatePolicy};
use crate::voi::val_general;

/// A witness that the policy departs from conditionalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub cell: usize,
    pub cell_event: Event,
    pub state: usize,
    pub event: Event,
    /// Deviant posterior mass on `event`.
    pub q: Rational,
    /// `p(event | cell)`.
    pub r: Rational,
}

/// Stakes for the risky bet, and which side of the deviation event it backs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bet {
    pub win: Rational,
    pub loss: Rational,
    pub on_complement: bool,
}

impl Bet {
    /// Indifference probability `b / (a + b)`.
    pub fn threshold(&self) -> Rational {
        &self.loss / (&self.win + &self.loss)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AversionCertificate {
    pub deviation: Deviation,
    pub bet: Bet,
    /// The original problem with its choice set replaced by `{safe, risky}`.
    pub problem: DecisionProblem,
    pub val_general: Rational,
}

impl AversionCertificate {
    pub fn choice_set(&self) -> &ChoiceSet {
        self.problem.choice_set()
    }
}

/// Finds the first deviation of `policy` from conditionalization.
///
/// Cells are scanned in declared order and states in space order. For the
/// first deviating state, candidate events are tried in this order: lifted
/// base singletons (for disposition-expanded policies), singletons, then
/// singleton complements. The first candidate with `q > r` wins; failing
/// that, the first with `q ≠ r`.
pub fn find_deviation(prior: &Credence, policy: &UpdatePolicy) -> Result<Deviation> {
    crate::prob::ensure_same(prior.space(), policy.space())?;
    let space = prior.space();
    let partition = policy.partition();
    for (c, cell) in partition.cells().iter().enumerate() {
        let conditioned = prior.condition(cell)?;
        for s in cell.members() {
            if prior.mass(s).is_zero() {
                continue;
            }
            let posterior = match policy.posterior(s) {
                Some(p) if *p != conditioned => p,
                _ => continue,
            };
            let mut candidates: Vec<Event> = Vec::new();
            if let Some(base) = policy.base() {
                candidates.extend((0..base.base.len()).map(|b| base.lift_state(space, b)));
            }
            candidates.extend((0..space.len()).map(|i| Event::from_indices(space, [i])));
            candidates.extend((0..space.len()).map(|i| Event::from_indices(space, [i]).complement()));

            let mut fallback = None;
            for event in candidates {
                let q = posterior.probability(&event)?;
                let r = conditioned.probability(&event)?;
                if q == r {
                    continue;
                }
                let found = Deviation {
                    cell: c,
                    cell_event: cell.clone(),
                    state: s,
                    event,
                    q,
                    r,
                };
                if found.q > found.r {
                    return Ok(found);
                }
                fallback.get_or_insert(found);
            }
            if let Some(found) = fallback {
                return Ok(found);
            }
        }
    }
    Err(Error::NoDeviation)
}

/// Stakes `(a, b)` with `a·q − b(1−q) > 0 > a·r − b(1−r)`.
///
/// With `m = (q + r)/2`, returns `a = 1 − m`, `b = m`. When `q < r` the bet is
/// placed on the complement, so the same construction applies to
/// `(1 − q, 1 − r)`.
pub fn construct_bet(q: &Rational, r: &Rational) -> Result<Bet> {
    if !in_unit_interval(q) || !in_unit_interval(r) {
        return Err(Error::Certificate(format!(
            "q = {} and r = {} must lie in [0, 1]",
            display_rational(q),
            display_rational(r)
        )));
    }
    if q == r {
        return Err(Error::Certificate(format!(
            "q and r are both {}; no separating bet exists",
            display_rational(q)
        )));
    }
    let on_complement = q < r;
    let (q, r) = if on_complement {
        (Rational::one() - q, Rational::one() - r)
    } else {
        (q.clone(), r.clone())
    };
    let m = (q + r) / Rational::from_integer(2.into());
    Ok(Bet {
        win: Rational::one() - &m,
        loss: m,
        on_complement,
    })
}

/// Builds the `{safe, risky}` choice set for `policy` and certifies that its
/// generalized value of information is negative.
///
/// The certificate problem breaks ties by choice-set order: off the deviation
/// cell both acts pay 0 under every posterior, and `safe` comes first.
pub fn demonstrate_aversion(problem: &DecisionProblem, policy: &UpdatePolicy) -> Result<AversionCertificate> {
    let deviation = find_deviation(problem.prior(), policy)?;
    let bet = construct_bet(&deviation.q, &deviation.r)?;
    let target = if bet.on_complement {
        deviation.event.complement()
    } else {
        deviation.event.clone()
    };

    let outcomes = OutcomeSpace::new([
        ("zero", Rational::zero()),
        ("win", bet.win.clone()),
        ("loss", -bet.loss.clone()),
    ])?;
    let space = problem.space();
    let safe = Action::from_assignment("safe", vec![0; space.len()]);
    let risky = Action::from_assignment(
        "risky",
        (0..space.len())
            .map(|s| match (deviation.cell_event.contains(s), target.contains(s)) {
                (false, _) => 0,
                (true, true) => 1,
                (true, false) => 2,
            })
            .collect(),
    );
    let synthesized = DecisionProblem::new(
        Arc::clone(space),
        outcomes,
        problem.prior().clone(),
        ChoiceSet::new(vec![safe, risky])?,
    )?
    .with_tie_policy(TiePolicy::FirstByOrder);

    if let Some(v) = independence_violation(&synthesized, policy)? {
        return Err(v.into());
    }

    let prior_max = max_expected_utility(problem.prior(), &synthesized)?;
    if !prior_max.is_zero() {
        return Err(Error::Certificate(format!(
            "max prior expected utility is {}, expected 0",
            display_rational(&prior_max)
        )));
    }
    let risky = synthesized.choice_set().get(1);
    let deviant = policy.posterior(deviation.state).expect("deviating state has a posterior");
    let conditioned = problem.prior().condition(&deviation.cell_event)?;
    if expected_utility(deviant, risky, &synthesized)? <= Rational::zero()
        || expected_utility(&conditioned, risky, &synthesized)? >= Rational::zero()
    {
        return Err(Error::Certificate("stakes do not separate the two posteriors".into()));
    }

    let value = val_general(&synthesized, policy)?;
    if value >= Rational::zero() {
        return Err(Error::Certificate(format!(
            "generalized value of information is {}, not negative",
            display_rational(&value)
        )));
    }
    Ok(AversionCertificate {
        deviation,
        bet,
        problem: synthesized,
        val_general: value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn bet_examples() {
        let bet = construct_bet(&rat(9, 10), &rat(1, 2)).unwrap();
        assert_eq!((bet.win.clone(), bet.loss.clone()), (rat(3, 10), rat(7, 10)));
        assert!(!bet.on_complement);
        let q = rat(9, 10);
        let r = rat(1, 2);
        let one = Rational::one();
        assert_eq!(&bet.win * &q - &bet.loss * (&one - &q), rat(1, 5));
        assert_eq!(&bet.win * &r - &bet.loss * (&one - &r), rat(-1, 5));

        let bet = construct_bet(&rat(2, 3), &rat(1, 2)).unwrap();
        assert_eq!((bet.win, bet.loss), (rat(5, 12), rat(7, 12)));

        let bet = construct_bet(&int(1), &int(0)).unwrap();
        assert_eq!((bet.win, bet.loss), (rat(1, 2), rat(1, 2)));
    }

    #[test]
    fn bet_mirrors_when_deviant_mass_is_lower() {
        let bet = construct_bet(&rat(1, 10), &rat(1, 2)).unwrap();
        assert!(bet.on_complement);
        assert_eq!((bet.win.clone(), bet.loss.clone()), (rat(3, 10), rat(7, 10)));
        assert!(rat(1, 2) < bet.threshold() && bet.threshold() < rat(9, 10));
    }

    #[test]
    fn equal_masses_have_no_bet() {
        assert!(construct_bet(&rat(1, 3), &rat(1, 3)).is_err());
        assert!(construct_bet(&rat(4, 3), &rat(1, 3)).is_err());
    }
}
