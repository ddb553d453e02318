//! Seeded random decision problems.
//!
//! Every instance has 2–8 base states with positive prior, 2–4 actions with
//! utilities in `{k/2 : -8 ≤ k ≤ 8}`, and a random partition. Ties in the
//! post-learning argmax are resampled away, so instances satisfy the
//! unique-best-action assumption and can be evaluated with
//! [`TiePolicy::ErrorOnTie`].
//!
//! Trial `i` under seed `s` draws from ChaCha stream `i` keyed by `s`, so
//! trials are independent of evaluation order.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decision::{best_action_index, Action, ChoiceSet, DecisionProblem, OutcomeSpace, TiePolicy};
use crate::prob::{Credence, Event, StateSpace};
use crate::rational::{rat, Rational};
use crate::update::{mixture_expand, DeviationSpec, DispositionLabels, EvidencePartition, UpdatePolicy};

const MAX_ATTEMPTS: usize = 10_000;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A base problem and partition, plus a disposition-expanded variant with a
/// (possibly modest) policy.
#[derive(Debug, Clone)]
pub struct Instance {
    pub base: DecisionProblem,
    pub partition: EvidencePartition,
    pub epsilon: Rational,
    pub mixture: DecisionProblem,
    pub mixture_policy: UpdatePolicy,
}

fn random_weights<R: Rng>(rng: &mut R, n: usize, min: u32, max: u32) -> Vec<u32> {
    loop {
        let w: Vec<u32> = (0..n).map(|_| rng.gen_range(min..=max)).collect();
        if w.iter().any(|&x| x > 0) {
            return w;
        }
    }
}

fn normalize(weights: &[u32]) -> Vec<Rational> {
    let total: u32 = weights.iter().sum();
    weights.iter().map(|&w| rat(w.into(), total.into())).collect()
}

fn has_unique_best(posterior: &Credence, problem: &DecisionProblem) -> bool {
    best_action_index(posterior, problem, TiePolicy::ErrorOnTie).is_ok()
}

/// A base problem whose per-cell conditioned argmax is unique.
pub fn random_base<R: Rng>(rng: &mut R) -> (DecisionProblem, EvidencePartition) {
    for _ in 0..MAX_ATTEMPTS {
        let n = rng.gen_range(2..=8);
        let space = StateSpace::new((0..n).map(|i| format!("s{i}"))).expect("distinct ids");
        let prior = Credence::new(&space, normalize(&random_weights(rng, n, 1, 5))).expect("normalized");

        let m = rng.gen_range(2..=4);
        let halves: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-8..=8)).collect()).collect();
        let mut distinct: Vec<i64> = halves.iter().flatten().copied().collect();
        distinct.sort_unstable();
        distinct.dedup();
        let outcomes =
            OutcomeSpace::new(distinct.iter().map(|&k| (format!("u{k}"), rat(k, 2)))).expect("distinct ids");
        let actions = halves
            .iter()
            .enumerate()
            .map(|(a, row)| {
                let assignment = row
                    .iter()
                    .map(|k| distinct.binary_search(k).expect("value minted"))
                    .collect();
                Action::from_assignment(format!("f{a}"), assignment)
            })
            .collect();
        let problem = DecisionProblem::new(Arc::clone(&space), outcomes, prior, ChoiceSet::new(actions).expect("distinct"))
            .expect("consistent")
            .with_tie_policy(TiePolicy::ErrorOnTie);

        let k = rng.gen_range(1..=n.min(4));
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut cuts: Vec<usize> = (1..n).collect();
        cuts.shuffle(rng);
        let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
        cuts.sort_unstable();
        let bounds: Vec<usize> = std::iter::once(0).chain(cuts).chain(std::iter::once(n)).collect();
        let cells = bounds
            .windows(2)
            .map(|w| Event::from_indices(&space, order[w[0]..w[1]].iter().copied()))
            .collect();
        let partition = EvidencePartition::new(&space, cells).expect("cuts partition the shuffle");

        let unique = partition
            .cells()
            .iter()
            .all(|cell| has_unique_best(&problem.prior().condition(cell).expect("positive prior"), &problem));
        if unique {
            return (problem, partition);
        }
    }
    panic!("could not draw a tie-free base problem");
}

/// Random deviant posteriors, one per cell, each with a unique argmax.
fn random_deviants<R: Rng>(rng: &mut R, problem: &DecisionProblem, partition: &EvidencePartition) -> Vec<Credence> {
    let space = problem.space();
    partition
        .cells()
        .iter()
        .map(|cell| {
            for _ in 0..MAX_ATTEMPTS {
                let members: Vec<usize> = cell.members().collect();
                let w = random_weights(rng, members.len(), 0, 4);
                let mut mass = vec![Rational::from_integer(0.into()); space.len()];
                for (&s, m) in members.iter().zip(normalize(&w)) {
                    mass[s] = m;
                }
                let post = Credence::new(space, mass).expect("normalized");
                if has_unique_best(&post, problem) {
                    return post;
                }
            }
            panic!("could not draw a tie-free deviant posterior");
        })
        .collect()
}

fn random_epsilon<R: Rng>(rng: &mut R) -> Rational {
    let den = rng.gen_range(2..=10);
    rat(rng.gen_range(1..=den), den)
}

/// Draws an instance. With `modest`, at least one cell's deviant posterior
/// differs from the conditioned one, so the mixture policy is modest.
pub fn random_instance<R: Rng>(rng: &mut R, modest: bool) -> Instance {
    for _ in 0..MAX_ATTEMPTS {
        let (base, partition) = random_base(rng);
        // Singleton cells admit only the conditioned posterior.
        if modest && partition.cells().iter().all(|c| c.len() == 1) {
            continue;
        }
        let deviant = loop {
            let deviant = random_deviants(rng, &base, &partition);
            let differs = deviant
                .iter()
                .zip(partition.cells())
                .any(|(d, cell)| *d != base.prior().condition(cell).expect("positive prior"));
            if differs || !modest {
                break deviant;
            }
        };
        let epsilon = random_epsilon(rng);
        let spec = DeviationSpec::new(epsilon.clone(), deviant).expect("epsilon in (0, 1]");
        let (mixture, mixture_policy) =
            mixture_expand(&base, &partition, &spec, &DispositionLabels::default()).expect("valid expansion");
        return Instance {
            base,
            partition,
            epsilon,
            mixture,
            mixture_policy,
        };
    }
    panic!("could not draw a modest policy");
}

pub fn instance_for_trial(seed: u64, trial: u64, modest: bool) -> Instance {
    random_instance(&mut trial_rng(seed, trial), modest)
}
