mod common;

use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;

use common::Plain;
use modest_voi::adversary::construct_bet;
use modest_voi::decision::{best_action_index, Action, ChoiceSet, DecisionProblem, OutcomeSpace, TiePolicy};
use modest_voi::generator::instance_for_trial;
use modest_voi::prob::{Credence, Event, StateFunction, StateSpace};
use modest_voi::problem_file::ProblemFile;
use modest_voi::rational::{format_rational, rat};
use modest_voi::scenarios::{default_confidence, scenario_gamblers, scenario_unknown_bias};
use modest_voi::update::{conditionalization_policy, is_immodest, modesty_degree, EvidencePartition};
use modest_voi::voi::{val_general, val_general_by_cells, val_good};
use modest_voi::Rational;

fn space(n: usize) -> Arc<StateSpace> {
    StateSpace::new((0..n).map(|i| format!("w{i}"))).unwrap()
}

fn credence(space: &Arc<StateSpace>, weights: &[u32]) -> Credence {
    let total: u32 = weights.iter().sum();
    Credence::new(space, weights.iter().map(|&w| rat(w.into(), total.into())).collect()).unwrap()
}

/// Positive weights, integer-valued function, and a cell label per state.
fn weighted_partitioned() -> impl Strategy<Value = (Vec<u32>, Vec<i64>, Vec<usize>)> {
    (1usize..=8).prop_flat_map(|n| {
        (
            prop::collection::vec(1u32..=9, n),
            prop::collection::vec(-20i64..=20, n),
            prop::collection::vec(0usize..3, n),
        )
    })
}

fn partition_from_labels(space: &Arc<StateSpace>, labels: &[usize]) -> EvidencePartition {
    let mut cells: Vec<Event> = (0..3)
        .map(|c| Event::from_predicate(space, |s| labels[s] == c))
        .filter(|e| !e.is_empty())
        .collect();
    cells.sort_by_key(|e| e.members().next());
    EvidencePartition::new(space, cells).unwrap()
}

fn epsilon() -> impl Strategy<Value = Rational> {
    (1i64..=60).prop_flat_map(|d| (0..=d).prop_map(move |n| rat(n, d)))
}

proptest! {
    #[test]
    fn total_expectation((weights, values, labels) in weighted_partitioned()) {
        let sp = space(weights.len());
        let p = credence(&sp, &weights);
        let f = StateFunction::new(&sp, values.iter().map(|&v| rat(v, 1)).collect()).unwrap();
        let partition = partition_from_labels(&sp, &labels);
        let by_cells: Rational = partition
            .cells()
            .iter()
            .map(|e| p.probability(e).unwrap() * p.condition(e).unwrap().expectation(&f).unwrap())
            .sum();
        prop_assert_eq!(by_cells, p.expectation(&f).unwrap());
    }

    #[test]
    fn conditioning_is_idempotent((weights, _values, labels) in weighted_partitioned()) {
        let sp = space(weights.len());
        let p = credence(&sp, &weights);
        for e in partition_from_labels(&sp, &labels).cells() {
            let once = p.condition(e).unwrap();
            prop_assert_eq!(once.condition(e).unwrap(), once.clone());
            prop_assert_eq!(once.probability(e).unwrap(), Rational::one());
        }
        prop_assert_eq!(p.condition(&Event::full(&sp)).unwrap(), p);
    }

    #[test]
    fn argmax_survives_positive_affine_maps(
        weights in prop::collection::vec(1u32..=9, 3),
        table in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 2..=4),
        scale in 1i64..=7,
        shift in -10i64..=10,
    ) {
        let sp = space(3);
        let p = credence(&sp, &weights);
        let build = |map: &dyn Fn(i64) -> Rational| {
            let mut values: Vec<i64> = table.iter().flatten().copied().collect();
            values.sort_unstable();
            values.dedup();
            let outcomes = OutcomeSpace::new(values.iter().map(|&v| (format!("o{v}"), map(v)))).unwrap();
            let actions = table
                .iter()
                .enumerate()
                .map(|(a, row)| {
                    let pairs: Vec<(String, String)> =
                        row.iter().enumerate().map(|(s, v)| (format!("w{s}"), format!("o{v}"))).collect();
                    Action::new(format!("f{a}"), &sp, &outcomes, pairs).unwrap()
                })
                .collect();
            DecisionProblem::new(Arc::clone(&sp), outcomes, p.clone(), ChoiceSet::new(actions).unwrap()).unwrap()
        };
        let original = build(&|v| rat(v, 1));
        let mapped = build(&|v| rat(scale * v + shift, 3));
        let a = best_action_index(&p, &original, TiePolicy::FirstByOrder).unwrap().0;
        let b = best_action_index(&p, &mapped, TiePolicy::FirstByOrder).unwrap().0;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn bets_separate_the_two_masses(qn in 0i64..=50, rn in 0i64..=50) {
        prop_assume!(qn != rn);
        let (q, r) = (rat(qn, 50), rat(rn, 50));
        let bet = construct_bet(&q, &r).unwrap();
        prop_assert!(bet.win > Rational::zero() && bet.loss > Rational::zero());
        let one = Rational::one();
        let payoff = |x: &Rational| {
            let x = if bet.on_complement { &one - x } else { x.clone() };
            &bet.win * &x - &bet.loss * (&one - &x)
        };
        prop_assert!(payoff(&q) > Rational::zero());
        prop_assert!(payoff(&r) < Rational::zero());
    }

    #[test]
    fn gamblers_value_is_affine_in_epsilon(eps in epsilon()) {
        let v = scenario_gamblers(&eps).unwrap().val_general().unwrap();
        prop_assert_eq!(v, -eps / rat(2, 1));
    }

    #[test]
    fn unknown_bias_value_is_affine_in_epsilon(eps in epsilon()) {
        let v = scenario_unknown_bias(&eps, default_confidence()).unwrap().val_general().unwrap();
        prop_assert_eq!(v, rat(1, 3) - rat(7, 3) * eps);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modesty_degree_vanishes_exactly_when_immodest(seed in any::<u64>(), modest in any::<bool>()) {
        let inst = instance_for_trial(seed, 0, modest);
        let degree = modesty_degree(&inst.mixture_policy, inst.mixture.prior()).unwrap();
        prop_assert_eq!(degree.is_zero(), is_immodest(&inst.mixture_policy, inst.mixture.prior()));
        if modest {
            prop_assert!(!degree.is_zero());
        }
        let cond = conditionalization_policy(inst.base.prior(), &inst.partition).unwrap();
        prop_assert!(modesty_degree(&cond, inst.base.prior()).unwrap().is_zero());
        prop_assert!(is_immodest(&cond, inst.base.prior()));
    }

    #[test]
    fn canonical_form_is_a_fixed_point(seed in any::<u64>()) {
        let inst = instance_for_trial(seed, 0, true);
        let text = ProblemFile::from_instance(&inst.mixture, &inst.mixture_policy).unwrap().to_canonical_json();
        let (problem, _, policy) = ProblemFile::from_json(&text).unwrap().to_instance().unwrap();
        prop_assert_eq!(ProblemFile::from_instance(&problem, &policy).unwrap().to_canonical_json(), text);
    }

    #[test]
    fn library_agrees_with_oracle(seed in any::<u64>()) {
        let inst = instance_for_trial(seed, 0, false);
        let text = ProblemFile::from_instance(&inst.mixture, &inst.mixture_policy).unwrap().to_canonical_json();
        let plain = Plain::from_json(&text);
        let vg = val_general(&inst.mixture, &inst.mixture_policy).unwrap();
        let cells = val_general_by_cells(&inst.mixture, &inst.mixture_policy).unwrap();
        let good = val_good(&inst.mixture, inst.mixture_policy.partition()).unwrap();
        prop_assert_eq!(common::q(&format_rational(&vg)), plain.val_general());
        prop_assert_eq!(common::q(&format_rational(&cells)), plain.val_general_by_cells());
        prop_assert_eq!(common::q(&format_rational(&good)), plain.val_good());
        prop_assert!(vg <= good);
    }
}
