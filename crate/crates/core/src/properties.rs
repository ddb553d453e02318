//! Randomized checks of the value-of-information theorems.
//!
//! Each trial draws an [`Instance`](crate::generator::Instance) and checks:
//!
//! * `thm1`: with conditionalization, the generalized value equals the
//!   classical one.
//! * `thm3`: with an evidentially independent mixture policy, the
//!   generalized value never exceeds the classical one.
//! * `good`: the classical value is non-negative, and positive exactly when
//!   the partition is relevant.
//! * `lemma1`: the per-cell decomposition reproduces the definitional sum,
//!   for both policies.
//!
//! Failures, including evaluation errors such as ties, are reported with the
//! offending instance serialized as a problem file.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::decision::{is_relevant, DecisionProblem};
use crate::error::Result;
use crate::generator::{instance_for_trial, Instance};
use crate::problem_file::ProblemFile;
use crate::rational::{display_rational, Rational};
use crate::update::{check_evidential_independence, conditionalization_policy, is_immodest, UpdatePolicy};
use crate::voi::{val_general, val_general_by_cells, val_good};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Thm1,
    Thm3,
    Good,
    Lemma1,
}

impl Property {
    pub const ALL: [Property; 4] = [Property::Thm1, Property::Thm3, Property::Good, Property::Lemma1];

    pub fn name(self) -> &'static str {
        match self {
            Property::Thm1 => "thm1",
            Property::Thm3 => "thm3",
            Property::Good => "good",
            Property::Lemma1 => "lemma1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRow {
    pub trial: u64,
    pub base_states: usize,
    pub mixture_states: usize,
    pub cells: usize,
    pub epsilon: Rational,
    pub relevant: bool,
    pub val_good: Rational,
    /// With the conditionalization policy on the base problem.
    pub val_general_cond: Rational,
    pub val_general_cond_by_cells: Rational,
    /// With the mixture policy on the expanded problem.
    pub val_general_mixture: Rational,
    pub val_general_mixture_by_cells: Rational,
    pub modest_val_good: Rational,
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub trial: u64,
    pub property: Property,
    pub detail: String,
    pub instance: ProblemFile,
}

#[derive(Debug, Clone, Default)]
pub struct PropertyReport {
    pub seed: u64,
    pub trials: u64,
    pub rows: Vec<TrialRow>,
    pub counterexamples: Vec<Counterexample>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn failures(&self, property: Property) -> usize {
        self.counterexamples.iter().filter(|c| c.property == property).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "trial": r.trial,
                    "base_states": r.base_states,
                    "mixture_states": r.mixture_states,
                    "cells": r.cells,
                    "epsilon": crate::rational::format_rational(&r.epsilon),
                    "relevant": r.relevant,
                    "val_good": crate::rational::format_rational(&r.val_good),
                    "val_general_cond": crate::rational::format_rational(&r.val_general_cond),
                    "val_general_mixture": crate::rational::format_rational(&r.val_general_mixture),
                })
            })
            .collect();
        let counterexamples: Vec<_> = self
            .counterexamples
            .iter()
            .map(|c| {
                serde_json::json!({
                    "trial": c.trial,
                    "property": c.property.name(),
                    "detail": c.detail,
                    "instance": serde_json::to_value(&c.instance).expect("problem files serialize"),
                })
            })
            .collect();
        serde_json::json!({
            "seed": self.seed,
            "trials": self.trials,
            "rows": rows,
            "counterexamples": counterexamples,
        })
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {} trials {}", self.seed, self.trials)?;
        for p in Property::ALL {
            let fails = self.failures(p);
            writeln!(f, "{:<7} {:>6} failures  {}", p.name(), fails, if fails == 0 { "ok" } else { "FAIL" })?;
        }
        writeln!(
            f,
            "{:>6} {:>4} {:>4} {:>6} {:>8} {:>10} {:>10} {:>10}",
            "trial", "n", "2n", "cells", "eps", "val_good", "vg_cond", "vg_mix"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>6} {:>4} {:>4} {:>6} {:>8} {:>10} {:>10} {:>10}",
                r.trial,
                r.base_states,
                r.mixture_states,
                r.cells,
                display_rational(&r.epsilon),
                display_rational(&r.val_good),
                display_rational(&r.val_general_cond),
                display_rational(&r.val_general_mixture),
            )?;
        }
        for c in &self.counterexamples {
            writeln!(f, "counterexample: trial {} {}: {}", c.trial, c.property.name(), c.detail)?;
            writeln!(f, "{}", c.instance.to_canonical_json())?;
        }
        Ok(())
    }
}

struct Outcome {
    row: Option<TrialRow>,
    failures: Vec<(Property, String, ProblemFile)>,
}

fn serialize(problem: &DecisionProblem, policy: &UpdatePolicy) -> ProblemFile {
    ProblemFile::from_instance(problem, policy).expect("generated instances serialize")
}

fn run_trial(inst: &Instance, trial: u64) -> Outcome {
    let mut failures = Vec::new();
    let cond = conditionalization_policy(inst.base.prior(), &inst.partition)
        .expect("generated priors are strictly positive");
    let result: Result<TrialRow> = (|| {
        let good = val_good(&inst.base, &inst.partition)?;
        let relevant = is_relevant(&inst.base, &inst.partition)?;
        let vg_cond = val_general(&inst.base, &cond)?;
        let vg_cond_cells = val_general_by_cells(&inst.base, &cond)?;
        let vg_mix = val_general(&inst.mixture, &inst.mixture_policy)?;
        let vg_mix_cells = val_general_by_cells(&inst.mixture, &inst.mixture_policy)?;
        let modest_good = val_good(&inst.mixture, inst.mixture_policy.partition())?;

        let cond_file = || serialize(&inst.base, &cond);
        let mix_file = || serialize(&inst.mixture, &inst.mixture_policy);
        if !is_immodest(&cond, inst.base.prior()) || vg_cond != good {
            failures.push((
                Property::Thm1,
                format!("val_general {} != val_good {}", display_rational(&vg_cond), display_rational(&good)),
                cond_file(),
            ));
        }
        if !check_evidential_independence(&inst.mixture, &inst.mixture_policy)? || vg_mix > modest_good {
            failures.push((
                Property::Thm3,
                format!("val_general {} > val_good {}", display_rational(&vg_mix), display_rational(&modest_good)),
                mix_file(),
            ));
        }
        if good < Rational::zero() || (good > Rational::zero()) != relevant {
            failures.push((
                Property::Good,
                format!("val_good {} with relevant = {relevant}", display_rational(&good)),
                cond_file(),
            ));
        }
        if vg_cond != vg_cond_cells {
            failures.push((
                Property::Lemma1,
                format!("conditionalization: {} != {}", display_rational(&vg_cond), display_rational(&vg_cond_cells)),
                cond_file(),
            ));
        }
        if vg_mix != vg_mix_cells {
            failures.push((
                Property::Lemma1,
                format!("mixture: {} != {}", display_rational(&vg_mix), display_rational(&vg_mix_cells)),
                mix_file(),
            ));
        }
        Ok(TrialRow {
            trial,
            base_states: inst.base.space().len(),
            mixture_states: inst.mixture.space().len(),
            cells: inst.partition.len(),
            epsilon: inst.epsilon.clone(),
            relevant,
            val_good: good,
            val_general_cond: vg_cond,
            val_general_cond_by_cells: vg_cond_cells,
            val_general_mixture: vg_mix,
            val_general_mixture_by_cells: vg_mix_cells,
            modest_val_good: modest_good,
        })
    })();
    match result {
        Ok(row) => Outcome { row: Some(row), failures },
        Err(e) => {
            // An evaluation error is reported against every property it blocks.
            let file = serialize(&inst.mixture, &inst.mixture_policy);
            let failures = Property::ALL
                .iter()
                .map(|&p| (p, format!("evaluation error: {e}"), file.clone()))
                .collect();
            Outcome { row: None, failures }
        }
    }
}

/// Runs `trials` seeded trials in parallel; rows come back in trial order.
pub fn property_suite(seed: u64, trials: u64) -> PropertyReport {
    let outcomes: Vec<(u64, Outcome)> = (0..trials)
        .into_par_iter()
        .map(|t| (t, run_trial(&instance_for_trial(seed, t, false), t)))
        .collect();
    let mut report = PropertyReport {
        seed,
        trials,
        ..Default::default()
    };
    for (trial, outcome) in outcomes {
        report.rows.extend(outcome.row);
        report
            .counterexamples
            .extend(outcome.failures.into_iter().map(|(property, detail, instance)| Counterexample {
                trial,
                property,
                detail,
                instance,
            }));
    }
    report
}
