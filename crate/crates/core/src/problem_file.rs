//! JSON problem files.
//!
//! ```json
//! {
//!   "actions": [{"id": "safe", "map": {"s1": "zero", "s2": "zero"}}],
//!   "outcomes": [{"id": "zero", "utility": "0/1"}],
//!   "partition": [["s1"], ["s2"]],
//!   "policy": "conditionalization",
//!   "states": [{"id": "s1", "prob": "1/2"}, {"id": "s2", "prob": "1/2"}]
//! }
//! ```
//!
//! `policy` is either the string `"conditionalization"` or a list of
//! `{"state": id, "posterior": {id: prob}}` entries. Every number is a
//! lowest-terms `num/den` string. Canonical output sorts object keys, lists
//! states, outcomes and actions in model order, lists cell members in state
//! order, and omits zero posterior masses.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adversary::AversionCertificate;
use crate::decision::{Action, ChoiceSet, DecisionProblem, OutcomeSpace};
use crate::error::{Error, Result};
use crate::prob::{Credence, Event, StateSpace};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::update::{conditionalization_policy, BaseProjection, EvidencePartition, UpdatePolicy};

pub const CONDITIONALIZATION: &str = "conditionalization";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub id: String,
    pub prob: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeEntry {
    pub id: String,
    pub utility: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    pub id: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosteriorEntry {
    pub state: String,
    pub posterior: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolicyEntry {
    Named(String),
    Posteriors(Vec<PosteriorEntry>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateEntry {
    pub cell: Vec<String>,
    pub state: String,
    pub event: Vec<String>,
    pub q: String,
    pub r: String,
    pub bet_on: String,
    pub a: String,
    pub b: String,
    pub val_general: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub states: Vec<StateEntry>,
    pub outcomes: Vec<OutcomeEntry>,
    pub actions: Vec<ActionEntry>,
    pub partition: Vec<Vec<String>>,
    pub policy: PolicyEntry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateEntry>,
}

fn field_error(context: impl Into<String>, err: Error) -> Error {
    Error::Format {
        context: context.into(),
        message: err.to_string(),
    }
}

fn parse_field(context: impl Fn() -> String, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| field_error(context(), e))
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format {
            context: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    /// Canonical, byte-stable rendering (sorted keys, trailing newline).
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("problem files serialize");
        let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
        text.push('\n');
        text
    }

    /// Validates the file and builds the model it describes.
    pub fn to_instance(&self) -> Result<(DecisionProblem, EvidencePartition, UpdatePolicy)> {
        let space = StateSpace::new(self.states.iter().map(|s| s.id.clone())).map_err(|e| field_error("states", e))?;
        let masses = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| parse_field(|| format!("states[{i}].prob"), &s.prob))
            .collect::<Result<Vec<_>>>()?;
        let prior = Credence::new(&space, masses).map_err(|e| match e {
            Error::InvalidCredence(m) => Error::InvalidCredence(format!("states: {m}")),
            other => other,
        })?;

        let utilities = self
            .outcomes
            .iter()
            .enumerate()
            .map(|(i, o)| Ok((o.id.clone(), parse_field(|| format!("outcomes[{i}].utility"), &o.utility)?)))
            .collect::<Result<Vec<_>>>()?;
        let outcomes = OutcomeSpace::new(utilities).map_err(|e| field_error("outcomes", e))?;

        let actions = self
            .actions
            .iter()
            .enumerate()
            .map(|(i, a)| Action::new(a.id.clone(), &space, &outcomes, &a.map).map_err(|e| field_error(format!("actions[{i}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        let choice_set = ChoiceSet::new(actions).map_err(|e| field_error("actions", e))?;
        let problem = DecisionProblem::new(Arc::clone(&space), outcomes, prior, choice_set)?;

        let cells = self
            .partition
            .iter()
            .enumerate()
            .map(|(c, ids)| Event::from_ids(&space, ids).map_err(|e| field_error(format!("partition[{c}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        let partition = EvidencePartition::new(&space, cells)?;
        partition.check_positive(problem.prior())?;

        let policy = parse_policy(&self.policy, problem.prior(), &partition)?;
        Ok((problem, partition, policy))
    }

    pub fn from_instance(problem: &DecisionProblem, policy: &UpdatePolicy) -> Result<Self> {
        let space = problem.space();
        let outcomes = problem.outcomes();
        let states = space
            .ids()
            .iter()
            .zip(problem.prior().masses())
            .map(|(id, m)| StateEntry {
                id: id.clone(),
                prob: format_rational(m),
            })
            .collect();
        let outcome_entries = (0..outcomes.len())
            .map(|o| OutcomeEntry {
                id: outcomes.id(o).to_string(),
                utility: format_rational(outcomes.utility(o)),
            })
            .collect();
        let actions = problem
            .choice_set()
            .actions()
            .iter()
            .map(|a| ActionEntry {
                id: a.id().to_string(),
                map: (0..space.len())
                    .map(|s| (space.id(s).to_string(), outcomes.id(a.outcome_at(s)).to_string()))
                    .collect(),
            })
            .collect();
        let partition = policy
            .partition()
            .cells()
            .iter()
            .map(|c| c.member_ids().into_iter().map(String::from).collect())
            .collect();
        Ok(ProblemFile {
            states,
            outcomes: outcome_entries,
            actions,
            partition,
            policy: policy_entry(problem.prior(), policy)?,
            certificate: None,
        })
    }

    pub fn from_certificate(cert: &AversionCertificate, policy: &UpdatePolicy) -> Result<Self> {
        let mut file = ProblemFile::from_instance(&cert.problem, policy)?;
        let dev = &cert.deviation;
        let ids = |e: &Event| e.member_ids().into_iter().map(String::from).collect();
        file.certificate = Some(CertificateEntry {
            cell: ids(&dev.cell_event),
            state: cert.problem.space().id(dev.state).to_string(),
            event: ids(&dev.event),
            q: format_rational(&dev.q),
            r: format_rational(&dev.r),
            bet_on: if cert.bet.on_complement { "complement" } else { "event" }.into(),
            a: format_rational(&cert.bet.win),
            b: format_rational(&cert.bet.loss),
            val_general: format_rational(&cert.val_general),
        });
        Ok(file)
    }
}

/// Interprets a `policy` field against a validated prior and partition.
pub fn parse_policy(entry: &PolicyEntry, prior: &Credence, partition: &EvidencePartition) -> Result<UpdatePolicy> {
    match entry {
        PolicyEntry::Named(name) if name == CONDITIONALIZATION => conditionalization_policy(prior, partition),
        PolicyEntry::Named(name) => Err(Error::Format {
            context: "policy".into(),
            message: format!("unknown policy `{name}`; expected `{CONDITIONALIZATION}` or a list of posteriors"),
        }),
        PolicyEntry::Posteriors(entries) => {
            let space = prior.space();
            let mut posteriors: Vec<Option<Arc<Credence>>> = vec![None; space.len()];
            let mut seen = HashSet::new();
            for (i, entry) in entries.iter().enumerate() {
                let s = space.require(&entry.state).map_err(|e| field_error(format!("policy[{i}].state"), e))?;
                if !seen.insert(s) {
                    return Err(Error::Format {
                        context: format!("policy[{i}].state"),
                        message: format!("state `{}` listed twice", entry.state),
                    });
                }
                let pairs = entry
                    .posterior
                    .iter()
                    .map(|(id, m)| Ok((id.as_str(), parse_field(|| format!("policy[{i}].posterior.{id}"), m)?)))
                    .collect::<Result<Vec<_>>>()?;
                let post = Credence::from_pairs(space, pairs).map_err(|e| match e {
                    Error::InvalidCredence(m) => Error::InvalidCredence(format!("policy[{i}].posterior: {m}")),
                    other => field_error(format!("policy[{i}].posterior"), other),
                })?;
                posteriors[s] = Some(Arc::new(post));
            }
            let policy = UpdatePolicy::new(prior, partition.clone(), posteriors)?;
            Ok(match BaseProjection::infer(space) {
                Some(base) => policy.with_base(base),
                None => policy,
            })
        }
    }
}

/// Renders a policy, using the `conditionalization` literal whenever every
/// state carries exactly its conditioned posterior.
pub fn policy_entry(prior: &Credence, policy: &UpdatePolicy) -> Result<PolicyEntry> {
    let partition = policy.partition();
    let conditioned = partition
        .cells()
        .iter()
        .map(|c| prior.condition(c))
        .collect::<Result<Vec<_>>>()?;
    let space = prior.space();
    let is_conditionalization =
        (0..space.len()).all(|s| policy.posterior(s) == Some(&conditioned[partition.cell_of(s)]));
    if is_conditionalization {
        return Ok(PolicyEntry::Named(CONDITIONALIZATION.into()));
    }
    Ok(PolicyEntry::Posteriors(
        (0..space.len())
            .filter_map(|s| {
                policy.posterior(s).map(|post| PosteriorEntry {
                    state: space.id(s).to_string(),
                    posterior: post
                        .support()
                        .map(|t| (space.id(t).to_string(), format_rational(post.mass(t))))
                        .collect(),
                })
            })
            .collect(),
    ))
}

fn io_error(path: &Path, err: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: err.to_string(),
    }
}

pub fn read_file(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    ProblemFile::from_json(&text).map_err(|e| match e {
        Error::Format { context, message } => Error::Format {
            context: format!("{}: {context}", path.display()),
            message,
        },
        other => other,
    })
}

/// Reads a policy from `source`: either the literal `conditionalization` or a
/// JSON file whose top-level `policy` key holds a policy entry.
pub fn read_policy(source: &str, prior: &Credence, partition: &EvidencePartition) -> Result<UpdatePolicy> {
    if source == CONDITIONALIZATION {
        return conditionalization_policy(prior, partition);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let format = |context: String, message: String| Error::Format {
        context: format!("{}: {context}", path.display()),
        message,
    };
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| format(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    let entry = value
        .get_mut("policy")
        .map(serde_json::Value::take)
        .ok_or_else(|| format("policy".into(), "missing top-level `policy` key".into()))?;
    let entry: PolicyEntry = serde_json::from_value(entry).map_err(|e| format("policy".into(), e.to_string()))?;
    parse_policy(&entry, prior, partition)
}

pub fn load_problem(path: &Path) -> Result<(DecisionProblem, EvidencePartition, UpdatePolicy)> {
    read_file(path)?.to_instance()
}

pub fn save_problem(path: &Path, problem: &DecisionProblem, policy: &UpdatePolicy) -> Result<()> {
    write_text(path, &ProblemFile::from_instance(problem, policy)?.to_canonical_json())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::scenarios::{scenario_gamblers, scenario_race};

    const MINIMAL: &str = r#"{
        "states": [{"id": "a", "prob": "1/2"}, {"id": "b", "prob": "1/2"}],
        "outcomes": [{"id": "zero", "utility": "0/1"}, {"id": "one", "utility": "1/1"}],
        "actions": [{"id": "safe", "map": {"a": "zero", "b": "zero"}},
                    {"id": "bet", "map": {"a": "one", "b": "zero"}}],
        "partition": [["a"], ["b"]],
        "policy": "conditionalization"
    }"#;

    fn with(field: &str, value: &str) -> String {
        let mut v: serde_json::Value = serde_json::from_str(MINIMAL).unwrap();
        v[field] = serde_json::from_str(value).unwrap();
        v.to_string()
    }

    fn load(text: &str) -> Result<(DecisionProblem, EvidencePartition, UpdatePolicy)> {
        ProblemFile::from_json(text)?.to_instance()
    }

    #[test]
    fn loads_minimal_file() {
        let (problem, partition, policy) = load(MINIMAL).unwrap();
        assert_eq!(problem.choice_set().len(), 2);
        assert_eq!(partition.len(), 2);
        assert_eq!(policy.posterior(0).unwrap().mass(0), &rat(1, 1));
    }

    #[test]
    fn gamblers_round_trip() {
        let sc = scenario_gamblers(&rat(1, 10)).unwrap();
        let file = ProblemFile::from_instance(&sc.problem, &sc.policy).unwrap();
        let text = file.to_canonical_json();
        let (problem, partition, policy) = load(&text).unwrap();
        assert_eq!(problem, sc.problem);
        assert_eq!(partition, *sc.partition());
        assert_eq!(policy, sc.policy);
        assert_eq!(ProblemFile::from_instance(&problem, &policy).unwrap().to_canonical_json(), text);
    }

    #[test]
    fn loaded_mixture_recovers_base_states() {
        let sc = scenario_gamblers(&rat(1, 10)).unwrap();
        let text = ProblemFile::from_instance(&sc.problem, &sc.policy).unwrap().to_canonical_json();
        let (problem, _, policy) = load(&text).unwrap();
        assert_eq!(policy.base(), sc.policy.base());
        let dev = crate::adversary::find_deviation(problem.prior(), &policy).unwrap();
        assert_eq!((dev.q, dev.r), (rat(9, 10), rat(1, 2)));
    }

    #[test]
    fn conditionalization_is_written_as_literal() {
        let sc = scenario_race();
        let file = ProblemFile::from_instance(&sc.problem, &sc.policy).unwrap();
        assert_eq!(file.policy, PolicyEntry::Named(CONDITIONALIZATION.into()));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = ProblemFile::from_json("{\n  \"states\": [\n  oops").unwrap_err();
        assert!(matches!(err, Error::Format { ref context, .. } if context.starts_with("line 3")), "{err}");
    }

    #[test]
    fn decimal_probabilities_are_rejected() {
        let text = with("states", r#"[{"id": "a", "prob": "0.5"}, {"id": "b", "prob": "1/2"}]"#);
        let err = load(&text).unwrap_err();
        assert!(matches!(err, Error::Format { ref context, .. } if context == "states[0].prob"), "{err}");
    }

    #[test]
    fn unnormalized_prior() {
        let text = with("states", r#"[{"id": "a", "prob": "1/2"}, {"id": "b", "prob": "1/3"}]"#);
        assert!(matches!(load(&text), Err(Error::InvalidCredence(m)) if m.starts_with("states")));
    }

    #[test]
    fn zero_probability_cell_is_a_partition_error() {
        let text = with("states", r#"[{"id": "a", "prob": "1/1"}, {"id": "b", "prob": "0/1"}]"#);
        assert!(matches!(load(&text), Err(Error::Partition(m)) if m.contains("probability 0")));
    }

    #[test]
    fn overlapping_cells() {
        let text = with("partition", r#"[["a", "b"], ["b"]]"#);
        assert!(matches!(load(&text), Err(Error::Partition(_))));
    }

    #[test]
    fn posterior_outside_its_cell() {
        let text = with(
            "policy",
            r#"[{"state": "a", "posterior": {"a": "1/2", "b": "1/2"}},
                {"state": "b", "posterior": {"b": "1/1"}}]"#,
        );
        let err = load(&text).unwrap_err();
        assert!(matches!(err, Error::Certainty { ref state, ref outside } if state == "a" && outside == "1/2"));
        assert!(err.to_string().contains("P_E(ω)(E) = 1"));
    }

    #[test]
    fn unknown_fields_and_policies() {
        let mut v: serde_json::Value = serde_json::from_str(MINIMAL).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(matches!(load(&v.to_string()), Err(Error::Format { .. })));
        assert!(matches!(load(&with("policy", r#""jeffrey""#)), Err(Error::Format { .. })));
    }

    #[test]
    fn missing_action_entry() {
        let text = with("actions", r#"[{"id": "safe", "map": {"a": "zero"}}]"#);
        assert!(matches!(load(&text), Err(Error::Format { ref context, .. }) if context == "actions[0]"));
    }
}
