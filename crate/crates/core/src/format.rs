//! The JSON model document.
//!
//! ```json
//! {
//!   "variables": ["a", "b"],
//!   "contexts": [["a", "b"]],
//!   "possibilistic": [
//!     {"context": ["a", "b"], "events": [[], ["a", "b"]]}
//!   ]
//! }
//! ```
//!
//! A probabilistic document carries `"probabilistic"` instead, with entries
//! `{"context": [...], "distribution": [{"assignment": {"a": 1, "b": 0}, "p": 0.5}]}`.
//! Input order is irrelevant; [`serialize_model`] writes everything in
//! canonical order so equal models produce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::model::{ModelError, PossibilisticModel, Scenario, VarSet};
use crate::probabilistic::ProbabilisticModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
}

fn semantic(path: impl Into<String>, message: impl ToString) -> FormatError {
    FormatError::Semantic { path: path.into(), message: message.to_string() }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelDocument {
    Possibilistic(PossibilisticModel),
    Probabilistic(ProbabilisticModel),
}

impl ModelDocument {
    pub fn scenario(&self) -> &Scenario {
        match self {
            ModelDocument::Possibilistic(m) => m.scenario(),
            ModelDocument::Probabilistic(p) => p.scenario(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    variables: Vec<String>,
    contexts: Vec<Vec<String>>,
    possibilistic: Option<Vec<RawSupport>>,
    probabilistic: Option<Vec<RawDistribution>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSupport {
    context: Vec<String>,
    events: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistribution {
    context: Vec<String>,
    distribution: Vec<RawOutcome>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutcome {
    assignment: BTreeMap<String, u8>,
    p: f64,
}

pub fn parse_model(text: &str) -> Result<ModelDocument, FormatError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let scenario = build_scenario(&raw)?;
    match (raw.possibilistic, raw.probabilistic) {
        (Some(_), Some(_)) => Err(semantic("", "\"possibilistic\" and \"probabilistic\" are mutually exclusive")),
        (None, None) => Err(semantic("", "expected a \"possibilistic\" or \"probabilistic\" section")),
        (Some(entries), None) => {
            let mut supports = BTreeMap::new();
            for (i, entry) in entries.into_iter().enumerate() {
                let path = format!("possibilistic[{i}]");
                let context = resolve_context(&scenario, &entry.context, &path)?;
                let mut events = Vec::with_capacity(entry.events.len());
                for (j, event) in entry.events.iter().enumerate() {
                    let set = scenario.var_set(event).map_err(|e| semantic(format!("{path}.events[{j}]"), e))?;
                    events.push(set);
                }
                events.sort();
                if supports.insert(context, events).is_some() {
                    return Err(semantic(&path, "duplicate entry for context"));
                }
            }
            Ok(ModelDocument::Possibilistic(PossibilisticModel::new(scenario, supports)))
        }
        (None, Some(entries)) => {
            let mut distributions = BTreeMap::new();
            for (i, entry) in entries.into_iter().enumerate() {
                let path = format!("probabilistic[{i}]");
                let context = resolve_context(&scenario, &entry.context, &path)?;
                let mut dist = Vec::with_capacity(entry.distribution.len());
                for (j, outcome) in entry.distribution.iter().enumerate() {
                    let opath = format!("{path}.distribution[{j}].assignment");
                    let domain = scenario.var_set(outcome.assignment.keys()).map_err(|e| semantic(&opath, e))?;
                    if domain != context {
                        return Err(semantic(&opath, "assignment must bind exactly the context's variables"));
                    }
                    let mut ones = VarSet::EMPTY;
                    for (name, &bit) in &outcome.assignment {
                        match bit {
                            0 => {}
                            1 => ones.insert(scenario.index_of(name).expect("resolved above")),
                            other => {
                                return Err(semantic(&opath, format!("outcome {other} for {name:?} is not 0 or 1")))
                            }
                        }
                    }
                    dist.push((ones, outcome.p));
                }
                dist.sort_by_key(|a| a.0);
                if distributions.insert(context, dist).is_some() {
                    return Err(semantic(&path, "duplicate entry for context"));
                }
            }
            Ok(ModelDocument::Probabilistic(ProbabilisticModel::new(scenario, distributions)))
        }
    }
}

fn build_scenario(raw: &RawDocument) -> Result<Scenario, FormatError> {
    for (i, ctx) in raw.contexts.iter().enumerate() {
        if let Some(unknown) = ctx.iter().find(|v| !raw.variables.contains(v)) {
            return Err(semantic(format!("contexts[{i}]"), ModelError::UnknownVariable(unknown.clone())));
        }
    }
    Scenario::new(&raw.variables, &raw.contexts).map_err(|e| {
        let path = match e {
            ModelError::NoVariables
            | ModelError::TooManyVariables(_)
            | ModelError::InvalidName(_)
            | ModelError::DuplicateVariable(_) => "variables".to_owned(),
            ModelError::EmptyContext(i) => format!("contexts[{i}]"),
            _ => "contexts".to_owned(),
        };
        semantic(path, e)
    })
}

fn resolve_context(scenario: &Scenario, names: &[String], path: &str) -> Result<VarSet, FormatError> {
    let set = scenario.var_set(names).map_err(|e| semantic(format!("{path}.context"), e))?;
    if !scenario.has_context(set) {
        return Err(semantic(format!("{path}.context"), format!("{{{}}} is not a cover context", names.join(","))));
    }
    Ok(set)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn name_list(scenario: &Scenario, set: VarSet) -> String {
    let items: Vec<String> = set.iter().map(|i| json_str(scenario.name(i))).collect();
    format!("[{}]", items.join(", "))
}

fn write_header(out: &mut String, scenario: &Scenario) {
    let vars: Vec<String> = scenario.variables().iter().map(|v| json_str(v)).collect();
    let ctxs: Vec<String> = scenario.contexts().iter().map(|&u| name_list(scenario, u)).collect();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"variables\": [{}],", vars.join(", "));
    let _ = writeln!(out, "  \"contexts\": [{}],", ctxs.join(", "));
}

/// Canonical text of a model. Cover contexts without an entry are omitted.
pub fn serialize_model(doc: &ModelDocument) -> String {
    let mut out = String::new();
    let scenario = doc.scenario();
    write_header(&mut out, scenario);
    let lines: Vec<String> = match doc {
        ModelDocument::Possibilistic(m) => {
            out.push_str("  \"possibilistic\": [\n");
            scenario
                .contexts()
                .iter()
                .filter(|u| m.supports().contains_key(u))
                .map(|&u| {
                    let mut events = m.events(u).to_vec();
                    events.sort();
                    let evs: Vec<String> = events.iter().map(|&e| name_list(scenario, e)).collect();
                    format!("    {{\"context\": {}, \"events\": [{}]}}", name_list(scenario, u), evs.join(", "))
                })
                .collect()
        }
        ModelDocument::Probabilistic(p) => {
            out.push_str("  \"probabilistic\": [\n");
            scenario
                .contexts()
                .iter()
                .filter(|u| p.distributions().contains_key(u))
                .map(|&u| {
                    let mut dist = p.distribution(u).to_vec();
                    dist.sort_by_key(|a| a.0);
                    let entries: Vec<String> = dist
                        .iter()
                        .map(|&(ones, pr)| {
                            let bits: Vec<String> = u
                                .iter()
                                .map(|x| format!("{}: {}", json_str(scenario.name(x)), u8::from(ones.contains(x))))
                                .collect();
                            format!(
                                "{{\"assignment\": {{{}}}, \"p\": {}}}",
                                bits.join(", "),
                                serde_json::to_string(&pr).expect("floats always serialize")
                            )
                        })
                        .collect();
                    format!(
                        "    {{\"context\": {}, \"distribution\": [\n      {}\n    ]}}",
                        name_list(scenario, u),
                        entries.join(",\n      ")
                    )
                })
                .collect()
        }
    };
    out.push_str(&lines.join(",\n"));
    out.push_str("\n  ]\n}\n");
    out
}
