//! Scenarios, assignments and possibilistic (binary) empirical models.
//!
//! Variables are identified by their index in the scenario's sorted variable
//! list, and every subset of variables is a [`VarSet`] bitmask. A context, an
//! event (the variables with outcome 1) and the support of an assignment are
//! all `VarSet`s.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest number of variables a scenario may carry.
pub const MAX_VARIABLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("scenario has no variables")]
    NoVariables,
    #[error("scenario has {0} variables, at most {MAX_VARIABLES} are supported")]
    TooManyVariables(usize),
    #[error("invalid variable name {0:?}")]
    InvalidName(String),
    #[error("duplicate variable {0:?}")]
    DuplicateVariable(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("scenario has no contexts")]
    NoContexts,
    #[error("context {0} is empty")]
    EmptyContext(usize),
    #[error("duplicate context {{{0}}}")]
    DuplicateContext(String),
    #[error("variable {0:?} occurs in no context")]
    UncoveredVariable(String),
    #[error("variable {0:?} is not bound by the assignment")]
    UnboundVariable(String),
    #[error("unknown context {{{0}}}")]
    UnknownContext(String),
    #[error("variable {variable:?} is not in context {{{context}}}")]
    VariableNotInContext { variable: String, context: String },
}

/// A subset of a scenario's variables, bit `i` standing for variable `i`.
///
/// The ordering is the canonical one used everywhere output is sorted:
/// smaller sets first, then sets of equal size by their sorted index tuples.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VarSet(u64);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VarSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        VarSet(1 << index)
    }

    /// The first `n` variables.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VarSet(u64::MAX)
        } else {
            VarSet((1u64 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 & (1 << index) != 0
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> VarSet {
        VarSet(self.0 & other.0)
    }

    pub fn difference(self, other: VarSet) -> VarSet {
        VarSet(self.0 & !other.0)
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// Every subset of `self`, in canonical order.
    pub fn subsets(self) -> Vec<VarSet> {
        let members: Vec<usize> = self.iter().collect();
        let mut out: Vec<VarSet> = (0u64..1 << members.len())
            .map(|k| {
                let mut s = VarSet::EMPTY;
                for (j, &m) in members.iter().enumerate() {
                    if k & (1 << j) != 0 {
                        s.insert(m);
                    }
                }
                s
            })
            .collect();
        out.sort();
        out
    }
}

impl FromIterator<usize> for VarSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VarSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl Ord for VarSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            if self.0 == other.0 {
                Ordering::Equal
            } else {
                // Equal sizes: the lowest index where they differ decides.
                let low = (self.0 ^ other.0).trailing_zeros();
                if self.0 & (1 << low) != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        })
    }
}

impl PartialOrd for VarSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Returns true for identifiers of the form `[A-Za-z_][A-Za-z0-9_']*`.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Variables plus a cover of contexts (the feasible menus or experiments).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    variables: Vec<String>,
    contexts: Vec<VarSet>,
}

impl Scenario {
    /// Builds a scenario, sorting variables and contexts canonically.
    pub fn new<S, C, V>(variables: V, contexts: C) -> Result<Self, ModelError>
    where
        S: AsRef<str>,
        V: IntoIterator<Item = S>,
        C: IntoIterator,
        C::Item: IntoIterator,
        <C::Item as IntoIterator>::Item: AsRef<str>,
    {
        let mut vars: Vec<String> = variables.into_iter().map(|s| s.as_ref().to_owned()).collect();
        if vars.is_empty() {
            return Err(ModelError::NoVariables);
        }
        if vars.len() > MAX_VARIABLES {
            return Err(ModelError::TooManyVariables(vars.len()));
        }
        if let Some(bad) = vars.iter().find(|v| !is_valid_name(v)) {
            return Err(ModelError::InvalidName(bad.clone()));
        }
        vars.sort();
        if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateVariable(w[0].clone()));
        }

        let mut scenario = Scenario { variables: vars, contexts: Vec::new() };
        let mut cover = Vec::new();
        for (i, ctx) in contexts.into_iter().enumerate() {
            let set = scenario.var_set(ctx)?;
            if set.is_empty() {
                return Err(ModelError::EmptyContext(i));
            }
            cover.push(set);
        }
        if cover.is_empty() {
            return Err(ModelError::NoContexts);
        }
        cover.sort();
        if let Some(w) = cover.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateContext(scenario.format_set(w[0])));
        }
        let covered = cover.iter().fold(VarSet::EMPTY, |acc, c| acc.union(*c));
        if let Some(missing) = VarSet::full(scenario.variables.len()).difference(covered).iter().next() {
            return Err(ModelError::UncoveredVariable(scenario.variables[missing].clone()));
        }
        scenario.contexts = cover;
        Ok(scenario)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// The cover, in canonical order.
    pub fn contexts(&self) -> &[VarSet] {
        &self.contexts
    }

    pub fn all_variables(&self) -> VarSet {
        VarSet::full(self.variables.len())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.variables[index]
    }

    pub fn has_context(&self, context: VarSet) -> bool {
        self.contexts.binary_search(&context).is_ok()
    }

    /// Resolves variable names to a set.
    pub fn var_set<I>(&self, names: I) -> Result<VarSet, ModelError>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        names
            .into_iter()
            .map(|n| {
                let n = n.as_ref();
                self.index_of(n).ok_or_else(|| ModelError::UnknownVariable(n.to_owned()))
            })
            .collect()
    }

    pub fn names(&self, set: VarSet) -> Vec<String> {
        set.iter().map(|i| self.variables[i].clone()).collect()
    }

    /// `a,b'` style rendering used in messages.
    pub fn format_set(&self, set: VarSet) -> String {
        self.names(set).join(",")
    }
}

/// A partial or total 0/1 assignment to a scenario's variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    domain: VarSet,
    ones: VarSet,
}

impl Assignment {
    /// Binds every variable of `domain`, those in `ones` to 1. Variables of
    /// `ones` outside the domain are dropped.
    pub fn new(domain: VarSet, ones: VarSet) -> Self {
        Assignment { domain, ones: ones.intersection(domain) }
    }

    pub fn total(scenario: &Scenario, ones: VarSet) -> Self {
        Assignment::new(scenario.all_variables(), ones)
    }

    /// Builds an assignment from `(name, bit)` pairs.
    pub fn from_pairs<S: AsRef<str>>(scenario: &Scenario, pairs: &[(S, u8)]) -> Result<Self, ModelError> {
        let mut domain = VarSet::EMPTY;
        let mut ones = VarSet::EMPTY;
        for (name, bit) in pairs {
            let name = name.as_ref();
            let i = scenario.index_of(name).ok_or_else(|| ModelError::UnknownVariable(name.to_owned()))?;
            domain.insert(i);
            if *bit != 0 {
                ones.insert(i);
            }
        }
        Ok(Assignment { domain, ones })
    }

    pub fn domain(&self) -> VarSet {
        self.domain
    }

    pub fn value(&self, index: usize) -> Option<bool> {
        self.domain.contains(index).then(|| self.ones.contains(index))
    }

    /// Restriction to `vars`, which must lie inside the domain.
    pub fn restrict(&self, vars: VarSet, scenario: &Scenario) -> Result<Assignment, ModelError> {
        match vars.difference(self.domain).iter().next() {
            Some(i) => Err(ModelError::UnboundVariable(scenario.name(i).to_owned())),
            None => Ok(Assignment { domain: vars, ones: self.ones.intersection(vars) }),
        }
    }

    /// The variables mapped to 1.
    pub fn support(&self) -> VarSet {
        self.ones
    }
}

/// A binary empirical model: for each context the events that can occur,
/// each event listing the variables with outcome 1.
///
/// Construction does not enforce well-formedness; see [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibilisticModel {
    scenario: Scenario,
    supports: BTreeMap<VarSet, Vec<VarSet>>,
}

impl PossibilisticModel {
    pub fn new(scenario: Scenario, supports: BTreeMap<VarSet, Vec<VarSet>>) -> Self {
        PossibilisticModel { scenario, supports }
    }

    /// Builds a model from named events, one entry per context. Contexts and
    /// events are resolved against the scenario; events are canonically sorted.
    pub fn from_named(scenario: Scenario, entries: Vec<(Vec<&str>, Vec<Vec<&str>>)>) -> Result<Self, ModelError> {
        let mut supports = BTreeMap::new();
        for (ctx, events) in entries {
            let context = scenario.var_set(ctx)?;
            let mut evs = events.into_iter().map(|e| scenario.var_set(e)).collect::<Result<Vec<_>, _>>()?;
            evs.sort();
            supports.insert(context, evs);
        }
        Ok(PossibilisticModel { scenario, supports })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn supports(&self) -> &BTreeMap<VarSet, Vec<VarSet>> {
        &self.supports
    }

    /// The events of `context`; empty when the context has no entry.
    pub fn events(&self, context: VarSet) -> &[VarSet] {
        self.supports.get(&context).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Union of the events of `context`: the variables chosen there.
    pub fn chosen_set(&self, context: VarSet) -> VarSet {
        self.events(context).iter().fold(VarSet::EMPTY, |acc, e| acc.union(*e))
    }

    /// The choice function of `context` evaluated at `variable`.
    pub fn chosen(&self, variable: usize, context: VarSet) -> Result<bool, ModelError> {
        let events = self
            .supports
            .get(&context)
            .filter(|_| self.scenario.has_context(context))
            .ok_or_else(|| ModelError::UnknownContext(self.scenario.format_set(context)))?;
        if !context.contains(variable) {
            return Err(ModelError::VariableNotInContext {
                variable: self.scenario.name(variable).to_owned(),
                context: self.scenario.format_set(context),
            });
        }
        Ok(events.iter().any(|e| e.contains(variable)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Holds,
    Fails,
}

/// The objects a failed check points at, by name.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Witness {
    pub contexts: Vec<Vec<String>>,
    pub variables: Vec<String>,
    pub events: Vec<Vec<String>>,
}

/// Outcome of a check. A witness is present exactly when the check fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub narrative: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn holds(narrative: impl Into<String>) -> Self {
        Verdict { status: Status::Holds, witness: None, narrative: narrative.into(), warnings: Vec::new() }
    }

    pub fn fails(witness: Witness, narrative: impl Into<String>) -> Self {
        Verdict { status: Status::Fails, witness: Some(witness), narrative: narrative.into(), warnings: Vec::new() }
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }
}

/// Checks the structural invariants of a model: one entry per cover context,
/// every event inside its context, no repeated events. Empty supports pass
/// with a warning.
pub fn validate(m: &PossibilisticModel) -> Verdict {
    let s = &m.scenario;
    let mut warnings = Vec::new();
    for &context in s.contexts() {
        let Some(events) = m.supports.get(&context) else {
            return Verdict::fails(
                Witness { contexts: vec![s.names(context)], ..Witness::default() },
                format!("no support entry for context {{{}}}", s.format_set(context)),
            );
        };
        for (k, &event) in events.iter().enumerate() {
            if !event.is_subset(context) {
                return Verdict::fails(
                    Witness {
                        contexts: vec![s.names(context)],
                        variables: s.names(event.difference(context)),
                        events: vec![s.names(event)],
                    },
                    format!(
                        "event {{{}}} is not a subset of context {{{}}}",
                        s.format_set(event),
                        s.format_set(context)
                    ),
                );
            }
            if events[..k].contains(&event) {
                return Verdict::fails(
                    Witness { contexts: vec![s.names(context)], events: vec![s.names(event)], ..Witness::default() },
                    format!("event {{{}}} repeated in context {{{}}}", s.format_set(event), s.format_set(context)),
                );
            }
        }
        if events.is_empty() {
            warnings.push(format!(
                "context {{{}}} has an empty support; no global section can exist",
                s.format_set(context)
            ));
        }
    }
    if let Some(&extra) = m.supports.keys().find(|c| !s.has_context(**c)) {
        return Verdict::fails(
            Witness { contexts: vec![s.names(extra)], ..Witness::default() },
            format!("support entry for {{{}}}, which is not a cover context", s.format_set(extra)),
        );
    }
    Verdict::holds("model is well formed").with_warnings(warnings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn abcd() -> Scenario {
        Scenario::new(["a", "b", "c", "d"], [["a", "b", "c", "d"]]).unwrap()
    }

    #[test]
    fn restriction_worked_example() {
        let s = abcd();
        let a = Assignment::from_pairs(&s, &[("a", 1), ("b", 1), ("c", 0), ("d", 0)]).unwrap();
        let u = s.var_set(["a", "b", "d"]).unwrap();
        let r = a.restrict(u, &s).unwrap();
        assert_eq!(r, Assignment::from_pairs(&s, &[("a", 1), ("b", 1), ("d", 0)]).unwrap());
        assert_eq!(r.support(), s.var_set(["a", "b"]).unwrap());
    }

    #[test]
    fn restriction_edge_cases() {
        let s = abcd();
        let a = Assignment::from_pairs(&s, &[("a", 1)]).unwrap();
        assert_eq!(a.restrict(a.domain(), &s).unwrap(), a);

        let a = Assignment::from_pairs(&s, &[("a", 0), ("b", 1)]).unwrap();
        let empty = a.restrict(VarSet::EMPTY, &s).unwrap();
        assert!(empty.domain().is_empty() && empty.support().is_empty());

        let err = a.restrict(s.var_set(["a", "c"]).unwrap(), &s).unwrap_err();
        assert_eq!(err, ModelError::UnboundVariable("c".into()));
    }

    #[test]
    fn support_edge_cases() {
        let s = abcd();
        let zeros = Assignment::total(&s, VarSet::EMPTY);
        assert!(zeros.support().is_empty());
        let ab = s.var_set(["a", "b"]).unwrap();
        assert_eq!(Assignment::new(ab, ab).support(), ab);
    }

    #[test]
    fn scenario_canonicalises_and_rejects() {
        let s = Scenario::new(["b'", "a", "b", "a'"], [["b'", "a'"], ["b", "a"]]).unwrap();
        assert_eq!(s.variables(), ["a", "a'", "b", "b'"]);
        assert_eq!(s.format_set(s.contexts()[0]), "a,b");

        assert_eq!(Scenario::new(Vec::<&str>::new(), [["a"]]), Err(ModelError::NoVariables));
        assert!(matches!(Scenario::new(["a", "b"], [["a", "b"], ["b", "a"]]), Err(ModelError::DuplicateContext(_))));
        assert_eq!(Scenario::new(["a", "b"], [["a"]]), Err(ModelError::UncoveredVariable("b".into())));
        assert_eq!(Scenario::new(["a"], [Vec::<&str>::new()]), Err(ModelError::EmptyContext(0)));
        assert_eq!(Scenario::new(["a", "1x"], [["a"]]), Err(ModelError::InvalidName("1x".into())));
        assert_eq!(Scenario::new(["a"], [["z"]]), Err(ModelError::UnknownVariable("z".into())));
    }

    #[test]
    fn canonical_order_is_shortlex() {
        let mut sets = [
            VarSet::from_iter([0, 1]),
            VarSet::from_iter([1]),
            VarSet::EMPTY,
            VarSet::from_iter([0, 2]),
            VarSet::from_iter([0]),
            VarSet::from_iter([1, 2]),
        ];
        sets.sort();
        let tuples: Vec<Vec<usize>> = sets.iter().map(|s| s.iter().collect()).collect();
        assert_eq!(tuples, vec![vec![], vec![0], vec![1], vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn chosen_on_empty_event_only() {
        let s = Scenario::new(["a", "b"], [["a", "b"]]).unwrap();
        let m = PossibilisticModel::from_named(s, vec![(vec!["a", "b"], vec![vec![]])]).unwrap();
        let u = m.scenario().contexts()[0];
        assert!(!m.chosen(0, u).unwrap());
        assert!(!m.chosen(1, u).unwrap());
    }

    #[test]
    fn chosen_errors() {
        let s = Scenario::new(["a", "b", "c"], [vec!["a", "b"], vec!["c"]]).unwrap();
        let m = PossibilisticModel::from_named(s, vec![(vec!["a", "b"], vec![vec!["a"]]), (vec!["c"], vec![vec![]])])
            .unwrap();
        let ab = m.scenario().var_set(["a", "b"]).unwrap();
        assert!(matches!(m.chosen(2, ab), Err(ModelError::VariableNotInContext { .. })));
        assert!(matches!(m.chosen(0, VarSet::from_iter([0])), Err(ModelError::UnknownContext(_))));
    }

    #[test]
    fn validate_detects_defects() {
        let s = Scenario::new(["a", "b", "c"], [vec!["a", "b"], vec!["c"]]).unwrap();
        let bad_event = PossibilisticModel::from_named(
            s.clone(),
            vec![(vec!["a", "b"], vec![vec!["c"]]), (vec!["c"], vec![vec!["c"]])],
        )
        .unwrap();
        let v = validate(&bad_event);
        assert_eq!(v.status, Status::Fails);
        assert_eq!(v.witness.unwrap().variables, ["c"]);

        let missing = PossibilisticModel::from_named(s.clone(), vec![(vec!["c"], vec![vec!["c"]])]).unwrap();
        assert_eq!(validate(&missing).status, Status::Fails);

        let mut supports = BTreeMap::new();
        supports.insert(s.contexts()[0], vec![VarSet::EMPTY, VarSet::EMPTY]);
        supports.insert(s.contexts()[1], vec![]);
        let v = validate(&PossibilisticModel::new(s.clone(), supports.clone()));
        assert_eq!(v.status, Status::Fails);

        supports.insert(s.contexts()[0], vec![VarSet::EMPTY]);
        let v = validate(&PossibilisticModel::new(s, supports));
        assert!(v.is_holds());
        assert_eq!(v.warnings.len(), 1);
    }

    proptest! {
        #[test]
        fn support_of_restriction_is_intersection(domain in any::<u16>(), ones in any::<u16>(), sub in any::<u16>()) {
            let s = Scenario::new((0..16).map(|i| format!("v{i:02}")), [(0..16).map(|i| format!("v{i:02}")).collect::<Vec<_>>()]).unwrap();
            let domain = VarSet::from_bits(domain as u64);
            let a = Assignment::new(domain, VarSet::from_bits(ones as u64));
            let v = VarSet::from_bits(sub as u64).intersection(domain);
            let r = a.restrict(v, &s).unwrap();
            prop_assert_eq!(r.support(), a.support().intersection(v));
            let w = VarSet::from_bits((sub as u64) >> 3).intersection(v);
            prop_assert_eq!(r.restrict(w, &s).unwrap(), a.restrict(w, &s).unwrap());
        }

        #[test]
        fn chosen_matches_union_of_events(events in proptest::collection::vec(0u64..8, 0..6), x in 0usize..3) {
            let s = Scenario::new(["a", "b", "c"], [["a", "b", "c"]]).unwrap();
            let u = s.contexts()[0];
            let mut evs: Vec<VarSet> = events.into_iter().map(VarSet::from_bits).collect();
            evs.sort();
            evs.dedup();
            let union = evs.iter().fold(VarSet::EMPTY, |a, e| a.union(*e));
            let m = PossibilisticModel::new(s, BTreeMap::from([(u, evs)]));
            prop_assert_eq!(m.chosen(x, u).unwrap(), union.contains(x));
        }
    }
}
