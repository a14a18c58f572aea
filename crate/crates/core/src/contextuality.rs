//! Global sections and the contextuality classification.
//!
//! A global section is a total assignment whose restriction to every context
//! has its support among that context's events. Two enumerators are provided:
//! an exhaustive one that tries all `2^n` assignments, used as an oracle, and
//! a backtracking search that checks each context as soon as its last
//! variable is fixed.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Assignment, PossibilisticModel, VarSet};

/// Default variable bound for exhaustive enumeration.
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("{variables} variables exceed the exhaustive bound of {bound}")]
    TooLarge { variables: usize, bound: usize },
    #[error("assignment domain does not cover exactly the scenario's variables")]
    DomainMismatch,
}

/// The search ran out of time before finishing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search budget exhausted after {sections_found} global sections")]
pub struct Interrupted {
    pub sections_found: u64,
}

/// Whether `a` is a global section of `m`.
pub fn is_global_section(a: &Assignment, m: &PossibilisticModel) -> Result<bool, SearchError> {
    let scenario = m.scenario();
    if a.domain() != scenario.all_variables() {
        return Err(SearchError::DomainMismatch);
    }
    Ok(scenario.contexts().iter().all(|&u| m.events(u).contains(&a.support().intersection(u))))
}

/// All global sections by trying every total assignment, in binary counting
/// order (variable 0 is the lowest bit).
pub fn global_sections_bruteforce(m: &PossibilisticModel, bound: usize) -> Result<Vec<Assignment>, SearchError> {
    let scenario = m.scenario();
    let n = scenario.variables().len();
    if n > bound || n >= 64 {
        return Err(SearchError::TooLarge { variables: n, bound });
    }
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << n) {
        let a = Assignment::total(scenario, VarSet::from_bits(bits));
        if is_global_section(&a, m)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// All global sections by backtracking, in the same order as
/// [`global_sections_bruteforce`].
pub fn global_sections_backtracking(m: &PossibilisticModel) -> Vec<Assignment> {
    let mut bits = Vec::new();
    SectionSearch::new(m).run(|ones| bits.push(ones.bits())).expect("no deadline was set");
    bits.sort_unstable();
    bits.into_iter().map(|b| Assignment::total(m.scenario(), VarSet::from_bits(b))).collect()
}

/// Depth-first search over assignments in variable order. A context is
/// checked at the depth where its highest-indexed variable is fixed.
pub struct SectionSearch {
    n: usize,
    // checks[i]: contexts completed by fixing variable i, with their allowed supports
    checks: Vec<Vec<(VarSet, HashSet<u64>)>>,
    infeasible: bool,
    deadline: Option<Instant>,
}

impl SectionSearch {
    pub fn new(m: &PossibilisticModel) -> Self {
        let scenario = m.scenario();
        let n = scenario.variables().len();
        let mut checks = vec![Vec::new(); n];
        let mut infeasible = false;
        for &u in scenario.contexts() {
            let allowed: HashSet<u64> = m.events(u).iter().map(|e| e.bits()).collect();
            infeasible |= allowed.is_empty();
            let last = u.iter().last().expect("contexts are nonempty");
            checks[last].push((u, allowed));
        }
        SectionSearch { n, checks, infeasible, deadline: None }
    }

    pub fn with_budget(mut self, budget: Option<Duration>) -> Self {
        self.deadline = budget.map(|b| Instant::now() + b);
        self
    }

    /// Calls `visit` with the support of every global section.
    pub fn run<F: FnMut(VarSet)>(&self, mut visit: F) -> Result<(), Interrupted> {
        if self.infeasible {
            return Ok(());
        }
        let mut state = DfsState { nodes: 0, found: 0 };
        self.descend(0, VarSet::EMPTY, &mut state, &mut visit)
    }

    fn descend<F: FnMut(VarSet)>(
        &self,
        depth: usize,
        ones: VarSet,
        state: &mut DfsState,
        visit: &mut F,
    ) -> Result<(), Interrupted> {
        if depth == self.n {
            state.found += 1;
            visit(ones);
            return Ok(());
        }
        state.nodes += 1;
        if state.nodes.is_multiple_of(1024) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(Interrupted { sections_found: state.found });
                }
            }
        }
        for bit in [false, true] {
            let mut next = ones;
            if bit {
                next.insert(depth);
            }
            let consistent =
                self.checks[depth].iter().all(|(u, allowed)| allowed.contains(&next.intersection(*u).bits()));
            if consistent {
                self.descend(depth + 1, next, state, visit)?;
            }
        }
        Ok(())
    }
}

struct DfsState {
    nodes: u64,
    found: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    NonContextual,
    Contextual,
    StronglyContextual,
}

/// A context event that no global section restricts to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventWitness {
    pub context: Vec<String>,
    pub event: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: Kind,
    pub witness_event: Option<EventWitness>,
    pub section_count: u64,
}

impl Classification {
    /// Contextual in the broad sense: some event has no extending section.
    pub fn is_contextual(&self) -> bool {
        self.kind != Kind::NonContextual
    }
}

/// Classifies a validated model.
pub fn classify(m: &PossibilisticModel) -> Classification {
    classify_within(m, None).expect("no deadline was set")
}

/// [`classify`] with an optional wall-clock budget for the section search.
pub fn classify_within(m: &PossibilisticModel, budget: Option<Duration>) -> Result<Classification, Interrupted> {
    let scenario = m.scenario();
    let contexts = scenario.contexts();
    let mut realised: HashMap<VarSet, HashSet<VarSet>> = HashMap::new();
    let mut count = 0u64;
    SectionSearch::new(m).with_budget(budget).run(|ones| {
        count += 1;
        for &u in contexts {
            realised.entry(u).or_default().insert(ones.intersection(u));
        }
    })?;

    if count == 0 {
        return Ok(Classification { kind: Kind::StronglyContextual, witness_event: None, section_count: 0 });
    }
    for &u in contexts {
        let mut events = m.events(u).to_vec();
        events.sort();
        let hit = realised.get(&u);
        if let Some(&event) = events.iter().find(|e| !hit.is_some_and(|h| h.contains(e))) {
            return Ok(Classification {
                kind: Kind::Contextual,
                witness_event: Some(EventWitness { context: scenario.names(u), event: scenario.names(event) }),
                section_count: count,
            });
        }
    }
    Ok(Classification { kind: Kind::NonContextual, witness_event: None, section_count: count })
}
