//! Weak axiom of revealed preference, no-signalling, and the conditions that
//! relate them to contextuality, plus an audit that evaluates the known
//! implications between them on a concrete model.
//!
//! "x is chosen in A" always means x belongs to some event of C(A).

use serde::{Deserialize, Serialize};

use crate::contextuality::{classify, Classification};
use crate::model::{PossibilisticModel, Scenario, VarSet, Verdict, Witness};

/// Ordered pairs of distinct contexts in canonical order.
fn ordered_pairs(s: &Scenario) -> impl Iterator<Item = (VarSet, VarSet)> + '_ {
    let cs = s.contexts();
    cs.iter().flat_map(move |&a| cs.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
}

fn unordered_pairs(s: &Scenario) -> impl Iterator<Item = (VarSet, VarSet)> + '_ {
    let cs = s.contexts();
    cs.iter().enumerate().flat_map(move |(i, &a)| cs[i + 1..].iter().map(move |&b| (a, b)))
}

pub fn check_weak_axiom(m: &PossibilisticModel) -> Verdict {
    let s = m.scenario();
    for (a, b) in ordered_pairs(s) {
        let common = a.intersection(b);
        let chosen_a = m.chosen_set(a).intersection(common);
        let chosen_b = m.chosen_set(b).intersection(common);
        let Some(y) = chosen_b.iter().next() else { continue };
        if let Some(x) = chosen_a.difference(chosen_b).iter().next() {
            return Verdict::fails(
                Witness {
                    contexts: vec![s.names(a), s.names(b)],
                    variables: vec![s.name(x).to_owned(), s.name(y).to_owned()],
                    events: Vec::new(),
                },
                format!(
                    "{x} is chosen in {{{a}}} and {y} in {{{b}}}, but {x} is not chosen in {{{b}}}",
                    x = s.name(x),
                    y = s.name(y),
                    a = s.format_set(a),
                    b = s.format_set(b)
                ),
            );
        }
    }
    Verdict::holds("the weak axiom holds for every pair of budgets")
}

pub fn check_no_signalling(m: &PossibilisticModel) -> Verdict {
    let s = m.scenario();
    for (a, b) in ordered_pairs(s) {
        let common = a.intersection(b);
        let diff = m.chosen_set(a).intersection(common).difference(m.chosen_set(b));
        if let Some(z) = diff.iter().next() {
            return Verdict::fails(
                Witness {
                    contexts: vec![s.names(a), s.names(b)],
                    variables: vec![s.name(z).to_owned()],
                    events: Vec::new(),
                },
                format!(
                    "{z} is chosen in {{{a}}} but not in {{{b}}}",
                    z = s.name(z),
                    a = s.format_set(a),
                    b = s.format_set(b)
                ),
            );
        }
    }
    Verdict::holds("choice functions agree on every intersection")
}

/// Every nonempty intersection of two cover contexts is itself in the cover.
pub fn intersection_closed(s: &Scenario) -> Verdict {
    for (a, b) in unordered_pairs(s) {
        let common = a.intersection(b);
        if !common.is_empty() && !s.has_context(common) {
            return Verdict::fails(
                Witness { contexts: vec![s.names(a), s.names(b)], variables: s.names(common), events: Vec::new() },
                format!(
                    "{{{}}} ∩ {{{}}} = {{{}}} is not a context",
                    s.format_set(a),
                    s.format_set(b),
                    s.format_set(common)
                ),
            );
        }
    }
    Verdict::holds("the cover is closed under nonempty intersection")
}

/// Every overlapping pair of contexts has some shared variable chosen in
/// each of the two. Disjoint pairs are not constrained.
pub fn overlap_property(m: &PossibilisticModel) -> Verdict {
    let s = m.scenario();
    for (a, b) in unordered_pairs(s) {
        let common = a.intersection(b);
        if common.is_empty() {
            continue;
        }
        let in_a = !m.chosen_set(a).intersection(common).is_empty();
        let in_b = !m.chosen_set(b).intersection(common).is_empty();
        if !(in_a && in_b) {
            let (culprit, other) = if in_a { (b, a) } else { (a, b) };
            return Verdict::fails(
                Witness { contexts: vec![s.names(a), s.names(b)], variables: s.names(common), events: Vec::new() },
                format!(
                    "nothing in {{{}}} is chosen in {{{}}} (overlap with {{{}}})",
                    s.format_set(common),
                    s.format_set(culprit),
                    s.format_set(other)
                ),
            );
        }
    }
    Verdict::holds("every overlapping pair shares a chosen alternative")
}

/// Exactly one event per context.
pub fn is_choice_structure(m: &PossibilisticModel) -> Verdict {
    let s = m.scenario();
    for &u in s.contexts() {
        let n = m.events(u).len();
        if n != 1 {
            return Verdict::fails(
                Witness {
                    contexts: vec![s.names(u)],
                    variables: Vec::new(),
                    events: m.events(u).iter().map(|e| s.names(*e)).collect(),
                },
                format!("context {{{}}} has {n} events", s.format_set(u)),
            );
        }
    }
    Verdict::holds("every context has exactly one event")
}

/// Where a model sits among the contextual, non-signalling and weak-axiom
/// scenarios. Non-signalling models always obey the weak axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    NonSignallingNonContextual,
    NonSignallingContextual,
    WeakAxiomSignallingNonContextual,
    WeakAxiomSignallingContextual,
    ViolatesWeakAxiomNonContextual,
    ViolatesWeakAxiomContextual,
}

impl Region {
    pub fn locate(weak_axiom: bool, no_signalling: bool, contextual: bool) -> Self {
        match (weak_axiom, no_signalling, contextual) {
            (_, true, false) => Region::NonSignallingNonContextual,
            (_, true, true) => Region::NonSignallingContextual,
            (true, false, false) => Region::WeakAxiomSignallingNonContextual,
            (true, false, true) => Region::WeakAxiomSignallingContextual,
            (false, false, false) => Region::ViolatesWeakAxiomNonContextual,
            (false, false, true) => Region::ViolatesWeakAxiomContextual,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Region::NonSignallingNonContextual => "non-signalling, weak axiom, non-contextual",
            Region::NonSignallingContextual => "non-signalling, weak axiom, contextual",
            Region::WeakAxiomSignallingNonContextual => "weak axiom, signalling, non-contextual",
            Region::WeakAxiomSignallingContextual => "weak axiom, signalling, contextual",
            Region::ViolatesWeakAxiomNonContextual => "violates weak axiom, non-contextual",
            Region::ViolatesWeakAxiomContextual => "violates weak axiom, contextual",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub id: String,
    pub applicable: bool,
    pub consistent: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub weak_axiom: Verdict,
    pub no_signalling: Verdict,
    pub intersection_closed: Verdict,
    pub overlap_property: Verdict,
    pub choice_structure: Verdict,
    pub classification: Classification,
    pub region: Region,
    pub theorems: Vec<TheoremCheck>,
}

impl AuditReport {
    pub fn all_consistent(&self) -> bool {
        self.theorems.iter().all(|t| t.consistent)
    }
}

pub fn audit(m: &PossibilisticModel) -> AuditReport {
    audit_with(m, classify(m))
}

/// Builds the report around an already computed classification.
pub fn audit_with(m: &PossibilisticModel, classification: Classification) -> AuditReport {
    let weak_axiom = check_weak_axiom(m);
    let no_signalling = check_no_signalling(m);
    let closed = intersection_closed(m.scenario());
    let overlap = overlap_property(m);
    let choice_structure = is_choice_structure(m);

    let warp = weak_axiom.is_holds();
    let ns = no_signalling.is_holds();
    let contextual = classification.is_contextual();
    let region = Region::locate(warp, ns, contextual);

    let mut theorems = Vec::new();

    let applicable = !warp && closed.is_holds();
    theorems.push(TheoremCheck {
        id: "thm2".into(),
        applicable,
        consistent: !applicable || contextual,
        detail: if applicable {
            format!("weak axiom fails on an intersection-closed cover; model is {:?}", classification.kind)
        } else if !warp {
            "not applicable: cover is not closed under intersection".into()
        } else {
            "not applicable: weak axiom holds".into()
        },
    });

    theorems.push(TheoremCheck {
        id: "thm4".into(),
        applicable: ns,
        consistent: !ns || warp,
        detail: if ns {
            format!("non-signalling; weak axiom {}", if warp { "holds" } else { "fails" })
        } else {
            "not applicable: model is signalling".into()
        },
    });

    let applicable = warp && overlap.is_holds();
    let disjoint = unordered_pairs(m.scenario()).filter(|(a, b)| a.intersection(*b).is_empty()).count();
    let mut detail = if applicable {
        format!("weak axiom and overlap property hold; model is {}", if ns { "non-signalling" } else { "signalling" })
    } else {
        "not applicable: requires the weak axiom and the overlap property".into()
    };
    if disjoint > 0 {
        detail.push_str(&format!("; {disjoint} disjoint budget pair(s) not constrained by the overlap property"));
    }
    theorems.push(TheoremCheck { id: "thm5".into(), applicable, consistent: !applicable || ns, detail });

    let observed = warp && !ns;
    theorems.push(TheoremCheck {
        id: "thm6".into(),
        applicable: observed,
        consistent: true,
        detail: if observed {
            "observed: weak axiom holds while the model signals".into()
        } else {
            "not observed in this model".into()
        },
    });

    AuditReport {
        weak_axiom,
        no_signalling,
        intersection_closed: closed,
        overlap_property: overlap,
        choice_structure,
        classification,
        region,
        theorems,
    }
}
