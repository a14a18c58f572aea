//! Probabilistic models, their possibilistic support, and logical Bell
//! inequalities.

mod bell;
pub mod proposition;

use std::collections::BTreeMap;

pub use bell::{
    bell_violation, eval_probability, jointly_contradictory, strong_contextuality_via_bell, support_propositions,
    BellError,
};
pub use proposition::{parse_proposition, parse_proposition_file, Formula, Proposition, PropositionError};

use crate::model::{PossibilisticModel, Scenario, VarSet, Verdict, Witness};

/// Probabilities at or below this count as zero; also the tolerance on each
/// distribution's total.
pub const EPSILON: f64 = 1e-9;

/// One distribution per context over its total local assignments. A local
/// assignment is stored as the set of context variables mapped to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticModel {
    scenario: Scenario,
    distributions: BTreeMap<VarSet, Vec<(VarSet, f64)>>,
}

impl ProbabilisticModel {
    pub fn new(scenario: Scenario, distributions: BTreeMap<VarSet, Vec<(VarSet, f64)>>) -> Self {
        ProbabilisticModel { scenario, distributions }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn distributions(&self) -> &BTreeMap<VarSet, Vec<(VarSet, f64)>> {
        &self.distributions
    }

    pub fn distribution(&self, context: VarSet) -> &[(VarSet, f64)] {
        self.distributions.get(&context).map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn validate_probabilistic(p: &ProbabilisticModel) -> Verdict {
    let s = &p.scenario;
    let ctx_witness = |u: VarSet| Witness { contexts: vec![s.names(u)], ..Witness::default() };
    for &u in s.contexts() {
        let Some(dist) = p.distributions.get(&u) else {
            return Verdict::fails(ctx_witness(u), format!("no distribution for context {{{}}}", s.format_set(u)));
        };
        let mut total = 0.0;
        for (k, &(ones, pr)) in dist.iter().enumerate() {
            let event_witness = || Witness { events: vec![s.names(ones)], ..ctx_witness(u) };
            if !ones.is_subset(u) {
                return Verdict::fails(
                    event_witness(),
                    format!("assignment to {{{}}} lies outside context {{{}}}", s.format_set(ones), s.format_set(u)),
                );
            }
            if dist[..k].iter().any(|(o, _)| *o == ones) {
                return Verdict::fails(
                    event_witness(),
                    format!(
                        "duplicate assignment with support {{{}}} in context {{{}}}",
                        s.format_set(ones),
                        s.format_set(u)
                    ),
                );
            }
            if !(0.0..=1.0).contains(&pr) {
                return Verdict::fails(
                    event_witness(),
                    format!("probability {pr} out of range in context {{{}}}", s.format_set(u)),
                );
            }
            total += pr;
        }
        if (total - 1.0).abs() > EPSILON {
            return Verdict::fails(
                ctx_witness(u),
                format!("distribution for context {{{}}} sums to {total}", s.format_set(u)),
            );
        }
    }
    if let Some(&extra) = p.distributions.keys().find(|c| !s.has_context(**c)) {
        return Verdict::fails(
            ctx_witness(extra),
            format!("distribution for {{{}}}, which is not a cover context", s.format_set(extra)),
        );
    }
    Verdict::holds("distributions are well formed")
}

/// The possibilistic model whose events are the outcomes of positive
/// probability.
pub fn support_reduction(p: &ProbabilisticModel) -> PossibilisticModel {
    let supports = p
        .distributions
        .iter()
        .map(|(&u, dist)| {
            let mut events: Vec<VarSet> = dist.iter().filter(|(_, pr)| *pr > EPSILON).map(|(o, _)| *o).collect();
            events.sort();
            events.dedup();
            (u, events)
        })
        .collect();
    PossibilisticModel::new(p.scenario.clone(), supports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Status;

    fn ab() -> Scenario {
        Scenario::new(["a", "b"], [["a", "b"]]).unwrap()
    }

    fn dist(s: &Scenario, entries: &[(u64, f64)]) -> ProbabilisticModel {
        let u = s.contexts()[0];
        ProbabilisticModel::new(
            s.clone(),
            BTreeMap::from([(u, entries.iter().map(|&(b, p)| (VarSet::from_bits(b), p)).collect())]),
        )
    }

    #[test]
    fn uniform_is_valid() {
        let s = ab();
        let p = dist(&s, &[(0, 0.25), (1, 0.25), (2, 0.25), (3, 0.25)]);
        assert!(validate_probabilistic(&p).is_holds());
    }

    #[test]
    fn sum_deviation_fails() {
        let s = ab();
        let v = validate_probabilistic(&dist(&s, &[(0, 0.5), (1, 0.5), (2, 0.1)]));
        assert_eq!(v.status, Status::Fails);
        assert!(v.narrative.contains("sums to"));
    }

    #[test]
    fn negative_and_duplicate_fail() {
        let s = ab();
        let v = validate_probabilistic(&dist(&s, &[(0, 1.5), (1, -0.5)]));
        assert!(v.narrative.contains("out of range"));
        let v = validate_probabilistic(&dist(&s, &[(0, 0.5), (0, 0.5)]));
        assert!(v.narrative.contains("duplicate"));
    }

    #[test]
    fn point_distribution_reduces_to_choice_structure() {
        let s = ab();
        let m = support_reduction(&dist(&s, &[(2, 1.0), (1, 0.0)]));
        assert_eq!(m.events(s.contexts()[0]), &[VarSet::from_bits(2)]);
    }
}
