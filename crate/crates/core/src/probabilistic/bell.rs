use thiserror::Error;

use super::proposition::{measuring_context, Formula, Proposition};
use super::ProbabilisticModel;
use crate::model::{PossibilisticModel, Scenario, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BellError {
    #[error("proposition over {{{0}}} is not measurable in any context")]
    NotMeasurable(String),
    #[error("{variables} variables exceed the exhaustive bound of {bound}")]
    TooLarge { variables: usize, bound: usize },
    #[error("propositions are jointly satisfiable (e.g. by {{{0}}} true); the inequality does not apply")]
    NotContradictory(String),
}

fn context_for(phi: &Proposition, s: &Scenario) -> Result<VarSet, BellError> {
    measuring_context(phi.vars, s).ok_or_else(|| BellError::NotMeasurable(s.format_set(phi.vars)))
}

/// Probability that `phi` holds, read from the distribution of the first
/// context measuring it.
pub fn eval_probability(phi: &Proposition, p: &ProbabilisticModel) -> Result<f64, BellError> {
    let u = context_for(phi, p.scenario())?;
    Ok(p.distribution(u).iter().filter(|(ones, _)| phi.formula.eval(*ones)).map(|(_, pr)| pr).sum())
}

/// First total assignment (in binary counting order) satisfying every
/// proposition, if any.
fn satisfying_assignment(phis: &[Proposition], s: &Scenario, bound: usize) -> Result<Option<VarSet>, BellError> {
    for phi in phis {
        context_for(phi, s)?;
    }
    let n = s.variables().len();
    if n > bound || n >= 64 {
        return Err(BellError::TooLarge { variables: n, bound });
    }
    Ok((0u64..1 << n).map(VarSet::from_bits).find(|&ones| phis.iter().all(|phi| phi.formula.eval(ones))))
}

/// True when no global 0/1 assignment satisfies all of `phis`.
pub fn jointly_contradictory(phis: &[Proposition], s: &Scenario, bound: usize) -> Result<bool, BellError> {
    Ok(satisfying_assignment(phis, s, bound)?.is_none())
}

/// `sum_i P(phi_i) - (N - 1)`. Positive values certify contextuality; the
/// maximum is 1.
pub fn bell_violation(phis: &[Proposition], p: &ProbabilisticModel, bound: usize) -> Result<f64, BellError> {
    if let Some(ones) = satisfying_assignment(phis, p.scenario(), bound)? {
        return Err(BellError::NotContradictory(p.scenario().format_set(ones)));
    }
    let total: f64 = phis.iter().map(|phi| eval_probability(phi, p)).sum::<Result<f64, _>>()?;
    Ok(total - (phis.len() as f64 - 1.0))
}

/// One proposition per context, true exactly when the local outcome is one
/// of the context's events.
pub fn support_propositions(m: &PossibilisticModel) -> Vec<Proposition> {
    m.scenario()
        .contexts()
        .iter()
        .map(|&u| {
            let mut events = m.events(u).to_vec();
            events.sort();
            let formula = Formula::any(events.iter().map(|e| {
                Formula::all(u.iter().map(|x| {
                    if e.contains(x) {
                        Formula::Var(x)
                    } else {
                        Formula::negate(Formula::Var(x))
                    }
                }))
            }));
            Proposition { vars: formula.vars(), formula, context: u }
        })
        .collect()
}

/// Strong contextuality decided through the support propositions: they are
/// jointly contradictory exactly when no global section exists.
pub fn strong_contextuality_via_bell(m: &PossibilisticModel, bound: usize) -> Result<bool, BellError> {
    jointly_contradictory(&support_propositions(m), m.scenario(), bound)
}
