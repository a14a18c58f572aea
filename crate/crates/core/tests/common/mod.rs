//! Naive reference procedures, written against the public accessors only and
//! sharing no code with the search or the Bell machinery.

#![allow(dead_code)]

use choice_context::contextuality::Kind;
use choice_context::{PossibilisticModel, VarSet};

/// Supports (as bitmasks) of every total assignment whose restriction to each
/// context is one of that context's events, in counting order.
pub fn oracle_sections(m: &PossibilisticModel) -> Vec<u64> {
    let n = m.scenario().variables().len();
    let contexts: Vec<u64> = m.scenario().contexts().iter().map(|c| c.bits()).collect();
    (0u64..1 << n)
        .filter(|s| contexts.iter().all(|&u| m.events(VarSet::from_bits(u)).iter().any(|e| e.bits() == s & u)))
        .collect()
}

/// Classification by definition: strongly contextual without sections,
/// otherwise the first (context, event) in canonical order that no section
/// restricts to, if any.
pub fn oracle_classify(m: &PossibilisticModel) -> (Kind, Option<(VarSet, VarSet)>, u64) {
    let sections = oracle_sections(m);
    if sections.is_empty() {
        return (Kind::StronglyContextual, None, 0);
    }
    for &u in m.scenario().contexts() {
        let mut events = m.events(u).to_vec();
        events.sort();
        for e in events {
            if !sections.iter().any(|s| s & u.bits() == e.bits()) {
                return (Kind::Contextual, Some((u, e)), sections.len() as u64);
            }
        }
    }
    (Kind::NonContextual, None, sections.len() as u64)
}

/// Direct evaluation of the choice function.
pub fn chosen(m: &PossibilisticModel, x: usize, u: VarSet) -> bool {
    m.events(u).iter().any(|e| e.contains(x))
}

/// The weak axiom by its quantifiers over all pairs, including A = B.
pub fn oracle_warp(m: &PossibilisticModel) -> bool {
    let cs = m.scenario().contexts();
    cs.iter().all(|&a| {
        cs.iter().all(|&b| {
            let common: Vec<usize> = a.intersection(b).iter().collect();
            common.iter().all(|&x| common.iter().all(|&y| !(chosen(m, x, a) && chosen(m, y, b)) || chosen(m, x, b)))
        })
    })
}

pub fn oracle_no_signalling(m: &PossibilisticModel) -> bool {
    let cs = m.scenario().contexts();
    cs.iter().all(|&a| cs.iter().all(|&b| a.intersection(b).iter().all(|z| chosen(m, z, a) == chosen(m, z, b))))
}
