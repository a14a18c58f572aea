//! Seeded random models for fuzzing.
//!
//! The stream is ChaCha8 seeded with `seed_from_u64`, so a given parameter
//! set produces the same model on every platform.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{PossibilisticModel, Scenario, VarSet};

/// Largest context the generator draws, keeping `2^|U|` candidate events small.
pub const MAX_CONTEXT_SIZE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub vars: usize,
    pub contexts: usize,
    pub density: f64,
    pub seed: u64,
    pub intersection_closed: bool,
}

/// Variable names `x1..xN`, zero padded so they sort numerically.
pub fn variable_names(n: usize) -> Vec<String> {
    let width = n.to_string().len();
    (1..=n).map(|i| format!("x{i:0width$}")).collect()
}

/// Draws a random cover and then includes each candidate event of each
/// context independently with probability `density`.
///
/// Panics if `vars` is 0 or above 64, if `contexts` is 0, or if `density`
/// lies outside `[0, 1]`.
pub fn gen_random_model(params: GenParams) -> PossibilisticModel {
    let GenParams { vars, contexts, density, seed, intersection_closed } = params;
    assert!((1..=64).contains(&vars), "vars must be in 1..=64");
    assert!(contexts >= 1, "contexts must be positive");
    assert!((0.0..=1.0).contains(&density), "density must lie in [0, 1]");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_size = vars.min(MAX_CONTEXT_SIZE);
    let indices: Vec<usize> = (0..vars).collect();

    let mut cover: Vec<VarSet> = Vec::new();
    let mut attempts = 0;
    while cover.len() < contexts && attempts < 64 * contexts {
        attempts += 1;
        let size = rng.gen_range(1..=max_size);
        let ctx: VarSet = indices.choose_multiple(&mut rng, size).copied().collect();
        if !cover.contains(&ctx) {
            cover.push(ctx);
        }
    }

    // Put every uncovered variable into some context with room, or a new singleton.
    for x in 0..vars {
        if cover.iter().any(|c| c.contains(x)) {
            continue;
        }
        let roomy: Vec<usize> = (0..cover.len()).filter(|&i| cover[i].len() < max_size).collect();
        match roomy.choose(&mut rng) {
            Some(&i) if !cover.contains(&cover[i].union(VarSet::singleton(x))) => cover[i].insert(x),
            _ => cover.push(VarSet::singleton(x)),
        }
    }

    if intersection_closed {
        close_under_intersection(&mut cover);
    }
    cover.sort();

    let mut supports = BTreeMap::new();
    for &u in &cover {
        let events: Vec<VarSet> = u.subsets().into_iter().filter(|_| rng.gen_bool(density)).collect();
        supports.insert(u, events);
    }

    let names = variable_names(vars);
    let scenario = Scenario::new(&names, cover.iter().map(|u| u.iter().map(|i| names[i].clone()).collect::<Vec<_>>()))
        .expect("generated cover is well formed");
    PossibilisticModel::new(scenario, supports)
}

fn close_under_intersection(cover: &mut Vec<VarSet>) {
    let mut i = 0;
    while i < cover.len() {
        for j in 0..i {
            let common = cover[i].intersection(cover[j]);
            if !common.is_empty() && !cover.contains(&common) {
                cover.push(common);
            }
        }
        i += 1;
    }
}
