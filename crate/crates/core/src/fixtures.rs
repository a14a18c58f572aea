//! Model documents for the worked examples, as shipped in `fixtures/`.

use crate::format::{parse_model, ModelDocument};
use crate::model::PossibilisticModel;
use crate::probabilistic::ProbabilisticModel;

/// Double-headed first coin.
pub const EXAMPLE3_COIN: &str = include_str!("../fixtures/example3_coin.json");
/// Hardy-style table as printed.
pub const EXAMPLE4_HARDY: &str = include_str!("../fixtures/example4_hardy.json");
/// Hardy-style table read off the formula list `a&b, !(a&b'), !(a'&b), a'|b'`.
pub const EXAMPLE4_HARDY_FORMULAS: &str = include_str!("../fixtures/example4_hardy_formulas.json");
/// Salmon first, then Steak once Frog Legs appear on the menu.
pub const LUCE_RAIFFA: &str = include_str!("../fixtures/luce_raiffa.json");
/// Weak axiom, non-contextual.
pub const THM3_NONCONTEXTUAL: &str = include_str!("../fixtures/thm3_noncontextual.json");
/// Weak axiom, contextual.
pub const THM3_CONTEXTUAL: &str = include_str!("../fixtures/thm3_contextual.json");
/// Weak axiom, signalling.
pub const THM6_SIGNALLING: &str = include_str!("../fixtures/thm6_signalling.json");
pub const PR_BOX: &str = include_str!("../fixtures/pr_box.json");
/// PR box with probability 1/2 on each allowed outcome.
pub const PR_BOX_PROB: &str = include_str!("../fixtures/pr_box_prob.json");
/// Uniform distributions over the printed Hardy table's supports.
pub const HARDY_UNIFORM_PROB: &str = include_str!("../fixtures/hardy_uniform_prob.json");
/// Equal/unequal-bit propositions for the PR box.
pub const PR_BOX_PROPS: &str = include_str!("../fixtures/pr_box.props");
pub const EXAMPLE4_FORMULA_PROPS: &str = include_str!("../fixtures/example4_formulas.props");

/// Parses a bundled possibilistic fixture.
pub fn possibilistic(text: &str) -> PossibilisticModel {
    match parse_model(text).expect("bundled fixture parses") {
        ModelDocument::Possibilistic(m) => m,
        ModelDocument::Probabilistic(_) => panic!("fixture is probabilistic"),
    }
}

/// Parses a bundled probabilistic fixture.
pub fn probabilistic(text: &str) -> ProbabilisticModel {
    match parse_model(text).expect("bundled fixture parses") {
        ModelDocument::Probabilistic(p) => p,
        ModelDocument::Possibilistic(_) => panic!("fixture is possibilistic"),
    }
}
