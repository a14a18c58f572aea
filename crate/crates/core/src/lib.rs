//! Decision procedures for binary choice scenarios: possibilistic and strong
//! contextuality, the weak axiom of revealed preference, no-signalling, and
//! logical Bell inequalities over probabilistic models.

pub mod axioms;
pub mod cli;
pub mod contextuality;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod model;
pub mod probabilistic;

pub use model::{validate, Assignment, ModelError, PossibilisticModel, Scenario, Status, VarSet, Verdict, Witness};
