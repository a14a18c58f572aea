//! Command-line front end. [`run`] does all the work against injected output
//! streams so it can be tested without spawning a process.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::axioms::{self, AuditReport};
use crate::contextuality::{classify_within, Classification, DEFAULT_EXHAUSTIVE_BOUND};
use crate::format::{parse_model, serialize_model, ModelDocument};
use crate::generate::{gen_random_model, GenParams};
use crate::model::{validate, PossibilisticModel, Verdict};
use crate::probabilistic::{
    bell_violation, parse_proposition_file, support_reduction, validate_probabilistic, ProbabilisticModel,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_STRICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Parser)]
#[command(name = "choicectx", version, about = "Contextuality and weak-axiom checks for choice scenarios")]
pub struct RunConfig {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Exit with status 1 on contextual, signalling or weak-axiom-violating models.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Variable bound for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_EXHAUSTIVE_BOUND, value_parser = parse_bound)]
    pub bound: usize,
    /// Wall-clock budget in seconds for the global-section search.
    #[arg(long, global = true, value_parser = parse_budget)]
    pub budget: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Classify a model as non-contextual, contextual or strongly contextual.
    Classify { file: PathBuf },
    /// Check the weak axiom, no-signalling, intersection closure, overlap and choice structure.
    Axioms { file: PathBuf },
    /// All checks plus classification and theorem consistency.
    Audit { file: PathBuf },
    /// Evaluate the logical Bell inequality for a set of propositions.
    Bell {
        file: PathBuf,
        #[arg(long)]
        props: PathBuf,
    },
    /// Write a random model document.
    Gen {
        #[arg(long, value_parser = parse_vars)]
        vars: usize,
        #[arg(long, value_parser = parse_positive)]
        contexts: usize,
        #[arg(long, value_parser = parse_density)]
        density: f64,
        #[arg(long)]
        seed: u64,
        /// Close the cover under nonempty pairwise intersection.
        #[arg(long)]
        closed: bool,
    },
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_bound(s: &str) -> Result<usize, String> {
    parse_positive(s).and_then(|n| if n < 64 { Ok(n) } else { Err("bound must be below 64".into()) })
}

fn parse_vars(s: &str) -> Result<usize, String> {
    parse_positive(s).and_then(|n| if n <= 64 { Ok(n) } else { Err("at most 64 variables".into()) })
}

fn parse_density(s: &str) -> Result<f64, String> {
    let d: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&d) {
        Ok(d)
    } else {
        Err("density must lie in [0, 1]".into())
    }
}

fn parse_budget(s: &str) -> Result<f64, String> {
    let b: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if b > 0.0 && b.is_finite() {
        Ok(b)
    } else {
        Err("budget must be a positive number of seconds".into())
    }
}

/// Machine output of `axioms`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomsReport {
    pub weak_axiom: Verdict,
    pub no_signalling: Verdict,
    pub intersection_closed: Verdict,
    pub overlap_property: Verdict,
    pub choice_structure: Verdict,
}

impl AxiomsReport {
    pub fn of(m: &PossibilisticModel) -> Self {
        AxiomsReport {
            weak_axiom: axioms::check_weak_axiom(m),
            no_signalling: axioms::check_no_signalling(m),
            intersection_closed: axioms::intersection_closed(m.scenario()),
            overlap_property: axioms::overlap_property(m),
            choice_structure: axioms::is_choice_structure(m),
        }
    }

    fn rows(&self) -> [(&'static str, &Verdict); 5] {
        [
            ("weak_axiom", &self.weak_axiom),
            ("no_signalling", &self.no_signalling),
            ("intersection_closed", &self.intersection_closed),
            ("overlap_property", &self.overlap_property),
            ("choice_structure", &self.choice_structure),
        ]
    }
}

/// Printed when the search budget runs out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inconclusive {
    pub inconclusive: bool,
    pub sections_found: u64,
    pub axioms: Option<AxiomsReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellReport {
    pub propositions: usize,
    pub violation: f64,
    pub contextuality_certified: bool,
}

/// An input problem: message for standard error, exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_document(path: &Path) -> Result<ModelDocument, InputError> {
    parse_model(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn check(verdict: Verdict, path: &Path, err: &mut dyn Write) -> Result<(), InputError> {
    for w in &verdict.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    if verdict.is_holds() {
        Ok(())
    } else {
        Err(InputError(format!("{}: invalid model: {}", path.display(), verdict.narrative)))
    }
}

fn load_possibilistic(path: &Path, err: &mut dyn Write) -> Result<PossibilisticModel, InputError> {
    match load_document(path)? {
        ModelDocument::Possibilistic(m) => {
            check(validate(&m), path, err)?;
            Ok(m)
        }
        ModelDocument::Probabilistic(p) => {
            check(validate_probabilistic(&p), path, err)?;
            let m = support_reduction(&p);
            check(validate(&m), path, err)?;
            Ok(m)
        }
    }
}

fn load_probabilistic(path: &Path, err: &mut dyn Write) -> Result<ProbabilisticModel, InputError> {
    match load_document(path)? {
        ModelDocument::Probabilistic(p) => {
            check(validate_probabilistic(&p), path, err)?;
            Ok(p)
        }
        ModelDocument::Possibilistic(_) => {
            Err(InputError(format!("{}: bell needs a probabilistic model", path.display())))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize")
}

fn strict_status(strict: bool, interesting: bool) -> i32 {
    if strict && interesting {
        EXIT_STRICT
    } else {
        EXIT_OK
    }
}

/// Executes one command. Returns the process exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config, out, err) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, InputError> {
    let budget = config.budget.map(Duration::from_secs_f64);
    match &config.command {
        Command::Classify { file } => {
            let m = load_possibilistic(file, err)?;
            match classify_within(&m, budget) {
                Ok(c) => {
                    if config.machine {
                        writeln!(out, "{}", to_json(&c))?;
                    } else {
                        write_classification(out, &c)?;
                    }
                    Ok(strict_status(config.strict, c.is_contextual()))
                }
                Err(stop) => {
                    write_inconclusive(out, config.machine, stop.sections_found, None)?;
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::Axioms { file } => {
            let m = load_possibilistic(file, err)?;
            let report = AxiomsReport::of(&m);
            if config.machine {
                writeln!(out, "{}", to_json(&report))?;
            } else {
                write_verdicts(out, &report)?;
            }
            let interesting = !report.weak_axiom.is_holds() || !report.no_signalling.is_holds();
            Ok(strict_status(config.strict, interesting))
        }
        Command::Audit { file } => {
            let m = load_possibilistic(file, err)?;
            let classification = match classify_within(&m, budget) {
                Ok(c) => c,
                Err(stop) => {
                    write_inconclusive(out, config.machine, stop.sections_found, Some(AxiomsReport::of(&m)))?;
                    return Ok(EXIT_BUDGET);
                }
            };
            let report = axioms::audit_with(&m, classification);
            if config.machine {
                writeln!(out, "{}", to_json(&report))?;
            } else {
                write_audit(out, &report)?;
            }
            let interesting = report.classification.is_contextual()
                || !report.weak_axiom.is_holds()
                || !report.no_signalling.is_holds();
            Ok(strict_status(config.strict, interesting))
        }
        Command::Bell { file, props } => {
            let p = load_probabilistic(file, err)?;
            let phis = parse_proposition_file(&read(props)?, p.scenario())
                .map_err(|(line, e)| InputError(format!("{}:{line}: {e}", props.display())))?;
            let violation = bell_violation(&phis, &p, config.bound)?;
            let report = BellReport { propositions: phis.len(), violation, contextuality_certified: violation > 0.0 };
            if config.machine {
                writeln!(out, "{}", to_json(&report))?;
            } else {
                writeln!(out, "violation: {}", report.violation)?;
                writeln!(out, "propositions: {}", report.propositions)?;
                writeln!(
                    out,
                    "{}",
                    if report.contextuality_certified {
                        "inequality violated: model is contextual"
                    } else {
                        "inequality satisfied"
                    }
                )?;
            }
            Ok(strict_status(config.strict, report.contextuality_certified))
        }
        Command::Gen { vars, contexts, density, seed, closed } => {
            let m = gen_random_model(GenParams {
                vars: *vars,
                contexts: *contexts,
                density: *density,
                seed: *seed,
                intersection_closed: *closed,
            });
            for w in validate(&m).warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            write!(out, "{}", serialize_model(&ModelDocument::Possibilistic(m)))?;
            Ok(EXIT_OK)
        }
    }
}

fn write_classification(out: &mut dyn Write, c: &Classification) -> std::io::Result<()> {
    writeln!(out, "{:?}", c.kind)?;
    if let Some(w) = &c.witness_event {
        writeln!(
            out,
            "witness: event {{{}}} of context {{{}}} extends to no global section",
            w.event.join(","),
            w.context.join(",")
        )?;
    }
    writeln!(out, "global sections: {}", c.section_count)
}

fn write_verdicts(out: &mut dyn Write, report: &AxiomsReport) -> std::io::Result<()> {
    for (name, v) in report.rows() {
        writeln!(out, "{name}: {:?}", v.status)?;
        writeln!(out, "  {}", v.narrative)?;
    }
    Ok(())
}

fn write_audit(out: &mut dyn Write, r: &AuditReport) -> std::io::Result<()> {
    let axioms = AxiomsReport {
        weak_axiom: r.weak_axiom.clone(),
        no_signalling: r.no_signalling.clone(),
        intersection_closed: r.intersection_closed.clone(),
        overlap_property: r.overlap_property.clone(),
        choice_structure: r.choice_structure.clone(),
    };
    write_verdicts(out, &axioms)?;
    write!(out, "classification: ")?;
    write_classification(out, &r.classification)?;
    writeln!(out, "region: {}", r.region.describe())?;
    for t in &r.theorems {
        let state = match (t.applicable, t.consistent) {
            (false, _) => "n/a",
            (true, true) => "consistent",
            (true, false) => "INCONSISTENT",
        };
        writeln!(out, "{}: {state} ({})", t.id, t.detail)?;
    }
    Ok(())
}

fn write_inconclusive(
    out: &mut dyn Write,
    machine: bool,
    sections_found: u64,
    axioms: Option<AxiomsReport>,
) -> std::io::Result<()> {
    if machine {
        writeln!(out, "{}", to_json(&Inconclusive { inconclusive: true, sections_found, axioms }))
    } else {
        if let Some(a) = &axioms {
            write_verdicts(out, a)?;
        }
        writeln!(out, "Inconclusive: search budget exhausted after {sections_found} global sections")
    }
}
