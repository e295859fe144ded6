//! Bottom-up model checking over principal subsentences.
//!
//! Principal subsentences are visited in post-order. Each one is checked at
//! every state of the current structure, then replaced by a fresh atom
//! `@snt<N>` that holds exactly where it was found true, with `N` its
//! post-order index. The sentence itself is the last subsentence checked,
//! and its verdict at the initial state is the answer.

mod qptl;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::automata::{project_direction, sentence_nondet};
use crate::error::{Error, Result};
use crate::games::npt_emptiness;
use crate::model::{Assignment, Cgs};
use crate::semantics::{eval_classic, eval_elementary, temporal_xdepth, EvalMode, Verdict};
use crate::syntax::{classify, free, is_principal, is_sentence, Formula};

pub use qptl::{qptl_sat, qptl_sentence, qptl_translate, rdc_variable};
pub use report::{CheckReport, ReportEntry, REPORT_SCHEMA};

/// Engine selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Automata for One-Goal sentences with `U` or `R`, the exact
    /// enumerative engine for `X`-only sentences, the bounded-memory
    /// enumerative engine otherwise.
    Auto,
    Automata,
    Enum,
}

/// Semantics under which the sentence is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Classic,
    Elementary,
}

/// The engine that produced one row of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineUsed {
    Automata,
    EnumExact,
    EnumBounded,
}

macro_rules! named_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $name),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<$ty> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    other => Err(Error::Validation(format!(
                        concat!("unknown ", stringify!($ty), " `{}`"),
                        other
                    ))),
                }
            }
        }
    };
}

named_enum!(Engine { Auto => "auto", Automata => "automata", Enum => "enum" });
named_enum!(Semantics { Classic => "classic", Elementary => "elementary" });
named_enum!(EngineUsed {
    Automata => "automata",
    EnumExact => "enum-exact",
    EnumBounded => "enum-bounded",
});

/// What to check and how.
#[derive(Debug, Clone)]
pub struct CheckRequest {
    pub cgs: Cgs,
    pub sentence: Formula,
    pub engine: Engine,
    pub semantics: Semantics,
    /// Mode forced on every enumerative check. When absent, `X`-only
    /// subsentences use an exact horizon equal to their `X`-depth and the
    /// others use `memory` memory states.
    pub mode: Option<EvalMode>,
    pub memory: usize,
}

impl CheckRequest {
    pub fn new(cgs: Cgs, sentence: Formula) -> CheckRequest {
        CheckRequest {
            cgs,
            sentence,
            engine: Engine::Auto,
            semantics: Semantics::Classic,
            mode: None,
            memory: 1,
        }
    }

    pub fn engine(mut self, engine: Engine) -> CheckRequest {
        self.engine = engine;
        self
    }

    pub fn semantics(mut self, semantics: Semantics) -> CheckRequest {
        self.semantics = semantics;
        self
    }

    pub fn mode(mut self, mode: EvalMode) -> CheckRequest {
        self.mode = Some(mode);
        self
    }

    pub fn memory(mut self, memory: usize) -> CheckRequest {
        self.memory = memory;
        self
    }
}

/// The label given to the subsentence with post-order index `n`.
pub fn fresh_atom(n: usize) -> String {
    format!("@snt{n}")
}

/// Principal subsentences of `f` in post-order, followed by `f` itself when
/// it is not principal. Repeated occurrences are listed once.
pub fn checked_subsentences(f: &Formula, agents: &[String]) -> Vec<Formula> {
    fn walk(f: &Formula, agents: &[String], out: &mut Vec<Formula>) {
        for c in f.children() {
            walk(c, agents, out);
        }
        if is_sentence(f, agents) && is_principal(f, agents) && !out.contains(f) {
            out.push(f.clone());
        }
    }
    let mut out = Vec::new();
    walk(f, agents, &mut out);
    if out.last() != Some(f) {
        out.push(f.clone());
    }
    out
}

fn substitute(f: &Formula, done: &BTreeMap<Formula, String>) -> Formula {
    if let Some(p) = done.get(f) {
        return Formula::Atom(p.clone());
    }
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(substitute(a, done)),
        Formula::And(a, b) => Formula::and(substitute(a, done), substitute(b, done)),
        Formula::Or(a, b) => Formula::or(substitute(a, done), substitute(b, done)),
        Formula::Next(a) => Formula::Next(Box::new(substitute(a, done))),
        Formula::Until(a, b) => {
            Formula::Until(Box::new(substitute(a, done)), Box::new(substitute(b, done)))
        }
        Formula::Release(a, b) => {
            Formula::Release(Box::new(substitute(a, done)), Box::new(substitute(b, done)))
        }
        Formula::Quant(q, x, a) => Formula::Quant(*q, x.clone(), Box::new(substitute(a, done))),
        Formula::Bind(a, x, b) => Formula::Bind(a.clone(), x.clone(), Box::new(substitute(b, done))),
        Formula::PropQuant(q, x, a) => {
            Formula::PropQuant(*q, x.clone(), Box::new(substitute(a, done)))
        }
    }
}

/// The engine and mode the dispatcher picks for one relabelled
/// subsentence.
pub fn dispatch(
    f: &Formula,
    agents: &[String],
    req: &CheckRequest,
) -> (EngineUsed, Option<EvalMode>) {
    let xdepth = temporal_xdepth(f);
    let enum_choice = || match (req.mode, xdepth) {
        (Some(m @ EvalMode::BoundedMemory(_)), _) => (EngineUsed::EnumBounded, Some(m)),
        (Some(m), _) => (EngineUsed::EnumExact, Some(m)),
        (None, Some(d)) => (EngineUsed::EnumExact, Some(EvalMode::ExactHorizon(d))),
        (None, None) => (
            EngineUsed::EnumBounded,
            Some(EvalMode::BoundedMemory(req.memory)),
        ),
    };
    match req.engine {
        Engine::Automata => (EngineUsed::Automata, None),
        Engine::Enum => enum_choice(),
        Engine::Auto => {
            if xdepth.is_none() && classify(f, agents).ogsl {
                (EngineUsed::Automata, None)
            } else {
                enum_choice()
            }
        }
    }
}

fn check_everywhere(
    g: &Cgs,
    f: &Formula,
    engine: EngineUsed,
    mode: Option<EvalMode>,
    semantics: Semantics,
) -> Result<Vec<Verdict>> {
    match engine {
        EngineUsed::Automata => {
            if semantics == Semantics::Elementary && !classify(f, g.agents()).ogsl {
                return Err(Error::Unsupported(
                    "the automata engine reads elementary semantics only on One-Goal sentences"
                        .into(),
                ));
            }
            let nondet = sentence_nondet(g, f)?;
            (0..g.n_states())
                .map(|s| {
                    let npt = project_direction(&nondet, s)?;
                    Ok(Verdict::from_bool(!npt_emptiness(&npt)?.is_empty()))
                })
                .collect()
        }
        EngineUsed::EnumExact | EngineUsed::EnumBounded => {
            let mode = mode.expect("enumerative engines carry a mode");
            (0..g.n_states())
                .map(|s| match semantics {
                    Semantics::Classic => eval_classic(g, f, s, &Assignment::new(), mode),
                    Semantics::Elementary => eval_elementary(g, f, s, mode),
                })
                .collect()
        }
    }
}

/// Checks `req.sentence` bottom-up and reports every intermediate table.
pub fn model_check(req: &CheckRequest) -> Result<CheckReport> {
    let start = Instant::now();
    let g0 = &req.cgs;
    if !is_sentence(&req.sentence, g0.agents()) {
        let names: Vec<String> = free(&req.sentence, g0.agents())
            .iter()
            .map(|p| format!("{p:?}"))
            .collect();
        return Err(Error::NotASentence(names.join(", ")));
    }
    let order = checked_subsentences(&req.sentence, g0.agents());
    let mut g = g0.clone();
    let mut done: BTreeMap<Formula, String> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut verdict = None;
    for (n, sub) in order.iter().enumerate() {
        let label = fresh_atom(n);
        if g.atom_id(&label).is_some() {
            return Err(Error::Validation(format!("atom `{label}` is reserved")));
        }
        let relabelled = substitute(sub, &done);
        let (engine, mode) = dispatch(&relabelled, g.agents(), req);
        let verdicts = check_everywhere(&g, &relabelled, engine, mode, req.semantics)?;
        let by_state: BTreeMap<String, Verdict> = g
            .states()
            .iter()
            .cloned()
            .zip(verdicts.iter().cloned())
            .collect();
        entries.push(ReportEntry {
            label: label.clone(),
            sentence: sub.to_string(),
            checked: relabelled.to_string(),
            engine,
            mode,
            verdicts: by_state,
        });
        if let Some(Verdict::Unknown(reason)) = verdicts.iter().find(|v| !v.is_known()) {
            verdict = Some(Verdict::Unknown(format!("{label}: {reason}")));
            break;
        }
        if n + 1 == order.len() {
            verdict = Some(verdicts[g.initial()].clone());
            break;
        }
        let truth: BTreeSet<usize> = verdicts
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == Verdict::True)
            .map(|(s, _)| s)
            .collect();
        g = g.with_atom(&label, &truth)?;
        done.insert(sub.clone(), label);
    }
    let restricted = entries.iter().any(|e| e.engine == EngineUsed::EnumBounded);
    Ok(CheckReport {
        schema: REPORT_SCHEMA.to_string(),
        formula: req.sentence.to_string(),
        initial: g0.states()[g0.initial()].clone(),
        semantics: req.semantics,
        verdict: verdict.expect("at least one subsentence is checked"),
        restricted,
        entries,
        elapsed_us: start.elapsed().as_micros() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixture;
    use crate::semantics::EvalMode;
    use crate::syntax::parse_sl;

    const PHI_STAR: &str = "[[x]]<<y>>[[z]](alpha,x)(beta,y)(gamma,z) X p";

    #[test]
    fn three_agent_fixtures() {
        for (name, expected) in [("g1", Verdict::True), ("g2", Verdict::False)] {
            for engine in [Engine::Auto, Engine::Automata, Engine::Enum] {
                let req = CheckRequest::new(fixture(name).unwrap(), parse_sl(PHI_STAR).unwrap())
                    .engine(engine);
                let report = model_check(&req).unwrap();
                assert_eq!(report.verdict, expected, "{name} {engine}");
                assert!(!report.restricted);
            }
        }
    }

    #[test]
    fn nested_sentences_are_labelled_in_post_order() {
        let f = parse_sl(
            "<<x>>(alpha,x) X ((<<y>>(alpha,y) X p) & !(<<z>>(alpha,z) X !p))",
        )
        .unwrap();
        let g = fixture("rdc").unwrap();
        let order = checked_subsentences(&f, g.agents());
        assert_eq!(order.len(), 3);
        assert_eq!(order[0].to_string(), parse_sl("<<y>>(alpha,y) X p").unwrap().to_string());
        assert_eq!(order[2], f);
        let report = model_check(&CheckRequest::new(g.clone(), f.clone())).unwrap();
        assert_eq!(report.entries.len(), 3);
        assert!(report.entries[2].checked.contains("@snt0"));
        assert!(report.entries[2].checked.contains("@snt1"));
        let direct = eval_classic(&g, &f, g.initial(), &Assignment::new(), EvalMode::ExactHorizon(2))
            .unwrap();
        assert_eq!(report.verdict, direct);
    }

    #[test]
    fn boolean_root_is_checked_last() {
        let f = parse_sl("(<<x>>(alpha,x) X p) & !(<<x>>(alpha,x) X X p)").unwrap();
        let g = fixture("rdc").unwrap();
        let report = model_check(&CheckRequest::new(g, f)).unwrap();
        assert_eq!(report.entries.len(), 3);
        assert_eq!(report.entries[2].checked, "(@snt0 & !@snt1)");
        assert_eq!(report.verdict, Verdict::False);
    }

    #[test]
    fn free_variables_are_rejected() {
        let f = parse_sl("(alpha,x) X p").unwrap();
        let req = CheckRequest::new(fixture("rdc").unwrap(), f);
        assert!(matches!(model_check(&req), Err(Error::NotASentence(_))));
    }

    #[test]
    fn until_goes_to_the_automata_engine() {
        let f = parse_sl("<<x>>(alpha,x) F p").unwrap();
        let req = CheckRequest::new(fixture("rdc").unwrap(), f);
        let report = model_check(&req).unwrap();
        assert_eq!(report.entries[0].engine, EngineUsed::Automata);
        assert_eq!(report.verdict, Verdict::True);
    }

    #[test]
    fn bounded_mode_is_flagged() {
        let f = parse_sl("<<x>>(alpha,x) F p").unwrap();
        let req = CheckRequest::new(fixture("rdc").unwrap(), f).engine(Engine::Enum);
        let report = model_check(&req).unwrap();
        assert_eq!(report.entries[0].engine, EngineUsed::EnumBounded);
        assert!(report.restricted);
        assert_eq!(report.verdict, Verdict::True);
    }
}
