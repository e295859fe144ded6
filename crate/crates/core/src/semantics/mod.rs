//! The enumerative engine: classic and elementary semantics evaluated over
//! finite strategy carriers.
//!
//! Two carriers are available. [`EvalMode::ExactHorizon`] quantifies over
//! track tables deep enough for the X-depth of each quantified body, which is
//! exact for formulas without `U` and `R`. [`EvalMode::BoundedMemory`]
//! quantifies over transducers with a fixed number of memory states and
//! evaluates plays exactly through their lasso; its verdicts describe the
//! restricted semantics and are flagged as such.

mod carrier;
mod engine;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dependence::DEFAULT_BOUND;
use crate::error::{Error, Result};
use crate::model::{Assignment, Cgs, Place, StateId, Strategy};
use crate::syntax::{free, is_ngsl, xdepth, Formula};
use engine::{Env, Evaluator, Route, Val};

/// Strategy carrier used for quantification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EvalMode {
    /// Track tables; requires X-depth at most `h` and no `U`/`R`.
    ExactHorizon(usize),
    /// Transducers with `m` memory states.
    BoundedMemory(usize),
}

impl EvalMode {
    /// Whether verdicts in this mode describe a restricted semantics.
    pub fn is_restricted(self) -> bool {
        matches!(self, EvalMode::BoundedMemory(_))
    }
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalMode::ExactHorizon(h) => write!(f, "exact-horizon({h})"),
            EvalMode::BoundedMemory(m) => write!(f, "bounded-memory({m})"),
        }
    }
}

impl FromStr for EvalMode {
    type Err = Error;

    /// Accepts `exact-horizon(h)` and `bounded-memory(m)`.
    fn from_str(s: &str) -> Result<EvalMode> {
        let s = s.trim();
        let arg = |prefix: &str| -> Option<usize> {
            s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
        };
        if let Some(h) = arg("exact-horizon") {
            Ok(EvalMode::ExactHorizon(h))
        } else if let Some(m) = arg("bounded-memory") {
            Ok(EvalMode::BoundedMemory(m))
        } else {
            Err(Error::Validation(format!("unknown evaluation mode `{s}`")))
        }
    }
}

/// Three-valued verdict.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "value", content = "reason", rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown(String),
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Unknown(_) => None,
        }
    }

    pub fn is_known(&self) -> bool {
        self.as_bool().is_some()
    }

    /// Kleene negation.
    pub fn negate(&self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Unknown(r) => Verdict::Unknown(r.clone()),
        }
    }

    /// Kleene conjunction.
    pub fn and(&self, other: &Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            (Verdict::Unknown(r), _) | (_, Verdict::Unknown(r)) => Verdict::Unknown(r.clone()),
        }
    }

    /// Kleene disjunction.
    pub fn or(&self, other: &Verdict) -> Verdict {
        self.negate().and(&other.negate()).negate()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => write!(f, "true"),
            Verdict::False => write!(f, "false"),
            Verdict::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

/// Options for [`eval_classic_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub mode: EvalMode,
    /// Resolve quantifier blocks through Skolem tables instead of nested
    /// loops.
    pub skolem: bool,
    /// Largest carrier, scenario set or cell table an evaluation may build.
    pub bound: u64,
}

impl EvalOptions {
    pub fn new(mode: EvalMode) -> EvalOptions {
        EvalOptions {
            mode,
            skolem: false,
            bound: DEFAULT_BOUND,
        }
    }

    pub fn skolem(mut self, on: bool) -> EvalOptions {
        self.skolem = on;
        self
    }
}

/// Nesting depth of `X`, or `None` when `U` or `R` occurs (`F` and `G`
/// included).
pub fn temporal_xdepth(f: &Formula) -> Option<usize> {
    xdepth(f)
}

fn check_mode(f: &Formula, mode: EvalMode) -> Result<()> {
    match mode {
        EvalMode::ExactHorizon(h) => match xdepth(f) {
            None => Err(Error::ModeInsufficient(
                "until and release are not covered by an exact horizon".into(),
            )),
            Some(d) if d > h => Err(Error::ModeInsufficient(format!(
                "X-depth {d} exceeds horizon {h}"
            ))),
            Some(_) => Ok(()),
        },
        EvalMode::BoundedMemory(0) => {
            Err(Error::Validation("memory bound must be positive".into()))
        }
        EvalMode::BoundedMemory(_) => Ok(()),
    }
}

fn environment(g: &Cgs, f: &Formula, s: StateId, chi: &Assignment) -> Result<Env> {
    for p in free(f, g.agents()) {
        if chi.get(&p).is_none() {
            let name = match p {
                Place::Agent(a) | Place::Var(a) => a,
            };
            return Err(Error::Unbound(name));
        }
    }
    if !chi.is_total_at(s) {
        return Err(Error::DomainMismatch(format!(
            "assignment is not total at state {s}"
        )));
    }
    let mut env = Env::new(g.n_agents());
    for (place, sigma) in chi.iter() {
        let v = match sigma {
            Strategy::Transducer(t) => Val::Machine {
                machine: Arc::new(t.machine().clone()),
                mem: t.memory(),
            },
            other => Val::External {
                strategy: Arc::new(other.clone()),
                anchor: 0,
            },
        };
        match place {
            Place::Var(x) => env.push_var(x, v),
            Place::Agent(a) => env.set_agent(g.require_agent(a)?, v),
        }
    }
    Ok(env)
}

/// `G, χ, s ⊨ φ` under the classic semantics, quantifying literally.
pub fn eval_classic(
    g: &Cgs,
    f: &Formula,
    s: StateId,
    chi: &Assignment,
    mode: EvalMode,
) -> Result<Verdict> {
    eval_classic_with(g, f, s, chi, &EvalOptions::new(mode))
}

/// [`eval_classic`] with explicit options.
pub fn eval_classic_with(
    g: &Cgs,
    f: &Formula,
    s: StateId,
    chi: &Assignment,
    opts: &EvalOptions,
) -> Result<Verdict> {
    check_mode(f, opts.mode)?;
    if s >= g.n_states() {
        return Err(Error::Validation(format!("no state {s}")));
    }
    let env = environment(g, f, s, chi)?;
    let route = if opts.skolem {
        Route::Skolem
    } else {
        Route::Literal
    };
    let mut ev = Evaluator::new(g, f, route, opts.mode, opts.bound)?;
    ev.run(s, &env).map(Verdict::from_bool)
}

/// `G, ∅, s ⊨_E φ` for an NG-SL sentence: every quantifier block ranges over
/// elementary dependence maps, given by one action-level map per track.
pub fn eval_elementary(g: &Cgs, f: &Formula, s: StateId, mode: EvalMode) -> Result<Verdict> {
    eval_elementary_with(g, f, s, mode, DEFAULT_BOUND)
}

/// [`eval_elementary`] with an explicit enumeration bound.
pub fn eval_elementary_with(
    g: &Cgs,
    f: &Formula,
    s: StateId,
    mode: EvalMode,
    bound: u64,
) -> Result<Verdict> {
    if !is_ngsl(f, g.agents()) {
        return Err(Error::NotNgsl(f.to_string()));
    }
    if mode.is_restricted() {
        return Err(Error::Unsupported(
            "elementary semantics over bounded-memory carriers".into(),
        ));
    }
    check_mode(f, mode)?;
    if s >= g.n_states() {
        return Err(Error::Validation(format!("no state {s}")));
    }
    let mut ev = Evaluator::new(g, f, Route::Elementary, mode, bound)?;
    ev.run(s, &Env::new(g.n_agents())).map(Verdict::from_bool)
}

/// A model point for [`check_equivalence`].
#[derive(Debug, Clone)]
pub struct ModelPoint {
    pub cgs: Cgs,
    pub state: StateId,
    pub assignment: Assignment,
}

impl ModelPoint {
    /// The initial state of `cgs` with the empty assignment.
    pub fn initial(cgs: Cgs) -> ModelPoint {
        let state = cgs.initial();
        ModelPoint {
            cgs,
            state,
            assignment: Assignment::new(),
        }
    }
}

/// Verdicts of both formulas at one model point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointComparison {
    pub classic: (Verdict, Verdict),
    /// Present when both formulas are NG-SL sentences and the assignment is
    /// empty.
    pub elementary: Option<(Verdict, Verdict)>,
}

/// Agreement table of two formulas over a finite set of model points. It
/// says nothing about points outside the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub points: Vec<PointComparison>,
}

impl EquivalenceReport {
    pub fn classic_agree(&self) -> bool {
        self.points.iter().all(|p| p.classic.0 == p.classic.1)
    }

    /// Agreement on every point where the elementary semantics applies.
    pub fn elementary_agree(&self) -> bool {
        self.points
            .iter()
            .filter_map(|p| p.elementary.as_ref())
            .all(|(a, b)| a == b)
    }
}

/// Evaluates `f1` and `f2` on every model point under both semantics.
pub fn check_equivalence(
    f1: &Formula,
    f2: &Formula,
    models: &[ModelPoint],
    mode: EvalMode,
) -> Result<EquivalenceReport> {
    let mut points = Vec::with_capacity(models.len());
    for m in models {
        let agents = m.cgs.agents();
        let (free1, free2) = (free(f1, agents), free(f2, agents));
        if free1 != free2 {
            return Err(Error::FreeMismatch(format!("{free1:?} versus {free2:?}")));
        }
        let classic = (
            eval_classic(&m.cgs, f1, m.state, &m.assignment, mode)?,
            eval_classic(&m.cgs, f2, m.state, &m.assignment, mode)?,
        );
        let elementary_applies = free1.is_empty()
            && m.assignment.places().next().is_none()
            && !mode.is_restricted()
            && is_ngsl(f1, agents)
            && is_ngsl(f2, agents);
        let elementary = if elementary_applies {
            Some((
                eval_elementary(&m.cgs, f1, m.state, mode)?,
                eval_elementary(&m.cgs, f2, m.state, mode)?,
            ))
        } else {
            None
        };
        points.push(PointComparison { classic, elementary });
    }
    Ok(EquivalenceReport { points })
}
