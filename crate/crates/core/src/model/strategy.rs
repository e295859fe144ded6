//! Finite carriers for strategies, assignments and plays.
//!
//! A strategy maps tracks to actions. Three carriers are provided: track
//! tables (total up to a horizon), finite-memory transducers, and arbitrary
//! functions of the track. Translation along a track is kept symbolic: a
//! translated strategy remembers the prefix it was translated along (tables
//! and functions) or the memory reached after reading it (transducers).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::cgs::{ActionId, Cgs, StateId};
use super::track::{tracks_from, Path, Track};
use crate::error::{Error, Result};

/// A table defined on every track of length `1..=horizon` from `anchor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableStrategy {
    horizon: usize,
    entries: Arc<HashMap<Vec<StateId>, ActionId>>,
    prefix: Vec<StateId>,
}

impl TableStrategy {
    /// Tabulates `f` on every track of length at most `horizon` from `anchor`.
    pub fn from_fn(
        g: &Cgs,
        anchor: StateId,
        horizon: usize,
        mut f: impl FnMut(&[StateId]) -> ActionId,
    ) -> TableStrategy {
        let entries = tracks_from(g, anchor, horizon)
            .into_iter()
            .map(|t| {
                let a = f(t.states());
                (t.into_vec(), a)
            })
            .collect();
        TableStrategy {
            horizon,
            entries: Arc::new(entries),
            prefix: vec![anchor],
        }
    }

    /// Builds a table from explicit entries, checking totality.
    pub fn from_entries(
        g: &Cgs,
        anchor: StateId,
        horizon: usize,
        entries: HashMap<Vec<StateId>, ActionId>,
    ) -> Result<TableStrategy> {
        for t in tracks_from(g, anchor, horizon) {
            match entries.get(t.states()) {
                Some(&a) if a < g.n_actions() => {}
                Some(_) => return Err(Error::Validation("table entry out of range".into())),
                None => {
                    return Err(Error::Validation(format!(
                        "table undefined on track {:?}",
                        t.states()
                    )))
                }
            }
        }
        Ok(TableStrategy {
            horizon,
            entries: Arc::new(entries),
            prefix: vec![anchor],
        })
    }

    /// The state the strategy is currently anchored at.
    pub fn anchor(&self) -> StateId {
        *self.prefix.last().expect("prefix is non-empty")
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

/// Finite-memory strategy: `m_0 = initial`, `m_{i+1} = update(m_i, s_i)`, and
/// the action on `s_0 … s_k` is `output(m_k, s_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transducer {
    memory_size: usize,
    n_states: usize,
    initial: usize,
    update: Vec<usize>,
    output: Vec<ActionId>,
}

impl Transducer {
    /// `update` and `output` are indexed by `memory * n_states + state`.
    pub fn new(
        memory_size: usize,
        n_states: usize,
        initial: usize,
        update: Vec<usize>,
        output: Vec<ActionId>,
    ) -> Result<Transducer> {
        let cells = memory_size * n_states;
        if memory_size == 0 || initial >= memory_size {
            return Err(Error::Validation("transducer memory is empty".into()));
        }
        if update.len() != cells || output.len() != cells {
            return Err(Error::Validation("transducer tables are not total".into()));
        }
        if update.iter().any(|&m| m >= memory_size) {
            return Err(Error::Validation("transducer update out of range".into()));
        }
        Ok(Transducer {
            memory_size,
            n_states,
            initial,
            update,
            output,
        })
    }

    /// Memoryless strategy choosing `actions[s]` at state `s`.
    pub fn memoryless(actions: Vec<ActionId>) -> Transducer {
        let n = actions.len();
        Transducer {
            memory_size: 1,
            n_states: n,
            initial: 0,
            update: vec![0; n],
            output: actions,
        }
    }

    /// Strategy playing `a` everywhere.
    pub fn constant(g: &Cgs, a: ActionId) -> Transducer {
        Transducer::memoryless(vec![a; g.n_states()])
    }

    pub fn memory_size(&self) -> usize {
        self.memory_size
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn update(&self, m: usize, s: StateId) -> usize {
        self.update[m * self.n_states + s]
    }

    pub fn output(&self, m: usize, s: StateId) -> ActionId {
        self.output[m * self.n_states + s]
    }
}

/// A transducer together with its current memory.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransducerStrategy {
    machine: Arc<Transducer>,
    memory: usize,
}

impl TransducerStrategy {
    pub fn new(machine: Transducer) -> TransducerStrategy {
        let memory = machine.initial;
        TransducerStrategy {
            machine: Arc::new(machine),
            memory,
        }
    }

    pub fn machine(&self) -> &Transducer {
        &self.machine
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Memory after reading every state of `track` except the last.
    fn advance(&self, track: &[StateId]) -> usize {
        track[..track.len() - 1]
            .iter()
            .fold(self.memory, |m, &s| self.machine.update(m, s))
    }
}

type TrackFn = dyn Fn(&[StateId]) -> ActionId + Send + Sync;

/// A strategy given by an arbitrary function of the full track.
#[derive(Clone)]
pub struct FunctionStrategy {
    f: Arc<TrackFn>,
    prefix: Vec<StateId>,
}

impl FunctionStrategy {
    pub fn new(f: impl Fn(&[StateId]) -> ActionId + Send + Sync + 'static) -> FunctionStrategy {
        FunctionStrategy {
            f: Arc::new(f),
            prefix: Vec::new(),
        }
    }
}

impl fmt::Debug for FunctionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionStrategy")
            .field("prefix", &self.prefix)
            .finish_non_exhaustive()
    }
}

/// A strategy over one of the finite carriers.
#[derive(Debug, Clone)]
pub enum Strategy {
    Table(TableStrategy),
    Transducer(TransducerStrategy),
    Function(FunctionStrategy),
}

impl From<TableStrategy> for Strategy {
    fn from(t: TableStrategy) -> Self {
        Strategy::Table(t)
    }
}

impl From<Transducer> for Strategy {
    fn from(t: Transducer) -> Self {
        Strategy::Transducer(TransducerStrategy::new(t))
    }
}

impl From<FunctionStrategy> for Strategy {
    fn from(f: FunctionStrategy) -> Self {
        Strategy::Function(f)
    }
}

fn join(prefix: &[StateId], track: &[StateId]) -> Result<Vec<StateId>> {
    match prefix.last() {
        None => Ok(track.to_vec()),
        Some(&anchor) if anchor == track[0] => {
            let mut full = prefix.to_vec();
            full.extend_from_slice(&track[1..]);
            Ok(full)
        }
        Some(&anchor) => Err(Error::DomainMismatch(format!(
            "track starts at state {} but the strategy is anchored at {}",
            track[0], anchor
        ))),
    }
}

impl Strategy {
    /// The action chosen on `track`.
    pub fn query(&self, track: &[StateId]) -> Result<ActionId> {
        if track.is_empty() {
            return Err(Error::DomainMismatch("empty track".into()));
        }
        match self {
            Strategy::Table(t) => {
                let full = join(&t.prefix, track)?;
                if full.len() > t.horizon {
                    return Err(Error::HorizonExceeded {
                        horizon: t.horizon,
                        length: full.len(),
                    });
                }
                t.entries.get(&full).copied().ok_or_else(|| {
                    Error::DomainMismatch(format!("track {full:?} is not in the table"))
                })
            }
            Strategy::Transducer(t) => {
                let m = t.advance(track);
                Ok(t.machine.output(m, track[track.len() - 1]))
            }
            Strategy::Function(f) => Ok((f.f)(&join(&f.prefix, track)?)),
        }
    }

    /// Translation along `rho`: the result maps `rho'` to `self(rho · rho'_{≥1})`
    /// and is anchored at the last state of `rho`.
    pub fn translate(&self, rho: &[StateId]) -> Result<Strategy> {
        if rho.is_empty() {
            return Err(Error::DomainMismatch("empty track".into()));
        }
        Ok(match self {
            Strategy::Table(t) => Strategy::Table(TableStrategy {
                horizon: t.horizon,
                entries: t.entries.clone(),
                prefix: join(&t.prefix, rho)?,
            }),
            Strategy::Transducer(t) => Strategy::Transducer(TransducerStrategy {
                machine: t.machine.clone(),
                memory: t.advance(rho),
            }),
            Strategy::Function(f) => Strategy::Function(FunctionStrategy {
                f: f.f.clone(),
                prefix: join(&f.prefix, rho)?,
            }),
        })
    }

    /// The state the strategy is anchored at, if it is anchored at all.
    pub fn anchor(&self) -> Option<StateId> {
        match self {
            Strategy::Table(t) => Some(t.anchor()),
            Strategy::Transducer(_) => None,
            Strategy::Function(f) => f.prefix.last().copied(),
        }
    }

    /// Whether the strategy can be queried on tracks starting at `s`.
    pub fn is_total_at(&self, s: StateId) -> bool {
        self.anchor().map_or(true, |a| a == s)
    }
}

/// Translation of a strategy along a track.
pub fn translate_strategy(sigma: &Strategy, rho: &[StateId]) -> Result<Strategy> {
    sigma.translate(rho)
}

/// A place in an assignment: an agent or a variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Agent(String),
    Var(String),
}

/// Partial map from agents and variables to strategies.
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    entries: BTreeMap<Place, Strategy>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn get(&self, place: &Place) -> Option<&Strategy> {
        self.entries.get(place)
    }

    pub fn agent(&self, name: &str) -> Option<&Strategy> {
        self.entries.get(&Place::Agent(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Option<&Strategy> {
        self.entries.get(&Place::Var(name.to_string()))
    }

    /// Functional update of one binding.
    pub fn redefine(&self, place: Place, sigma: Strategy) -> Assignment {
        let mut out = self.clone();
        out.entries.insert(place, sigma);
        out
    }

    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, &Strategy)> {
        self.entries.iter()
    }

    /// Whether every agent of `g` is bound.
    pub fn is_complete(&self, g: &Cgs) -> bool {
        g.agents().iter().all(|a| self.agent(a).is_some())
    }

    /// Whether every strategy can be queried on tracks starting at `s`.
    pub fn is_total_at(&self, s: StateId) -> bool {
        self.entries.values().all(|sigma| sigma.is_total_at(s))
    }

    /// Pointwise translation along `rho`.
    pub fn translate(&self, rho: &[StateId]) -> Result<Assignment> {
        let entries = self
            .entries
            .iter()
            .map(|(p, sigma)| Ok((p.clone(), sigma.translate(rho)?)))
            .collect::<Result<_>>()?;
        Ok(Assignment { entries })
    }

    fn agent_strategies(&self, g: &Cgs) -> Result<Vec<&Strategy>> {
        g.agents()
            .iter()
            .map(|a| self.agent(a).ok_or_else(|| Error::Unbound(a.clone())))
            .collect()
    }
}

/// Pointwise translation of an assignment along `rho`.
pub fn translate_assignment(chi: &Assignment, rho: &[StateId]) -> Result<Assignment> {
    chi.translate(rho)
}

/// Functional update of one binding.
pub fn redefine(chi: &Assignment, place: Place, sigma: Strategy) -> Assignment {
    chi.redefine(place, sigma)
}

/// The outcome of a play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Play {
    /// The first `horizon + 1` positions.
    Track(Track),
    /// The whole infinite play.
    Path(Path),
}

/// The play of a complete assignment from `s`.
///
/// With `Some(h)` the first `h + 1` positions are returned. With `None` every
/// agent must be bound to a transducer and the eventually periodic play is
/// returned.
pub fn play(g: &Cgs, chi: &Assignment, s: StateId, horizon: Option<usize>) -> Result<Play> {
    let strategies = chi.agent_strategies(g)?;
    match horizon {
        Some(h) => {
            let mut track = vec![s];
            for _ in 0..h {
                let d = strategies
                    .iter()
                    .map(|sigma| sigma.query(&track))
                    .collect::<Result<Vec<_>>>()?;
                track.push(g.step(*track.last().expect("non-empty"), &d));
            }
            Ok(Play::Track(Track::from_vec(track)))
        }
        None => {
            let machines = strategies
                .iter()
                .map(|sigma| match sigma {
                    Strategy::Transducer(t) => Ok(t),
                    _ => Err(Error::ModeInsufficient(
                        "unbounded plays need transducer strategies".into(),
                    )),
                })
                .collect::<Result<Vec<_>>>()?;
            let mut seen: HashMap<(StateId, Vec<usize>), usize> = HashMap::new();
            let mut states = Vec::new();
            let mut config = (s, machines.iter().map(|t| t.memory).collect::<Vec<_>>());
            loop {
                if let Some(&start) = seen.get(&config) {
                    let cycle = states.split_off(start);
                    return Path::new(states, cycle).map(Play::Path);
                }
                seen.insert(config.clone(), states.len());
                let (cur, mem) = &config;
                states.push(*cur);
                let d: Vec<ActionId> = machines
                    .iter()
                    .zip(mem)
                    .map(|(t, &m)| t.machine.output(m, *cur))
                    .collect();
                let next_mem = machines
                    .iter()
                    .zip(mem)
                    .map(|(t, &m)| t.machine.update(m, *cur))
                    .collect();
                config = (g.step(*cur, &d), next_mem);
            }
        }
    }
}

/// The `i`-th global translation: the assignment translated along the first
/// `i + 1` positions of the play, paired with the state reached.
pub fn global_translation(
    g: &Cgs,
    chi: &Assignment,
    s: StateId,
    i: usize,
) -> Result<(Assignment, StateId)> {
    if i == 0 {
        return Ok((chi.clone(), s));
    }
    let Play::Track(track) = play(g, chi, s, Some(i))? else {
        unreachable!("bounded plays are tracks")
    };
    Ok((chi.translate(track.states())?, track.last()))
}
