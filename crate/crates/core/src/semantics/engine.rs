//! The enumerative evaluator.
//!
//! Strategies are kept relative to a global history: a strategy introduced at
//! position `i` is queried on the suffix of the history starting at `i`, which
//! realises translation along the play without copying tables. Transducers
//! carry their current memory instead and advance it on every step.
//!
//! Quantifier blocks are resolved in one of three ways. The literal route
//! nests one loop per quantifier. The Skolem route searches for Skolem tables
//! over the strategy carrier, one cell per existential and valuation of the
//! universals it depends on. The elementary route searches one action-level
//! dependence map per track, one cell per track, existential and valuation of
//! the universals' actions on that track. Both searches use conflict-directed
//! backjumping over lazily read cells.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::carrier::{bounded_pow, digit, machines, too_large, Trie};
use super::EvalMode;
use crate::error::{Error, Result};
use crate::model::{ActionId, AgentId, AtomId, Cgs, StateId, Strategy, Transducer};
use crate::syntax::{is_sentence, Formula, Quantifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Route {
    Literal,
    Skolem,
    Elementary,
}

#[derive(Debug, Clone)]
enum Kind {
    True,
    False,
    Atom(AtomId),
    Not,
    And,
    Or,
    Next,
    Until,
    Release,
    Block(Vec<(Quantifier, String)>),
    Bind(AgentId, String),
}

#[derive(Debug, Clone)]
struct Node {
    kind: Kind,
    children: Vec<usize>,
    sentence: bool,
    /// X-depth with subsentences counted as atoms; `None` under U or R.
    local_depth: Option<usize>,
}

/// A strategy value held by a variable or an agent.
#[derive(Clone)]
pub(crate) enum Val {
    Table {
        trie: Arc<Trie>,
        index: u64,
        anchor: usize,
    },
    Machine {
        machine: Arc<Transducer>,
        mem: usize,
    },
    External {
        strategy: Arc<Strategy>,
        anchor: usize,
    },
    Elementary {
        level: usize,
        block: Arc<ElemBlock>,
        k: usize,
        univ: Arc<Vec<u64>>,
        anchor: usize,
    },
}

/// Shape of the cells of an elementary block.
pub(crate) struct ElemBlock {
    trie: Arc<Trie>,
    n_actions: usize,
    /// For each existential, indices (into the universals) it depends on.
    deps: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    per_node: usize,
}

#[derive(Clone, Default)]
pub(crate) struct Env {
    vars: Vec<(String, Val)>,
    agents: Vec<Option<Val>>,
}

impl Env {
    pub(crate) fn new(n_agents: usize) -> Env {
        Env {
            vars: Vec::new(),
            agents: vec![None; n_agents],
        }
    }

    fn var(&self, x: &str) -> Option<&Val> {
        self.vars.iter().rev().find(|(y, _)| y == x).map(|(_, v)| v)
    }

    pub(crate) fn push_var(&mut self, x: &str, v: Val) {
        self.vars.push((x.to_string(), v));
    }

    pub(crate) fn set_agent(&mut self, a: AgentId, v: Val) {
        self.agents[a] = Some(v);
    }

    fn advanced(&self, s: StateId) -> Env {
        let step = |v: &Val| match v {
            Val::Machine { machine, mem } => Val::Machine {
                machine: machine.clone(),
                mem: machine.update(*mem, s),
            },
            other => other.clone(),
        };
        Env {
            vars: self.vars.iter().map(|(x, v)| (x.clone(), step(v))).collect(),
            agents: self.agents.iter().map(|v| v.as_ref().map(step)).collect(),
        }
    }

    /// Memories of every strategy, or `None` if some strategy is not a
    /// transducer.
    fn memories(&self) -> Option<Vec<usize>> {
        self.vars
            .iter()
            .map(|(_, v)| v)
            .chain(self.agents.iter().flatten())
            .map(|v| match v {
                Val::Machine { mem, .. } => Some(*mem),
                _ => None,
            })
            .collect()
    }
}

pub(crate) enum Flow {
    Need { level: usize, cell: usize },
    Fail(Error),
}

impl From<Error> for Flow {
    fn from(e: Error) -> Flow {
        Flow::Fail(e)
    }
}

type Ev<T> = std::result::Result<T, Flow>;

struct Level {
    assign: Vec<Option<usize>>,
    reads: Vec<usize>,
}

enum Cells {
    Skolem {
        carrier: Carrier,
        deps: Vec<Vec<usize>>,
        offsets: Vec<usize>,
    },
    Elementary(Arc<ElemBlock>),
}

struct Plan {
    level: usize,
    body: usize,
    entries: Vec<(Quantifier, String)>,
    universal_carrier: Carrier,
    n_universals: usize,
    n_scenarios: u64,
    domain: usize,
    cells: Cells,
    env: Env,
    anchor: usize,
}

#[derive(Clone)]
enum Carrier {
    Tables { trie: Arc<Trie>, size: u64 },
    Machines(Arc<Vec<Arc<Transducer>>>),
}

impl Carrier {
    fn size(&self) -> u64 {
        match self {
            Carrier::Tables { size, .. } => *size,
            Carrier::Machines(ms) => ms.len() as u64,
        }
    }

    fn value(&self, index: u64, anchor: usize) -> Val {
        match self {
            Carrier::Tables { trie, .. } => Val::Table {
                trie: trie.clone(),
                index,
                anchor,
            },
            Carrier::Machines(ms) => Val::Machine {
                machine: ms[index as usize].clone(),
                mem: 0,
            },
        }
    }
}

pub(crate) struct Evaluator<'g> {
    g: &'g Cgs,
    nodes: Vec<Node>,
    route: Route,
    mode: EvalMode,
    bound: u64,
    hist: Vec<StateId>,
    levels: Vec<Level>,
    cache: HashMap<(usize, StateId), bool>,
    tries: HashMap<(StateId, usize), Arc<Trie>>,
    machines: Option<Arc<Vec<Arc<Transducer>>>>,
}

impl<'g> Evaluator<'g> {
    pub(crate) fn new(
        g: &'g Cgs,
        f: &Formula,
        route: Route,
        mode: EvalMode,
        bound: u64,
    ) -> Result<Evaluator<'g>> {
        let mut ev = Evaluator {
            g,
            nodes: Vec::new(),
            route,
            mode,
            bound,
            hist: Vec::new(),
            levels: Vec::new(),
            cache: HashMap::new(),
            tries: HashMap::new(),
            machines: None,
        };
        ev.compile(f)?;
        Ok(ev)
    }

    /// Adds `f` to the arena; the root is the last node.
    fn compile(&mut self, f: &Formula) -> Result<usize> {
        let agents = self.g.agents();
        let sentence = is_sentence(f, agents);
        let (kind, children) = match f {
            Formula::True => (Kind::True, vec![]),
            Formula::False => (Kind::False, vec![]),
            Formula::Atom(p) => {
                let id = self.g.atom_id(p).ok_or_else(|| Error::UndeclaredName {
                    kind: "atom",
                    name: p.clone(),
                })?;
                (Kind::Atom(id), vec![])
            }
            Formula::Not(a) => (Kind::Not, vec![self.compile(a)?]),
            Formula::And(a, b) => (Kind::And, vec![self.compile(a)?, self.compile(b)?]),
            Formula::Or(a, b) => (Kind::Or, vec![self.compile(a)?, self.compile(b)?]),
            Formula::Next(a) => (Kind::Next, vec![self.compile(a)?]),
            Formula::Until(a, b) => (Kind::Until, vec![self.compile(a)?, self.compile(b)?]),
            Formula::Release(a, b) => (Kind::Release, vec![self.compile(a)?, self.compile(b)?]),
            Formula::Quant(..) => {
                let mut entries = Vec::new();
                let mut cur = f;
                while let Formula::Quant(q, x, body) = cur {
                    entries.push((*q, x.clone()));
                    cur = body;
                }
                (Kind::Block(entries), vec![self.compile(cur)?])
            }
            Formula::Bind(a, x, body) => {
                let id = self.g.require_agent(a)?;
                (Kind::Bind(id, x.clone()), vec![self.compile(body)?])
            }
            Formula::PropQuant(..) => {
                return Err(Error::Dialect(
                    "proposition quantifiers are not Strategy Logic".into(),
                ))
            }
        };
        let child_depth = |n: &Node| if n.sentence { Some(0) } else { n.local_depth };
        let mut local_depth = Some(0);
        for &c in &children {
            local_depth = match (local_depth, child_depth(&self.nodes[c])) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
        }
        match kind {
            Kind::Next => local_depth = local_depth.map(|d| d + 1),
            Kind::Until | Kind::Release => local_depth = None,
            _ => {}
        }
        self.nodes.push(Node {
            kind,
            children,
            sentence,
            local_depth,
        });
        Ok(self.nodes.len() - 1)
    }

    pub(crate) fn run(&mut self, s: StateId, env: &Env) -> Result<bool> {
        self.hist.clear();
        self.hist.push(s);
        let root = self.nodes.len() - 1;
        match self.eval(root, env) {
            Ok(b) => Ok(b),
            Err(Flow::Fail(e)) => Err(e),
            Err(Flow::Need { .. }) => Err(Error::Validation(
                "internal: unresolved cell at the top level".into(),
            )),
        }
    }

    fn cur(&self) -> StateId {
        *self.hist.last().expect("history is never empty")
    }

    fn eval(&mut self, n: usize, env: &Env) -> Ev<bool> {
        let node = &self.nodes[n];
        let cacheable = node.sentence && matches!(node.kind, Kind::Block(_));
        if cacheable {
            if let Some(&b) = self.cache.get(&(n, self.cur())) {
                return Ok(b);
            }
        }
        let kind = node.kind.clone();
        let ch = node.children.clone();
        let r = match kind {
            Kind::True => true,
            Kind::False => false,
            Kind::Atom(p) => self.g.label(self.cur()).contains(&p),
            Kind::Not => !self.eval(ch[0], env)?,
            Kind::And => self.eval(ch[0], env)? && self.eval(ch[1], env)?,
            Kind::Or => self.eval(ch[0], env)? || self.eval(ch[1], env)?,
            Kind::Next => {
                let (next_env, next) = self.step(env)?;
                self.hist.push(next);
                let r = self.eval(ch[0], &next_env);
                self.hist.pop();
                r?
            }
            Kind::Until => self.until(ch[0], ch[1], env, false)?,
            Kind::Release => self.until(ch[0], ch[1], env, true)?,
            Kind::Bind(a, x) => {
                let v = env
                    .var(&x)
                    .cloned()
                    .ok_or_else(|| Error::Unbound(x.clone()))?;
                let mut inner = env.clone();
                inner.agents[a] = Some(v);
                self.eval(ch[0], &inner)?
            }
            Kind::Block(entries) => self.block(&entries, ch[0], env)?,
        };
        if cacheable {
            self.cache.insert((n, self.cur()), r);
        }
        Ok(r)
    }

    /// The successor state and the environment translated along one step.
    fn step(&mut self, env: &Env) -> Ev<(Env, StateId)> {
        let mut d = Vec::with_capacity(env.agents.len());
        for (a, v) in env.agents.iter().enumerate() {
            let v = v
                .as_ref()
                .ok_or_else(|| Error::Unbound(self.g.agents()[a].clone()))?;
            d.push(self.query(v)?);
        }
        let s = self.cur();
        Ok((env.advanced(s), self.g.step(s, &d)))
    }

    fn query(&mut self, v: &Val) -> Ev<ActionId> {
        let j = self.hist.len() - 1;
        match v {
            Val::Table { trie, index, anchor } => {
                let node = trie.locate(&self.hist[*anchor..])?;
                Ok(digit(*index, node, trie.len(), self.g.n_actions()))
            }
            Val::Machine { machine, mem } => Ok(machine.output(*mem, self.hist[j])),
            Val::External { strategy, anchor } => Ok(strategy.query(&self.hist[*anchor..])?),
            Val::Elementary {
                level,
                block,
                k,
                univ,
                anchor,
            } => {
                let node = block.trie.locate(&self.hist[*anchor..])?;
                let n_nodes = block.trie.len();
                let a = block.n_actions;
                let local = block.deps[*k]
                    .iter()
                    .fold(0, |acc, &u| acc * a + digit(univ[u], node, n_nodes, a));
                let cell = node * block.per_node + block.offsets[*k] + local;
                self.read(*level, cell)
            }
        }
    }

    fn read(&mut self, level: usize, cell: usize) -> Ev<usize> {
        let l = &mut self.levels[level];
        match l.assign[cell] {
            Some(v) => {
                l.reads.push(cell);
                Ok(v)
            }
            None => Err(Flow::Need { level, cell }),
        }
    }

    /// `a U b`, or `a R b` when `release` is set, by running the play until
    /// its configuration repeats.
    fn until(&mut self, a: usize, b: usize, env: &Env, release: bool) -> Ev<bool> {
        if let EvalMode::ExactHorizon(_) = self.mode {
            return Err(Error::ModeInsufficient(
                "until and release need bounded-memory mode".into(),
            )
            .into());
        }
        let base = self.hist.len();
        let mut env = env.clone();
        let mut seen = HashSet::new();
        let r = loop {
            let mems = env.memories().ok_or_else(|| {
                Error::ModeInsufficient("until and release need transducer strategies".into())
            })?;
            if !seen.insert((self.cur(), mems)) {
                break Ok(release);
            }
            let (stop, verdict) = if release {
                match self.eval(b, &env) {
                    Ok(false) => (true, false),
                    Ok(true) => match self.eval(a, &env) {
                        Ok(true) => (true, true),
                        Ok(false) => (false, false),
                        Err(e) => break Err(e),
                    },
                    Err(e) => break Err(e),
                }
            } else {
                match self.eval(b, &env) {
                    Ok(true) => (true, true),
                    Ok(false) => match self.eval(a, &env) {
                        Ok(false) => (true, false),
                        Ok(true) => (false, false),
                        Err(e) => break Err(e),
                    },
                    Err(e) => break Err(e),
                }
            };
            if stop {
                break Ok(verdict);
            }
            match self.step(&env) {
                Ok((next_env, next)) => {
                    env = next_env;
                    self.hist.push(next);
                }
                Err(e) => break Err(e),
            }
        };
        self.hist.truncate(base);
        r
    }

    fn trie(&mut self, s: StateId, depth: usize) -> Arc<Trie> {
        let g = self.g;
        self.tries
            .entry((s, depth))
            .or_insert_with(|| Arc::new(Trie::new(g, s, depth)))
            .clone()
    }

    fn carrier(&mut self, body: usize) -> Result<Carrier> {
        match self.mode {
            EvalMode::ExactHorizon(_) => {
                let depth = self.nodes[body].local_depth.ok_or_else(|| {
                    Error::ModeInsufficient("until and release need bounded-memory mode".into())
                })?;
                let trie = self.trie(self.cur(), depth);
                let a = self.g.n_actions();
                let size = bounded_pow(a, trie.len(), self.bound)
                    .ok_or_else(|| too_large(format!("{a}^{}", trie.len()), self.bound))?;
                Ok(Carrier::Tables { trie, size })
            }
            EvalMode::BoundedMemory(m) => {
                if self.machines.is_none() {
                    self.machines = Some(Arc::new(machines(self.g, m, self.bound)?));
                }
                Ok(Carrier::Machines(self.machines.clone().expect("set above")))
            }
        }
    }

    fn block(&mut self, entries: &[(Quantifier, String)], body: usize, env: &Env) -> Ev<bool> {
        match self.route {
            Route::Literal => {
                let carrier = self.carrier(body)?;
                let anchor = self.hist.len() - 1;
                self.literal(entries, &carrier, anchor, body, env)
            }
            Route::Skolem => self.skolem(entries, body, env),
            Route::Elementary => self.elementary(entries, body, env),
        }
    }

    fn literal(
        &mut self,
        entries: &[(Quantifier, String)],
        carrier: &Carrier,
        anchor: usize,
        body: usize,
        env: &Env,
    ) -> Ev<bool> {
        let Some(((q, x), rest)) = entries.split_first() else {
            return self.eval(body, env);
        };
        for i in 0..carrier.size() {
            let mut inner = env.clone();
            inner.push_var(x, carrier.value(i, anchor));
            let r = self.literal(rest, carrier, anchor, body, &inner)?;
            match q {
                Quantifier::Exists if r => return Ok(true),
                Quantifier::Forall if !r => return Ok(false),
                _ => {}
            }
        }
        Ok(*q == Quantifier::Forall)
    }

    /// Universal indices and, for each existential, the universals it
    /// depends on.
    fn shape(entries: &[(Quantifier, String)]) -> (usize, Vec<Vec<usize>>) {
        let mut n_univ = 0;
        let mut deps = Vec::new();
        for (q, _) in entries {
            match q {
                Quantifier::Forall => n_univ += 1,
                Quantifier::Exists => deps.push((0..n_univ).collect()),
            }
        }
        (n_univ, deps)
    }

    fn skolem(&mut self, entries: &[(Quantifier, String)], body: usize, env: &Env) -> Ev<bool> {
        let carrier = self.carrier(body)?;
        let c = carrier.size();
        let (n_univ, deps) = Self::shape(entries);
        let n_scenarios = bounded_pow(c as usize, n_univ, self.bound)
            .ok_or_else(|| too_large(format!("{c}^{n_univ}"), self.bound))?;
        let mut offsets = Vec::new();
        let mut total: u64 = 0;
        for d in &deps {
            offsets.push(total as usize);
            total += bounded_pow(c as usize, d.len(), self.bound)
                .ok_or_else(|| too_large(format!("{c}^{}", d.len()), self.bound))?;
            if total > self.bound {
                return Err(too_large(format!("{total} Skolem cells"), self.bound).into());
            }
        }
        let plan = Plan {
            level: self.levels.len(),
            body,
            entries: entries.to_vec(),
            universal_carrier: carrier.clone(),
            n_universals: n_univ,
            n_scenarios,
            domain: c as usize,
            cells: Cells::Skolem {
                carrier,
                deps,
                offsets,
            },
            env: env.clone(),
            anchor: self.hist.len() - 1,
        };
        self.solve(plan, total as usize)
    }

    fn elementary(&mut self, entries: &[(Quantifier, String)], body: usize, env: &Env) -> Ev<bool> {
        let depth = self.nodes[body].local_depth.ok_or_else(|| {
            Error::ModeInsufficient("until and release need bounded-memory mode".into())
        })?;
        let trie = self.trie(self.cur(), depth);
        let a = self.g.n_actions();
        let size = bounded_pow(a, trie.len(), self.bound)
            .ok_or_else(|| too_large(format!("{a}^{}", trie.len()), self.bound))?;
        let carrier = Carrier::Tables {
            trie: trie.clone(),
            size,
        };
        let (n_univ, deps) = Self::shape(entries);
        let n_scenarios = bounded_pow(size as usize, n_univ, self.bound)
            .ok_or_else(|| too_large(format!("{size}^{n_univ}"), self.bound))?;
        let mut offsets = Vec::new();
        let mut per_node = 0;
        for d in &deps {
            offsets.push(per_node);
            per_node += bounded_pow(a, d.len(), self.bound)
                .ok_or_else(|| too_large(format!("{a}^{}", d.len()), self.bound))?
                as usize;
        }
        let n_cells = per_node * trie.len();
        let block = Arc::new(ElemBlock {
            trie,
            n_actions: a,
            deps,
            offsets,
            per_node,
        });
        let plan = Plan {
            level: self.levels.len(),
            body,
            entries: entries.to_vec(),
            universal_carrier: carrier,
            n_universals: n_univ,
            n_scenarios,
            domain: a,
            cells: Cells::Elementary(block),
            env: env.clone(),
            anchor: self.hist.len() - 1,
        };
        self.solve(plan, n_cells)
    }

    fn solve(&mut self, plan: Plan, n_cells: usize) -> Ev<bool> {
        self.levels.push(Level {
            assign: vec![None; n_cells],
            reads: Vec::new(),
        });
        let r = self.search(&plan, 0);
        self.levels.pop();
        Ok(r?.is_none())
    }

    /// Extends the current cell assignment so that every scenario from
    /// `from` on holds. Returns `None` on success, or a conflict set: cells
    /// whose current values already rule out success.
    fn search(&mut self, plan: &Plan, from: u64) -> Ev<Option<HashSet<usize>>> {
        let l = plan.level;
        let mut i = from;
        while i < plan.n_scenarios {
            self.levels[l].reads.clear();
            match self.scenario(plan, i) {
                Ok(true) => i += 1,
                Ok(false) => return Ok(Some(self.levels[l].reads.iter().copied().collect())),
                Err(Flow::Need { level, cell }) if level == l => {
                    let mut acc = HashSet::new();
                    for v in 0..plan.domain {
                        self.levels[l].assign[cell] = Some(v);
                        match self.search(plan, i) {
                            Ok(None) => return Ok(None),
                            Ok(Some(cs)) if !cs.contains(&cell) => {
                                self.levels[l].assign[cell] = None;
                                return Ok(Some(cs));
                            }
                            Ok(Some(cs)) => acc.extend(cs),
                            Err(e) => {
                                self.levels[l].assign[cell] = None;
                                return Err(e);
                            }
                        }
                    }
                    self.levels[l].assign[cell] = None;
                    acc.remove(&cell);
                    return Ok(Some(acc));
                }
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }

    fn scenario(&mut self, plan: &Plan, i: u64) -> Ev<bool> {
        let c = plan.universal_carrier.size() as usize;
        let univ: Vec<u64> = (0..plan.n_universals)
            .map(|j| digit(i, j, plan.n_universals, c) as u64)
            .collect();
        let mut env = plan.env.clone();
        let (mut ku, mut ke) = (0, 0);
        let univ = Arc::new(univ);
        for (q, x) in &plan.entries {
            let v = match q {
                Quantifier::Forall => {
                    ku += 1;
                    plan.universal_carrier.value(univ[ku - 1], plan.anchor)
                }
                Quantifier::Exists => {
                    ke += 1;
                    match &plan.cells {
                        Cells::Skolem {
                            carrier,
                            deps,
                            offsets,
                        } => {
                            let local = deps[ke - 1]
                                .iter()
                                .fold(0usize, |acc, &u| acc * c + univ[u] as usize);
                            let idx = self.read(plan.level, offsets[ke - 1] + local)?;
                            carrier.value(idx as u64, plan.anchor)
                        }
                        Cells::Elementary(block) => Val::Elementary {
                            level: plan.level,
                            block: block.clone(),
                            k: ke - 1,
                            univ: univ.clone(),
                            anchor: plan.anchor,
                        },
                    }
                }
            };
            env.push_var(x, v);
        }
        self.eval(plan.body, &env)
    }
}
