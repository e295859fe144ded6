//! Alternating parity tree automata.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::posbool::PosBool;
use crate::error::{Error, Result};
use crate::games::{solve_parity, ParityGame, Player};
use crate::model::Place;

/// An alternating parity tree automaton.
///
/// When `product` is set the alphabet is `sigma × directions`, letter
/// `(σ, d)` having index `σ·|directions| + d`; otherwise it is `sigma`.
/// The acceptance chain `F_1 ⊆ … ⊆ F_k = Q` accepts a branch when the least
/// `i` with `inf ∩ F_i ≠ ∅` is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeAutomaton {
    pub sigma: Vec<String>,
    pub product: bool,
    pub directions: Vec<String>,
    pub states: Vec<String>,
    pub initial: usize,
    /// Transition formulas indexed by `[state][letter]`.
    pub delta: Vec<Vec<PosBool>>,
    pub acceptance: Vec<BTreeSet<usize>>,
    /// When `sigma` is a valuation alphabet, its places (first most
    /// significant) over `n_actions` actions; empty otherwise.
    pub places: Vec<Place>,
    pub n_actions: usize,
}

impl TreeAutomaton {
    pub fn n_letters(&self) -> usize {
        if self.product {
            self.sigma.len() * self.directions.len()
        } else {
            self.sigma.len()
        }
    }

    /// Index of the product letter `(σ, d)`.
    pub fn letter(&self, sigma: usize, d: usize) -> usize {
        sigma * self.directions.len() + d
    }

    pub fn letter_name(&self, l: usize) -> String {
        if self.product {
            let n = self.directions.len();
            format!("{}|{}", self.sigma[l / n], self.directions[l % n])
        } else {
            self.sigma[l].clone()
        }
    }

    /// Number of levels `k` of the acceptance chain.
    pub fn index(&self) -> usize {
        self.acceptance.len()
    }

    /// Least level containing `q`, counting from 1.
    pub fn priority(&self, q: usize) -> usize {
        self.acceptance
            .iter()
            .position(|f| f.contains(&q))
            .map_or(self.index(), |i| i + 1)
    }

    /// Checks the chain inclusions, `F_k = Q`, totality of delta and move
    /// targets.
    pub fn validate(&self) -> Result<()> {
        let n = self.states.len();
        if self.initial >= n {
            return Err(Error::Validation("initial state out of range".into()));
        }
        let Some(last) = self.acceptance.last() else {
            return Err(Error::Validation("empty acceptance chain".into()));
        };
        if last.len() != n || last.iter().any(|&q| q >= n) {
            return Err(Error::Validation("last acceptance level is not the state set".into()));
        }
        for w in self.acceptance.windows(2) {
            if !w[0].is_subset(&w[1]) {
                return Err(Error::Validation("acceptance chain is not increasing".into()));
            }
        }
        if self.delta.len() != n || self.delta.iter().any(|row| row.len() != self.n_letters()) {
            return Err(Error::Validation("transition function is not total".into()));
        }
        for row in &self.delta {
            for f in row {
                for (d, q) in f.moves() {
                    if d >= self.directions.len() || q >= n {
                        return Err(Error::Validation(format!("move ({d},{q}) out of range")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every transition is a conjunction of moves.
    pub fn is_universal(&self) -> bool {
        self.delta.iter().flatten().all(|f| f.conjunction().is_ok())
    }

    /// Whether every conjunction in every transition constrains each
    /// direction at most once.
    pub fn is_nondeterministic(&self) -> bool {
        self.delta.iter().flatten().all(|f| f.separated_directions().is_some())
    }

    /// The co-Büchi set of an automaton of index at most 2.
    pub fn cobuchi_set(&self) -> Option<BTreeSet<usize>> {
        match self.index() {
            1 => Some((0..self.states.len()).collect()),
            2 => Some(self.acceptance[0].clone()),
            _ => None,
        }
    }

    /// The complement automaton: transitions dualized and the chain shifted
    /// by one level. A leading empty level is dropped, otherwise an empty
    /// level is prepended; either way every priority changes parity.
    pub fn dual(&self) -> TreeAutomaton {
        let mut out = self.clone();
        out.delta = self
            .delta
            .iter()
            .map(|row| row.iter().map(PosBool::dual).collect())
            .collect();
        if self.acceptance.len() > 1 && self.acceptance[0].is_empty() {
            out.acceptance.remove(0);
        } else {
            out.acceptance.insert(0, BTreeSet::new());
        }
        out
    }

    /// HOA-inspired textual listing.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let quoted = |v: &[String]| v.iter().map(|s| format!("\"{s}\"")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "aut/1");
        let _ = writeln!(out, "directions: {} {}", self.directions.len(), quoted(&self.directions));
        let _ = writeln!(out, "sigma: {} {}", self.sigma.len(), quoted(&self.sigma));
        let _ = writeln!(out, "product: {}", self.product);
        let _ = writeln!(out, "states: {}", self.states.len());
        let _ = writeln!(out, "initial: {}", self.initial);
        let chain: Vec<String> = self
            .acceptance
            .iter()
            .map(|f| {
                let items: Vec<String> = f.iter().map(|q| q.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        let _ = writeln!(out, "parity: {}", chain.join(" "));
        let _ = writeln!(out, "--BODY--");
        for (q, row) in self.delta.iter().enumerate() {
            let _ = writeln!(out, "state {q} \"{}\"", self.states[q]);
            for (l, f) in row.iter().enumerate() {
                let _ = writeln!(out, "  [{}] {f}", self.letter_name(l));
            }
        }
        let _ = writeln!(out, "--END--");
        out
    }

    /// Membership of a regular tree, decided by the acceptance game.
    pub fn accepts(&self, tree: &RegularTree) -> bool {
        let mut b = GameBuilder::new(self, tree);
        let root = b.state_vertex(self.initial, tree.root);
        let game = b.finish(root);
        solve_parity(&game).winner[root] == Player::Even
    }
}

/// A tree given by a finite graph: vertex `v` carries letter `labels[v]`
/// and its `d`-th child is the unfolding of `children[v][d]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularTree {
    pub labels: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

impl RegularTree {
    /// The tree whose nodes up to `depth` carry the letters listed in
    /// breadth-first order and whose deeper nodes repeat the letter of their
    /// ancestor at `depth`.
    pub fn bounded(depth: usize, n_dirs: usize, letters: &[usize]) -> RegularTree {
        let mut children = Vec::new();
        let mut level_start = 0;
        let mut level_len = 1;
        for _ in 0..depth {
            for v in level_start..level_start + level_len {
                let first = level_start + level_len + (v - level_start) * n_dirs;
                children.push((first..first + n_dirs).collect());
            }
            level_start += level_len;
            level_len *= n_dirs;
        }
        for v in level_start..level_start + level_len {
            children.push(vec![v; n_dirs]);
        }
        RegularTree {
            labels: letters.to_vec(),
            children,
            root: 0,
        }
    }

    /// Number of nodes of a bounded tree.
    pub fn bounded_size(depth: usize, n_dirs: usize) -> usize {
        (0..=depth).map(|i| n_dirs.pow(i as u32)).sum()
    }
}

struct GameBuilder<'a> {
    aut: &'a TreeAutomaton,
    tree: &'a RegularTree,
    owner: Vec<Player>,
    priority: Vec<usize>,
    edges: Vec<Vec<usize>>,
    states: HashMap<(usize, usize), usize>,
    sinks: [Option<usize>; 2],
}

impl<'a> GameBuilder<'a> {
    fn new(aut: &'a TreeAutomaton, tree: &'a RegularTree) -> Self {
        GameBuilder {
            aut,
            tree,
            owner: Vec::new(),
            priority: Vec::new(),
            edges: Vec::new(),
            states: HashMap::new(),
            sinks: [None, None],
        }
    }

    fn vertex(&mut self, owner: Player, priority: usize) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.edges.push(Vec::new());
        self.owner.len() - 1
    }

    fn sink(&mut self, winner: Player) -> usize {
        let k = usize::from(winner == Player::Odd);
        if let Some(v) = self.sinks[k] {
            return v;
        }
        let v = self.vertex(winner, k);
        self.edges[v].push(v);
        self.sinks[k] = Some(v);
        v
    }

    fn state_vertex(&mut self, q: usize, node: usize) -> usize {
        if let Some(&v) = self.states.get(&(q, node)) {
            return v;
        }
        let v = self.vertex(Player::Even, self.aut.priority(q));
        self.states.insert((q, node), v);
        let f = self.aut.delta[q][self.tree.labels[node]].clone();
        let target = self.formula(&f, node);
        self.edges[v].push(target);
        v
    }

    fn formula(&mut self, f: &PosBool, node: usize) -> usize {
        let neutral = self.aut.index() + 2;
        match f {
            PosBool::True => self.sink(Player::Even),
            PosBool::False => self.sink(Player::Odd),
            PosBool::Move(d, q) => {
                let child = self.tree.children[node][*d];
                self.state_vertex(*q, child)
            }
            PosBool::And(parts) | PosBool::Or(parts) => {
                let owner = if matches!(f, PosBool::And(_)) { Player::Odd } else { Player::Even };
                let v = self.vertex(owner, neutral);
                for p in parts {
                    let w = self.formula(p, node);
                    self.edges[v].push(w);
                }
                v
            }
        }
    }

    fn finish(self, initial: usize) -> ParityGame {
        ParityGame {
            owner: self.owner,
            priority: self.priority,
            edges: self.edges,
            initial,
        }
    }
}

/// Membership for an automaton whose transitions are conjunctions and whose
/// index is at most 2, by inspecting its run graph on the tree directly: the
/// tree is rejected when a reachable configuration has a `false` transition
/// or lies on a cycle through a co-Büchi state.
pub fn universal_accepts_directly(aut: &TreeAutomaton, tree: &RegularTree) -> Result<bool> {
    let cob = aut
        .cobuchi_set()
        .ok_or_else(|| Error::Unsupported("index above 2".into()))?;
    let mut id: HashMap<(usize, usize), usize> = HashMap::new();
    let mut conf: Vec<(usize, usize)> = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    id.insert((aut.initial, tree.root), 0);
    conf.push((aut.initial, tree.root));
    let mut i = 0;
    while i < conf.len() {
        let (q, v) = conf[i];
        let moves = aut.delta[q][tree.labels[v]]
            .conjunction()
            .map_err(|_| Error::NotUniversal(format!("state {q}")))?;
        let Some(moves) = moves else {
            return Ok(false);
        };
        let mut out = Vec::new();
        for (d, r) in moves {
            let key = (r, tree.children[v][d]);
            let j = *id.entry(key).or_insert_with(|| {
                conf.push(key);
                conf.len() - 1
            });
            out.push(j);
        }
        succ.push(out);
        i += 1;
    }
    for start in 0..conf.len() {
        if !cob.contains(&conf[start].0) {
            continue;
        }
        let mut seen = vec![false; conf.len()];
        let mut stack = succ[start].clone();
        while let Some(u) = stack.pop() {
            if u == start {
                return Ok(false);
            }
            if !std::mem::replace(&mut seen[u], true) {
                stack.extend(&succ[u]);
            }
        }
    }
    Ok(true)
}

/// Names `x=a,y=b` of the valuations of `places` over `n_actions` actions,
/// first place most significant.
pub fn valuation_names(places: &[Place], n_actions: usize) -> Vec<String> {
    let count = n_actions.pow(places.len() as u32);
    (0..count)
        .map(|i| {
            let digits = valuation_digits(i, places.len(), n_actions);
            places
                .iter()
                .zip(&digits)
                .map(|(p, a)| match p {
                    Place::Agent(n) | Place::Var(n) => format!("{n}={a}"),
                })
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

/// Digits of valuation index `i`, first most significant.
pub fn valuation_digits(mut i: usize, len: usize, base: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for k in (0..len).rev() {
        out[k] = i % base;
        i /= base;
    }
    out
}

/// Index of the valuation with the given digits.
pub fn valuation_index(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Asserts the structural invariants of a constructed automaton.
pub(crate) fn checked(a: TreeAutomaton) -> Result<TreeAutomaton> {
    a.validate()?;
    Ok(a)
}
