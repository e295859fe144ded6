//! Word automata over `2^AP`, the tableau translation of LTL, and lasso
//! membership.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::syntax::{to_pnf, Formula};

/// How a word automaton combines the runs on a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordMode {
    Nondeterministic,
    Universal,
}

/// Acceptance condition on the states visited infinitely often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordAcceptance {
    /// Some state of the set recurs.
    Buchi(BTreeSet<usize>),
    /// No state of the set recurs.
    CoBuchi(BTreeSet<usize>),
}

/// A word automaton whose letters are subsets of `atoms`, encoded as bit
/// masks with atom `i` on bit `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordAutomaton {
    pub atoms: Vec<String>,
    pub states: Vec<String>,
    pub initial: BTreeSet<usize>,
    /// Successor sets indexed by `[state][letter]`.
    pub delta: Vec<Vec<BTreeSet<usize>>>,
    pub acceptance: WordAcceptance,
    pub mode: WordMode,
}

/// An ultimately periodic word `stem · cycle^ω` of letter masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<u32>,
    pub cycle: Vec<u32>,
}

impl Lasso {
    pub fn new(stem: Vec<u32>, cycle: Vec<u32>) -> Result<Lasso> {
        if cycle.is_empty() {
            return Err(Error::Validation("lasso cycle must be non-empty".into()));
        }
        Ok(Lasso { stem, cycle })
    }

    /// Number of distinct positions.
    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Letter at position `i < len()`.
    pub fn letter(&self, i: usize) -> u32 {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[i - self.stem.len()]
        }
    }

    /// Position following `i`.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.stem.len()
        }
    }

    /// Every lasso with `stem.len() + cycle.len() <= max_len` over letters
    /// `0..n_letters`.
    pub fn all(max_len: usize, n_letters: u32) -> Vec<Lasso> {
        let mut out = Vec::new();
        for total in 1..=max_len {
            for stem_len in 0..total {
                let mut word = vec![0u32; total];
                loop {
                    out.push(Lasso {
                        stem: word[..stem_len].to_vec(),
                        cycle: word[stem_len..].to_vec(),
                    });
                    let mut i = 0;
                    while i < total {
                        word[i] += 1;
                        if word[i] < n_letters {
                            break;
                        }
                        word[i] = 0;
                        i += 1;
                    }
                    if i == total {
                        break;
                    }
                }
            }
        }
        out
    }
}

impl WordAutomaton {
    pub fn n_letters(&self) -> usize {
        1 << self.atoms.len()
    }

    /// The letter of `atoms` made of the atoms among `holding`.
    pub fn letter_of<'a>(&self, holding: impl IntoIterator<Item = &'a str>) -> u32 {
        let holding: BTreeSet<&str> = holding.into_iter().collect();
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| holding.contains(a.as_str()))
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    fn marked(&self) -> &BTreeSet<usize> {
        match &self.acceptance {
            WordAcceptance::Buchi(f) | WordAcceptance::CoBuchi(f) => f,
        }
    }

    /// Whether some run on `w` visits the marked set infinitely often.
    fn some_run_recurs(&self, w: &Lasso) -> bool {
        let n = w.len();
        let id = |q: usize, i: usize| q * n + i;
        let total = self.states.len() * n;
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); total];
        let mut seen = vec![false; total];
        let mut queue: VecDeque<(usize, usize)> = self.initial.iter().map(|&q| (q, 0)).collect();
        for &(q, i) in &queue {
            seen[id(q, i)] = true;
        }
        while let Some((q, i)) = queue.pop_front() {
            let j = w.succ(i);
            for &r in &self.delta[q][w.letter(i) as usize] {
                succ[id(q, i)].push(id(r, j));
                if !seen[id(r, j)] {
                    seen[id(r, j)] = true;
                    queue.push_back((r, j));
                }
            }
        }
        let marked = self.marked();
        (0..total)
            .filter(|&v| seen[v] && marked.contains(&(v / n)))
            .any(|v| reaches(&succ, v, v))
    }

    /// Membership of the lasso word `w`.
    pub fn accepts(&self, w: &Lasso) -> bool {
        let recurs = self.some_run_recurs(w);
        match (&self.acceptance, self.mode) {
            (WordAcceptance::Buchi(_), WordMode::Nondeterministic) => recurs,
            (WordAcceptance::CoBuchi(_), WordMode::Universal) => !recurs,
            (WordAcceptance::Buchi(_), WordMode::Universal) => !self.some_run_avoids(w),
            (WordAcceptance::CoBuchi(_), WordMode::Nondeterministic) => self.some_run_avoids(w),
        }
    }

    /// Whether some infinite run on `w` eventually avoids the marked set.
    fn some_run_avoids(&self, w: &Lasso) -> bool {
        let n = w.len();
        let total = self.states.len() * n;
        let marked = self.marked();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); total];
        for q in 0..self.states.len() {
            for i in 0..n {
                for &r in &self.delta[q][w.letter(i) as usize] {
                    succ[q * n + i].push(r * n + w.succ(i));
                }
            }
        }
        let mut reach = vec![false; total];
        let mut stack: Vec<usize> = self.initial.iter().map(|&q| q * n).collect();
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut reach[v], true) {
                stack.extend(&succ[v]);
            }
        }
        let unmarked: Vec<Vec<usize>> = (0..total)
            .map(|v| {
                if marked.contains(&(v / n)) {
                    Vec::new()
                } else {
                    succ[v].iter().copied().filter(|u| !marked.contains(&(u / n))).collect()
                }
            })
            .collect();
        (0..total)
            .filter(|&v| reach[v] && !marked.contains(&(v / n)))
            .any(|v| reaches(&unmarked, v, v))
    }

    /// The dual automaton: same graph, flipped mode and acceptance kind.
    /// Its language is the complement of the input's.
    pub fn dualize(&self) -> WordAutomaton {
        let mut out = self.clone();
        out.mode = match self.mode {
            WordMode::Nondeterministic => WordMode::Universal,
            WordMode::Universal => WordMode::Nondeterministic,
        };
        out.acceptance = match &self.acceptance {
            WordAcceptance::Buchi(f) => WordAcceptance::CoBuchi(f.clone()),
            WordAcceptance::CoBuchi(f) => WordAcceptance::Buchi(f.clone()),
        };
        out
    }
}

/// Free function form of [`WordAutomaton::dualize`].
pub fn dualize_word(a: &WordAutomaton) -> WordAutomaton {
    a.dualize()
}

/// Whether `to` is reachable from `from` by a non-empty path.
fn reaches(succ: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; succ.len()];
    let mut stack = succ[from].clone();
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        if !std::mem::replace(&mut seen[v], true) {
            stack.extend(&succ[v]);
        }
    }
    false
}

/// The universal co-Büchi automaton of `psi`, obtained by dualizing the
/// nondeterministic Büchi automaton of its negation.
pub fn ltl_to_ucw(psi: &Formula) -> Result<WordAutomaton> {
    let atoms = psi.atoms();
    let neg = ltl_to_nbw_over(&Formula::not(psi.clone()), atoms)?;
    Ok(neg.dualize())
}

/// The nondeterministic Büchi automaton of `psi` over the atoms of `psi`.
pub fn ltl_to_nbw(psi: &Formula) -> Result<WordAutomaton> {
    ltl_to_nbw_over(psi, psi.atoms())
}

#[derive(Clone)]
struct Node {
    incoming: BTreeSet<usize>,
    new: BTreeSet<Formula>,
    old: BTreeSet<Formula>,
    next: BTreeSet<Formula>,
}

const INIT: usize = 0;

/// Tableau translation over an explicit atom list (a superset of the atoms
/// of `psi`).
pub fn ltl_to_nbw_over(psi: &Formula, atoms: Vec<String>) -> Result<WordAutomaton> {
    if !psi.is_ltl() {
        return Err(Error::NotLtl(psi.to_string()));
    }
    let nnf = to_pnf(psi);
    let mut done: Vec<Node> = Vec::new();
    let start = Node {
        incoming: [INIT].into_iter().collect(),
        new: [nnf.clone()].into_iter().collect(),
        old: BTreeSet::new(),
        next: BTreeSet::new(),
    };
    expand(start, &mut done);

    let untils: Vec<(Formula, Formula)> = until_subformulas(&nnf);
    // Node ids: INIT is 0, tableau node i is i + 1.
    let n_nodes = done.len() + 1;
    let in_set = |k: usize, node: usize| -> bool {
        if node == INIT {
            return true;
        }
        let (u, rhs) = &untils[k];
        let old = &done[node - 1].old;
        !old.contains(u) || old.contains(rhs)
    };
    let n_letters = 1usize << atoms.len();
    let index: HashMap<&str, usize> = atoms.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    let consistent = |node: usize, letter: usize| -> bool {
        done[node - 1].old.iter().all(|f| match f {
            Formula::Atom(p) => index.get(p.as_str()).is_some_and(|&i| letter >> i & 1 == 1),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(p) => index.get(p.as_str()).is_none_or(|&i| letter >> i & 1 == 0),
                _ => true,
            },
            Formula::False => false,
            _ => true,
        })
    };
    let mut edges: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n_letters]; n_nodes];
    for (i, node) in done.iter().enumerate() {
        for &m in &node.incoming {
            for (l, row) in edges[m].iter_mut().enumerate() {
                if consistent(i + 1, l) {
                    row.push(i + 1);
                }
            }
        }
    }

    let k = untils.len().max(1);
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert((INIT, 0), 0);
    order.push((INIT, 0));
    queue.push_back((INIT, 0));
    let mut delta: Vec<Vec<BTreeSet<usize>>> = Vec::new();
    while let Some((node, c)) = queue.pop_front() {
        let c2 = if untils.is_empty() || !in_set(c, node) { c } else { (c + 1) % k };
        let mut row = vec![BTreeSet::new(); n_letters];
        for (l, targets) in edges[node].iter().enumerate() {
            for &t in targets {
                let key = (t, c2);
                let id = *ids.entry(key).or_insert_with(|| {
                    order.push(key);
                    queue.push_back(key);
                    order.len() - 1
                });
                row[l].insert(id);
            }
        }
        delta.push(row);
    }
    let accepting: BTreeSet<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, &(node, c))| untils.is_empty() || (c == 0 && in_set(0, node)))
        .map(|(i, _)| i)
        .collect();
    let states = order
        .iter()
        .map(|&(node, c)| {
            if node == INIT {
                format!("init/{c}")
            } else {
                format!("n{node}/{c}")
            }
        })
        .collect();
    Ok(WordAutomaton {
        atoms,
        states,
        initial: [0].into_iter().collect(),
        delta,
        acceptance: WordAcceptance::Buchi(accepting),
        mode: WordMode::Nondeterministic,
    })
}

fn until_subformulas(f: &Formula) -> Vec<(Formula, Formula)> {
    let mut out = BTreeSet::new();
    fn walk(f: &Formula, out: &mut BTreeSet<(Formula, Formula)>) {
        if let Formula::Until(_, b) = f {
            out.insert((f.clone(), (**b).clone()));
        }
        for c in f.children() {
            walk(c, out);
        }
    }
    walk(f, &mut out);
    out.into_iter().collect()
}

fn negation_of(f: &Formula) -> Option<Formula> {
    match f {
        Formula::Atom(_) => Some(Formula::not(f.clone())),
        Formula::Not(inner) => Some((**inner).clone()),
        Formula::True => Some(Formula::False),
        Formula::False => Some(Formula::True),
        _ => None,
    }
}

fn expand(mut node: Node, done: &mut Vec<Node>) {
    let Some(eta) = node.new.iter().next().cloned() else {
        if let Some(existing) = done
            .iter_mut()
            .find(|d| d.old == node.old && d.next == node.next)
        {
            existing.incoming.extend(node.incoming);
            return;
        }
        done.push(node.clone());
        let id = done.len();
        expand(
            Node {
                incoming: [id].into_iter().collect(),
                new: node.next,
                old: BTreeSet::new(),
                next: BTreeSet::new(),
            },
            done,
        );
        return;
    };
    node.new.remove(&eta);
    if node.old.contains(&eta) {
        expand(node, done);
        return;
    }
    match &eta {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::Not(_) => {
            if eta == Formula::False || negation_of(&eta).is_some_and(|n| node.old.contains(&n)) {
                return;
            }
            node.old.insert(eta);
            expand(node, done);
        }
        Formula::And(a, b) => {
            for part in [a, b] {
                if !node.old.contains(part.as_ref()) {
                    node.new.insert((**part).clone());
                }
            }
            node.old.insert(eta.clone());
            expand(node, done);
        }
        Formula::Next(a) => {
            node.next.insert((**a).clone());
            node.old.insert(eta.clone());
            expand(node, done);
        }
        Formula::Or(a, b) | Formula::Until(a, b) | Formula::Release(a, b) => {
            let (first_new, first_next, second_new): (Vec<&Formula>, Option<Formula>, Vec<&Formula>) =
                match &eta {
                    Formula::Or(..) => (vec![a], None, vec![b]),
                    Formula::Until(..) => (vec![a], Some(eta.clone()), vec![b]),
                    _ => (vec![b], Some(eta.clone()), vec![a, b]),
                };
            let mut n1 = node.clone();
            let mut n2 = node;
            for f in first_new {
                if !n1.old.contains(f) {
                    n1.new.insert(f.clone());
                }
            }
            if let Some(x) = first_next {
                n1.next.insert(x);
            }
            n1.old.insert(eta.clone());
            for f in second_new {
                if !n2.old.contains(f) {
                    n2.new.insert(f.clone());
                }
            }
            n2.old.insert(eta.clone());
            expand(n1, done);
            expand(n2, done);
        }
        other => unreachable!("non-LTL construct {other} after the LTL check"),
    }
}

/// Truth of `psi` at position 0 of the lasso, by direct fixpoint evaluation.
/// Letters are read through `atoms` as in [`WordAutomaton`].
pub fn ltl_holds_on_lasso(psi: &Formula, atoms: &[String], w: &Lasso) -> bool {
    eval_positions(psi, atoms, w)[0]
}

fn eval_positions(f: &Formula, atoms: &[String], w: &Lasso) -> Vec<bool> {
    let n = w.len();
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(p) => {
            let bit = atoms.iter().position(|a| a == p);
            (0..n)
                .map(|i| bit.is_some_and(|b| w.letter(i) >> b & 1 == 1))
                .collect()
        }
        Formula::Not(a) => eval_positions(a, atoms, w).into_iter().map(|v| !v).collect(),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (x, y) = (eval_positions(a, atoms, w), eval_positions(b, atoms, w));
            let and = matches!(f, Formula::And(..));
            x.iter().zip(&y).map(|(p, q)| if and { *p && *q } else { *p || *q }).collect()
        }
        Formula::Next(a) => {
            let x = eval_positions(a, atoms, w);
            (0..n).map(|i| x[w.succ(i)]).collect()
        }
        Formula::Until(a, b) | Formula::Release(a, b) => {
            let (x, y) = (eval_positions(a, atoms, w), eval_positions(b, atoms, w));
            let until = matches!(f, Formula::Until(..));
            let mut cur = vec![!until; n];
            loop {
                let next: Vec<bool> = (0..n)
                    .map(|i| {
                        if until {
                            y[i] || (x[i] && cur[w.succ(i)])
                        } else {
                            y[i] && (x[i] || cur[w.succ(i)])
                        }
                    })
                    .collect();
                if next == cur {
                    return cur;
                }
                cur = next;
            }
        }
        other => panic!("not an LTL formula: {other}"),
    }
}
