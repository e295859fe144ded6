//! Emptiness of nondeterministic parity tree automata.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::parity::{solve_parity, ParityGame, Player};
use crate::automata::{PosBool, TreeAutomaton};
use crate::error::{Error, Result};

/// A regular tree accepted by the automaton, described as a transducer from
/// automaton states: the node reached in state `q` carries `letter` and its
/// child in direction `d` is reached in the state listed for `d`. Children
/// in unlisted directions are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub root: usize,
    pub nodes: BTreeMap<usize, WitnessNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessNode {
    pub letter: usize,
    pub children: Vec<(usize, usize)>,
}

/// Outcome of [`npt_emptiness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    Nonempty(Witness),
}

impl Emptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, Emptiness::Empty)
    }
}

#[derive(Clone, Copy)]
enum Vertex {
    State(usize),
    Formula,
    Sink,
}

struct Builder<'a> {
    aut: &'a TreeAutomaton,
    owner: Vec<Player>,
    priority: Vec<usize>,
    edges: Vec<Vec<usize>>,
    kind: Vec<Vertex>,
    /// Letter read when a state vertex moves to a formula vertex.
    letters: HashMap<(usize, usize), usize>,
    states: HashMap<usize, usize>,
    sinks: [Option<usize>; 2],
    pending: Vec<usize>,
}

impl<'a> Builder<'a> {
    fn vertex(&mut self, owner: Player, priority: usize, kind: Vertex) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.edges.push(Vec::new());
        self.kind.push(kind);
        self.owner.len() - 1
    }

    fn sink(&mut self, winner: Player) -> usize {
        let k = usize::from(winner == Player::Odd);
        if let Some(v) = self.sinks[k] {
            return v;
        }
        let v = self.vertex(winner, k, Vertex::Sink);
        self.edges[v].push(v);
        self.sinks[k] = Some(v);
        v
    }

    fn state(&mut self, q: usize) -> usize {
        if let Some(&v) = self.states.get(&q) {
            return v;
        }
        let v = self.vertex(Player::Even, self.aut.priority(q), Vertex::State(q));
        self.states.insert(q, v);
        self.pending.push(v);
        v
    }

    fn expand(&mut self, v: usize) {
        let Vertex::State(q) = self.kind[v] else { return };
        for l in 0..self.aut.n_letters() {
            let f = self.aut.delta[q][l].clone();
            let w = self.formula_vertex(&f);
            self.letters.entry((v, w)).or_insert(l);
            if !self.edges[v].contains(&w) {
                self.edges[v].push(w);
            }
        }
    }

    fn formula_vertex(&mut self, f: &PosBool) -> usize {
        let neutral = self.aut.index() + 2;
        match f {
            PosBool::True => self.sink(Player::Even),
            PosBool::False => self.sink(Player::Odd),
            PosBool::Move(_, q) => {
                let s = self.state(*q);
                let v = self.vertex(Player::Even, neutral, Vertex::Formula);
                self.edges[v].push(s);
                v
            }
            PosBool::And(parts) | PosBool::Or(parts) => {
                let owner = if matches!(f, PosBool::And(_)) { Player::Odd } else { Player::Even };
                let v = self.vertex(owner, neutral, Vertex::Formula);
                for p in parts {
                    let w = self.formula_vertex(p);
                    self.edges[v].push(w);
                }
                v
            }
        }
    }
}

/// Decides emptiness of a nondeterministic automaton through the game in
/// which the automaton player picks a letter and resolves disjunctions and
/// the pathfinder resolves conjunctions, that is, picks a direction.
pub fn npt_emptiness(a: &TreeAutomaton) -> Result<Emptiness> {
    if !a.is_nondeterministic() {
        return Err(Error::NotNondeterministic(
            "a conjunction sends two copies in one direction".into(),
        ));
    }
    let mut b = Builder {
        aut: a,
        owner: Vec::new(),
        priority: Vec::new(),
        edges: Vec::new(),
        kind: Vec::new(),
        letters: HashMap::new(),
        states: HashMap::new(),
        sinks: [None, None],
        pending: Vec::new(),
    };
    let root = b.state(a.initial);
    while let Some(v) = b.pending.pop() {
        b.expand(v);
    }
    let game = ParityGame {
        owner: b.owner.clone(),
        priority: b.priority.clone(),
        edges: b.edges.clone(),
        initial: root,
    };
    let sol = solve_parity(&game);
    if sol.winner[root] == Player::Odd {
        return Ok(Emptiness::Empty);
    }
    let mut nodes = BTreeMap::new();
    let mut todo = vec![a.initial];
    while let Some(q) = todo.pop() {
        if nodes.contains_key(&q) {
            continue;
        }
        let v = b.states[&q];
        let chosen = sol.strategy[v].expect("winning state vertex has a move");
        let letter = b.letters[&(v, chosen)];
        let mut children = Vec::new();
        collect_moves(&b, &sol.strategy, chosen, &a.delta[q][letter], &mut children);
        children.sort_unstable();
        children.dedup();
        todo.extend(children.iter().map(|&(_, r)| r));
        nodes.insert(q, WitnessNode { letter, children });
    }
    Ok(Emptiness::Nonempty(Witness { root: a.initial, nodes }))
}

/// Follows the automaton player's choices from formula vertex `v`, which
/// was built for `f`, collecting the moves of the resolved conjunction.
fn collect_moves(
    b: &Builder<'_>,
    strategy: &[Option<usize>],
    v: usize,
    f: &PosBool,
    out: &mut Vec<(usize, usize)>,
) {
    match f {
        PosBool::True | PosBool::False => {}
        PosBool::Move(d, q) => out.push((*d, *q)),
        PosBool::And(parts) => {
            for (p, &w) in parts.iter().zip(&b.edges[v]) {
                collect_moves(b, strategy, w, p, out);
            }
        }
        PosBool::Or(parts) => {
            let w = strategy[v].expect("winning disjunction has a choice");
            let k = b.edges[v].iter().position(|&x| x == w).expect("choice is an edge");
            collect_moves(b, strategy, w, &parts[k], out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn one_state(f: PosBool, chain: Vec<BTreeSet<usize>>) -> TreeAutomaton {
        TreeAutomaton {
            sigma: vec!["a".into()],
            product: false,
            directions: vec!["0".into(), "1".into()],
            states: vec!["q".into()],
            initial: 0,
            delta: vec![vec![f]],
            acceptance: chain,
            places: vec![],
            n_actions: 0,
        }
    }

    #[test]
    fn false_at_the_root_is_empty() {
        let a = one_state(PosBool::False, vec![[0].into_iter().collect()]);
        assert_eq!(npt_emptiness(&a).unwrap(), Emptiness::Empty);
    }

    #[test]
    fn all_accepting_loop_has_a_constant_witness() {
        let f = PosBool::And(vec![PosBool::Move(0, 0), PosBool::Move(1, 0)]);
        let a = one_state(f, vec![BTreeSet::new(), [0].into_iter().collect()]);
        match npt_emptiness(&a).unwrap() {
            Emptiness::Nonempty(w) => {
                assert_eq!(w.nodes.len(), 1);
                assert_eq!(w.nodes[&0].children, vec![(0, 0), (1, 0)]);
            }
            Emptiness::Empty => panic!("expected a witness"),
        }
    }

    #[test]
    fn rejecting_loop_is_empty() {
        let a = one_state(PosBool::Move(0, 0), vec![[0].into_iter().collect()]);
        assert!(npt_emptiness(&a).unwrap().is_empty());
    }

    #[test]
    fn alternation_is_rejected() {
        let f = PosBool::And(vec![PosBool::Move(0, 0), PosBool::Move(0, 0)]);
        let a = one_state(f, vec![[0].into_iter().collect()]);
        assert!(matches!(npt_emptiness(&a), Err(Error::NotNondeterministic(_))));
    }

    fn decide(name: &str, text: &str) -> bool {
        let g = crate::model::fixture(name).unwrap();
        let phi = crate::syntax::parse_sl(text).unwrap();
        let a = crate::automata::sentence_npt(&g, g.initial(), &phi).unwrap();
        !npt_emptiness(&a).unwrap().is_empty()
    }

    #[test]
    fn one_goal_sentences_on_the_three_agent_fixtures() {
        let phi = "[[x]]<<y>>[[z]](alpha,x)(beta,y)(gamma,z) X p";
        assert!(decide("g1", phi));
        assert!(!decide("g2", phi));
    }
}
