//! Concurrent game structures.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// Index of a state in [`Cgs::states`].
pub type StateId = usize;
/// Index of an agent in [`Cgs::agents`].
pub type AgentId = usize;
/// Index of an action in [`Cgs::actions`].
pub type ActionId = usize;
/// Index of an atomic proposition in [`Cgs::atoms`].
pub type AtomId = usize;

/// A decision assigns one action to every agent, listed in agent declaration order.
pub type Decision = Vec<ActionId>;

/// A finite concurrent game structure.
///
/// All agents share one action set. The transition table is total: it holds
/// one successor for every state and every decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cgs {
    atoms: Vec<String>,
    agents: Vec<String>,
    actions: Vec<String>,
    states: Vec<String>,
    initial: StateId,
    labels: Vec<BTreeSet<AtomId>>,
    trans: Vec<StateId>,
    n_decisions: usize,
}

impl Cgs {
    /// Builds a structure from fully resolved components.
    ///
    /// `trans[s * n + d]` is the successor of state `s` under the decision with
    /// index `d`, where `n = |actions|^|agents|` and decisions are indexed in
    /// mixed radix with the first agent most significant.
    pub fn new(
        atoms: Vec<String>,
        agents: Vec<String>,
        actions: Vec<String>,
        states: Vec<String>,
        initial: StateId,
        labels: Vec<BTreeSet<AtomId>>,
        trans: Vec<StateId>,
    ) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::Validation("no agents declared".into()));
        }
        if actions.is_empty() {
            return Err(Error::Validation("no actions declared".into()));
        }
        if states.is_empty() {
            return Err(Error::Validation("no states declared".into()));
        }
        for (kind, names) in [
            ("atom", &atoms),
            ("agent", &agents),
            ("action", &actions),
            ("state", &states),
        ] {
            let mut seen = BTreeSet::new();
            for name in names {
                if !seen.insert(name) {
                    return Err(Error::Validation(format!("duplicate {kind} `{name}`")));
                }
            }
        }
        if initial >= states.len() {
            return Err(Error::Validation("initial state out of range".into()));
        }
        if labels.len() != states.len() {
            return Err(Error::Validation("label not defined on every state".into()));
        }
        if labels.iter().flatten().any(|&p| p >= atoms.len()) {
            return Err(Error::Validation("label mentions an undeclared atom".into()));
        }
        let n_decisions = checked_pow(actions.len(), agents.len())?;
        if trans.len() != states.len() * n_decisions {
            return Err(Error::Validation("trans not total".into()));
        }
        if trans.iter().any(|&t| t >= states.len()) {
            return Err(Error::Validation("trans targets an undeclared state".into()));
        }
        Ok(Cgs {
            atoms,
            agents,
            actions,
            states,
            initial,
            labels,
            trans,
            n_decisions,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }

    /// Number of decisions, `|actions|^|agents|`.
    pub fn n_decisions(&self) -> usize {
        self.n_decisions
    }

    /// Atoms true at `s`.
    pub fn label(&self, s: StateId) -> &BTreeSet<AtomId> {
        &self.labels[s]
    }

    /// Whether the atom named `atom` holds at `s`; undeclared atoms never hold.
    pub fn holds(&self, s: StateId, atom: &str) -> bool {
        self.atom_id(atom)
            .map(|p| self.labels[s].contains(&p))
            .unwrap_or(false)
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|n| n == name)
    }

    pub fn agent_id(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|n| n == name)
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|n| n == name)
    }

    pub fn atom_id(&self, name: &str) -> Option<AtomId> {
        self.atoms.iter().position(|n| n == name)
    }

    /// Resolves a state name or fails with [`Error::UndeclaredName`].
    pub fn require_state(&self, name: &str) -> Result<StateId> {
        self.state_id(name).ok_or_else(|| Error::UndeclaredName {
            kind: "state",
            name: name.to_string(),
        })
    }

    /// Resolves an agent name or fails with [`Error::UndeclaredName`].
    pub fn require_agent(&self, name: &str) -> Result<AgentId> {
        self.agent_id(name).ok_or_else(|| Error::UndeclaredName {
            kind: "agent",
            name: name.to_string(),
        })
    }

    /// Resolves an action name or fails with [`Error::UndeclaredName`].
    pub fn require_action(&self, name: &str) -> Result<ActionId> {
        self.action_id(name).ok_or_else(|| Error::UndeclaredName {
            kind: "action",
            name: name.to_string(),
        })
    }

    /// Index of a decision in mixed radix, first agent most significant.
    pub fn decision_index(&self, d: &[ActionId]) -> usize {
        d.iter().fold(0, |acc, &a| acc * self.actions.len() + a)
    }

    /// Decision with the given index.
    pub fn decision_at(&self, mut index: usize) -> Decision {
        let mut d = vec![0; self.agents.len()];
        for slot in d.iter_mut().rev() {
            *slot = index % self.actions.len();
            index /= self.actions.len();
        }
        d
    }

    /// All decisions in index order.
    pub fn decisions(&self) -> impl Iterator<Item = Decision> + '_ {
        (0..self.n_decisions).map(|i| self.decision_at(i))
    }

    /// Successor of `s` under the decision `d`, without range checks.
    pub fn step(&self, s: StateId, d: &[ActionId]) -> StateId {
        self.trans[s * self.n_decisions + self.decision_index(d)]
    }

    /// Successor of `s` under the decision with index `d`.
    pub fn step_index(&self, s: StateId, d: usize) -> StateId {
        self.trans[s * self.n_decisions + d]
    }

    /// Checked transition: the unique successor of `s` under `d`.
    pub fn transition(&self, s: StateId, d: &[ActionId]) -> Result<StateId> {
        if s >= self.states.len() {
            return Err(Error::UndeclaredName {
                kind: "state",
                name: s.to_string(),
            });
        }
        if d.len() != self.agents.len() {
            return Err(Error::Validation(format!(
                "decision has {} actions for {} agents",
                d.len(),
                self.agents.len()
            )));
        }
        if let Some(&a) = d.iter().find(|&&a| a >= self.actions.len()) {
            return Err(Error::UndeclaredName {
                kind: "action",
                name: a.to_string(),
            });
        }
        Ok(self.step(s, d))
    }

    /// Transition by names: `decision` maps each agent name to an action name.
    pub fn transition_named(&self, s: &str, decision: &[(&str, &str)]) -> Result<StateId> {
        let s = self.require_state(s)?;
        let mut d = vec![None; self.agents.len()];
        for (agent, action) in decision {
            d[self.require_agent(agent)?] = Some(self.require_action(action)?);
        }
        let d: Option<Decision> = d.into_iter().collect();
        let d = d.ok_or_else(|| Error::Validation("decision is not total".into()))?;
        self.transition(s, &d)
    }

    /// Distinct successors of `s`, ascending.
    pub fn successors(&self, s: StateId) -> Vec<StateId> {
        let row = &self.trans[s * self.n_decisions..(s + 1) * self.n_decisions];
        let set: BTreeSet<StateId> = row.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Returns a copy with one more atom, true exactly at `states`.
    pub fn with_atom(&self, name: &str, states: &BTreeSet<StateId>) -> Result<Cgs> {
        if self.atom_id(name).is_some() {
            return Err(Error::Validation(format!("atom `{name}` already declared")));
        }
        let mut g = self.clone();
        let id = g.atoms.len();
        g.atoms.push(name.to_string());
        for &s in states {
            g.labels[s].insert(id);
        }
        Ok(g)
    }

    /// Returns a copy with a different initial state.
    pub fn with_initial(&self, s: StateId) -> Result<Cgs> {
        if s >= self.states.len() {
            return Err(Error::Validation("initial state out of range".into()));
        }
        let mut g = self.clone();
        g.initial = s;
        Ok(g)
    }

    /// Owner function witnessing that the structure is turn-based, if one exists.
    ///
    /// For every state the owner is the first agent (in declaration order)
    /// whose action alone determines the successor.
    pub fn is_turn_based(&self) -> Option<Vec<AgentId>> {
        (0..self.states.len())
            .map(|s| (0..self.agents.len()).find(|&a| self.determines(s, a)))
            .collect()
    }

    fn determines(&self, s: StateId, agent: AgentId) -> bool {
        let mut seen: HashMap<ActionId, StateId> = HashMap::new();
        self.decisions().all(|d| {
            let t = self.step(s, &d);
            *seen.entry(d[agent]).or_insert(t) == t
        })
    }
}

fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    (0..exp).try_fold(1usize, |acc, _| {
        acc.checked_mul(base)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| Error::Validation("too many decisions".into()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Cgs {
        Cgs::new(
            vec!["p".into()],
            vec!["a".into(), "b".into()],
            vec!["0".into(), "1".into()],
            vec!["s".into(), "t".into()],
            0,
            vec![BTreeSet::new(), BTreeSet::from([0])],
            vec![0, 1, 1, 0, 1, 1, 1, 1],
        )
        .unwrap()
    }

    #[test]
    fn decision_indexing_round_trips() {
        let g = tiny();
        for i in 0..g.n_decisions() {
            assert_eq!(g.decision_index(&g.decision_at(i)), i);
        }
        assert_eq!(g.decision_at(2), vec![1, 0]);
    }

    #[test]
    fn step_reads_the_table() {
        let g = tiny();
        assert_eq!(g.step(0, &[0, 1]), 1);
        assert_eq!(g.step(0, &[1, 1]), 0);
        assert_eq!(g.successors(0), vec![0, 1]);
        assert_eq!(g.successors(1), vec![1]);
    }

    #[test]
    fn rejects_partial_tables() {
        let err = Cgs::new(
            vec![],
            vec!["a".into()],
            vec!["0".into()],
            vec!["s".into()],
            0,
            vec![BTreeSet::new()],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err, Error::Validation("trans not total".into()));
    }

    #[test]
    fn checked_transition_reports_undeclared_names() {
        let g = tiny();
        assert!(matches!(
            g.transition_named("u", &[("a", "0"), ("b", "0")]),
            Err(Error::UndeclaredName { kind: "state", .. })
        ));
        assert!(matches!(
            g.transition_named("s", &[("a", "2"), ("b", "0")]),
            Err(Error::UndeclaredName { kind: "action", .. })
        ));
        assert_eq!(g.transition_named("s", &[("a", "0"), ("b", "1")]), Ok(1));
    }

    #[test]
    fn xor_structure_is_not_turn_based() {
        assert_eq!(tiny().is_turn_based(), None);
    }
}
