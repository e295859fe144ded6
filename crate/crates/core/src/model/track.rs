//! Tracks (finite histories) and eventually periodic paths.

use std::collections::BTreeSet;

use super::cgs::{Cgs, StateId};
use crate::error::{Error, Result};

/// A non-empty finite sequence of states, each reachable from its predecessor
/// by some decision.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Track(Vec<StateId>);

impl Track {
    /// Validates `states` against `g`.
    pub fn new(g: &Cgs, states: Vec<StateId>) -> Result<Track> {
        if states.is_empty() {
            return Err(Error::Validation("empty track".into()));
        }
        if let Some(&s) = states.iter().find(|&&s| s >= g.n_states()) {
            return Err(Error::UndeclaredName {
                kind: "state",
                name: s.to_string(),
            });
        }
        for w in states.windows(2) {
            if !g.successors(w[0]).contains(&w[1]) {
                return Err(Error::Validation(format!(
                    "no decision leads from `{}` to `{}`",
                    g.states()[w[0]],
                    g.states()[w[1]]
                )));
            }
        }
        Ok(Track(states))
    }

    /// Wraps a sequence already known to be a track.
    pub(crate) fn from_vec(states: Vec<StateId>) -> Track {
        debug_assert!(!states.is_empty());
        Track(states)
    }

    pub fn states(&self) -> &[StateId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> StateId {
        self.0[0]
    }

    pub fn last(&self) -> StateId {
        self.0[self.0.len() - 1]
    }

    pub fn into_vec(self) -> Vec<StateId> {
        self.0
    }
}

/// An infinite path `stem · cycle^ω` with a non-empty cycle.
#[derive(Debug, Clone, Eq)]
pub struct Path {
    pub stem: Vec<StateId>,
    pub cycle: Vec<StateId>,
}

impl Path {
    pub fn new(stem: Vec<StateId>, cycle: Vec<StateId>) -> Result<Path> {
        if cycle.is_empty() {
            return Err(Error::Validation("path cycle must be non-empty".into()));
        }
        Ok(Path { stem, cycle })
    }

    /// The state at position `i`.
    pub fn at(&self, i: usize) -> StateId {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// The first `n` positions.
    pub fn prefix(&self, n: usize) -> Vec<StateId> {
        (0..n).map(|i| self.at(i)).collect()
    }
}

impl PartialEq for Path {
    /// Semantic equality: both describe the same infinite sequence.
    fn eq(&self, other: &Path) -> bool {
        let horizon = self.stem.len().max(other.stem.len())
            + lcm(self.cycle.len(), other.cycle.len());
        (0..horizon).all(|i| self.at(i) == other.at(i))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// All tracks starting at `s` with length between 1 and `max_len`, shortest
/// first and lexicographic within one length.
pub fn tracks_from(g: &Cgs, s: StateId, max_len: usize) -> Vec<Track> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut layer = vec![vec![s]];
    for len in 1..=max_len {
        out.extend(layer.iter().cloned().map(Track));
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for t in &layer {
            for n in g.successors(*t.last().expect("tracks are non-empty")) {
                let mut u = t.clone();
                u.push(n);
                next.push(u);
            }
        }
        layer = next;
    }
    out
}

/// States reachable from `s` (including `s`).
pub fn reachable(g: &Cgs, s: StateId) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::from([s]);
    let mut stack = vec![s];
    while let Some(t) = stack.pop() {
        for n in g.successors(t) {
            if seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen
}
