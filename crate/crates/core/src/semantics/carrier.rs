//! Finite strategy carriers used by the enumerative engine.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{ActionId, Cgs, StateId, Transducer};

/// The tracks of length `1..=depth` from a root state, numbered breadth-first.
#[derive(Debug)]
pub(crate) struct Trie {
    depth: usize,
    root: StateId,
    children: Vec<Vec<Option<usize>>>,
}

impl Trie {
    pub(crate) fn new(g: &Cgs, root: StateId, depth: usize) -> Trie {
        let mut children: Vec<Vec<Option<usize>>> = Vec::new();
        if depth == 0 {
            return Trie {
                depth,
                root,
                children,
            };
        }
        let mut frontier = vec![(0usize, root)];
        children.push(vec![None; g.n_states()]);
        for _ in 1..depth {
            let mut next = Vec::new();
            for &(node, s) in &frontier {
                for t in g.successors(s) {
                    let id = children.len();
                    children.push(vec![None; g.n_states()]);
                    children[node][t] = Some(id);
                    next.push((id, t));
                }
            }
            frontier = next;
        }
        Trie {
            depth,
            root,
            children,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.children.len()
    }

    /// Node of `track`, which must start at the root.
    pub(crate) fn locate(&self, track: &[StateId]) -> Result<usize> {
        if track.len() > self.depth {
            return Err(Error::HorizonExceeded {
                horizon: self.depth,
                length: track.len(),
            });
        }
        if track.first() != Some(&self.root) {
            return Err(Error::DomainMismatch(format!(
                "track {track:?} does not start at state {}",
                self.root
            )));
        }
        let mut node = 0;
        for &s in &track[1..] {
            node = self.children[node][s]
                .ok_or_else(|| Error::DomainMismatch(format!("track {track:?} is not legal")))?;
        }
        Ok(node)
    }
}

/// Digit `pos` of `index` written in base `base` with `len` digits, first
/// digit most significant.
pub(crate) fn digit(index: u64, pos: usize, len: usize, base: usize) -> usize {
    let base = base as u64;
    ((index / base.pow((len - 1 - pos) as u32)) % base) as usize
}

/// `base^exp`, or `None` when it exceeds `bound`.
pub(crate) fn bounded_pow(base: usize, exp: usize, bound: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u64)?;
        if acc > bound {
            return None;
        }
    }
    Some(acc)
}

pub(crate) fn too_large(what: String, bound: u64) -> Error {
    Error::DomainTooLarge { count: what, bound }
}

/// Every transducer with exactly `m` memory states and initial memory `0`.
pub(crate) fn machines(g: &Cgs, m: usize, bound: u64) -> Result<Vec<Arc<Transducer>>> {
    if m == 0 {
        return Err(Error::Validation("memory bound must be positive".into()));
    }
    let cells = m * g.n_states();
    let a = g.n_actions();
    let n_update = bounded_pow(m, cells, bound);
    let n_output = bounded_pow(a, cells, bound);
    let total = match (n_update, n_output) {
        (Some(u), Some(o)) if u.saturating_mul(o) <= bound => u * o,
        _ => return Err(too_large(format!("{m}^{cells} * {a}^{cells}"), bound)),
    };
    let mut out = Vec::with_capacity(total as usize);
    let n_output = n_output.expect("checked above");
    for i in 0..total {
        let (ui, oi) = (i / n_output, i % n_output);
        let update = (0..cells).map(|c| digit(ui, c, cells, m)).collect();
        let output: Vec<ActionId> = (0..cells).map(|c| digit(oi, c, cells, a)).collect();
        out.push(Arc::new(Transducer::new(m, g.n_states(), 0, update, output)?));
    }
    Ok(out)
}
