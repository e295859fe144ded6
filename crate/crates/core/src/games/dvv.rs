//! Dependence-vs-valuation games truncated at a finite horizon.
//!
//! Player even stands at a track and picks a dependence map over actions;
//! player odd answers with a universal valuation, which fixes the next state
//! through the binding. Plays are judged by a predicate that only looks at
//! the first `h + 1` states.

use std::collections::BTreeSet;

use super::parity::Player;
use crate::dependence::{
    digit, enumerate_dependence_maps, from_adjoint, AdjointMap, DependenceMap, DEFAULT_BOUND,
};
use crate::error::{Error, Result};
use crate::model::{Cgs, StateId};
use crate::syntax::{BindPrefix, Formula, QuantPrefix};

/// The arena of the game for `g` in `root` with respect to `prefix` and
/// `bind`. Successors of odd positions are precomputed per state and map.
#[derive(Debug, Clone)]
pub struct DvvGame {
    cgs: Cgs,
    root: StateId,
    prefix: QuantPrefix,
    /// Prefix position of the variable bound to each agent.
    zeta: Vec<usize>,
    maps: Vec<DependenceMap>,
    /// `succ[s][m]`: states reached from `s` under map `m`.
    succ: Vec<Vec<BTreeSet<StateId>>>,
}

/// Builds the arena. The binding must cover every agent with a variable of
/// `prefix`.
pub fn build_dvv_game(
    g: &Cgs,
    root: StateId,
    prefix: &QuantPrefix,
    bind: &BindPrefix,
) -> Result<DvvGame> {
    if root >= g.n_states() {
        return Err(Error::Validation(format!("no state {root}")));
    }
    let zeta = bind
        .variables_for(g.agents())?
        .iter()
        .map(|x| {
            prefix.index_of(x).ok_or_else(|| {
                Error::PrefixMismatch(format!("variable `{x}` is bound but not quantified"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let maps: Vec<DependenceMap> =
        enumerate_dependence_maps(prefix, g.n_actions(), DEFAULT_BOUND)?.collect();
    let succ = (0..g.n_states())
        .map(|s| {
            maps.iter()
                .map(|theta| {
                    theta
                        .images()
                        .iter()
                        .map(|nu| {
                            let d: Vec<usize> = zeta.iter().map(|&k| nu[k]).collect();
                            g.step(s, &d)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(DvvGame {
        cgs: g.clone(),
        root,
        prefix: prefix.clone(),
        zeta,
        maps,
        succ,
    })
}

impl DvvGame {
    pub fn cgs(&self) -> &Cgs {
        &self.cgs
    }

    pub fn root(&self) -> StateId {
        self.root
    }

    pub fn prefix(&self) -> &QuantPrefix {
        &self.prefix
    }

    /// The dependence maps available to player even, in enumeration order.
    pub fn maps(&self) -> &[DependenceMap] {
        &self.maps
    }

    /// Successors of the odd position `(t, maps[m])` where `t` ends in `s`.
    pub fn odd_successors(&self, s: StateId, m: usize) -> &BTreeSet<StateId> {
        &self.succ[s][m]
    }

    /// Tracks of length `1..=h` starting at the root, shortest first.
    pub fn tracks(&self, h: usize) -> Vec<Vec<StateId>> {
        let mut out = vec![vec![self.root]];
        let mut layer = out.clone();
        for _ in 1..h {
            let mut next = Vec::new();
            for t in &layer {
                for s in self.cgs.successors(*t.last().expect("tracks are non-empty")) {
                    let mut u = t.clone();
                    u.push(s);
                    next.push(u);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// The state reached from `s` when the variables take the values `nu`,
    /// given in prefix order.
    fn step(&self, s: StateId, nu: &[usize]) -> StateId {
        let d: Vec<usize> = self.zeta.iter().map(|&k| nu[k]).collect();
        self.cgs.step(s, &d)
    }
}

/// A set of paths determined by a bounded prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlayPredicate {
    /// Paths whose first `horizon + 1` states form one of `allowed`.
    Prefixes {
        horizon: usize,
        allowed: BTreeSet<Vec<StateId>>,
    },
    /// Paths satisfying an LTL formula built from atoms, Boolean connectives
    /// and `X`.
    Ltl(Formula),
    /// Paths outside the inner set.
    Complement(Box<PlayPredicate>),
}

impl PlayPredicate {
    /// Number of steps after the first state the predicate inspects.
    pub fn horizon(&self) -> Result<usize> {
        match self {
            PlayPredicate::Prefixes { horizon, .. } => Ok(*horizon),
            PlayPredicate::Ltl(f) => next_depth(f),
            PlayPredicate::Complement(p) => p.horizon(),
        }
    }

    pub fn complement(self) -> PlayPredicate {
        match self {
            PlayPredicate::Complement(p) => *p,
            p => PlayPredicate::Complement(Box::new(p)),
        }
    }

    /// Whether the paths extending `track` belong to the set. The track must
    /// be longer than the horizon.
    pub fn holds(&self, g: &Cgs, track: &[StateId]) -> Result<bool> {
        match self {
            PlayPredicate::Prefixes { horizon, allowed } => {
                Ok(allowed.contains(&track[..=*horizon]))
            }
            PlayPredicate::Ltl(f) => holds_at(g, f, track, 0),
            PlayPredicate::Complement(p) => Ok(!p.holds(g, track)?),
        }
    }
}

fn next_depth(f: &Formula) -> Result<usize> {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => Ok(0),
        Formula::Not(a) => next_depth(a),
        Formula::And(a, b) | Formula::Or(a, b) => Ok(next_depth(a)?.max(next_depth(b)?)),
        Formula::Next(a) => Ok(next_depth(a)? + 1),
        _ => Err(Error::PredicateNotBounded(f.to_string())),
    }
}

fn holds_at(g: &Cgs, f: &Formula, track: &[StateId], i: usize) -> Result<bool> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p) => g.holds(track[i], p),
        Formula::Not(a) => !holds_at(g, a, track, i)?,
        Formula::And(a, b) => holds_at(g, a, track, i)? && holds_at(g, b, track, i)?,
        Formula::Or(a, b) => holds_at(g, a, track, i)? || holds_at(g, b, track, i)?,
        Formula::Next(a) => holds_at(g, a, track, i + 1)?,
        _ => return Err(Error::PredicateNotBounded(f.to_string())),
    })
}

/// Whether player even can force every play into `p`.
pub fn even_wins_bounded(game: &DvvGame, p: &PlayPredicate) -> Result<bool> {
    let h = p.horizon()?;
    let mut track = vec![game.root];
    forces(game, p, h, &mut track, Player::Even)
}

/// Whether player odd can force some play out of `p`.
pub fn odd_wins_bounded(game: &DvvGame, p: &PlayPredicate) -> Result<bool> {
    let h = p.horizon()?;
    let mut track = vec![game.root];
    forces(game, p, h, &mut track, Player::Odd)
}

/// The winner of the game truncated at the horizon of `p`.
pub fn solve_dvv_bounded(game: &DvvGame, p: &PlayPredicate) -> Result<Player> {
    Ok(if even_wins_bounded(game, p)? {
        Player::Even
    } else {
        Player::Odd
    })
}

/// Whether `player` wins from the even position `track` by backward
/// induction over the remaining steps.
fn forces(
    game: &DvvGame,
    p: &PlayPredicate,
    h: usize,
    track: &mut Vec<StateId>,
    player: Player,
) -> Result<bool> {
    if track.len() > h {
        let inside = p.holds(&game.cgs, track)?;
        return Ok(inside == (player == Player::Even));
    }
    let s = *track.last().expect("tracks are non-empty");
    let mut per_map = Vec::with_capacity(game.maps.len());
    for m in 0..game.maps.len() {
        let mut results = Vec::new();
        for &t in game.odd_successors(s, m) {
            track.push(t);
            results.push(forces(game, p, h, track, player)?);
            track.pop();
        }
        per_map.push(match player {
            Player::Even => results.iter().all(|&b| b),
            Player::Odd => results.iter().any(|&b| b),
        });
    }
    Ok(match player {
        Player::Even => per_map.iter().any(|&b| b),
        Player::Odd => per_map.iter().all(|&b| b),
    })
}

/// Whether `p` is an encasement, decided by enumerating elementary
/// dependence maps over strategies on the tracks up to the horizon.
///
/// Each elementary map is assembled from one action-level map per track
/// and lifted with [`from_adjoint`]. A strategy is a function from these
/// tracks to actions, which is all a play needs up to the horizon.
pub fn is_encasement_bounded(game: &DvvGame, p: &PlayPredicate) -> Result<bool> {
    let h = p.horizon()?;
    if h == 0 {
        return p.holds(&game.cgs, &[game.root]);
    }
    let tracks = game.tracks(h);
    let n_t = tracks.len();
    let n_maps = game.maps.len();
    let d = game.cgs.n_actions();
    let total = (n_maps as u64)
        .checked_pow(n_t as u32)
        .filter(|&n| n <= DEFAULT_BOUND)
        .ok_or_else(|| Error::DomainTooLarge {
            count: format!("{n_maps}^{n_t}"),
            bound: DEFAULT_BOUND,
        })?;
    let position = |t: &[StateId]| tracks.iter().position(|u| u == t).expect("track listed");
    for choice in 0..total {
        let mut c = choice as usize;
        let mut maps = Vec::with_capacity(n_t);
        for _ in 0..n_t {
            maps.push(game.maps[c % n_maps].clone());
            c /= n_maps;
        }
        let lifted = from_adjoint(&AdjointMap { maps })?;
        let mut all_inside = true;
        for nu in lifted.images() {
            let mut track = vec![game.root];
            for _ in 0..h {
                let ti = position(&track);
                let actions: Vec<usize> = nu.iter().map(|&f| digit(f, ti, n_t, d)).collect();
                let next = game.step(*track.last().expect("non-empty"), &actions);
                track.push(next);
            }
            if !p.holds(&game.cgs, &track)? {
                all_inside = false;
                break;
            }
        }
        if all_inside {
            return Ok(true);
        }
    }
    Ok(false)
}
