//! Nondeterminization of universal co-Büchi tree automata and direction
//! projection of nondeterministic ones.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::posbool::PosBool;
use super::tree::{checked, TreeAutomaton};
use crate::dependence::DEFAULT_BOUND;
use crate::error::{Error, Result};

type Moves = Option<Vec<(usize, usize)>>;

/// A state of the nondeterministic automaton: a level ranking of the
/// universal automaton's states and the breakpoint set of even-ranked
/// states still owing a visit to an odd rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Ranked {
    ranks: Vec<(usize, usize)>,
    owing: Vec<usize>,
}

/// A nondeterministic Büchi tree automaton with the language of the
/// universal co-Büchi automaton `u`.
///
/// The construction first removes states whose language is empty (co-Büchi
/// states that can always be forced to stay among such states) or universal
/// (non-co-Büchi states all of whose moves stay among such states). Over
/// the remaining states it runs the ranking construction with the breakpoint
/// set, using rank bound `2·n` for `n` remaining states, or rank bound `0`
/// when the remaining states have no cycle (then every run is finite on
/// them). Only states reachable from the initial ranking are built. The
/// Büchi set holds the states with an empty breakpoint set and is encoded
/// as the chain `(∅, B, Q)`.
pub fn nondeterminize_cobuchi(u: &TreeAutomaton) -> Result<TreeAutomaton> {
    let cob = u
        .cobuchi_set()
        .ok_or_else(|| Error::Unsupported(format!("parity index {} above co-Büchi", u.index())))?;
    let n = u.states.len();
    let n_letters = u.n_letters();
    let mut conj: Vec<Vec<Moves>> = Vec::with_capacity(n);
    for (q, row) in u.delta.iter().enumerate() {
        let mut out = Vec::with_capacity(n_letters);
        for (l, f) in row.iter().enumerate() {
            out.push(f.conjunction().map_err(|_| {
                Error::NotUniversal(format!("state {} on letter {}", u.states[q], u.letter_name(l)))
            })?);
        }
        conj.push(out);
    }

    let empty = empty_language_states(&conj, &cob);
    let universal = universal_states(&conj, &cob, &empty);
    let pruned: Vec<Vec<Moves>> = conj
        .iter()
        .map(|row| {
            row.iter()
                .map(|m| {
                    let m = m.as_ref()?;
                    if m.iter().any(|&(_, r)| empty[r]) {
                        return None;
                    }
                    let mut kept: Vec<(usize, usize)> =
                        m.iter().copied().filter(|&(_, r)| !universal[r]).collect();
                    kept.sort_unstable();
                    kept.dedup();
                    Some(kept)
                })
                .collect()
        })
        .collect();

    let live = reachable(&pruned, u.initial);
    let max_rank = if has_cycle(&pruned, &live) { 2 * live.iter().filter(|&&b| b).count() } else { 0 };

    let mut ids: HashMap<Ranked, usize> = HashMap::new();
    let mut order: Vec<Ranked> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let start = Ranked {
        ranks: vec![(u.initial, max_rank)],
        owing: Vec::new(),
    };
    ids.insert(start.clone(), 0);
    order.push(start);
    queue.push_back(0);
    let mut delta: Vec<Vec<PosBool>> = Vec::new();
    let n_dir = u.directions.len();
    while let Some(i) = queue.pop_front() {
        let state = order[i].clone();
        let mut row = Vec::with_capacity(n_letters);
        for l in 0..n_letters {
            let mut dead = false;
            // Per direction: successor -> (rank bound, reached from a state owing a visit).
            let mut succ: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n_dir];
            for &(q, r) in &state.ranks {
                let Some(moves) = &pruned[q][l] else {
                    dead = true;
                    break;
                };
                let owing = state.owing.contains(&q);
                for &(d, t) in moves {
                    match succ[d].iter_mut().find(|e| e.0 == t) {
                        Some(e) => {
                            e.1 = e.1.min(r);
                            e.2 |= owing;
                        }
                        None => succ[d].push((t, r, owing)),
                    }
                }
            }
            if dead {
                row.push(PosBool::False);
                continue;
            }
            let breakpoint = state.owing.is_empty();
            let mut parts = Vec::new();
            for (d, entries) in succ.iter_mut().enumerate() {
                if entries.is_empty() {
                    continue;
                }
                entries.sort_unstable();
                let mut options = Vec::new();
                for_each_ranking(entries, &cob, DEFAULT_BOUND, &mut |ranks| {
                    let owing: Vec<usize> = entries
                        .iter()
                        .zip(ranks)
                        .filter(|((_, _, from_owing), &r)| r % 2 == 0 && (breakpoint || *from_owing))
                        .map(|((t, _, _), _)| *t)
                        .collect();
                    let next = Ranked {
                        ranks: entries.iter().map(|e| e.0).zip(ranks.iter().copied()).collect(),
                        owing,
                    };
                    let id = *ids.entry(next.clone()).or_insert_with(|| {
                        order.push(next);
                        queue.push_back(order.len() - 1);
                        order.len() - 1
                    });
                    options.push(PosBool::Move(d, id));
                })?;
                parts.push(PosBool::or(options));
            }
            row.push(PosBool::and(parts));
        }
        delta.push(row);
    }
    let total = order.len();
    let buchi: BTreeSet<usize> = (0..total).filter(|&i| order[i].owing.is_empty()).collect();
    let states = order
        .iter()
        .map(|s| {
            let ranks: Vec<String> = s.ranks.iter().map(|(q, r)| format!("{}:{r}", u.states[*q])).collect();
            let owing: Vec<String> = s.owing.iter().map(|q| u.states[*q].clone()).collect();
            format!("{{{}}}/{{{}}}", ranks.join(","), owing.join(","))
        })
        .collect();
    checked(TreeAutomaton {
        sigma: u.sigma.clone(),
        product: u.product,
        directions: u.directions.clone(),
        states,
        initial: 0,
        delta,
        acceptance: vec![BTreeSet::new(), buchi, (0..total).collect()],
        places: u.places.clone(),
        n_actions: u.n_actions,
    })
}

/// Calls `f` with every rank vector for `entries`: entry `(t, bound, _)`
/// takes a rank at most `bound`, even when `t` is a co-Büchi state.
fn for_each_ranking(
    entries: &[(usize, usize, bool)],
    cob: &BTreeSet<usize>,
    limit: u64,
    f: &mut impl FnMut(&[usize]),
) -> Result<()> {
    let choices: Vec<Vec<usize>> = entries
        .iter()
        .map(|&(t, bound, _)| (0..=bound).filter(|r| !cob.contains(&t) || r % 2 == 0).collect())
        .collect();
    let count = choices
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .filter(|&c| c <= limit)
        .ok_or_else(|| Error::DomainTooLarge {
            count: "level rankings".into(),
            bound: limit,
        })?;
    let mut idx = vec![0usize; choices.len()];
    let mut ranks: Vec<usize> = choices.iter().map(|c| c[0]).collect();
    for _ in 0..count {
        f(&ranks);
        for k in (0..choices.len()).rev() {
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                ranks[k] = choices[k][idx[k]];
                break;
            }
            idx[k] = 0;
            ranks[k] = choices[k][0];
        }
    }
    Ok(())
}

/// States from which every tree is rejected: co-Büchi states that can be
/// forced, on every letter, to move to such a state (or have no transition),
/// closed under states forced into them.
fn empty_language_states(conj: &[Vec<Moves>], cob: &BTreeSet<usize>) -> Vec<bool> {
    let n = conj.len();
    let forced_into = |q: usize, set: &[bool]| {
        conj[q]
            .iter()
            .all(|m| m.as_ref().is_none_or(|m| m.iter().any(|&(_, r)| set[r])))
    };
    let mut set: Vec<bool> = (0..n).map(|q| cob.contains(&q)).collect();
    loop {
        let next: Vec<bool> = (0..n).map(|q| set[q] && forced_into(q, &set)).collect();
        if next == set {
            break;
        }
        set = next;
    }
    loop {
        let next: Vec<bool> = (0..n).map(|q| set[q] || forced_into(q, &set)).collect();
        if next == set {
            return set;
        }
        set = next;
    }
}

/// States accepting every tree: outside the co-Büchi set, never stuck, and
/// moving only to such states.
fn universal_states(conj: &[Vec<Moves>], cob: &BTreeSet<usize>, empty: &[bool]) -> Vec<bool> {
    let n = conj.len();
    let mut set: Vec<bool> = (0..n).map(|q| !cob.contains(&q) && !empty[q]).collect();
    loop {
        let next: Vec<bool> = (0..n)
            .map(|q| {
                set[q]
                    && conj[q]
                        .iter()
                        .all(|m| m.as_ref().is_some_and(|m| m.iter().all(|&(_, r)| set[r])))
            })
            .collect();
        if next == set {
            return set;
        }
        set = next;
    }
}

fn reachable(pruned: &[Vec<Moves>], from: usize) -> Vec<bool> {
    let mut seen = vec![false; pruned.len()];
    let mut stack = vec![from];
    while let Some(q) = stack.pop() {
        if std::mem::replace(&mut seen[q], true) {
            continue;
        }
        for m in pruned[q].iter().flatten() {
            stack.extend(m.iter().map(|&(_, r)| r));
        }
    }
    seen
}

fn has_cycle(pruned: &[Vec<Moves>], live: &[bool]) -> bool {
    let n = pruned.len();
    let succ: Vec<BTreeSet<usize>> = (0..n)
        .map(|q| {
            pruned[q]
                .iter()
                .flatten()
                .flat_map(|m| m.iter().map(|&(_, r)| r))
                .collect()
        })
        .collect();
    // 0 = unvisited, 1 = on stack, 2 = done.
    let mut mark = vec![0u8; n];
    fn visit(q: usize, succ: &[BTreeSet<usize>], mark: &mut [u8]) -> bool {
        mark[q] = 1;
        for &r in &succ[q] {
            if mark[r] == 1 || (mark[r] == 0 && visit(r, succ, mark)) {
                return true;
            }
        }
        mark[q] = 2;
        false
    }
    (0..n).any(|q| live[q] && mark[q] == 0 && visit(q, &succ, &mut mark))
}

/// The automaton over `sigma` that runs `n` with each state paired with the
/// direction it was reached by: state `(q, d)` reads `σ` as `n` reads
/// `(σ, d)`, every move `(d', q')` becomes `(d', (q', d'))`, the initial
/// state is `(q0, d0)` and each level `F_i` becomes `F_i × Dir`. State
/// `(q, d)` has index `q·|Dir| + d`.
pub fn project_direction(n: &TreeAutomaton, d0: usize) -> Result<TreeAutomaton> {
    if !n.product {
        return Err(Error::AlphabetNotProduct);
    }
    let n_dir = n.directions.len();
    if d0 >= n_dir {
        return Err(Error::Validation(format!("direction {d0} out of range")));
    }
    let pair = |q: usize, d: usize| q * n_dir + d;
    let mut delta = Vec::with_capacity(n.states.len() * n_dir);
    let mut states = Vec::with_capacity(n.states.len() * n_dir);
    for q in 0..n.states.len() {
        for d in 0..n_dir {
            states.push(format!("({},{})", n.states[q], n.directions[d]));
            let row = (0..n.sigma.len())
                .map(|s| n.delta[q][n.letter(s, d)].map_moves(&mut |d2, q2| PosBool::Move(d2, pair(q2, d2))))
                .collect();
            delta.push(row);
        }
    }
    let acceptance = n
        .acceptance
        .iter()
        .map(|f| f.iter().flat_map(|&q| (0..n_dir).map(move |d| pair(q, d))).collect())
        .collect();
    checked(TreeAutomaton {
        sigma: n.sigma.clone(),
        product: false,
        directions: n.directions.clone(),
        states,
        initial: pair(n.initial, d0),
        delta,
        acceptance,
        places: n.places.clone(),
        n_actions: n.n_actions,
    })
}
