//! Random instance generators and reference evaluators shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use slmc_core::automata::{PosBool, RegularTree, TreeAutomaton};
use slmc_core::model::Cgs;
use slmc_core::syntax::{classify, is_ngsl, to_pnf, xdepth, Formula, Quantifier};

pub const ATOMS: [&str; 2] = ["p", "q"];
pub const AGENTS: [&str; 3] = ["a", "b", "c"];
pub const VARS: [&str; 3] = ["x", "y", "z"];

/// A structure with `1..=max_states` states, two actions, `n_agents` agents
/// and atoms `p`, `q`.
pub fn random_cgs(rng: &mut impl Rng, max_states: usize, n_agents: usize) -> Cgs {
    let n = rng.gen_range(1..=max_states);
    let decisions = 1usize << n_agents;
    let labels = (0..n)
        .map(|_| (0..ATOMS.len()).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    let trans = (0..n * decisions).map(|_| rng.gen_range(0..n)).collect();
    Cgs::new(
        ATOMS.iter().map(|s| s.to_string()).collect(),
        AGENTS[..n_agents].iter().map(|s| s.to_string()).collect(),
        vec!["0".into(), "1".into()],
        (0..n).map(|i| format!("s{i}")).collect(),
        0,
        labels,
        trans,
    )
    .expect("generated structures are well formed")
}

/// An LTL formula over `p`, `q` and `extra` atoms using only Boolean
/// connectives and `X`, with X-depth at most `xdepth` and roughly `size`
/// nodes.
pub fn random_next_ltl(rng: &mut impl Rng, xdepth: usize, size: usize, extra: &[Formula]) -> Formula {
    if size <= 1 {
        let k = rng.gen_range(0..ATOMS.len() + extra.len());
        return if k < ATOMS.len() {
            Formula::atom(ATOMS[k])
        } else {
            extra[k - ATOMS.len()].clone()
        };
    }
    match rng.gen_range(0..5) {
        0 => Formula::not(random_next_ltl(rng, xdepth, size - 1, extra)),
        1 if xdepth > 0 => Formula::next(random_next_ltl(rng, xdepth - 1, size - 1, extra)),
        2 => Formula::or(
            random_next_ltl(rng, xdepth, size / 2, extra),
            random_next_ltl(rng, xdepth, size - 1 - size / 2, extra),
        ),
        _ => Formula::and(
            random_next_ltl(rng, xdepth, size / 2, extra),
            random_next_ltl(rng, xdepth, size - 1 - size / 2, extra),
        ),
    }
}

/// A random quantification prefix over the given variables, in random
/// order.
pub fn random_prefix(rng: &mut impl Rng, vars: &[&str]) -> Vec<(Quantifier, String)> {
    let mut vars: Vec<&str> = vars.to_vec();
    vars.shuffle(rng);
    vars.into_iter()
        .map(|x| {
            let q = if rng.gen_bool(0.5) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            (q, x.to_string())
        })
        .collect()
}

/// Binds every agent to one of `vars`, using each variable at least once
/// when there are enough agents.
pub fn random_binding(rng: &mut impl Rng, agents: &[String], vars: &[&str]) -> Vec<(String, String)> {
    let mut targets: Vec<&str> = vars.iter().copied().cycle().take(agents.len().max(vars.len())).collect();
    targets.truncate(agents.len());
    for t in targets.iter_mut().skip(vars.len()) {
        *t = vars[rng.gen_range(0..vars.len())];
    }
    targets.shuffle(rng);
    agents
        .iter()
        .zip(targets)
        .map(|(a, x)| (a.clone(), x.to_string()))
        .collect()
}

pub fn quantify(prefix: &[(Quantifier, String)], body: Formula) -> Formula {
    prefix
        .iter()
        .rev()
        .fold(body, |f, (q, x)| Formula::Quant(*q, x.clone(), Box::new(f)))
}

pub fn bind(binding: &[(String, String)], body: Formula) -> Formula {
    binding
        .iter()
        .rev()
        .fold(body, |f, (a, x)| Formula::bind(a, x, f))
}

/// A one-goal sentence `℘ ♭ ψ` in positive normal form over the agents of
/// `g`, with at most `max_vars` variables and X-depth at most `max_depth`.
/// With `nest` set the matrix may mention a further one-goal sentence.
/// Draws are repeated until the result is a sentence of the fragment.
pub fn random_one_goal(rng: &mut impl Rng, g: &Cgs, max_vars: usize, max_depth: usize, nest: bool) -> Formula {
    loop {
        let f = one_goal(rng, g, max_vars, max_depth, nest);
        let fits = xdepth(&f).is_some_and(|d| d <= max_depth);
        if fits && is_ngsl(&f, g.agents()) && classify(&f, g.agents()).ogsl {
            return f;
        }
    }
}

fn one_goal(rng: &mut impl Rng, g: &Cgs, max_vars: usize, xdepth: usize, nest: bool) -> Formula {
    let agents = g.agents().to_vec();
    let k = rng.gen_range(1..=max_vars.min(agents.len()));
    let vars = &VARS[..k];
    let binding = random_binding(rng, &agents, vars);
    let extra = if nest && rng.gen_bool(0.3) {
        vec![one_goal(rng, g, max_vars, xdepth.min(1), false)]
    } else {
        Vec::new()
    };
    let size = rng.gen_range(2..=6);
    let matrix = to_pnf(&random_next_ltl(rng, xdepth, size, &extra));
    quantify(&random_prefix(rng, vars), bind(&binding, matrix))
}

/// A prenex sentence whose matrix is a positive Boolean combination of two
/// or three goals over the agents of `g`, in positive normal form. The
/// result may fail the nested-goal grammar; callers filter.
pub fn random_nested_goal(rng: &mut impl Rng, g: &Cgs, xdepth: usize) -> Formula {
    let agents = g.agents().to_vec();
    let k = rng.gen_range(1..=VARS.len());
    let vars = &VARS[..k];
    let n_goals = rng.gen_range(2..=3);
    let goals: Vec<Formula> = (0..n_goals)
        .map(|_| {
            let binding: Vec<(String, String)> = agents
                .iter()
                .map(|a| (a.clone(), vars[rng.gen_range(0..k)].to_string()))
                .collect();
            let size = rng.gen_range(2..=5);
            bind(&binding, to_pnf(&random_next_ltl(rng, xdepth, size, &[])))
        })
        .collect();
    let matrix = goals
        .into_iter()
        .reduce(|acc, goal| {
            if rng.gen_bool(0.5) {
                Formula::and(acc, goal)
            } else {
                Formula::or(acc, goal)
            }
        })
        .expect("at least two goals");
    quantify(&random_prefix(rng, vars), matrix)
}

/// Every LTL formula over `atoms` with exactly `size` nodes, built from
/// constants, atoms, negation, conjunction, disjunction, `X`, `U` and `R`.
pub fn all_ltl_of_size(size: usize, atoms: &[&str]) -> Vec<Formula> {
    let mut table: Vec<Vec<Formula>> = vec![Vec::new()];
    for n in 1..=size {
        let mut out = Vec::new();
        if n == 1 {
            out.push(Formula::True);
            out.push(Formula::False);
            out.extend(atoms.iter().map(|a| Formula::atom(a)));
        } else {
            for f in &table[n - 1] {
                out.push(Formula::not(f.clone()));
                out.push(Formula::next(f.clone()));
            }
            for left in 1..n - 1 {
                let right = n - 1 - left;
                for a in &table[left] {
                    for b in &table[right] {
                        out.push(Formula::and(a.clone(), b.clone()));
                        out.push(Formula::or(a.clone(), b.clone()));
                        out.push(Formula::until(a.clone(), b.clone()));
                        out.push(Formula::release(a.clone(), b.clone()));
                    }
                }
            }
        }
        table.push(out);
    }
    table.swap_remove(size)
}

/// Truth of `f` at every position of the lasso whose letters are given by
/// `word` (position `i` moving to `succ[i]`), letter bit `k` standing for
/// `atoms[k]`. Until and release are computed as least and greatest fixed
/// points.
pub fn lasso_truth(f: &Formula, atoms: &[&str], word: &[u32], succ: &[usize]) -> Vec<bool> {
    let n = word.len();
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(a) => {
            let k = atoms.iter().position(|x| x == a).expect("atom in the alphabet");
            word.iter().map(|l| l >> k & 1 == 1).collect()
        }
        Formula::Not(a) => lasso_truth(a, atoms, word, succ).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => {
            let (x, y) = (lasso_truth(a, atoms, word, succ), lasso_truth(b, atoms, word, succ));
            x.iter().zip(&y).map(|(u, v)| *u && *v).collect()
        }
        Formula::Or(a, b) => {
            let (x, y) = (lasso_truth(a, atoms, word, succ), lasso_truth(b, atoms, word, succ));
            x.iter().zip(&y).map(|(u, v)| *u || *v).collect()
        }
        Formula::Next(a) => {
            let x = lasso_truth(a, atoms, word, succ);
            (0..n).map(|i| x[succ[i]]).collect()
        }
        Formula::Until(a, b) | Formula::Release(a, b) => {
            let until = matches!(f, Formula::Until(..));
            let (x, y) = (lasso_truth(a, atoms, word, succ), lasso_truth(b, atoms, word, succ));
            let mut cur = vec![!until; n];
            for _ in 0..=n {
                cur = (0..n)
                    .map(|i| {
                        if until {
                            y[i] || (x[i] && cur[succ[i]])
                        } else {
                            y[i] && (x[i] || cur[succ[i]])
                        }
                    })
                    .collect();
            }
            cur
        }
        other => panic!("not an LTL formula: {other}"),
    }
}

/// Universal co-Büchi membership of a regular tree, read off the graph of
/// (tree vertex, state) pairs: the tree is rejected when some reachable
/// pair reaches `false` or lies on a cycle through a co-Büchi state.
pub fn universal_cobuchi_accepts(u: &TreeAutomaton, cobuchi: &BTreeSet<usize>, t: &RegularTree) -> bool {
    fn moves(f: &PosBool, out: &mut Vec<(usize, usize)>) -> bool {
        match f {
            PosBool::True => true,
            PosBool::False => false,
            PosBool::Move(d, q) => {
                out.push((*d, *q));
                true
            }
            PosBool::And(fs) => fs.iter().all(|g| moves(g, out)),
            PosBool::Or(_) => panic!("disjunction in a universal automaton"),
        }
    }
    let mut succ: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    let mut stack = vec![(t.root, u.initial)];
    while let Some((v, q)) = stack.pop() {
        if succ.contains_key(&(v, q)) {
            continue;
        }
        let mut out = Vec::new();
        if !moves(&u.delta[q][t.labels[v]], &mut out) {
            return false;
        }
        let next: Vec<(usize, usize)> = out.into_iter().map(|(d, r)| (t.children[v][d], r)).collect();
        stack.extend(next.iter().copied());
        succ.insert((v, q), next);
    }
    for &start in succ.keys().filter(|(_, q)| cobuchi.contains(q)) {
        let mut seen = BTreeSet::new();
        let mut stack = succ[&start].clone();
        while let Some(w) = stack.pop() {
            if w == start {
                return false;
            }
            if seen.insert(w) {
                stack.extend(succ[&w].iter().copied());
            }
        }
    }
    true
}
