//! Tree automata for goals `♭ψ` and principal sentences `℘♭ψ`.

use std::collections::BTreeSet;

use super::posbool::PosBool;
use super::tree::{checked, valuation_digits, valuation_names, TreeAutomaton};
use super::word::{WordAcceptance, WordAutomaton, WordMode};
use crate::dependence::{enumerate_dependence_maps, DEFAULT_BOUND};
use crate::error::{Error, Result};
use crate::model::{Cgs, Place};
use crate::syntax::{BindPrefix, QuantPrefix};

/// The universal co-Büchi tree automaton of the goal `♭ψ`, reading the
/// encoding of assignments over the variables `vars`.
///
/// Letters are pairs `(v, s)` of a valuation of `vars` and a state. At a
/// node labelled `(v, s)` every copy of the word automaton reads the label
/// of `s` and moves in direction `τ(s, v ∘ ζ_♭)`. A fresh initial state
/// starts all initial states of the word automaton at once.
pub fn goal_uct(
    g: &Cgs,
    bind: &BindPrefix,
    ucw: &WordAutomaton,
    vars: &[String],
) -> Result<TreeAutomaton> {
    if ucw.mode != WordMode::Universal {
        return Err(Error::Validation("goal automaton needs a universal word automaton".into()));
    }
    let WordAcceptance::CoBuchi(cob) = &ucw.acceptance else {
        return Err(Error::Validation("goal automaton needs a co-Büchi word automaton".into()));
    };
    let bound = bind.variables_for(g.agents())?;
    let zeta: Vec<usize> = bound
        .iter()
        .map(|x| {
            vars.iter().position(|v| v == x).ok_or_else(|| {
                Error::PrefixMismatch(format!("variable `{x}` is bound but not quantified"))
            })
        })
        .collect::<Result<_>>()?;
    let atom_ids: Vec<usize> = ucw
        .atoms
        .iter()
        .map(|p| {
            g.atom_id(p).ok_or_else(|| Error::UndeclaredName {
                kind: "atom",
                name: p.clone(),
            })
        })
        .collect::<Result<_>>()?;
    let mask = |s: usize| -> usize {
        atom_ids
            .iter()
            .enumerate()
            .filter(|(_, a)| g.label(s).contains(a))
            .fold(0, |acc, (i, _)| acc | (1 << i))
    };

    let n_val = g.n_actions().pow(vars.len() as u32);
    let n_st = g.n_states();
    let n_q = ucw.states.len() + 1;
    let mut delta = vec![vec![PosBool::True; n_val * n_st]; n_q];
    for vi in 0..n_val {
        let v = valuation_digits(vi, vars.len(), g.n_actions());
        let decision: Vec<usize> = zeta.iter().map(|&k| v[k]).collect();
        for s in 0..n_st {
            let dir = g.step(s, &decision);
            let m = mask(s);
            let letter = vi * n_st + s;
            let step = |q: usize| PosBool::and(ucw.delta[q][m].iter().map(|&r| PosBool::Move(dir, r + 1)));
            for q in 0..ucw.states.len() {
                delta[q + 1][letter] = step(q);
            }
            delta[0][letter] = PosBool::and(ucw.initial.iter().map(|&q| step(q)));
        }
    }
    let mut states = vec!["q0".to_string()];
    states.extend(ucw.states.iter().cloned());
    let places: Vec<Place> = vars.iter().map(|x| Place::Var(x.clone())).collect();
    checked(TreeAutomaton {
        sigma: valuation_names(&places, g.n_actions()),
        product: true,
        directions: g.states().to_vec(),
        states,
        initial: 0,
        delta,
        acceptance: vec![cob.iter().map(|&q| q + 1).collect(), (0..n_q).collect()],
        places,
        n_actions: g.n_actions(),
    })
}

/// The universal co-Büchi tree automaton of `℘♭ψ` over letters
/// `(θ, s)` with `θ` a dependence map of `℘`. Reading `(θ, s)` in state `q`
/// conjoins the goal transitions on `(θ(v), s)` over every universal
/// valuation `v`. Maps are listed in their canonical enumeration order.
pub fn sentence_uct(goal: &TreeAutomaton, prefix: &QuantPrefix) -> Result<TreeAutomaton> {
    let expected: Vec<Place> = prefix.vars().into_iter().map(Place::Var).collect();
    if goal.places != expected || !goal.product {
        return Err(Error::PrefixMismatch(format!(
            "prefix {prefix} does not list the variables of the goal automaton"
        )));
    }
    let n_dir = goal.directions.len();
    let mut sigma = Vec::new();
    let mut images: Vec<BTreeSet<usize>> = Vec::new();
    for (i, theta) in enumerate_dependence_maps(prefix, goal.n_actions, DEFAULT_BOUND)?.enumerate() {
        sigma.push(format!("m{i}"));
        images.push(
            theta
                .images()
                .iter()
                .map(|nu| super::tree::valuation_index(nu, goal.n_actions))
                .collect(),
        );
    }
    let delta = goal
        .delta
        .iter()
        .map(|row| {
            let mut out = Vec::with_capacity(images.len() * n_dir);
            for img in &images {
                for s in 0..n_dir {
                    out.push(PosBool::and(img.iter().map(|&vi| row[vi * n_dir + s].clone())));
                }
            }
            out
        })
        .collect();
    checked(TreeAutomaton {
        sigma,
        product: true,
        directions: goal.directions.clone(),
        states: goal.states.clone(),
        initial: goal.initial,
        delta,
        acceptance: goal.acceptance.clone(),
        places: Vec::new(),
        n_actions: goal.n_actions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::word::ltl_to_ucw;
    use crate::dependence::count_dependence_maps;
    use crate::model::fixture;
    use crate::syntax::{parse_formula, Dialect};

    fn parts() -> (Cgs, BindPrefix, WordAutomaton, QuantPrefix) {
        let g = fixture("g1").unwrap();
        let bind = BindPrefix::new(vec![
            ("alpha".into(), "x".into()),
            ("beta".into(), "y".into()),
            ("gamma".into(), "z".into()),
        ])
        .unwrap();
        let ucw = ltl_to_ucw(&parse_formula("X p", Dialect::Ltl).unwrap()).unwrap();
        (g, bind, ucw, QuantPrefix::parse("[[x]]<<y>>[[z]]").unwrap())
    }

    #[test]
    fn goal_automaton_adds_one_state_and_keeps_acceptance() {
        let (g, bind, ucw, p) = parts();
        let goal = goal_uct(&g, &bind, &ucw, &p.vars()).unwrap();
        assert_eq!(goal.states.len(), ucw.states.len() + 1);
        let WordAcceptance::CoBuchi(cob) = &ucw.acceptance else { unreachable!() };
        let shifted: BTreeSet<usize> = cob.iter().map(|q| q + 1).collect();
        assert_eq!(goal.acceptance[0], shifted);
        assert_eq!(goal.n_letters(), 8 * g.n_states());
    }

    #[test]
    fn sentence_alphabet_counts_dependence_maps() {
        let (g, bind, ucw, p) = parts();
        let goal = goal_uct(&g, &bind, &ucw, &p.vars()).unwrap();
        let s = sentence_uct(&goal, &p).unwrap();
        let count: usize = count_dependence_maps(&p, 2).try_into().unwrap();
        assert_eq!(s.n_letters(), count * g.n_states());
        assert_eq!(s.states, goal.states);
        assert_eq!(s.acceptance, goal.acceptance);
        assert!(s.is_universal());
    }

    #[test]
    fn existential_prefix_has_one_conjunct_per_letter() {
        let (g, bind, ucw, _) = parts();
        let p = QuantPrefix::parse("<<x>><<y>><<z>>").unwrap();
        let goal = goal_uct(&g, &bind, &ucw, &p.vars()).unwrap();
        let s = sentence_uct(&goal, &p).unwrap();
        for q in 0..s.states.len() {
            for (l, f) in s.delta[q].iter().enumerate() {
                let (m, st) = (l / g.n_states(), l % g.n_states());
                let vi = super::super::tree::valuation_index(
                    &enumerate_dependence_maps(&p, 2, DEFAULT_BOUND).unwrap().nth(m).unwrap().images()[0],
                    2,
                );
                assert_eq!(f, &goal.delta[q][vi * g.n_states() + st]);
            }
        }
    }

    #[test]
    fn errors() {
        let (g, _, ucw, p) = parts();
        let partial = BindPrefix::new(vec![("alpha".into(), "x".into())]).unwrap();
        assert!(matches!(
            goal_uct(&g, &partial, &ucw, &p.vars()),
            Err(Error::BindingIncomplete(_))
        ));
        let (g, bind, ucw, p) = parts();
        let goal = goal_uct(&g, &bind, &ucw, &p.vars()).unwrap();
        let other = QuantPrefix::parse("[[z]]<<y>>[[x]]").unwrap();
        assert!(matches!(sentence_uct(&goal, &other), Err(Error::PrefixMismatch(_))));
    }
}
