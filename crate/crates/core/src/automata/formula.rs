//! Alternating automata for arbitrary formulas and the sentence automaton
//! dispatch.

use std::collections::BTreeSet;

use super::nondet::{nondeterminize_cobuchi, project_direction};
use super::posbool::PosBool;
use super::sentence::{goal_uct, sentence_uct};
use super::tree::{checked, valuation_digits, valuation_index, valuation_names, TreeAutomaton};
use super::word::ltl_to_ucw;
use crate::error::{Error, Result};
use crate::model::{Cgs, Place, StateId};
use crate::syntax::{free, is_sentence, split, to_enf, Formula, Quantifier};

/// The alternating parity tree automaton of `f`, reading the encoding of
/// assignments to the free places of `f` (in their sorted order) paired
/// with states.
///
/// Existential quantification needs a nondeterministic body. A body whose
/// conjunctions never send two copies in one direction is used as it is; a
/// universal body of index at most 2 is nondeterminized first; any other
/// body is reported as unsupported.
pub fn formula_apt(g: &Cgs, f: &Formula) -> Result<TreeAutomaton> {
    let agents = g.agents().to_vec();
    let a = build(g, &agents, f)?;
    checked(a)
}

fn places_of(f: &Formula, agents: &[String]) -> Vec<Place> {
    free(f, agents).into_iter().collect()
}

/// For each valuation of `parent`, the index of the valuation of `child`
/// obtained through `source`, which names the parent position feeding each
/// child place.
fn letter_map(parent: &[Place], source: &[usize], n_actions: usize) -> Vec<usize> {
    let count = n_actions.pow(parent.len() as u32);
    (0..count)
        .map(|vi| {
            let v = valuation_digits(vi, parent.len(), n_actions);
            let child: Vec<usize> = source.iter().map(|&k| v[k]).collect();
            valuation_index(&child, n_actions)
        })
        .collect()
}

fn positions(parent: &[Place], child: &[Place]) -> Vec<usize> {
    child
        .iter()
        .map(|p| parent.iter().position(|q| q == p).expect("child places are parent places"))
        .collect()
}

/// The rows of `child` re-read over parent letters, with states shifted by
/// `offset`.
fn lift(child: &TreeAutomaton, map: &[usize], offset: usize, n_st: usize) -> Vec<Vec<PosBool>> {
    child
        .delta
        .iter()
        .map(|row| {
            let mut out = Vec::with_capacity(map.len() * n_st);
            for &cv in map {
                for s in 0..n_st {
                    out.push(row[cv * n_st + s].map_moves(&mut |d, q| PosBool::Move(d, q + offset)));
                }
            }
            out
        })
        .collect()
}

fn shifted(set: &BTreeSet<usize>, offset: usize) -> BTreeSet<usize> {
    set.iter().map(|q| q + offset).collect()
}

/// Level `i` (from 0) of a chain, reading past its end as its last level.
fn level(a: &TreeAutomaton, i: usize) -> &BTreeSet<usize> {
    &a.acceptance[i.min(a.index() - 1)]
}

fn base(g: &Cgs, places: Vec<Place>, states: Vec<String>, delta: Vec<Vec<PosBool>>, acceptance: Vec<BTreeSet<usize>>) -> TreeAutomaton {
    TreeAutomaton {
        sigma: valuation_names(&places, g.n_actions()),
        product: true,
        directions: g.states().to_vec(),
        states,
        initial: 0,
        delta,
        acceptance,
        places,
        n_actions: g.n_actions(),
    }
}

/// Direction reached from `s` when the agents play the values of their
/// places in the valuation `vi` of `places`.
fn successor(g: &Cgs, places: &[Place], vi: usize, s: StateId) -> StateId {
    let v = valuation_digits(vi, places.len(), g.n_actions());
    let decision: Vec<usize> = g
        .agents()
        .iter()
        .map(|a| {
            let k = places
                .iter()
                .position(|p| p == &Place::Agent(a.clone()))
                .expect("temporal operators make every agent free");
            v[k]
        })
        .collect();
    g.step(s, &decision)
}

fn build(g: &Cgs, agents: &[String], f: &Formula) -> Result<TreeAutomaton> {
    let n_st = g.n_states();
    let n_ac = g.n_actions();
    let places = places_of(f, agents);
    let n_val = n_ac.pow(places.len() as u32);
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => {
            let row: Vec<PosBool> = (0..n_st)
                .map(|s| {
                    let holds = match f {
                        Formula::True => true,
                        Formula::False => false,
                        Formula::Atom(p) => {
                            let id = g.atom_id(p).ok_or_else(|| Error::UndeclaredName {
                                kind: "atom",
                                name: p.clone(),
                            })?;
                            g.label(s).contains(&id)
                        }
                        _ => unreachable!(),
                    };
                    Ok(if holds { PosBool::True } else { PosBool::False })
                })
                .collect::<Result<_>>()?;
            Ok(base(g, places, vec![f.to_string()], vec![row], vec![[0].into_iter().collect()]))
        }
        Formula::Not(a) => Ok(build(g, agents, a)?.dual()),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) | Formula::Release(a, b) => {
            let (a1, a2) = (build(g, agents, a)?, build(g, agents, b)?);
            let (n1, n2) = (a1.states.len(), a2.states.len());
            let (o1, o2) = (1, 1 + n1);
            let m1 = letter_map(&places, &positions(&places, &a1.places), n_ac);
            let m2 = letter_map(&places, &positions(&places, &a2.places), n_ac);
            let rows1 = lift(&a1, &m1, o1, n_st);
            let rows2 = lift(&a2, &m2, o2, n_st);
            let mut head = Vec::with_capacity(n_val * n_st);
            for vi in 0..n_val {
                for s in 0..n_st {
                    let l = vi * n_st + s;
                    let (d1, d2) = (rows1[a1.initial][l].clone(), rows2[a2.initial][l].clone());
                    head.push(match f {
                        Formula::And(..) => PosBool::and([d1, d2]),
                        Formula::Or(..) => PosBool::or([d1, d2]),
                        Formula::Until(..) => {
                            let again = PosBool::Move(successor(g, &places, vi, s), 0);
                            PosBool::or([d2, PosBool::and([d1, again])])
                        }
                        _ => {
                            let again = PosBool::Move(successor(g, &places, vi, s), 0);
                            PosBool::and([d2, PosBool::or([d1, again])])
                        }
                    });
                }
            }
            let mut delta = vec![head];
            delta.extend(rows1);
            delta.extend(rows2);
            let total = 1 + n1 + n2;
            let k = match f {
                Formula::Release(..) => a1.index().max(a2.index()).max(2),
                _ => a1.index().max(a2.index()),
            };
            let acceptance = (0..k)
                .map(|i| {
                    if i == k - 1 {
                        return (0..total).collect();
                    }
                    let mut set = shifted(level(&a1, i), o1);
                    set.extend(shifted(level(&a2, i), o2));
                    let with_head = match f {
                        Formula::Until(..) => true,
                        Formula::Release(..) => i > 0,
                        _ => false,
                    };
                    if with_head {
                        set.insert(0);
                    }
                    set
                })
                .collect();
            let mut states = vec![f.to_string()];
            states.extend(a1.states.iter().map(|s| format!("1.{s}")));
            states.extend(a2.states.iter().map(|s| format!("2.{s}")));
            Ok(base(g, places, states, delta, acceptance))
        }
        Formula::Next(a) => {
            let inner = build(g, agents, a)?;
            let map = letter_map(&places, &positions(&places, &inner.places), n_ac);
            let rows = lift(&inner, &map, 1, n_st);
            let head = (0..n_val)
                .flat_map(|vi| (0..n_st).map(move |s| (vi, s)))
                .map(|(vi, s)| PosBool::Move(successor(g, &places, vi, s), inner.initial + 1))
                .collect();
            let mut delta = vec![head];
            delta.extend(rows);
            let total = inner.states.len() + 1;
            let mut acceptance: Vec<BTreeSet<usize>> = inner.acceptance.iter().map(|s| shifted(s, 1)).collect();
            *acceptance.last_mut().expect("non-empty chain") = (0..total).collect();
            let mut states = vec![f.to_string()];
            states.extend(inner.states.iter().map(|s| format!("1.{s}")));
            Ok(base(g, places, states, delta, acceptance))
        }
        Formula::Bind(ag, x, a) => {
            let inner = build(g, agents, a)?;
            let source: Vec<usize> = inner
                .places
                .iter()
                .map(|p| {
                    let feed = if p == &Place::Agent(ag.clone()) { Place::Var(x.clone()) } else { p.clone() };
                    places.iter().position(|q| q == &feed).expect("binding feeds the agent")
                })
                .collect();
            let map = letter_map(&places, &source, n_ac);
            let delta = lift(&inner, &map, 0, n_st);
            let mut out = base(g, places, inner.states.clone(), delta, inner.acceptance.clone());
            out.initial = inner.initial;
            Ok(out)
        }
        Formula::Quant(Quantifier::Exists, x, a) => {
            let inner = build(g, agents, a)?;
            let var = Place::Var(x.clone());
            let Some(xpos) = inner.places.iter().position(|p| p == &var) else {
                let mut out = inner;
                out.sigma = valuation_names(&places, n_ac);
                return Ok(out);
            };
            let nondet = if inner.is_nondeterministic() {
                inner
            } else if inner.is_universal() && inner.index() <= 2 {
                nondeterminize_cobuchi(&inner)?
            } else {
                return Err(Error::Unsupported(format!(
                    "quantification over `{x}` in `{f}` needs nondeterminization of an automaton of index {}",
                    inner.index()
                )));
            };
            let delta = nondet
                .delta
                .iter()
                .map(|row| {
                    let mut out = Vec::with_capacity(n_val * n_st);
                    for vi in 0..n_val {
                        let v = valuation_digits(vi, places.len(), n_ac);
                        for s in 0..n_st {
                            let options = (0..n_ac).map(|c| {
                                let mut w = v.clone();
                                w.insert(xpos, c);
                                row[valuation_index(&w, n_ac) * n_st + s].clone()
                            });
                            out.push(PosBool::or(options.collect::<Vec<_>>()));
                        }
                    }
                    out
                })
                .collect();
            let mut out = base(g, places, nondet.states.clone(), delta, nondet.acceptance.clone());
            out.initial = nondet.initial;
            Ok(out)
        }
        Formula::Quant(Quantifier::Forall, x, a) => build(
            g,
            agents,
            &Formula::not(Formula::exists(x, Formula::not((**a).clone()))),
        ),
        Formula::PropQuant(..) => Err(Error::Dialect(format!("proposition quantifier in `{f}`"))),
    }
}

/// The nondeterministic automaton over the alphabet of the sentence's
/// prefix that is non-empty iff `g, s ⊨ phi`.
pub fn sentence_npt(g: &Cgs, s: StateId, phi: &Formula) -> Result<TreeAutomaton> {
    project_direction(&sentence_nondet(g, phi)?, s)
}

/// The nondeterministic automaton for `phi` before projection onto a
/// starting state.
///
/// Principal sentences `℘♭ψ` with a complete binding and an LTL matrix go
/// through the goal and sentence automata and nondeterminization. Other
/// sentences use [`formula_apt`] on the existential normal form when that
/// construction is supported.
pub fn sentence_nondet(g: &Cgs, phi: &Formula) -> Result<TreeAutomaton> {
    if !is_sentence(phi, g.agents()) {
        let names: Vec<String> = free(phi, g.agents()).iter().map(|p| format!("{p:?}")).collect();
        return Err(Error::NotASentence(names.join(", ")));
    }
    if let Ok((prefix, bind, matrix)) = split(phi) {
        if matrix.is_ltl() && bind.is_complete(g.agents()) {
            let ucw = ltl_to_ucw(&matrix)?;
            let goal = goal_uct(g, &bind, &ucw, &prefix.vars())?;
            let uct = sentence_uct(&goal, &prefix)?;
            return nondeterminize_cobuchi(&uct);
        }
    }
    let apt = formula_apt(g, &to_enf(phi))?;
    if apt.is_nondeterministic() {
        Ok(apt)
    } else if apt.is_universal() && apt.index() <= 2 {
        nondeterminize_cobuchi(&apt)
    } else {
        Err(Error::Unsupported(format!(
            "`{phi}` yields an alternating automaton of index {}",
            apt.index()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixture;
    use crate::syntax::parse_sl;

    #[test]
    fn atomic_automaton() {
        let g = fixture("prs").unwrap();
        let a = formula_apt(&g, &parse_sl("wA").unwrap()).unwrap();
        assert_eq!(a.states.len(), 1);
        let sa = g.state_id("sA").unwrap();
        assert_eq!(a.delta[0][sa], PosBool::True);
    }

    #[test]
    fn until_and_release_acceptance() {
        let g = fixture("g1").unwrap();
        let u = formula_apt(&g, &parse_sl("(alpha,x)(beta,x)(gamma,x)(p U p)").unwrap()).unwrap();
        assert!(u.acceptance[0].contains(&0));
        let r = formula_apt(&g, &parse_sl("(alpha,x)(beta,x)(gamma,x)(p R p)").unwrap()).unwrap();
        assert!(!r.acceptance[0].contains(&0));
        assert!(r.acceptance[1].contains(&0));
    }

    #[test]
    fn alternating_prefix_ends_nondeterministic() {
        let g = fixture("g1").unwrap();
        let f = parse_sl("<<x>>[[y]]<<z>>(alpha,x)(beta,y)(gamma,z) F p").unwrap();
        let a = formula_apt(&g, &to_enf(&f)).unwrap();
        assert!(a.places.is_empty());
        assert!(a.is_nondeterministic());
    }
}
