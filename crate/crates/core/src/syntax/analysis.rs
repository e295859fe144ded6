//! Free agents and variables, subformulas, subsentences and alternation.

use std::collections::BTreeSet;

use super::ast::{Formula, Quantifier};
use crate::model::Place;

/// Free agents and variables of `f` over the agent set `agents`.
pub fn free(f: &Formula, agents: &[String]) -> BTreeSet<Place> {
    let all_agents = || agents.iter().cloned().map(Place::Agent);
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => BTreeSet::new(),
        Formula::Not(a) | Formula::PropQuant(_, _, a) => free(a, agents),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let mut s = free(a, agents);
            s.extend(free(b, agents));
            s
        }
        Formula::Next(a) => {
            let mut s = free(a, agents);
            s.extend(all_agents());
            s
        }
        Formula::Until(a, b) | Formula::Release(a, b) => {
            let mut s = free(a, agents);
            s.extend(free(b, agents));
            s.extend(all_agents());
            s
        }
        Formula::Quant(_, x, a) => {
            let mut s = free(a, agents);
            s.remove(&Place::Var(x.clone()));
            s
        }
        Formula::Bind(ag, x, a) => {
            let mut s = free(a, agents);
            if s.remove(&Place::Agent(ag.clone())) {
                s.insert(Place::Var(x.clone()));
            }
            s
        }
    }
}

/// Free variables of `f`.
pub fn free_vars(f: &Formula, agents: &[String]) -> BTreeSet<String> {
    free(f, agents)
        .into_iter()
        .filter_map(|p| match p {
            Place::Var(x) => Some(x),
            Place::Agent(_) => None,
        })
        .collect()
}

/// Free agents of `f`.
pub fn free_agents(f: &Formula, agents: &[String]) -> BTreeSet<String> {
    free(f, agents)
        .into_iter()
        .filter_map(|p| match p {
            Place::Agent(a) => Some(a),
            Place::Var(_) => None,
        })
        .collect()
}

/// No free agent.
pub fn is_agent_closed(f: &Formula, agents: &[String]) -> bool {
    free_agents(f, agents).is_empty()
}

/// No free agent and no free variable.
pub fn is_sentence(f: &Formula, agents: &[String]) -> bool {
    free(f, agents).is_empty()
}

/// Every subformula, including `f` itself.
pub fn sub(f: &Formula) -> BTreeSet<Formula> {
    fn walk(f: &Formula, out: &mut BTreeSet<Formula>) {
        if out.insert(f.clone()) {
            for c in f.children() {
                walk(c, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(f, &mut out);
    out
}

/// Subformulas without free agents or variables.
pub fn snt(f: &Formula, agents: &[String]) -> BTreeSet<Formula> {
    sub(f)
        .into_iter()
        .filter(|g| is_sentence(g, agents))
        .collect()
}

/// Whether `f` has the shape `℘ψ` with `ψ` agent-closed and `℘` a
/// quantification prefix over exactly the free variables of `ψ`.
pub fn is_principal(f: &Formula, agents: &[String]) -> bool {
    let mut vars: Vec<&str> = Vec::new();
    let mut cur = f;
    while let Formula::Quant(_, x, body) = cur {
        vars.push(x);
        cur = body;
        if !is_agent_closed(cur, agents) {
            continue;
        }
        let fv = free_vars(cur, agents);
        let distinct: BTreeSet<&str> = vars.iter().copied().collect();
        if distinct.len() == vars.len()
            && fv.len() == vars.len()
            && fv.iter().all(|v| distinct.contains(v.as_str()))
        {
            return true;
        }
    }
    false
}

/// Principal subsentences.
pub fn psnt(f: &Formula, agents: &[String]) -> BTreeSet<Formula> {
    snt(f, agents)
        .into_iter()
        .filter(|g| is_principal(g, agents))
        .collect()
}

/// Alternation number.
///
/// Quantifier switches are counted along each branch of the syntax tree,
/// with negations flipping the kind of the quantifiers below them.
/// Subsentences other than `f` itself count as atoms, and contribute only
/// their own alternation number. Quantifiers whose variable is not free in
/// their immediate scope are ignored.
pub fn alt(f: &Formula, agents: &[String]) -> usize {
    alternation(
        f,
        &|g| is_sentence(g, agents),
        &|x, body| free_vars(body, agents).contains(x),
    )
}

/// Alternation number of a QPTL formula, where sentences are the formulas
/// without free propositions.
pub fn qptl_alt(f: &Formula) -> usize {
    alternation(f, &|g| free_props(g).is_empty(), &|q, body| {
        free_props(body).contains(q)
    })
}

fn alternation(
    f: &Formula,
    is_sentence: &dyn Fn(&Formula) -> bool,
    binds: &dyn Fn(&str, &Formula) -> bool,
) -> usize {
    fn walk(
        f: &Formula,
        is_sentence: &dyn Fn(&Formula) -> bool,
        binds: &dyn Fn(&str, &Formula) -> bool,
        root: bool,
        negated: bool,
        last: Option<Quantifier>,
        count: usize,
    ) -> usize {
        if !root && is_sentence(f) {
            return count.max(walk(f, is_sentence, binds, true, false, None, 0));
        }
        match f {
            Formula::Not(a) => walk(a, is_sentence, binds, false, !negated, last, count),
            Formula::Quant(q, x, a) | Formula::PropQuant(q, x, a) => {
                if !binds(x, a) {
                    return walk(a, is_sentence, binds, false, negated, last, count);
                }
                let eff = if negated { q.dual() } else { *q };
                let count = match last {
                    Some(l) if l != eff => count + 1,
                    _ => count,
                };
                walk(a, is_sentence, binds, false, negated, Some(eff), count)
            }
            other => other
                .children()
                .into_iter()
                .map(|c| walk(c, is_sentence, binds, false, negated, last, count))
                .max()
                .unwrap_or(count),
        }
    }
    walk(f, is_sentence, binds, true, false, None, 0)
}

/// Atoms not bound by a proposition quantifier.
pub fn free_props(f: &Formula) -> BTreeSet<String> {
    match f {
        Formula::Atom(p) => BTreeSet::from([p.clone()]),
        Formula::PropQuant(_, q, a) => {
            let mut s = free_props(a);
            s.remove(q);
            s
        }
        other => other
            .children()
            .into_iter()
            .flat_map(free_props)
            .collect(),
    }
}

/// Nesting depth of `X`, or `None` when `U` or `R` occurs.
pub fn xdepth(f: &Formula) -> Option<usize> {
    match f {
        Formula::Until(..) | Formula::Release(..) => None,
        Formula::Next(a) => xdepth(a).map(|d| d + 1),
        other => other
            .children()
            .into_iter()
            .map(xdepth)
            .try_fold(0, |acc, d| d.map(|d| acc.max(d))),
    }
}

/// Agents named by some binding.
pub fn bound_agents(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn walk(f: &Formula, out: &mut BTreeSet<String>) {
        if let Formula::Bind(a, _, _) = f {
            out.insert(a.clone());
        }
        for c in f.children() {
            walk(c, out);
        }
    }
    walk(f, &mut out);
    out
}

/// Variables named by some quantifier or binding.
pub fn variables(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn walk(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::Quant(_, x, _) | Formula::Bind(_, x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        }
        for c in f.children() {
            walk(c, out);
        }
    }
    walk(f, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parser::parse_sl;

    fn ag(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn places(agents: &[&str], vars: &[&str]) -> BTreeSet<Place> {
        agents
            .iter()
            .map(|a| Place::Agent(a.to_string()))
            .chain(vars.iter().map(|v| Place::Var(v.to_string())))
            .collect()
    }

    #[test]
    fn free_of_partially_bound_goal() {
        let agents = ag(&["alpha", "beta", "gamma"]);
        let phi = parse_sl("<<x>>(alpha,x)(beta,y)(F p)").unwrap();
        assert_eq!(free(&phi, &agents), places(&["gamma"], &["y"]));
        let alpha_z = Formula::bind("alpha", "z", phi.clone());
        assert_eq!(free(&alpha_z, &agents), places(&["gamma"], &["y"]));
        let gamma_z = Formula::bind("gamma", "z", phi);
        assert_eq!(free(&gamma_z, &agents), places(&[], &["y", "z"]));
        assert!(is_agent_closed(&gamma_z, &agents));
        assert!(free(&Formula::atom("p"), &agents).is_empty());
    }

    #[test]
    fn subformulas_of_a_goal() {
        let phi = parse_sl("<<x>>(alpha,x)(F p)").unwrap();
        let expected: BTreeSet<Formula> = [
            phi.clone(),
            parse_sl("(alpha,x)(F p)").unwrap(),
            parse_sl("F p").unwrap(),
            Formula::atom("p"),
            Formula::True,
        ]
        .into_iter()
        .collect();
        assert_eq!(sub(&phi), expected);
        let p = Formula::atom("p");
        assert_eq!(sub(&p), BTreeSet::from([p.clone()]));
        assert_eq!(snt(&p, &ag(&["alpha"])), BTreeSet::from([p]));
    }

    #[test]
    fn nested_sentence_alternation_and_principal_subsentences() {
        let agents = ag(&["alpha", "beta"]);
        let inner = parse_sl("[[x]]<<y>>(alpha,x)(beta,y)(X p)").unwrap();
        let phi = parse_sl("[[x]]<<y>>(alpha,x)(beta,y)(F [[x]]<<y>>(alpha,x)(beta,y)(X p))")
            .unwrap();
        assert_eq!(alt(&phi, &agents), 1);
        assert_eq!(alt(&inner, &agents), 1);
        assert_eq!(psnt(&phi, &agents), BTreeSet::from([phi.clone(), inner]));
        let phi2 =
            parse_sl("[[x]]<<y>>(alpha,x)(beta,y)(F [[x]](alpha,x)(X p))").unwrap();
        assert_eq!(alt(&phi2, &agents), 2);
        assert_eq!(alt(&Formula::atom("p"), &agents), 0);
    }

    #[test]
    fn negation_flips_and_vacuous_quantifiers_are_skipped() {
        let agents = ag(&["a"]);
        let f = parse_sl("<<x>>(a,x) X !<<y>>(a,y) X p").unwrap();
        // The inner subformula is a sentence, so no switch is counted.
        assert_eq!(alt(&f, &agents), 0);
        let agents = ag(&["a", "b"]);
        let g = parse_sl("<<x>>(a,x) X !<<y>>(b,y) X p").unwrap();
        assert_eq!(alt(&g, &agents), 1);
        let k = parse_sl("<<x>>(a,x)!<<y>>(b,y) X p").unwrap();
        assert_eq!(alt(&k, &agents), 1);
        let vac = parse_sl("<<x>>[[z]]<<y>>(a,x)(b,y) X p").unwrap();
        assert_eq!(alt(&vac, &agents), 0);
    }

    #[test]
    fn xdepth_counts_nested_next() {
        assert_eq!(xdepth(&parse_sl("X X p").unwrap()), Some(2));
        assert_eq!(xdepth(&parse_sl("F p").unwrap()), None);
        assert_eq!(xdepth(&parse_sl("p & X (q | X X r)").unwrap()), Some(3));
        assert_eq!(xdepth(&Formula::atom("p")), Some(0));
    }
}
