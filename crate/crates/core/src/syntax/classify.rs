//! Fragment membership: NG-SL, BG-SL, OG-SL and the counting fragments.
//!
//! Grammar matching runs on a normalized copy of the formula obtained by
//! prenex-style rewriting: negations are pushed to the atoms, repeated
//! quantified variables are renamed apart, quantifiers are pulled over
//! conjunctions, disjunctions and bindings (never over temporal operators or
//! out of subsentences), and bindings are distributed over Boolean
//! connectives. The counts are reported on the formula as given, except the
//! variable count, which uses the renamed copy.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::analysis::{
    alt, bound_agents, free_vars, is_agent_closed, is_sentence, variables,
};
use super::ast::{Formula, Quantifier};
use super::normal::to_pnf;

/// Fragment membership data for one formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentReport {
    pub is_sentence: bool,
    pub is_agent_closed: bool,
    pub ngsl: bool,
    pub bgsl: bool,
    pub ogsl: bool,
    /// Every variable is bound to at most one agent.
    pub fvs: bool,
    pub n_agents_used: usize,
    pub n_vars_used: usize,
    pub alternation: usize,
}

/// Classifies `f` over the agent set `agents`.
pub fn classify(f: &Formula, agents: &[String]) -> FragmentReport {
    let n = prenex_normalize(f, agents);
    let ok = !contains_prop_quant(f);
    FragmentReport {
        is_sentence: is_sentence(f, agents),
        is_agent_closed: is_agent_closed(f, agents),
        ngsl: ok && ng(&n, agents),
        bgsl: ok && bg_phi(&n, agents),
        ogsl: ok && og(&n, agents),
        fvs: fvs(&n),
        n_agents_used: bound_agents(f).len(),
        n_vars_used: variables(&n).len(),
        alternation: alt(f, agents),
    }
}

/// Whether `f` itself, without normalization, follows the NG-SL grammar:
/// every quantifier block covers exactly the free variables of an
/// agent-closed body and every binding block binds every agent.
pub fn is_ngsl(f: &Formula, agents: &[String]) -> bool {
    !contains_prop_quant(f) && ng(f, agents)
}

fn contains_prop_quant(f: &Formula) -> bool {
    matches!(f, Formula::PropQuant(..)) || f.children().into_iter().any(contains_prop_quant)
}

/// The normalized copy used for grammar matching.
pub fn prenex_normalize(f: &Formula, agents: &[String]) -> Formula {
    let renamed = rename_apart(&to_pnf(f), agents);
    unit(&renamed, agents)
}

fn unit(f: &Formula, agents: &[String]) -> Formula {
    let (prefix, matrix) = pull(f, agents, true);
    let body = push(&matrix, &[], agents);
    prefix
        .into_iter()
        .rev()
        .fold(body, |acc, (q, x)| Formula::Quant(q, x, Box::new(acc)))
}

/// Renames quantified variables so that no two quantifiers share a name and
/// no quantifier reuses the name of a free variable.
pub fn rename_apart(f: &Formula, agents: &[String]) -> Formula {
    let mut used: BTreeSet<String> = variables(f);
    used.extend(agents.iter().cloned());
    let mut taken: BTreeSet<String> = free_vars(f, agents);
    let env = BTreeMap::new();
    rename(f, &env, &mut used, &mut taken)
}

fn rename(
    f: &Formula,
    env: &BTreeMap<String, String>,
    used: &mut BTreeSet<String>,
    taken: &mut BTreeSet<String>,
) -> Formula {
    match f {
        Formula::Quant(q, x, a) => {
            let name = if taken.contains(x) {
                let mut i = 1;
                loop {
                    let cand = format!("{x}_{i}");
                    if !used.contains(&cand) {
                        break cand;
                    }
                    i += 1;
                }
            } else {
                x.clone()
            };
            used.insert(name.clone());
            taken.insert(name.clone());
            let mut env2 = env.clone();
            env2.insert(x.clone(), name.clone());
            Formula::Quant(*q, name, Box::new(rename(a, &env2, used, taken)))
        }
        Formula::Bind(ag, x, a) => {
            let x2 = env.get(x).cloned().unwrap_or_else(|| x.clone());
            Formula::Bind(ag.clone(), x2, Box::new(rename(a, env, used, taken)))
        }
        other => map_children(other, |c| rename(c, env, used, taken)),
    }
}

fn map_children(f: &Formula, mut g: impl FnMut(&Formula) -> Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(g(a)),
        Formula::And(a, b) => {
            let a = g(a);
            Formula::and(a, g(b))
        }
        Formula::Or(a, b) => {
            let a = g(a);
            Formula::or(a, g(b))
        }
        Formula::Next(a) => Formula::next(g(a)),
        Formula::Until(a, b) => {
            let a = g(a);
            Formula::until(a, g(b))
        }
        Formula::Release(a, b) => {
            let a = g(a);
            Formula::release(a, g(b))
        }
        Formula::Quant(q, x, a) => Formula::Quant(*q, x.clone(), Box::new(g(a))),
        Formula::Bind(ag, x, a) => Formula::Bind(ag.clone(), x.clone(), Box::new(g(a))),
        Formula::PropQuant(q, x, a) => Formula::PropQuant(*q, x.clone(), Box::new(g(a))),
    }
}

type Prefix = Vec<(Quantifier, String)>;

fn pull(f: &Formula, agents: &[String], root: bool) -> (Prefix, Formula) {
    if !root && is_sentence(f, agents) && !f.children().is_empty() {
        return (Vec::new(), unit(f, agents));
    }
    match f {
        Formula::Quant(q, x, a) => {
            let (mut p, m) = pull(a, agents, false);
            p.insert(0, (*q, x.clone()));
            (p, m)
        }
        Formula::Bind(ag, x, a) => {
            let (p, m) = pull(a, agents, false);
            (p, Formula::bind(ag, x, m))
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (pa, ma) = pull(a, agents, false);
            let (pb, mb) = pull(b, agents, false);
            let m = if matches!(f, Formula::And(..)) {
                Formula::and(ma, mb)
            } else {
                Formula::or(ma, mb)
            };
            (merge(&pa, &pb), m)
        }
        Formula::True | Formula::False | Formula::Atom(_) | Formula::Not(_) => {
            (Vec::new(), f.clone())
        }
        other => (Vec::new(), map_children(other, |c| unit(c, agents))),
    }
}

fn merge(a: &Prefix, b: &Prefix) -> Prefix {
    let greedy = |start: Quantifier| {
        let (mut i, mut j, mut t) = (0, 0, start);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            while i < a.len() && a[i].0 == t {
                out.push(a[i].clone());
                i += 1;
            }
            while j < b.len() && b[j].0 == t {
                out.push(b[j].clone());
                j += 1;
            }
            t = t.dual();
        }
        out
    };
    let switches = |p: &Prefix| p.windows(2).filter(|w| w[0].0 != w[1].0).count();
    let e = greedy(Quantifier::Exists);
    let u = greedy(Quantifier::Forall);
    if switches(&u) < switches(&e) {
        u
    } else {
        e
    }
}

fn push(f: &Formula, env: &[(String, String)], agents: &[String]) -> Formula {
    match f {
        Formula::Bind(a, x, body) => {
            let mut env2 = env.to_vec();
            env2.push((a.clone(), x.clone()));
            push(body, &env2, agents)
        }
        Formula::And(a, b) => Formula::and(push(a, env, agents), push(b, env, agents)),
        Formula::Or(a, b) => Formula::or(push(a, env, agents), push(b, env, agents)),
        Formula::Not(a) if !matches!(**a, Formula::Atom(_)) => Formula::not(push(a, env, agents)),
        Formula::True | Formula::False | Formula::Atom(_) | Formula::Not(_) => f.clone(),
        other if is_sentence(other, agents) => other.clone(),
        other => collapse(env)
            .into_iter()
            .rev()
            .fold(other.clone(), |acc, (a, x)| Formula::Bind(a, x, Box::new(acc))),
    }
}

/// Keeps the innermost binding of each agent, in order of those bindings.
fn collapse(env: &[(String, String)]) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (a, x) in env {
        out.retain(|(b, _)| b != a);
        out.push((a.clone(), x.clone()));
    }
    out
}

fn take_quants(f: &Formula) -> (Vec<(Quantifier, &str)>, &Formula) {
    let mut out = Vec::new();
    let mut cur = f;
    while let Formula::Quant(q, x, a) = cur {
        out.push((*q, x.as_str()));
        cur = a;
    }
    (out, cur)
}

fn take_binds(f: &Formula) -> (Vec<(&str, &str)>, &Formula) {
    let mut out = Vec::new();
    let mut cur = f;
    while let Formula::Bind(a, x, b) = cur {
        out.push((a.as_str(), x.as_str()));
        cur = b;
    }
    (out, cur)
}

fn prefix_covers(q: &[(Quantifier, &str)], body: &Formula, agents: &[String]) -> bool {
    if !is_agent_closed(body, agents) {
        return false;
    }
    let fv = free_vars(body, agents);
    let vars: BTreeSet<&str> = q.iter().map(|(_, x)| *x).collect();
    vars.len() == q.len() && fv.len() == vars.len() && fv.iter().all(|v| vars.contains(v.as_str()))
}

fn complete_binding(b: &[(&str, &str)], agents: &[String]) -> bool {
    let names: BTreeSet<&str> = b.iter().map(|(a, _)| *a).collect();
    names.len() == b.len() && b.len() == agents.len() && agents.iter().all(|a| names.contains(a.as_str()))
}

fn ng(f: &Formula, agents: &[String]) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => true,
        Formula::Quant(..) => {
            let (q, body) = take_quants(f);
            prefix_covers(&q, body, agents) && ng(body, agents)
        }
        Formula::Bind(..) => {
            let (b, body) = take_binds(f);
            complete_binding(&b, agents) && ng(body, agents)
        }
        Formula::PropQuant(..) => false,
        other => other.children().into_iter().all(|c| ng(c, agents)),
    }
}

fn bg_phi(f: &Formula, agents: &[String]) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => true,
        Formula::Quant(..) => {
            let (q, body) = take_quants(f);
            prefix_covers(&q, body, agents) && bg_psi(body, agents)
        }
        Formula::Bind(..) | Formula::PropQuant(..) => false,
        other => other.children().into_iter().all(|c| bg_phi(c, agents)),
    }
}

fn bg_psi(f: &Formula, agents: &[String]) -> bool {
    match f {
        Formula::Bind(..) => {
            let (b, body) = take_binds(f);
            complete_binding(&b, agents) && bg_phi(body, agents)
        }
        Formula::Not(a) => bg_psi(a, agents),
        Formula::And(a, b) | Formula::Or(a, b) => bg_psi(a, agents) && bg_psi(b, agents),
        other => is_sentence(other, agents) && bg_phi(other, agents),
    }
}

fn og(f: &Formula, agents: &[String]) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => true,
        Formula::Quant(..) => {
            let (q, body) = take_quants(f);
            let (b, inner) = take_binds(body);
            prefix_covers(&q, body, agents) && complete_binding(&b, agents) && og(inner, agents)
        }
        Formula::Bind(..) | Formula::PropQuant(..) => false,
        other => other.children().into_iter().all(|c| og(c, agents)),
    }
}

fn fvs(f: &Formula) -> bool {
    fn walk(f: &Formula, seen: &mut BTreeMap<String, BTreeSet<String>>) {
        if let Formula::Bind(a, x, _) = f {
            seen.entry(x.clone()).or_default().insert(a.clone());
        }
        for c in f.children() {
            walk(c, seen);
        }
    }
    let mut seen = BTreeMap::new();
    walk(f, &mut seen);
    seen.values().all(|agents| agents.len() <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parser::parse_sl;

    fn ag(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn shared_variable_sentence() {
        let f = parse_sl("<<x>>[[y]]<<z>>((alpha,x)(beta,y)(X p) & (alpha,y)(beta,z)(X q))")
            .unwrap();
        let r = classify(&f, &ag(&["alpha", "beta"]));
        assert!(r.bgsl && r.ngsl && !r.ogsl);
        assert!(!r.fvs);
        assert_eq!((r.n_agents_used, r.n_vars_used, r.alternation), (2, 3, 2));
    }

    #[test]
    fn one_goal_sentence_of_three_agents() {
        let f = parse_sl("[[x]]<<y>>[[z]](alpha,x)(beta,y)(gamma,z) X p").unwrap();
        let r = classify(&f, &ag(&["alpha", "beta", "gamma"]));
        assert!(r.ogsl && r.bgsl && r.ngsl && r.fvs && r.is_sentence);
        assert_eq!((r.n_agents_used, r.alternation), (3, 2));
    }

    #[test]
    fn nash_equilibrium_after_rewriting() {
        let f = parse_sl(
            "<<x1>>(A,x1)<<x2>>(B,x2)(((<<y>>(A,y) F wA) -> F wA) & ((<<y>>(B,y) F wB) -> F wB))",
        )
        .unwrap();
        let r = classify(&f, &ag(&["A", "B"]));
        assert!(r.bgsl && r.ngsl && !r.ogsl && r.fvs);
        assert_eq!((r.n_vars_used, r.alternation), (4, 1));
    }

    #[test]
    fn merging_prefers_fewer_switches() {
        let a = vec![(Quantifier::Forall, "x".to_string()), (Quantifier::Exists, "y".to_string())];
        let b = vec![(Quantifier::Forall, "z".to_string())];
        let m = merge(&a, &b);
        assert_eq!(m.windows(2).filter(|w| w[0].0 != w[1].0).count(), 1);
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn renaming_keeps_scopes() {
        let agents = ag(&["a"]);
        let f = parse_sl("<<x>>(a,x) X p & <<x>>(a,x) X q").unwrap();
        let r = rename_apart(&f, &agents);
        assert_eq!(r, parse_sl("<<x>>(a,x) X p & <<x_1>>(a,x_1) X q").unwrap());
    }
}
