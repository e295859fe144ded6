//! Quantification and binding prefixes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::ast::{Formula, Quantifier};
use crate::error::{Error, Result};

/// A word of quantifiers in which every variable occurs once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantPrefix(Vec<(Quantifier, String)>);

impl QuantPrefix {
    /// Checks that no variable repeats.
    pub fn new(entries: Vec<(Quantifier, String)>) -> Result<QuantPrefix> {
        let mut seen = BTreeSet::new();
        for (_, x) in &entries {
            if !seen.insert(x.as_str()) {
                return Err(Error::Validation(format!(
                    "variable `{x}` occurs twice in a quantification prefix"
                )));
            }
        }
        Ok(QuantPrefix(entries))
    }

    /// Parses a bare prefix such as `[[x]]<<y>>[[z]]`.
    pub fn parse(text: &str) -> Result<QuantPrefix> {
        let f = super::parser::parse_sl(&format!("{text} true"))?;
        let (q, b, m) = split(&f)?;
        if !b.is_empty() || m != Formula::True {
            return Err(Error::Validation(format!("`{text}` is not a quantification prefix")));
        }
        Ok(q)
    }

    pub fn entries(&self) -> &[(Quantifier, String)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Variables in prefix order.
    pub fn vars(&self) -> Vec<String> {
        self.0.iter().map(|(_, x)| x.clone()).collect()
    }

    /// Position of `x`.
    pub fn index_of(&self, x: &str) -> Option<usize> {
        self.0.iter().position(|(_, y)| y == x)
    }

    /// Existentially quantified variables, in prefix order.
    pub fn existentials(&self) -> Vec<String> {
        self.of_kind(Quantifier::Exists)
    }

    /// Universally quantified variables, in prefix order.
    pub fn universals(&self) -> Vec<String> {
        self.of_kind(Quantifier::Forall)
    }

    fn of_kind(&self, q: Quantifier) -> Vec<String> {
        self.0
            .iter()
            .filter(|(k, _)| *k == q)
            .map(|(_, x)| x.clone())
            .collect()
    }

    /// Universal variables preceding the existential `x`; empty when `x` is
    /// universal or absent.
    pub fn dep(&self, x: &str) -> Vec<String> {
        match self.index_of(x) {
            Some(i) if self.0[i].0 == Quantifier::Exists => self.0[..i]
                .iter()
                .filter(|(q, _)| *q == Quantifier::Forall)
                .map(|(_, y)| y.clone())
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Every quantifier replaced by its dual.
    pub fn dual(&self) -> QuantPrefix {
        QuantPrefix(self.0.iter().map(|(q, x)| (q.dual(), x.clone())).collect())
    }

    /// Number of quantifier switches.
    pub fn alternation(&self) -> usize {
        self.0.windows(2).filter(|w| w[0].0 != w[1].0).count()
    }

    /// Maximal runs of equal quantifiers.
    pub fn blocks(&self) -> Vec<(Quantifier, Vec<String>)> {
        let mut out: Vec<(Quantifier, Vec<String>)> = Vec::new();
        for (q, x) in &self.0 {
            match out.last_mut() {
                Some((k, xs)) if k == q => xs.push(x.clone()),
                _ => out.push((*q, vec![x.clone()])),
            }
        }
        out
    }

    /// Whether the prefix quantifies exactly `vars`.
    pub fn covers(&self, vars: &BTreeSet<String>) -> bool {
        self.0.len() == vars.len() && self.0.iter().all(|(_, x)| vars.contains(x))
    }

    /// Wraps `body` in the prefix.
    pub fn apply(&self, body: Formula) -> Formula {
        self.0
            .iter()
            .rev()
            .fold(body, |acc, (q, x)| Formula::Quant(*q, x.clone(), Box::new(acc)))
    }
}

impl fmt::Display for QuantPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, x) in &self.0 {
            match q {
                Quantifier::Exists => write!(f, "<<{x}>>")?,
                Quantifier::Forall => write!(f, "[[{x}]]")?,
            }
        }
        Ok(())
    }
}

/// A word of bindings in which every agent occurs once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BindPrefix(Vec<(String, String)>);

impl BindPrefix {
    /// Checks that no agent repeats.
    pub fn new(entries: Vec<(String, String)>) -> Result<BindPrefix> {
        let mut seen = BTreeSet::new();
        for (a, _) in &entries {
            if !seen.insert(a.as_str()) {
                return Err(Error::Validation(format!(
                    "agent `{a}` occurs twice in a binding prefix"
                )));
            }
        }
        Ok(BindPrefix(entries))
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The map sending each agent to its variable.
    pub fn binding_fn(&self) -> BTreeMap<String, String> {
        self.0.iter().cloned().collect()
    }

    /// Variables used, deduplicated.
    pub fn vars(&self) -> BTreeSet<String> {
        self.0.iter().map(|(_, x)| x.clone()).collect()
    }

    /// Whether every agent of `agents` is bound.
    pub fn is_complete(&self, agents: &[String]) -> bool {
        self.0.len() == agents.len() && agents.iter().all(|a| self.0.iter().any(|(b, _)| b == a))
    }

    /// For each agent of `agents`, in order, the variable it is bound to.
    pub fn variables_for(&self, agents: &[String]) -> Result<Vec<String>> {
        let map = self.binding_fn();
        agents
            .iter()
            .map(|a| {
                map.get(a).cloned().ok_or_else(|| {
                    Error::BindingIncomplete(format!("agent `{a}` is not bound"))
                })
            })
            .collect()
    }

    /// Wraps `body` in the bindings.
    pub fn apply(&self, body: Formula) -> Formula {
        self.0
            .iter()
            .rev()
            .fold(body, |acc, (a, x)| Formula::Bind(a.clone(), x.clone(), Box::new(acc)))
    }
}

impl fmt::Display for BindPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, x) in &self.0 {
            write!(f, "({a},{x})")?;
        }
        Ok(())
    }
}

/// Splits `f` into its leading quantifiers, its leading bindings and the
/// remaining matrix.
pub fn split(f: &Formula) -> Result<(QuantPrefix, BindPrefix, Formula)> {
    let mut quants = Vec::new();
    let mut cur = f;
    while let Formula::Quant(q, x, body) = cur {
        quants.push((*q, x.clone()));
        cur = body;
    }
    let mut binds = Vec::new();
    while let Formula::Bind(a, x, body) = cur {
        binds.push((a.clone(), x.clone()));
        cur = body;
    }
    if quants.is_empty() && binds.is_empty() {
        return Err(Error::NotPrenex(format!("`{f}` has no leading prefix")));
    }
    let q = QuantPrefix::new(quants).map_err(|e| Error::NotPrenex(e.to_string()))?;
    let b = BindPrefix::new(binds).map_err(|e| Error::NotPrenex(e.to_string()))?;
    Ok((q, b, cur.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dependence_sets() {
        let p = QuantPrefix::parse("[[x]]<<y>><<z>>[[w]]<<v>>").unwrap();
        assert_eq!(p.dep("v"), vec!["x", "w"]);
        assert_eq!(p.dep("y"), vec!["x"]);
        assert!(p.dep("x").is_empty());
        assert!(p.dep("w").is_empty());
        assert_eq!(p.existentials(), vec!["y", "z", "v"]);
        assert_eq!(p.universals(), vec!["x", "w"]);
    }

    #[test]
    fn dualization() {
        let p = QuantPrefix::parse("[[x]]<<y>><<z>>[[w]]<<v>>").unwrap();
        assert_eq!(p.dual().to_string(), "<<x>>[[y]][[z]]<<w>>[[v]]");
        assert_eq!(p.dual().dual(), p);
        assert_eq!(p.dual().existentials(), p.universals());
        assert_eq!(p.alternation(), 3);
    }

    #[test]
    fn split_separates_prefixes_from_the_matrix() {
        let f = super::super::parser::parse_sl("[[x]]<<y>>(a,x)(b,y) X p").unwrap();
        let (q, b, m) = split(&f).unwrap();
        assert_eq!(q.to_string(), "[[x]]<<y>>");
        assert_eq!(b.to_string(), "(a,x)(b,y)");
        assert_eq!(m.to_string(), "X p");
        assert_eq!(
            b.binding_fn().get("b").map(String::as_str),
            Some("y")
        );
        assert!(matches!(split(&Formula::atom("p")), Err(Error::NotPrenex(_))));
        let dup = super::super::parser::parse_sl("<<x>><<x>>(a,x) X p").unwrap();
        assert!(matches!(split(&dup), Err(Error::NotPrenex(_))));
    }
}
