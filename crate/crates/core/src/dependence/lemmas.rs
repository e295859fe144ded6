//! Constructive incidence and dualization of dependence maps.

use std::collections::HashSet;
use std::sync::Arc;

use super::map::{DependenceMap, Layout, Valuation};
use crate::error::{Error, Result};
use crate::syntax::{QuantPrefix, Quantifier};

/// The valuation `ν` on which `theta` (for `℘`) and `theta_bar` (for the dual
/// of `℘`) meet: `θ(ν↾univ(℘)) = ν = θ̄(ν↾univ(dual ℘))`.
///
/// Alternation blocks are processed from the outside in: an existential block
/// of `℘` is read off `θ` and a universal block off `θ̄`, each on the values
/// already fixed by the blocks before it.
pub fn incidence(theta: &DependenceMap, theta_bar: &DependenceMap) -> Result<Valuation> {
    let p = theta.prefix();
    if theta_bar.prefix() != &p.dual() || theta.domain() != theta_bar.domain() {
        return Err(Error::PrefixMismatch(
            "the second map must range over the dual prefix and the same domain".into(),
        ));
    }
    let mut nu = vec![0; p.len()];
    let (mut ke, mut ku) = (0, 0);
    for (q, _) in p.entries() {
        match q {
            Quantifier::Exists => {
                let l = theta.layout();
                let pos = l.existentials[ke];
                nu[pos] = theta.tables()[ke][l.entry_index(ke, &nu)];
                ke += 1;
            }
            Quantifier::Forall => {
                let l = theta_bar.layout();
                let pos = l.existentials[ku];
                nu[pos] = theta_bar.tables()[ku][l.entry_index(ku, &nu)];
                ku += 1;
            }
        }
    }
    Ok(nu)
}

/// Outcome of [`dualize_dependence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dualization {
    /// A map for the dual prefix whose every image lies in the target set.
    Dual(DependenceMap),
    /// A map for the prefix whose every image avoids the target set.
    Counterexample(DependenceMap),
}

enum Tree {
    Leaf,
    Choose(usize, Box<Tree>),
    Branch(Vec<Tree>),
}

/// Either a dual map landing in `target` everywhere, or a map for `prefix`
/// missing `target` everywhere.
///
/// Built by induction on the prefix: at an existential of `prefix` the
/// construction looks for a value from which no dual map exists, and at a
/// universal for a value from which one does.
pub fn dualize_dependence(
    prefix: &QuantPrefix,
    domain: usize,
    target: &HashSet<Valuation>,
    bound: u64,
) -> Result<Dualization> {
    let n = prefix.len();
    let leaves = (domain as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if leaves > bound as u128 {
        return Err(Error::DomainTooLarge {
            count: leaves.to_string(),
            bound,
        });
    }
    let quants: Vec<Quantifier> = prefix.entries().iter().map(|(q, _)| *q).collect();
    let mut nu = vec![0; n];
    let (ok, tree) = solve(&quants, domain, target, 0, &mut nu);
    if ok {
        let dual = prefix.dual();
        let map = tree_to_map(&dual, domain, &tree)?;
        Ok(Dualization::Dual(map))
    } else {
        let map = tree_to_map(prefix, domain, &tree)?;
        Ok(Dualization::Counterexample(map))
    }
}

/// Returns whether the dual side wins from position `i`, with the strategy
/// tree of the winner.
fn solve(
    quants: &[Quantifier],
    domain: usize,
    target: &HashSet<Valuation>,
    i: usize,
    nu: &mut Vec<usize>,
) -> (bool, Tree) {
    if i == quants.len() {
        return (target.contains(nu.as_slice()), Tree::Leaf);
    }
    let mut subtrees = Vec::with_capacity(domain);
    for e in 0..domain {
        nu[i] = e;
        let (ok, t) = solve(quants, domain, target, i + 1, nu);
        let decisive = match quants[i] {
            Quantifier::Exists => !ok,
            Quantifier::Forall => ok,
        };
        if decisive {
            nu[i] = 0;
            return (ok, Tree::Choose(e, Box::new(t)));
        }
        subtrees.push(t);
    }
    nu[i] = 0;
    let ok = quants[i] == Quantifier::Exists;
    (ok, Tree::Branch(subtrees))
}

/// Reads Skolem tables for `prefix` off a strategy tree in which the
/// existentials of `prefix` choose and its universals branch.
fn tree_to_map(prefix: &QuantPrefix, domain: usize, tree: &Tree) -> Result<DependenceMap> {
    let layout = Arc::new(Layout::new(prefix, domain)?);
    let mut tables: Vec<Vec<usize>> = layout.table_sizes.iter().map(|&s| vec![0; s]).collect();
    for ui in 0..layout.n_universal_valuations() {
        let mut nu = layout.universal_valuation(ui);
        let mut node = tree;
        let mut k = 0;
        for i in 0..prefix.len() {
            node = match node {
                Tree::Choose(e, next) => {
                    nu[i] = *e;
                    let idx = layout.entry_index(k, &nu);
                    tables[k][idx] = *e;
                    k += 1;
                    next
                }
                Tree::Branch(children) => &children[nu[i]],
                Tree::Leaf => unreachable!("tree depth equals prefix length"),
            };
        }
    }
    DependenceMap::with_layout(layout, tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dependence::map::{enumerate_dependence_maps, DEFAULT_BOUND};

    fn qp(s: &str) -> QuantPrefix {
        QuantPrefix::parse(s).unwrap()
    }

    #[test]
    fn worked_incidence() {
        let p = qp("[[x]]<<y>>[[z]]");
        let theta: Vec<_> = enumerate_dependence_maps(&p, 2, DEFAULT_BOUND).unwrap().collect();
        let bar: Vec<_> = enumerate_dependence_maps(&p.dual(), 2, DEFAULT_BOUND)
            .unwrap()
            .collect();
        assert_eq!(incidence(&theta[1], &bar[6]).unwrap(), vec![1, 1, 0]);
    }

    #[test]
    fn all_existential_incidence_is_the_constant() {
        let p = qp("<<x>><<y>>");
        let theta = DependenceMap::new(&p, 3, vec![vec![2], vec![1]]).unwrap();
        let bar = DependenceMap::new(&p.dual(), 3, vec![]).unwrap();
        assert_eq!(incidence(&theta, &bar).unwrap(), vec![2, 1]);
    }

    #[test]
    fn worked_dualization() {
        let p = qp("[[x]]<<y>>[[z]]");
        let target: HashSet<Valuation> = [vec![0, 0, 1], vec![0, 1, 0]].into_iter().collect();
        match dualize_dependence(&p, 2, &target, DEFAULT_BOUND).unwrap() {
            Dualization::Dual(m) => {
                let bar: Vec<_> = enumerate_dependence_maps(&p.dual(), 2, DEFAULT_BOUND)
                    .unwrap()
                    .collect();
                assert_eq!(m, bar[2]);
                assert!(m.images().iter().all(|nu| target.contains(nu)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn extreme_targets() {
        let p = qp("[[x]]<<y>>[[z]]");
        let all: HashSet<Valuation> = (0..8)
            .map(|i| vec![(i >> 2) & 1, (i >> 1) & 1, i & 1])
            .collect();
        assert!(matches!(
            dualize_dependence(&p, 2, &all, DEFAULT_BOUND).unwrap(),
            Dualization::Dual(_)
        ));
        match dualize_dependence(&p, 2, &HashSet::new(), DEFAULT_BOUND).unwrap() {
            Dualization::Counterexample(m) => assert_eq!(m.prefix(), &p),
            other => panic!("unexpected {other:?}"),
        }
    }
}
