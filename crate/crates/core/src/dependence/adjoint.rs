//! Adjoints of dependence maps over function spaces `T → D`.
//!
//! A function `g: T → D` is encoded as the number `Σ g(t)·|D|^(|T|-1-t)`, so
//! the first index is the most significant digit.

use std::sync::Arc;

use super::map::{DependenceMap, Layout};
use crate::error::{Error, Result};
use crate::syntax::QuantPrefix;

/// One dependence map over `D` per index `t ∈ T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdjointMap {
    pub maps: Vec<DependenceMap>,
}

/// Evidence that a map over `T → D` has no adjoint: two argument tuples for
/// the existential `variable` that agree at index `t` while the outputs at
/// `t` differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotElementary {
    pub variable: String,
    pub t: usize,
    pub g1: Vec<usize>,
    pub g2: Vec<usize>,
}

/// Digit `t` of the encoded function `g`.
pub fn digit(g: usize, t: usize, n_t: usize, d: usize) -> usize {
    (g / d.pow((n_t - 1 - t) as u32)) % d
}

fn decode(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

fn encode(values: &[usize], base: usize) -> usize {
    values.iter().fold(0, |acc, &v| acc * base + v)
}

/// The adjoint of `theta`, whose domain must be `T → D` with `|T| = n_t`
/// and `|D| = d`.
pub fn adjoint(
    theta: &DependenceMap,
    n_t: usize,
    d: usize,
) -> Result<std::result::Result<AdjointMap, NotElementary>> {
    let big = d.checked_pow(n_t as u32).unwrap_or(0);
    if n_t == 0 || theta.domain() != big {
        return Err(Error::DomainMismatch(format!(
            "map domain {} is not {d}^{n_t}",
            theta.domain()
        )));
    }
    let layout = Arc::new(Layout::new(theta.prefix(), d)?);
    let src = theta.layout();
    let mut tables: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n_t];
    for (t, slot) in tables.iter_mut().enumerate() {
        for (k, &size) in layout.table_sizes.iter().enumerate() {
            let m = layout.deps[k].len();
            let mut table = Vec::with_capacity(size);
            for ui in 0..size {
                let u = decode(ui, d, m);
                let g: Vec<usize> = u.iter().map(|&v| v * d.pow((n_t - 1 - t) as u32)).collect();
                let out = theta.tables()[k][encode(&g, big)];
                table.push(digit(out, t, n_t, d));
            }
            slot.push(table);
        }
    }
    for (k, &size) in src.table_sizes.iter().enumerate() {
        let m = src.deps[k].len();
        for gi in 0..size {
            let g = decode(gi, big, m);
            let out = theta.tables()[k][gi];
            for (t, table) in tables.iter().enumerate() {
                let u: Vec<usize> = g.iter().map(|&v| digit(v, t, n_t, d)).collect();
                if table[k][encode(&u, d)] != digit(out, t, n_t, d) {
                    let g1 = u.iter().map(|&v| v * d.pow((n_t - 1 - t) as u32)).collect();
                    let var = &theta.prefix().entries()[src.existentials[k]].1;
                    return Ok(Err(NotElementary {
                        variable: var.clone(),
                        t,
                        g1,
                        g2: g,
                    }));
                }
            }
        }
    }
    let maps = tables
        .into_iter()
        .map(|t| DependenceMap::with_layout(layout.clone(), t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ok(AdjointMap { maps }))
}

/// The map over `T → D` whose adjoint is `adj`.
pub fn from_adjoint(adj: &AdjointMap) -> Result<DependenceMap> {
    let first = adj
        .maps
        .first()
        .ok_or_else(|| Error::Validation("empty index set".into()))?;
    let prefix: &QuantPrefix = first.prefix();
    let d = first.domain();
    let n_t = adj.maps.len();
    if adj.maps.iter().any(|m| m.prefix() != prefix || m.domain() != d) {
        return Err(Error::DomainMismatch("adjoint components disagree".into()));
    }
    let big = d.pow(n_t as u32);
    let layout = Arc::new(Layout::new(prefix, big)?);
    let mut tables = Vec::new();
    for (k, &size) in layout.table_sizes.iter().enumerate() {
        let m = layout.deps[k].len();
        let mut table = Vec::with_capacity(size);
        for gi in 0..size {
            let g = decode(gi, big, m);
            let out = (0..n_t).fold(0, |acc, t| {
                let u: Vec<usize> = g.iter().map(|&v| digit(v, t, n_t, d)).collect();
                acc * d + adj.maps[t].tables()[k][encode(&u, d)]
            });
            table.push(out);
        }
        tables.push(table);
    }
    DependenceMap::with_layout(layout, tables)
}
