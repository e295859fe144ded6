//! Line-oriented text format for concurrent game structures.
//!
//! ```text
//! agents: A B
//! actions: P R S
//! atoms: wA wB
//! states: si sA sB
//! init: si
//! label: sA = wA ; sB = wB ; si =
//! trans: si (P,R) -> sA
//! trans: si (*,*) -> si      # catch-all, lowest precedence
//! trans: sA * -> sA
//! ```
//!
//! `#` starts a comment. A decision pattern lists one action or `*` per agent
//! in declaration order; a bare `*` stands for every decision. Rows whose
//! pattern is entirely wildcards are applied first, in file order; all other
//! rows are applied afterwards in file order, so later rows override earlier
//! ones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::cgs::{ActionId, Cgs, StateId};
use crate::error::{Error, Result};

struct Row {
    line: usize,
    col: usize,
    state: String,
    pattern: Option<Vec<Option<String>>>,
    target: String,
}

impl Row {
    fn is_catch_all(&self) -> bool {
        match &self.pattern {
            None => true,
            Some(p) => p.iter().all(Option::is_none),
        }
    }
}

/// Parses a structure from its text form.
pub fn load_cgs(text: &str) -> Result<Cgs> {
    let mut agents: Option<Vec<String>> = None;
    let mut actions: Option<Vec<String>> = None;
    let mut atoms: Vec<String> = Vec::new();
    let mut states: Option<Vec<String>> = None;
    let mut init: Option<(usize, usize, String)> = None;
    let mut labels: Vec<(usize, usize, String, Vec<String>)> = Vec::new();
    let mut rows: Vec<Row> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let content = content.trim();
        let (key, rest) = content
            .split_once(':')
            .ok_or_else(|| Error::parse(line, indent + 1, "expected `key: value`"))?;
        let rest_col = indent + key.len() + 2;
        let words = || rest.split_whitespace().map(str::to_string).collect::<Vec<_>>();
        match key.trim() {
            "agents" => agents = Some(words()),
            "actions" => actions = Some(words()),
            "atoms" => atoms.extend(words()),
            "states" => states = Some(words()),
            "init" => {
                let w = words();
                if w.len() != 1 {
                    return Err(Error::parse(line, rest_col, "expected one initial state"));
                }
                init = Some((line, rest_col, w[0].clone()));
            }
            "label" => {
                for entry in rest.split(';') {
                    if entry.trim().is_empty() {
                        continue;
                    }
                    let (state, props) = entry
                        .split_once('=')
                        .ok_or_else(|| Error::parse(line, rest_col, "expected `state = atoms`"))?;
                    let state = state.trim();
                    if state.is_empty() {
                        return Err(Error::parse(line, rest_col, "missing state in label"));
                    }
                    labels.push((
                        line,
                        rest_col,
                        state.to_string(),
                        props.split_whitespace().map(str::to_string).collect(),
                    ));
                }
            }
            "trans" => rows.push(parse_row(line, rest_col, rest)?),
            other => {
                return Err(Error::parse(
                    line,
                    indent + 1,
                    format!("unknown key `{other}`"),
                ))
            }
        }
    }

    let agents = agents.ok_or_else(|| Error::Validation("missing `agents`".into()))?;
    let actions = actions.ok_or_else(|| Error::Validation("missing `actions`".into()))?;
    let states = states.ok_or_else(|| Error::Validation("missing `states`".into()))?;
    let (iline, icol, init) = init.ok_or_else(|| Error::Validation("missing `init`".into()))?;
    let find = |names: &[String], kind: &'static str, name: &str, line: usize, col: usize| {
        names.iter().position(|n| n == name).ok_or_else(|| {
            Error::parse(line, col, format!("undeclared {kind} `{name}`"))
        })
    };
    let initial = find(&states, "state", &init, iline, icol)?;

    let mut label_sets = vec![BTreeSet::new(); states.len()];
    for (line, col, state, props) in &labels {
        let s = find(&states, "state", state, *line, *col)?;
        for p in props {
            label_sets[s].insert(find(&atoms, "atom", p, *line, *col)?);
        }
    }

    let n_act = actions.len();
    let n_dec = (0..agents.len()).fold(1usize, |acc, _| acc.saturating_mul(n_act));
    let mut table: Vec<Option<StateId>> = vec![None; states.len() * n_dec];
    let (catch_all, specific): (Vec<&Row>, Vec<&Row>) = rows.iter().partition(|r| r.is_catch_all());
    for row in catch_all.into_iter().chain(specific) {
        let s = find(&states, "state", &row.state, row.line, row.col)?;
        let t = find(&states, "state", &row.target, row.line, row.col)?;
        let pattern: Vec<Option<ActionId>> = match &row.pattern {
            None => vec![None; agents.len()],
            Some(p) => {
                if p.len() != agents.len() {
                    return Err(Error::parse(
                        row.line,
                        row.col,
                        format!("decision lists {} actions for {} agents", p.len(), agents.len()),
                    ));
                }
                p.iter()
                    .map(|a| match a {
                        None => Ok(None),
                        Some(a) => find(&actions, "action", a, row.line, row.col).map(Some),
                    })
                    .collect::<Result<_>>()?
            }
        };
        for d in 0..n_dec {
            if matches_pattern(d, &pattern, n_act) {
                table[s * n_dec + d] = Some(t);
            }
        }
    }
    let trans: Option<Vec<StateId>> = table.into_iter().collect();
    let trans = trans.ok_or_else(|| Error::Validation("trans not total".into()))?;
    Cgs::new(atoms, agents, actions, states, initial, label_sets, trans)
}

fn matches_pattern(mut d: usize, pattern: &[Option<ActionId>], n_act: usize) -> bool {
    for slot in pattern.iter().rev() {
        let a = d % n_act;
        d /= n_act;
        if let Some(p) = slot {
            if *p != a {
                return false;
            }
        }
    }
    true
}

fn parse_row(line: usize, col: usize, rest: &str) -> Result<Row> {
    let (lhs, target) = rest
        .split_once("->")
        .ok_or_else(|| Error::parse(line, col, "expected `state decision -> state`"))?;
    let target = target.trim();
    if target.is_empty() || target.contains(char::is_whitespace) {
        return Err(Error::parse(line, col, "expected one target state"));
    }
    let lhs = lhs.trim();
    let (state, decision) = lhs
        .split_once(char::is_whitespace)
        .ok_or_else(|| Error::parse(line, col, "expected a decision pattern"))?;
    let decision = decision.trim();
    let pattern = if decision == "*" {
        None
    } else {
        let inner = decision
            .strip_prefix('(')
            .and_then(|d| d.strip_suffix(')'))
            .ok_or_else(|| Error::parse(line, col, "decision must be `*` or `(a,b,...)`"))?;
        Some(
            inner
                .split(',')
                .map(|a| match a.trim() {
                    "" => Err(Error::parse(line, col, "empty action in decision")),
                    "*" => Ok(None),
                    a => Ok(Some(a.to_string())),
                })
                .collect::<Result<Vec<_>>>()?,
        )
    };
    Ok(Row {
        line,
        col,
        state: state.to_string(),
        pattern,
        target: target.to_string(),
    })
}

/// Canonical text form.
///
/// Every state gets a catch-all row to its most frequent successor followed by
/// one explicit row per remaining decision, so `load_cgs(store_cgs(g)) == g`.
pub fn store_cgs(g: &Cgs) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "agents: {}", g.agents().join(" "));
    let _ = writeln!(out, "actions: {}", g.actions().join(" "));
    let _ = writeln!(out, "atoms: {}", g.atoms().join(" "));
    let _ = writeln!(out, "states: {}", g.states().join(" "));
    let _ = writeln!(out, "init: {}", g.states()[g.initial()]);
    let labels: Vec<String> = (0..g.n_states())
        .map(|s| {
            let props: Vec<&str> = g.label(s).iter().map(|&p| g.atoms()[p].as_str()).collect();
            if props.is_empty() {
                format!("{} =", g.states()[s])
            } else {
                format!("{} = {}", g.states()[s], props.join(" "))
            }
        })
        .collect();
    let _ = writeln!(out, "label: {}", labels.join(" ; "));
    for s in 0..g.n_states() {
        let mut freq: BTreeMap<StateId, usize> = BTreeMap::new();
        for d in 0..g.n_decisions() {
            *freq.entry(g.step_index(s, d)).or_default() += 1;
        }
        let default = freq
            .iter()
            .max_by_key(|(t, n)| (**n, std::cmp::Reverse(**t)))
            .map(|(t, _)| *t)
            .unwrap_or(s);
        let _ = writeln!(out, "trans: {} * -> {}", g.states()[s], g.states()[default]);
        for d in 0..g.n_decisions() {
            let t = g.step_index(s, d);
            if t != default {
                let names: Vec<&str> = g
                    .decision_at(d)
                    .iter()
                    .map(|&a| g.actions()[a].as_str())
                    .collect();
                let _ = writeln!(
                    out,
                    "trans: {} ({}) -> {}",
                    g.states()[s],
                    names.join(","),
                    g.states()[t]
                );
            }
        }
    }
    out
}
