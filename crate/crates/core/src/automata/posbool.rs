//! Positive Boolean combinations of moves.

use std::collections::BTreeSet;
use std::fmt;

/// A negation-free formula over moves `(direction, state)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosBool {
    True,
    False,
    Move(usize, usize),
    And(Vec<PosBool>),
    Or(Vec<PosBool>),
}

impl PosBool {
    /// Conjunction with `true` dropped, `false` absorbing and nested
    /// conjunctions flattened.
    pub fn and(parts: impl IntoIterator<Item = PosBool>) -> PosBool {
        let mut out = Vec::new();
        for p in parts {
            match p {
                PosBool::True => {}
                PosBool::False => return PosBool::False,
                PosBool::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.dedup();
        match out.len() {
            0 => PosBool::True,
            1 => out.pop().expect("one element"),
            _ => PosBool::And(out),
        }
    }

    /// Disjunction with `false` dropped, `true` absorbing and nested
    /// disjunctions flattened.
    pub fn or(parts: impl IntoIterator<Item = PosBool>) -> PosBool {
        let mut out = Vec::new();
        for p in parts {
            match p {
                PosBool::False => {}
                PosBool::True => return PosBool::True,
                PosBool::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.dedup();
        match out.len() {
            0 => PosBool::False,
            1 => out.pop().expect("one element"),
            _ => PosBool::Or(out),
        }
    }

    /// Swaps conjunction with disjunction and `true` with `false`.
    pub fn dual(&self) -> PosBool {
        match self {
            PosBool::True => PosBool::False,
            PosBool::False => PosBool::True,
            PosBool::Move(d, q) => PosBool::Move(*d, *q),
            PosBool::And(v) => PosBool::Or(v.iter().map(PosBool::dual).collect()),
            PosBool::Or(v) => PosBool::And(v.iter().map(PosBool::dual).collect()),
        }
    }

    /// Rewrites every move through `f`.
    pub fn map_moves(&self, f: &mut impl FnMut(usize, usize) -> PosBool) -> PosBool {
        match self {
            PosBool::True => PosBool::True,
            PosBool::False => PosBool::False,
            PosBool::Move(d, q) => f(*d, *q),
            PosBool::And(v) => PosBool::and(v.iter().map(|p| p.map_moves(f)).collect::<Vec<_>>()),
            PosBool::Or(v) => PosBool::or(v.iter().map(|p| p.map_moves(f)).collect::<Vec<_>>()),
        }
    }

    /// Every move occurring in the formula.
    pub fn moves(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        self.collect_moves(&mut out);
        out
    }

    fn collect_moves(&self, out: &mut BTreeSet<(usize, usize)>) {
        match self {
            PosBool::Move(d, q) => {
                out.insert((*d, *q));
            }
            PosBool::And(v) | PosBool::Or(v) => v.iter().for_each(|p| p.collect_moves(out)),
            _ => {}
        }
    }

    /// Truth under the set of moves `s`.
    pub fn eval(&self, s: &impl Fn(usize, usize) -> bool) -> bool {
        match self {
            PosBool::True => true,
            PosBool::False => false,
            PosBool::Move(d, q) => s(*d, *q),
            PosBool::And(v) => v.iter().all(|p| p.eval(s)),
            PosBool::Or(v) => v.iter().any(|p| p.eval(s)),
        }
    }

    /// The moves of a conjunction of moves, `None` for `false`, or an error
    /// marker when a disjunction occurs.
    pub fn conjunction(&self) -> Result<Option<Vec<(usize, usize)>>, ()> {
        match self {
            PosBool::True => Ok(Some(Vec::new())),
            PosBool::False => Ok(None),
            PosBool::Move(d, q) => Ok(Some(vec![(*d, *q)])),
            PosBool::And(v) => {
                let mut out = Vec::new();
                for p in v {
                    match p.conjunction()? {
                        Some(m) => out.extend(m),
                        None => return Ok(None),
                    }
                }
                Ok(Some(out))
            }
            PosBool::Or(_) => Err(()),
        }
    }

    /// Directions constrained by the formula, or `None` when some
    /// conjunction constrains one direction twice.
    pub fn separated_directions(&self) -> Option<BTreeSet<usize>> {
        match self {
            PosBool::True | PosBool::False => Some(BTreeSet::new()),
            PosBool::Move(d, _) => Some([*d].into_iter().collect()),
            PosBool::And(v) => {
                let mut acc = BTreeSet::new();
                for p in v {
                    let ds = p.separated_directions()?;
                    if !acc.is_disjoint(&ds) {
                        return None;
                    }
                    acc.extend(ds);
                }
                Some(acc)
            }
            PosBool::Or(v) => {
                let mut acc = BTreeSet::new();
                for p in v {
                    acc.extend(p.separated_directions()?);
                }
                Some(acc)
            }
        }
    }
}

impl fmt::Display for PosBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosBool::True => write!(f, "true"),
            PosBool::False => write!(f, "false"),
            PosBool::Move(d, q) => write!(f, "({d},{q})"),
            PosBool::And(v) | PosBool::Or(v) => {
                let op = if matches!(self, PosBool::And(_)) { " & " } else { " | " };
                write!(f, "(")?;
                for (i, p) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smart_constructors_absorb_constants() {
        let m = PosBool::Move(0, 1);
        assert_eq!(PosBool::and([PosBool::True, m.clone()]), m);
        assert_eq!(PosBool::and([PosBool::False, m.clone()]), PosBool::False);
        assert_eq!(PosBool::or([PosBool::True, m.clone()]), PosBool::True);
        assert_eq!(PosBool::or(Vec::<PosBool>::new()), PosBool::False);
    }

    #[test]
    fn dual_is_an_involution() {
        let f = PosBool::Or(vec![
            PosBool::And(vec![PosBool::Move(0, 1), PosBool::Move(1, 2)]),
            PosBool::False,
        ]);
        assert_eq!(f.dual().dual(), f);
        assert!(f.eval(&|d, _| d <= 1));
        assert!(f.dual().eval(&|d, _| d == 0));
        assert!(!f.dual().eval(&|_, _| false));
    }

    #[test]
    fn direction_separation() {
        let ok = PosBool::And(vec![
            PosBool::Or(vec![PosBool::Move(0, 1), PosBool::Move(0, 2)]),
            PosBool::Move(1, 1),
        ]);
        assert!(ok.separated_directions().is_some());
        let bad = PosBool::And(vec![PosBool::Move(0, 1), PosBool::Move(0, 2)]);
        assert!(bad.separated_directions().is_none());
    }
}
