//! Abstract syntax of Strategy Logic, with LTL and QPTL as sublanguages.

use std::fmt;

/// Strategy or proposition quantifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

/// Formula tree.
///
/// `F φ` is represented as `true U φ` and `G φ` as `false R φ`; implication
/// and equivalence are expanded into negation, conjunction and disjunction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    /// Strategy quantifier `<<x>>` or `[[x]]`.
    Quant(Quantifier, String, Box<Formula>),
    /// Binding `(agent, variable)`.
    Bind(String, String, Box<Formula>),
    /// Proposition quantifier of QPTL, `exists q.` or `forall q.`.
    PropQuant(Quantifier, String, Box<Formula>),
}

/// Shorthand constructors.
impl Formula {
    pub fn atom(p: &str) -> Formula {
        Formula::Atom(p.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::until(Formula::True, f)
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::release(Formula::False, f)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// `a <-> b` as `(a & b) | (!a & !b)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::or(
            Formula::and(a.clone(), b.clone()),
            Formula::and(Formula::not(a), Formula::not(b)),
        )
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, x.to_string(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, x.to_string(), Box::new(f))
    }

    pub fn bind(a: &str, x: &str, f: Formula) -> Formula {
        Formula::Bind(a.to_string(), x.to_string(), Box::new(f))
    }

    pub fn prop_exists(q: &str, f: Formula) -> Formula {
        Formula::PropQuant(Quantifier::Exists, q.to_string(), Box::new(f))
    }

    pub fn prop_forall(q: &str, f: Formula) -> Formula {
        Formula::PropQuant(Quantifier::Forall, q.to_string(), Box::new(f))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(a)
            | Formula::Next(a)
            | Formula::Quant(_, _, a)
            | Formula::Bind(_, _, a)
            | Formula::PropQuant(_, _, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => vec![a, b],
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Whether the formula uses no quantifier and no binding.
    pub fn is_ltl(&self) -> bool {
        match self {
            Formula::Quant(..) | Formula::Bind(..) | Formula::PropQuant(..) => false,
            other => other.children().into_iter().all(Formula::is_ltl),
        }
    }

    /// Whether some `U` or `R` occurs.
    pub fn has_until_or_release(&self) -> bool {
        match self {
            Formula::Until(..) | Formula::Release(..) => true,
            other => other.children().into_iter().any(Formula::has_until_or_release),
        }
    }

    /// Atom names, sorted and deduplicated.
    pub fn atoms(&self) -> Vec<String> {
        fn walk(f: &Formula, out: &mut Vec<String>) {
            if let Formula::Atom(p) = f {
                out.push(p.clone());
            }
            for c in f.children() {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Exists => write!(f, "exists"),
            Quantifier::Forall => write!(f, "forall"),
        }
    }
}

/// ASCII rendering accepted back by the parser; binary operators are always
/// parenthesised.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Not(a) => write!(f, "!{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Next(a) => write!(f, "X {a}"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::Release(a, b) => write!(f, "({a} R {b})"),
            Formula::Quant(Quantifier::Exists, x, a) => write!(f, "<<{x}>>{a}"),
            Formula::Quant(Quantifier::Forall, x, a) => write!(f, "[[{x}]]{a}"),
            Formula::Bind(ag, x, a) => write!(f, "({ag},{x}){a}"),
            Formula::PropQuant(q, p, a) => write!(f, "({q} {p}. {a})"),
        }
    }
}
