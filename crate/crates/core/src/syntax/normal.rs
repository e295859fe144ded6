//! Positive and existential normal forms.

use super::ast::{Formula, Quantifier};

/// Negation normal form: negations only in front of atoms.
pub fn to_pnf(f: &Formula) -> Formula {
    pnf(f, false)
}

fn pnf(f: &Formula, neg: bool) -> Formula {
    let b = |g: &Formula, n: bool| Box::new(pnf(g, n));
    match f {
        Formula::True => {
            if neg {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::False => {
            if neg {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Atom(_) => {
            if neg {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::Not(a) => pnf(a, !neg),
        Formula::And(x, y) => {
            if neg {
                Formula::Or(b(x, true), b(y, true))
            } else {
                Formula::And(b(x, false), b(y, false))
            }
        }
        Formula::Or(x, y) => {
            if neg {
                Formula::And(b(x, true), b(y, true))
            } else {
                Formula::Or(b(x, false), b(y, false))
            }
        }
        Formula::Next(a) => Formula::Next(b(a, neg)),
        Formula::Until(x, y) => {
            if neg {
                Formula::Release(b(x, true), b(y, true))
            } else {
                Formula::Until(b(x, false), b(y, false))
            }
        }
        Formula::Release(x, y) => {
            if neg {
                Formula::Until(b(x, true), b(y, true))
            } else {
                Formula::Release(b(x, false), b(y, false))
            }
        }
        Formula::Quant(q, x, a) => {
            let q = if neg { q.dual() } else { *q };
            Formula::Quant(q, x.clone(), b(a, neg))
        }
        Formula::PropQuant(q, x, a) => {
            let q = if neg { q.dual() } else { *q };
            Formula::PropQuant(q, x.clone(), b(a, neg))
        }
        Formula::Bind(ag, x, a) => Formula::Bind(ag.clone(), x.clone(), b(a, neg)),
    }
}

/// Existential normal form: universal quantifiers rewritten as `!<<x>>!`,
/// with double negations removed.
pub fn to_enf(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => negate(to_enf(a)),
        Formula::And(a, b) => Formula::and(to_enf(a), to_enf(b)),
        Formula::Or(a, b) => Formula::or(to_enf(a), to_enf(b)),
        Formula::Next(a) => Formula::next(to_enf(a)),
        Formula::Until(a, b) => Formula::until(to_enf(a), to_enf(b)),
        Formula::Release(a, b) => Formula::release(to_enf(a), to_enf(b)),
        Formula::Quant(Quantifier::Exists, x, a) => Formula::exists(x, to_enf(a)),
        Formula::Quant(Quantifier::Forall, x, a) => {
            negate(Formula::exists(x, negate(to_enf(a))))
        }
        Formula::Bind(ag, x, a) => Formula::bind(ag, x, to_enf(a)),
        Formula::PropQuant(Quantifier::Exists, q, a) => Formula::prop_exists(q, to_enf(a)),
        Formula::PropQuant(Quantifier::Forall, q, a) => {
            negate(Formula::prop_exists(q, negate(to_enf(a))))
        }
    }
}

/// `!f`, cancelling a leading negation.
pub fn negate(f: Formula) -> Formula {
    match f {
        Formula::Not(a) => *a,
        other => Formula::not(other),
    }
}

/// Whether negations occur only in front of atoms.
pub fn is_pnf(f: &Formula) -> bool {
    match f {
        Formula::Not(a) => matches!(**a, Formula::Atom(_)),
        other => other.children().into_iter().all(is_pnf),
    }
}

/// Whether no universal quantifier occurs.
pub fn is_enf(f: &Formula) -> bool {
    match f {
        Formula::Quant(Quantifier::Forall, ..) | Formula::PropQuant(Quantifier::Forall, ..) => {
            false
        }
        other => other.children().into_iter().all(is_enf),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parser::parse_sl;

    #[test]
    fn listed_equivalences() {
        assert_eq!(
            to_pnf(&parse_sl("!(p U q)").unwrap()),
            parse_sl("(!p) R (!q)").unwrap()
        );
        assert_eq!(
            to_pnf(&parse_sl("!<<x>>(a,x) X p").unwrap()),
            parse_sl("[[x]](a,x) X !p").unwrap()
        );
        assert_eq!(to_pnf(&parse_sl("!X p").unwrap()), parse_sl("X !p").unwrap());
        let p = Formula::atom("p");
        assert_eq!(to_pnf(&p), p);
    }

    #[test]
    fn enf_removes_universals() {
        let f = parse_sl("[[x]]<<y>>[[z]](a,x)(b,y)(c,z) X p").unwrap();
        let e = to_enf(&f);
        assert!(is_enf(&e));
        assert_eq!(
            e,
            parse_sl("!<<x>>!<<y>>!<<z>>!(a,x)(b,y)(c,z) X p").unwrap()
        );
        assert!(is_pnf(&to_pnf(&e)));
    }
}
