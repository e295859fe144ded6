//! Satisfiability of quantified propositional temporal logic through the
//! one-agent reduction structure.

use super::{model_check, CheckRequest};
use crate::error::{Error, Result};
use crate::model::fixture;
use crate::semantics::{EvalMode, Verdict};
use crate::syntax::{free_props, Formula, Quantifier};

const AGENT: &str = "alpha";
const ATOM: &str = "p";
const OUTER: &str = "x";

/// The strategy variable standing for proposition `q`.
pub fn rdc_variable(q: &str) -> String {
    format!("x_{q}")
}

/// Translates a QPTL formula into Strategy Logic over the reduction
/// structure: `q` becomes `(alpha, x_q) X p`, proposition quantifiers
/// become strategy quantifiers over `x_q`, and every other operator is
/// kept.
pub fn qptl_translate(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(q) => Formula::Bind(
            AGENT.into(),
            rdc_variable(q),
            Box::new(Formula::Next(Box::new(Formula::atom(ATOM)))),
        ),
        Formula::Not(a) => Formula::not(qptl_translate(a)?),
        Formula::And(a, b) => Formula::and(qptl_translate(a)?, qptl_translate(b)?),
        Formula::Or(a, b) => Formula::or(qptl_translate(a)?, qptl_translate(b)?),
        Formula::Next(a) => Formula::Next(Box::new(qptl_translate(a)?)),
        Formula::Until(a, b) => {
            Formula::Until(Box::new(qptl_translate(a)?), Box::new(qptl_translate(b)?))
        }
        Formula::Release(a, b) => {
            Formula::Release(Box::new(qptl_translate(a)?), Box::new(qptl_translate(b)?))
        }
        Formula::PropQuant(q, p, a) => {
            Formula::Quant(*q, rdc_variable(p), Box::new(qptl_translate(a)?))
        }
        Formula::Quant(..) | Formula::Bind(..) => {
            return Err(Error::Dialect(format!("strategy construct in QPTL formula `{f}`")))
        }
    })
}

/// The sentence `<<x>>(alpha, x) trn(phi)` checked on the reduction
/// structure.
pub fn qptl_sentence(phi: &Formula) -> Result<Formula> {
    let props = free_props(phi);
    if !props.is_empty() {
        let names: Vec<String> = props.into_iter().collect();
        return Err(Error::NotASentence(names.join(", ")));
    }
    Ok(Formula::Quant(
        Quantifier::Exists,
        OUTER.into(),
        Box::new(Formula::Bind(
            AGENT.into(),
            OUTER.into(),
            Box::new(qptl_translate(phi)?),
        )),
    ))
}

/// Whether the QPTL sentence `phi` is satisfiable, decided by model
/// checking its translation on the reduction structure. `mode` is forced on
/// the enumerative engine when given.
pub fn qptl_sat(phi: &Formula, mode: Option<EvalMode>) -> Result<Verdict> {
    let mut req = CheckRequest::new(fixture("rdc")?, qptl_sentence(phi)?);
    req.mode = mode;
    Ok(model_check(&req)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alt, parse_formula, parse_sl, qptl_alt, Dialect};

    fn q(text: &str) -> Formula {
        parse_formula(text, Dialect::Qptl).unwrap()
    }

    #[test]
    fn atoms_and_quantifiers() {
        assert_eq!(qptl_translate(&q("q")).unwrap(), parse_sl("(alpha,x_q) X p").unwrap());
        assert_eq!(
            qptl_translate(&q("exists q. q")).unwrap(),
            parse_sl("<<x_q>>(alpha,x_q) X p").unwrap()
        );
        assert_eq!(
            qptl_translate(&q("forall q. X !q")).unwrap(),
            parse_sl("[[x_q]] X !((alpha,x_q) X p)").unwrap()
        );
        assert_eq!(
            qptl_translate(&q("exists q. (q | G q)")).unwrap(),
            parse_sl("<<x_q>>(((alpha,x_q) X p) | G ((alpha,x_q) X p))").unwrap()
        );
    }

    #[test]
    fn alternation_is_preserved() {
        let phi = q("forall q. exists r. forall s. (q -> X (r & X s))");
        let rdc = fixture("rdc").unwrap();
        assert_eq!(alt(&qptl_translate(&phi).unwrap(), rdc.agents()), qptl_alt(&phi));
    }

    #[test]
    fn satisfiability() {
        assert_eq!(qptl_sat(&q("exists q. (q & X !q)"), None).unwrap(), Verdict::True);
        assert_eq!(qptl_sat(&q("forall q. q"), None).unwrap(), Verdict::False);
        assert_eq!(qptl_sat(&q("exists q. q"), None).unwrap(), Verdict::True);
    }

    #[test]
    fn open_formulas_are_refused() {
        assert!(matches!(qptl_sat(&q("q"), None), Err(Error::NotASentence(_))));
    }
}
