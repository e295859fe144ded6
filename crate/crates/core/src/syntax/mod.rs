//! Formula syntax: AST, parser, structural analyses, prefixes, normal forms
//! and fragment classification.

pub mod analysis;
pub mod ast;
pub mod classify;
pub mod normal;
pub mod parser;
pub mod prefix;

pub use analysis::{
    alt, bound_agents, free, free_agents, free_props, free_vars, is_agent_closed,
    is_principal, is_sentence, psnt, qptl_alt, snt, sub, variables, xdepth,
};
pub use ast::{Formula, Quantifier};
pub use classify::{classify, is_ngsl, prenex_normalize, FragmentReport};
pub use normal::{negate, to_enf, to_pnf};
pub use parser::{parse_formula, parse_sl, Dialect};
pub use prefix::{split, BindPrefix, QuantPrefix};
