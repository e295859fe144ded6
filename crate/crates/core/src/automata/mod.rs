//! Word and tree automata for One-Goal sentences.

pub mod formula;
pub mod nondet;
pub mod posbool;
pub mod sentence;
pub mod tree;
pub mod word;

pub use formula::{formula_apt, sentence_nondet, sentence_npt};
pub use nondet::{nondeterminize_cobuchi, project_direction};
pub use posbool::PosBool;
pub use sentence::{goal_uct, sentence_uct};
pub use tree::{universal_accepts_directly, RegularTree, TreeAutomaton};
pub use word::{
    dualize_word, ltl_holds_on_lasso, ltl_to_nbw, ltl_to_nbw_over, ltl_to_ucw, Lasso,
    WordAcceptance, WordAutomaton, WordMode,
};
