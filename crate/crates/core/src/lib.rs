//! Model checking for Strategy Logic over concurrent game structures.
//!
//! The crate offers two independent engines. The enumerative engine
//! ([`semantics`]) evaluates sentences directly over finite strategy carriers,
//! under both the classic and the elementary semantics. The automata engine
//! ([`automata`], [`games`]) decides One-Goal sentences exactly through tree
//! automata and parity games. The [`checker`] module ties both together with
//! bottom-up labelling of principal subsentences.

pub mod error;
pub mod model;
pub mod dependence;
pub mod syntax;
pub mod semantics;
pub mod automata;
pub mod games;
pub mod checker;

pub use error::{Error, Result};
