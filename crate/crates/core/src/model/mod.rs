//! Concurrent game structures, tracks, strategies, assignments and plays.

pub mod cgs;
pub mod fixtures;
pub mod format;
pub mod strategy;
pub mod track;

pub use cgs::{ActionId, AgentId, AtomId, Cgs, Decision, StateId};
pub use fixtures::{fixture, fixtures, FIXTURE_NAMES};
pub use format::{load_cgs, store_cgs};
pub use strategy::{
    global_translation, play, redefine, translate_assignment, translate_strategy, Assignment,
    FunctionStrategy, Place, Play, Strategy, TableStrategy, Transducer, TransducerStrategy,
};
pub use track::{reachable, tracks_from, Path, Track};
