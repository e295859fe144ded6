//! Parity games and the games built on them.

pub mod dvv;
pub mod emptiness;
pub mod parity;
pub mod text;

pub use dvv::{
    build_dvv_game, even_wins_bounded, is_encasement_bounded, odd_wins_bounded, solve_dvv_bounded,
    DvvGame, PlayPredicate,
};
pub use emptiness::{npt_emptiness, Emptiness, Witness, WitnessNode};
pub use parity::{
    solve_buchi, solve_parity, solve_parity_brute, verify_strategy, ParityGame, ParitySolution,
    Player,
};
pub use text::{parse_game, render_solution, store_game, NamedGame};
