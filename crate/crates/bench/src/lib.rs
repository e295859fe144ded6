//! Workloads shared by the benchmarks under `benches/`.

use slmc_core::checker::{CheckRequest, Engine};
use slmc_core::games::{ParityGame, Player};
use slmc_core::model::fixture;
use slmc_core::syntax::parse_sl;

/// The three-agent sentence separating the `g1` and `g2` fixtures.
pub const PHI_STAR: &str = "[[x]]<<y>>[[z]](alpha,x)(beta,y)(gamma,z) X p";

/// A check of `formula` on the named fixture with the given engine.
pub fn request(fixture_name: &str, formula: &str, engine: Engine) -> CheckRequest {
    let g = fixture(fixture_name).expect("known fixture");
    let f = parse_sl(formula).expect("formula parses");
    CheckRequest::new(g, f).engine(engine)
}

/// A parity game on `n` vertices: vertex `v` moves to `v + 1` and back to
/// `v / 2`, owners alternate and priorities cycle through `0..4`.
pub fn ladder_game(n: usize) -> ParityGame {
    let owner = (0..n)
        .map(|v| if v % 2 == 0 { Player::Even } else { Player::Odd })
        .collect();
    let priority = (0..n).map(|v| (v * 7 + 3) % 4).collect();
    let edges = (0..n).map(|v| vec![(v + 1) % n, v / 2]).collect();
    ParityGame::new(owner, priority, edges, 0).expect("ladder games are total")
}
