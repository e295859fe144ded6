//! A line-based text format for parity games.
//!
//! ```text
//! # comments run to the end of the line
//! v0 even 2 -> v0 v1
//! v1 odd 1 -> v0
//! initial v0
//! ```
//!
//! Each vertex line gives a name, its owner, its priority and its
//! successors. Successors may be named before their own line. The
//! `initial` line is optional and defaults to the first vertex.

use std::collections::HashMap;
use std::fmt::Write;

use super::parity::{ParityGame, ParitySolution, Player};
use crate::error::{Error, Result};

/// A parsed game together with its vertex names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGame {
    pub game: ParityGame,
    pub names: Vec<String>,
}

fn parse_error(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse {
        line,
        col: 1,
        message: msg.to_string(),
    }
}

/// Parses the text format.
pub fn parse_game(text: &str) -> Result<NamedGame> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut declared: Vec<Option<(Player, usize, Vec<usize>)>> = Vec::new();
    let mut initial: Option<(usize, String)> = None;
    let mut intern = |name: &str, names: &mut Vec<String>, declared: &mut Vec<_>| -> usize {
        *index.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            declared.push(None);
            names.len() - 1
        })
    };
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        if words[0] == "initial" {
            if words.len() != 2 {
                return Err(parse_error(line_no, "expected `initial <vertex>`"));
            }
            if initial.is_some() {
                return Err(parse_error(line_no, "initial vertex given twice"));
            }
            initial = Some((line_no, words[1].to_string()));
            continue;
        }
        if words.len() < 4 || words[3] != "->" {
            return Err(parse_error(line_no, "expected `<vertex> <owner> <priority> -> <successors>`"));
        }
        let owner = match words[1] {
            "even" => Player::Even,
            "odd" => Player::Odd,
            other => return Err(parse_error(line_no, format!("unknown owner `{other}`"))),
        };
        let priority: usize = words[2]
            .parse()
            .map_err(|_| parse_error(line_no, format!("bad priority `{}`", words[2])))?;
        let v = intern(words[0], &mut names, &mut declared);
        if declared[v].is_some() {
            return Err(parse_error(line_no, format!("vertex `{}` declared twice", words[0])));
        }
        let succ = words[4..]
            .iter()
            .map(|w| intern(w, &mut names, &mut declared))
            .collect();
        declared[v] = Some((owner, priority, succ));
    }
    let mut owner = Vec::new();
    let mut priority = Vec::new();
    let mut edges = Vec::new();
    for (v, d) in declared.into_iter().enumerate() {
        let (o, p, e) = d.ok_or_else(|| {
            Error::UndeclaredName {
                kind: "vertex",
                name: names[v].clone(),
            }
        })?;
        owner.push(o);
        priority.push(p);
        edges.push(e);
    }
    if names.is_empty() {
        return Err(parse_error(1, "the game has no vertices"));
    }
    let initial = match initial {
        None => 0,
        Some((line_no, name)) => names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| parse_error(line_no, format!("unknown vertex `{name}`")))?,
    };
    let game = ParityGame::new(owner, priority, edges, initial)?;
    Ok(NamedGame { game, names })
}

/// Prints a game in the text format.
pub fn store_game(g: &NamedGame) -> String {
    let mut out = String::new();
    for v in 0..g.game.len() {
        let succ: Vec<&str> = g.game.edges[v].iter().map(|&w| g.names[w].as_str()).collect();
        let _ = writeln!(
            out,
            "{} {} {} -> {}",
            g.names[v],
            g.game.owner[v],
            g.game.priority[v],
            succ.join(" ")
        );
    }
    let _ = writeln!(out, "initial {}", g.names[g.game.initial]);
    out
}

/// One line per vertex: its name, its winner and, where the owner wins,
/// the chosen successor.
pub fn render_solution(g: &NamedGame, sol: &ParitySolution) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "initial {} won by {}",
        g.names[g.game.initial], sol.winner[g.game.initial]
    );
    for v in 0..g.game.len() {
        let _ = write!(out, "{} {}", g.names[v], sol.winner[v]);
        if let Some(w) = sol.strategy[v] {
            let _ = write!(out, " -> {}", g.names[w]);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::parity::solve_parity;

    const SAMPLE: &str = "\
# a small game
a even 2 -> b c
b odd 3 -> a
c odd 1 -> c
initial a
";

    #[test]
    fn round_trip() {
        let g = parse_game(SAMPLE).unwrap();
        assert_eq!(g.names, vec!["a", "b", "c"]);
        assert_eq!(g.game.edges, vec![vec![1, 2], vec![0], vec![2]]);
        assert_eq!(parse_game(&store_game(&g)).unwrap(), g);
    }

    #[test]
    fn solution_listing() {
        let g = parse_game(SAMPLE).unwrap();
        let sol = solve_parity(&g.game);
        let text = render_solution(&g, &sol);
        assert!(text.starts_with("initial a won by even\n"));
        assert!(text.contains("a even -> b\n"));
        assert!(text.contains("c odd -> c\n"));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_game("a even 0 -> b"), Err(Error::UndeclaredName { .. })));
        assert!(matches!(parse_game("a blue 0 -> a"), Err(Error::Parse { .. })));
        assert!(matches!(parse_game("a even 0 ->"), Err(Error::Validation(_))));
        assert!(matches!(parse_game("a even 0 -> a\ninitial z"), Err(Error::Parse { .. })));
        assert!(matches!(parse_game(""), Err(Error::Parse { .. })));
    }
}
