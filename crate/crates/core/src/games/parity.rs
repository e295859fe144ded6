//! Parity games under the least-priority convention: a play is won by
//! [`Player::Even`] when the least priority occurring infinitely often is
//! even.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player favoured by priority `p`.
    pub fn of_priority(p: usize) -> Player {
        if p % 2 == 0 {
            Player::Even
        } else {
            Player::Odd
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Even => write!(f, "even"),
            Player::Odd => write!(f, "odd"),
        }
    }
}

/// A finite game graph with owners and priorities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub priority: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
    pub initial: usize,
}

impl ParityGame {
    /// Checks sizes, edge targets and totality.
    pub fn new(
        owner: Vec<Player>,
        priority: Vec<usize>,
        edges: Vec<Vec<usize>>,
        initial: usize,
    ) -> Result<ParityGame> {
        let n = owner.len();
        if priority.len() != n || edges.len() != n {
            return Err(Error::Validation("owner, priority and edge lists differ in length".into()));
        }
        if n > 0 && initial >= n {
            return Err(Error::Validation(format!("initial vertex {initial} out of range")));
        }
        for (v, out) in edges.iter().enumerate() {
            if out.is_empty() {
                return Err(Error::Validation(format!("vertex {v} has no outgoing edge")));
            }
            if let Some(w) = out.iter().find(|&&w| w >= n) {
                return Err(Error::Validation(format!("edge {v} -> {w} leaves the game")));
            }
        }
        Ok(ParityGame {
            owner,
            priority,
            edges,
            initial,
        })
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, out) in self.edges.iter().enumerate() {
            for &w in out {
                pred[w].push(v);
            }
        }
        pred
    }
}

/// Winning regions and memoryless winning strategies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParitySolution {
    /// Winner of every vertex.
    pub winner: Vec<Player>,
    /// For each vertex, the successor chosen by its owner when the owner
    /// wins there; `None` where the owner loses.
    pub strategy: Vec<Option<usize>>,
}

impl ParitySolution {
    pub fn region(&self, p: Player) -> Vec<usize> {
        (0..self.winner.len()).filter(|&v| self.winner[v] == p).collect()
    }
}

/// Attractor of `target` for `player` inside the vertex set `inside`, with
/// the attracting edge of each added vertex owned by `player`.
fn attractor(
    g: &ParityGame,
    pred: &[Vec<usize>],
    inside: &[bool],
    target: &[usize],
    player: Player,
    strategy: &mut [Option<usize>],
) -> Vec<bool> {
    let n = g.len();
    let mut attr = vec![false; n];
    let mut count: Vec<usize> = (0..n)
        .map(|v| g.edges[v].iter().filter(|&&w| inside[w]).count())
        .collect();
    let mut queue: Vec<usize> = Vec::new();
    for &t in target {
        if inside[t] && !attr[t] {
            attr[t] = true;
            queue.push(t);
        }
    }
    while let Some(w) = queue.pop() {
        for &v in &pred[w] {
            if !inside[v] || attr[v] {
                continue;
            }
            if g.owner[v] == player {
                attr[v] = true;
                strategy[v] = Some(w);
                queue.push(v);
            } else {
                count[v] -= 1;
                if count[v] == 0 {
                    attr[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    attr
}

/// Solves the game by Zielonka's recursion.
pub fn solve_parity(g: &ParityGame) -> ParitySolution {
    let pred = g.predecessors();
    let mut strategy = vec![None; g.len()];
    let inside = vec![true; g.len()];
    let (w_even, _) = zielonka(g, &pred, &inside, &mut strategy);
    let winner: Vec<Player> = (0..g.len())
        .map(|v| if w_even[v] { Player::Even } else { Player::Odd })
        .collect();
    for v in 0..g.len() {
        if winner[v] != g.owner[v] {
            strategy[v] = None;
        } else if strategy[v].is_none() {
            strategy[v] = g.edges[v].iter().copied().find(|&w| winner[w] == winner[v]);
        }
    }
    ParitySolution { winner, strategy }
}

/// Returns the winning masks of Even and Odd on the subgame `inside`,
/// writing winning moves into `strategy`.
fn zielonka(
    g: &ParityGame,
    pred: &[Vec<usize>],
    inside: &[bool],
    strategy: &mut [Option<usize>],
) -> (Vec<bool>, Vec<bool>) {
    let n = g.len();
    let Some(p) = (0..n).filter(|&v| inside[v]).map(|v| g.priority[v]).min() else {
        return (vec![false; n], vec![false; n]);
    };
    let i = Player::of_priority(p);
    let top: Vec<usize> = (0..n).filter(|&v| inside[v] && g.priority[v] == p).collect();
    let mut attr_moves = vec![None; n];
    let a = attractor(g, pred, inside, &top, i, &mut attr_moves);
    let rest: Vec<bool> = (0..n).map(|v| inside[v] && !a[v]).collect();
    let mut sub_moves = strategy.to_vec();
    let (w0, w1) = zielonka(g, pred, &rest, &mut sub_moves);
    let wo = match i {
        Player::Even => w1,
        Player::Odd => w0,
    };
    if !wo.iter().any(|&b| b) {
        for v in 0..n {
            if !inside[v] {
                continue;
            }
            if rest[v] {
                strategy[v] = sub_moves[v];
            } else if g.owner[v] == i {
                strategy[v] = attr_moves[v]
                    .or_else(|| g.edges[v].iter().copied().find(|&w| inside[w]));
            }
        }
        let all = inside.to_vec();
        let none = vec![false; n];
        return match i {
            Player::Even => (all, none),
            Player::Odd => (none, all),
        };
    }
    let o = i.opponent();
    let wo_list: Vec<usize> = (0..n).filter(|&v| wo[v]).collect();
    let mut b_moves = vec![None; n];
    let b = attractor(g, pred, inside, &wo_list, o, &mut b_moves);
    let remain: Vec<bool> = (0..n).map(|v| inside[v] && !b[v]).collect();
    let mut rem_moves = strategy.to_vec();
    let (r0, r1) = zielonka(g, pred, &remain, &mut rem_moves);
    let (ri, ro) = match i {
        Player::Even => (r0, r1),
        Player::Odd => (r1, r0),
    };
    for v in 0..n {
        if !inside[v] {
            continue;
        }
        if remain[v] {
            strategy[v] = rem_moves[v];
        } else if wo[v] {
            strategy[v] = sub_moves[v];
        } else if g.owner[v] == o {
            strategy[v] = b_moves[v];
        }
    }
    let win_o: Vec<bool> = (0..n).map(|v| ro[v] || b[v]).collect();
    match i {
        Player::Even => (ri, win_o),
        Player::Odd => (win_o, ri),
    }
}

/// Whether `strategy` wins for `player` from every vertex of `region`: the
/// opponent cannot leave the region and every cycle consistent with the
/// strategy has a least priority favouring `player`.
pub fn verify_strategy(
    g: &ParityGame,
    player: Player,
    region: &[usize],
    strategy: &[Option<usize>],
) -> bool {
    let n = g.len();
    let mut inr = vec![false; n];
    for &v in region {
        inr[v] = true;
    }
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &v in region {
        if g.owner[v] == player {
            match strategy[v] {
                Some(w) if inr[w] && g.edges[v].contains(&w) => succ[v].push(w),
                _ => return false,
            }
        } else {
            for &w in &g.edges[v] {
                if !inr[w] {
                    return false;
                }
                succ[v].push(w);
            }
        }
    }
    for &v in region {
        let p = g.priority[v];
        if Player::of_priority(p) == player {
            continue;
        }
        let allowed: Vec<bool> = (0..n).map(|u| inr[u] && g.priority[u] >= p).collect();
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = succ[v].iter().copied().filter(|&u| allowed[u]).collect();
        while let Some(u) = stack.pop() {
            if u == v {
                return false;
            }
            if !std::mem::replace(&mut seen[u], true) {
                stack.extend(succ[u].iter().copied().filter(|&x| allowed[x]));
            }
        }
    }
    true
}

/// Winners by exhaustive search over memoryless strategies of Even, each
/// checked against every memoryless counter-strategy of Odd.
pub fn solve_parity_brute(g: &ParityGame) -> Vec<Player> {
    let n = g.len();
    let even: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Player::Even).collect();
    let odd: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Player::Odd).collect();
    let mut wins = vec![false; n];
    for_each_choice(g, &even, &mut |sigma| {
        let mut beaten = vec![false; n];
        for_each_choice(g, &odd, &mut |tau| {
            for (start, b) in beaten.iter_mut().enumerate() {
                if !*b && !play_won_by_even(g, sigma, tau, start) {
                    *b = true;
                }
            }
        });
        for v in 0..n {
            wins[v] |= !beaten[v];
        }
    });
    wins.into_iter()
        .map(|w| if w { Player::Even } else { Player::Odd })
        .collect()
}

fn for_each_choice(g: &ParityGame, owned: &[usize], f: &mut impl FnMut(&[usize])) {
    let mut choice = vec![0usize; g.len()];
    let mut idx = vec![0usize; owned.len()];
    loop {
        for (k, &v) in owned.iter().enumerate() {
            choice[v] = g.edges[v][idx[k]];
        }
        f(&choice);
        let mut k = 0;
        while k < owned.len() {
            idx[k] += 1;
            if idx[k] < g.edges[owned[k]].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == owned.len() {
            return;
        }
    }
}

fn play_won_by_even(g: &ParityGame, sigma: &[usize], tau: &[usize], start: usize) -> bool {
    let mut pos = vec![usize::MAX; g.len()];
    let mut trail = Vec::new();
    let mut v = start;
    while pos[v] == usize::MAX {
        pos[v] = trail.len();
        trail.push(v);
        v = if g.owner[v] == Player::Even { sigma[v] } else { tau[v] };
    }
    let least = trail[pos[v]..].iter().map(|&u| g.priority[u]).min().expect("non-empty cycle");
    least % 2 == 0
}

/// Winning region of `player` for the objective "visit `accepting`
/// infinitely often", by iterated attractors.
pub fn solve_buchi(g: &ParityGame, player: Player, accepting: &[bool]) -> Vec<bool> {
    let n = g.len();
    let pred = g.predecessors();
    let mut inside = vec![true; n];
    let mut scratch = vec![None; n];
    loop {
        let targets: Vec<usize> = (0..n).filter(|&v| inside[v] && accepting[v]).collect();
        let reach = attractor(g, &pred, &inside, &targets, player, &mut scratch);
        let trap: Vec<usize> = (0..n).filter(|&v| inside[v] && !reach[v]).collect();
        if trap.is_empty() {
            return inside;
        }
        let lost = attractor(g, &pred, &inside, &trap, player.opponent(), &mut scratch);
        for v in 0..n {
            if lost[v] {
                inside[v] = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_even_self_loop() {
        let g = ParityGame::new(vec![Player::Even], vec![2], vec![vec![0]], 0).unwrap();
        let s = solve_parity(&g);
        assert_eq!(s.winner, vec![Player::Even]);
        assert_eq!(s.strategy, vec![Some(0)]);
    }

    #[test]
    fn totality_is_required() {
        assert!(ParityGame::new(vec![Player::Even], vec![0], vec![vec![]], 0).is_err());
    }

    #[test]
    fn four_vertex_game_matches_brute_force() {
        let g = ParityGame::new(
            vec![Player::Even, Player::Odd, Player::Even, Player::Odd],
            vec![1, 2, 3, 0],
            vec![vec![1, 2], vec![0, 3], vec![2, 3], vec![1]],
            0,
        )
        .unwrap();
        let s = solve_parity(&g);
        assert_eq!(s.winner, solve_parity_brute(&g));
        for p in [Player::Even, Player::Odd] {
            assert!(verify_strategy(&g, p, &s.region(p), &s.strategy));
        }
    }

    #[test]
    fn buchi_agrees_with_parity() {
        let g = ParityGame::new(
            vec![Player::Odd, Player::Even, Player::Odd],
            vec![2, 3, 3],
            vec![vec![1, 2], vec![0, 2], vec![2]],
            0,
        )
        .unwrap();
        let acc: Vec<bool> = g.priority.iter().map(|&p| p == 2).collect();
        let b = solve_buchi(&g, Player::Even, &acc);
        let s = solve_parity(&g);
        for v in 0..3 {
            assert_eq!(b[v], s.winner[v] == Player::Even);
        }
    }
}
