//! Finite positional games, strategies as play trees, backward-induction
//! solving and the reduction of first-player winning strategies.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::caps::Caps;
use crate::error::{Error, Result};

pub type Pos = usize;
pub type Play = Vec<Pos>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    First,
    Second,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::First => Player::Second,
            Player::Second => Player::First,
        }
    }

    /// The player who makes move number `len + 1` after a play of length `len`.
    pub fn to_move(len: usize) -> Player {
        if len % 2 == 0 {
            Player::First
        } else {
            Player::Second
        }
    }

    fn owns(self, len: usize) -> bool {
        len > 0 && Player::to_move(len - 1) == self
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::First => "first",
            Player::Second => "second",
        })
    }
}

/// A digraph with a start position. A play is a walk starting at an
/// out-neighbour of the start; a player who cannot move loses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PositionalGame {
    labels: Vec<String>,
    succ: Vec<Vec<Pos>>,
    start: Pos,
}

impl PositionalGame {
    /// A game with only the start position.
    pub fn new(start_label: impl Into<String>) -> Self {
        PositionalGame {
            labels: vec![start_label.into()],
            succ: vec![Vec::new()],
            start: 0,
        }
    }

    pub fn from_edges(labels: Vec<String>, edges: &[(Pos, Pos)], start: Pos) -> Result<Self> {
        let n = labels.len();
        if start >= n {
            return Err(Error::InvalidGame("start out of range".into()));
        }
        let mut g = PositionalGame {
            labels,
            succ: vec![Vec::new(); n],
            start,
        };
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_position(&mut self, label: impl Into<String>) -> Pos {
        self.labels.push(label.into());
        self.succ.push(Vec::new());
        self.labels.len() - 1
    }

    pub fn add_edge(&mut self, a: Pos, b: Pos) -> Result<()> {
        if a >= self.len() || b >= self.len() {
            return Err(Error::InvalidGame(format!("edge ({a}, {b}) out of range")));
        }
        if !self.succ[a].contains(&b) {
            self.succ[a].push(b);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn start(&self) -> Pos {
        self.start
    }

    pub fn label(&self, p: Pos) -> &str {
        &self.labels[p]
    }

    pub fn successors(&self, p: Pos) -> &[Pos] {
        &self.succ[p]
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    fn last(&self, play: &[Pos]) -> Pos {
        play.last().copied().unwrap_or(self.start)
    }

    pub fn is_legal(&self, play: &[Pos]) -> bool {
        let mut cur = self.start;
        for &p in play {
            if p >= self.len() || !self.succ[cur].contains(&p) {
                return false;
            }
            cur = p;
        }
        true
    }

    /// Positions reachable from the start in a topological order, or the
    /// position closing a cycle.
    pub fn reachable_topo(&self) -> Result<Vec<Pos>> {
        let n = self.len();
        // 0 unseen, 1 on stack, 2 done
        let mut state = vec![0u8; n];
        let mut post = Vec::new();
        let mut stack = vec![(self.start, 0usize)];
        state[self.start] = 1;
        while let Some(&mut (p, ref mut i)) = stack.last_mut() {
            if *i < self.succ[p].len() {
                let q = self.succ[p][*i];
                *i += 1;
                match state[q] {
                    0 => {
                        state[q] = 1;
                        stack.push((q, 0));
                    }
                    1 => return Err(Error::Cycle(self.labels[q].clone())),
                    _ => {}
                }
            } else {
                state[p] = 2;
                post.push(p);
                stack.pop();
            }
        }
        post.reverse();
        Ok(post)
    }

    /// Relabels positions by the permutation `perm` (old index to new index).
    pub fn permuted(&self, perm: &[Pos]) -> Self {
        let n = self.len();
        let mut labels = vec![String::new(); n];
        let mut succ = vec![Vec::new(); n];
        for p in 0..n {
            labels[perm[p]] = self.labels[p].clone();
            succ[perm[p]] = self.succ[p].iter().map(|&q| perm[q]).collect();
        }
        PositionalGame {
            labels,
            succ,
            start: perm[self.start],
        }
    }
}

/// A total order on positions, stored as ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionOrder {
    rank: Vec<usize>,
}

impl PositionOrder {
    /// Construction order.
    pub fn identity(n: usize) -> Self {
        PositionOrder { rank: (0..n).collect() }
    }

    /// `seq` lists every position once, smallest first.
    pub fn from_sequence(seq: &[Pos]) -> Result<Self> {
        let n = seq.len();
        let mut rank = vec![usize::MAX; n];
        for (r, &p) in seq.iter().enumerate() {
            if p >= n || rank[p] != usize::MAX {
                return Err(Error::InvalidGame("order must list every position exactly once".into()));
            }
            rank[p] = r;
        }
        Ok(PositionOrder { rank })
    }

    pub fn shuffled<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut seq: Vec<Pos> = (0..n).collect();
        seq.shuffle(rng);
        Self::from_sequence(&seq).unwrap()
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, p: Pos) -> usize {
        self.rank[p]
    }

    pub fn cmp(&self, a: Pos, b: Pos) -> Ordering {
        self.rank[a].cmp(&self.rank[b])
    }

    pub fn le(&self, a: Pos, b: Pos) -> bool {
        self.rank[a] <= self.rank[b]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    pos: Pos,
    depth: usize,
    parent: usize,
    stored: bool,
    children: BTreeMap<Pos, usize>,
}

/// A set of finite plays ending with moves of `player`, kept as a prefix
/// tree. Node 0 is the empty play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    player: Player,
    nodes: Vec<Node>,
}

impl Strategy {
    pub fn new(player: Player) -> Self {
        Strategy {
            player,
            nodes: vec![Node {
                pos: usize::MAX,
                depth: 0,
                parent: usize::MAX,
                stored: false,
                children: BTreeMap::new(),
            }],
        }
    }

    pub fn from_plays(player: Player, plays: &[Play]) -> Result<Self> {
        let mut s = Strategy::new(player);
        for p in plays {
            s.insert(p)?;
        }
        Ok(s)
    }

    pub fn player(&self) -> Player {
        self.player
    }

    fn child(&self, node: usize, p: Pos) -> Option<usize> {
        self.nodes[node].children.get(&p).copied()
    }

    fn find(&self, play: &[Pos]) -> Option<usize> {
        let mut cur = 0;
        for &p in play {
            cur = self.child(cur, p)?;
        }
        Some(cur)
    }

    fn ensure(&mut self, play: &[Pos]) -> usize {
        let mut cur = 0;
        for &p in play {
            cur = match self.child(cur, p) {
                Some(c) => c,
                None => {
                    let id = self.nodes.len();
                    let depth = self.nodes[cur].depth + 1;
                    self.nodes.push(Node {
                        pos: p,
                        depth,
                        parent: cur,
                        stored: false,
                        children: BTreeMap::new(),
                    });
                    self.nodes[cur].children.insert(p, id);
                    id
                }
            };
        }
        cur
    }

    /// Adds a play; it must end with a move of this strategy's player.
    pub fn insert(&mut self, play: &[Pos]) -> Result<()> {
        if !self.player.owns(play.len()) {
            return Err(Error::InvalidGame(format!(
                "play of length {} does not end with a {} player move",
                play.len(),
                self.player
            )));
        }
        let id = self.ensure(play);
        self.nodes[id].stored = true;
        Ok(())
    }

    pub fn contains(&self, play: &[Pos]) -> bool {
        self.find(play).is_some_and(|n| self.nodes[n].stored)
    }

    /// Removes a play and everything extending it.
    pub fn remove(&mut self, play: &[Pos]) -> bool {
        let Some(id) = self.find(play) else {
            return false;
        };
        if id == 0 {
            return false;
        }
        // detached nodes stay in the arena but are unreachable
        let (parent, pos) = (self.nodes[id].parent, self.nodes[id].pos);
        self.nodes[parent].children.remove(&pos);
        true
    }

    fn play_of(&self, mut node: usize) -> Play {
        let mut out = Vec::with_capacity(self.nodes[node].depth);
        while node != 0 {
            out.push(self.nodes[node].pos);
            node = self.nodes[node].parent;
        }
        out.reverse();
        out
    }

    fn dfs(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![0];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.nodes[n].children.values().rev().copied());
        }
        out
    }

    /// Stored plays in depth-first order.
    pub fn plays(&self) -> Vec<Play> {
        self.dfs()
            .into_iter()
            .filter(|&n| self.nodes[n].stored)
            .map(|n| self.play_of(n))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.dfs().into_iter().filter(|&n| self.nodes[n].stored).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The strategy's reply after `play` followed by the opponent move `m`.
    pub fn response(&self, play: &[Pos], m: Pos) -> Option<Pos> {
        let n = self.child(self.find(play)?, m)?;
        let mut stored = self.nodes[n].children.values().filter(|&&c| self.nodes[c].stored);
        let first = stored.next()?;
        Some(self.nodes[*first].pos)
    }

    /// The player's first move, for first-player strategies.
    pub fn first_move(&self) -> Option<Pos> {
        self.nodes[0]
            .children
            .values()
            .find(|&&c| self.nodes[c].stored)
            .map(|&c| self.nodes[c].pos)
    }

    /// Indented play tree, one move per line.
    pub fn dump(&self, game: &PositionalGame) -> String {
        let mut out = format!("strategy for the {} player\n", self.player);
        for n in self.dfs().into_iter().skip(1) {
            let node = &self.nodes[n];
            let mark = if self.player.owns(node.depth) && !node.stored { "? " } else { "" };
            out.push_str(&format!(
                "{}{}{}\n",
                "  ".repeat(node.depth - 1),
                mark,
                game.label(node.pos)
            ));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Player,
    pub strategy: Strategy,
}

/// Backward induction on the reachable part of an acyclic game. The
/// winner's strategy always picks the first winning successor and is
/// materialised as a play tree.
pub fn solve_game(game: &PositionalGame, caps: &Caps) -> Result<Solution> {
    let wins = win_table(game)?;
    let winner = if wins[&game.start] {
        Player::First
    } else {
        Player::Second
    };
    let choice = |p: Pos| -> Pos {
        *game.succ[p]
            .iter()
            .find(|q| !wins[q])
            .expect("winning position has a losing successor")
    };
    let mut strategy = Strategy::new(winner);
    let mut stack: Vec<Play> = Vec::new();
    match winner {
        Player::First => stack.push(vec![choice(game.start)]),
        Player::Second => {
            for &m in game.successors(game.start) {
                stack.push(vec![m, choice(m)]);
            }
        }
    }
    let mut count = 0u64;
    while let Some(play) = stack.pop() {
        count += 1;
        if count > caps.strategy_plays {
            return Err(Error::cap("strategy plays", count, caps.strategy_plays));
        }
        let last = game.last(&play);
        for &m in game.successors(last) {
            let mut next = play.clone();
            next.push(m);
            next.push(choice(m));
            stack.push(next);
        }
        strategy.insert(&play)?;
    }
    Ok(Solution { winner, strategy })
}

/// The winner only.
pub fn winner(game: &PositionalGame) -> Result<Player> {
    let wins = win_table(game)?;
    Ok(if wins[&game.start] {
        Player::First
    } else {
        Player::Second
    })
}

/// Whether the player to move at each reachable position wins.
fn win_table(game: &PositionalGame) -> Result<HashMap<Pos, bool>> {
    let order = game.reachable_topo()?;
    let mut wins: HashMap<Pos, bool> = HashMap::with_capacity(order.len());
    for &p in order.iter().rev() {
        let w = game.succ[p].iter().any(|q| !wins[q]);
        wins.insert(p, w);
    }
    Ok(wins)
}

/// Rebuilds a first-player winning strategy so that it is reduced for
/// `ord`. Each reply is chosen through an auxiliary play of `sigma` ending
/// at the same position: among replies `u` to some opponent move `m'` after
/// the auxiliary play, with `u` legal now, the least `u` wins, ties broken by
/// the least `m'`.
pub fn reduce_strategy(
    game: &PositionalGame,
    sigma: &Strategy,
    ord: &PositionOrder,
    caps: &Caps,
) -> Result<Strategy> {
    if sigma.player != Player::First {
        return Err(Error::InvalidGame("only first-player strategies are reduced".into()));
    }
    if ord.len() != game.len() {
        return Err(Error::InvalidGame("order does not cover the positions".into()));
    }
    let first = sigma
        .first_move()
        .ok_or_else(|| Error::NotWinning("strategy has no first move".into()))?;
    let mut out = Strategy::new(Player::First);
    // (play in the output, node of its auxiliary play in sigma)
    let mut stack = vec![(vec![first], sigma.find(&[first]).unwrap())];
    let mut count = 0u64;
    while let Some((s, aux)) = stack.pop() {
        count += 1;
        if count > caps.strategy_plays {
            return Err(Error::cap("strategy plays", count, caps.strategy_plays));
        }
        out.insert(&s)?;
        let last = *s.last().unwrap();
        for &m in game.successors(last) {
            let mut best: Option<(Pos, Pos, usize)> = None;
            for (&m2, &mnode) in &sigma.nodes[aux].children {
                for (&u, &unode) in &sigma.nodes[mnode].children {
                    if !sigma.nodes[unode].stored || !game.succ[m].contains(&u) {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bu, bm, _)) => ord.cmp(u, bu).then(ord.cmp(m2, bm)) == Ordering::Less,
                    };
                    if better {
                        best = Some((u, m2, unode));
                    }
                }
            }
            let Some((u, _, unode)) = best else {
                return Err(Error::NotWinning(format!(
                    "no reply in the strategy after {} then {}",
                    show_play(game, &s),
                    game.label(m)
                )));
            };
            let mut next = s.clone();
            next.push(m);
            next.push(u);
            stack.push((next, unode));
        }
    }
    Ok(out)
}

pub fn show_play(game: &PositionalGame, play: &[Pos]) -> String {
    let parts: Vec<&str> = play.iter().map(|&p| game.label(p)).collect();
    format!("[{}]", parts.join(" "))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyReport {
    pub is_strategy: bool,
    pub is_winning: bool,
    pub is_reduced: Option<bool>,
    pub splice_closed: Option<bool>,
    /// A play witnessing the first failed check.
    pub problem: Option<(String, Play)>,
}

/// Checks the definitions by traversing the whole play tree. Reducedness
/// needs an order; both it and the splice property apply to first-player
/// strategies only.
pub fn check_strategy(game: &PositionalGame, sigma: &Strategy, ord: Option<&PositionOrder>) -> StrategyReport {
    let mut problem: Option<(String, Play)> = None;
    let note = |msg: &str, play: Play, problem: &mut Option<(String, Play)>| {
        if problem.is_none() {
            *problem = Some((msg.to_string(), play));
        }
    };
    let nodes = sigma.dfs();
    let mut is_strategy = true;
    let mut is_winning = true;
    for &n in &nodes {
        let node = &sigma.nodes[n];
        if n != 0 && node.stored && !game.is_legal(&sigma.play_of(n)) {
            is_strategy = false;
            note("illegal play", sigma.play_of(n), &mut problem);
        }
        if node.stored && node.depth > 2 {
            let grand = sigma.nodes[node.parent].parent;
            if !sigma.nodes[grand].stored {
                is_strategy = false;
                note("not closed under 2-truncation", sigma.play_of(n), &mut problem);
            }
        }
        let anchor = node.stored || (n == 0 && sigma.player == Player::Second);
        if n == 0 && sigma.player == Player::First {
            let firsts = node.children.values().filter(|&&c| sigma.nodes[c].stored).count();
            if firsts != 1 {
                is_strategy = false;
                if firsts == 0 {
                    is_winning = false;
                }
                note("needs exactly one first move", vec![], &mut problem);
            }
            continue;
        }
        if !anchor {
            continue;
        }
        let play = sigma.play_of(n);
        let last = game.last(&play);
        for &m in game.successors(last) {
            let replies = sigma
                .child(n, m)
                .map(|c| {
                    sigma.nodes[c]
                        .children
                        .values()
                        .filter(|&&r| sigma.nodes[r].stored)
                        .count()
                })
                .unwrap_or(0);
            if replies != 1 {
                is_strategy = false;
                if replies == 0 {
                    is_winning = false;
                }
                let mut p = play.clone();
                p.push(m);
                note(
                    if replies == 0 { "missing reply" } else { "several replies" },
                    p,
                    &mut problem,
                );
            }
        }
    }
    let first = sigma.player == Player::First;
    let is_reduced = match ord {
        Some(ord) if first => Some(is_reduced(game, sigma, ord, &mut problem)),
        _ => None,
    };
    let splice_closed = first.then(|| splice_closed(sigma, &mut problem));
    StrategyReport {
        is_strategy,
        is_winning: is_strategy && is_winning,
        is_reduced,
        splice_closed,
        problem,
    }
}

fn odd_moves(play: &[Pos], upto: usize) -> Vec<Pos> {
    play[..upto].iter().step_by(2).copied().collect()
}

fn is_reduced(
    game: &PositionalGame,
    sigma: &Strategy,
    ord: &PositionOrder,
    problem: &mut Option<(String, Play)>,
) -> bool {
    let plays = sigma.plays();
    let mut groups: HashMap<(usize, Vec<Pos>), Vec<&Play>> = HashMap::new();
    for p in &plays {
        if p.len() >= 3 {
            groups.entry((p.len(), odd_moves(p, p.len() - 2))).or_default().push(p);
        }
    }
    for group in groups.values() {
        for p in group {
            let l = p.len();
            for q in group {
                let (pp, qq) = (p[l - 1], q[l - 1]);
                if game.succ[p[l - 2]].contains(&qq) && !ord.le(pp, qq) {
                    if problem.is_none() {
                        *problem = Some(("reply is not the least available".into(), (*p).clone()));
                    }
                    return false;
                }
            }
        }
    }
    true
}

fn splice_closed(sigma: &Strategy, problem: &mut Option<(String, Play)>) -> bool {
    let plays = sigma.plays();
    let mut prefixes: HashMap<(usize, Vec<Pos>), Vec<&[Pos]>> = HashMap::new();
    for p in &plays {
        let i = p.len();
        prefixes.entry((i, odd_moves(p, i))).or_default().push(p.as_slice());
    }
    // every odd-length prefix of a stored play is itself stored
    for q in &plays {
        for i in (1..q.len()).step_by(2) {
            let Some(alts) = prefixes.get(&(i, odd_moves(q, i))) else {
                continue;
            };
            for p in alts {
                let mut spliced = p.to_vec();
                spliced.extend_from_slice(&q[i..]);
                if !sigma.contains(&spliced) {
                    if problem.is_none() {
                        *problem = Some(("splice leaves the strategy".into(), spliced));
                    }
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, prop_assume, proptest, ProptestConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn game(n: usize, edges: &[(Pos, Pos)]) -> PositionalGame {
        PositionalGame::from_edges((0..n).map(|i| format!("p{i}")).collect(), edges, 0).unwrap()
    }

    #[test]
    fn trivial_games() {
        let caps = Caps::default();
        let stuck = game(1, &[]);
        let sol = solve_game(&stuck, &caps).unwrap();
        assert_eq!(sol.winner, Player::Second);
        assert!(sol.strategy.is_empty());
        let one = game(2, &[(0, 1)]);
        let sol = solve_game(&one, &caps).unwrap();
        assert_eq!(sol.winner, Player::First);
        assert_eq!(sol.strategy.plays(), vec![vec![1]]);
        let r = check_strategy(&one, &sol.strategy, None);
        assert!(r.is_strategy && r.is_winning);
        assert!(matches!(solve_game(&game(2, &[(0, 1), (1, 0)]), &caps), Err(Error::Cycle(_))));
    }

    /// First move x; challenges m1, m2 each allowing replies u1 and u2.
    fn two_challenges() -> (PositionalGame, Strategy) {
        let g = PositionalGame::from_edges(
            ["a", "x", "m1", "m2", "u1", "u2"].map(String::from).to_vec(),
            &[(0, 1), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5)],
            0,
        )
        .unwrap();
        let s = Strategy::from_plays(Player::First, &[vec![1], vec![1, 2, 5], vec![1, 3, 4]]).unwrap();
        (g, s)
    }

    #[test]
    fn reduction_picks_least_reply() {
        let caps = Caps::default();
        let (g, s) = two_challenges();
        let ord = PositionOrder::identity(g.len());
        let before = check_strategy(&g, &s, Some(&ord));
        assert!(before.is_winning);
        assert_eq!(before.is_reduced, Some(false));
        let r = reduce_strategy(&g, &s, &ord, &caps).unwrap();
        assert_eq!(r.response(&[1], 2), Some(4));
        assert_eq!(r.response(&[1], 3), Some(4));
        let after = check_strategy(&g, &r, Some(&ord));
        assert_eq!(after.is_reduced, Some(true));
        assert_eq!(after.splice_closed, Some(true));
        assert!(after.is_winning);
        // already reduced strategies are unchanged
        assert_eq!(reduce_strategy(&g, &r, &ord, &caps).unwrap().plays(), r.plays());
    }

    #[test]
    fn missing_reply_is_reported() {
        let caps = Caps::default();
        let (g, _) = two_challenges();
        let mut s = solve_game(&g, &caps).unwrap().strategy;
        assert!(s.remove(&[1, 3, 4]));
        let r = check_strategy(&g, &s, None);
        assert!(!r.is_strategy && !r.is_winning);
        assert_eq!(r.problem, Some(("missing reply".into(), vec![1, 3])));
        // the auxiliary play still supplies a reply through the other challenge
        let ord = PositionOrder::identity(g.len());
        let fixed = reduce_strategy(&g, &s, &ord, &caps).unwrap();
        assert!(check_strategy(&g, &fixed, Some(&ord)).is_winning);
        s.remove(&[1, 2, 4]);
        assert!(matches!(reduce_strategy(&g, &s, &ord, &caps), Err(Error::NotWinning(_))));
    }

    #[test]
    fn second_player_strategies() {
        let caps = Caps::default();
        // every first move leads to a position where the second player wins
        let g = game(5, &[(0, 1), (0, 2), (1, 3), (2, 4)]);
        let sol = solve_game(&g, &caps).unwrap();
        assert_eq!(sol.winner, Player::Second);
        assert_eq!(sol.strategy.plays(), vec![vec![1, 3], vec![2, 4]]);
        let r = check_strategy(&g, &sol.strategy, None);
        assert!(r.is_winning && r.is_reduced.is_none());
        assert!(g.reachable_topo().is_ok());
    }

    #[test]
    fn dump_is_indented() {
        let (g, s) = two_challenges();
        let d = s.dump(&g);
        assert!(d.contains("x\n  m1\n    u2\n  m2\n    u1\n"));
    }

    fn random_dag(seed: u64, n: usize) -> PositionalGame {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(0.35) {
                    edges.push((a, b));
                }
            }
        }
        game(n, &edges)
    }

    fn brute_winner(g: &PositionalGame, p: Pos) -> bool {
        g.successors(p).iter().any(|&q| !brute_winner(g, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn solving_is_sound(seed in any::<u64>(), n in 1usize..10) {
            let caps = Caps::default();
            let g = random_dag(seed, n);
            let sol = solve_game(&g, &caps).unwrap();
            prop_assert_eq!(sol.winner == Player::First, brute_winner(&g, 0));
            let r = check_strategy(&g, &sol.strategy, None);
            prop_assert!(r.is_strategy && r.is_winning, "{:?}", r.problem);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
            let perm = PositionOrder::shuffled(n, &mut rng);
            let perm: Vec<Pos> = (0..n).map(|p| perm.rank(p)).collect();
            prop_assert_eq!(winner(&g.permuted(&perm)).unwrap(), sol.winner);
        }

        #[test]
        fn reduction_is_reduced_and_winning(seed in any::<u64>(), n in 1usize..10, salt in any::<u64>()) {
            let caps = Caps::default();
            let g = random_dag(seed, n);
            let sol = solve_game(&g, &caps).unwrap();
            prop_assume!(sol.winner == Player::First);
            let mut rng = ChaCha8Rng::seed_from_u64(salt);
            for _ in 0..3 {
                let ord = PositionOrder::shuffled(n, &mut rng);
                let red = reduce_strategy(&g, &sol.strategy, &ord, &caps).unwrap();
                let r = check_strategy(&g, &red, Some(&ord));
                prop_assert!(r.is_winning, "{:?}", r.problem);
                prop_assert_eq!(r.is_reduced, Some(true));
                prop_assert_eq!(r.splice_closed, Some(true));
            }
        }
    }
}
