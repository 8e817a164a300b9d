//! Circuit and cocircuit games on a rooted tree of presentations, witnesses
//! for the orthogonality partition axiom, and the analysis of Sarah's
//! strategies.

use std::collections::{BTreeMap, BTreeSet};

use crate::caps::Caps;
use crate::edge::{check_disjoint, show_set, EdgeId, EdgeSet, Ground};
use crate::error::{Error, Result};
use crate::game::{check_strategy, Player, Pos, PositionOrder, PositionalGame, Strategy};
use crate::linalg::{self, Row};
use crate::subspace::Subspace;
use crate::tree::{decompose, Agreement, Kind, PreVector, TreeOfPresentations};
use crate::vector::SparseVec;

/// A tree with a partition `E = P ∪ Q ∪ {e}` of its real edges, rooted at
/// the node holding `e`.
#[derive(Clone, Debug)]
pub struct O2Instance {
    pub tree: TreeOfPresentations,
    pub e: EdgeId,
    pub p: EdgeSet,
    pub q: EdgeSet,
    pub root: usize,
}

impl O2Instance {
    pub fn new(tree: TreeOfPresentations, e: EdgeId, p: EdgeSet, q: EdgeSet) -> Result<Self> {
        let real = tree.real_edges();
        let root = tree
            .owner(&e)
            .ok_or_else(|| Error::InvalidInstance(format!("`{e}` is not a real edge")))?;
        let single: EdgeSet = [e.clone()].into();
        check_disjoint(&[&p, &q, &single])?;
        let covered = p.len() + q.len() + 1;
        for x in p.iter().chain(&q) {
            if !real.contains(x) {
                return Err(Error::InvalidInstance(format!("`{x}` is not a real edge")));
            }
        }
        if covered != real.len() {
            return Err(Error::InvalidInstance(format!(
                "P, Q and e must cover all {} real edges",
                real.len()
            )));
        }
        Ok(O2Instance { tree, e, p, q, root })
    }

    /// `Q` is everything outside `P + e`.
    pub fn with_p(tree: TreeOfPresentations, e: EdgeId, p: EdgeSet) -> Result<Self> {
        let q = tree
            .real_edges()
            .to_set()
            .into_iter()
            .filter(|x| *x != e && !p.contains(x))
            .collect();
        Self::new(tree, e, p, q)
    }

    /// Every partition of the real edges, `e` in ground order, then `P` by
    /// mask.
    pub fn all(tree: &TreeOfPresentations) -> Vec<O2Instance> {
        let real = tree.real_edges();
        let n = real.len();
        let mut out = Vec::new();
        for i in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            for m in 0u64..(1u64 << rest.len()) {
                let p = rest
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| m >> k & 1 == 1)
                    .map(|(_, &j)| real.get(j).clone())
                    .collect();
                out.push(O2Instance::with_p(tree.clone(), real.get(i).clone(), p).unwrap());
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        format!("e={} P={} Q={}", self.e, show_set(&self.p), show_set(&self.q))
    }
}

/// A position of a circuit game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GamePos {
    Start,
    /// A node and a local member avoiding the forbidden side.
    Node { t: usize, v: SparseVec },
    /// A tree edge directed away from the root and a functional on it.
    Edge { t: usize, u: usize, w: SparseVec },
}

#[derive(Clone, Debug)]
pub struct CircuitGame {
    pub game: PositionalGame,
    pub positions: Vec<GamePos>,
    /// Whether this is the cocircuit game, where Colin moves first.
    pub dual: bool,
}

impl CircuitGame {
    pub fn sarah(&self) -> Player {
        if self.dual {
            Player::Second
        } else {
            Player::First
        }
    }

    pub fn colin(&self) -> Player {
        self.sarah().other()
    }
}

/// Builds the circuit game, or with `dual` the cocircuit game: covectors,
/// `P` and `Q` swapped, and Colin moving first. With `projective` Colin's
/// functionals are taken up to nonzero scalars.
pub fn build_circuit_game(inst: &O2Instance, dual: bool, projective: bool, caps: &Caps) -> Result<CircuitGame> {
    let tree = &inst.tree;
    let f = tree.field();
    if !f.is_finite() {
        return Err(Error::InfiniteField(
            "game positions would be infinite; use o2_witness instead".into(),
        ));
    }
    let avoid = if dual { &inst.p } else { &inst.q };
    let (parent, order) = tree.rooted(inst.root);
    let mut game = PositionalGame::new("a");
    let mut positions = vec![GamePos::Start];
    let budget = |game: &PositionalGame| -> Result<()> {
        if game.len() as u64 > caps.game_positions {
            Err(Error::cap("game positions", game.len() as u64, caps.game_positions))
        } else {
            Ok(())
        }
    };
    // X positions per node: members with no support on the forbidden side
    let mut xs: Vec<Vec<(Pos, Row)>> = vec![Vec::new(); tree.len()];
    for &t in &order {
        let pres = tree.presentation(t);
        let g = pres.ground();
        let space = if dual { pres.covectors() } else { pres.vectors() };
        let local = space.vanishing_mask(g.mask_lossy(avoid));
        for r in local.members_dense(false, caps.enumeration)? {
            if r.iter().all(|x| f.is_zero(x)) {
                continue;
            }
            let v = SparseVec::from_dense(f, g, &r);
            let id = game.add_position(format!("({}, {})", tree.label(t), v));
            positions.push(GamePos::Node { t, v });
            xs[t].push((id, r));
        }
        budget(&game)?;
    }
    let root_g = tree.presentation(inst.root).ground();
    let ie = root_g.position(&inst.e).unwrap();
    for (id, r) in &xs[inst.root] {
        if !f.is_zero(&r[ie]) {
            game.add_edge(0, *id)?;
        }
    }
    for &u in &order {
        let Some(t) = parent[u] else { continue };
        let eg = Ground::new(tree.presentation(t).ground().ordered(&tree.shared_between(t, u))?)?;
        let full = Subspace::full(f, eg.clone());
        let ws = full.members_dense(projective, caps.enumeration)?;
        let pos_t: Vec<usize> = eg.ids().iter().map(|e| tree.presentation(t).ground().position(e).unwrap()).collect();
        let pos_u: Vec<usize> = eg.ids().iter().map(|e| tree.presentation(u).ground().position(e).unwrap()).collect();
        let pair = |r: &Row, pos: &[usize], w: &Row| -> bool {
            let restricted: Row = pos.iter().map(|&i| r[i].clone()).collect();
            !f.is_zero(&linalg::dot(f, &restricted, w))
        };
        for w in ws {
            if w.iter().all(|x| f.is_zero(x)) {
                continue;
            }
            let wv = SparseVec::from_dense(f, &eg, &w);
            let id = game.add_position(format!("({}{}, {})", tree.label(t), tree.label(u), wv));
            positions.push(GamePos::Edge { t, u, w: wv });
            for (x, r) in &xs[t] {
                if pair(r, &pos_t, &w) {
                    game.add_edge(*x, id)?;
                }
            }
            for (x, r) in &xs[u] {
                if pair(r, &pos_u, &w) {
                    game.add_edge(id, *x)?;
                }
            }
            budget(&game)?;
        }
    }
    Ok(CircuitGame { game, positions, dual })
}

/// A pre-vector through `e` inside `P + e`, or a pre-covector through `e`
/// inside `Q + e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct O2Witness {
    pub kind: Kind,
    pub carrier: PreVector,
}

impl O2Witness {
    pub fn validate(&self, inst: &O2Instance) -> Result<()> {
        self.carrier.validate(&inst.tree)?;
        let supp = self.carrier.support(&inst.tree);
        let side = match self.kind {
            Kind::Vector => &inst.p,
            Kind::Covector => &inst.q,
        };
        if !supp.contains(&inst.e) || supp.iter().any(|x| *x != inst.e && !side.contains(x)) {
            return Err(Error::Invariant(format!("witness support {} out of place", show_set(&supp))));
        }
        Ok(())
    }
}

/// Finds the witness by solving in the agreement space of the locally
/// restricted spaces. Works over every supported field.
pub fn o2_witness(inst: &O2Instance) -> Result<O2Witness> {
    for kind in [Kind::Vector, Kind::Covector] {
        if let Some(carrier) = side_witness(inst, kind) {
            let w = O2Witness { kind, carrier };
            w.validate(inst)?;
            return Ok(w);
        }
    }
    Err(Error::Invariant(format!("no witness for {}", inst.describe())))
}

fn side_witness(inst: &O2Instance, kind: Kind) -> Option<PreVector> {
    let tree = &inst.tree;
    let f = tree.field();
    let avoid = match kind {
        Kind::Vector => &inst.q,
        Kind::Covector => &inst.p,
    };
    let spaces: Vec<Subspace> = tree
        .presentations()
        .iter()
        .map(|p| {
            let s = match kind {
                Kind::Vector => p.vectors(),
                Kind::Covector => p.covectors(),
            };
            s.vanishing_mask(p.ground().mask_lossy(avoid))
        })
        .collect();
    let agree = Agreement::new(tree, spaces, kind);
    let ie = tree.real_edges().position(&inst.e).unwrap();
    let locals = agree.solve_underlying(&[(ie, f.one())])?;
    decompose(tree, &locals, kind)
        .into_iter()
        .find(|p| p.nodes.contains(&inst.root) && !f.is_zero(&p.local_at(inst.root).unwrap().get(&inst.e)))
}

/// Per tree edge, the largest number of distinct continuations into the
/// child seen after one of Sarah's histories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBound {
    pub t: usize,
    pub u: usize,
    pub limit: usize,
    pub max_continuations: usize,
}

#[derive(Clone, Debug)]
pub struct SigmaReport {
    /// Nodes where Sarah moves in some play of the strategy.
    pub subtree: Vec<usize>,
    pub reduced: bool,
    pub bounds: Vec<EdgeBound>,
    /// Sarah histories (as positions) with too many continuations into `u`.
    pub violations: Vec<(Vec<Pos>, usize, usize)>,
}

/// Extracts the subtree used by a winning strategy of Sarah in the circuit
/// game and checks the bound of at most `|E(tu)|` continuations.
pub fn sigma_analysis(
    inst: &O2Instance,
    cg: &CircuitGame,
    sigma: &Strategy,
    ord: &PositionOrder,
) -> Result<SigmaReport> {
    if cg.dual || sigma.player() != Player::First {
        return Err(Error::InvalidGame("expects Sarah's strategy in the circuit game".into()));
    }
    let report = check_strategy(&cg.game, sigma, Some(ord));
    if !report.is_winning {
        let why = report.problem.map(|(m, _)| m).unwrap_or_default();
        return Err(Error::NotWinning(why));
    }
    let node_of = |p: Pos| match &cg.positions[p] {
        GamePos::Node { t, .. } => *t,
        _ => unreachable!("Sarah only moves to node positions"),
    };
    let mut subtree = BTreeSet::new();
    // Sarah's history -> set of next Sarah moves
    let mut ext: BTreeMap<Vec<Pos>, BTreeSet<Pos>> = BTreeMap::new();
    for play in sigma.plays() {
        let hat: Vec<Pos> = play.iter().step_by(2).copied().collect();
        subtree.extend(hat.iter().map(|&p| node_of(p)));
        if hat.len() >= 2 {
            ext.entry(hat[..hat.len() - 1].to_vec())
                .or_default()
                .insert(*hat.last().unwrap());
        }
    }
    let tree = &inst.tree;
    let mut bounds: BTreeMap<(usize, usize), EdgeBound> = BTreeMap::new();
    let (parent, _) = tree.rooted(inst.root);
    for u in 0..tree.len() {
        if let Some(t) = parent[u] {
            bounds.insert(
                (t, u),
                EdgeBound { t, u, limit: tree.shared_between(t, u).len(), max_continuations: 0 },
            );
        }
    }
    let mut violations = Vec::new();
    for (hist, nexts) in &ext {
        let t = node_of(*hist.last().unwrap());
        let mut per_child: BTreeMap<usize, usize> = BTreeMap::new();
        for &x in nexts {
            *per_child.entry(node_of(x)).or_default() += 1;
        }
        for (u, c) in per_child {
            let b = bounds.get_mut(&(t, u)).expect("moves follow tree edges");
            b.max_continuations = b.max_continuations.max(c);
            if c > b.limit {
                violations.push((hist.clone(), u, c));
            }
        }
    }
    Ok(SigmaReport {
        subtree: subtree.into_iter().collect(),
        reduced: report.is_reduced == Some(true),
        bounds: bounds.into_values().collect(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::edge_set;
    use crate::field::FieldSpec;
    use crate::fixtures;
    use crate::game::{reduce_strategy, solve_game, winner};

    fn inst(tree: TreeOfPresentations, e: &str, p: &[&str]) -> O2Instance {
        O2Instance::with_p(tree, EdgeId::from(e), edge_set(p.iter().copied())).unwrap()
    }

    #[test]
    fn twosum_witnesses() {
        let i = inst(fixtures::twosum(), "a", &["b", "c", "d"]);
        let w = o2_witness(&i).unwrap();
        assert_eq!(w.kind, Kind::Vector);
        assert_eq!(w.carrier.support(&i.tree), edge_set(["a", "b", "c", "d"]));
        let i = inst(fixtures::twosum(), "a", &[]);
        let w = o2_witness(&i).unwrap();
        assert_eq!(w.kind, Kind::Covector);
        let single = TreeOfPresentations::new(vec!["1".into()], vec![fixtures::tri()], vec![]).unwrap();
        let i = O2Instance::new(single, "a".into(), edge_set(["c"]), edge_set(["b"])).unwrap();
        let w = o2_witness(&i).unwrap();
        assert_eq!(w.kind, Kind::Covector);
        assert_eq!(w.carrier.support(&i.tree), edge_set(["a", "b"]));
    }

    #[test]
    fn twosum_games() {
        let caps = Caps::default();
        let i = inst(fixtures::twosum(), "a", &["b", "c", "d"]);
        let cg = build_circuit_game(&i, false, true, &caps).unwrap();
        assert_eq!(winner(&cg.game).unwrap(), cg.sarah());
        let i = inst(fixtures::twosum(), "a", &[]);
        let cg = build_circuit_game(&i, false, true, &caps).unwrap();
        assert_eq!(winner(&cg.game).unwrap(), cg.colin());
        let co = build_circuit_game(&i, true, true, &caps).unwrap();
        assert_eq!(winner(&co.game).unwrap(), co.colin());
        assert!(matches!(
            build_circuit_game(&inst(fixtures::twosum_in(FieldSpec::Rationals), "a", &[]), false, true, &caps),
            Err(Error::InfiniteField(_))
        ));
    }

    #[test]
    fn single_node_game() {
        let caps = Caps::default();
        let single = TreeOfPresentations::new(vec!["1".into()], vec![fixtures::tri()], vec![]).unwrap();
        let i = O2Instance::with_p(single, "a".into(), edge_set(["b", "c"])).unwrap();
        let cg = build_circuit_game(&i, false, true, &caps).unwrap();
        let sol = solve_game(&cg.game, &caps).unwrap();
        assert_eq!(sol.winner, Player::First);
        let r = sigma_analysis(&i, &cg, &sol.strategy, &PositionOrder::identity(cg.game.len())).unwrap();
        assert_eq!(r.subtree, vec![0]);
        assert!(r.bounds.is_empty());
    }

    #[test]
    fn projective_games_have_the_same_winner() {
        let caps = Caps::default();
        for tree in [fixtures::twosum_in(FieldSpec::GF3), fixtures::twosum()] {
            for i in O2Instance::all(&tree) {
                let a = build_circuit_game(&i, false, true, &caps).unwrap();
                let b = build_circuit_game(&i, false, false, &caps).unwrap();
                assert_eq!(winner(&a.game).unwrap(), winner(&b.game).unwrap());
            }
        }
    }

    #[test]
    fn reduction_restores_the_bound() {
        let caps = Caps::default();
        let i = inst(fixtures::twosum_in(FieldSpec::GF3), "a", &["b", "c", "d"]);
        let cg = build_circuit_game(&i, false, false, &caps).unwrap();
        let sol = solve_game(&cg.game, &caps).unwrap();
        assert_eq!(sol.winner, Player::First);
        // answer each functional on g with a differently scaled vector
        let mut sigma = Strategy::new(Player::First);
        let mut replies = BTreeMap::new();
        for play in sol.strategy.plays() {
            if play.len() == 3 {
                let GamePos::Edge { w, .. } = &cg.positions[play[1]] else { unreachable!() };
                let k = w.get(&EdgeId::from("g"));
                replies.insert(play[1], (play[0], k));
            } else {
                sigma.insert(&play).unwrap();
            }
        }
        for (&m, (first, k)) in &replies {
            let options: Vec<Pos> = cg.game.successors(m).to_vec();
            let pick = if *k == FieldSpec::GF3.one() { options[0] } else { *options.last().unwrap() };
            sigma.insert(&[*first, m, pick]).unwrap();
        }
        let ord = PositionOrder::identity(cg.game.len());
        let before = sigma_analysis(&i, &cg, &sigma, &ord).unwrap();
        assert!(!before.reduced);
        assert_eq!(before.violations.len(), 1);
        let red = reduce_strategy(&cg.game, &sigma, &ord, &caps).unwrap();
        let after = sigma_analysis(&i, &cg, &red, &ord).unwrap();
        assert!(after.reduced && after.violations.is_empty());
        assert_eq!(after.bounds[0].max_continuations, 1);
    }

    #[test]
    fn winner_matches_witness_on_twosum() {
        let caps = Caps::default();
        for i in O2Instance::all(&fixtures::twosum()) {
            let w = o2_witness(&i).unwrap();
            let cg = build_circuit_game(&i, false, true, &caps).unwrap();
            let co = build_circuit_game(&i, true, true, &caps).unwrap();
            let sarah = winner(&cg.game).unwrap() == cg.sarah();
            assert_eq!(sarah, w.kind == Kind::Vector, "{}", i.describe());
            assert_eq!(!sarah, winner(&co.game).unwrap() == co.colin(), "{}", i.describe());
        }
    }
}
