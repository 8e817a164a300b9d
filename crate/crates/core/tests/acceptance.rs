//! End-to-end acceptance checks. Runs without the test harness and prints
//! one PASS/FAIL line per criterion.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treepres::axioms::{presented_matroid, Axiom, SetSystemPair};
use treepres::base::{build_base, im_star, verify_im_star, StarBaseInput};
use treepres::edge::{bits, Mask};
use treepres::fixtures;
use treepres::game::{check_strategy, reduce_strategy, solve_game, Player, PositionOrder};
use treepres::graph::{
    build_graph_game, connected_graphs, Graph, GraphSystems, TreeDecomposition,
};
use treepres::o2::{build_circuit_game, o2_witness, sigma_analysis, O2Instance};
use treepres::tree::{enumerate_prevectors, gen_cex};
use treepres::{
    glue, Caps, EdgeId, EdgeSet, FieldSpec, Ground, Kind, Presentation, SparseVec, Subspace,
    TreeOfPresentations,
};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// Oracles. These only use span, vanishing and projection of subspaces, never
// the support or game machinery under test.

fn set_of(g: &Ground, m: Mask) -> EdgeSet {
    g.set_of(m)
}

/// Some member of `u` vanishing outside `allowed` is nonzero at `e`.
fn reaches(u: &Subspace, allowed: Mask, e: usize) -> bool {
    let g = u.ground();
    let outside = set_of(g, g.full() & !allowed);
    let inside = u.vanishing_on(&outside).unwrap();
    let id = g.get(e);
    inside.basis().iter().any(|b| !u.field().is_zero(&b.get(id)))
}

/// Direct O2 sweep over every partition `E = P + Q + e`.
fn o2_oracle(v: &Subspace, w: &Subspace) -> Option<(usize, Mask)> {
    let n = v.ground().len();
    let full = v.ground().full();
    for e in 0..n {
        let rest = full & !(1 << e);
        let mut p = rest;
        loop {
            let q = rest & !p;
            if !reaches(v, p | 1 << e, e) && !reaches(w, q | 1 << e, e) {
                return Some((e, p));
            }
            if p == 0 {
                break;
            }
            p = (p - 1) & rest;
        }
    }
    None
}

/// Minimal nonempty sets `S` carrying a nonzero member of `u` inside `S`.
fn support_oracle(u: &Subspace) -> Vec<EdgeSet> {
    let g = u.ground();
    let n = g.len();
    let mut carrying: Vec<Mask> = (1..1u64 << n)
        .filter(|&s| {
            let outside = set_of(g, g.full() & !s);
            !u.vanishing_on(&outside).unwrap().is_zero()
        })
        .collect();
    carrying.sort_by_key(|m| m.count_ones());
    let mut min: Vec<Mask> = Vec::new();
    for s in carrying {
        if !min.iter().any(|&m| m & s == m) {
            min.push(s);
        }
    }
    let mut out: Vec<EdgeSet> = min.into_iter().map(|m| set_of(g, m)).collect();
    out.sort();
    out
}

fn sorted(mut v: Vec<EdgeSet>) -> Vec<EdgeSet> {
    v.sort();
    v
}

/// Glue over GF(2) by brute force: every tuple of local members that agrees
/// on each tree edge contributes its real part.
fn glue_oracle(tree: &TreeOfPresentations, kind: Kind) -> Subspace {
    let caps = Caps::default();
    let f = tree.field();
    assert_eq!(f, FieldSpec::GF2);
    let locals: Vec<Vec<SparseVec>> = tree
        .presentations()
        .iter()
        .map(|p| match kind {
            Kind::Vector => p.vectors().members(&caps).unwrap(),
            Kind::Covector => p.covectors().members(&caps).unwrap(),
        })
        .collect();
    let real = tree.real_edges().clone();
    let mut gens = Vec::new();
    let mut idx = vec![0usize; tree.len()];
    loop {
        let ok = tree.edges().iter().enumerate().all(|(k, &(a, b))| {
            tree.shared(k)
                .iter()
                .all(|d| locals[a][idx[a]].get(d) == locals[b][idx[b]].get(d))
        });
        if ok {
            let pairs: Vec<(EdgeId, treepres::Scalar)> = (0..tree.len())
                .flat_map(|t| {
                    locals[t][idx[t]]
                        .entries()
                        .filter(|(e, _)| real.contains(e))
                        .map(|(e, x)| (e.clone(), x.clone()))
                        .collect::<Vec<_>>()
                })
                .collect();
            gens.push(SparseVec::from_pairs(f, pairs));
        }
        // odometer
        let mut t = 0;
        loop {
            if t == idx.len() {
                return Subspace::span(f, &real, &gens).unwrap();
            }
            idx[t] += 1;
            if idx[t] < locals[t].len() {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
    }
}

/// `{u|F : u ∈ U, u vanishes on Z}`.
fn section(u: &Subspace, zero: &EdgeSet, f: &EdgeSet) -> Subspace {
    u.vanishing_on(zero).unwrap().contract(f).unwrap()
}

fn minus(a: &EdgeSet, b: &EdgeSet) -> EdgeSet {
    a.difference(b).cloned().collect()
}

fn union(a: &EdgeSet, b: &EdgeSet) -> EdgeSet {
    a.union(b).cloned().collect()
}

fn random_subset<R: Rng>(from: &EdgeSet, p: f64, rng: &mut R) -> EdgeSet {
    from.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}

/// Even-degree edge sets of a graph.
fn even_masks(g: &Graph) -> Vec<Mask> {
    let m = g.edge_count();
    let ends: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v))
        .collect();
    (0..1u64 << m)
        .filter(|&s| {
            let mut parity = 0u64;
            for i in bits(s) {
                parity ^= 1 << ends[i].0;
                parity ^= 1 << ends[i].1;
            }
            parity == 0
        })
        .collect()
}

/// Edge cuts `δ(S)` over all vertex sets `S`.
fn cut_masks(g: &Graph) -> Vec<Mask> {
    let ends: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v))
        .collect();
    let mut out: Vec<Mask> = (0..1u64 << g.vertex_count())
        .map(|s| {
            ends.iter()
                .enumerate()
                .filter(|(_, &(a, b))| (s >> a & 1) != (s >> b & 1))
                .fold(0, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn minimal(sets: &[Mask]) -> Vec<Mask> {
    let mut v: Vec<Mask> = sets.iter().copied().filter(|&m| m != 0).collect();
    v.sort_by_key(|m| (m.count_ones(), *m));
    let mut out: Vec<Mask> = Vec::new();
    for s in v {
        if !out.iter().any(|&m| m & s == m) {
            out.push(s);
        }
    }
    out.sort_unstable();
    out
}

// ---------------------------------------------------------------------------

const FIELDS: [FieldSpec; 3] = [FieldSpec::GF2, FieldSpec::GF3, FieldSpec::Rationals];

fn complement_pairs_pass_o2() -> Check {
    let caps = Caps::default();
    let mut proper = 0;
    for i in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
        let f = FIELDS[i as usize % 3];
        let n = rng.gen_range(1..=8);
        let g = Ground::new((0..n).map(|k| format!("e{k}"))).map_err(err)?;
        let v = fixtures::random_subspace(f, &g, &mut rng);
        let w = v.complement();
        let pres = Presentation::from_pair(v.clone(), w.clone()).map_err(err)?;
        let sys = SetSystemPair::from_presentation(&pres, &caps).map_err(err)?;
        let verdict = sys.check(Axiom::O2, &caps, 0).map_err(err)?;
        ensure!(verdict.holds, "pair {i} over {f}: O2 fails at {:?}", verdict.witness);
        ensure!(o2_oracle(&v, &w).is_none(), "pair {i}: oracle finds an uncovered partition");
        ensure!(
            sorted(sys.cee()) == support_oracle(&v) && sorted(sys.dee()) == support_oracle(&w),
            "pair {i}: minimal supports differ from the oracle"
        );

        // shrink one side to a proper subspace of the complement of the other
        let (v2, w2) = if w.dim() > 0 {
            let mut b = w.basis();
            b.remove(rng.gen_range(0..b.len()));
            (v.clone(), Subspace::span(f, &g, &b).map_err(err)?)
        } else {
            let mut b = v.basis();
            b.remove(rng.gen_range(0..b.len()));
            (Subspace::span(f, &g, &b).map_err(err)?, w.clone())
        };
        ensure!(v2.is_orthogonal_to(&w2).map_err(err)?, "pair {i}: shrunk pair not orthogonal");
        let bad = SetSystemPair::new(
            g.clone(),
            &v2.min_supports(&caps).map_err(err)?,
            &w2.min_supports(&caps).map_err(err)?,
        )
        .map_err(err)?;
        let verdict = bad.check(Axiom::O2, &caps, 0).map_err(err)?;
        ensure!(!verdict.holds, "pair {i}: proper orthogonal pair passes O2");
        ensure!(o2_oracle(&v2, &w2).is_some(), "pair {i}: oracle misses the failure");
        proper += 1;
    }
    Ok(format!("200 complement pairs pass, {proper} proper pairs fail"))
}

fn fixture_presentations_are_matroids() -> Check {
    let caps = Caps::default();
    let mut names = Vec::new();
    for (name, p) in fixtures::presentations() {
        ensure!(p.ground().len() <= 10, "{name}: ground too large");
        let cert = presented_matroid(&p, &caps).map_err(err)?;
        let verdict = cert.verify(&caps).map_err(err)?;
        ensure!(verdict.valid, "{name}: {:?}", verdict.failure);
        ensure!(
            sorted(cert.circuits()) == support_oracle(p.vectors())
                && sorted(cert.cocircuits()) == support_oracle(p.covectors()),
            "{name}: circuits differ from the oracle"
        );
        let sys = SetSystemPair::from_presentation(&p, &caps).map_err(err)?;
        for ax in [Axiom::O1, Axiom::O2, Axiom::Tame] {
            let v = sys.check(ax, &caps, 0).map_err(err)?;
            ensure!(v.holds && v.exhaustive, "{name}: {} fails at {:?}", ax.name(), v.witness);
        }
        ensure!(o2_oracle(p.vectors(), p.covectors()).is_none(), "{name}: oracle O2 fails");
        names.push(name);
    }
    Ok(format!("{} fixtures", names.len()))
}

fn prevector_span_is_glue() -> Check {
    let caps = Caps::default();
    let f = FieldSpec::GF2;
    let mut count = 0;
    for (s, shape) in fixtures::small_tree_shapes().iter().enumerate() {
        for max_ground in 1..=4usize {
            for k in 0..50u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(((s as u64) << 16) | ((max_ground as u64) << 8) | k);
                let tree = fixtures::random_tree(f, shape, max_ground, &mut rng);
                let glued = glue(&tree).map_err(err)?;
                for kind in [Kind::Vector, Kind::Covector] {
                    let target = match kind {
                        Kind::Vector => glued.vectors(),
                        Kind::Covector => glued.covectors(),
                    };
                    let pre = enumerate_prevectors(&tree, kind, &caps).map_err(err)?;
                    for pv in &pre {
                        pv.validate(&tree).map_err(err)?;
                    }
                    let gens: Vec<SparseVec> = pre.iter().map(|p| p.underlying(&tree)).collect();
                    let span = Subspace::span(f, glued.ground(), &gens).map_err(err)?;
                    ensure!(span == *target, "shape {s}, seed {k}: {kind:?} span differs from glue");
                    let brute = glue_oracle(&tree, kind).embed(glued.ground()).map_err(err)?;
                    ensure!(brute == *target, "shape {s}, seed {k}: {kind:?} glue differs from oracle");
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} trees"))
}

fn fixture_trees_glue_to_matroids() -> Check {
    let caps = Caps::default();
    let mut roots = 0;
    for (name, tree) in fixtures::trees() {
        let glued = glue(&tree).map_err(err)?;
        let sys = SetSystemPair::from_presentation(&glued, &caps).map_err(err)?;
        for ax in [Axiom::O1, Axiom::O2, Axiom::Tame] {
            let v = sys.check(ax, &caps, 0).map_err(err)?;
            ensure!(v.holds, "{name}: {} fails at {:?}", ax.name(), v.witness);
        }
        ensure!(o2_oracle(glued.vectors(), glued.covectors()).is_none(), "{name}: oracle O2 fails");
        for root in 0..tree.len() {
            let cert = build_base(&tree, root, &caps).map_err(err)?;
            ensure!(cert.ok(), "{name} rooted at {}:\n{}", tree.label(root), cert.report(&tree));
            let b: EdgeSet = cert.x.clone();
            ensure!(
                glued.vectors().restrict(&b).map_err(err)?.is_zero()
                    && glued.covectors().restrict(&cert.y).map_err(err)?.is_zero()
                    && b.len() == glued.covectors().dim(),
                "{name}: X is not a base by the rank oracle"
            );
            roots += 1;
        }
    }
    Ok(format!("{roots} rooted fixtures certified"))
}

fn game_trees() -> Vec<(&'static str, TreeOfPresentations)> {
    vec![("TWOSUM", fixtures::twosum()), ("PATH3", fixtures::path3())]
}

fn games_match_witnesses() -> Check {
    let caps = Caps::default();
    let (mut sarah, mut colin) = (0, 0);
    for (name, tree) in game_trees() {
        let glued = glue(&tree).map_err(err)?;
        let g = glued.ground().clone();
        for inst in O2Instance::all(&tree) {
            let cg = build_circuit_game(&inst, false, false, &caps).map_err(err)?;
            let sarah_wins = solve_game(&cg.game, &caps).map_err(err)?.winner == cg.sarah();
            let dg = build_circuit_game(&inst, true, false, &caps).map_err(err)?;
            let colin_dual = solve_game(&dg.game, &caps).map_err(err)?.winner == dg.colin();
            let w = o2_witness(&inst).map_err(err)?;
            w.validate(&inst).map_err(err)?;
            let e = g.position(&inst.e).unwrap();
            let pm = g.mask(&inst.p).map_err(err)?;
            let oracle = reaches(glued.vectors(), pm | 1 << e, e);
            ensure!(
                sarah_wins == (w.kind == Kind::Vector) && sarah_wins == oracle,
                "{name} {}: Sarah wins {sarah_wins}, witness {:?}, oracle {oracle}",
                inst.describe(),
                w.kind
            );
            ensure!(
                !sarah_wins == colin_dual,
                "{name} {}: circuit and cocircuit games disagree",
                inst.describe()
            );
            if sarah_wins {
                sarah += 1;
            } else {
                colin += 1;
            }
        }
    }
    Ok(format!("{} partitions, Sarah {sarah}, Colin {colin}", sarah + colin))
}

fn strategies_reduce() -> Check {
    let caps = Caps::default();
    let mut runs = 0;
    for (name, tree) in game_trees() {
        for (i, inst) in O2Instance::all(&tree).into_iter().enumerate() {
            let cg = build_circuit_game(&inst, false, false, &caps).map_err(err)?;
            let sol = solve_game(&cg.game, &caps).map_err(err)?;
            if sol.winner != Player::First {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            let orders = [
                PositionOrder::identity(cg.game.len()),
                PositionOrder::shuffled(cg.game.len(), &mut rng),
            ];
            for ord in &orders {
                let red = reduce_strategy(&cg.game, &sol.strategy, ord, &caps).map_err(err)?;
                let rep = check_strategy(&cg.game, &red, Some(ord));
                ensure!(
                    rep.is_strategy && rep.is_winning,
                    "{name} {}: reduced strategy not winning: {:?}",
                    inst.describe(),
                    rep.problem
                );
                ensure!(rep.is_reduced == Some(true), "{name} {}: not reduced", inst.describe());
                ensure!(rep.splice_closed == Some(true), "{name} {}: splice fails", inst.describe());
                let sig = sigma_analysis(&inst, &cg, &red, ord).map_err(err)?;
                ensure!(
                    sig.reduced
                        && sig.violations.is_empty()
                        && sig.bounds.iter().all(|b| b.max_continuations <= b.limit),
                    "{name} {}: continuation bound exceeded",
                    inst.describe()
                );
                // the limit is the number of shared edges on the tree edge
                for b in &sig.bounds {
                    ensure!(
                        b.limit == tree.shared_between(b.t, b.u).len(),
                        "{name}: limit on {}-{} is not |E(tu)|",
                        tree.label(b.t),
                        tree.label(b.u)
                    );
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} reductions checked"))
}

fn postconditions_hold() -> Check {
    let pres: Vec<(&str, Presentation)> = fixtures::presentations()
        .into_iter()
        .filter(|(_, p)| p.ground().len() <= 8)
        .collect();

    // localisation
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (name, p) = &pres[seed as usize % pres.len()];
        let all = p.ground().to_set();
        let f = random_subset(&all, 0.35, &mut rng);
        let (pf, qf) = p.localize(&f).map_err(err)?;
        ensure!(
            pf.is_disjoint(&qf) && pf.is_disjoint(&f) && qf.is_disjoint(&f),
            "{name}: localised sets overlap"
        );
        let rest = minus(&all, &f);
        // vectors: contract P_F, delete Q_F; covectors the other way round
        for (u, del, con) in [(p.vectors(), &qf, &pf), (p.covectors(), &pf, &qf)] {
            let outside_con = minus(&all, &union(con, &f));
            ensure!(
                section(u, &outside_con, &f) == section(u, &rest, &f),
                "{name}, F={f:?}: restriction to F changed"
            );
            ensure!(
                section(u, del, &f) == u.contract(&f).map_err(err)?,
                "{name}, F={f:?}: contraction to F changed"
            );
        }
    }

    // independent shrinking
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + seed);
        let (name, p) = &pres[seed as usize % pres.len()];
        let all = p.ground().to_set();
        let f = random_subset(&all, 0.3, &mut rng);
        let pp = random_subset(&minus(&all, &f), 0.6, &mut rng);
        let shrunk = p.independent_shrink(&f, &pp).map_err(err)?;
        ensure!(shrunk.is_subset(&pp), "{name}: shrunk set leaves P");
        ensure!(
            p.vectors().restrict(&shrunk).map_err(err)?.is_zero(),
            "{name}: shrunk set {shrunk:?} is dependent"
        );
        let before = section(p.vectors(), &minus(&all, &union(&pp, &f)), &f);
        let after = section(p.vectors(), &minus(&all, &union(&shrunk, &f)), &f);
        ensure!(before == after, "{name}: (Π/P)↾F changed by shrinking");
    }

    // star extension
    let stars: Vec<(&str, TreeOfPresentations, usize)> = vec![
        ("TWOSUM", fixtures::twosum(), 0),
        ("TWOSUM", fixtures::twosum(), 1),
        ("PATH3", fixtures::path3(), 1),
        ("TRI_LEAF", fixtures::tri_leaf(), 0),
        ("TWOSUM_GF3", fixtures::twosum_in(FieldSpec::GF3), 0),
    ];
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
        let (name, star, center) = &stars[seed as usize % stars.len()];
        let glued = glue(star).map_err(err)?;
        let mut real: Vec<EdgeId> = star.real_edges().ids().to_vec();
        real.shuffle(&mut rng);
        let (mut x, mut y) = (EdgeSet::new(), EdgeSet::new());
        for e in real {
            let mut x2 = x.clone();
            x2.insert(e.clone());
            let mut y2 = y.clone();
            y2.insert(e.clone());
            match rng.gen_range(0..3) {
                0 if glued.is_independent(&x2).map_err(err)? => x = x2,
                1 if glued.is_coindependent(&y2).map_err(err)? => y = y2,
                _ => {}
            }
        }
        let inp = StarBaseInput { star: star.clone(), center: *center, x: x.clone(), y: y.clone() };
        let out = im_star(&inp).map_err(err)?;
        let b = verify_im_star(&inp, &out.x, &out.y).map_err(err)?;
        ensure!(b.all() && out.bullets.all(), "{name} seed {seed}: bullets {b:?}");
        let centre_real: EdgeSet = star
            .real_edges()
            .ids()
            .iter()
            .filter(|e| star.owner(e) == Some(*center))
            .cloned()
            .collect();
        ensure!(
            out.x.is_superset(&x)
                && out.y.is_superset(&y)
                && out.x.is_disjoint(&out.y)
                && centre_real.iter().all(|e| out.x.contains(e) || out.y.contains(e)),
            "{name} seed {seed}: X', Y' do not extend and cover"
        );
        ensure!(
            glued.vectors().restrict(&out.x).map_err(err)?.is_zero()
                && glued.covectors().restrict(&out.y).map_err(err)?.is_zero(),
            "{name} seed {seed}: X' dependent or Y' codependent"
        );
        for (space, sets, pairs) in [
            (glued.vectors(), &out.x, &b.spanning),
            (glued.covectors(), &out.y, &b.cospanning),
        ] {
            for (e, wit) in pairs {
                let wv = wit.as_ref().unwrap();
                let supp = wv.support();
                ensure!(
                    space.contains(wv).map_err(err)?
                        && supp.contains(e)
                        && supp.iter().all(|z| z == e || sets.contains(z)),
                    "{name} seed {seed}: bad spanning witness at {e}"
                );
            }
        }
    }
    Ok("300 runs".into())
}

/// Partitions per graph: all of them up to this many, else this many sampled.
const SWEEP: u64 = 256;

fn partitions(m: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, Mask)> {
    let per = 1u64 << (m - 1);
    let total = m as u64 * per;
    let pick = |idx: u64| {
        let e = (idx / per) as usize;
        let low = idx % per;
        // spread the bits of low over the edges other than e
        let rest: Vec<usize> = (0..m).filter(|&k| k != e).collect();
        let p = bits(low).fold(0, |a, j| a | 1 << rest[j]);
        (e, p)
    };
    if total <= SWEEP {
        (0..total).map(pick).collect()
    } else {
        let mut idx: Vec<u64> = Vec::new();
        while idx.len() < SWEEP as usize {
            let k = rng.gen_range(0..total);
            if let Err(pos) = idx.binary_search(&k) {
                idx.insert(pos, k);
            }
        }
        idx.into_iter().map(pick).collect()
    }
}

fn graph_pipeline() -> Check {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let graphs = connected_graphs(6);
    let (mut games, mut exhaustive) = (0usize, 0usize);
    for g in &graphs {
        let td = TreeDecomposition::random(g, &mut rng).map_err(err)?;
        let sys = GraphSystems::new(g, &td, &caps).map_err(err)?;
        let even = even_masks(g);
        let cuts = cut_masks(g);
        ensure!(sys.circuits == minimal(&even), "{}: circuits differ\n{}", g.show(), td.show(g));
        ensure!(sys.cocircuits == minimal(&cuts), "{}: bonds differ\n{}", g.show(), td.show(g));
        let m = g.edge_count();
        if m == 0 {
            continue;
        }
        let parts = partitions(m, &mut rng);
        if (m as u64) << (m - 1) <= SWEEP {
            exhaustive += 1;
        }
        let full = g.ground().full();
        for (ei, p) in parts {
            let q = full & !p & !(1 << ei);
            let gr = g.ground();
            let gg = build_graph_game(g, &td, gr.get(ei), &gr.set_of(p), &gr.set_of(q), &caps)
                .map_err(err)?;
            let sarah = solve_game(&gg.game, &caps).map_err(err)?.winner == Player::First;
            let allowed = p | 1 << ei;
            let cycle = even.iter().any(|&s| s >> ei & 1 == 1 && s & !allowed == 0);
            let co_allowed = q | 1 << ei;
            let bond = cuts.iter().any(|&s| s >> ei & 1 == 1 && s & !co_allowed == 0);
            ensure!(
                sarah == cycle && sarah == sys.circuit_witness(ei, p).is_some() && sarah != bond,
                "{}: e={} P={}: Sarah wins {sarah}, cycle {cycle}, bond {bond}",
                g.show(),
                gr.get(ei),
                gr.show(p)
            );
            games += 1;
        }
    }
    Ok(format!(
        "{} graphs, {games} games, {exhaustive} graphs swept exhaustively, the rest on {SWEEP} sampled partitions",
        graphs.len()
    ))
}

fn cex_grows() -> Check {
    let caps = Caps::default();
    let mut sizes = Vec::new();
    for n in 1..=5 {
        let inst = gen_cex(n, None, FieldSpec::GF2, &caps).map_err(err)?;
        inst.prevector.validate(&inst.tree).map_err(err)?;
        inst.precovector.validate(&inst.tree).map_err(err)?;
        let a = inst.prevector.support(&inst.tree);
        let b = inst.precovector.support(&inst.tree);
        let meet: EdgeSet = a.intersection(&b).cloned().collect();
        ensure!(meet == inst.intersection, "n={n}: reported intersection is not the support meet");
        ensure!(meet.len() >= 2 * n, "n={n}: intersection {} < {}", meet.len(), 2 * n);
        sizes.push(meet.len());
    }
    ensure!(sizes.windows(2).all(|w| w[0] < w[1]), "sizes not increasing: {sizes:?}");
    Ok(format!("sizes {sizes:?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("complement pairs and O2", complement_pairs_pass_o2),
        ("presented matroids", fixture_presentations_are_matroids),
        ("pre-vector span equals glue", prevector_span_is_glue),
        ("glued trees present matroids", fixture_trees_glue_to_matroids),
        ("games match witnesses", games_match_witnesses),
        ("strategy reduction", strategies_reduce),
        ("localise, shrink and star postconditions", postconditions_hold),
        ("graph pipeline", graph_pipeline),
        ("counterexample growth", cex_grows),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("criterion {} ({name}): PASS [{secs:.2}s] {msg}", i + 1),
            Err(msg) => {
                println!("criterion {} ({name}): FAIL [{secs:.2}s] {msg}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
