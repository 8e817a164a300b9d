//! The graph game on a tree decomposition against the circuit game on the
//! torso presentations.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treepres::edge::bits;
use treepres::fixtures;
use treepres::game::{solve_game, PositionalGame};
use treepres::graph::{build_graph_game, connected_graphs, td_to_presentations, Graph, TreeDecomposition};
use treepres::o2::{build_circuit_game, O2Instance};
use treepres::Caps;

/// Hash of the play tree unfolded from the start, blind to labels.
fn shape(game: &PositionalGame) -> u64 {
    let order = game.reachable_topo().unwrap();
    let mut h: HashMap<usize, u64> = HashMap::new();
    for &p in order.iter().rev() {
        let mut kids: Vec<u64> = game.successors(p).iter().map(|q| h[q]).collect();
        kids.sort_unstable();
        let mut s = DefaultHasher::new();
        kids.hash(&mut s);
        h.insert(p, s.finish());
    }
    h[&game.start()]
}

/// (partitions, partitions whose play trees have the same shape)
fn compare(g: &Graph, td: &TreeDecomposition) -> (usize, usize) {
    let caps = Caps::default();
    let tree = td_to_presentations(g, td).unwrap();
    let gr = g.ground();
    let m = g.edge_count();
    let (mut total, mut same_size) = (0, 0);
    for ei in 0..m {
        let rest: Vec<usize> = (0..m).filter(|&k| k != ei).collect();
        for low in 0u64..1 << rest.len() {
            let p = bits(low).fold(0, |a, j| a | 1 << rest[j]);
            let q = gr.full() & !p & !(1 << ei);
            let (e, ps, qs) = (gr.get(ei).clone(), gr.set_of(p), gr.set_of(q));
            let gg = build_graph_game(g, td, &e, &ps, &qs, &caps).unwrap();
            let inst = O2Instance::new(tree.clone(), e, ps, qs).unwrap();
            let cg = build_circuit_game(&inst, false, false, &caps).unwrap();
            let a = solve_game(&gg.game, &caps).unwrap().winner;
            let b = solve_game(&cg.game, &caps).unwrap().winner;
            assert_eq!(a == cg.sarah(), b == cg.sarah(), "{} {}", g.show(), inst.describe());
            total += 1;
            same_size += usize::from(shape(&gg.game) == shape(&cg.game));
        }
    }
    (total, same_size)
}

#[test]
fn fixture_decompositions_agree_with_circuit_games() {
    for (g, td) in [fixtures::k4_split(), fixtures::triangle_path()] {
        let (total, same) = compare(&g, &td);
        assert!(total > 0);
        assert_eq!(same, total);
    }
}

#[test]
fn random_decompositions_agree_with_circuit_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut total, mut same) = (0, 0);
    for g in connected_graphs(5).iter().filter(|g| g.edge_count() <= 7) {
        let td = TreeDecomposition::random(g, &mut rng).unwrap();
        let (t, s) = compare(g, &td);
        total += t;
        same += s;
    }
    println!("{same} of {total} partitions give play trees of the same shape");
    assert!(total > 0);
    assert_eq!(same, total);
}

mod props {
    use proptest::prelude::*;
    use treepres::edge::{bits, Mask};
    use treepres::graph::{minimal_nonempty, Graph, GraphSystems, TreeDecomposition};
    use treepres::Caps;

    fn cycles(g: &Graph) -> Vec<Mask> {
        let even: Vec<Mask> = (0..1u64 << g.edge_count())
            .filter(|&s| {
                let mut parity = 0u64;
                for k in bits(s) {
                    parity ^= 1 << g.edges()[k].u;
                    parity ^= 1 << g.edges()[k].v;
                }
                parity == 0
            })
            .collect();
        minimal_nonempty(&even)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn any_elimination_order_recovers_the_cycles(
            mask in 0u64..1 << 10,
            order in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(),
        ) {
            let g = Graph::from_pair_mask(5, mask);
            let td = TreeDecomposition::from_elimination(&g, &order).unwrap();
            let sys = GraphSystems::new(&g, &td, &Caps::default()).unwrap();
            prop_assert_eq!(sys.circuits, cycles(&g));
        }
    }
}
