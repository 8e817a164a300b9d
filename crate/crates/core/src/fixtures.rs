//! Small named instances and seeded random generators used by tests, the
//! acceptance suite, benches and the CLI.

use rand::Rng;

use crate::edge::{EdgeId, Ground};
use crate::field::FieldSpec;
use crate::graph::{Graph, TreeDecomposition};
use crate::presentation::Presentation;
use crate::subspace::Subspace;
use crate::tree::{cex_center, TreeOfPresentations};
use crate::vector::SparseVec;

fn gens(f: FieldSpec, rows: &[&[(&str, i64)]]) -> Vec<SparseVec> {
    rows.iter().map(|r| SparseVec::from_ints(f, r)).collect()
}

/// Triangle over GF(2) on `(a, b, c)`.
pub fn tri() -> Presentation {
    tri_on(&["a", "b", "c"])
}

/// Triangle over GF(2) on the given three names.
pub fn tri_on(names: &[&str; 3]) -> Presentation {
    tri_in(FieldSpec::GF2, names)
}

pub fn tri_in(f: FieldSpec, names: &[&str; 3]) -> Presentation {
    let g = Ground::from_names(names).unwrap();
    let v = SparseVec::from_ints(f, &[(names[0], 1), (names[1], 1), (names[2], -1)]);
    Presentation::new(f, &g, &[v], None).unwrap()
}

/// Oriented triangle over the rationals.
pub fn tri_q() -> Presentation {
    tri_in(FieldSpec::Rationals, &["a", "b", "c"])
}

/// Cycle space of `K4` on vertices 1..4 with edges `ij`.
pub fn k4(f: FieldSpec) -> Presentation {
    let g = Ground::from_names(&["12", "13", "14", "23", "24", "34"]).unwrap();
    let cycles = gens(
        f,
        &[
            &[("12", 1), ("23", 1), ("13", -1)],
            &[("12", 1), ("24", 1), ("14", -1)],
            &[("13", 1), ("34", 1), ("14", -1)],
        ],
    );
    Presentation::new(f, &g, &cycles, None).unwrap()
}

/// Uniform matroid `U(2,4)` over GF(3).
pub fn u24() -> Presentation {
    let f = FieldSpec::GF3;
    let g = Ground::from_names(&["a", "b", "c", "d"]).unwrap();
    let w = gens(f, &[&[("a", 1), ("c", 1), ("d", 1)], &[("b", 1), ("c", 1), ("d", 2)]]);
    Presentation::from_covectors(Subspace::span(f, &g, &w).unwrap())
}

/// Fano plane over GF(2), as the row space of a 3x7 matrix.
pub fn fano() -> Presentation {
    let f = FieldSpec::GF2;
    let names = ["1", "2", "3", "4", "5", "6", "7"];
    let g = Ground::from_names(&names).unwrap();
    let cols: [[i64; 3]; 7] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]];
    let rows: Vec<SparseVec> = (0..3)
        .map(|r| {
            let pairs: Vec<(&str, i64)> = names.iter().zip(&cols).map(|(n, c)| (*n, c[r])).collect();
            SparseVec::from_ints(f, &pairs)
        })
        .collect();
    Presentation::from_covectors(Subspace::span(f, &g, &rows).unwrap())
}

/// Two disjoint triangles over GF(2).
pub fn two_triangles() -> Presentation {
    let f = FieldSpec::GF2;
    let g = Ground::from_names(&["a", "b", "c", "d", "e", "h"]).unwrap();
    Presentation::new(f, &g, &gens(f, &[&[("a", 1), ("b", 1), ("c", 1)], &[("d", 1), ("e", 1), ("h", 1)]]), None)
        .unwrap()
}

fn four_cycle(f: FieldSpec, names: &[&str; 4]) -> Presentation {
    let g = Ground::from_names(names).unwrap();
    let pairs: Vec<(&str, i64)> = names.iter().map(|n| (*n, 1)).collect();
    Presentation::new(f, &g, &[SparseVec::from_ints(f, &pairs)], None).unwrap()
}

/// Two triangles on `{a,b,g}` and `{g,c,d}` sharing the dummy `g`.
pub fn twosum() -> TreeOfPresentations {
    twosum_in(FieldSpec::GF2)
}

pub fn twosum_in(f: FieldSpec) -> TreeOfPresentations {
    TreeOfPresentations::from_labeled(
        vec![
            ("1".into(), tri_in(f, &["a", "b", "g"])),
            ("2".into(), tri_in(f, &["g", "c", "d"])),
        ],
        &[("1", "2")],
    )
    .unwrap()
}

/// Triangle, 4-cycle, triangle chained on dummies `g1`, `g2`.
pub fn path3() -> TreeOfPresentations {
    let f = FieldSpec::GF2;
    TreeOfPresentations::from_labeled(
        vec![
            ("1".into(), tri_on(&["a", "b", "g1"])),
            ("2".into(), four_cycle(f, &["g1", "c", "d", "g2"])),
            ("3".into(), tri_on(&["g2", "e", "f"])),
        ],
        &[("1", "2"), ("2", "3")],
    )
    .unwrap()
}

/// Triangle on `{a,b,g}` with a leaf on `{g,x}` whose vector is `g + x`.
pub fn tri_leaf() -> TreeOfPresentations {
    let f = FieldSpec::GF2;
    let lg = Ground::from_names(&["g", "x"]).unwrap();
    let leaf = Presentation::new(f, &lg, &gens(f, &[&[("g", 1), ("x", 1)]]), None).unwrap();
    TreeOfPresentations::star("*", tri_on(&["a", "b", "g"]), vec![("leaf".into(), leaf)]).unwrap()
}

/// Named presentation fixtures.
pub fn presentations() -> Vec<(&'static str, Presentation)> {
    vec![
        ("TRI", tri()),
        ("TRI_Q", tri_q()),
        ("K4", k4(FieldSpec::GF2)),
        ("K4_GF3", k4(FieldSpec::GF3)),
        ("K4_Q", k4(FieldSpec::Rationals)),
        ("U24", u24()),
        ("FANO", fano()),
        ("TWO_TRI", two_triangles()),
        ("C4", four_cycle(FieldSpec::GF2, &["a", "b", "c", "d"])),
        ("CEX_CENTER3", cex_center(3, FieldSpec::GF2).unwrap().0),
    ]
}

/// Named tree fixtures.
pub fn trees() -> Vec<(&'static str, TreeOfPresentations)> {
    vec![
        ("TWOSUM", twosum()),
        ("TWOSUM_GF3", twosum_in(FieldSpec::GF3)),
        ("TWOSUM_Q", twosum_in(FieldSpec::Rationals)),
        ("PATH3", path3()),
        ("TRI_LEAF", tri_leaf()),
    ]
}

/// `K4` in two parts. `K4` has no 2-separator, so the second part is the
/// single edge `23` and both torsos gain one dummy between 2 and 3.
pub fn k4_split() -> (Graph, TreeDecomposition) {
    let g = Graph::complete(4);
    let parts = vec![[0, 1, 2, 3].into(), [1, 2].into()];
    let edge_part = g.edges().iter().map(|e| usize::from(e.id.as_str() == "23")).collect();
    let td = TreeDecomposition::new(&g, vec!["s".into(), "t".into()], vec![(0, 1)], parts, edge_part).unwrap();
    (g, td)
}

/// Three triangles chained at cut vertices, one part each.
pub fn triangle_path() -> (Graph, TreeDecomposition) {
    let g = Graph::from_names(
        &["1", "2", "3", "4", "5", "6", "7"],
        &[
            ("a", "1", "2"),
            ("b", "2", "3"),
            ("c", "1", "3"),
            ("d", "3", "4"),
            ("f", "4", "5"),
            ("h", "3", "5"),
            ("i", "5", "6"),
            ("j", "6", "7"),
            ("k", "5", "7"),
        ],
    )
    .unwrap();
    let td = TreeDecomposition::new(
        &g,
        vec!["1".into(), "2".into(), "3".into()],
        vec![(0, 1), (1, 2)],
        vec![[0, 1, 2].into(), [2, 3, 4].into(), [4, 5, 6].into()],
        vec![0, 0, 0, 1, 1, 1, 2, 2, 2],
    )
    .unwrap();
    (g, td)
}

/// A random subspace of `k^E` spanned by up to `|E|` random vectors.
pub fn random_subspace<R: Rng>(f: FieldSpec, ground: &Ground, rng: &mut R) -> Subspace {
    let n = ground.len();
    let k = rng.gen_range(0..=n);
    let gens: Vec<SparseVec> = (0..k)
        .map(|_| {
            SparseVec::from_pairs(
                f,
                ground.ids().iter().map(|e| (e.clone(), random_scalar(f, rng))),
            )
        })
        .collect();
    Subspace::span(f, ground, &gens).unwrap()
}

fn random_scalar<R: Rng>(f: FieldSpec, rng: &mut R) -> crate::field::Scalar {
    match f.order() {
        Some(p) => f.from_i64(rng.gen_range(0..p as i64)),
        // small integers keep rational arithmetic cheap
        None => f.from_i64(rng.gen_range(-2..=2)),
    }
}

pub fn random_presentation<R: Rng>(f: FieldSpec, n: usize, rng: &mut R) -> Presentation {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let g = Ground::new(names).unwrap();
    Presentation::from_vectors(random_subspace(f, &g, rng))
}

/// A random tree of presentations on the given shape. Each tree edge gets
/// one or two dummies; remaining ground slots up to `max_ground` per node
/// become real edges.
pub fn random_tree<R: Rng>(
    f: FieldSpec,
    shape: &[(usize, usize)],
    max_ground: usize,
    rng: &mut R,
) -> TreeOfPresentations {
    let n = shape.len() + 1;
    let mut grounds: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for (k, &(a, b)) in shape.iter().enumerate() {
        let room = max_ground.saturating_sub(grounds[a].len().max(grounds[b].len()));
        let s = rng.gen_range(1..=2.min(room.max(1)));
        for j in 0..s {
            let d = EdgeId::from(format!("d{k}{}", (b'a' + j as u8) as char));
            grounds[a].push(d.clone());
            grounds[b].push(d);
        }
    }
    for (t, g) in grounds.iter_mut().enumerate() {
        let extra = rng.gen_range(0..=max_ground.saturating_sub(g.len()));
        for j in 0..extra {
            g.push(EdgeId::from(format!("x{t}{}", (b'a' + j as u8) as char)));
        }
    }
    let nodes = grounds
        .into_iter()
        .map(|ids| {
            let g = Ground::new(ids).unwrap();
            Presentation::from_vectors(random_subspace(f, &g, rng))
        })
        .collect();
    TreeOfPresentations::new((0..n).map(|i| format!("{}", i + 1)).collect(), nodes, shape.to_vec()).unwrap()
}

/// Edge lists of every tree shape on 1 to 4 nodes, up to isomorphism.
pub fn small_tree_shapes() -> Vec<Vec<(usize, usize)>> {
    vec![
        vec![],
        vec![(0, 1)],
        vec![(0, 1), (1, 2)],
        vec![(0, 1), (1, 2), (2, 3)],
        vec![(0, 1), (0, 2), (0, 3)],
    ]
}
