//! Finite graphs with tree decompositions: torsos with dummy edges,
//! precircuits and precocircuits, the Sarah/Colin game on a decomposition,
//! and the bridge to GF(2) trees of presentations.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::caps::Caps;
use crate::edge::{bits, check_disjoint, EdgeId, EdgeSet, Ground, Mask, MAX_GROUND};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::game::PositionalGame;
use crate::par;
use crate::presentation::Presentation;
use crate::tree::TreeOfPresentations;
use crate::vector::SparseVec;

/// Connected-subtree enumeration works on node masks.
const MAX_TD_NODES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
}

/// A finite multigraph with named vertices and edges. Loops are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<GraphEdge>,
    ground: Ground,
}

fn bad_graph<T>(m: impl Into<String>) -> Result<T> {
    Err(Error::InvalidGraph(m.into()))
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<GraphEdge>) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if v.is_empty() {
                return bad_graph("empty vertex name");
            }
            if vertices[..i].contains(v) {
                return bad_graph(format!("duplicate vertex `{v}`"));
            }
        }
        for e in &edges {
            if e.u >= vertices.len() || e.v >= vertices.len() {
                return bad_graph(format!("edge `{}` has an endpoint out of range", e.id));
            }
        }
        let ground = Ground::new(edges.iter().map(|e| e.id.clone()))?;
        Ok(Graph { vertices, edges, ground })
    }

    /// Builds from vertex names and `(edge, end, end)` name triples.
    pub fn from_names(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let find = |n: &str| {
            vs.iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{n}`")))
        };
        let es = edges
            .iter()
            .map(|&(id, a, b)| {
                Ok(GraphEdge {
                    id: id.into(),
                    u: find(a)?,
                    v: find(b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Graph::new(vs, es)
    }

    /// Simple graph on vertices `1..=n` whose edge `ij` is present when bit
    /// `k` of `mask` is set, `k` running over pairs `i < j` in lexicographic
    /// order.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let vertices = (1..=n).map(|i| i.to_string()).collect();
        let edges = pairs(n)
            .into_iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, (i, j))| GraphEdge {
                id: pair_name(i, j).into(),
                u: i,
                v: j,
            })
            .collect();
        Graph::new(vertices, edges).expect("pair-mask graph")
    }

    pub fn complete(n: usize) -> Self {
        Self::from_pair_mask(n, (1u64 << (n * n.saturating_sub(1) / 2)) - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, e: &EdgeId) -> Option<usize> {
        self.ground.position(e)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let ends: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.u, e.v)).collect();
        let mut uf = UnionFind::new(n);
        for &(a, b) in &ends {
            uf.union(a, b);
        }
        (1..n).all(|v| uf.find(v) == uf.find(0))
    }

    /// Replaces each edge `e = uv` by a path `u - e~ - v` with edges `e.0`
    /// and `e.1`.
    pub fn subdivide(&self) -> Result<Graph> {
        let mut vertices = self.vertices.clone();
        let mut edges = Vec::with_capacity(2 * self.edges.len());
        for e in &self.edges {
            let m = vertices.len();
            vertices.push(format!("{}~", e.id));
            edges.push(GraphEdge {
                id: format!("{}.0", e.id).into(),
                u: e.u,
                v: m,
            });
            edges.push(GraphEdge {
                id: format!("{}.1", e.id).into(),
                u: m,
                v: e.v,
            });
        }
        Graph::new(vertices, edges)
    }

    fn multigraph(&self) -> MultiGraph {
        MultiGraph {
            n: self.vertices.len(),
            ends: self.edges.iter().map(|e| (e.u, e.v)).collect(),
        }
    }

    /// Cycle space over GF(2) as vectors, cut space as covectors.
    pub fn cycle_presentation(&self) -> Presentation {
        self.multigraph().presentation(&self.ground)
    }

    pub fn show(&self) -> String {
        let es: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{}={}{}", e.id, self.vertices[e.u], self.vertices[e.v]))
            .collect();
        format!("V={{{}}} E={{{}}}", self.vertices.join(","), es.join(","))
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

fn pair_name(i: usize, j: usize) -> String {
    if i < 9 && j < 9 {
        format!("{}{}", i + 1, j + 1)
    } else {
        format!("{}-{}", i + 1, j + 1)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if k == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(k + 1, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Every connected simple graph on `n` vertices, one per isomorphism class,
/// as pair masks in the layout of [`Graph::from_pair_mask`].
pub fn connected_graph_masks(n: usize) -> Vec<u64> {
    assert!(n <= 7, "at most 7 vertices");
    let ps = pairs(n);
    let index: HashMap<(usize, usize), usize> = ps.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let perms = permutations(n);
    let relabel = |m: u64, perm: &[usize]| {
        let mut out = 0u64;
        for k in bits(m) {
            let (i, j) = ps[k];
            let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
            out |= 1 << index[&(a, b)];
        }
        out
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in 0u64..(1u64 << ps.len()) {
        if seen.contains(&m) {
            continue;
        }
        let images: Vec<u64> = perms.iter().map(|p| relabel(m, p)).collect();
        seen.extend(images.iter().copied());
        if Graph::from_pair_mask(n, m).is_connected() {
            out.push(m);
        }
    }
    out
}

/// Connected simple graphs on `1..=max_n` vertices up to isomorphism.
pub fn connected_graphs(max_n: usize) -> Vec<Graph> {
    (1..=max_n)
        .flat_map(|n| connected_graph_masks(n).into_iter().map(move |m| Graph::from_pair_mask(n, m)))
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Multigraph on `0..n` with edges as index pairs; edge sets are masks.
#[derive(Clone, Debug)]
struct MultiGraph {
    n: usize,
    ends: Vec<(usize, usize)>,
}

impl MultiGraph {
    /// Fundamental cycles of a spanning forest, as edge masks.
    fn cycle_basis(&self) -> Vec<Mask> {
        let mut uf = UnionFind::new(self.n);
        let mut forest: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n];
        let mut extra = Vec::new();
        for (k, &(a, b)) in self.ends.iter().enumerate() {
            if uf.union(a, b) {
                forest[a].push((b, k));
                forest[b].push((a, k));
            } else {
                extra.push(k);
            }
        }
        extra
            .into_iter()
            .map(|k| {
                let (a, b) = self.ends[k];
                (1u64 << k) | forest_path(&forest, a, b)
            })
            .collect()
    }

    fn even_sets(&self, cap: u64) -> Result<Vec<Mask>> {
        let basis = self.cycle_basis();
        let needed = 1u64.checked_shl(basis.len() as u32).unwrap_or(u64::MAX);
        if needed > cap {
            return Err(Error::cap("even subgraphs of a torso", needed, cap));
        }
        Ok((0..needed)
            .map(|c| bits(c).fold(0, |acc, i| acc ^ basis[i]))
            .collect())
    }

    fn cut(&self, side: u64) -> Mask {
        self.ends
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| (side >> a & 1) != (side >> b & 1))
            .fold(0, |acc, (k, _)| acc | 1 << k)
    }

    fn cuts(&self, cap: u64) -> Result<Vec<Mask>> {
        let needed = 1u64 << self.n.saturating_sub(1).min(63);
        if self.n > 40 || needed > cap {
            return Err(Error::cap("cuts of a torso", needed, cap));
        }
        let mut out: Vec<Mask> = (0..needed).map(|s| self.cut(s)).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn presentation(&self, ground: &Ground) -> Presentation {
        let f = FieldSpec::GF2;
        let gens: Vec<SparseVec> = self
            .cycle_basis()
            .into_iter()
            .map(|m| SparseVec::indicator(f, &ground.set_of(m)))
            .collect();
        Presentation::new(f, ground, &gens, None).expect("cycle space")
    }
}

fn forest_path(forest: &[Vec<(usize, usize)>], a: usize, b: usize) -> Mask {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; forest.len()];
    let mut seen = vec![false; forest.len()];
    let mut queue = VecDeque::from([a]);
    seen[a] = true;
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for &(y, k) in &forest[x] {
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, k));
                queue.push_back(y);
            }
        }
    }
    let mut m = 0;
    let mut x = b;
    while let Some((p, k)) = prev[x] {
        m |= 1 << k;
        x = p;
    }
    m
}

/// A tree decomposition in which every graph edge is assigned to exactly
/// one part containing both its ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    labels: Vec<String>,
    tree: Vec<(usize, usize)>,
    parts: Vec<BTreeSet<usize>>,
    edge_part: Vec<usize>,
}

fn bad_td<T>(m: impl Into<String>) -> Result<T> {
    Err(Error::InvalidDecomposition(m.into()))
}

impl TreeDecomposition {
    pub fn new(
        g: &Graph,
        labels: Vec<String>,
        tree: Vec<(usize, usize)>,
        parts: Vec<BTreeSet<usize>>,
        edge_part: Vec<usize>,
    ) -> Result<Self> {
        let n = parts.len();
        if n == 0 {
            return bad_td("no parts");
        }
        if labels.len() != n {
            return bad_td("one label per part required");
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || labels[..i].contains(l) {
                return bad_td(format!("bad or duplicate label `{l}`"));
            }
        }
        if tree.len() != n - 1 {
            return bad_td(format!("{n} parts need {} tree edges", n - 1));
        }
        let mut uf = UnionFind::new(n);
        for &(a, b) in &tree {
            if a >= n || b >= n || a == b || !uf.union(a, b) {
                return bad_td(format!("tree edge ({a}, {b}) is out of range or closes a cycle"));
            }
        }
        for part in &parts {
            if let Some(&v) = part.iter().find(|&&v| v >= g.vertex_count()) {
                return bad_td(format!("vertex index {v} out of range"));
            }
        }
        if edge_part.len() != g.edge_count() {
            return bad_td("one part per graph edge required");
        }
        for (k, &t) in edge_part.iter().enumerate() {
            let e = &g.edges[k];
            if t >= n || !parts[t].contains(&e.u) || !parts[t].contains(&e.v) {
                return bad_td(format!("edge `{}` is not inside its part", e.id));
            }
        }
        for v in 0..g.vertex_count() {
            let holders: Vec<usize> = (0..n).filter(|&t| parts[t].contains(&v)).collect();
            if holders.is_empty() {
                return bad_td(format!("vertex `{}` is in no part", g.vertices[v]));
            }
            let mut uf = UnionFind::new(n);
            for &(a, b) in &tree {
                if parts[a].contains(&v) && parts[b].contains(&v) {
                    uf.union(a, b);
                }
            }
            let r = uf.find(holders[0]);
            if holders.iter().any(|&t| uf.find(t) != r) {
                return bad_td(format!("parts containing `{}` are not connected", g.vertices[v]));
            }
        }
        Ok(TreeDecomposition {
            labels,
            tree,
            parts,
            edge_part,
        })
    }

    /// The trivial decomposition with one part.
    pub fn single(g: &Graph) -> Self {
        let all = (0..g.vertex_count()).collect();
        TreeDecomposition::new(g, vec!["1".into()], vec![], vec![all], vec![0; g.edge_count()])
            .expect("single part")
    }

    /// Decomposition from an elimination order: each vertex gives the bag of
    /// itself and its later neighbours in the filled graph, hanging below its
    /// earliest later neighbour. Bags contained in a neighbouring bag are
    /// merged away. Each edge goes to the first bag holding both ends.
    pub fn from_elimination(g: &Graph, order: &[usize]) -> Result<Self> {
        let n = g.vertex_count();
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return bad_td("elimination order must be a permutation of the vertices");
        }
        if n == 0 {
            return bad_td("graph has no vertices");
        }
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for e in &g.edges {
            if e.u != e.v {
                adj[e.u].insert(e.v);
                adj[e.v].insert(e.u);
            }
        }
        let mut bags: Vec<BTreeSet<usize>> = Vec::with_capacity(n);
        let mut parent: Vec<Option<usize>> = vec![None; n];
        for &v in order {
            let later: Vec<usize> = adj[v].iter().copied().filter(|&w| pos[w] > pos[v]).collect();
            for &a in &later {
                for &b in &later {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
            parent[pos[v]] = later.iter().map(|&w| pos[w]).min();
            let mut bag: BTreeSet<usize> = later.into_iter().collect();
            bag.insert(v);
            bags.push(bag);
        }
        // a disconnected graph gives a forest; chain its roots
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
        for w in roots.windows(2) {
            parent[w[0]] = Some(w[1]);
        }
        let mut tree: Vec<(usize, usize)> = (0..n).filter_map(|i| parent[i].map(|p| (i, p))).collect();
        let mut alive = vec![true; n];
        loop {
            let hit = tree.iter().position(|&(a, b)| bags[a].is_subset(&bags[b]) || bags[b].is_subset(&bags[a]));
            let Some(k) = hit else { break };
            let (a, b) = tree.remove(k);
            let (gone, keep) = if bags[a].is_subset(&bags[b]) { (a, b) } else { (b, a) };
            alive[gone] = false;
            for ed in tree.iter_mut() {
                if ed.0 == gone {
                    ed.0 = keep;
                }
                if ed.1 == gone {
                    ed.1 = keep;
                }
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        let newi: HashMap<usize, usize> = kept.iter().enumerate().map(|(j, &i)| (i, j)).collect();
        let parts: Vec<BTreeSet<usize>> = kept.iter().map(|&i| bags[i].clone()).collect();
        let tree: Vec<(usize, usize)> = tree.iter().map(|&(a, b)| (newi[&a], newi[&b])).collect();
        let edge_part = g
            .edges
            .iter()
            .map(|e| {
                parts
                    .iter()
                    .position(|p| p.contains(&e.u) && p.contains(&e.v))
                    .expect("every edge lies in a bag")
            })
            .collect();
        let labels = (1..=parts.len()).map(|i| i.to_string()).collect();
        TreeDecomposition::new(g, labels, tree, parts, edge_part)
    }

    /// From a uniformly shuffled elimination order.
    pub fn random<R: Rng>(g: &Graph, rng: &mut R) -> Result<Self> {
        let mut order: Vec<usize> = (0..g.vertex_count()).collect();
        order.shuffle(rng);
        Self::from_elimination(g, &order)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn tree(&self) -> &[(usize, usize)] {
        &self.tree
    }

    pub fn parts(&self) -> &[BTreeSet<usize>] {
        &self.parts
    }

    pub fn edge_part(&self) -> &[usize] {
        &self.edge_part
    }

    pub fn neighbors(&self, t: usize) -> Vec<usize> {
        self.tree
            .iter()
            .filter_map(|&(a, b)| {
                if a == t {
                    Some(b)
                } else if b == t {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Whether each part, with the edges assigned to it, is connected.
    pub fn parts_connected(&self, g: &Graph) -> bool {
        (0..self.len()).all(|t| {
            let vs: Vec<usize> = self.parts[t].iter().copied().collect();
            let idx: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let mut uf = UnionFind::new(vs.len());
            for (k, e) in g.edges.iter().enumerate() {
                if self.edge_part[k] == t {
                    uf.union(idx[&e.u], idx[&e.v]);
                }
            }
            (1..vs.len()).all(|i| uf.find(i) == uf.find(0))
        })
    }

    pub fn show(&self, g: &Graph) -> String {
        let parts: Vec<String> = (0..self.len())
            .map(|t| {
                let vs: Vec<&str> = self.parts[t].iter().map(|&v| g.vertices[v].as_str()).collect();
                format!("{}:{{{}}}", self.labels[t], vs.join(","))
            })
            .collect();
        let tree: Vec<String> = self
            .tree
            .iter()
            .map(|&(a, b)| format!("{}-{}", self.labels[a], self.labels[b]))
            .collect();
        format!("parts {} tree {}", parts.join(" "), tree.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsoEdge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
    /// For a dummy edge, the neighbouring part it points to.
    pub via: Option<usize>,
}

/// A part with its assigned edges plus one dummy edge per neighbour and
/// pair of distinct shared vertices.
#[derive(Clone, Debug)]
pub struct Torso {
    pub node: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<TorsoEdge>,
    ground: Ground,
}

impl Torso {
    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn real_count(&self) -> usize {
        self.edges.iter().filter(|e| e.via.is_none()).count()
    }

    pub fn dummy_count(&self) -> usize {
        self.edges.len() - self.real_count()
    }

    /// Local positions of the dummies toward `nbr`, in the order both sides
    /// agree on.
    pub fn toward(&self, nbr: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].via == Some(nbr)).collect()
    }

    fn multigraph(&self) -> MultiGraph {
        let idx: HashMap<usize, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        MultiGraph {
            n: self.vertices.len(),
            ends: self.edges.iter().map(|e| (idx[&e.u], idx[&e.v])).collect(),
        }
    }

    /// Edge sets with even degree everywhere.
    pub fn even_sets(&self, caps: &Caps) -> Result<Vec<Mask>> {
        self.multigraph().even_sets(caps.enumeration)
    }

    /// Distinct cuts `δ(S)`, the empty cut included.
    pub fn cuts(&self, caps: &Caps) -> Result<Vec<Mask>> {
        self.multigraph().cuts(caps.enumeration)
    }

    pub fn presentation(&self) -> Presentation {
        self.multigraph().presentation(&self.ground)
    }
}

fn dummy_name(td: &TreeDecomposition, g: &Graph, t: usize, u: usize, v: usize, w: usize) -> EdgeId {
    let (a, b) = (t.min(u), t.max(u));
    format!("({}{},{},{})", td.labels[a], td.labels[b], g.vertices[v], g.vertices[w]).into()
}

pub fn torso_build(g: &Graph, td: &TreeDecomposition, t: usize) -> Result<Torso> {
    if t >= td.len() {
        return bad_td(format!("no part {t}"));
    }
    let mut edges: Vec<TorsoEdge> = g
        .edges
        .iter()
        .enumerate()
        .filter(|(k, _)| td.edge_part[*k] == t)
        .map(|(_, e)| TorsoEdge {
            id: e.id.clone(),
            u: e.u,
            v: e.v,
            via: None,
        })
        .collect();
    let mut nbrs = td.neighbors(t);
    nbrs.sort_unstable();
    for u in nbrs {
        let shared: Vec<usize> = td.parts[t].intersection(&td.parts[u]).copied().collect();
        for (i, &v) in shared.iter().enumerate() {
            for &w in &shared[i + 1..] {
                let id = dummy_name(td, g, t, u, v, w);
                if g.ground.contains(&id) {
                    return bad_graph(format!("edge name `{id}` clashes with a dummy edge"));
                }
                edges.push(TorsoEdge { id, u: v, v: w, via: Some(u) });
            }
        }
    }
    if edges.len() > MAX_GROUND {
        return bad_td(format!("torso of part `{}` has {} edges", td.labels[t], edges.len()));
    }
    let ground = Ground::new(edges.iter().map(|e| e.id.clone()))?;
    Ok(Torso {
        node: t,
        vertices: td.parts[t].iter().copied().collect(),
        edges,
        ground,
    })
}

pub fn torsos(g: &Graph, td: &TreeDecomposition) -> Result<Vec<Torso>> {
    (0..td.len()).map(|t| torso_build(g, td, t)).collect()
}

/// Each torso carries its GF(2) cycle space and cut space; the dummy edges
/// are the shared elements.
pub fn td_to_presentations(g: &Graph, td: &TreeDecomposition) -> Result<TreeOfPresentations> {
    let ts = torsos(g, td)?;
    TreeOfPresentations::new(
        td.labels.clone(),
        ts.iter().map(Torso::presentation).collect(),
        td.tree.clone(),
    )
}

/// A subtree with one torso edge set per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreCircuit {
    pub cocircuit: bool,
    pub nodes: Vec<usize>,
    pub sets: Vec<EdgeSet>,
    /// The real edges used.
    pub underlying: EdgeSet,
}

fn project(m: Mask, positions: &[usize]) -> u64 {
    positions
        .iter()
        .enumerate()
        .filter(|(_, &p)| m >> p & 1 == 1)
        .fold(0, |acc, (j, _)| acc | 1 << j)
}

/// Everything the enumeration needs, precomputed per torso.
struct Frame {
    torsos: Vec<Torso>,
    candidates: Vec<Vec<Mask>>,
    /// `toward[t][u]`: local positions of the dummies of `t` toward `u`.
    toward: Vec<HashMap<usize, Vec<usize>>>,
    /// Graph edge index of each local real edge.
    real: Vec<Vec<Option<usize>>>,
    adj: Vec<Vec<usize>>,
}

impl Frame {
    fn new(g: &Graph, td: &TreeDecomposition, cocircuit: bool, caps: &Caps) -> Result<Self> {
        let torsos = torsos(g, td)?;
        let candidates = torsos
            .iter()
            .map(|t| if cocircuit { t.cuts(caps) } else { t.even_sets(caps) })
            .collect::<Result<Vec<_>>>()?;
        let adj: Vec<Vec<usize>> = (0..td.len()).map(|t| td.neighbors(t)).collect();
        let toward = torsos
            .iter()
            .map(|to| adj[to.node].iter().map(|&u| (u, to.toward(u))).collect())
            .collect();
        let real = torsos
            .iter()
            .map(|to| to.edges.iter().map(|e| e.via.map_or_else(|| g.edge_index(&e.id), |_| None)).collect())
            .collect();
        Ok(Frame {
            torsos,
            candidates,
            toward,
            real,
            adj,
        })
    }

    fn underlying(&self, t: usize, m: Mask) -> Mask {
        bits(m).fold(0, |acc, i| match self.real[t][i] {
            Some(k) => acc | 1 << k,
            None => acc,
        })
    }

    /// Connected node subsets as masks.
    fn subtrees(&self) -> Result<Vec<u64>> {
        let n = self.torsos.len();
        if n > MAX_TD_NODES {
            return Err(Error::cap("decomposition parts for subtree enumeration", n as u64, MAX_TD_NODES as u64));
        }
        Ok((1u64..1u64 << n).filter(|&s| self.connected(s)).collect())
    }

    fn connected(&self, s: u64) -> bool {
        let first = s.trailing_zeros() as usize;
        let mut seen = 1u64 << first;
        let mut stack = vec![first];
        while let Some(t) = stack.pop() {
            for &u in &self.adj[t] {
                if s >> u & 1 == 1 && seen >> u & 1 == 0 {
                    seen |= 1 << u;
                    stack.push(u);
                }
            }
        }
        seen == s
    }

    /// Calls `f` with every assignment on the subtree `s`, as local masks in
    /// the order of the returned node list.
    fn each_on(&self, s: u64, work: &AtomicU64, cap: u64, f: &mut dyn FnMut(&[usize], &[Mask])) -> Result<()> {
        let first = s.trailing_zeros() as usize;
        let mut order = vec![first];
        let mut parent = vec![None];
        let mut i = 0;
        while i < order.len() {
            let t = order[i];
            for &u in &self.adj[t] {
                if s >> u & 1 == 1 && !order.contains(&u) {
                    order.push(u);
                    parent.push(Some(i));
                }
            }
            i += 1;
        }
        let mut chosen = vec![0; order.len()];
        self.dfs(s, &order, &parent, 0, &mut chosen, work, cap, f)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        s: u64,
        order: &[usize],
        parent: &[Option<usize>],
        i: usize,
        chosen: &mut [Mask],
        work: &AtomicU64,
        cap: u64,
        f: &mut dyn FnMut(&[usize], &[Mask]),
    ) -> Result<()> {
        if i == order.len() {
            f(order, chosen);
            return Ok(());
        }
        let t = order[i];
        let used = work.fetch_add(self.candidates[t].len() as u64, Ordering::Relaxed);
        if used > cap {
            return Err(Error::cap("precircuit enumeration", used, cap));
        }
        'cand: for &m in &self.candidates[t] {
            for &u in &self.adj[t] {
                let pos = &self.toward[t][&u];
                let here = project(m, pos);
                if s >> u & 1 == 0 {
                    if here != 0 {
                        continue 'cand;
                    }
                } else if let Some(pi) = parent[i] {
                    if order[pi] == u && here != project(chosen[pi], &self.toward[u][&t]) {
                        continue 'cand;
                    }
                }
            }
            chosen[i] = m;
            self.dfs(s, order, parent, i + 1, chosen, work, cap, f)?;
        }
        Ok(())
    }
}

/// Every precircuit (or with `cocircuit` every precocircuit) on every
/// subtree of the decomposition tree.
pub fn enumerate_precircuits(
    g: &Graph,
    td: &TreeDecomposition,
    cocircuit: bool,
    caps: &Caps,
) -> Result<Vec<PreCircuit>> {
    let fr = Frame::new(g, td, cocircuit, caps)?;
    let work = AtomicU64::new(0);
    let mut out = Vec::new();
    for s in fr.subtrees()? {
        let mut push = |order: &[usize], chosen: &[Mask]| {
            let mut idx: Vec<usize> = (0..order.len()).collect();
            idx.sort_by_key(|&i| order[i]);
            let under = order.iter().zip(chosen).fold(0, |acc, (&t, &m)| acc | fr.underlying(t, m));
            out.push(PreCircuit {
                cocircuit,
                nodes: idx.iter().map(|&i| order[i]).collect(),
                sets: idx.iter().map(|&i| fr.torsos[order[i]].ground.set_of(chosen[i])).collect(),
                underlying: g.ground.set_of(under),
            });
        };
        fr.each_on(s, &work, caps.enumeration, &mut push)?;
        if out.len() as u64 > caps.enumeration {
            return Err(Error::cap("precircuits", out.len() as u64, caps.enumeration));
        }
    }
    Ok(out)
}

/// Distinct underlying sets of all precircuits (or precocircuits), as masks
/// over the graph's edges, sorted.
pub fn underlying_sets(g: &Graph, td: &TreeDecomposition, cocircuit: bool, caps: &Caps) -> Result<Vec<Mask>> {
    let fr = Frame::new(g, td, cocircuit, caps)?;
    let work = AtomicU64::new(0);
    let subtrees = fr.subtrees()?;
    let per = par::map(&subtrees, |&s| {
        let mut found = HashSet::new();
        let mut push = |order: &[usize], chosen: &[Mask]| {
            found.insert(order.iter().zip(chosen).fold(0, |acc, (&t, &m)| acc | fr.underlying(t, m)));
        };
        fr.each_on(s, &work, caps.enumeration, &mut push).map(|_| found)
    });
    let mut all = HashSet::new();
    for r in per {
        all.extend(r?);
    }
    let mut out: Vec<Mask> = all.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// The inclusion-minimal nonempty sets of a family.
pub fn minimal_nonempty(sets: &[Mask]) -> Vec<Mask> {
    let mut cand: Vec<Mask> = sets.iter().copied().filter(|&m| m != 0).collect();
    cand.sort_unstable_by_key(|m| (m.count_ones(), *m));
    cand.dedup();
    let mut out: Vec<Mask> = Vec::new();
    for m in cand {
        if !out.iter().any(|&k| k & m == k) {
            out.push(m);
        }
    }
    out.sort_unstable();
    out
}

/// Minimal nonempty underlying sets of precircuits and precocircuits, and
/// every underlying set for witness lookups.
#[derive(Clone, Debug)]
pub struct GraphSystems {
    pub circuit_sets: Vec<Mask>,
    pub cocircuit_sets: Vec<Mask>,
    pub circuits: Vec<Mask>,
    pub cocircuits: Vec<Mask>,
}

impl GraphSystems {
    pub fn new(g: &Graph, td: &TreeDecomposition, caps: &Caps) -> Result<Self> {
        let circuit_sets = underlying_sets(g, td, false, caps)?;
        let cocircuit_sets = underlying_sets(g, td, true, caps)?;
        Ok(GraphSystems {
            circuits: minimal_nonempty(&circuit_sets),
            cocircuits: minimal_nonempty(&cocircuit_sets),
            circuit_sets,
            cocircuit_sets,
        })
    }

    /// An underlying set of a precircuit through `e` inside `P + e`.
    pub fn circuit_witness(&self, e: usize, p: Mask) -> Option<Mask> {
        let allowed = p | 1 << e;
        self.circuit_sets.iter().copied().find(|&m| m >> e & 1 == 1 && m & !allowed == 0)
    }

    /// An underlying set of a precocircuit through `e` inside `Q + e`.
    pub fn cocircuit_witness(&self, e: usize, q: Mask) -> Option<Mask> {
        let allowed = q | 1 << e;
        self.cocircuit_sets.iter().copied().find(|&m| m >> e & 1 == 1 && m & !allowed == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphPos {
    Start,
    Part { t: usize, set: EdgeSet },
    Link { t: usize, u: usize, set: EdgeSet },
}

#[derive(Clone, Debug)]
pub struct GraphGame {
    pub game: PositionalGame,
    pub positions: Vec<GraphPos>,
    pub root: usize,
}

/// A partition `E(G) = P ∪ Q ∪ {e}` as masks over the graph's edges.
pub fn partition_masks(g: &Graph, e: &EdgeId, p: &EdgeSet, q: &EdgeSet) -> Result<(usize, Mask, Mask)> {
    let single: EdgeSet = [e.clone()].into();
    check_disjoint(&[p, q, &single])?;
    let ei = g
        .edge_index(e)
        .ok_or_else(|| Error::InvalidInstance(format!("`{e}` is not an edge")))?;
    let pm = g.ground.mask(p)?;
    let qm = g.ground.mask(q)?;
    if (pm | qm | 1 << ei) != g.ground.full() {
        return Err(Error::InvalidInstance("P, Q and e must cover every edge".into()));
    }
    Ok((ei, pm, qm))
}

/// The game on the decomposition rooted at the part holding `e`: Sarah
/// plays even edge sets of torsos avoiding `Q`, Colin challenges on a
/// nonempty set of dummies toward a child, and Sarah must answer there with
/// a set meeting the parent's dummies in exactly that challenge.
pub fn build_graph_game(
    g: &Graph,
    td: &TreeDecomposition,
    e: &EdgeId,
    p: &EdgeSet,
    q: &EdgeSet,
    caps: &Caps,
) -> Result<GraphGame> {
    let (ei, _, qm) = partition_masks(g, e, p, q)?;
    let fr = Frame::new(g, td, false, caps)?;
    let root = td.edge_part[ei];
    let n = td.len();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(t) = queue.pop_front() {
        for &u in &fr.adj[t] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(t);
                queue.push_back(u);
            }
        }
    }
    let allowed: Vec<Vec<Mask>> = (0..n)
        .map(|t| {
            fr.candidates[t]
                .iter()
                .copied()
                .filter(|&m| fr.underlying(t, m) & qm == 0)
                .collect()
        })
        .collect();
    let e_local = fr.real[root].iter().position(|&k| k == Some(ei)).expect("e in its torso");

    let mut b = GameBuilder {
        game: PositionalGame::new("a"),
        positions: vec![GraphPos::Start],
        parts: HashMap::new(),
        todo: VecDeque::new(),
    };
    let mut links: HashMap<(usize, usize, u64), usize> = HashMap::new();
    let limit = caps.game_positions;
    let too_many = |len: usize| -> Result<()> {
        if len as u64 > limit {
            Err(Error::cap("graph game positions", len as u64, limit))
        } else {
            Ok(())
        }
    };

    for &m in &allowed[root] {
        if m >> e_local & 1 == 1 {
            let x = b.part(&fr, td, root, m);
            b.game.add_edge(0, x)?;
        }
    }
    while let Some((pos, t, m)) = b.todo.pop_front() {
        too_many(b.game.len())?;
        for &c in &fr.adj[t] {
            if parent[c] != Some(t) {
                continue;
            }
            let y = project(m, &fr.toward[t][&c]);
            if y == 0 {
                continue;
            }
            if let Some(&yp) = links.get(&(t, c, y)) {
                b.game.add_edge(pos, yp)?;
                continue;
            }
            let local = fr.toward[t][&c]
                .iter()
                .enumerate()
                .filter(|(j, _)| y >> j & 1 == 1)
                .fold(0, |a, (_, &i)| a | 1 << i);
            let set = fr.torsos[t].ground.set_of(local);
            let yp = b.game.add_position(format!(
                "Y({}-{}){}",
                td.labels[t],
                td.labels[c],
                crate::edge::show_set(&set)
            ));
            b.positions.push(GraphPos::Link { t, u: c, set });
            links.insert((t, c, y), yp);
            b.game.add_edge(pos, yp)?;
            for &mc in &allowed[c] {
                if project(mc, &fr.toward[c][&t]) == y {
                    let x = b.part(&fr, td, c, mc);
                    b.game.add_edge(yp, x)?;
                }
            }
        }
    }
    too_many(b.game.len())?;
    Ok(GraphGame {
        game: b.game,
        positions: b.positions,
        root,
    })
}

struct GameBuilder {
    game: PositionalGame,
    positions: Vec<GraphPos>,
    parts: HashMap<(usize, Mask), usize>,
    todo: VecDeque<(usize, usize, Mask)>,
}

impl GameBuilder {
    fn part(&mut self, fr: &Frame, td: &TreeDecomposition, t: usize, m: Mask) -> usize {
        if let Some(&p) = self.parts.get(&(t, m)) {
            return p;
        }
        let set = fr.torsos[t].ground.set_of(m);
        let p = self
            .game
            .add_position(format!("X({}){}", td.labels[t], crate::edge::show_set(&set)));
        self.positions.push(GraphPos::Part { t, set });
        self.parts.insert((t, m), p);
        self.todo.push_back((p, t, m));
        p
    }
}
