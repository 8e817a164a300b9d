//! Finite trees of presentations and the presentation obtained by gluing
//! them along shared (dummy) edges.

use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::axioms::presented_matroid;
use crate::caps::Caps;
use crate::edge::{check_disjoint, show_set, EdgeId, EdgeSet, Ground, Mask};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, Row};
use crate::par;
use crate::presentation::Presentation;
use crate::subspace::Subspace;
use crate::vector::SparseVec;

/// Whether local pieces agree (vectors) or agree up to sign (covectors) on
/// shared edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Vector,
    Covector,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Vector => "vector",
            Kind::Covector => "covector",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeOfPresentations {
    field: FieldSpec,
    labels: Vec<String>,
    nodes: Vec<Presentation>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
    shared: Vec<Vec<EdgeId>>,
    real: Ground,
    owner: HashMap<EdgeId, usize>,
}

impl TreeOfPresentations {
    /// Nodes are given with labels; edges refer to node indices. Shared edge
    /// sets are the overlaps of the node grounds.
    pub fn new(
        labels: Vec<String>,
        nodes: Vec<Presentation>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = nodes.len();
        let bad = |m: String| Err(Error::InvalidTree(m));
        if n == 0 {
            return bad("no nodes".into());
        }
        if labels.len() != n {
            return bad("one label per node required".into());
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return bad("empty node label".into());
            }
            if labels[..i].contains(l) {
                return bad(format!("duplicate node `{l}`"));
            }
        }
        let field = nodes[0].field();
        for p in &nodes {
            field.check(&p.field())?;
        }
        if edges.len() != n - 1 {
            return bad(format!("{} nodes need {} edges, got {}", n, n - 1, edges.len()));
        }
        let mut adj = vec![Vec::new(); n];
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n || a == b {
                return bad(format!("bad edge ({a}, {b})"));
            }
            if adj[a].iter().any(|&(x, _)| x == b) {
                return bad(format!("repeated edge {}-{}", labels[a], labels[b]));
            }
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(t) = queue.pop_front() {
            for &(u, _) in &adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return bad(format!("node `{}` is not connected", labels[i]));
        }
        let mut where_: HashMap<EdgeId, Vec<usize>> = HashMap::new();
        for (i, p) in nodes.iter().enumerate() {
            for e in p.ground().ids() {
                where_.entry(e.clone()).or_default().push(i);
            }
        }
        for (e, ts) in &where_ {
            if ts.len() > 2 {
                return bad(format!("edge `{e}` appears in {} node grounds", ts.len()));
            }
            if ts.len() == 2 && !adj[ts[0]].iter().any(|&(u, _)| u == ts[1]) {
                return bad(format!(
                    "edge `{e}` is shared by non-adjacent nodes `{}` and `{}`",
                    labels[ts[0]], labels[ts[1]]
                ));
            }
        }
        let shared = edges
            .iter()
            .map(|&(a, b)| {
                nodes[a]
                    .ground()
                    .ids()
                    .iter()
                    .filter(|e| nodes[b].ground().contains(e))
                    .cloned()
                    .collect()
            })
            .collect();
        let mut real_ids = Vec::new();
        let mut owner = HashMap::new();
        for (i, p) in nodes.iter().enumerate() {
            for e in p.ground().ids() {
                if where_[e].len() == 1 {
                    real_ids.push(e.clone());
                    owner.insert(e.clone(), i);
                }
            }
        }
        let real = Ground::new(real_ids)?;
        Ok(TreeOfPresentations {
            field,
            labels,
            nodes,
            edges,
            adj,
            shared,
            real,
            owner,
        })
    }

    /// Builds from labelled nodes and label pairs.
    pub fn from_labeled(nodes: Vec<(String, Presentation)>, edges: &[(&str, &str)]) -> Result<Self> {
        let labels: Vec<String> = nodes.iter().map(|(l, _)| l.clone()).collect();
        let find = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::InvalidTree(format!("unknown node `{l}`")))
        };
        let idx = edges
            .iter()
            .map(|(a, b)| Ok((find(a)?, find(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels, nodes.into_iter().map(|(_, p)| p).collect(), idx)
    }

    /// A star with centre `center_label` and one leaf per entry.
    pub fn star(
        center_label: &str,
        center: Presentation,
        leaves: Vec<(String, Presentation)>,
    ) -> Result<Self> {
        let mut labels = vec![center_label.to_string()];
        let mut nodes = vec![center];
        let mut edges = Vec::new();
        for (i, (l, p)) in leaves.into_iter().enumerate() {
            labels.push(l);
            nodes.push(p);
            edges.push((0, i + 1));
        }
        Self::new(labels, nodes, edges)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn label(&self, t: usize) -> &str {
        &self.labels[t]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn presentation(&self, t: usize) -> &Presentation {
        &self.nodes[t]
    }

    pub fn presentations(&self) -> &[Presentation] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(neighbour, edge index)` pairs.
    pub fn neighbors(&self, t: usize) -> &[(usize, usize)] {
        &self.adj[t]
    }

    pub fn shared(&self, edge: usize) -> &[EdgeId] {
        &self.shared[edge]
    }

    pub fn edge_between(&self, t: usize, u: usize) -> Option<usize> {
        self.adj[t].iter().find(|&&(x, _)| x == u).map(|&(_, k)| k)
    }

    /// `E(tu)`, empty when `t` and `u` are not adjacent.
    pub fn shared_between(&self, t: usize, u: usize) -> EdgeSet {
        self.edge_between(t, u)
            .map(|k| self.shared[k].iter().cloned().collect())
            .unwrap_or_default()
    }

    /// `E(𝒯)`: edges in exactly one node ground, in node then ground order.
    pub fn real_edges(&self) -> &Ground {
        &self.real
    }

    pub fn dummy_edges(&self) -> EdgeSet {
        self.shared.iter().flatten().cloned().collect()
    }

    /// The node whose ground holds the real edge `e`.
    pub fn owner(&self, e: &EdgeId) -> Option<usize> {
        self.owner.get(e).copied()
    }

    /// Parents and breadth-first order from `root`; children in adjacency
    /// (input) order.
    pub fn rooted(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let n = self.len();
        let mut parent = vec![None; n];
        let mut order = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let t = order[i];
            for &(u, _) in &self.adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(t);
                    order.push(u);
                }
            }
            i += 1;
        }
        (parent, order)
    }

    pub fn children(&self, t: usize, parent: &[Option<usize>]) -> Vec<usize> {
        self.adj[t]
            .iter()
            .map(|&(u, _)| u)
            .filter(|&u| parent[u] == Some(t))
            .collect()
    }

    /// Nodes of the component of `T - tu` containing `u`, sorted.
    pub fn branch(&self, t: usize, u: usize) -> Vec<usize> {
        let mut out = vec![u];
        let mut seen = vec![false; self.len()];
        seen[t] = true;
        seen[u] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &(y, _) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// The subtree induced on `nodes`, which must be connected.
    pub fn induced(&self, nodes: &[usize]) -> Result<Self> {
        let mut sorted = nodes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let pos = |t: usize| sorted.binary_search(&t).ok();
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((pos(a)?, pos(b)?)))
            .collect();
        Self::new(
            sorted.iter().map(|&t| self.labels[t].clone()).collect(),
            sorted.iter().map(|&t| self.nodes[t].clone()).collect(),
            edges,
        )
    }

    pub fn with_presentation(&self, t: usize, p: Presentation) -> Result<Self> {
        let mut nodes = self.nodes.clone();
        nodes[t] = p;
        Self::new(self.labels.clone(), nodes, self.edges.clone())
    }

    /// Applies `/P \ Q` node by node; `P`, `Q` must be real edges.
    pub fn minor_real(&self, p: &EdgeSet, q: &EdgeSet) -> Result<Self> {
        check_disjoint(&[p, q])?;
        for e in p.iter().chain(q) {
            if !self.real.contains(e) {
                return Err(Error::OutsideGround(e.to_string()));
            }
        }
        let nodes = self
            .nodes
            .iter()
            .map(|pres| {
                let g = pres.ground();
                pres.minor_mask(g.mask_lossy(p), g.mask_lossy(q))
            })
            .collect();
        Self::new(self.labels.clone(), nodes, self.edges.clone())
    }

    pub fn show_node(&self, t: usize) -> String {
        format!("{} on {:?}: {}", self.labels[t], self.nodes[t].ground(), self.nodes[t].show())
    }
}

/// Compatible families of local members, as a kernel over the concatenated
/// coordinates of the node bases.
pub(crate) struct Agreement<'a> {
    tree: &'a TreeOfPresentations,
    spaces: Vec<Subspace>,
    offsets: Vec<usize>,
    pub(crate) kernel: Vec<Row>,
}

impl<'a> Agreement<'a> {
    pub(crate) fn new(tree: &'a TreeOfPresentations, spaces: Vec<Subspace>, kind: Kind) -> Self {
        let f = tree.field;
        let mut offsets = Vec::with_capacity(spaces.len());
        let mut total = 0;
        for s in &spaces {
            offsets.push(total);
            total += s.dim();
        }
        let sign = match kind {
            Kind::Vector => f.from_i64(-1),
            Kind::Covector => f.one(),
        };
        let mut eqs: Vec<Row> = Vec::new();
        for (k, &(a, b)) in tree.edges.iter().enumerate() {
            for e in &tree.shared[k] {
                let mut row = vec![f.zero(); total];
                let ia = spaces[a].ground().position(e).expect("shared edge in node");
                let ib = spaces[b].ground().position(e).expect("shared edge in node");
                for (j, r) in spaces[a].rows().iter().enumerate() {
                    row[offsets[a] + j] = r[ia].clone();
                }
                for (j, r) in spaces[b].rows().iter().enumerate() {
                    row[offsets[b] + j] = f.mul(&sign, &r[ib]);
                }
                eqs.push(row);
            }
        }
        let kernel = linalg::kernel(f, &eqs, total);
        Agreement {
            tree,
            spaces,
            offsets,
            kernel,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.kernel.len()
    }

    /// Local dense members for a kernel combination `alpha`.
    pub(crate) fn locals(&self, alpha: &[Scalar]) -> Vec<Row> {
        let f = self.tree.field;
        let total: usize = self.spaces.iter().map(|s| s.dim()).sum();
        let coeffs = linalg::combine(f, &self.kernel, alpha, total);
        self.spaces
            .iter()
            .enumerate()
            .map(|(t, s)| {
                let c = &coeffs[self.offsets[t]..self.offsets[t] + s.dim()];
                linalg::combine(f, s.rows(), c, s.ground().len())
            })
            .collect()
    }

    /// Locals of the `k`-th kernel basis vector.
    pub(crate) fn basis_locals(&self, k: usize) -> Vec<Row> {
        let f = self.tree.field;
        let mut alpha = vec![f.zero(); self.dim()];
        alpha[k] = f.one();
        self.locals(&alpha)
    }

    pub(crate) fn underlying(&self, locals: &[Row]) -> Row {
        underlying_dense(self.tree, locals)
    }

    /// The glued space on the real edges.
    pub(crate) fn glued(&self) -> Subspace {
        let rows = (0..self.dim())
            .map(|k| self.underlying(&self.basis_locals(k)))
            .collect();
        Subspace::from_rows(self.tree.field, self.tree.real.clone(), rows)
    }

    /// A combination whose underlying vector takes the prescribed values on
    /// the given real edges, if one exists.
    pub(crate) fn solve_underlying(&self, constraints: &[(usize, Scalar)]) -> Option<Vec<Row>> {
        let f = self.tree.field;
        let under: Vec<Row> = (0..self.dim())
            .map(|k| self.underlying(&self.basis_locals(k)))
            .collect();
        let eqs: Vec<Row> = constraints
            .iter()
            .map(|(e, _)| under.iter().map(|u| u[*e].clone()).collect())
            .collect();
        let rhs: Vec<Scalar> = constraints.iter().map(|(_, x)| x.clone()).collect();
        let alpha = linalg::solve(f, &eqs, &rhs, self.dim())?;
        Some(self.locals(&alpha))
    }
}

fn underlying_dense(tree: &TreeOfPresentations, locals: &[Row]) -> Row {
    let f = tree.field;
    let mut out = vec![f.zero(); tree.real.len()];
    for (t, row) in locals.iter().enumerate() {
        let g = tree.nodes[t].ground();
        for (i, x) in row.iter().enumerate() {
            if let Some(j) = tree.real.position(g.get(i)) {
                out[j] = x.clone();
            }
        }
    }
    out
}

/// Glues arbitrary per-node subspaces (each on its node's ground).
pub fn glue_spaces(tree: &TreeOfPresentations, spaces: &[Subspace], kind: Kind) -> Result<Subspace> {
    if spaces.len() != tree.len() {
        return Err(Error::InvalidTree("one space per node required".into()));
    }
    for (t, s) in spaces.iter().enumerate() {
        tree.field.check(&s.field())?;
        if s.ground() != tree.nodes[t].ground() {
            return Err(Error::InvalidTree(format!(
                "space for `{}` is not on the node ground",
                tree.labels[t]
            )));
        }
    }
    Ok(Agreement::new(tree, spaces.to_vec(), kind).glued())
}

/// The glued presentation on the real edges. Fails if the glued covectors are
/// not the full complement of the glued vectors.
pub fn glue(tree: &TreeOfPresentations) -> Result<Presentation> {
    let vs: Vec<Subspace> = tree.nodes.iter().map(|p| p.vectors().clone()).collect();
    let ws: Vec<Subspace> = tree.nodes.iter().map(|p| p.covectors().clone()).collect();
    let v = glue_spaces(tree, &vs, Kind::Vector)?;
    let w = glue_spaces(tree, &ws, Kind::Covector)?;
    Presentation::from_pair(v, w)
}

/// A pre-vector or pre-covector: a subtree with a local member at each node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreVector {
    pub kind: Kind,
    /// Sorted node indices of the subtree.
    pub nodes: Vec<usize>,
    /// Local members, aligned with `nodes`.
    pub local: Vec<SparseVec>,
}

impl PreVector {
    pub fn local_at(&self, t: usize) -> Option<&SparseVec> {
        self.nodes
            .binary_search(&t)
            .ok()
            .map(|i| &self.local[i])
    }

    pub fn underlying(&self, tree: &TreeOfPresentations) -> SparseVec {
        let f = tree.field;
        SparseVec::from_pairs(
            f,
            self.local
                .iter()
                .flat_map(|v| v.entries().map(|(e, x)| (e.clone(), x.clone())))
                .filter(|(e, _)| tree.real.contains(e)),
        )
    }

    pub fn support(&self, tree: &TreeOfPresentations) -> EdgeSet {
        self.underlying(tree).support()
    }

    /// Checks membership of the locals and the matching conditions.
    pub fn validate(&self, tree: &TreeOfPresentations) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if self.nodes.is_empty() || self.nodes.len() != self.local.len() {
            return bad("empty subtree".into());
        }
        if !self.nodes.windows(2).all(|w| w[0] < w[1]) || *self.nodes.last().unwrap() >= tree.len() {
            return bad("node list must be sorted and valid".into());
        }
        let f = tree.field;
        for (&t, v) in self.nodes.iter().zip(&self.local) {
            let pres = tree.presentation(t);
            let space = match self.kind {
                Kind::Vector => pres.vectors(),
                Kind::Covector => pres.covectors(),
            };
            if !space.contains(v)? {
                return bad(format!("local {} at `{}` is not a {}", v, tree.label(t), self.kind.name()));
            }
            for &(u, k) in tree.neighbors(t) {
                let e_tu: EdgeSet = tree.shared(k).iter().cloned().collect();
                let here = v.restrict(&e_tu);
                match self.local_at(u) {
                    Some(w) => {
                        let there = w.restrict(&e_tu);
                        let expect = match self.kind {
                            Kind::Vector => there,
                            Kind::Covector => there.neg(),
                        };
                        if here != expect || here.is_zero() {
                            return bad(format!(
                                "locals at `{}` and `{}` do not match nonzero on {}",
                                tree.label(t),
                                tree.label(u),
                                show_set(&e_tu)
                            ));
                        }
                    }
                    None if !here.is_zero() => {
                        return bad(format!(
                            "local at `{}` is nonzero towards `{}` outside the subtree",
                            tree.label(t),
                            tree.label(u)
                        ));
                    }
                    None => {}
                }
            }
            let _ = f;
        }
        let mut sub = vec![false; tree.len()];
        for &t in &self.nodes {
            sub[t] = true;
        }
        let mut reached = vec![self.nodes[0]];
        let mut seen = sub.clone();
        seen[self.nodes[0]] = false;
        while let Some(t) = reached.pop() {
            for &(u, _) in tree.neighbors(t) {
                if seen[u] {
                    seen[u] = false;
                    reached.push(u);
                }
            }
        }
        if seen.iter().any(|&s| s) {
            return bad("subtree is not connected".into());
        }
        Ok(())
    }
}

/// Splits a compatible family into pre-vectors: edges with zero restriction
/// are cut and zero nodes dropped. The underlying vectors of the pieces sum
/// to the underlying vector of the family.
pub(crate) fn decompose(tree: &TreeOfPresentations, locals: &[Row], kind: Kind) -> Vec<PreVector> {
    let f = tree.field;
    let n = tree.len();
    let nonzero: Vec<bool> = locals.iter().map(|r| r.iter().any(|x| !f.is_zero(x))).collect();
    let mut comp = vec![usize::MAX; n];
    let mut pieces = Vec::new();
    for start in 0..n {
        if !nonzero[start] || comp[start] != usize::MAX {
            continue;
        }
        let id = pieces.len();
        let mut stack = vec![start];
        comp[start] = id;
        let mut members = vec![start];
        while let Some(t) = stack.pop() {
            for &(u, k) in tree.neighbors(t) {
                if comp[u] != usize::MAX || !nonzero[u] {
                    continue;
                }
                let g = tree.presentation(t).ground();
                let live = tree.shared(k).iter().any(|e| !f.is_zero(&locals[t][g.position(e).unwrap()]));
                if live {
                    comp[u] = id;
                    members.push(u);
                    stack.push(u);
                }
            }
        }
        members.sort_unstable();
        let local = members
            .iter()
            .map(|&t| SparseVec::from_dense(f, tree.presentation(t).ground(), &locals[t]))
            .collect();
        pieces.push(PreVector {
            kind,
            nodes: members,
            local,
        });
    }
    pieces
}

fn connected_subsets(tree: &TreeOfPresentations) -> Vec<Vec<usize>> {
    let n = tree.len();
    let mut out = Vec::new();
    for m in 1u64..(1u64 << n) {
        let nodes: Vec<usize> = crate::edge::bits(m).collect();
        let mut seen: Mask = 1 << nodes[0];
        let mut stack = vec![nodes[0]];
        while let Some(t) = stack.pop() {
            for &(u, _) in tree.neighbors(t) {
                if m >> u & 1 == 1 && seen >> u & 1 == 0 {
                    seen |= 1 << u;
                    stack.push(u);
                }
            }
        }
        if seen == m {
            out.push(nodes);
        }
    }
    out
}

/// Largest tree handled by [`enumerate_prevectors`].
pub const MAX_ENUM_NODES: usize = 16;

/// Every pre-vector (or pre-covector) with nonzero locals, by direct search
/// over subtrees. Finite fields only.
pub fn enumerate_prevectors(tree: &TreeOfPresentations, kind: Kind, caps: &Caps) -> Result<Vec<PreVector>> {
    let f = tree.field;
    if !f.is_finite() {
        return Err(Error::InfiniteField("pre-vector enumeration".into()));
    }
    if tree.len() > MAX_ENUM_NODES {
        return Err(Error::cap("pre-vector enumeration nodes", tree.len() as u64, MAX_ENUM_NODES as u64));
    }
    let members: Vec<Vec<Row>> = tree
        .nodes
        .iter()
        .map(|p| {
            let space = match kind {
                Kind::Vector => p.vectors(),
                Kind::Covector => p.covectors(),
            };
            Ok(space
                .members_dense(false, caps.enumeration)?
                .into_iter()
                .filter(|r| r.iter().any(|x| !f.is_zero(x)))
                .collect())
        })
        .collect::<Result<_>>()?;
    // positions of E(tu) inside E(t), per (t, neighbour slot)
    let shared_pos: Vec<Vec<(usize, Vec<usize>)>> = (0..tree.len())
        .map(|t| {
            let g = tree.nodes[t].ground();
            tree.adj[t]
                .iter()
                .map(|&(u, k)| (u, tree.shared[k].iter().map(|e| g.position(e).unwrap()).collect()))
                .collect()
        })
        .collect();
    let restrict = |r: &Row, pos: &[usize]| -> Row { pos.iter().map(|&i| r[i].clone()).collect() };
    let is_zero = |r: &Row| r.iter().all(|x| f.is_zero(x));
    let work = AtomicU64::new(0);
    let cap = caps.prevector_work;
    let subsets = connected_subsets(tree);
    let per_subset: Vec<Result<Vec<PreVector>>> = par::map(&subsets, |nodes| {
        let inside = |u: usize| nodes.binary_search(&u).is_ok();
        // candidates per node: zero towards outside, nonzero towards inside
        let cands: Vec<Vec<&Row>> = nodes
            .iter()
            .map(|&t| {
                members[t]
                    .iter()
                    .filter(|r| {
                        shared_pos[t].iter().all(|(u, pos)| {
                            let z = is_zero(&restrict(r, pos));
                            if inside(*u) { !z } else { z }
                        })
                    })
                    .collect()
            })
            .collect();
        // breadth-first order inside the subtree, with parents
        let mut order = vec![0usize];
        let mut parent = vec![usize::MAX; nodes.len()];
        let mut placed = vec![false; nodes.len()];
        placed[0] = true;
        let mut i = 0;
        while i < order.len() {
            let t = nodes[order[i]];
            for &(u, _) in &tree.adj[t] {
                if let Ok(j) = nodes.binary_search(&u) {
                    if !placed[j] {
                        placed[j] = true;
                        parent[j] = order[i];
                        order.push(j);
                    }
                }
            }
            i += 1;
        }
        let slot_of = |j: usize, other: usize| -> &[usize] {
            let t = nodes[j];
            let u = nodes[other];
            &shared_pos[t].iter().find(|(x, _)| *x == u).unwrap().1
        };
        let mut found = Vec::new();
        let mut choice: Vec<Option<&Row>> = vec![None; nodes.len()];
        fn search<'r>(
            depth: usize,
            order: &[usize],
            parent: &[usize],
            cands: &[Vec<&'r Row>],
            choice: &mut Vec<Option<&'r Row>>,
            ok: &dyn Fn(usize, &Row, &[Option<&'r Row>]) -> bool,
            found: &mut Vec<Vec<Row>>,
            budget: &dyn Fn() -> bool,
        ) -> bool {
            if depth == order.len() {
                found.push(choice.iter().map(|c| c.unwrap().clone()).collect());
                return true;
            }
            let j = order[depth];
            for &cand in &cands[j] {
                if !budget() {
                    return false;
                }
                if depth > 0 && !ok(j, cand, choice) {
                    continue;
                }
                choice[j] = Some(cand);
                if !search(depth + 1, order, parent, cands, choice, ok, found, budget) {
                    return false;
                }
                choice[j] = None;
            }
            true
        }
        let ok = |j: usize, cand: &Row, choice: &[Option<&Row>]| -> bool {
            let p = parent[j];
            let mine = restrict(cand, slot_of(j, p));
            let theirs = restrict(choice[p].unwrap(), slot_of(p, j));
            match kind {
                Kind::Vector => mine == theirs,
                Kind::Covector => mine.iter().zip(&theirs).all(|(a, b)| *a == f.neg(b)),
            }
        };
        let budget = || work.fetch_add(1, Ordering::Relaxed) < cap;
        let mut raw = Vec::new();
        let complete = search(0, &order, &parent, &cands, &mut choice, &ok, &mut raw, &budget);
        if !complete {
            return Err(Error::cap("pre-vector enumeration", work.load(Ordering::Relaxed), cap));
        }
        for locals in raw {
            found.push(PreVector {
                kind,
                nodes: nodes.clone(),
                local: locals
                    .iter()
                    .zip(nodes)
                    .map(|(r, &t)| SparseVec::from_dense(f, tree.nodes[t].ground(), r))
                    .collect(),
            });
        }
        Ok(found)
    });
    let mut out = Vec::new();
    for r in per_subset {
        out.extend(r?);
    }
    Ok(out)
}

/// Number of neighbours `u` of `t` whose `E(tu)` meets both the local
/// support of `v` and that of `w` at `t`.
pub fn neat_count(tree: &TreeOfPresentations, v: &PreVector, w: &PreVector, t: usize) -> usize {
    let (Some(a), Some(b)) = (v.local_at(t), w.local_at(t)) else {
        return 0;
    };
    let sa = a.support();
    let sb = b.support();
    tree.neighbors(t)
        .iter()
        .filter(|&&(_, k)| {
            let e: EdgeSet = tree.shared(k).iter().cloned().collect();
            !e.is_disjoint(&sa) && !e.is_disjoint(&sb)
        })
        .count()
}

/// Outcome of gluing a star around a centre presentation.
#[derive(Clone, Debug)]
pub struct StellarVerdict {
    pub is_presentation: bool,
    pub presents_matroid: bool,
    pub leaf_sets: Vec<EdgeSet>,
    pub glued: Option<Presentation>,
    pub failure: Option<String>,
}

impl StellarVerdict {
    pub fn valid(&self) -> bool {
        self.is_presentation && self.presents_matroid
    }
}

/// Checks the star shape around `center` and that gluing gives a
/// presentation of a matroid.
pub fn check_stellar_instance(
    pi: &Presentation,
    star: &TreeOfPresentations,
    center: usize,
    caps: &Caps,
) -> Result<StellarVerdict> {
    if center >= star.len() {
        return Err(Error::InvalidStar("centre out of range".into()));
    }
    if star.presentation(center) != pi {
        return Err(Error::InvalidStar("centre node does not carry the presentation".into()));
    }
    let mut leaf_sets = Vec::new();
    for &(a, b) in star.edges() {
        if a != center && b != center {
            return Err(Error::InvalidStar(format!(
                "edge {}-{} misses the centre",
                star.label(a),
                star.label(b)
            )));
        }
    }
    for &(u, k) in star.neighbors(center) {
        let f: EdgeSet = star.shared(k).iter().cloned().collect();
        if f.is_empty() {
            return Err(Error::InvalidStar(format!("leaf `{}` shares nothing with the centre", star.label(u))));
        }
        leaf_sets.push(f);
    }
    let glued = match glue(star) {
        Ok(p) => p,
        Err(e) => {
            return Ok(StellarVerdict {
                is_presentation: false,
                presents_matroid: false,
                leaf_sets,
                glued: None,
                failure: Some(e.to_string()),
            })
        }
    };
    let (presents, failure) = match presented_matroid(&glued, caps) {
        Ok(_) => (true, None),
        Err(e) if e.is_cap() => return Err(e),
        Err(e) => (false, Some(e.to_string())),
    };
    Ok(StellarVerdict {
        is_presentation: true,
        presents_matroid: presents,
        leaf_sets,
        glued: Some(glued),
        failure,
    })
}

/// A covector `w` of `pi` with `w↾F0 = w0`, support inside `Q ∪ ⋃ℱ` and
/// `w↾F` in the span of `wfams[F]` for every other `F`. Built by gluing the
/// star of complement leaves. When the hypothesis fails the error carries a
/// vector that meets `w0` but no member of the families.
pub fn stellagain_covector(
    pi: &Presentation,
    family: &[EdgeSet],
    f0: usize,
    w0: &SparseVec,
    q: &EdgeSet,
    wfams: &[Vec<SparseVec>],
    caps: &Caps,
) -> Result<SparseVec> {
    let f = pi.field();
    let g = pi.ground();
    if f0 >= family.len() || wfams.len() != family.len() {
        return Err(Error::InvalidInstance("family, F0 and covector families disagree".into()));
    }
    let mut sets: Vec<&EdgeSet> = family.iter().collect();
    check_disjoint(&sets)?;
    sets.push(q);
    check_disjoint(&sets)?;
    for s in family.iter().chain(std::iter::once(q)) {
        g.mask(s)?;
    }
    if !w0.support().is_subset(&family[f0]) {
        return Err(Error::InvalidInstance("w0 must live on F0".into()));
    }
    for (i, ws) in wfams.iter().enumerate() {
        for w in ws {
            if i != f0 && !w.support().is_subset(&family[i]) {
                return Err(Error::InvalidInstance(format!("covector {w} is not on its set")));
            }
        }
    }
    let blocked = |v: &SparseVec| -> Result<bool> {
        for (i, ws) in wfams.iter().enumerate() {
            if i == f0 {
                continue;
            }
            for w in ws {
                if !w.is_orthogonal(v)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    };
    if f.is_finite() {
        let qm = g.mask(q)?;
        for r in pi.vectors().vanishing_mask(qm).members_dense(false, caps.enumeration)? {
            let v = SparseVec::from_dense(f, g, &r);
            if !v.is_orthogonal(w0)? && !blocked(&v)? {
                return Err(Error::Hypothesis {
                    detail: format!("vector {} meets w0 and no family member", v.show_in(g)),
                    witness: Some(v),
                });
            }
        }
    }
    let mut leaves = Vec::new();
    for (i, s) in family.iter().enumerate() {
        if i == f0 || s.is_empty() {
            continue;
        }
        let lg = Ground::new(g.ordered(s)?)?;
        let w_leaf = Subspace::span(f, &lg, &wfams[i])?;
        leaves.push((format!("F{i}"), Presentation::from_covectors(w_leaf)));
    }
    let star = TreeOfPresentations::star("*", pi.clone(), leaves)?;
    let real = star.real_edges().clone();
    let f0m = real.mask_lossy(&family[f0]);
    let qm = real.mask_lossy(q);
    let covs: Vec<Subspace> = star.nodes.iter().map(|p| p.covectors().clone()).collect();
    let agree = Agreement::new(&star, covs, Kind::Covector);
    let mut cons = Vec::new();
    for i in 0..real.len() {
        if f0m >> i & 1 == 1 {
            cons.push((i, w0.get(real.get(i))));
        } else if qm >> i & 1 == 0 {
            cons.push((i, f.zero()));
        }
    }
    if let Some(locals) = agree.solve_underlying(&cons) {
        let w = SparseVec::from_dense(f, g, &locals[0]);
        debug_assert!(pi.covectors().contains(&w)?);
        return Ok(w);
    }
    // hypothesis fails: find a vector of the glued star avoiding Q that meets w0
    let vecs: Vec<Subspace> = star.nodes.iter().map(|p| p.vectors().clone()).collect();
    let agree = Agreement::new(&star, vecs, Kind::Vector);
    let under: Vec<Row> = (0..agree.dim()).map(|k| agree.underlying(&agree.basis_locals(k))).collect();
    let mut eqs: Vec<Row> = (0..real.len())
        .filter(|&i| qm >> i & 1 == 1)
        .map(|i| under.iter().map(|u| u[i].clone()).collect())
        .collect();
    let mut rhs = vec![f.zero(); eqs.len()];
    let w0d: Row = (0..real.len()).map(|i| if f0m >> i & 1 == 1 { w0.get(real.get(i)) } else { f.zero() }).collect();
    eqs.push(under.iter().map(|u| linalg::dot(f, u, &w0d)).collect());
    rhs.push(f.one());
    match linalg::solve(f, &eqs, &rhs, agree.dim()) {
        Some(alpha) => {
            let v = SparseVec::from_dense(f, g, &agree.locals(&alpha)[0]);
            Err(Error::Hypothesis {
                detail: format!("vector {} meets w0 and no family member", v.show_in(g)),
                witness: Some(v),
            })
        }
        None => Err(Error::Invariant("no covector and no obstructing vector".into())),
    }
}

/// The `n`-leaf truncation of the star whose glued supports meet in `2n`
/// leaf elements.
#[derive(Clone, Debug)]
pub struct CexInstance {
    pub tree: TreeOfPresentations,
    pub center: usize,
    pub prevector: PreVector,
    pub precovector: PreVector,
    pub intersection: EdgeSet,
}

/// Default centre: an `m`-cycle `e1..em` through `u1`, plus `m` parallel
/// edges `f1..fm` from `u1` to a pendant vertex `z`; cycle and cut spaces
/// of that graph with a fixed orientation.
pub fn cex_center(m: usize, field: FieldSpec) -> Result<(Presentation, SparseVec, SparseVec)> {
    if m < 2 {
        return Err(Error::InvalidInstance("centre needs m >= 2".into()));
    }
    let mut names: Vec<String> = (1..=m).map(|i| format!("e{i}")).collect();
    names.extend((1..=m).map(|i| format!("f{i}")));
    let g = Ground::new(names.iter().map(|s| s.as_str()))?;
    // vertices 0..m are u1..um, vertex m is z
    let mut rows: Vec<Row> = vec![vec![field.zero(); 2 * m]; m + 1];
    for i in 0..m {
        let (a, b) = (i, (i + 1) % m);
        rows[a][i] = field.one();
        rows[b][i] = field.from_i64(-1);
        rows[0][m + i] = field.one();
        rows[m][m + i] = field.from_i64(-1);
    }
    let w_space = Subspace::from_rows(field, g.clone(), rows);
    let pres = Presentation::from_covectors(w_space);
    let v = SparseVec::from_pairs(field, (0..m).map(|i| (g.get(i).clone(), field.one())));
    let w = SparseVec::from_pairs(field, (0..m).map(|i| (g.get(m + i).clone(), field.one())));
    debug_assert!(pres.vectors().contains(&v)?);
    debug_assert!(pres.covectors().contains(&w)?);
    Ok((pres, v, w))
}

/// Builds the truncated example. Without a centre the default of
/// [`cex_center`] with `m = n + 1` is used; a supplied centre must have a
/// vector and covector whose supports differ in at least `n` elements each.
pub fn gen_cex(n: usize, center: Option<&Presentation>, field: FieldSpec, caps: &Caps) -> Result<CexInstance> {
    if n == 0 {
        return Err(Error::InvalidInstance("n must be positive".into()));
    }
    let (pres, v, w) = match center {
        None => cex_center(n + 1, field)?,
        Some(p) => {
            let (v, w) = find_cex_pair(p, n, caps)?;
            (p.clone(), v, w)
        }
    };
    let f = pres.field();
    let g = pres.ground().clone();
    let sv = v.support();
    let sw = w.support();
    let es: Vec<EdgeId> = g.ids().iter().filter(|e| sv.contains(e) && !sw.contains(e)).take(n).cloned().collect();
    let fs: Vec<EdgeId> = g.ids().iter().filter(|e| sw.contains(e) && !sv.contains(e)).take(n).cloned().collect();
    let mut leaves = Vec::new();
    let mut vloc = vec![v.clone()];
    let mut wloc = vec![w.clone()];
    for i in 0..n {
        let (e, fe) = (es[i].clone(), fs[i].clone());
        let gi = EdgeId::from(format!("g{}", i + 1));
        let hi = EdgeId::from(format!("h{}", i + 1));
        if g.contains(&gi) || g.contains(&hi) {
            return Err(Error::InvalidInstance(format!("centre already uses `{gi}` or `{hi}`")));
        }
        let lg = Ground::new(vec![e.clone(), fe.clone(), gi.clone(), hi.clone()])?;
        let vi = Subspace::span(
            f,
            &lg,
            &[
                SparseVec::from_pairs(f, [(e.clone(), f.one())]),
                SparseVec::from_pairs(f, [(gi.clone(), f.one()), (hi.clone(), f.one())]),
            ],
        )?;
        let wi = Subspace::span(
            f,
            &lg,
            &[
                SparseVec::from_pairs(f, [(fe.clone(), f.one())]),
                SparseVec::from_pairs(f, [(gi.clone(), f.one()), (hi.clone(), f.from_i64(-1))]),
            ],
        )?;
        leaves.push((format!("{}", i + 1), Presentation::from_pair(vi, wi)?));
        let ve = v.get(&e);
        vloc.push(SparseVec::from_pairs(f, [(e.clone(), ve.clone()), (gi.clone(), ve.clone()), (hi.clone(), ve)]));
        let wf = w.get(&fe);
        wloc.push(SparseVec::from_pairs(
            f,
            [(fe.clone(), f.neg(&wf)), (gi.clone(), f.neg(&wf)), (hi.clone(), wf)],
        ));
    }
    let tree = TreeOfPresentations::star("*", pres, leaves)?;
    let nodes: Vec<usize> = (0..=n).collect();
    let prevector = PreVector { kind: Kind::Vector, nodes: nodes.clone(), local: vloc };
    let precovector = PreVector { kind: Kind::Covector, nodes, local: wloc };
    prevector.validate(&tree)?;
    precovector.validate(&tree)?;
    let intersection: EdgeSet = prevector
        .support(&tree)
        .intersection(&precovector.support(&tree))
        .cloned()
        .collect();
    Ok(CexInstance {
        tree,
        center: 0,
        prevector,
        precovector,
        intersection,
    })
}

fn find_cex_pair(p: &Presentation, n: usize, caps: &Caps) -> Result<(SparseVec, SparseVec)> {
    let f = p.field();
    if !f.is_finite() {
        return Err(Error::InfiniteField("searching the centre for a large vector/covector pair".into()));
    }
    let mut vs = p.vectors().members(caps)?;
    let ws = p.covectors().members(caps)?;
    vs.sort_by_key(|v| std::cmp::Reverse(v.support_len()));
    for v in &vs {
        let sv = v.support();
        for w in &ws {
            let sw = w.support();
            if sv.difference(&sw).count() >= n && sw.difference(&sv).count() >= n {
                return Ok((v.clone(), w.clone()));
            }
        }
    }
    Err(Error::InvalidInstance(format!(
        "centre has no vector and covector with {n} private elements each"
    )))
}
