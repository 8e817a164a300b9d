//! Base/cobase partitions of glued trees of presentations, built node by
//! node from a base-extension step on stars.

use std::collections::BTreeMap;

use crate::axioms::SetSystemPair;
use crate::caps::Caps;
use crate::edge::{show_set, EdgeId, EdgeSet};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::tree::{glue, TreeOfPresentations};
use crate::vector::SparseVec;

/// A star around `center` with disjoint real edge sets `x` (independent in
/// the glued presentation) and `y` (coindependent).
#[derive(Clone, Debug)]
pub struct StarBaseInput {
    pub star: TreeOfPresentations,
    pub center: usize,
    pub x: EdgeSet,
    pub y: EdgeSet,
}

/// Per-leaf choices made by [`im_star`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafChoice {
    pub leaf: usize,
    pub p: EdgeSet,
    pub q: EdgeSet,
    pub x: EdgeSet,
    pub y: EdgeSet,
}

#[derive(Clone, Debug)]
pub struct StarBaseOutput {
    pub x: EdgeSet,
    pub y: EdgeSet,
    /// The base chosen in the localised star.
    pub star_base: EdgeSet,
    pub leaves: Vec<LeafChoice>,
    pub bullets: StarBullets,
}

/// The five postconditions, with witnesses for the spanning ones.
#[derive(Clone, Debug, Default)]
pub struct StarBullets {
    pub covers: bool,
    pub independent: bool,
    pub spanning: Vec<(EdgeId, Option<SparseVec>)>,
    pub cospanning: Vec<(EdgeId, Option<SparseVec>)>,
    pub separated: bool,
}

impl StarBullets {
    pub fn all(&self) -> bool {
        self.covers
            && self.independent
            && self.spanning.iter().all(|(_, c)| c.is_some())
            && self.cospanning.iter().all(|(_, d)| d.is_some())
            && self.separated
    }
}

fn owned(tree: &TreeOfPresentations, nodes: &[usize]) -> EdgeSet {
    tree.real_edges()
        .ids()
        .iter()
        .filter(|e| nodes.contains(&tree.owner(e).unwrap()))
        .cloned()
        .collect()
}

fn minus(a: &EdgeSet, b: &EdgeSet) -> EdgeSet {
    a.difference(b).cloned().collect()
}

fn meet(a: &EdgeSet, b: &EdgeSet) -> EdgeSet {
    a.intersection(b).cloned().collect()
}

fn leaves_of(star: &TreeOfPresentations, center: usize) -> Result<Vec<(usize, EdgeSet)>> {
    if center >= star.len() {
        return Err(Error::InvalidStar("centre out of range".into()));
    }
    for &(a, b) in star.edges() {
        if a != center && b != center {
            return Err(Error::InvalidStar(format!("edge {}-{} misses the centre", star.label(a), star.label(b))));
        }
    }
    Ok(star
        .neighbors(center)
        .iter()
        .map(|&(u, k)| (u, star.shared(k).iter().cloned().collect()))
        .collect())
}

fn dependent_witness(pres: &Presentation, set: &EdgeSet) -> Option<SparseVec> {
    let keep = pres.ground().mask_lossy(set);
    pres.vectors().restrict_mask(keep).basis().into_iter().next()
}

/// Extends `X` and `Y` to sets covering the centre's real edges, keeping
/// independence, with spanning witnesses for the centre's elements and no
/// component of the remaining minor joining two leaves.
pub fn im_star(inp: &StarBaseInput) -> Result<StarBaseOutput> {
    let star = &inp.star;
    let leaves = leaves_of(star, inp.center)?;
    let glued = glue(star)?;
    let real = star.real_edges();
    for e in inp.x.iter().chain(&inp.y) {
        if !real.contains(e) {
            return Err(Error::InvalidInstance(format!("`{e}` is not a real edge of the star")));
        }
    }
    if !inp.x.is_disjoint(&inp.y) {
        return Err(Error::Overlap(show_set(&meet(&inp.x, &inp.y))));
    }
    if !glued.is_independent(&inp.x)? {
        return Err(Error::Hypothesis {
            detail: format!("X = {} is dependent", show_set(&inp.x)),
            witness: dependent_witness(&glued, &inp.x),
        });
    }
    if !glued.is_coindependent(&inp.y)? {
        return Err(Error::Hypothesis {
            detail: format!("Y = {} is codependent", show_set(&inp.y)),
            witness: dependent_witness(&glued.dual(), &inp.y),
        });
    }
    let e_prime = owned(star, &[inp.center]);
    // push the parts of X and Y inside leaves into the leaf presentations
    let x0 = minus(&inp.x, &e_prime);
    let y0 = minus(&inp.y, &e_prime);
    let mut reduced = Vec::new();
    let mut local = Vec::new();
    for (leaf, f) in &leaves {
        let pf = star.presentation(*leaf);
        let g = pf.ground();
        let pres = pf.minor_mask(g.mask_lossy(&x0), g.mask_lossy(&y0));
        let (p, q) = pres.localize(f)?;
        local.push(pres.minor(&p, &q)?);
        reduced.push((pres, p, q));
    }
    let mut labels = vec![star.label(inp.center).to_string()];
    let mut nodes = vec![star.presentation(inp.center).clone()];
    let mut edges = Vec::new();
    for (i, (leaf, _)) in leaves.iter().enumerate() {
        labels.push(star.label(*leaf).to_string());
        nodes.push(local[i].clone());
        edges.push((0, i + 1));
    }
    let tilde = glue(&TreeOfPresentations::new(labels, nodes, edges)?)?;
    // greedy base containing X ∩ E' and avoiding Y
    let tg = tilde.ground();
    let xm = tg.mask_lossy(&meet(&inp.x, &e_prime));
    let ym = tg.mask_lossy(&meet(&inp.y, &e_prime));
    let mut bm = xm;
    for i in 0..tg.len() {
        let bit = 1u64 << i;
        if (bm | ym) & bit == 0 && tilde.is_independent_mask(bm | bit) {
            bm |= bit;
        }
    }
    if bm.count_ones() as usize != tg.len() - tilde.vectors().dim() {
        return Err(Error::Invariant("greedy set is not a base of the localised star".into()));
    }
    let b = tg.set_of(bm);
    let b_dual = tg.set_of(tg.full() & !bm);
    let mut x_new = x0.clone();
    x_new.extend(meet(&b, &e_prime));
    let mut y_new = y0.clone();
    y_new.extend(meet(&b_dual, &e_prime));
    let mut choices = Vec::new();
    for ((leaf, f), (pres, p, q)) in leaves.iter().zip(&reduced) {
        let leaf_ground = pres.ground().to_set();
        let mut px = p.clone();
        px.extend(meet(&b, &leaf_ground));
        let mut qy = q.clone();
        qy.extend(meet(&b_dual, &leaf_ground));
        let xf = pres.independent_shrink(f, &px)?;
        let yf = pres.dual().independent_shrink(f, &qy)?;
        x_new.extend(xf.iter().cloned());
        y_new.extend(yf.iter().cloned());
        choices.push(LeafChoice {
            leaf: *leaf,
            p: p.clone(),
            q: q.clone(),
            x: xf,
            y: yf,
        });
    }
    let bullets = star_bullets(inp, &glued, &x_new, &y_new)?;
    if !bullets.all() {
        return Err(Error::Invariant(format!(
            "base extension failed its postconditions with X' = {}, Y' = {}",
            show_set(&x_new),
            show_set(&y_new)
        )));
    }
    Ok(StarBaseOutput {
        x: x_new,
        y: y_new,
        star_base: b,
        leaves: choices,
        bullets,
    })
}

/// Checks the five postconditions of [`im_star`] for a proposed `(X', Y')`.
pub fn verify_im_star(inp: &StarBaseInput, x: &EdgeSet, y: &EdgeSet) -> Result<StarBullets> {
    let glued = glue(&inp.star)?;
    star_bullets(inp, &glued, x, y)
}

fn star_bullets(inp: &StarBaseInput, glued: &Presentation, x: &EdgeSet, y: &EdgeSet) -> Result<StarBullets> {
    let star = &inp.star;
    let e_prime = owned(star, &[inp.center]);
    let covers = x.is_disjoint(y)
        && x.is_superset(&inp.x)
        && y.is_superset(&inp.y)
        && e_prime.iter().all(|e| x.contains(e) || y.contains(e));
    let independent = glued.is_independent(x)? && glued.is_coindependent(y)?;
    let spanning = minus(&e_prime, x)
        .into_iter()
        .map(|e| Ok((e.clone(), glued.spanning_vector(x, &e)?)))
        .collect::<Result<Vec<_>>>()?;
    let dual = glued.dual();
    let cospanning = minus(&e_prime, y)
        .into_iter()
        .map(|e| Ok((e.clone(), dual.spanning_vector(y, &e)?)))
        .collect::<Result<Vec<_>>>()?;
    let leaf_sets: Vec<EdgeSet> = leaves_of(star, inp.center)?
        .iter()
        .map(|(leaf, _)| owned(star, &[*leaf]))
        .collect();
    let minor = glued.minor(x, y)?;
    let separated = minor
        .components()
        .iter()
        .all(|c| leaf_sets.iter().filter(|s| !s.is_disjoint(c)).count() <= 1);
    Ok(StarBullets {
        covers,
        independent,
        spanning,
        cospanning,
        separated,
    })
}

/// The per-node sets of the recursion and the eight conditions at each node.
#[derive(Clone, Debug)]
pub struct NodeCert {
    pub node: usize,
    pub x: EdgeSet,
    pub y: EdgeSet,
    pub conditions: [bool; 8],
    /// Whether the branch presentation at a non-root node is also obtained by
    /// deleting `Y_s` and contracting the rest.
    pub branch_dual_form: Option<bool>,
}

impl NodeCert {
    pub fn ok(&self) -> bool {
        self.conditions.iter().all(|&c| c) && self.branch_dual_form != Some(false)
    }
}

#[derive(Clone, Debug)]
pub struct BaseCert {
    pub root: usize,
    pub order: Vec<usize>,
    pub nodes: Vec<NodeCert>,
    pub x: EdgeSet,
    pub y: EdgeSet,
    pub partition: bool,
    pub is_base: bool,
}

impl BaseCert {
    pub fn ok(&self) -> bool {
        self.partition && self.is_base && self.nodes.iter().all(NodeCert::ok)
    }

    /// One line per node: label, sets and condition flags.
    pub fn report(&self, tree: &TreeOfPresentations) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let flags: Vec<String> = n
                .conditions
                .iter()
                .enumerate()
                .map(|(i, &c)| format!("{}{}", i + 1, if c { "+" } else { "-" }))
                .collect();
            let dual = match n.branch_dual_form {
                Some(true) => " branch:+",
                Some(false) => " branch:-",
                None => "",
            };
            out.push_str(&format!(
                "node {}: X={} Y={} [{}]{}\n",
                tree.label(n.node),
                show_set(&n.x),
                show_set(&n.y),
                flags.join(" "),
                dual
            ));
        }
        out
    }
}

/// Builds a base `X` and cobase `Y` of the glued presentation by recursion
/// over the tree from `root` in breadth-first order.
pub fn build_base(tree: &TreeOfPresentations, root: usize, caps: &Caps) -> Result<BaseCert> {
    if root >= tree.len() {
        return Err(Error::InvalidTree("root out of range".into()));
    }
    let glued = glue(tree)?;
    let (parent, order) = tree.rooted(root);
    let mut xs: BTreeMap<usize, EdgeSet> = BTreeMap::new();
    let mut ys: BTreeMap<usize, EdgeSet> = BTreeMap::new();
    let mut dual_forms: BTreeMap<usize, bool> = BTreeMap::new();
    for &t in &order {
        let children = tree.children(t, &parent);
        let mut leaves = Vec::new();
        for &c in &children {
            let branch = glue(&tree.induced(&tree.branch(t, c))?)?;
            leaves.push((tree.label(c).to_string(), branch));
        }
        let (center, x, y, xs_prev, ys_prev) = match parent[t] {
            None => (tree.presentation(t).clone(), EdgeSet::new(), EdgeSet::new(), EdgeSet::new(), EdgeSet::new()),
            Some(s) => {
                let mut side = tree.branch(t, s);
                let rest = owned(tree, &side);
                side.push(t);
                let pi_prime = glue(&tree.induced(&side)?)?;
                let (x_s, y_s) = (&xs[&s], &ys[&s]);
                let center = pi_prime.minor(&meet(x_s, &rest), &minus(&rest, x_s))?;
                let other = pi_prime.minor(&minus(&rest, y_s), &meet(y_s, &rest))?;
                dual_forms.insert(t, center == other);
                let down = owned(tree, &tree.branch(s, t));
                (center, meet(x_s, &down), meet(y_s, &down), x_s.clone(), y_s.clone())
            }
        };
        let star = TreeOfPresentations::star(tree.label(t), center, leaves)?;
        let out = im_star(&StarBaseInput { star, center: 0, x, y })?;
        let mut x_t = xs_prev;
        x_t.extend(out.x);
        let mut y_t = ys_prev;
        y_t.extend(out.y);
        xs.insert(t, x_t);
        ys.insert(t, y_t);
    }
    let cert = certify(tree, &glued, root, &xs, &ys, &dual_forms, caps)?;
    if !cert.ok() {
        return Err(Error::Invariant(format!("base certificate failed:\n{}", cert.report(tree))));
    }
    Ok(cert)
}

fn certify(
    tree: &TreeOfPresentations,
    glued: &Presentation,
    root: usize,
    xs: &BTreeMap<usize, EdgeSet>,
    ys: &BTreeMap<usize, EdgeSet>,
    dual_forms: &BTreeMap<usize, bool>,
    caps: &Caps,
) -> Result<BaseCert> {
    let (parent, order) = tree.rooted(root);
    let dual = glued.dual();
    let ancestors = |mut t: usize| {
        let mut out = Vec::new();
        while let Some(s) = parent[t] {
            out.push(s);
            t = s;
        }
        out
    };
    let mut nodes = Vec::new();
    for &t in &order {
        let (x, y) = (&xs[&t], &ys[&t]);
        let own = owned(tree, &[t]);
        let children = tree.children(t, &parent);
        let mut c = [true; 8];
        c[0] = x.is_disjoint(y);
        c[1] = ancestors(t).iter().all(|s| xs[s].is_subset(x) && ys[s].is_subset(y));
        c[2] = children.iter().all(|&u| {
            let down = owned(tree, &tree.branch(t, u));
            minus(&xs[&u], x).is_subset(&down) && minus(&ys[&u], y).is_subset(&down)
        });
        c[3] = own.iter().all(|e| x.contains(e) || y.contains(e));
        c[4] = glued.is_independent(x)? && glued.is_coindependent(y)?;
        for e in minus(&own, x) {
            c[5] &= glued.spanning_vector(x, &e)?.is_some();
        }
        for e in minus(&own, y) {
            c[6] &= dual.spanning_vector(y, &e)?.is_some();
        }
        if c[0] {
            let comps = glued.minor(x, y)?.components();
            for &u in &children {
                let down = owned(tree, &tree.branch(t, u));
                let up = owned(tree, &tree.branch(u, t));
                if comps.iter().any(|k| !k.is_disjoint(&down) && !k.is_disjoint(&up)) {
                    c[7] = false;
                }
            }
        } else {
            c[7] = false;
        }
        nodes.push(NodeCert {
            node: t,
            x: x.clone(),
            y: y.clone(),
            conditions: c,
            branch_dual_form: dual_forms.get(&t).copied(),
        });
    }
    let x: EdgeSet = xs.values().flatten().cloned().collect();
    let y: EdgeSet = ys.values().flatten().cloned().collect();
    let partition = x.is_disjoint(&y) && x.len() + y.len() == tree.real_edges().len();
    let is_base = partition && SetSystemPair::from_presentation(glued, caps)?.is_base(&x)?.is_base;
    Ok(BaseCert {
        root,
        order,
        nodes,
        x,
        y,
        partition,
        is_base,
    })
}
