//! Presentations: a space of vectors together with its orthogonal complement
//! of covectors, their minors, and the element-adjoining construction.

use crate::caps::Caps;
use crate::edge::{bits, EdgeId, EdgeSet, Ground, Mask};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{self, Row};
use crate::subspace::Subspace;
use crate::vector::SparseVec;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    v: Subspace,
    w: Subspace,
}

impl Presentation {
    /// Builds a presentation from vector generators and optional covector
    /// generators. Without covectors the complement is used; with them they
    /// must span exactly the complement.
    pub fn new(
        field: FieldSpec,
        ground: &Ground,
        vectors: &[SparseVec],
        covectors: Option<&[SparseVec]>,
    ) -> Result<Self> {
        let v = Subspace::span(field, ground, vectors)?;
        match covectors {
            None => Ok(Self::from_vectors(v)),
            Some(ws) => Self::from_pair(v, Subspace::span(field, ground, ws)?),
        }
    }

    pub fn from_vectors(v: Subspace) -> Self {
        let w = v.complement();
        Presentation { v, w }
    }

    pub fn from_covectors(w: Subspace) -> Self {
        Self::from_vectors(w).dual()
    }

    pub fn from_pair(v: Subspace, w: Subspace) -> Result<Self> {
        v.field().check(&w.field())?;
        if v.ground() != w.ground() {
            return Err(Error::InvalidGround(
                "vectors and covectors live on different grounds".into(),
            ));
        }
        if !v.is_orthogonal_to(&w)? {
            return Err(Error::NotOrthogonal(format!(
                "{} and {}",
                v.show(),
                w.show()
            )));
        }
        if v.dim() + w.dim() != v.ground().len() {
            return Err(Error::NotComplement {
                dim_v: v.dim(),
                dim_w: w.dim(),
                ground: v.ground().len(),
            });
        }
        Ok(Presentation { v, w })
    }

    pub fn field(&self) -> FieldSpec {
        self.v.field()
    }

    pub fn ground(&self) -> &Ground {
        self.v.ground()
    }

    pub fn vectors(&self) -> &Subspace {
        &self.v
    }

    pub fn covectors(&self) -> &Subspace {
        &self.w
    }

    /// Swaps vectors and covectors.
    pub fn dual(&self) -> Presentation {
        Presentation {
            v: self.w.clone(),
            w: self.v.clone(),
        }
    }

    /// `Π / P \ Q` on `E \ (P ∪ Q)`.
    pub fn minor(&self, p: &EdgeSet, q: &EdgeSet) -> Result<Self> {
        let g = self.ground();
        let pm = g.mask(p)?;
        let qm = g.mask(q)?;
        if pm & qm != 0 {
            return Err(Error::Overlap(g.ids_of(pm & qm)[0].to_string()));
        }
        Ok(self.minor_mask(pm, qm))
    }

    pub(crate) fn minor_mask(&self, p: Mask, q: Mask) -> Self {
        let keep = self.ground().full() & !p & !q;
        if p == 0 && q == 0 {
            return self.clone();
        }
        // contract P then delete Q on the vector side; dually on the covectors
        let vp = self.v.contract_mask(self.ground().full() & !p);
        let wp = self.w.restrict_mask(self.ground().full() & !p);
        let sub = vp.ground().clone();
        let km = sub.mask_lossy(self.ground().ids_of(keep).iter());
        Presentation {
            v: vp.restrict_mask(km),
            w: wp.contract_mask(km),
        }
    }

    pub fn delete(&self, q: &EdgeSet) -> Result<Self> {
        self.minor(&EdgeSet::new(), q)
    }

    pub fn contract(&self, p: &EdgeSet) -> Result<Self> {
        self.minor(p, &EdgeSet::new())
    }

    /// `Π↾X = (V↾X, W.X)`, i.e. delete everything outside `X`.
    pub fn restrict_to(&self, x: &EdgeSet) -> Result<Self> {
        let m = self.ground().mask(x)?;
        Ok(self.minor_mask(0, self.ground().full() & !m))
    }

    /// `Π.X = (V.X, W↾X)`, i.e. contract everything outside `X`.
    pub fn contract_to(&self, x: &EdgeSet) -> Result<Self> {
        let m = self.ground().mask(x)?;
        Ok(self.minor_mask(self.ground().full() & !m, 0))
    }

    /// `Π_x` on `E + *`: vectors gain `x - 1_*`, each covector `w` gains
    /// `w(*) = w·x`.
    pub fn adjoin(&self, x: &SparseVec, star: &str) -> Result<Self> {
        let f = self.field();
        f.check(&x.field())?;
        let star = EdgeId::new(star);
        if self.ground().contains(&star) {
            return Err(Error::StarPresent(star.to_string()));
        }
        let xd = x.to_dense(self.ground())?;
        let g = self.ground().extend(std::slice::from_ref(&star))?;
        let mut vrows: Vec<Row> = self
            .v
            .rows()
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(f.zero());
                r
            })
            .collect();
        let mut extra = xd.clone();
        extra.push(f.from_i64(-1));
        vrows.push(extra);
        let wrows: Vec<Row> = self
            .w
            .rows()
            .iter()
            .map(|r| {
                let mut out = r.clone();
                out.push(linalg::dot(f, r, &xd));
                out
            })
            .collect();
        Self::from_pair(
            Subspace::from_rows(f, g.clone(), vrows),
            Subspace::from_rows(f, g, wrows),
        )
    }

    /// No nonzero vector is supported inside `set`.
    pub fn is_independent(&self, set: &EdgeSet) -> Result<bool> {
        Ok(self.is_independent_mask(self.ground().mask(set)?))
    }

    pub(crate) fn is_independent_mask(&self, m: Mask) -> bool {
        self.v.restrict_mask(m).is_zero()
    }

    pub fn is_coindependent(&self, set: &EdgeSet) -> Result<bool> {
        self.dual().is_independent(set)
    }

    /// A vector `v` with `e ∈ supp v ⊆ set + e`, if one exists.
    pub fn spanning_vector(&self, set: &EdgeSet, e: &EdgeId) -> Result<Option<SparseVec>> {
        let g = self.ground();
        let m = g.mask(set)?;
        let i = g
            .position(e)
            .ok_or_else(|| Error::OutsideGround(e.to_string()))?;
        Ok(spanning_in(&self.v, m, i).map(|r| SparseVec::from_dense(self.field(), g, &r)))
    }

    /// The minimal supports of vectors (circuits of the presented matroid).
    pub fn circuits(&self, caps: &Caps) -> Result<Vec<EdgeSet>> {
        self.v.min_supports(caps)
    }

    pub fn cocircuits(&self, caps: &Caps) -> Result<Vec<EdgeSet>> {
        self.w.min_supports(caps)
    }

    /// Among vectors `v` with `v↾F = v0↾F` and `supp v ⊆ supp v0 ∪ X`, one
    /// whose `supp v \ X` is inclusion-minimal. Coordinates outside `X` are
    /// dropped greedily from the last in ground order, so the support chosen
    /// is the least in colex order; the vector is the particular solution
    /// with free coefficients zero.
    pub fn minimal_extension(
        &self,
        v0: &SparseVec,
        f: &EdgeSet,
        x: &EdgeSet,
    ) -> Result<SparseVec> {
        let g = self.ground();
        let fm = g.mask(f)?;
        let xm = g.mask(x)?;
        if fm & xm != 0 {
            return Err(Error::Overlap(g.ids_of(fm & xm)[0].to_string()));
        }
        let d0 = v0
            .to_dense(g)
            .map_err(|_| Error::NotAVector(v0.to_string()))?;
        if !self.v.contains_dense(&d0) {
            return Err(Error::NotAVector(v0.to_string()));
        }
        let out = minimal_extension_in(&self.v, &d0, fm, xm);
        Ok(SparseVec::from_dense(self.field(), g, &out))
    }

    /// A Π-independent `P' ⊆ P` with `(Π/P)↾F = (Π/P')↾F`.
    pub fn independent_shrink(&self, f: &EdgeSet, p: &EdgeSet) -> Result<EdgeSet> {
        let g = self.ground();
        let fm = g.mask(f)?;
        let pm = g.mask(p)?;
        if fm & pm != 0 {
            return Err(Error::Overlap(g.ids_of(fm & pm)[0].to_string()));
        }
        Ok(g.set_of(self.independent_shrink_mask(fm, pm)?))
    }

    pub(crate) fn independent_shrink_mask(&self, fm: Mask, pm: Mask) -> Result<Mask> {
        let g = self.ground();
        let n = g.len();
        let field = self.field();
        let inside = self.v.vanishing_mask(g.full() & !(fm | pm));
        let fcols: Vec<usize> = bits(fm).collect();
        // basis of (Π/P)↾F, i.e. {v↾F : supp v ⊆ F ∪ P}
        let target = inside.contract_mask(fm);
        let mut acc: Mask = 0;
        for b in target.rows() {
            let eqs: Vec<Row> = fcols
                .iter()
                .map(|&c| inside.rows().iter().map(|r| r[c].clone()).collect())
                .collect();
            let coeffs = linalg::solve(field, &eqs, b, inside.dim())
                .ok_or_else(|| Error::Invariant("basis vector has no lift".into()))?;
            let lift = linalg::combine(field, inside.rows(), &coeffs, n);
            let v = minimal_extension_in(&self.v, &lift, fm, acc);
            acc |= linalg::support(field, &v) & !fm;
        }
        if !self.is_independent_mask(acc) {
            return Err(Error::Invariant(format!(
                "shrunk set {} is dependent",
                g.show(acc)
            )));
        }
        let lhs = self.minor_mask(pm, 0);
        let rhs = self.minor_mask(acc, 0);
        let on_f = |pres: &Presentation| {
            let sub = pres.ground();
            let keep = sub.mask_lossy(g.ids_of(fm).iter());
            pres.minor_mask(0, sub.full() & !keep)
        };
        if on_f(&lhs) != on_f(&rhs) {
            return Err(Error::Invariant("shrinking changed the restriction to F".into()));
        }
        Ok(acc)
    }

    /// Disjoint `P_F, Q_F ⊆ E \ F` such that `Π / P_F \ Q_F` agrees with `Π`
    /// on both `↾F` and `.F`. `Q_F` is everything outside `P_F` and the
    /// enlarged finite set `F'`.
    pub fn localize(&self, f: &EdgeSet) -> Result<(EdgeSet, EdgeSet)> {
        let g = self.ground();
        let fm = g.mask(f)?;
        let (p, q) = self.localize_mask(fm)?;
        Ok((g.set_of(p), g.set_of(q)))
    }

    pub(crate) fn localize_mask(&self, fm: Mask) -> Result<(Mask, Mask)> {
        let g = self.ground();
        let uv = lift_union(&self.v, fm);
        let uw = lift_union(&self.w, fm);
        let f_prime = fm | (uv & uw);
        let p = uv & !f_prime;
        let q = g.full() & !(p | f_prime);
        let minor = self.minor_mask(p, q);
        let fset = g.set_of(fm);
        if minor.restrict_to(&fset)? != self.restrict_to(&fset)?
            || minor.contract_to(&fset)? != self.contract_to(&fset)?
        {
            return Err(Error::Invariant("localisation changed the minors on F".into()));
        }
        Ok((p, q))
    }

    /// Connected components of the presented matroid, ordered by first
    /// element. Computed from the fundamental circuits given by the rows of
    /// the reduced echelon basis of the vectors.
    pub fn components(&self) -> Vec<EdgeSet> {
        let g = self.ground();
        let masks: Vec<Mask> = self
            .v
            .rows()
            .iter()
            .map(|r| linalg::support(self.field(), r))
            .collect();
        components_from_masks(g.len(), &masks)
            .into_iter()
            .map(|m| g.set_of(m))
            .collect()
    }

    pub fn show(&self) -> String {
        format!("V = {}; W = {}", self.v.show(), self.w.show())
    }
}

/// A member of `u` with `e` in its support and support inside `set + e`.
pub(crate) fn spanning_in(u: &Subspace, set: Mask, e: usize) -> Option<Row> {
    let g = u.ground();
    let inside = u.vanishing_mask(g.full() & !(set | 1 << e));
    inside
        .rows()
        .iter()
        .find(|r| !u.field().is_zero(&r[e]))
        .cloned()
}

/// Greedy minimal extension inside an arbitrary subspace (dense form).
pub(crate) fn minimal_extension_in(u: &Subspace, d0: &[crate::Scalar], fm: Mask, xm: Mask) -> Row {
    let field = u.field();
    let g = u.ground();
    let n = g.len();
    let s0 = linalg::support(field, d0);
    let allowed = s0 | xm;
    let space = u.vanishing_mask(g.full() & !allowed);
    let k = space.dim();
    let column = |c: usize| -> Row { space.rows().iter().map(|r| r[c].clone()).collect() };
    let mut base_eqs: Vec<Row> = Vec::new();
    let mut base_rhs: Vec<crate::Scalar> = Vec::new();
    for c in bits(fm) {
        base_eqs.push(column(c));
        base_rhs.push(d0[c].clone());
    }
    let mut zeros: Vec<usize> = Vec::new();
    let candidates: Vec<usize> = bits(s0 & !xm & !fm).collect();
    let solve_with = |zeros: &[usize]| {
        let mut eqs = base_eqs.clone();
        let mut rhs = base_rhs.clone();
        for &z in zeros {
            eqs.push(column(z));
            rhs.push(field.zero());
        }
        linalg::solve(field, &eqs, &rhs, k)
    };
    for &r in candidates.iter().rev() {
        zeros.push(r);
        if solve_with(&zeros).is_none() {
            zeros.pop();
        }
    }
    let coeffs = solve_with(&zeros).expect("v0 itself is a solution");
    linalg::combine(field, space.rows(), &coeffs, n)
}

/// Union of supports of minimal-support lifts of a basis of `u.F`.
fn lift_union(u: &Subspace, fm: Mask) -> Mask {
    let field = u.field();
    let n = u.ground().len();
    let fcols: Vec<usize> = bits(fm).collect();
    let eqs: Vec<Row> = fcols
        .iter()
        .map(|&c| u.rows().iter().map(|r| r[c].clone()).collect())
        .collect();
    let mut union = 0;
    for b in u.contract_mask(fm).rows() {
        let coeffs = linalg::solve(field, &eqs, b, u.dim()).expect("contraction rows lift");
        let lift = linalg::combine(field, u.rows(), &coeffs, n);
        union |= linalg::support(field, &minimal_extension_in(u, &lift, fm, 0));
    }
    union
}

/// Groups `0..n` by overlapping masks; elements in no mask are singletons.
pub(crate) fn components_from_masks(n: usize, masks: &[Mask]) -> Vec<Mask> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for &m in masks {
        let mut it = bits(m);
        if let Some(first) = it.next() {
            for j in it {
                let a = find(&mut parent, first);
                let b = find(&mut parent, j);
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut comps: Vec<Mask> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(idx) => comps[idx] |= 1 << i,
            None => {
                root_of[r] = Some(comps.len());
                comps.push(1 << i);
            }
        }
    }
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::edge_set;
    use crate::field::Scalar;
    use proptest::prelude::*;

    fn tri() -> Presentation {
        let f = FieldSpec::GF2;
        let g = Ground::from_names(&["a", "b", "c"]).unwrap();
        Presentation::new(f, &g, &[SparseVec::from_ints(f, &[("a", 1), ("b", 1), ("c", 1)])], None)
            .unwrap()
    }

    fn span(f: FieldSpec, g: &Ground, vs: &[&[(&str, i64)]]) -> Subspace {
        let gens: Vec<SparseVec> = vs.iter().map(|p| SparseVec::from_ints(f, p)).collect();
        Subspace::span(f, g, &gens).unwrap()
    }

    #[test]
    fn construction_checks_complement() {
        let f = FieldSpec::GF2;
        let g = Ground::from_names(&["a", "b", "c"]).unwrap();
        let t = tri();
        assert_eq!(*t.covectors(), span(f, &g, &[&[("a", 1), ("b", 1)], &[("b", 1), ("c", 1)]]));
        let err = Presentation::new(
            f,
            &g,
            &[SparseVec::from_ints(f, &[("a", 1), ("b", 1), ("c", 1)])],
            Some(&[SparseVec::from_ints(f, &[("a", 1), ("b", 1)])]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotComplement { dim_v: 1, dim_w: 1, ground: 3 }));
        let err = Presentation::new(
            f,
            &g,
            &[SparseVec::from_ints(f, &[("a", 1)])],
            Some(&[SparseVec::from_ints(f, &[("a", 1)])]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal(_)));
        let single = Ground::from_names(&["a"]).unwrap();
        let p = Presentation::new(f, &single, &[SparseVec::from_ints(f, &[("a", 1)])], None).unwrap();
        assert!(p.covectors().is_zero());
    }

    #[test]
    fn triangle_minors() {
        let f = FieldSpec::GF2;
        let t = tri();
        let ab = Ground::from_names(&["a", "b"]).unwrap();
        let c = t.contract(&edge_set(["c"])).unwrap();
        assert_eq!(*c.vectors(), span(f, &ab, &[&[("a", 1), ("b", 1)]]));
        assert_eq!(*c.covectors(), span(f, &ab, &[&[("a", 1), ("b", 1)]]));
        let d = t.delete(&edge_set(["c"])).unwrap();
        assert!(d.vectors().is_zero());
        assert_eq!(*d.covectors(), Subspace::full(f, ab));
        assert_eq!(t.minor(&EdgeSet::new(), &EdgeSet::new()).unwrap(), t);
        assert!(matches!(
            t.minor(&edge_set(["a"]), &edge_set(["a"])),
            Err(Error::Overlap(_))
        ));
    }

    #[test]
    fn adjoin_examples() {
        let f = FieldSpec::GF2;
        let a = Ground::from_names(&["a"]).unwrap();
        let p = Presentation::from_vectors(Subspace::full(f, a));
        let px = p.adjoin(&SparseVec::from_ints(f, &[("a", 1)]), "*").unwrap();
        assert_eq!(px.vectors().dim(), 2);
        assert!(px.covectors().is_zero());
        assert!(matches!(
            px.adjoin(&SparseVec::zero(f), "*"),
            Err(Error::StarPresent(_))
        ));
        let t = tri().adjoin(&SparseVec::zero(f), "*").unwrap();
        let star = edge_set(["*"]);
        assert!(t.vectors().contains(&SparseVec::indicator(f, &star)).unwrap());
        assert!(t.covectors().basis().iter().all(|w| w.get(&EdgeId::new("*")) == Scalar::Mod(0)));
    }

    #[test]
    fn adjoin_commutes_with_minor_on_triangle() {
        let f = FieldSpec::GF2;
        let x = SparseVec::from_ints(f, &[("a", 1)]);
        let lhs = tri().adjoin(&x, "*").unwrap().contract(&edge_set(["b"])).unwrap();
        let rhs = tri().contract(&edge_set(["b"])).unwrap().adjoin(&x, "*").unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn minimal_extension_examples() {
        let f = FieldSpec::GF2;
        let t = tri();
        let v0 = SparseVec::from_ints(f, &[("a", 1), ("b", 1), ("c", 1)]);
        let all = edge_set(["a", "b", "c"]);
        assert_eq!(t.minimal_extension(&v0, &all, &EdgeSet::new()).unwrap(), v0);
        let v = t.minimal_extension(&v0, &edge_set(["a"]), &edge_set(["b", "c"])).unwrap();
        assert_eq!(v.get(&EdgeId::new("a")), f.one());
        assert_eq!(t.minimal_extension(&v0, &edge_set(["a"]), &EdgeSet::new()).unwrap(), v0);
        let bad = SparseVec::from_ints(f, &[("a", 1)]);
        assert!(matches!(
            t.minimal_extension(&bad, &EdgeSet::new(), &EdgeSet::new()),
            Err(Error::NotAVector(_))
        ));
    }

    #[test]
    fn pinned_coordinates_can_make_the_support_dependent() {
        // with F pinned, supp(v) \ X may be a circuit; only the part outside
        // X ∪ F is guaranteed independent in Π/X
        let f = FieldSpec::GF2;
        let t = tri();
        let v0 = SparseVec::from_ints(f, &[("a", 1), ("b", 1), ("c", 1)]);
        let v = t.minimal_extension(&v0, &edge_set(["a"]), &EdgeSet::new()).unwrap();
        assert!(!t.is_independent(&v.support()).unwrap());
        assert!(t.is_independent(&edge_set(["b", "c"])).unwrap());
    }

    #[test]
    fn shrink_on_triangle() {
        let t = tri();
        let p = t.independent_shrink(&edge_set(["a"]), &edge_set(["b", "c"])).unwrap();
        assert_eq!(p, edge_set(["b", "c"]));
        assert_eq!(t.independent_shrink(&edge_set(["a"]), &p).unwrap(), p);
        assert!(t.independent_shrink(&edge_set(["a"]), &EdgeSet::new()).unwrap().is_empty());
        // {b} alone loses the vector on {a}
        let a = edge_set(["a"]);
        let with_b = t.contract(&edge_set(["b"])).unwrap().restrict_to(&a).unwrap();
        let with_bc = t.contract(&edge_set(["b", "c"])).unwrap().restrict_to(&a).unwrap();
        assert_ne!(with_b, with_bc);
    }

    #[test]
    fn localize_on_triangle() {
        let t = tri();
        let a = edge_set(["a"]);
        let (p, q) = t.localize(&a).unwrap();
        assert!(p.is_disjoint(&q) && !p.contains(&EdgeId::new("a")));
        let m = t.minor(&p, &q).unwrap();
        assert_eq!(m.restrict_to(&a).unwrap(), t.restrict_to(&a).unwrap());
        assert_eq!(m.contract_to(&a).unwrap(), t.contract_to(&a).unwrap());
        assert_eq!(t.localize(&t.ground().to_set()).unwrap(), (EdgeSet::new(), EdgeSet::new()));
    }

    #[test]
    fn components_of_two_triangles() {
        let f = FieldSpec::GF2;
        let g = Ground::from_names(&["a", "b", "c", "d", "e", "x", "y"]).unwrap();
        let v = span(f, &g, &[&[("a", 1), ("b", 1), ("c", 1)], &[("d", 1), ("e", 1)], &[("y", 1)]]);
        let comps = Presentation::from_vectors(v).components();
        assert_eq!(
            comps,
            vec![edge_set(["a", "b", "c"]), edge_set(["d", "e"]), edge_set(["x"]), edge_set(["y"])]
        );
    }

    // Random presentations over GF(2) / GF(3) on e0..e{n-1}.
    fn pres_strategy(max_n: usize) -> impl Strategy<Value = Presentation> {
        (prop_oneof![Just(2u32), Just(3u32)], 1usize..=max_n)
            .prop_flat_map(|(p, n)| {
                (Just(p), Just(n), prop::collection::vec(prop::collection::vec(0..p, n), 0..=n))
            })
            .prop_map(|(p, n, raw)| {
                let f = FieldSpec::Prime(p);
                let g = Ground::new((0..n).map(|i| EdgeId::from(format!("e{i}")))).unwrap();
                let rows = raw.iter().map(|r| r.iter().map(|&x| Scalar::Mod(x)).collect()).collect();
                Presentation::from_vectors(Subspace::from_rows(f, g, rows))
            })
    }

    fn oracle_members(u: &Subspace) -> Vec<Row> {
        u.members_dense(false, u64::MAX).unwrap()
    }

    proptest! {
        #[test]
        fn supports_satisfy_o1(pres in pres_strategy(7)) {
            let f = pres.field();
            let vs: Vec<Mask> = oracle_members(pres.vectors()).iter().map(|r| linalg::support(f, r)).collect();
            let ws: Vec<Mask> = oracle_members(pres.covectors()).iter().map(|r| linalg::support(f, r)).collect();
            for a in &vs {
                for b in &ws {
                    prop_assert_ne!((a & b).count_ones(), 1);
                }
            }
        }

        #[test]
        fn minors_are_presentations(pres in pres_strategy(7), p in any::<u64>(), q in any::<u64>()) {
            let full = pres.ground().full();
            let p = p & full;
            let q = q & full & !p;
            let m = pres.minor_mask(p, q);
            prop_assert_eq!(m.covectors(), &m.vectors().complement());
            // contraction and deletion commute
            let seq = pres.minor_mask(p, 0);
            let sub = seq.ground().clone();
            let q2 = sub.mask_lossy(pres.ground().ids_of(q).iter());
            prop_assert_eq!(seq.minor_mask(0, q2), m);
        }

        #[test]
        fn restriction_dual_to_contraction(pres in pres_strategy(6), x in any::<u64>()) {
            let x = x & pres.ground().full();
            let r = pres.vectors().restrict_mask(x);
            let c = pres.covectors().contract_mask(x);
            prop_assert_eq!(r.complement(), c);
        }

        #[test]
        fn adjoin_commutes_with_minors(pres in pres_strategy(6), xs in prop::collection::vec(0u32..3, 6), p in any::<u64>(), q in any::<u64>()) {
            let f = pres.field();
            let g = pres.ground().clone();
            let n = g.len();
            let xm: Mask = if n > 1 { 0b11 & g.full() } else { 1 };
            let x = SparseVec::from_pairs(f, (0..n).filter(|i| xm >> i & 1 == 1).map(|i| (g.get(i).clone(), f.from_i64(xs[i] as i64))));
            let p = p & g.full() & !xm;
            let q = q & g.full() & !xm & !p;
            let lhs = pres.adjoin(&x, "*").unwrap();
            let lg = lhs.ground().clone();
            let lhs = lhs.minor_mask(lg.mask_lossy(g.ids_of(p).iter()), lg.mask_lossy(g.ids_of(q).iter()));
            let rhs = pres.minor_mask(p, q).adjoin(&x, "*").unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn minimal_extension_is_minimal(pres in pres_strategy(6), pick in any::<u64>(), fmask in any::<u64>(), xmask in any::<u64>()) {
            let field = pres.field();
            let g = pres.ground().clone();
            let members = oracle_members(pres.vectors());
            let d0 = members[(pick % members.len() as u64) as usize].clone();
            let fm = fmask & g.full();
            let xm = xmask & g.full() & !fm;
            let v = minimal_extension_in(pres.vectors(), &d0, fm, xm);
            let s0 = linalg::support(field, &d0);
            let in_l = |r: &Row| {
                bits(fm).all(|c| r[c] == d0[c]) && linalg::support(field, r) & !(s0 | xm) == 0
            };
            prop_assert!(pres.vectors().contains_dense(&v));
            prop_assert!(in_l(&v));
            let sv = linalg::support(field, &v) & !xm;
            for r in members.iter().filter(|r| in_l(r)) {
                let sr = linalg::support(field, r) & !xm;
                prop_assert!(!(sr & sv == sr && sr != sv), "found smaller support");
            }
            // the part outside X ∪ F is independent after contracting X
            let rest = sv & !fm;
            let cx = pres.minor_mask(xm, 0);
            let sub = cx.ground().clone();
            prop_assert!(cx.is_independent_mask(sub.mask_lossy(g.ids_of(rest).iter())));
        }

        #[test]
        fn shrink_postconditions(pres in pres_strategy(7), fmask in any::<u64>(), pmask in any::<u64>()) {
            let g = pres.ground().clone();
            let fm = fmask & g.full();
            let pm = pmask & g.full() & !fm;
            let out = pres.independent_shrink_mask(fm, pm).unwrap();
            prop_assert_eq!(out & !pm, 0);
            prop_assert!(pres.is_independent_mask(out));
            prop_assert_eq!(pres.independent_shrink_mask(fm, out).unwrap(), out);
        }

        #[test]
        fn localize_postconditions(pres in pres_strategy(7), fmask in any::<u64>()) {
            let fm = fmask & pres.ground().full();
            let (p, q) = pres.localize_mask(fm).unwrap();
            prop_assert_eq!(p & q, 0);
            prop_assert_eq!((p | q) & fm, 0);
        }

        #[test]
        fn components_match_circuit_overlaps(pres in pres_strategy(7)) {
            let g = pres.ground().clone();
            let circuits = pres.vectors().min_support_masks(&Caps::default()).unwrap();
            let expect = components_from_masks(g.len(), &circuits);
            let got: Vec<Mask> = pres.components().iter().map(|s| g.mask(s).unwrap()).collect();
            prop_assert_eq!(got, expect);
        }
    }
}
