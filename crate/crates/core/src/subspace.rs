//! Subspaces of `k^E` for a finite ordered ground `E`, kept in reduced row
//! echelon form so that equal subspaces compare equal.

use std::fmt;

use crate::caps::Caps;
use crate::edge::{bits, full_mask, EdgeSet, Ground, Mask};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, Row};
use crate::par;
use crate::vector::SparseVec;

#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    field: FieldSpec,
    ground: Ground,
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

/// How [`Subspace::min_supports_with`] finds minimal supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportMethod {
    /// Whichever of the two below needs less work.
    Auto,
    /// List every member (finite fields only).
    Members,
    /// Scan subsets by size for dependent column sets of the complement.
    Subsets,
}

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn binomial_prefix_sum(n: usize, kmax: usize) -> u64 {
    let mut total: u64 = 0;
    let mut c: u128 = 1;
    for k in 0..=kmax.min(n) {
        if k > 0 {
            c = c * (n - k + 1) as u128 / k as u128;
        }
        total = total.saturating_add(c.min(u64::MAX as u128) as u64);
    }
    total
}

/// All `k`-subsets of `0..n` as masks, in increasing numeric order.
fn combinations(n: usize, k: usize) -> Vec<Mask> {
    if k == 0 {
        return vec![0];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut m: u64 = full_mask(k);
    let limit = full_mask(n);
    loop {
        out.push(m);
        if k == n {
            break;
        }
        // next mask with the same popcount (Gosper)
        let c = m & m.wrapping_neg();
        let r = m.wrapping_add(c);
        if r == 0 || r > limit {
            break;
        }
        let next = (((r ^ m) >> 2) / c) | r;
        if next > limit {
            break;
        }
        m = next;
    }
    out
}

/// Keeps the inclusion-minimal masks, sorted by size then position.
pub(crate) fn minimal_masks(mut masks: Vec<Mask>) -> Vec<Mask> {
    masks.sort_by_key(|m| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
    masks.dedup();
    let mut kept: Vec<Mask> = Vec::new();
    for m in masks {
        if m != 0 && !kept.iter().any(|&k| k & m == k) {
            kept.push(m);
        }
    }
    sort_masks(&mut kept);
    kept
}

/// Sorts by size, then lexicographically by ground positions.
pub(crate) fn sort_masks(masks: &mut [Mask]) {
    masks.sort_by_key(|m| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
}

impl Subspace {
    pub(crate) fn from_rows(field: FieldSpec, ground: Ground, mut rows: Vec<Row>) -> Self {
        let pivots = linalg::rref(field, &mut rows, ground.len());
        Subspace {
            field,
            ground,
            rows,
            pivots,
        }
    }

    pub fn zero(field: FieldSpec, ground: Ground) -> Self {
        Subspace {
            field,
            ground,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ground: Ground) -> Self {
        let n = ground.len();
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![field.zero(); n];
                r[i] = field.one();
                r
            })
            .collect();
        Self::from_rows(field, ground, rows)
    }

    /// The span of `gens`, each of which must live on `ground`.
    pub fn span(field: FieldSpec, ground: &Ground, gens: &[SparseVec]) -> Result<Self> {
        let mut rows = Vec::with_capacity(gens.len());
        for g in gens {
            field.check(&g.field())?;
            rows.push(g.to_dense(ground)?);
        }
        Ok(Self::from_rows(field, ground.clone(), rows))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub(crate) fn rows(&self) -> &[Row] {
        &self.rows
    }


    /// The canonical (reduced echelon) basis.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.rows
            .iter()
            .map(|r| SparseVec::from_dense(self.field, &self.ground, r))
            .collect()
    }

    /// Coefficients of `x` in the canonical basis, if `x` is a member.
    pub(crate) fn coords(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        let c: Vec<Scalar> = self.pivots.iter().map(|&p| x[p].clone()).collect();
        let y = linalg::combine(self.field, &self.rows, &c, self.ground.len());
        (y.as_slice() == x).then_some(c)
    }

    pub(crate) fn contains_dense(&self, x: &[Scalar]) -> bool {
        self.coords(x).is_some()
    }

    /// Membership; vectors reaching outside the ground are not members.
    pub fn contains(&self, v: &SparseVec) -> Result<bool> {
        self.field.check(&v.field())?;
        match v.to_dense(&self.ground) {
            Ok(x) => Ok(self.contains_dense(&x)),
            Err(Error::OutsideGround(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// The orthogonal complement in `k^E`.
    pub fn complement(&self) -> Subspace {
        let k = linalg::kernel(self.field, &self.rows, self.ground.len());
        Self::from_rows(self.field, self.ground.clone(), k)
    }

    pub fn is_orthogonal_to(&self, other: &Subspace) -> Result<bool> {
        self.field.check(&other.field)?;
        if self.ground != other.ground {
            return Err(Error::InvalidGround("subspaces live on different grounds".into()));
        }
        Ok(self.rows.iter().all(|a| {
            other
                .rows
                .iter()
                .all(|b| self.field.is_zero(&linalg::dot(self.field, a, b)))
        }))
    }

    fn project(&self, m: Mask, rows: &[Row]) -> Subspace {
        let cols: Vec<usize> = bits(m).collect();
        let projected = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        Self::from_rows(self.field, self.ground.sub(m), projected)
    }

    /// `{v|X : v in U}`, living on `X`.
    pub(crate) fn contract_mask(&self, m: Mask) -> Subspace {
        self.project(m, &self.rows)
    }

    /// `{v|X : v in U, supp v ⊆ X}`, living on `X`.
    pub(crate) fn restrict_mask(&self, m: Mask) -> Subspace {
        let n = self.ground.len();
        let order: Vec<usize> = (0..n)
            .filter(|&i| m >> i & 1 == 0)
            .chain((0..n).filter(|&i| m >> i & 1 == 1))
            .collect();
        let mut rows = self.rows.clone();
        let piv = linalg::rref_ordered(self.field, &mut rows, &order);
        let inside: Vec<Row> = rows
            .into_iter()
            .zip(piv)
            .filter(|(_, p)| m >> p & 1 == 1)
            .map(|(r, _)| r)
            .collect();
        self.project(m, &inside)
    }

    /// The restriction `U|X`: members supported in `X`, as a subspace of `k^X`.
    pub fn restrict(&self, x: &EdgeSet) -> Result<Subspace> {
        Ok(self.restrict_mask(self.ground.mask(x)?))
    }

    /// The contraction `U.X`: restrictions of all members to `X`.
    pub fn contract(&self, x: &EdgeSet) -> Result<Subspace> {
        Ok(self.contract_mask(self.ground.mask(x)?))
    }

    /// Members that vanish on `q`, kept on the full ground.
    pub fn vanishing_on(&self, q: &EdgeSet) -> Result<Subspace> {
        let m = self.ground.mask(q)?;
        Ok(self.vanishing_mask(m))
    }

    pub(crate) fn vanishing_mask(&self, q: Mask) -> Subspace {
        let keep = self.ground.full() & !q;
        self.restrict_mask(keep).embed_into(&self.ground)
    }

    /// Re-expresses the subspace on a ground containing the current one,
    /// padding with zeros. Also reorders when the grounds have equal sets.
    pub fn embed(&self, ground: &Ground) -> Result<Subspace> {
        for e in self.ground.ids() {
            if !ground.contains(e) {
                return Err(Error::OutsideGround(e.to_string()));
            }
        }
        Ok(self.embed_into(ground))
    }

    fn embed_into(&self, ground: &Ground) -> Subspace {
        let pos: Vec<usize> = self
            .ground
            .ids()
            .iter()
            .map(|e| ground.position(e).expect("checked superset"))
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = vec![self.field.zero(); ground.len()];
                for (x, &p) in r.iter().zip(&pos) {
                    out[p] = x.clone();
                }
                out
            })
            .collect();
        Self::from_rows(self.field, ground.clone(), rows)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.field.check(&other.field)?;
        if self.ground != other.ground {
            return Err(Error::InvalidGround("subspaces live on different grounds".into()));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self::from_rows(self.field, self.ground.clone(), rows))
    }

    /// `|U|` for finite fields, `None` for the rationals or on overflow.
    pub fn member_count(&self) -> Option<u64> {
        checked_pow(self.field.order()?, self.dim())
    }

    /// Members as dense rows. With `projective`, one nonzero representative
    /// per line (leading coefficient 1) and no zero vector.
    pub(crate) fn members_dense(&self, projective: bool, cap: u64) -> Result<Vec<Row>> {
        let p = self
            .field
            .order()
            .ok_or_else(|| Error::InfiniteField("member enumeration".into()))?;
        let d = self.dim();
        let total = checked_pow(p, d).unwrap_or(u64::MAX);
        if total > cap {
            return Err(Error::cap("member enumeration", total, cap));
        }
        let n = self.ground.len();
        let f = self.field;
        let all = par::filter_map_range(0..total, |idx| {
            let mut c = Vec::with_capacity(d);
            let mut rest = idx;
            for _ in 0..d {
                c.push(Scalar::Mod((rest % p) as u32));
                rest /= p;
            }
            c.reverse();
            if projective {
                let lead = c.iter().find(|x| !f.is_zero(x))?;
                if !f.is_one(lead) {
                    return None;
                }
            }
            Some(linalg::combine(f, &self.rows, &c, n))
        });
        Ok(all)
    }

    /// Every member, zero first. Finite fields only; capped by `caps.enumeration`.
    pub fn members(&self, caps: &Caps) -> Result<Vec<SparseVec>> {
        Ok(self
            .members_dense(false, caps.enumeration)?
            .iter()
            .map(|r| SparseVec::from_dense(self.field, &self.ground, r))
            .collect())
    }

    /// One representative per nonzero line (leading coefficient 1).
    pub fn projective_members(&self, caps: &Caps) -> Result<Vec<SparseVec>> {
        Ok(self
            .members_dense(true, caps.enumeration)?
            .iter()
            .map(|r| SparseVec::from_dense(self.field, &self.ground, r))
            .collect())
    }

    /// The inclusion-minimal supports of nonzero members, sorted by size and
    /// then by ground position.
    pub fn min_supports(&self, caps: &Caps) -> Result<Vec<EdgeSet>> {
        self.min_supports_with(SupportMethod::Auto, caps)
    }

    pub fn min_supports_with(&self, method: SupportMethod, caps: &Caps) -> Result<Vec<EdgeSet>> {
        Ok(self
            .min_support_masks_with(method, caps)?
            .into_iter()
            .map(|m| self.ground.set_of(m))
            .collect())
    }

    pub(crate) fn min_support_masks(&self, caps: &Caps) -> Result<Vec<Mask>> {
        self.min_support_masks_with(SupportMethod::Auto, caps)
    }

    pub(crate) fn min_support_masks_with(
        &self,
        method: SupportMethod,
        caps: &Caps,
    ) -> Result<Vec<Mask>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let n = self.ground.len();
        let corank = n - self.dim();
        let subset_work = binomial_prefix_sum(n, corank + 1);
        let member_work = self
            .field
            .order()
            .map(|p| (checked_pow(p, self.dim()).unwrap_or(u64::MAX) - 1) / (p - 1));
        let use_members = match method {
            SupportMethod::Members => {
                if member_work.is_none() {
                    return Err(Error::InfiniteField("member enumeration".into()));
                }
                true
            }
            SupportMethod::Subsets => false,
            SupportMethod::Auto => matches!(member_work, Some(w) if w <= subset_work),
        };
        if use_members {
            let work = member_work.expect("finite");
            if work > caps.enumeration {
                return Err(Error::cap("minimal supports", work, caps.enumeration));
            }
            let f = self.field;
            let supports: Vec<Mask> = self
                .members_dense(true, u64::MAX)?
                .iter()
                .map(|r| linalg::support(f, r))
                .collect();
            Ok(minimal_masks(supports))
        } else {
            if subset_work > caps.enumeration {
                return Err(Error::cap("minimal supports", subset_work, caps.enumeration));
            }
            Ok(self.circuits_by_subsets())
        }
    }

    /// Minimal supports of `U` are the minimal dependent column sets of any
    /// matrix whose row space is the complement of `U`.
    fn circuits_by_subsets(&self) -> Vec<Mask> {
        let f = self.field;
        let n = self.ground.len();
        let comp = self.complement();
        let a = comp.rows;
        let r = a.len();
        let column = |c: usize| -> Row { a.iter().map(|row| row[c].clone()).collect() };
        let cols: Vec<Row> = (0..n).map(column).collect();
        let mut found: Vec<Mask> = Vec::new();
        for k in 1..=(r + 1).min(n) {
            let layer = combinations(n, k);
            let prior = &found;
            let hits = par::filter_map(&layer, |&m| {
                if prior.iter().any(|&c| c & m == c) {
                    return None;
                }
                let vecs: Vec<Row> = bits(m).map(|c| cols[c].clone()).collect();
                (linalg::rank(f, vecs, r) < k).then_some(m)
            });
            found.extend(hits);
        }
        sort_masks(&mut found);
        found
    }

    pub fn show(&self) -> String {
        let parts: Vec<String> = self.basis().iter().map(|v| v.show_in(&self.ground)).collect();
        format!("span[{}]", parts.join(", "))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {:?} over {}", self.show(), self.ground, self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::{edge_set, EdgeId};
    use proptest::prelude::*;

    fn gf2() -> FieldSpec {
        FieldSpec::GF2
    }

    fn abc() -> Ground {
        Ground::from_names(&["a", "b", "c"]).unwrap()
    }

    fn v(f: FieldSpec, pairs: &[(&str, i64)]) -> SparseVec {
        SparseVec::from_ints(f, pairs)
    }

    #[test]
    fn canonical_basis_of_span() {
        let f = gf2();
        let u = Subspace::span(
            f,
            &abc(),
            &[
                v(f, &[("a", 1), ("b", 1)]),
                v(f, &[("b", 1), ("c", 1)]),
                v(f, &[("a", 1), ("c", 1)]),
            ],
        )
        .unwrap();
        assert_eq!(
            u.basis(),
            vec![v(f, &[("a", 1), ("c", 1)]), v(f, &[("b", 1), ("c", 1)])]
        );
    }

    #[test]
    fn triangle_complement_and_supports() {
        let f = gf2();
        let u = Subspace::span(f, &abc(), &[v(f, &[("a", 1), ("b", 1), ("c", 1)])]).unwrap();
        let w = u.complement();
        let expect = Subspace::span(
            f,
            &abc(),
            &[v(f, &[("a", 1), ("b", 1)]), v(f, &[("b", 1), ("c", 1)])],
        )
        .unwrap();
        assert_eq!(w, expect);
        let caps = Caps::default();
        assert_eq!(u.min_supports(&caps).unwrap(), vec![edge_set(["a", "b", "c"])]);
        assert_eq!(
            w.min_supports(&caps).unwrap(),
            vec![edge_set(["a", "b"]), edge_set(["a", "c"]), edge_set(["b", "c"])]
        );
    }

    #[test]
    fn restrict_and_contract() {
        let f = gf2();
        let u = Subspace::span(f, &abc(), &[v(f, &[("a", 1), ("b", 1), ("c", 1)])]).unwrap();
        let ab = edge_set(["a", "b"]);
        assert!(u.restrict(&ab).unwrap().is_zero());
        let c = u.contract(&ab).unwrap();
        assert_eq!(c.basis(), vec![v(f, &[("a", 1), ("b", 1)])]);
        assert!(u.restrict(&edge_set(["z"])).is_err());
    }

    #[test]
    fn membership_outside_ground_is_false() {
        let f = gf2();
        let u = Subspace::full(f, abc());
        assert!(!u.contains(&v(f, &[("z", 1)])).unwrap());
        assert!(u.contains(&v(f, &[("a", 1)])).unwrap());
    }

    #[test]
    fn combinations_enumerate_all() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(5, 5), vec![0b11111]);
        assert_eq!(combinations(3, 0), vec![0]);
        for m in combinations(6, 3) {
            assert_eq!(m.count_ones(), 3);
        }
    }

    #[test]
    fn member_cap() {
        let f = gf2();
        let g = Ground::new((0..30).map(|i| EdgeId::from(format!("e{i}")))).unwrap();
        let u = Subspace::full(f, g);
        let caps = Caps::default();
        assert!(u.members(&caps).unwrap_err().is_cap());
    }

    // Brute force over all of k^E.
    fn all_vectors(p: u32, n: usize) -> Vec<Row> {
        let f = FieldSpec::Prime(p);
        let total = (p as usize).pow(n as u32);
        (0..total)
            .map(|mut idx| {
                (0..n)
                    .map(|_| {
                        let x = (idx % p as usize) as u32;
                        idx /= p as usize;
                        f.from_i64(x as i64)
                    })
                    .collect()
            })
            .collect()
    }

    fn oracle_members(f: FieldSpec, gens: &[Row], n: usize) -> Vec<Row> {
        let p = f.order().unwrap() as u32;
        all_vectors(p, n)
            .into_iter()
            .filter(|x| {
                let mut rows = gens.to_vec();
                let r0 = linalg::rank(f, rows.clone(), n);
                rows.push(x.clone());
                linalg::rank(f, rows, n) == r0
            })
            .collect()
    }

    fn gens_strategy() -> impl Strategy<Value = (u32, usize, Vec<Vec<u32>>)> {
        (prop_oneof![Just(2u32), Just(3u32)], 1usize..=5).prop_flat_map(|(p, n)| {
            (
                Just(p),
                Just(n),
                prop::collection::vec(prop::collection::vec(0..p, n), 0..4),
            )
        })
    }

    proptest! {
        #[test]
        fn complement_matches_oracle((p, n, raw) in gens_strategy()) {
            let f = FieldSpec::Prime(p);
            let g = Ground::new((0..n).map(|i| EdgeId::from(format!("e{i}")))).unwrap();
            let gens: Vec<Row> = raw.iter().map(|r| r.iter().map(|&x| Scalar::Mod(x)).collect()).collect();
            let u = Subspace::from_rows(f, g.clone(), gens.clone());
            let comp = u.complement();
            prop_assert_eq!(u.dim() + comp.dim(), n);
            for x in all_vectors(p, n) {
                let perp = gens.iter().all(|r| f.is_zero(&linalg::dot(f, r, &x)));
                prop_assert_eq!(perp, comp.contains_dense(&x));
            }
            prop_assert_eq!(comp.complement(), u);
        }

        #[test]
        fn min_supports_match_oracle((p, n, raw) in gens_strategy()) {
            let f = FieldSpec::Prime(p);
            let g = Ground::new((0..n).map(|i| EdgeId::from(format!("e{i}")))).unwrap();
            let gens: Vec<Row> = raw.iter().map(|r| r.iter().map(|&x| Scalar::Mod(x)).collect()).collect();
            let u = Subspace::from_rows(f, g, gens.clone());
            let supports: Vec<Mask> = oracle_members(f, &gens, n)
                .iter()
                .map(|x| linalg::support(f, x))
                .filter(|&m| m != 0)
                .collect();
            let mut expect: Vec<Mask> = supports
                .iter()
                .copied()
                .filter(|&m| !supports.iter().any(|&o| o != m && o & m == o))
                .collect();
            sort_masks(&mut expect);
            expect.dedup();
            let caps = Caps::default();
            prop_assert_eq!(&u.min_support_masks_with(SupportMethod::Members, &caps).unwrap(), &expect);
            prop_assert_eq!(&u.min_support_masks_with(SupportMethod::Subsets, &caps).unwrap(), &expect);
        }

        #[test]
        fn restriction_and_contraction_match_oracle((p, n, raw) in gens_strategy(), m in 0u64..32) {
            let f = FieldSpec::Prime(p);
            let m = m & full_mask(n);
            let g = Ground::new((0..n).map(|i| EdgeId::from(format!("e{i}")))).unwrap();
            let gens: Vec<Row> = raw.iter().map(|r| r.iter().map(|&x| Scalar::Mod(x)).collect()).collect();
            let u = Subspace::from_rows(f, g, gens.clone());
            let members = oracle_members(f, &gens, n);
            let cols: Vec<usize> = bits(m).collect();
            let proj = |x: &Row| -> Row { cols.iter().map(|&c| x[c].clone()).collect() };
            let r = u.restrict_mask(m);
            let c = u.contract_mask(m);
            let inside: Vec<Row> = members.iter().filter(|x| linalg::support(f, x) & !m == 0).map(proj).collect();
            let all: Vec<Row> = members.iter().map(proj).collect();
            prop_assert_eq!(r, Subspace::from_rows(f, u.ground().sub(m), inside));
            prop_assert_eq!(c, Subspace::from_rows(f, u.ground().sub(m), all));
        }
    }
}
