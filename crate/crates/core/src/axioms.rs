//! Axiom checks for pairs of set systems `(C, D)` over a finite ground, base
//! tests, components, and a brute-force finite matroid oracle.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::caps::Caps;
use crate::edge::{bits, full_mask, show_set, EdgeId, EdgeSet, Ground, Mask};
use crate::error::{Error, Result};
use crate::par;
use crate::presentation::{components_from_masks, Presentation};
use crate::subspace::{minimal_masks, sort_masks};
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    O1,
    O2,
    O3,
    O3Star,
    Tame,
    IM,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::O1,
        Axiom::O2,
        Axiom::O3,
        Axiom::O3Star,
        Axiom::Tame,
        Axiom::IM,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::O1 => "O1",
            Axiom::O2 => "O2",
            Axiom::O3 => "O3",
            Axiom::O3Star => "O3*",
            Axiom::Tame => "tame",
            Axiom::IM => "IM",
        }
    }
}

impl std::str::FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "O1" => Axiom::O1,
            "O2" => Axiom::O2,
            "O3" => Axiom::O3,
            "O3*" | "O3STAR" => Axiom::O3Star,
            "TAME" => Axiom::Tame,
            "IM" => Axiom::IM,
            _ => return Err(Error::Schema(format!("unknown axiom `{s}`"))),
        })
    }
}

/// Counterexample to an axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `C ∈ 𝒞`, `D ∈ 𝒟` meeting in exactly one element.
    Pair { c: EdgeSet, d: EdgeSet },
    /// A partition `E = P ∪ Q ∪ {e}` covered from neither side.
    Partition { e: EdgeId, p: EdgeSet, q: EdgeSet },
    /// A member, element and set with no minimal choice.
    Triple { member: EdgeSet, e: EdgeId, x: EdgeSet },
    /// An infinite intersection cannot occur on a finite ground; kept for
    /// completeness of the report format.
    Infinite { c: EdgeSet, d: EdgeSet },
    /// An independent `I ⊆ X` with no base of `X` containing it.
    Extension { i: EdgeSet, x: EdgeSet },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair { c, d } => write!(f, "C = {}, D = {}", show_set(c), show_set(d)),
            Witness::Partition { e, p, q } => {
                write!(f, "e = {e}, P = {}, Q = {}", show_set(p), show_set(q))
            }
            Witness::Triple { member, e, x } => {
                write!(f, "member = {}, e = {e}, X = {}", show_set(member), show_set(x))
            }
            Witness::Infinite { c, d } => write!(f, "C = {}, D = {}", show_set(c), show_set(d)),
            Witness::Extension { i, x } => write!(f, "I = {}, X = {}", show_set(i), show_set(x)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub holds: bool,
    /// Number of instances examined.
    pub checked: u64,
    /// False when the scan was sampled rather than exhaustive.
    pub exhaustive: bool,
    pub witness: Option<Witness>,
}

/// A pair `(𝒞, 𝒟)` of families of subsets of a finite ground.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystemPair {
    ground: Ground,
    cee: Vec<Mask>,
    dee: Vec<Mask>,
}

/// Re-indexes the bits of `m` that lie in `keep` onto `0..popcount(keep)`.
pub(crate) fn compress(m: Mask, keep: Mask) -> Mask {
    let mut out = 0;
    for (j, i) in bits(keep).enumerate() {
        if m >> i & 1 == 1 {
            out |= 1 << j;
        }
    }
    out
}

fn normalise(mut v: Vec<Mask>) -> Vec<Mask> {
    sort_masks(&mut v);
    v.dedup();
    v
}

impl SetSystemPair {
    pub fn new(ground: Ground, cee: &[EdgeSet], dee: &[EdgeSet]) -> Result<Self> {
        let to_masks = |fam: &[EdgeSet]| -> Result<Vec<Mask>> {
            fam.iter().map(|s| ground.mask(s)).collect()
        };
        let cee = normalise(to_masks(cee)?);
        let dee = normalise(to_masks(dee)?);
        Ok(SetSystemPair { ground, cee, dee })
    }

    pub(crate) fn from_masks(ground: Ground, cee: Vec<Mask>, dee: Vec<Mask>) -> Self {
        SetSystemPair {
            ground,
            cee: normalise(cee),
            dee: normalise(dee),
        }
    }

    /// Minimal supports of vectors and covectors.
    pub fn from_presentation(p: &Presentation, caps: &Caps) -> Result<Self> {
        Ok(Self::from_masks(
            p.ground().clone(),
            p.vectors().min_support_masks(caps)?,
            p.covectors().min_support_masks(caps)?,
        ))
    }

    /// All supports of vectors and covectors, the empty one included.
    /// Finite fields only.
    pub fn from_presentation_all(p: &Presentation, caps: &Caps) -> Result<Self> {
        let f = p.field();
        let supports = |u: &crate::Subspace| -> Result<Vec<Mask>> {
            Ok(u.members_dense(false, caps.enumeration)?
                .iter()
                .map(|r| linalg::support(f, r))
                .collect())
        };
        Ok(Self::from_masks(
            p.ground().clone(),
            supports(p.vectors())?,
            supports(p.covectors())?,
        ))
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn cee(&self) -> Vec<EdgeSet> {
        self.cee.iter().map(|&m| self.ground.set_of(m)).collect()
    }

    pub fn dee(&self) -> Vec<EdgeSet> {
        self.dee.iter().map(|&m| self.ground.set_of(m)).collect()
    }



    pub fn dual(&self) -> Self {
        SetSystemPair {
            ground: self.ground.clone(),
            cee: self.dee.clone(),
            dee: self.cee.clone(),
        }
    }

    fn restrict_fam(fam: &[Mask], keep: Mask) -> Vec<Mask> {
        fam.iter()
            .filter(|&&o| o & !keep == 0)
            .map(|&o| compress(o, keep))
            .collect()
    }

    fn contract_fam(fam: &[Mask], keep: Mask) -> Vec<Mask> {
        fam.iter().map(|&o| compress(o & keep, keep)).collect()
    }

    pub(crate) fn restrict_mask(&self, keep: Mask) -> Self {
        Self::from_masks(
            self.ground.sub(keep),
            Self::restrict_fam(&self.cee, keep),
            Self::contract_fam(&self.dee, keep),
        )
    }

    pub(crate) fn contract_mask(&self, keep: Mask) -> Self {
        Self::from_masks(
            self.ground.sub(keep),
            Self::contract_fam(&self.cee, keep),
            Self::restrict_fam(&self.dee, keep),
        )
    }

    /// `(𝒞↾X, 𝒟.X)` on `X`.
    pub fn restrict(&self, x: &EdgeSet) -> Result<Self> {
        Ok(self.restrict_mask(self.ground.mask(x)?))
    }

    /// `(𝒞.X, 𝒟↾X)` on `X`, where `𝒞.X = {o ∩ X : o ∈ 𝒞}`.
    pub fn contract(&self, x: &EdgeSet) -> Result<Self> {
        Ok(self.contract_mask(self.ground.mask(x)?))
    }

    /// `/A \ B`.
    pub(crate) fn minor_mask(&self, a: Mask, b: Mask) -> Self {
        let full = self.ground.full();
        let after_a = self.contract_mask(full & !a);
        let sub = after_a.ground.clone();
        let keep = sub.mask_lossy(self.ground.ids_of(full & !a & !b).iter());
        after_a.restrict_mask(keep)
    }

    pub(crate) fn independent_mask(&self, m: Mask) -> bool {
        !self.cee.iter().any(|&o| o != 0 && o & !m == 0)
    }

    pub fn is_independent(&self, set: &EdgeSet) -> Result<bool> {
        Ok(self.independent_mask(self.ground.mask(set)?))
    }

    pub fn check(&self, which: Axiom, caps: &Caps, seed: u64) -> Result<AxiomVerdict> {
        match which {
            Axiom::O1 => Ok(self.check_o1()),
            Axiom::O2 => self.check_o2(caps),
            Axiom::O3 => self.check_o3(false, caps),
            Axiom::O3Star => self.check_o3(true, caps),
            Axiom::Tame => Ok(self.check_tame()),
            Axiom::IM => self.check_im(caps, seed),
        }
    }

    fn check_o1(&self) -> AxiomVerdict {
        let hit = self
            .cee
            .iter()
            .flat_map(|&c| self.dee.iter().map(move |&d| (c, d)))
            .find(|(c, d)| (c & d).count_ones() == 1);
        AxiomVerdict {
            axiom: Axiom::O1,
            holds: hit.is_none(),
            checked: (self.cee.len() * self.dee.len()) as u64,
            exhaustive: true,
            witness: hit.map(|(c, d)| Witness::Pair {
                c: self.ground.set_of(c),
                d: self.ground.set_of(d),
            }),
        }
    }

    /// Partitions are visited by `e` in ground order, then `P` as an
    /// ascending bitmask over the remaining elements.
    fn check_o2(&self, caps: &Caps) -> Result<AxiomVerdict> {
        let n = self.ground.len();
        if n == 0 {
            return Ok(AxiomVerdict {
                axiom: Axiom::O2,
                holds: true,
                checked: 0,
                exhaustive: true,
                witness: None,
            });
        }
        let per_e: u64 = 1u64.checked_shl(n as u32 - 1).unwrap_or(u64::MAX);
        let total = (n as u64).saturating_mul(per_e);
        if total > caps.o2_sweep {
            return Err(Error::cap("O2 partition sweep", total, caps.o2_sweep));
        }
        let full = self.ground.full();
        let fail = par::find_first(0..total, |idx| {
            let e = (idx / per_e) as usize;
            let rest = full & !(1 << e);
            let p = expand(idx % per_e, rest);
            let q = rest & !p;
            let pe = p | 1 << e;
            let qe = q | 1 << e;
            let ok = self.cee.iter().any(|&c| c >> e & 1 == 1 && c & !pe == 0)
                || self.dee.iter().any(|&d| d >> e & 1 == 1 && d & !qe == 0);
            (!ok).then_some((e, p, q))
        });
        Ok(AxiomVerdict {
            axiom: Axiom::O2,
            holds: fail.is_none(),
            checked: fail.as_ref().map_or(total, |(i, _)| i + 1),
            exhaustive: true,
            witness: fail.map(|(_, (e, p, q))| Witness::Partition {
                e: self.ground.get(e).clone(),
                p: self.ground.set_of(p),
                q: self.ground.set_of(q),
            }),
        })
    }

    fn check_o3(&self, star: bool, caps: &Caps) -> Result<AxiomVerdict> {
        let fam = if star { &self.dee } else { &self.cee };
        let n = self.ground.len();
        let triples: Vec<(Mask, usize)> = fam
            .iter()
            .flat_map(|&c| bits(c).map(move |e| (c, e)))
            .collect();
        let per = 1u64 << n;
        let total = (triples.len() as u64).saturating_mul(per);
        if total > caps.axiom_scan {
            return Err(Error::cap("O3 scan", total, caps.axiom_scan));
        }
        let fail = par::find_first(0..total, |idx| {
            let (c, e) = triples[(idx / per) as usize];
            let x = idx % per;
            let cands: Vec<Mask> = fam
                .iter()
                .copied()
                .filter(|&o| o >> e & 1 == 1 && o & !(x | c) == 0)
                .collect();
            // some candidate whose part outside X is minimal among all
            let ok = cands.iter().any(|&o| {
                let r = o & !x;
                !cands.iter().any(|&p| {
                    let s = p & !x;
                    s & r == s && s != r
                })
            });
            (!ok).then_some((c, e, x))
        });
        let axiom = if star { Axiom::O3Star } else { Axiom::O3 };
        Ok(AxiomVerdict {
            axiom,
            holds: fail.is_none(),
            checked: fail.as_ref().map_or(total, |(i, _)| i + 1),
            exhaustive: true,
            witness: fail.map(|(_, (c, e, x))| Witness::Triple {
                member: self.ground.set_of(c),
                e: self.ground.get(e).clone(),
                x: self.ground.set_of(x),
            }),
        })
    }

    fn check_tame(&self) -> AxiomVerdict {
        // every intersection of subsets of a finite ground is finite
        AxiomVerdict {
            axiom: Axiom::Tame,
            holds: true,
            checked: (self.cee.len() * self.dee.len()) as u64,
            exhaustive: true,
            witness: None,
        }
    }

    /// Greedy extension of `i` to a maximal independent subset of `x`.
    fn extend_to_base(&self, i: Mask, x: Mask) -> Mask {
        let mut b = i;
        for e in bits(x & !i) {
            if self.independent_mask(b | 1 << e) {
                b |= 1 << e;
            }
        }
        b
    }

    fn im_holds(&self, i: Mask, x: Mask) -> bool {
        let b = self.extend_to_base(i, x);
        self.independent_mask(b) && bits(x & !b).all(|e| !self.independent_mask(b | 1 << e))
    }

    /// Exhaustive over all `(I, X)` when `|E| ≤ 6`; otherwise 200 pairs drawn
    /// from a generator seeded with `seed`.
    fn check_im(&self, caps: &Caps, seed: u64) -> Result<AxiomVerdict> {
        let n = self.ground.len();
        let mut pairs: Vec<(Mask, Mask)> = Vec::new();
        let exhaustive = n <= 6;
        if exhaustive {
            for x in 0..(1u64 << n) {
                let mut i = x;
                // all subsets of x
                loop {
                    if self.independent_mask(i) {
                        pairs.push((i, x));
                    }
                    if i == 0 {
                        break;
                    }
                    i = (i - 1) & x;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..200 {
                let x: Mask = rng.gen::<u64>() & full_mask(n);
                let mut elems: Vec<usize> = bits(x).collect();
                elems.shuffle(&mut rng);
                let mut i = 0;
                for e in elems {
                    if rng.gen_bool(0.5) && self.independent_mask(i | 1 << e) {
                        i |= 1 << e;
                    }
                }
                pairs.push((i, x));
            }
        }
        let total = pairs.len() as u64;
        if total > caps.axiom_scan {
            return Err(Error::cap("IM scan", total, caps.axiom_scan));
        }
        let fail = par::find_first(0..total, |k| {
            let (i, x) = pairs[k as usize];
            (!self.im_holds(i, x)).then_some((i, x))
        });
        Ok(AxiomVerdict {
            axiom: Axiom::IM,
            holds: fail.is_none(),
            checked: total,
            exhaustive,
            witness: fail.map(|(_, (i, x))| Witness::Extension {
                i: self.ground.set_of(i),
                x: self.ground.set_of(x),
            }),
        })
    }

    /// Base test by the exchange characterisation: every `x ∉ B` lies in a
    /// member of `𝒞` inside `B + x`, every `x ∈ B` in a member of `𝒟` inside
    /// `(E \ B) + x`.
    pub fn is_base(&self, b: &EdgeSet) -> Result<BaseVerdict> {
        let bm = self.ground.mask(b)?;
        Ok(self.is_base_mask(bm))
    }

    pub(crate) fn is_base_mask(&self, bm: Mask) -> BaseVerdict {
        let full = self.ground.full();
        let mut witnesses = Vec::new();
        let mut ok = true;
        for x in 0..self.ground.len() {
            let (fam, room) = if bm >> x & 1 == 1 {
                (&self.dee, (full & !bm) | 1 << x)
            } else {
                (&self.cee, bm | 1 << x)
            };
            let w = fam
                .iter()
                .find(|&&o| o >> x & 1 == 1 && o & !room == 0)
                .map(|&o| self.ground.set_of(o));
            ok &= w.is_some();
            witnesses.push((self.ground.get(x).clone(), w));
        }
        BaseVerdict {
            is_base: ok,
            witnesses,
        }
    }

    /// Whether some subset passes [`is_base`](Self::is_base).
    pub(crate) fn has_base(&self) -> bool {
        let n = self.ground.len();
        (0..1u64 << n).any(|b| self.is_base_mask(b).is_base)
    }

    /// Checks that every minor `/A \ B` has a base (`3^|E|` minors).
    pub fn all_minors_have_bases(&self, caps: &Caps) -> Result<bool> {
        let n = self.ground.len();
        let total = 3u64.checked_pow(n as u32).unwrap_or(u64::MAX);
        let work = total.saturating_mul(1 << n.min(63));
        if work > caps.axiom_scan {
            return Err(Error::cap("minor base scan", work, caps.axiom_scan));
        }
        let missing = par::find_first(0..total, |mut idx| {
            let (mut a, mut b) = (0u64, 0u64);
            for i in 0..n {
                match idx % 3 {
                    1 => a |= 1 << i,
                    2 => b |= 1 << i,
                    _ => {}
                }
                idx /= 3;
            }
            (!self.minor_mask(a, b).has_base()).then_some(())
        });
        Ok(missing.is_none())
    }

    /// Connected components, ordered by first element. Also checks that the
    /// `𝒟`-characterisation gives the same relation and that on every
    /// component restriction and contraction have the same minimal nonempty
    /// members.
    pub fn components(&self) -> Result<Vec<EdgeSet>> {
        let n = self.ground.len();
        let min_c = minimal_masks(self.cee.clone());
        let min_d = minimal_masks(self.dee.clone());
        let relation = |fam: &[Mask]| -> Vec<Mask> {
            (0..n)
                .map(|e| {
                    fam.iter()
                        .filter(|&&o| o >> e & 1 == 1)
                        .fold(1u64 << e, |acc, &o| acc | o)
                })
                .collect()
        };
        let rc = relation(&min_c);
        let rd = relation(&min_d);
        for e in 0..n {
            if rc[e] != rd[e] {
                let diff = (rc[e] ^ rd[e]).trailing_zeros() as usize;
                return Err(Error::NotMatroidal(format!(
                    "{} and {} share a minimal member on one side only",
                    self.ground.get(e),
                    self.ground.get(diff)
                )));
            }
        }
        let comps = components_from_masks(n, &min_c);
        for &x in &comps {
            for e in bits(x) {
                if rc[e] != x {
                    return Err(Error::NotMatroidal(format!(
                        "relation not transitive at {}",
                        self.ground.get(e)
                    )));
                }
            }
            let r = self.restrict_mask(x);
            let c = self.contract_mask(x);
            if minimal_masks(r.cee.clone()) != minimal_masks(c.cee.clone())
                || minimal_masks(r.dee.clone()) != minimal_masks(c.dee.clone())
            {
                return Err(Error::NotMatroidal(format!(
                    "restriction and contraction differ on component {}",
                    self.ground.show(x)
                )));
            }
        }
        Ok(comps.into_iter().map(|m| self.ground.set_of(m)).collect())
    }
}

/// Spreads the low bits of `k` over the set bits of `positions`.
fn expand(k: u64, positions: Mask) -> Mask {
    let mut out = 0;
    for (j, i) in bits(positions).enumerate() {
        if k >> j & 1 == 1 {
            out |= 1 << i;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseVerdict {
    pub is_base: bool,
    /// Per element in ground order, the member of `𝒞` (outside `B`) or `𝒟`
    /// (inside `B`) that certifies it, if any.
    pub witnesses: Vec<(EdgeId, Option<EdgeSet>)>,
}

/// Circuits and cocircuits of a claimed finite matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidCert {
    ground: Ground,
    circuits: Vec<Mask>,
    cocircuits: Vec<Mask>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidVerdict {
    pub valid: bool,
    pub failure: Option<String>,
    pub bases: Vec<EdgeSet>,
    pub rank: Option<usize>,
}

impl MatroidCert {
    pub fn new(ground: Ground, circuits: &[EdgeSet], cocircuits: &[EdgeSet]) -> Result<Self> {
        let to_masks = |fam: &[EdgeSet]| -> Result<Vec<Mask>> {
            fam.iter().map(|s| ground.mask(s)).collect()
        };
        Ok(MatroidCert {
            circuits: normalise(to_masks(circuits)?),
            cocircuits: normalise(to_masks(cocircuits)?),
            ground,
        })
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn circuits(&self) -> Vec<EdgeSet> {
        self.circuits.iter().map(|&m| self.ground.set_of(m)).collect()
    }

    pub fn cocircuits(&self) -> Vec<EdgeSet> {
        self.cocircuits.iter().map(|&m| self.ground.set_of(m)).collect()
    }


    pub fn as_set_systems(&self) -> SetSystemPair {
        SetSystemPair::from_masks(
            self.ground.clone(),
            self.circuits.clone(),
            self.cocircuits.clone(),
        )
    }

    /// Brute-force check of the finite circuit axioms and of duality.
    pub fn verify(&self, caps: &Caps) -> Result<MatroidVerdict> {
        let n = self.ground.len();
        if n > caps.matroid_ground {
            return Err(Error::cap("matroid oracle ground size", n as u64, caps.matroid_ground as u64));
        }
        let g = &self.ground;
        let fail = |msg: String| MatroidVerdict {
            valid: false,
            failure: Some(msg),
            bases: Vec::new(),
            rank: None,
        };
        for (name, fam) in [("circuit", &self.circuits), ("cocircuit", &self.cocircuits)] {
            if fam.contains(&0) {
                return Ok(fail(format!("empty {name}")));
            }
            for &a in fam.iter() {
                for &b in fam.iter() {
                    if a != b && a & b == a {
                        return Ok(fail(format!(
                            "{name}s not an antichain: {} ⊂ {}",
                            g.show(a),
                            g.show(b)
                        )));
                    }
                }
            }
        }
        for &a in &self.circuits {
            for &b in &self.circuits {
                if a == b {
                    continue;
                }
                for e in bits(a & b) {
                    let room = (a | b) & !(1 << e);
                    if !self.circuits.iter().any(|&c| c & !room == 0) {
                        return Ok(fail(format!(
                            "circuit elimination fails for {}, {} at {}",
                            g.show(a),
                            g.show(b),
                            g.get(e)
                        )));
                    }
                }
            }
        }
        let full = full_mask(n);
        let indep: Vec<bool> = par::map_range(0..1u64 << n, |m| {
            !self.circuits.iter().any(|&c| c & !m == 0)
        });
        let bases: Vec<Mask> = (0..1u64 << n)
            .filter(|&m| indep[m as usize] && bits(full & !m).all(|e| !indep[(m | 1 << e) as usize]))
            .collect();
        let rank = bases[0].count_ones();
        if let Some(&b) = bases.iter().find(|b| b.count_ones() != rank) {
            return Ok(fail(format!("bases of different sizes, e.g. {}", g.show(b))));
        }
        // dual circuits: minimal nonempty sets meeting every base
        let meets_all: Vec<Mask> = par::filter_map_range(1..1u64 << n, |m| {
            bases.iter().all(|&b| b & m != 0).then_some(m)
        });
        let dual = minimal_masks(meets_all);
        if dual != self.cocircuits {
            let expected: Vec<String> = dual.iter().map(|&m| g.show(m)).collect();
            return Ok(fail(format!(
                "cocircuits differ from the dual circuits [{}]",
                expected.join(", ")
            )));
        }
        let mut bases_sorted = bases;
        sort_masks(&mut bases_sorted);
        Ok(MatroidVerdict {
            valid: true,
            failure: None,
            bases: bases_sorted.iter().map(|&m| g.set_of(m)).collect(),
            rank: Some(rank as usize),
        })
    }
}

/// The matroid presented by `p`, certified by the brute-force oracle.
pub fn presented_matroid(p: &Presentation, caps: &Caps) -> Result<MatroidCert> {
    let cert = MatroidCert {
        ground: p.ground().clone(),
        circuits: p.vectors().min_support_masks(caps)?,
        cocircuits: p.covectors().min_support_masks(caps)?,
    };
    let verdict = cert.verify(caps)?;
    if !verdict.valid {
        return Err(Error::NotMatroid(verdict.failure.unwrap_or_default()));
    }
    Ok(cert)
}
