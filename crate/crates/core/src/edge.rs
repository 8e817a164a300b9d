//! Edge names and ordered ground sets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ground sets are limited to 64 elements so that subsets fit a `u64` mask.
pub const MAX_GROUND: usize = 64;

pub type Mask = u64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(Arc<str>);

impl EdgeId {
    pub fn new(name: &str) -> Self {
        EdgeId(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EdgeId {
    fn from(s: &str) -> Self {
        EdgeId::new(s)
    }
}

impl From<String> for EdgeId {
    fn from(s: String) -> Self {
        EdgeId(Arc::from(s))
    }
}

pub type EdgeSet = BTreeSet<EdgeId>;

/// Builds an edge set from names.
pub fn edge_set<I, S>(names: I) -> EdgeSet
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    names.into_iter().map(|s| EdgeId::new(s.as_ref())).collect()
}

/// Positions of the set bits of `m`, lowest first.
pub fn bits(m: Mask) -> impl Iterator<Item = usize> {
    let mut m = m;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn full_mask(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An ordered, duplicate-free list of edges.
#[derive(Clone)]
pub struct Ground {
    ids: Arc<Vec<EdgeId>>,
    index: Arc<HashMap<EdgeId, usize>>,
}

impl PartialEq for Ground {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids
    }
}

impl Eq for Ground {}

impl fmt::Debug for Ground {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.ids.iter()).finish()
    }
}

impl Ground {
    pub fn new<I, E>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<EdgeId>,
    {
        let ids: Vec<EdgeId> = ids.into_iter().map(Into::into).collect();
        if ids.len() > MAX_GROUND {
            return Err(Error::InvalidGround(format!(
                "{} elements, at most {MAX_GROUND} supported",
                ids.len()
            )));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, e) in ids.iter().enumerate() {
            if e.as_str().is_empty() {
                return Err(Error::InvalidGround("empty edge name".into()));
            }
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidGround(format!("duplicate edge `{e}`")));
            }
        }
        Ok(Ground {
            ids: Arc::new(ids),
            index: Arc::new(index),
        })
    }

    pub fn from_names(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().copied())
    }

    pub fn empty() -> Self {
        Ground::new(Vec::<EdgeId>::new()).expect("empty ground")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[EdgeId] {
        &self.ids
    }

    pub fn get(&self, i: usize) -> &EdgeId {
        &self.ids[i]
    }

    pub fn position(&self, e: &EdgeId) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn contains(&self, e: &EdgeId) -> bool {
        self.index.contains_key(e)
    }

    pub fn full(&self) -> Mask {
        full_mask(self.len())
    }

    pub fn to_set(&self) -> EdgeSet {
        self.ids.iter().cloned().collect()
    }

    /// Mask of `set`; errors if some element lies outside the ground.
    pub fn mask<'a, I>(&self, set: I) -> Result<Mask>
    where
        I: IntoIterator<Item = &'a EdgeId>,
    {
        let mut m = 0;
        for e in set {
            let i = self
                .position(e)
                .ok_or_else(|| Error::OutsideGround(e.to_string()))?;
            m |= 1 << i;
        }
        Ok(m)
    }

    /// Mask of `set ∩ ground`.
    pub fn mask_lossy<'a, I>(&self, set: I) -> Mask
    where
        I: IntoIterator<Item = &'a EdgeId>,
    {
        set.into_iter()
            .filter_map(|e| self.position(e))
            .fold(0, |m, i| m | 1 << i)
    }

    pub fn set_of(&self, m: Mask) -> EdgeSet {
        bits(m).map(|i| self.ids[i].clone()).collect()
    }

    /// Elements of `m` in ground order.
    pub fn ids_of(&self, m: Mask) -> Vec<EdgeId> {
        bits(m).map(|i| self.ids[i].clone()).collect()
    }

    /// The sub-ground on `m`, keeping the order.
    pub fn sub(&self, m: Mask) -> Ground {
        Ground::new(self.ids_of(m)).expect("subset of a valid ground")
    }

    /// Elements of `set` sorted by ground order; errors outside the ground.
    pub fn ordered(&self, set: &EdgeSet) -> Result<Vec<EdgeId>> {
        Ok(self.ids_of(self.mask(set)?))
    }

    /// This ground followed by the elements of `extra`.
    pub fn extend(&self, extra: &[EdgeId]) -> Result<Ground> {
        let mut ids: Vec<EdgeId> = self.ids.to_vec();
        ids.extend(extra.iter().cloned());
        Ground::new(ids)
    }

    /// Renders a mask as `{a,b,c}` in ground order.
    pub fn show(&self, m: Mask) -> String {
        show_ids(&self.ids_of(m))
    }
}

pub fn show_ids(ids: &[EdgeId]) -> String {
    let parts: Vec<&str> = ids.iter().map(|e| e.as_str()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn show_set(set: &EdgeSet) -> String {
    let ids: Vec<EdgeId> = set.iter().cloned().collect();
    show_ids(&ids)
}

/// Checks pairwise disjointness of the given sets.
pub fn check_disjoint(sets: &[&EdgeSet]) -> Result<()> {
    let mut seen = EdgeSet::new();
    for s in sets {
        for e in s.iter() {
            if !seen.insert(e.clone()) {
                return Err(Error::Overlap(e.to_string()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_follow_ground_order() {
        let g = Ground::from_names(&["a", "b", "c"]).unwrap();
        let m = g.mask(&edge_set(["c", "a"])).unwrap();
        assert_eq!(m, 0b101);
        assert_eq!(g.show(m), "{a,c}");
        assert_eq!(bits(m).collect::<Vec<_>>(), vec![0, 2]);
        assert!(g.mask(&edge_set(["z"])).is_err());
        assert_eq!(g.mask_lossy(&edge_set(["z", "b"])), 0b010);
    }

    #[test]
    fn rejects_bad_grounds() {
        assert!(Ground::from_names(&["a", "a"]).is_err());
        assert!(Ground::from_names(&[""]).is_err());
        let many: Vec<String> = (0..65).map(|i| format!("e{i}")).collect();
        assert!(Ground::new(many.iter().map(|s| s.as_str())).is_err());
    }

    #[test]
    fn disjointness() {
        let a = edge_set(["a", "b"]);
        let b = edge_set(["c"]);
        let c = edge_set(["b"]);
        assert!(check_disjoint(&[&a, &b]).is_ok());
        assert!(matches!(check_disjoint(&[&a, &c]), Err(Error::Overlap(e)) if e == "b"));
    }
}
