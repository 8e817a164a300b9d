//! Finitely supported vectors `E -> k`, stored sparsely.

use std::collections::BTreeMap;
use std::fmt;

use crate::edge::{EdgeId, EdgeSet, Ground};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec {
    field: FieldSpec,
    entries: BTreeMap<EdgeId, Scalar>,
}

impl SparseVec {
    pub fn zero(field: FieldSpec) -> Self {
        SparseVec {
            field,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a vector from `(edge, value)` pairs; zero values are dropped and
    /// repeated edges are summed.
    pub fn from_pairs<I>(field: FieldSpec, pairs: I) -> Self
    where
        I: IntoIterator<Item = (EdgeId, Scalar)>,
    {
        let mut v = SparseVec::zero(field);
        for (e, x) in pairs {
            let cur = v.get(&e);
            v.set(e, field.add(&cur, &x));
        }
        v
    }

    /// Convenience constructor from small integers, e.g. `[("a", 1), ("b", -1)]`.
    pub fn from_ints(field: FieldSpec, pairs: &[(&str, i64)]) -> Self {
        Self::from_pairs(
            field,
            pairs.iter().map(|(e, x)| (EdgeId::new(e), field.from_i64(*x))),
        )
    }

    /// The indicator vector of `set`.
    pub fn indicator(field: FieldSpec, set: &EdgeSet) -> Self {
        Self::from_pairs(field, set.iter().map(|e| (e.clone(), field.one())))
    }

    /// Parses `a:1,b:-1,c:2/3`.
    pub fn parse(field: FieldSpec, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (e, x) = part
                .split_once(':')
                .ok_or_else(|| Error::Schema(format!("expected edge:value, got `{part}`")))?;
            pairs.push((EdgeId::new(e.trim()), field.parse(x)?));
        }
        Ok(Self::from_pairs(field, pairs))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, e: &EdgeId) -> Scalar {
        self.entries
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, e: EdgeId, x: Scalar) {
        if self.field.is_zero(&x) {
            self.entries.remove(&e);
        } else {
            self.entries.insert(e, x);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&EdgeId, &Scalar)> {
        self.entries.iter()
    }

    pub fn support(&self) -> EdgeSet {
        self.entries.keys().cloned().collect()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dot(&self, other: &SparseVec) -> Result<Scalar> {
        self.field.check(&other.field)?;
        let f = self.field;
        let (small, large) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = f.zero();
        for (e, x) in &small.entries {
            if let Some(y) = large.entries.get(e) {
                acc = f.add(&acc, &f.mul(x, y));
            }
        }
        Ok(acc)
    }

    pub fn is_orthogonal(&self, other: &SparseVec) -> Result<bool> {
        Ok(self.field.is_zero(&self.dot(other)?))
    }

    pub fn add(&self, other: &SparseVec) -> Result<SparseVec> {
        self.field.check(&other.field)?;
        let mut out = self.clone();
        for (e, y) in &other.entries {
            let cur = out.get(e);
            out.set(e.clone(), self.field.add(&cur, y));
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        let f = self.field;
        SparseVec::from_pairs(f, self.entries.iter().map(|(e, x)| (e.clone(), f.mul(c, x))))
    }

    pub fn neg(&self) -> SparseVec {
        self.scale(&self.field.from_i64(-1))
    }

    /// The restriction `v|X`.
    pub fn restrict(&self, set: &EdgeSet) -> SparseVec {
        SparseVec {
            field: self.field,
            entries: self
                .entries
                .iter()
                .filter(|(e, _)| set.contains(*e))
                .map(|(e, x)| (e.clone(), x.clone()))
                .collect(),
        }
    }

    /// Values in ground order; errors if the support leaves the ground.
    pub fn to_dense(&self, ground: &Ground) -> Result<Vec<Scalar>> {
        let mut out = vec![self.field.zero(); ground.len()];
        for (e, x) in &self.entries {
            let i = ground
                .position(e)
                .ok_or_else(|| Error::OutsideGround(e.to_string()))?;
            out[i] = x.clone();
        }
        Ok(out)
    }

    pub fn from_dense(field: FieldSpec, ground: &Ground, values: &[Scalar]) -> Self {
        debug_assert_eq!(ground.len(), values.len());
        Self::from_pairs(
            field,
            ground.ids().iter().cloned().zip(values.iter().cloned()),
        )
    }

    /// Renders as `{a:1,b:-1}` listing edges in ground order.
    pub fn show_in(&self, ground: &Ground) -> String {
        let mut items: Vec<(usize, String)> = self
            .entries
            .iter()
            .map(|(e, x)| {
                (
                    ground.position(e).unwrap_or(usize::MAX),
                    format!("{e}:{}", self.field.format(x)),
                )
            })
            .collect();
        items.sort();
        let parts: Vec<String> = items.into_iter().map(|(_, s)| s).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(e, x)| format!("{e}:{}", self.field.format(x)))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
