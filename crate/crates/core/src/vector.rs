use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::space::{BasisIndex, Space, Step};
use crate::{Error, Result, Scalar};

/// A finitely supported vector in the standard basis of `space`.
///
/// Entries that become exactly zero are dropped, so `is_empty` is the exact
/// zero test.
#[derive(Clone, Debug, PartialEq)]
pub struct FinVec {
    space: Space,
    entries: BTreeMap<BasisIndex, Scalar>,
}

impl FinVec {
    pub fn zero(space: &Space) -> Self {
        FinVec { space: Arc::clone(space), entries: BTreeMap::new() }
    }

    pub fn basis(space: &Space, idx: BasisIndex) -> Self {
        debug_assert!(space.contains(&idx), "{idx:?} not in {space:?}");
        let mut v = FinVec::zero(space);
        v.entries.insert(idx, Scalar::new(1.0, 0.0));
        v
    }

    /// Checked constructor for user-supplied data.
    pub fn from_entries(space: &Space, entries: impl IntoIterator<Item = (BasisIndex, Scalar)>) -> Result<Self> {
        let mut v = FinVec::zero(space);
        for (idx, c) in entries {
            if !space.contains(&idx) {
                return Err(Error::InvalidIndex(format!("{idx:?} is not a basis index of {space:?}")));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            v.add_at(idx, c);
        }
        Ok(v)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, idx: &BasisIndex) -> Scalar {
        self.entries.get(idx).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &Scalar)> {
        self.entries.iter()
    }

    pub fn add_at(&mut self, idx: BasisIndex, c: Scalar) {
        if c == Scalar::default() {
            return;
        }
        match self.entries.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = *e.get() + c;
                if sum == Scalar::default() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += c * other`; the caller guarantees both live in the same space.
    pub fn axpy(&mut self, c: Scalar, other: &FinVec) {
        if c == Scalar::default() {
            return;
        }
        for (idx, v) in &other.entries {
            self.add_at(idx.clone(), c * v);
        }
    }

    pub fn scaled(mut self, c: Scalar) -> FinVec {
        if c == Scalar::default() {
            self.entries.clear();
            return self;
        }
        for v in self.entries.values_mut() {
            *v *= c;
        }
        self
    }

    /// `<self, other>`: linear in `self`, conjugate-linear in `other`.
    pub fn inner(&self, other: &FinVec) -> Scalar {
        let (small, large, swap) = if self.len() <= other.len() { (self, other, false) } else { (other, self, true) };
        let mut acc = Scalar::default();
        for (idx, a) in &small.entries {
            if let Some(b) = large.entries.get(idx) {
                acc += if swap { b * a.conj() } else { a * b.conj() };
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.entries.values().fold(0.0, |acc, c| acc + c.norm_sqr()).sqrt()
    }

    pub fn abs_sum(&self) -> f64 {
        self.entries.values().fold(0.0, |acc, c| acc + c.norm())
    }

    /// Re-addresses every entry through `step`, moving the vector into the
    /// enclosing `space` (a `Sum` part or a `SequenceOf` copy).
    pub fn lifted(&self, space: &Space, step: Step) -> FinVec {
        FinVec {
            space: Arc::clone(space),
            entries: self.entries.iter().map(|(idx, c)| (idx.prefixed(step), *c)).collect(),
        }
    }

    /// Keeps only the entries whose first step is `step`, stripping it.
    pub fn restricted(&self, space: &Space, step: Step) -> FinVec {
        FinVec {
            space: Arc::clone(space),
            entries: self
                .entries
                .iter()
                .filter(|(idx, _)| idx.first() == Some(step))
                .map(|(idx, c)| (idx.tail(), *c))
                .collect(),
        }
    }

    pub fn sub(&self, other: &FinVec) -> FinVec {
        let mut out = self.clone();
        out.axpy(Scalar::new(-1.0, 0.0), other);
        out
    }
}
