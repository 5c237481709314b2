//! Graded Hilbert space descriptions and addresses of standard basis vectors.
//!
//! A [`SpaceSpec`] is a finite tree: `Finite(d)` is `C^d`, `SequenceOf(E)` is
//! `l^2(E)` (equivalently the Hardy space `H^2(E)`), and `Sum` is an ordered
//! orthogonal direct sum. A [`BasisIndex`] is a root-to-leaf path through that
//! tree picking one standard basis vector.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SpaceSpec {
    Finite(usize),
    SequenceOf(Box<SpaceSpec>),
    Sum(Vec<SpaceSpec>),
}

/// Shared handle to a space; operators and vectors carry one of these.
pub type Space = Arc<SpaceSpec>;

impl SpaceSpec {
    pub fn finite(dim: usize) -> Result<Space> {
        if dim == 0 {
            return Err(Error::InvalidSpace("finite block must have dim >= 1".into()));
        }
        Ok(Arc::new(SpaceSpec::Finite(dim)))
    }

    pub fn sequence_of(inner: &SpaceSpec) -> Space {
        Arc::new(SpaceSpec::SequenceOf(Box::new(inner.clone())))
    }

    pub fn sum(parts: &[&SpaceSpec]) -> Result<Space> {
        if parts.len() < 2 {
            return Err(Error::InvalidSpace("a direct sum needs at least two parts".into()));
        }
        Ok(Arc::new(SpaceSpec::Sum(parts.iter().map(|p| (*p).clone()).collect())))
    }

    /// Checks the structural invariants of a tree built by hand.
    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceSpec::Finite(0) => Err(Error::InvalidSpace("finite block must have dim >= 1".into())),
            SpaceSpec::Finite(_) => Ok(()),
            SpaceSpec::SequenceOf(inner) => inner.validate(),
            SpaceSpec::Sum(parts) if parts.len() < 2 => {
                Err(Error::InvalidSpace("a direct sum needs at least two parts".into()))
            }
            SpaceSpec::Sum(parts) => parts.iter().try_for_each(SpaceSpec::validate),
        }
    }

    pub fn is_finite_dimensional(&self) -> bool {
        match self {
            SpaceSpec::Finite(_) => true,
            SpaceSpec::SequenceOf(_) => false,
            SpaceSpec::Sum(parts) => parts.iter().all(SpaceSpec::is_finite_dimensional),
        }
    }

    pub fn parts(&self) -> Option<&[SpaceSpec]> {
        match self {
            SpaceSpec::Sum(parts) => Some(parts),
            _ => None,
        }
    }

    pub fn sequence_inner(&self) -> Option<&SpaceSpec> {
        match self {
            SpaceSpec::SequenceOf(inner) => Some(inner),
            _ => None,
        }
    }

    /// True iff `idx` addresses a basis vector of this space.
    pub fn contains(&self, idx: &BasisIndex) -> bool {
        self.contains_path(&idx.0)
    }

    fn contains_path(&self, path: &[Step]) -> bool {
        match (self, path.split_first()) {
            (SpaceSpec::Finite(d), Some((Step::Coord(j), rest))) => rest.is_empty() && j < d,
            (SpaceSpec::SequenceOf(inner), Some((Step::Copy(_), rest))) => inner.contains_path(rest),
            (SpaceSpec::Sum(parts), Some((Step::Part(k), rest))) => {
                parts.get(*k).is_some_and(|p| p.contains_path(rest))
            }
            _ => false,
        }
    }

    /// All basis indices whose every `Copy(n)` step has `n < depth`, in
    /// lexicographic path order.
    pub fn basis(&self, depth: usize) -> Vec<BasisIndex> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.push_basis(depth, &mut prefix, &mut out);
        out
    }

    fn push_basis(&self, depth: usize, prefix: &mut Vec<Step>, out: &mut Vec<BasisIndex>) {
        match self {
            SpaceSpec::Finite(d) => {
                for j in 0..*d {
                    prefix.push(Step::Coord(j));
                    out.push(BasisIndex(prefix.clone()));
                    prefix.pop();
                }
            }
            SpaceSpec::SequenceOf(inner) => {
                for n in 0..depth {
                    prefix.push(Step::Copy(n));
                    inner.push_basis(depth, prefix, out);
                    prefix.pop();
                }
            }
            SpaceSpec::Sum(parts) => {
                for (k, part) in parts.iter().enumerate() {
                    prefix.push(Step::Part(k));
                    part.push_basis(depth, prefix, out);
                    prefix.pop();
                }
            }
        }
    }

    /// Number of basis vectors returned by [`SpaceSpec::basis`] at `depth`.
    pub fn truncated_dim(&self, depth: usize) -> usize {
        match self {
            SpaceSpec::Finite(d) => *d,
            SpaceSpec::SequenceOf(inner) => depth * inner.truncated_dim(depth),
            SpaceSpec::Sum(parts) => parts.iter().map(|p| p.truncated_dim(depth)).sum(),
        }
    }
}

impl fmt::Debug for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Finite(d) => write!(f, "C^{d}"),
            SpaceSpec::SequenceOf(inner) => write!(f, "l2({inner:?})"),
            SpaceSpec::Sum(parts) => {
                write!(f, "(")?;
                for (k, p) in parts.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{p:?}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One step of a basis path. Steps at a given depth of a valid path always
/// have the same kind, so the derived order is lexicographic on paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Part(usize),
    Copy(usize),
    Coord(usize),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(pub Vec<Step>);

impl BasisIndex {
    pub fn new(path: Vec<Step>) -> Self {
        BasisIndex(path)
    }

    pub fn coord(j: usize) -> Self {
        BasisIndex(vec![Step::Coord(j)])
    }

    /// `Copy(n)` followed by `Coord(j)`: the basis vector `e_j z^n` of `l2(C^d)`.
    pub fn copy_coord(n: usize, j: usize) -> Self {
        BasisIndex(vec![Step::Copy(n), Step::Coord(j)])
    }

    pub fn path(&self) -> &[Step] {
        &self.0
    }

    pub fn first(&self) -> Option<Step> {
        self.0.first().copied()
    }

    /// The path with its first step removed.
    pub fn tail(&self) -> BasisIndex {
        BasisIndex(self.0[1..].to_vec())
    }

    pub fn prefixed(&self, step: Step) -> BasisIndex {
        let mut path = Vec::with_capacity(self.0.len() + 1);
        path.push(step);
        path.extend_from_slice(&self.0);
        BasisIndex(path)
    }

    /// Largest `Copy(n)` appearing anywhere in the path.
    pub fn max_copy(&self) -> Option<usize> {
        self.0
            .iter()
            .filter_map(|s| match s {
                Step::Copy(n) => Some(*n),
                _ => None,
            })
            .max()
    }
}

impl fmt::Debug for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            match s {
                Step::Part(p) => write!(f, "p{p}")?,
                Step::Copy(n) => write!(f, "z{n}")?,
                Step::Coord(j) => write!(f, "{j}")?,
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_trees() {
        assert!(SpaceSpec::finite(0).is_err());
        let c1 = SpaceSpec::finite(1).unwrap();
        assert!(SpaceSpec::sum(&[&c1]).is_err());
        assert!(SpaceSpec::Sum(vec![SpaceSpec::Finite(2), SpaceSpec::Finite(0)]).validate().is_err());
    }

    #[test]
    fn basis_is_lexicographic_and_sized() {
        let c2 = SpaceSpec::finite(2).unwrap();
        let l2 = SpaceSpec::sequence_of(&c2);
        let h = SpaceSpec::sum(&[&l2, &c2]).unwrap();
        let basis = h.basis(3);
        assert_eq!(basis.len(), h.truncated_dim(3));
        assert_eq!(basis.len(), 8);
        let mut sorted = basis.clone();
        sorted.sort();
        assert_eq!(sorted, basis);
        assert!(basis.iter().all(|b| h.contains(b)));
        assert_eq!(basis[0], BasisIndex(vec![Step::Part(0), Step::Copy(0), Step::Coord(0)]));
        assert_eq!(basis[7], BasisIndex(vec![Step::Part(1), Step::Coord(1)]));
    }

    #[test]
    fn membership_of_paths() {
        let c2 = SpaceSpec::finite(2).unwrap();
        let l2 = SpaceSpec::sequence_of(&c2);
        assert!(l2.contains(&BasisIndex::copy_coord(40, 1)));
        assert!(!l2.contains(&BasisIndex::copy_coord(0, 2)));
        assert!(!l2.contains(&BasisIndex::coord(0)));
        assert!(!c2.contains(&BasisIndex(vec![Step::Coord(0), Step::Coord(0)])));
    }
}
