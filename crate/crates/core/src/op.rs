//! Exact lazy operators given by finitely supported column maps.
//!
//! A [`LocalOp`] stores a function producing `T e_j` for every basis index
//! `j` of its domain, together with one producing `T* e_i`. Every algebraic
//! operation (composition, linear combination, block assembly) builds new
//! column maps from old ones, so identities between operators can be checked
//! exactly on basis vectors without truncating anything.

use std::fmt;
use std::sync::Arc;

use crate::space::{BasisIndex, Space, SpaceSpec, Step};
use crate::vector::FinVec;
use crate::{Error, Result, Scalar};

pub type ColumnFn = Arc<dyn Fn(&BasisIndex) -> FinVec + Send + Sync>;

#[derive(Clone)]
pub struct LocalOp {
    domain: Space,
    codomain: Space,
    column: ColumnFn,
    adjoint_column: ColumnFn,
    band: usize,
}

pub(crate) fn same_space(a: &Space, b: &Space) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn check_space(expected: &Space, found: &Space) -> Result<()> {
    if same_space(expected, found) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch { expected: format!("{expected:?}"), found: format!("{found:?}") })
    }
}

fn one() -> Scalar {
    Scalar::new(1.0, 0.0)
}

impl LocalOp {
    /// Builds an operator from its column and adjoint-column maps.
    ///
    /// `band` bounds how far (in `Copy` steps) a column may reach from the
    /// index it is evaluated at. The two maps must be adjoint to each other;
    /// [`LocalOp::adjoint_consistency`] tests that on a window.
    pub fn new<C, A>(domain: Space, codomain: Space, band: usize, column: C, adjoint_column: A) -> Self
    where
        C: Fn(&BasisIndex) -> FinVec + Send + Sync + 'static,
        A: Fn(&BasisIndex) -> FinVec + Send + Sync + 'static,
    {
        LocalOp { domain, codomain, column: Arc::new(column), adjoint_column: Arc::new(adjoint_column), band }
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn is_endomorphism(&self) -> bool {
        same_space(&self.domain, &self.codomain)
    }

    pub fn column(&self, idx: &BasisIndex) -> FinVec {
        (self.column)(idx)
    }

    pub fn adjoint_column(&self, idx: &BasisIndex) -> FinVec {
        (self.adjoint_column)(idx)
    }

    pub fn identity(space: &Space) -> LocalOp {
        let s = Arc::clone(space);
        let s2 = Arc::clone(space);
        LocalOp::new(
            Arc::clone(space),
            Arc::clone(space),
            0,
            move |i| FinVec::basis(&s, i.clone()),
            move |i| FinVec::basis(&s2, i.clone()),
        )
    }

    pub fn zero(domain: &Space, codomain: &Space) -> LocalOp {
        let c = Arc::clone(codomain);
        let d = Arc::clone(domain);
        LocalOp::new(Arc::clone(domain), Arc::clone(codomain), 0, move |_| FinVec::zero(&c), move |_| FinVec::zero(&d))
    }

    /// Applies the operator to a finitely supported vector.
    pub fn apply(&self, v: &FinVec) -> Result<FinVec> {
        check_space(&self.domain, v.space())?;
        Ok(self.apply_unchecked(v))
    }

    fn apply_unchecked(&self, v: &FinVec) -> FinVec {
        let mut out = FinVec::zero(&self.codomain);
        for (idx, c) in v.iter() {
            out.axpy(*c, &self.column(idx));
        }
        out
    }

    fn apply_adjoint_unchecked(&self, v: &FinVec) -> FinVec {
        let mut out = FinVec::zero(&self.domain);
        for (idx, c) in v.iter() {
            out.axpy(*c, &self.adjoint_column(idx));
        }
        out
    }

    pub fn adjoint(&self) -> LocalOp {
        LocalOp {
            domain: Arc::clone(&self.codomain),
            codomain: Arc::clone(&self.domain),
            column: Arc::clone(&self.adjoint_column),
            adjoint_column: Arc::clone(&self.column),
            band: self.band,
        }
    }

    /// `self ∘ t`.
    pub fn compose(&self, t: &LocalOp) -> Result<LocalOp> {
        check_space(&self.domain, &t.codomain)?;
        let (s1, t1) = (self.clone(), t.clone());
        let (s2, t2) = (self.clone(), t.clone());
        Ok(LocalOp::new(
            Arc::clone(&t.domain),
            Arc::clone(&self.codomain),
            self.band + t.band,
            move |i| s1.apply_unchecked(&t1.column(i)),
            move |i| t2.apply_adjoint_unchecked(&s2.adjoint_column(i)),
        ))
    }

    /// `a·s + b·t`.
    pub fn combine(a: Scalar, s: &LocalOp, b: Scalar, t: &LocalOp) -> Result<LocalOp> {
        check_space(&s.domain, &t.domain)?;
        check_space(&s.codomain, &t.codomain)?;
        let (s1, t1) = (s.clone(), t.clone());
        let (s2, t2) = (s.clone(), t.clone());
        let (ac, bc) = (a.conj(), b.conj());
        Ok(LocalOp::new(
            Arc::clone(&s.domain),
            Arc::clone(&s.codomain),
            s.band.max(t.band),
            move |i| {
                let mut v = s1.column(i).scaled(a);
                v.axpy(b, &t1.column(i));
                v
            },
            move |i| {
                let mut v = s2.adjoint_column(i).scaled(ac);
                v.axpy(bc, &t2.adjoint_column(i));
                v
            },
        ))
    }

    pub fn add(&self, t: &LocalOp) -> Result<LocalOp> {
        LocalOp::combine(one(), self, one(), t)
    }

    pub fn sub(&self, t: &LocalOp) -> Result<LocalOp> {
        LocalOp::combine(one(), self, -one(), t)
    }

    pub fn scaled(&self, c: Scalar) -> LocalOp {
        let (s1, s2) = (self.clone(), self.clone());
        let cc = c.conj();
        LocalOp::new(
            Arc::clone(&self.domain),
            Arc::clone(&self.codomain),
            self.band,
            move |i| s1.column(i).scaled(c),
            move |i| s2.adjoint_column(i).scaled(cc),
        )
    }

    /// `st − ts` for two endomorphisms of the same space.
    pub fn commutator(s: &LocalOp, t: &LocalOp) -> Result<LocalOp> {
        if !s.is_endomorphism() || !t.is_endomorphism() {
            return Err(Error::Precondition("commutator needs endomorphisms".into()));
        }
        s.compose(t)?.sub(&t.compose(s)?)
    }

    /// `n`-fold power of an endomorphism; `n = 0` is the identity.
    pub fn power(&self, n: usize) -> Result<LocalOp> {
        if !self.is_endomorphism() {
            return Err(Error::Precondition("power needs an endomorphism".into()));
        }
        let mut acc = LocalOp::identity(&self.domain);
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Block operator matrix from `Sum(col_spaces)` to `Sum(row_spaces)`;
    /// `None` blocks are zero.
    pub fn block(row_spaces: &[Space], col_spaces: &[Space], blocks: Vec<Vec<Option<LocalOp>>>) -> Result<LocalOp> {
        if blocks.len() != row_spaces.len() || blocks.iter().any(|r| r.len() != col_spaces.len()) {
            return Err(Error::Precondition(format!(
                "block pattern must be {}x{}",
                row_spaces.len(),
                col_spaces.len()
            )));
        }
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    check_space(&col_spaces[j], &b.domain)?;
                    check_space(&row_spaces[i], &b.codomain)?;
                }
            }
        }
        let rows: Vec<&SpaceSpec> = row_spaces.iter().map(|s| s.as_ref()).collect();
        let cols: Vec<&SpaceSpec> = col_spaces.iter().map(|s| s.as_ref()).collect();
        let codomain = SpaceSpec::sum(&rows)?;
        let domain = SpaceSpec::sum(&cols)?;
        let band = blocks.iter().flatten().flatten().map(|b| b.band).max().unwrap_or(0);

        // Column j lists (row i, block); row i lists (column j, block).
        let by_col: Arc<Vec<Vec<(usize, LocalOp)>>> = Arc::new(
            (0..col_spaces.len())
                .map(|j| blocks.iter().enumerate().filter_map(|(i, r)| r[j].clone().map(|b| (i, b))).collect())
                .collect(),
        );
        let by_row: Arc<Vec<Vec<(usize, LocalOp)>>> = Arc::new(
            blocks
                .iter()
                .map(|r| r.iter().enumerate().filter_map(|(j, b)| b.clone().map(|b| (j, b))).collect())
                .collect(),
        );
        let (cod, dom) = (Arc::clone(&codomain), Arc::clone(&domain));
        Ok(LocalOp::new(
            domain,
            codomain,
            band,
            move |idx| {
                let mut out = FinVec::zero(&cod);
                if let Some(Step::Part(j)) = idx.first() {
                    let inner = idx.tail();
                    for (i, b) in &by_col[j] {
                        out.axpy(one(), &b.column(&inner).lifted(&cod, Step::Part(*i)));
                    }
                }
                out
            },
            move |idx| {
                let mut out = FinVec::zero(&dom);
                if let Some(Step::Part(i)) = idx.first() {
                    let inner = idx.tail();
                    for (j, b) in &by_row[i] {
                        out.axpy(one(), &b.adjoint_column(&inner).lifted(&dom, Step::Part(*j)));
                    }
                }
                out
            },
        ))
    }

    /// Isometric inclusion of part `k` of a direct sum.
    pub fn part_inject(sum: &Space, k: usize) -> Result<LocalOp> {
        let part = match sum.parts().and_then(|p| p.get(k)) {
            Some(p) => Arc::new(p.clone()),
            None => return Err(Error::Precondition(format!("{sum:?} has no part {k}"))),
        };
        let (s1, p1) = (Arc::clone(sum), Arc::clone(&part));
        Ok(LocalOp::new(
            part,
            Arc::clone(sum),
            0,
            move |i| FinVec::basis(&s1, i.prefixed(Step::Part(k))),
            move |i| match i.first() {
                Some(Step::Part(j)) if j == k => FinVec::basis(&p1, i.tail()),
                _ => FinVec::zero(&p1),
            },
        ))
    }

    /// Places `E` into copy `n` of `l2(E)`.
    pub fn seq_inject(inner: &Space, n: usize) -> LocalOp {
        let seq = SpaceSpec::sequence_of(inner);
        let (s1, e1) = (Arc::clone(&seq), Arc::clone(inner));
        LocalOp::new(
            Arc::clone(inner),
            seq,
            n,
            move |i| FinVec::basis(&s1, i.prefixed(Step::Copy(n))),
            move |i| match i.first() {
                Some(Step::Copy(m)) if m == n => FinVec::basis(&e1, i.tail()),
                _ => FinVec::zero(&e1),
            },
        )
    }

    /// Operator on `l2(E)` acting as `op` from copy `col` to copy `row` and
    /// zero elsewhere.
    pub fn seq_block(op: &LocalOp, row: usize, col: usize) -> Result<LocalOp> {
        if !op.is_endomorphism() {
            return Err(Error::Precondition("seq_block needs an endomorphism of E".into()));
        }
        let seq = SpaceSpec::sequence_of(&op.domain);
        let (s1, s2) = (Arc::clone(&seq), Arc::clone(&seq));
        let (o1, o2) = (op.clone(), op.clone());
        Ok(LocalOp::new(
            Arc::clone(&seq),
            seq,
            row.abs_diff(col) + op.band,
            move |i| match i.first() {
                Some(Step::Copy(n)) if n == col => o1.column(&i.tail()).lifted(&s1, Step::Copy(row)),
                _ => FinVec::zero(&s1),
            },
            move |i| match i.first() {
                Some(Step::Copy(n)) if n == row => o2.adjoint_column(&i.tail()).lifted(&s2, Step::Copy(col)),
                _ => FinVec::zero(&s2),
            },
        ))
    }

    /// Largest `|<T e_j, e_i> − conj(<T* e_i, e_j>)|` over the two windows.
    pub fn adjoint_consistency(&self, window_dom: &[BasisIndex], window_cod: &[BasisIndex]) -> f64 {
        let adj: Vec<FinVec> = window_cod.iter().map(|i| self.adjoint_column(i)).collect();
        let mut worst = 0.0f64;
        for j in window_dom {
            let col = self.column(j);
            for (i, a) in window_cod.iter().zip(&adj) {
                let lhs = col.get(i);
                let rhs = a.get(j).conj();
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    /// Window check of `s = t`: the largest `||(s − t) e_i||` over `window`.
    pub fn window_equality(s: &LocalOp, t: &LocalOp, window: &[BasisIndex], tol: f64) -> WindowCheck {
        if !same_space(&s.domain, &t.domain) || !same_space(&s.codomain, &t.codomain) {
            return WindowCheck { holds: false, max_deviation: f64::INFINITY };
        }
        let max_deviation = window.iter().map(|i| s.column(i).sub(&t.column(i)).norm()).fold(0.0f64, f64::max);
        WindowCheck { holds: max_deviation <= tol, max_deviation }
    }

    /// Largest column norm over `window`; zero iff the operator vanishes there.
    pub fn max_column_norm(&self, window: &[BasisIndex]) -> f64 {
        window.iter().map(|i| self.column(i).norm()).fold(0.0f64, f64::max)
    }
}

impl fmt::Debug for LocalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalOp({:?} -> {:?}, band {})", self.domain, self.codomain, self.band)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowCheck {
    pub holds: bool,
    pub max_deviation: f64,
}
