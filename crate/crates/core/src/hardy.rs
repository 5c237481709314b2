//! Shifts and Toeplitz operators on `H^2(E) ≅ l2(E)`.
//!
//! A Toeplitz operator `T_φ` with symbol `φ = Σ Φ_n z^n` has block `(i, j)`
//! equal to `Φ_{i-j}`; it is block lower triangular exactly when the symbol
//! is analytic (no negative coefficients).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::dense::{max_abs, spectral_norm, truncate_dense, DenseWindow};
use crate::norm::operator_norm_estimate;
use crate::op::{same_space, LocalOp};
use crate::space::{Space, SpaceSpec, Step};
use crate::vector::FinVec;
use crate::{Error, Result, Scalar};

pub const DEFAULT_GRID_SIZE: usize = 1024;
pub const DEFAULT_SYMBOL_DEPTH: usize = 8;
pub const ZERO_TOL: f64 = 1e-12;

/// The shift `T_{z^k}` on `l2(E)`.
pub fn shift_op(e: &Space, k: usize) -> Result<LocalOp> {
    if k == 0 {
        return Err(Error::Precondition("shift power must be >= 1".into()));
    }
    let seq = SpaceSpec::sequence_of(e);
    let (s1, s2) = (Arc::clone(&seq), Arc::clone(&seq));
    Ok(LocalOp::new(
        Arc::clone(&seq),
        seq,
        k,
        move |i| match i.first() {
            Some(Step::Copy(n)) => FinVec::basis(&s1, i.tail().prefixed(Step::Copy(n + k))),
            _ => FinVec::zero(&s1),
        },
        move |i| match i.first() {
            Some(Step::Copy(n)) if n >= k => FinVec::basis(&s2, i.tail().prefixed(Step::Copy(n - k))),
            _ => FinVec::zero(&s2),
        },
    ))
}

/// A trigonometric polynomial `Σ Φ_n z^n` with operator coefficients on `E`.
#[derive(Clone, Debug)]
pub struct OperatorSymbol {
    coeff_space: Space,
    coeffs: BTreeMap<i64, LocalOp>,
}

impl OperatorSymbol {
    pub fn zero(coeff_space: &Space) -> Self {
        OperatorSymbol { coeff_space: Arc::clone(coeff_space), coeffs: BTreeMap::new() }
    }

    pub fn constant(op: &LocalOp) -> Result<Self> {
        OperatorSymbol::zero(op.domain()).with(0, op)
    }

    /// Adds `op z^n` to the symbol.
    pub fn with(mut self, n: i64, op: &LocalOp) -> Result<Self> {
        if !same_space(op.domain(), &self.coeff_space) || !op.is_endomorphism() {
            return Err(Error::SpaceMismatch {
                expected: format!("endomorphism of {:?}", self.coeff_space),
                found: format!("{op:?}"),
            });
        }
        let merged = match self.coeffs.remove(&n) {
            Some(prev) => prev.add(op)?,
            None => op.clone(),
        };
        self.coeffs.insert(n, merged);
        Ok(self)
    }

    pub fn coeff_space(&self) -> &Space {
        &self.coeff_space
    }

    pub fn coeff(&self, n: i64) -> Option<&LocalOp> {
        self.coeffs.get(&n)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &LocalOp)> {
        self.coeffs.iter().map(|(n, op)| (*n, op))
    }

    /// `z^k φ`.
    pub fn times_z(&self, k: i64) -> Self {
        OperatorSymbol {
            coeff_space: Arc::clone(&self.coeff_space),
            coeffs: self.coeffs.iter().map(|(n, op)| (n + k, op.clone())).collect(),
        }
    }

    /// Size of the largest negative-index coefficient on the depth window.
    pub fn negative_part_size(&self, depth: usize) -> f64 {
        let window = self.coeff_space.basis(depth);
        self.coeffs.range(..0).map(|(_, op)| op.max_column_norm(&window)).fold(0.0, f64::max)
    }

    /// Dense value `φ(z)` on the coefficient window at `depth`.
    pub fn evaluate_dense(&self, z: Scalar, depth: usize) -> DMatrix<Scalar> {
        let n = self.coeff_space.truncated_dim(depth);
        let mut acc = DMatrix::<Scalar>::zeros(n, n);
        for (k, op) in &self.coeffs {
            acc += truncate_dense(op, depth).matrix * z.powi(*k as i32);
        }
        acc
    }
}

/// `T_φ` on `l2(E)` as an exact column map.
pub fn toeplitz_from_symbol(sym: &OperatorSymbol) -> LocalOp {
    let seq = SpaceSpec::sequence_of(&sym.coeff_space);
    let coeffs: Arc<Vec<(i64, LocalOp)>> = Arc::new(sym.coeffs.iter().map(|(n, op)| (*n, op.clone())).collect());
    let band = coeffs.iter().map(|(n, op)| n.unsigned_abs() as usize + op.band()).max().unwrap_or(0);
    let (c1, c2) = (Arc::clone(&coeffs), coeffs);
    let (s1, s2) = (Arc::clone(&seq), Arc::clone(&seq));
    LocalOp::new(
        Arc::clone(&seq),
        seq,
        band,
        move |i| {
            let mut out = FinVec::zero(&s1);
            if let Some(Step::Copy(j)) = i.first() {
                let rest = i.tail();
                for (n, op) in c1.iter() {
                    let row = j as i64 + n;
                    if row >= 0 {
                        out.axpy(Scalar::new(1.0, 0.0), &op.column(&rest).lifted(&s1, Step::Copy(row as usize)));
                    }
                }
            }
            out
        },
        move |i| {
            let mut out = FinVec::zero(&s2);
            if let Some(Step::Copy(r)) = i.first() {
                let rest = i.tail();
                for (n, op) in c2.iter() {
                    let col = r as i64 - n;
                    if col >= 0 {
                        out.axpy(
                            Scalar::new(1.0, 0.0),
                            &op.adjoint_column(&rest).lifted(&s2, Step::Copy(col as usize)),
                        );
                    }
                }
            }
            out
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupNormBracket {
    /// Largest `||φ(z)||` over the sampled circle points.
    pub lower: f64,
    /// `lower` plus the Lipschitz slack `Σ |n| ||Φ_n|| · π / grid`.
    pub upper: f64,
    /// Angle of the sample achieving `lower`.
    pub argmax: f64,
}

/// Two-sided bracket for `sup_{|z|=1} ||φ(z)||`, with `φ(z)` evaluated densely
/// on the coefficient window at `depth`.
pub fn symbol_sup_norm(sym: &OperatorSymbol, grid_size: usize, depth: usize) -> Result<SupNormBracket> {
    if grid_size < 4 {
        return Err(Error::Precondition(format!("grid size must be >= 4, got {grid_size}")));
    }
    let dense: Vec<(i64, DMatrix<Scalar>)> =
        sym.coeffs.iter().map(|(n, op)| (*n, truncate_dense(op, depth).matrix)).collect();
    let dim = sym.coeff_space.truncated_dim(depth);
    let mut lower = 0.0f64;
    let mut argmax = 0.0;
    for m in 0..grid_size {
        let theta = 2.0 * PI * m as f64 / grid_size as f64;
        let z = Scalar::from_polar(1.0, theta);
        let mut acc = DMatrix::<Scalar>::zeros(dim, dim);
        for (n, c) in &dense {
            acc += c * z.powi(*n as i32);
        }
        let v = spectral_norm(&acc);
        if v > lower {
            lower = v;
            argmax = theta;
        }
    }
    let lipschitz = sym
        .coeffs
        .iter()
        .filter(|(n, _)| **n != 0)
        .fold(0.0, |acc, (n, op)| acc + n.unsigned_abs() as f64 * operator_norm_estimate(op, 1e-12, depth).upper);
    Ok(SupNormBracket { lower, upper: lower + lipschitz * PI / grid_size as f64, argmax })
}

/// True iff every negative-index coefficient vanishes (on the default window).
pub fn analytic_symbol_check(sym: &OperatorSymbol) -> bool {
    sym.negative_part_size(DEFAULT_SYMBOL_DEPTH) <= ZERO_TOL
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatternCheck {
    pub holds: bool,
    pub max_deviation: f64,
    pub depth: usize,
}

fn block_view(m: &DMatrix<Scalar>, block: usize, i: usize, j: usize) -> DMatrix<Scalar> {
    m.view((i * block, j * block), (block, block)).into_owned()
}

fn seq_inner(op: &LocalOp) -> Result<SpaceSpec> {
    match op.domain().sequence_inner() {
        Some(inner) if op.is_endomorphism() => Ok(inner.clone()),
        _ => Err(Error::Precondition(format!("expected an endomorphism of some l2(E), got {op:?}"))),
    }
}

/// Checks the block pattern of the commutant of `T_{z^2}` on the window of
/// copies below `depth`: block `(i, j)` with `j >= 2` equals block
/// `(i-2, j-2)` when `i >= 2` and vanishes when `i < 2`. This is necessary
/// for commuting with `T_{z^2}`; it says nothing beyond the window.
pub fn tz2_commutant_pattern_check(op: &LocalOp, depth: usize) -> Result<PatternCheck> {
    let inner = seq_inner(op)?;
    let b = inner.truncated_dim(depth);
    let m = truncate_dense(op, depth).matrix;
    let mut worst = 0.0f64;
    for i in 0..depth {
        for j in 2..depth {
            let got = block_view(&m, b, i, j);
            let dev = if i >= 2 { max_abs(&(got - block_view(&m, b, i - 2, j - 2))) } else { max_abs(&got) };
            worst = worst.max(dev);
        }
    }
    Ok(PatternCheck { holds: worst <= ZERO_TOL, max_deviation: worst, depth })
}

/// Largest deviation of the window from block-Toeplitz form.
pub fn toeplitz_defect(op: &LocalOp, depth: usize) -> Result<f64> {
    let inner = seq_inner(op)?;
    let b = inner.truncated_dim(depth);
    let m = truncate_dense(op, depth).matrix;
    let mut worst = 0.0f64;
    for i in 1..depth {
        for j in 1..depth {
            worst = worst.max(max_abs(&(block_view(&m, b, i, j) - block_view(&m, b, i - 1, j - 1))));
        }
    }
    Ok(worst)
}

/// Reads the symbol of a block-Toeplitz operator off its window: `Φ_n` from
/// block `(n, 0)` and `Φ_{-n}` from block `(0, n)`. Coefficients come back
/// as window operators on `E`; zero blocks are omitted.
pub fn extract_symbol(op: &LocalOp, depth: usize) -> Result<OperatorSymbol> {
    let inner = Arc::new(seq_inner(op)?);
    let b = inner.truncated_dim(depth);
    let m = truncate_dense(op, depth).matrix;
    let idx = inner.basis(depth);
    let blocks = (0..depth)
        .map(|n| (n as i64, block_view(&m, b, n, 0)))
        .chain((1..depth).map(|n| (-(n as i64), block_view(&m, b, 0, n))));
    let mut sym = OperatorSymbol::zero(&inner);
    for (n, blk) in blocks {
        if max_abs(&blk) > 0.0 {
            let w = DenseWindow::new(idx.clone(), idx.clone(), blk)?;
            sym = sym.with(n, &w.to_local_op(&inner, &inner)?)?;
        }
    }
    Ok(sym)
}
