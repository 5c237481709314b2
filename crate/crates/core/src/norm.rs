use crate::dense::truncate_dense;
use crate::op::LocalOp;

/// Depth doubling starts here.
pub const START_DEPTH: usize = 4;
pub const DEFAULT_MAX_DEPTH: usize = 256;
/// Windows larger than this are not assembled densely.
pub const MAX_DENSE_DIM: usize = 1600;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    /// Largest singular value of the compression at `depth`.
    pub lower: f64,
    /// Schur-test bound `sqrt(max column l1 · max row l1)` over the window.
    pub upper: f64,
    pub converged: bool,
    pub depth: usize,
}

/// Two-sided estimate of `||op||`.
///
/// Compressions to nested windows give a nondecreasing lower bound; depth is
/// doubled from [`START_DEPTH`] until the lower bound moves by less than
/// `tol` (relative) or `max_depth` is reached. The upper bound takes the
/// Schur test over the final window using full (untruncated) columns and
/// rows; it bounds the norm whenever no column or row outside the window has
/// a larger l1 mass, which holds for operators that are eventually
/// shift-periodic, as every banded construction here is.
pub fn operator_norm_estimate(op: &LocalOp, tol: f64, max_depth: usize) -> NormEstimate {
    let max_depth = max_depth.max(1);
    let finite = op.domain().is_finite_dimensional() && op.codomain().is_finite_dimensional();
    let mut depth = if finite { 1 } else { START_DEPTH.min(max_depth) };
    let mut lower = truncate_dense(op, depth).spectral_norm();
    let mut converged = finite;
    while !converged && depth < max_depth {
        let next = (depth * 2).min(max_depth);
        let dim = op.domain().truncated_dim(next).max(op.codomain().truncated_dim(next));
        if dim > MAX_DENSE_DIM {
            break;
        }
        let next_lower = truncate_dense(op, next).spectral_norm();
        let change = (next_lower - lower).abs();
        depth = next;
        converged = change == 0.0 || change < tol * next_lower.max(f64::MIN_POSITIVE);
        lower = lower.max(next_lower);
    }
    let upper = schur_bound(op, depth).max(lower);
    NormEstimate { lower, upper, converged, depth }
}

fn schur_bound(op: &LocalOp, depth: usize) -> f64 {
    let col = op.domain().basis(depth).iter().map(|i| op.column(i).abs_sum()).fold(0.0, f64::max);
    let row = op.codomain().basis(depth).iter().map(|i| op.adjoint_column(i).abs_sum()).fold(0.0, f64::max);
    (col * row).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseWindow;
    use crate::hardy::shift_op;
    use crate::space::{BasisIndex, SpaceSpec};
    use crate::Scalar;
    use nalgebra::DMatrix;

    #[test]
    fn shift_has_norm_one() {
        let s = shift_op(&SpaceSpec::finite(1).unwrap(), 1).unwrap();
        let est = operator_norm_estimate(&s, 1e-10, 256);
        assert!(est.converged);
        assert!((est.lower - 1.0).abs() < 1e-12);
        assert!((est.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_nilpotent_is_exact_at_depth_one() {
        let alpha = Scalar::new(0.3, -0.4);
        let c2 = SpaceSpec::finite(2).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[Scalar::default(), alpha, Scalar::default(), Scalar::default()]);
        let idx = vec![BasisIndex::coord(0), BasisIndex::coord(1)];
        let h1 = DenseWindow::new(idx.clone(), idx, m).unwrap().to_local_op(&c2, &c2).unwrap();
        let est = operator_norm_estimate(&h1, 1e-10, 256);
        assert_eq!(est.depth, 1);
        assert!((est.lower - 0.5).abs() < 1e-15);
        assert!((est.upper - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lower_never_exceeds_upper_and_grows_with_depth() {
        let c1 = SpaceSpec::finite(1).unwrap();
        let s = shift_op(&c1, 1).unwrap();
        let t = LocalOp::combine(Scalar::new(0.5, 0.0), &s, Scalar::new(0.0, 0.7), &s.adjoint()).unwrap();
        let mut prev = 0.0;
        for max_depth in [4, 8, 16, 32] {
            let est = operator_norm_estimate(&t, 1e-14, max_depth);
            assert!(est.lower <= est.upper + 1e-15);
            assert!(est.lower + 1e-15 >= prev);
            prev = est.lower;
        }
    }
}
