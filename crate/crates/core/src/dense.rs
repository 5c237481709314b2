//! Dense bridges: finite windows of a [`LocalOp`] as matrices, and the
//! matrix routines (spectral norm, PSD square root, pseudoinverse) run on them.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::op::LocalOp;
use crate::space::{BasisIndex, Space};
use crate::vector::FinVec;
use crate::{Error, Result, Scalar};

#[derive(Clone, Debug)]
pub struct DenseWindow {
    pub rows: Vec<BasisIndex>,
    pub cols: Vec<BasisIndex>,
    pub matrix: DMatrix<Scalar>,
}

impl DenseWindow {
    pub fn new(rows: Vec<BasisIndex>, cols: Vec<BasisIndex>, matrix: DMatrix<Scalar>) -> Result<Self> {
        if matrix.nrows() != rows.len() || matrix.ncols() != cols.len() {
            return Err(Error::Precondition(format!(
                "matrix is {}x{} but index lists have {} rows and {} cols",
                matrix.nrows(),
                matrix.ncols(),
                rows.len(),
                cols.len()
            )));
        }
        Ok(DenseWindow { rows, cols, matrix })
    }

    pub fn is_square_window(&self) -> bool {
        self.rows == self.cols
    }

    /// Largest singular value; zero for an empty window.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }

    pub fn max_abs_entry(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// Row-major `[re, im]` pairs, the layout used by report serialization.
    pub fn row_major_pairs(&self) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity(self.matrix.len());
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                let c = self.matrix[(i, j)];
                out.push([c.re, c.im]);
            }
        }
        out
    }

    /// Lifts the window back to an operator `domain -> codomain` that acts
    /// as the matrix on the window columns and as zero on every other basis
    /// vector.
    pub fn to_local_op(&self, domain: &Space, codomain: &Space) -> Result<LocalOp> {
        if let Some(bad) = self.cols.iter().find(|c| !domain.contains(c)) {
            return Err(Error::InvalidIndex(format!("{bad:?} not in domain {domain:?}")));
        }
        if let Some(bad) = self.rows.iter().find(|r| !codomain.contains(r)) {
            return Err(Error::InvalidIndex(format!("{bad:?} not in codomain {codomain:?}")));
        }
        let data = Arc::new(self.clone());
        let col_pos: Arc<HashMap<BasisIndex, usize>> =
            Arc::new(self.cols.iter().cloned().enumerate().map(|(k, i)| (i, k)).collect());
        let row_pos: Arc<HashMap<BasisIndex, usize>> =
            Arc::new(self.rows.iter().cloned().enumerate().map(|(k, i)| (i, k)).collect());
        let (d1, d2) = (Arc::clone(&data), data);
        let (cod, dom) = (Arc::clone(codomain), Arc::clone(domain));
        // Window operators may couple any two window indices.
        let band = self.rows.iter().chain(&self.cols).filter_map(BasisIndex::max_copy).max().unwrap_or(0);
        Ok(LocalOp::new(
            Arc::clone(domain),
            Arc::clone(codomain),
            band,
            move |idx| {
                let mut v = FinVec::zero(&cod);
                if let Some(&j) = col_pos.get(idx) {
                    for (i, r) in d1.rows.iter().enumerate() {
                        v.add_at(r.clone(), d1.matrix[(i, j)]);
                    }
                }
                v
            },
            move |idx| {
                let mut v = FinVec::zero(&dom);
                if let Some(&i) = row_pos.get(idx) {
                    for (j, c) in d2.cols.iter().enumerate() {
                        v.add_at(c.clone(), d2.matrix[(i, j)].conj());
                    }
                }
                v
            },
        ))
    }
}

/// Matrix of `<op e_j, e_i>` over all basis indices whose copy steps are
/// below `depth`, rows and columns in lexicographic path order.
pub fn truncate_dense(op: &LocalOp, depth: usize) -> DenseWindow {
    let rows = op.codomain().basis(depth);
    let cols = op.domain().basis(depth);
    window_matrix(op, rows, cols)
}

/// Matrix of `op` between explicit row and column index lists.
pub fn window_matrix(op: &LocalOp, rows: Vec<BasisIndex>, cols: Vec<BasisIndex>) -> DenseWindow {
    let row_pos: HashMap<&BasisIndex, usize> = rows.iter().enumerate().map(|(k, i)| (i, k)).collect();
    let mut m = DMatrix::<Scalar>::zeros(rows.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (idx, v) in op.column(c).iter() {
            if let Some(&i) = row_pos.get(idx) {
                m[(i, j)] = *v;
            }
        }
    }
    DenseWindow { rows, cols, matrix: m }
}

/// Largest entry modulus; zero for an empty matrix.
pub fn max_abs(m: &DMatrix<Scalar>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn spectral_norm(m: &DMatrix<Scalar>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Largest `|m_ij − conj(m_ji)|`.
pub fn hermitian_defect(m: &DMatrix<Scalar>) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    (m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub struct PsdRoot {
    pub sqrt: DMatrix<Scalar>,
    /// Orthogonal projection onto the span of eigenvectors with eigenvalue
    /// above the clamp tolerance.
    pub range_projector: DMatrix<Scalar>,
    pub min_eigenvalue: f64,
}

/// Hermitian PSD square root through an eigendecomposition; eigenvalues in
/// `[-clamp_tol, 0)` are clamped to zero.
pub fn psd_root(m: &DMatrix<Scalar>, clamp_tol: f64) -> Result<PsdRoot> {
    if !m.is_square() {
        return Err(Error::Precondition(format!(
            "PSD square root needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = hermitian_defect(m);
    if defect > clamp_tol {
        return Err(Error::NotHermitian { defect });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(PsdRoot { sqrt: m.clone(), range_projector: m.clone(), min_eigenvalue: 0.0 });
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -clamp_tol {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let u = &eig.eigenvectors;
    let roots = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Scalar::new(l.max(0.0).sqrt(), 0.0)));
    let keep =
        DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Scalar::new(if l > clamp_tol { 1.0 } else { 0.0 }, 0.0)));
    Ok(PsdRoot { sqrt: u * roots * u.adjoint(), range_projector: u * keep * u.adjoint(), min_eigenvalue })
}

/// [`psd_root`] on a square window.
pub fn psd_sqrt_dense(m: &DenseWindow, clamp_tol: f64) -> Result<DenseWindow> {
    if !m.is_square_window() {
        return Err(Error::Precondition("PSD square root needs identical row and column windows".into()));
    }
    let root = psd_root(&m.matrix, clamp_tol)?;
    Ok(DenseWindow { rows: m.rows.clone(), cols: m.cols.clone(), matrix: root.sqrt })
}

/// Moore–Penrose pseudoinverse; singular values at or below `cutoff` count
/// as zero.
pub fn pseudo_inverse(m: &DMatrix<Scalar>, cutoff: f64) -> DMatrix<Scalar> {
    if m.is_empty() {
        return m.transpose();
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^*");
    let mut inv_s = DMatrix::<Scalar>::zeros(vt.nrows(), u.ncols());
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > cutoff {
            inv_s[(k, k)] = Scalar::new(1.0 / s, 0.0);
        }
    }
    vt.adjoint() * inv_s * u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::shift_op;
    use crate::space::SpaceSpec;

    fn re(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    fn window_of(m: DMatrix<Scalar>) -> DenseWindow {
        let idx: Vec<BasisIndex> = (0..m.nrows()).map(BasisIndex::coord).collect();
        DenseWindow::new(idx.clone(), idx, m).unwrap()
    }

    #[test]
    fn truncated_shift_is_subdiagonal() {
        let s = shift_op(&SpaceSpec::finite(1).unwrap(), 1).unwrap();
        let w = truncate_dense(&s, 3);
        let expected = DMatrix::from_row_slice(
            3,
            3,
            &[re(0.0), re(0.0), re(0.0), re(1.0), re(0.0), re(0.0), re(0.0), re(1.0), re(0.0)],
        );
        assert_eq!(w.matrix, expected);
        assert!((w.spectral_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_operator_truncates_to_zero() {
        let l2 = SpaceSpec::sequence_of(&SpaceSpec::finite(2).unwrap());
        let w = truncate_dense(&LocalOp::zero(&l2, &l2), 4);
        assert_eq!(w.matrix.shape(), (8, 8));
        assert_eq!(w.max_abs_entry(), 0.0);
    }

    #[test]
    fn psd_root_examples() {
        let id = window_of(DMatrix::identity(3, 3));
        assert!((psd_sqrt_dense(&id, 1e-10).unwrap().matrix - DMatrix::<Scalar>::identity(3, 3)).norm() < 1e-14);

        let d = window_of(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![re(4.0), re(0.0)])));
        let r = psd_sqrt_dense(&d, 1e-10).unwrap();
        assert!((r.matrix[(0, 0)] - re(2.0)).norm() < 1e-14);
        assert!(r.matrix[(1, 1)].norm() < 1e-14);

        let p = window_of(DMatrix::from_element(1, 1, re(1.0 - 0.6 * 0.6)));
        assert!((psd_sqrt_dense(&p, 1e-10).unwrap().matrix[(0, 0)] - re(0.8)).norm() < 1e-15);
    }

    #[test]
    fn psd_root_rejects_bad_input() {
        let neg = window_of(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![re(1.0), re(-0.5)])));
        assert!(matches!(psd_sqrt_dense(&neg, 1e-10), Err(Error::NotPsd { .. })));
        let tiny_neg = window_of(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![re(1.0), re(-1e-12)])));
        assert!(psd_sqrt_dense(&tiny_neg, 1e-10).is_ok());
        let skew = window_of(DMatrix::from_row_slice(2, 2, &[re(1.0), re(1.0), re(0.0), re(1.0)]));
        assert!(matches!(psd_sqrt_dense(&skew, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn window_round_trips_through_local_op() {
        let c2 = SpaceSpec::finite(2).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[re(1.0), Scalar::new(0.0, 2.0), re(3.0), re(4.0)]);
        let w = window_of(m.clone());
        let op = w.to_local_op(&c2, &c2).unwrap();
        assert_eq!(window_matrix(&op, c2.basis(1), c2.basis(1)).matrix, m);
        assert_eq!(window_matrix(&op.adjoint(), c2.basis(1), c2.basis(1)).matrix, m.adjoint());
    }

    #[test]
    fn pseudo_inverse_drops_small_singular_values() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![re(2.0), re(1e-12)]));
        let p = pseudo_inverse(&m, 1e-10);
        assert!((p[(0, 0)] - re(0.5)).norm() < 1e-15);
        assert_eq!(p[(1, 1)], re(0.0));
    }
}
