//! The family `(A_α, 0, P)` on `H = l2(C²)^{⊕4}`: `A_α` carries the
//! nilpotent `H` in block (2,2), `P` carries `T_z` in block (2,1) and the
//! identity in block (3,0) (blocks numbered from zero). Any product of two of
//! the three operators vanishes, yet the fundamental operators are not
//! balanced, so the classical minimal construction does not apply.

use nalgebra::DMatrix;

use crate::dense::DenseWindow;
use crate::hardy::shift_op;
use crate::op::LocalOp;
use crate::space::{Space, SpaceSpec};
use crate::tetrablock::defect::{sub_sum_inclusion, DefectData};
use crate::tetrablock::fundamental::FundamentalPair;
use crate::triple::OperatorTriple;
use crate::{Error, Result, Scalar, DEFAULT_WINDOW_DEPTH};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PalParameters {
    pub alpha: Scalar,
    pub window_depth: usize,
}

impl PalParameters {
    /// Requires a finite `alpha` in the closed unit disc.
    pub fn new(alpha: Scalar, window_depth: usize) -> Result<Self> {
        let p = PalParameters::new_unchecked(alpha, window_depth)?;
        if alpha.norm() > 1.0 {
            return Err(Error::OutOfRange(format!("|alpha| = {} exceeds 1", alpha.norm())));
        }
        Ok(p)
    }

    /// Admits any finite `alpha`; used to probe what breaks outside the disc.
    pub fn new_unchecked(alpha: Scalar, window_depth: usize) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if window_depth == 0 {
            return Err(Error::OutOfRange("window depth must be positive".into()));
        }
        Ok(PalParameters { alpha, window_depth })
    }

    pub fn with_alpha(alpha: Scalar) -> Result<Self> {
        PalParameters::new(alpha, DEFAULT_WINDOW_DEPTH)
    }
}

fn c2() -> Space {
    SpaceSpec::finite(2).expect("dimension 2 is valid")
}

/// `l2(C²)`.
pub fn block_space() -> Space {
    SpaceSpec::sequence_of(&c2())
}

/// `H = l2(C²) ⊕ l2(C²) ⊕ l2(C²) ⊕ l2(C²)`.
pub fn pal_space() -> Space {
    let b = block_space();
    SpaceSpec::sum(&[&b, &b, &b, &b]).expect("four parts")
}

/// `H1 = [[0, α], [0, 0]]` on `C²`.
pub fn h1(alpha: Scalar) -> LocalOp {
    let z = Scalar::default();
    let e = c2();
    let m = DMatrix::from_row_slice(2, 2, &[z, alpha, z, z]);
    DenseWindow::new(e.basis(1), e.basis(1), m).and_then(|w| w.to_local_op(&e, &e)).expect("2x2 window on C^2")
}

/// `H(c0, c1, …) = (H1 c0, 0, 0, …)` on `l2(C²)`.
pub fn h_op(alpha: Scalar) -> LocalOp {
    LocalOp::seq_block(&h1(alpha), 0, 0).expect("H1 is an endomorphism")
}

pub(crate) fn four_by_four(entries: &[(usize, usize, LocalOp)]) -> LocalOp {
    let b = block_space();
    let spaces = vec![b.clone(), b.clone(), b.clone(), b];
    let mut blocks: Vec<Vec<Option<LocalOp>>> = vec![vec![None; 4]; 4];
    for (i, j, op) in entries {
        blocks[*i][*j] = Some(op.clone());
    }
    LocalOp::block(&spaces, &spaces, blocks).expect("blocks act on l2(C^2)")
}

/// `(A_α, B, P)`. Admission is checked: the three operators must commute.
pub fn pal_triple(p: &PalParameters) -> Result<OperatorTriple> {
    let h = pal_space();
    let a = four_by_four(&[(2, 2, h_op(p.alpha))]);
    let b = LocalOp::zero(&h, &h);
    let pp = four_by_four(&[(2, 1, shift_op(&c2(), 1)?), (3, 0, LocalOp::identity(&block_space()))]);
    OperatorTriple::new(a, b, pp)
}

/// `D_P = 0 ⊕ 0 ⊕ I ⊕ I`, with defect space the sum of parts 2 and 3.
pub fn pal_defect() -> Result<DefectData> {
    let h = pal_space();
    let id = LocalOp::identity(&block_space());
    let dp = four_by_four(&[(2, 2, id.clone()), (3, 3, id)]);
    DefectData::from_projection(dp, sub_sum_inclusion(&h, &[2, 3])?, DEFAULT_WINDOW_DEPTH)
}

/// `F1 = [[H, 0], [0, 0]]` and `F2 = 0` on the defect space, with residuals
/// measured against [`pal_triple`].
pub fn pal_fundamentals(p: &PalParameters) -> Result<FundamentalPair> {
    let t = pal_triple(p)?;
    let d = pal_defect()?;
    let b = block_space();
    let spaces = [b.clone(), b];
    let f1 = LocalOp::block(&spaces, &spaces, vec![vec![Some(h_op(p.alpha)), None], vec![None, None]])?;
    let f2 = LocalOp::zero(&d.space, &d.space);
    FundamentalPair::with_residuals(&t, &d, f1, f2, p.window_depth)
}
