//! Fundamental operators: the solutions `F1, F2` on the defect space of
//! `A − B*P = D_P F1 D_P` and `B − A*P = D_P F2 D_P`.

use crate::dense::{pseudo_inverse, truncate_dense, DenseWindow};
use crate::op::{same_space, LocalOp};
use crate::tetrablock::defect::DefectData;
use crate::triple::OperatorTriple;
use crate::{Error, Result};

/// Singular values of `D_P` at or below this are treated as zero in the
/// least-squares solve.
pub const PINV_CUTOFF: f64 = 1e-10;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct FundamentalPair {
    pub f1: LocalOp,
    pub f2: LocalOp,
    pub residual1: f64,
    pub residual2: f64,
}

impl FundamentalPair {
    /// Wraps a given pair, measuring its residuals against `(t, d)`.
    pub fn with_residuals(t: &OperatorTriple, d: &DefectData, f1: LocalOp, f2: LocalOp, depth: usize) -> Result<Self> {
        let (r1, r2) = fundamental_residuals(t, d, &f1, &f2, depth)?;
        Ok(FundamentalPair { f1, f2, residual1: r1, residual2: r2 })
    }

    pub fn space(&self) -> &crate::space::Space {
        self.f1.domain()
    }
}

fn right_hand_sides(t: &OperatorTriple) -> Result<(LocalOp, LocalOp)> {
    let r1 = t.a.sub(&t.b.adjoint().compose(&t.p)?)?;
    let r2 = t.b.sub(&t.a.adjoint().compose(&t.p)?)?;
    Ok((r1, r2))
}

/// Window deviations of `A − B*P − D_P F1 D_P` and `B − A*P − D_P F2 D_P`.
pub fn fundamental_residuals(
    t: &OperatorTriple,
    d: &DefectData,
    f1: &LocalOp,
    f2: &LocalOp,
    depth: usize,
) -> Result<(f64, f64)> {
    let (r1, r2) = right_hand_sides(t)?;
    let (into, out) = (d.to_defect(), d.from_defect());
    let window = t.space.basis(depth);
    let dev = |r: &LocalOp, f: &LocalOp| -> Result<f64> {
        let rebuilt = out.compose(f)?.compose(&into)?;
        Ok(LocalOp::window_equality(r, &rebuilt, &window, 0.0).max_deviation)
    };
    Ok((dev(&r1, f1)?, dev(&r2, f2)?))
}

/// Solves the fundamental equations.
///
/// With a projection defect the solution is the compression of the right-hand
/// side to the defect space. Otherwise the minimal-norm least-squares
/// solution `F = D⁺ R D⁺` is taken on the dense window at `depth`. Residuals
/// above `tol` mean no admissible pair exists at this depth.
pub fn solve_fundamental(t: &OperatorTriple, d: &DefectData, depth: usize, tol: f64) -> Result<FundamentalPair> {
    if !same_space(&t.space, d.host()) {
        return Err(Error::SpaceMismatch { expected: format!("{:?}", t.space), found: format!("{:?}", d.host()) });
    }
    let (r1, r2) = right_hand_sides(t)?;
    let (f1, f2) = if d.is_projection {
        let e = &d.embed;
        let compress = |r: &LocalOp| e.adjoint().compose(r)?.compose(e);
        (compress(&r1)?, compress(&r2)?)
    } else {
        if !same_space(&d.space, &t.space) {
            return Err(Error::Precondition("dense defect path expects the defect space to be H".into()));
        }
        let dm = truncate_dense(&d.dp, depth);
        let dp_inv = pseudo_inverse(&dm.matrix, PINV_CUTOFF);
        let solve = |r: &LocalOp| -> Result<LocalOp> {
            let rm = truncate_dense(r, depth);
            let fm = &dp_inv * rm.matrix * &dp_inv;
            DenseWindow::new(dm.rows.clone(), dm.cols.clone(), fm)?.to_local_op(&t.space, &t.space)
        };
        (solve(&r1)?, solve(&r2)?)
    };
    let pair = FundamentalPair::with_residuals(t, d, f1, f2, depth)?;
    if pair.residual1 > tol || pair.residual2 > tol {
        return Err(Error::NoAdmissiblePair { depth, residual1: pair.residual1, residual2: pair.residual2 });
    }
    Ok(pair)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelationsCheck {
    pub holds: bool,
    /// Deviations of `D_P A = F1 D_P + F2* D_P P` and `D_P B = F2 D_P + F1* D_P P`.
    pub deviations: [f64; 2],
}

pub fn fundamental_relations_check(
    t: &OperatorTriple,
    d: &DefectData,
    fp: &FundamentalPair,
    depth: usize,
    tol: f64,
) -> Result<RelationsCheck> {
    let into = d.to_defect();
    let into_p = into.compose(&t.p)?;
    let window = t.space.basis(depth);
    let dev = |x: &LocalOp, f: &LocalOp, g: &LocalOp| -> Result<f64> {
        let lhs = into.compose(x)?;
        let rhs = f.compose(&into)?.add(&g.adjoint().compose(&into_p)?)?;
        Ok(LocalOp::window_equality(&lhs, &rhs, &window, 0.0).max_deviation)
    };
    let deviations = [dev(&t.a, &fp.f1, &fp.f2)?, dev(&t.b, &fp.f2, &fp.f1)?];
    Ok(RelationsCheck { holds: deviations.iter().all(|x| *x <= tol), deviations })
}

/// `||[F1, F1*] − [F2, F2*]||` on the dense window at `depth`; zero is
/// necessary for the classical minimal dilation to exist.
pub fn commutator_balance(fp: &FundamentalPair, depth: usize) -> Result<f64> {
    let c1 = LocalOp::commutator(&fp.f1, &fp.f1.adjoint())?;
    let c2 = LocalOp::commutator(&fp.f2, &fp.f2.adjoint())?;
    Ok(truncate_dense(&c1.sub(&c2)?, depth).spectral_norm())
}
