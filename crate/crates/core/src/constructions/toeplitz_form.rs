//! The dilation
//!
//! ```text
//! V1 = [[A, 0], [C1, T_φ1]],  V2 = [[B, 0], [C2, T_φ2]],  V3 = [[P, 0], [C3, T_{z²}]]
//! φ1 = F1 + Ξ z + F2* z²,     φ2 = F2 + Ξ* z + F1* z²
//! C1 = (Ξ D_P, F2* D_P, 0, …), C2 = (Ξ* D_P, F1* D_P, 0, …), C3 = (0, D_P, 0, …)
//! ```
//!
//! on `H ⊕ l2(𝒟_P)`, and the conditions on `Ξ` under which it is a
//! tetrablock isometric dilation.

use crate::constructions::explicit::dilation_space;
use crate::hardy::{shift_op, symbol_sup_norm, toeplitz_from_symbol, OperatorSymbol, SupNormBracket};
use crate::op::{same_space, LocalOp};
use crate::space::Space;
use crate::tetrablock::defect::DefectData;
use crate::tetrablock::fundamental::FundamentalPair;
use crate::triple::{DilationTriple, OperatorTriple};
use crate::{Error, Result};

/// A candidate `Ξ` on the defect space.
#[derive(Clone, Debug)]
pub struct XiCandidate {
    pub xi: LocalOp,
}

impl XiCandidate {
    pub fn new(xi: LocalOp, defect_space: &Space) -> Result<Self> {
        if !xi.is_endomorphism() || !same_space(xi.domain(), defect_space) {
            return Err(Error::SpaceMismatch {
                expected: format!("endomorphism of {defect_space:?}"),
                found: format!("{xi:?}"),
            });
        }
        Ok(XiCandidate { xi })
    }

    pub fn zero(defect_space: &Space) -> Self {
        XiCandidate { xi: LocalOp::zero(defect_space, defect_space) }
    }
}

fn check_pair(fp: &FundamentalPair, d: &DefectData, xi: &XiCandidate) -> Result<()> {
    for op in [&fp.f1, &fp.f2, &xi.xi] {
        if !op.is_endomorphism() || !same_space(op.domain(), &d.space) {
            return Err(Error::SpaceMismatch {
                expected: format!("endomorphism of {:?}", d.space),
                found: format!("{op:?}"),
            });
        }
    }
    Ok(())
}

/// `(φ1, φ2)`.
pub fn toeplitz_symbols(fp: &FundamentalPair, xi: &XiCandidate) -> Result<(OperatorSymbol, OperatorSymbol)> {
    let e = fp.space();
    let phi1 = OperatorSymbol::zero(e).with(0, &fp.f1)?.with(1, &xi.xi)?.with(2, &fp.f2.adjoint())?;
    let phi2 = OperatorSymbol::zero(e).with(0, &fp.f2)?.with(1, &xi.xi.adjoint())?.with(2, &fp.f1.adjoint())?;
    Ok((phi1, phi2))
}

/// Assembles the triple from block, Toeplitz and copy-injection pieces.
/// No condition on `Ξ` is checked here; see [`xi_conditions`].
pub fn toeplitz_dilation(
    t: &OperatorTriple,
    d: &DefectData,
    fp: &FundamentalPair,
    xi: &XiCandidate,
) -> Result<DilationTriple> {
    if !same_space(&t.space, d.host()) {
        return Err(Error::SpaceMismatch { expected: format!("{:?}", d.host()), found: format!("{:?}", t.space) });
    }
    check_pair(fp, d, xi)?;
    let h = t.space.clone();
    let e = d.space.clone();
    let k = dilation_space(&h, &e);
    let seq = match k.parts() {
        Some([_, s]) => std::sync::Arc::new(s.clone()),
        _ => unreachable!("K is a two-part sum"),
    };
    let to = d.to_defect();
    let column = |first: &LocalOp, second: Option<&LocalOp>| -> Result<LocalOp> {
        let mut c = LocalOp::seq_inject(&e, 0).compose(&first.compose(&to)?)?;
        if let Some(s) = second {
            c = c.add(&LocalOp::seq_inject(&e, 1).compose(&s.compose(&to)?)?)?;
        }
        Ok(c)
    };
    let (phi1, phi2) = toeplitz_symbols(fp, xi)?;
    let (f1s, f2s, xis) = (fp.f1.adjoint(), fp.f2.adjoint(), xi.xi.adjoint());
    let c1 = column(&xi.xi, Some(&f2s))?;
    let c2 = column(&xis, Some(&f1s))?;
    let c3 = LocalOp::seq_inject(&e, 1).compose(&to)?;
    let spaces = [h.clone(), seq];
    let assemble = |top: &LocalOp, c: LocalOp, tphi: LocalOp| {
        LocalOp::block(&spaces, &spaces, vec![vec![Some(top.clone()), None], vec![Some(c), Some(tphi)]])
    };
    let v1 = assemble(&t.a, c1, toeplitz_from_symbol(&phi1))?;
    let v2 = assemble(&t.b, c2, toeplitz_from_symbol(&phi2))?;
    let v3 = assemble(&t.p, c3, shift_op(&e, 2)?)?;
    DilationTriple::new(v1, v2, v3, LocalOp::part_inject(&k, 0)?)
}

/// The five identities on `Ξ`, in order:
///
/// 1. `(Ξ F1* − Ξ* F2*) D_P P = 0`
/// 2. `[F2, F2*] − [F1, F1*] = [Ξ, Ξ*]`
/// 3. `[F1, F2] = 0`
/// 4. `[Ξ, F2] = [Ξ*, F1]`
/// 5. `Ξ D_P P = 0` and `Ξ* D_P P = 0`
pub const XI_CONDITION_NAMES: [&str; 5] = [
    "(Xi F1* - Xi* F2*) D_P P = 0",
    "[F2,F2*] - [F1,F1*] = [Xi,Xi*]",
    "[F1,F2] = 0",
    "[Xi,F2] = [Xi*,F1]",
    "Xi D_P P = 0 = Xi* D_P P",
];

#[derive(Clone, Copy, Debug)]
pub struct XiReport {
    /// Window deviations of the five identities (largest column norm).
    pub deviations: [f64; 5],
    /// Bracket for `sup_{|z|=1} ||φ1(z)||`.
    pub sup_norm: SupNormBracket,
    pub tol: f64,
}

impl XiReport {
    pub fn condition_holds(&self, k: usize) -> bool {
        self.deviations[k] <= self.tol
    }

    pub fn identities_hold(&self) -> bool {
        (0..5).all(|k| self.condition_holds(k))
    }

    /// The sampled maximum of `||φ1||` is at most `1 + tol`; the Lipschitz
    /// upper end of the bracket is reported but not required.
    pub fn norm_holds(&self) -> bool {
        self.sup_norm.lower <= 1.0 + self.tol
    }

    pub fn passed(&self) -> bool {
        self.identities_hold() && self.norm_holds()
    }
}

/// Evaluates the five identities on the window of copy depth `depth` (the
/// defect-space window for 2–4, the `H` window for 1 and 5) and brackets the
/// sup-norm of `φ1` on `grid_size` circle points.
pub fn xi_conditions(
    fp: &FundamentalPair,
    xi: &XiCandidate,
    d: &DefectData,
    p_op: &LocalOp,
    depth: usize,
    tol: f64,
    grid_size: usize,
) -> Result<XiReport> {
    check_pair(fp, d, xi)?;
    let (f1, f2, x) = (&fp.f1, &fp.f2, &xi.xi);
    let (f1s, f2s, xs) = (f1.adjoint(), f2.adjoint(), x.adjoint());
    let dpp = d.to_defect().compose(p_op)?;
    let hw = p_op.domain().basis(depth);
    let dw = d.space.basis(depth);
    let comm = LocalOp::commutator;

    let item1 = x.compose(&f1s)?.sub(&xs.compose(&f2s)?)?.compose(&dpp)?.max_column_norm(&hw);
    let lhs2 = comm(f2, &f2s)?.sub(&comm(f1, &f1s)?)?;
    let item2 = LocalOp::window_equality(&lhs2, &comm(x, &xs)?, &dw, 0.0).max_deviation;
    let item3 = comm(f1, f2)?.max_column_norm(&dw);
    let item4 = LocalOp::window_equality(&comm(x, f2)?, &comm(&xs, f1)?, &dw, 0.0).max_deviation;
    let item5 = x.compose(&dpp)?.max_column_norm(&hw).max(xs.compose(&dpp)?.max_column_norm(&hw));

    let (phi1, _) = toeplitz_symbols(fp, xi)?;
    let sup_norm = symbol_sup_norm(&phi1, grid_size, depth)?;
    Ok(XiReport { deviations: [item1, item2, item3, item4, item5], sup_norm, tol })
}
