//! The explicit dilation of the Pal family on `K = H ⊕ l2(𝒟_P)`, and the
//! same construction for the adjoint triple.
//!
//! The three infinite block matrices are written out directly as column
//! maps with case analysis on the block row and copy index; nothing here
//! goes through the generic block or Toeplitz builders, so the result can
//! serve as an independent reference for them.

use crate::constructions::pal::{block_space, four_by_four, h1, pal_space, pal_triple, PalParameters};
use crate::op::{same_space, LocalOp};
use crate::space::{Space, SpaceSpec, Step};
use crate::tetrablock::defect::DefectData;
use crate::tetrablock::fundamental::FundamentalPair;
use crate::triple::{DilationTriple, OperatorTriple};
use crate::vector::FinVec;
use crate::{Error, Result, Scalar, DEFAULT_WINDOW_DEPTH, IDENTITY_TOL};

/// `[[top, 0], [C, T]]` on `H ⊕ l2(𝒟)`, where `C h` has `c[k] h` in copy `k`
/// and `T` carries `phi[k]` on the `k`-th block subdiagonal.
fn lower_triangular(k: &Space, top: &LocalOp, c: Vec<LocalOp>, phi: Vec<LocalOp>) -> LocalOp {
    let seq = match k.parts() {
        Some([_, s]) => std::sync::Arc::new(s.clone()),
        _ => unreachable!("K is built as a two-part sum"),
    };
    let band = c.len().max(phi.len());
    let (top1, c1, phi1, k1, seq1) = (top.clone(), c.clone(), phi.clone(), k.clone(), seq.clone());
    let (top2, c2, phi2, k2, seq2) = (top.clone(), c, phi, k.clone(), seq);
    LocalOp::new(
        k.clone(),
        k.clone(),
        band,
        move |idx| {
            let mut out = FinVec::zero(&k1);
            match idx.first() {
                Some(Step::Part(0)) => {
                    let h = idx.tail();
                    out.axpy(one(), &top1.column(&h).lifted(&k1, Step::Part(0)));
                    for (n, cn) in c1.iter().enumerate() {
                        let v = cn.column(&h).lifted(&seq1, Step::Copy(n));
                        out.axpy(one(), &v.lifted(&k1, Step::Part(1)));
                    }
                }
                Some(Step::Part(1)) => {
                    let inner = idx.tail();
                    if let Some(Step::Copy(n)) = inner.first() {
                        let x = inner.tail();
                        for (j, f) in phi1.iter().enumerate() {
                            let v = f.column(&x).lifted(&seq1, Step::Copy(n + j));
                            out.axpy(one(), &v.lifted(&k1, Step::Part(1)));
                        }
                    }
                }
                _ => {}
            }
            out
        },
        move |idx| {
            let mut out = FinVec::zero(&k2);
            match idx.first() {
                Some(Step::Part(0)) => {
                    out.axpy(one(), &top2.adjoint_column(&idx.tail()).lifted(&k2, Step::Part(0)));
                }
                Some(Step::Part(1)) => {
                    let inner = idx.tail();
                    if let Some(Step::Copy(n)) = inner.first() {
                        let y = inner.tail();
                        if let Some(cn) = c2.get(n) {
                            out.axpy(one(), &cn.adjoint_column(&y).lifted(&k2, Step::Part(0)));
                        }
                        for (j, f) in phi2.iter().enumerate().take(n + 1) {
                            let v = f.adjoint_column(&y).lifted(&seq2, Step::Copy(n - j));
                            out.axpy(one(), &v.lifted(&k2, Step::Part(1)));
                        }
                    }
                }
                _ => {}
            }
            out
        },
    )
}

fn one() -> Scalar {
    Scalar::new(1.0, 0.0)
}

/// `K = H ⊕ l2(𝒟)`.
pub fn dilation_space(h: &Space, defect: &Space) -> Space {
    let seq = SpaceSpec::sequence_of(defect);
    SpaceSpec::sum(&[h, &seq]).expect("two parts")
}

/// Builds
///
/// ```text
/// V1 = [[A, 0], [C1, T_{F1 + F1* z}]],      C1 = (F1* D_P, 0, 0, …)
/// V2 = [[B, 0], [C2, T_{F1 z + F1* z²}]],   C2 = (F1 D_P, F1* D_P, 0, …)
/// V3 = [[P, 0], [C3, T_{z²}]],              C3 = (0, D_P, 0, …)
/// ```
///
/// This is only a dilation when `F2 = 0` and `F1² = 0`, which is checked on
/// the standard window.
pub fn explicit_dilation(t: &OperatorTriple, d: &DefectData, fp: &FundamentalPair) -> Result<DilationTriple> {
    if !same_space(&t.space, d.host()) || !same_space(fp.space(), &d.space) {
        return Err(Error::SpaceMismatch { expected: format!("{:?}", d.space), found: format!("{:?}", fp.space()) });
    }
    let w = d.space.basis(DEFAULT_WINDOW_DEPTH);
    let f2_size = fp.f2.max_column_norm(&w);
    let f1_sq = fp.f1.compose(&fp.f1)?.max_column_norm(&w);
    if f2_size > IDENTITY_TOL || f1_sq > IDENTITY_TOL {
        return Err(Error::Precondition(format!(
            "construction needs F2 = 0 and F1^2 = 0 (found {f2_size:e}, {f1_sq:e})"
        )));
    }
    let k = dilation_space(&t.space, &d.space);
    let to = d.to_defect();
    let (f1, f1s) = (fp.f1.clone(), fp.f1.adjoint());
    let zero_dd = LocalOp::zero(&d.space, &d.space);
    let zero_hd = LocalOp::zero(&t.space, &d.space);
    let v1 = lower_triangular(&k, &t.a, vec![f1s.compose(&to)?], vec![f1.clone(), f1s.clone()]);
    let v2 = lower_triangular(&k, &t.b, vec![f1.compose(&to)?, f1s.compose(&to)?], vec![zero_dd.clone(), f1, f1s]);
    let v3 = lower_triangular(&k, &t.p, vec![zero_hd, to], vec![zero_dd.clone(), zero_dd, LocalOp::identity(&d.space)]);
    DilationTriple::new(v1, v2, v3, LocalOp::part_inject(&k, 0)?)
}

/// Data of the adjoint construction: `D_{P*}` with its defect space, and the
/// fundamental operators `G1, G2` of `(A*, B*, P*)`.
#[derive(Clone, Debug)]
pub struct AdjointData {
    pub dp_star: LocalOp,
    pub defect: DefectData,
    pub g1: LocalOp,
    pub g2: LocalOp,
}

#[derive(Clone, Debug)]
pub struct AdjointDilation {
    /// `(A*, B*, P*)`.
    pub triple: OperatorTriple,
    pub data: AdjointData,
    pub dilation: DilationTriple,
}

/// Dilation `(W1, W2, W3)` of `(A*, B*, P*)` for the Pal family.
///
/// `D_{P*} = I ⊕ I ⊕ (I − T_z T_z*) ⊕ 0`, so the defect space is
/// `l2(C²) ⊕ l2(C²) ⊕ C²`, the last summand being copy 0 of part 2. On it
/// `G1 = 0 ⊕ 0 ⊕ H1*` and `G2 = 0`. The W-triple is the same explicit
/// construction run on these data, over `H ⊕ l2(𝒟_{P*})`.
pub fn adjoint_dilation(p: &PalParameters) -> Result<AdjointDilation> {
    let h = pal_space();
    let b = block_space();
    let c2 = SpaceSpec::finite(2)?;
    let id = LocalOp::identity(&b);
    let tail = LocalOp::seq_block(&LocalOp::identity(&c2), 0, 0)?;
    let dp_star = four_by_four(&[(0, 0, id.clone()), (1, 1, id.clone()), (2, 2, tail)]);

    let cols = [b.clone(), b.clone(), c2.clone()];
    let rows = [b.clone(), b.clone(), b.clone(), b];
    let embed = LocalOp::block(
        &rows,
        &cols,
        vec![
            vec![Some(id.clone()), None, None],
            vec![None, Some(id), None],
            vec![None, None, Some(LocalOp::seq_inject(&c2, 0))],
            vec![None, None, None],
        ],
    )?;
    debug_assert!(same_space(embed.codomain(), &h));
    let defect = DefectData::from_projection(dp_star.clone(), embed, p.window_depth.max(DEFAULT_WINDOW_DEPTH))?;

    let g1 = LocalOp::block(
        &cols,
        &cols,
        vec![vec![None, None, None], vec![None, None, None], vec![None, None, Some(h1(p.alpha).adjoint())]],
    )?;
    let g2 = LocalOp::zero(&defect.space, &defect.space);

    let triple = pal_triple(p)?.adjoint();
    let fp = FundamentalPair::with_residuals(&triple, &defect, g1.clone(), g2.clone(), p.window_depth)?;
    let dilation = explicit_dilation(&triple, &defect, &fp)?;
    Ok(AdjointDilation { triple, data: AdjointData { dp_star, defect, g1, g2 }, dilation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::pal::{pal_defect, pal_fundamentals};
    use crate::dense::truncate_dense;
    use crate::norm::operator_norm_estimate;
    use crate::tetrablock::checks::{dilation_compression_check, tetrablock_isometry_check, Monomial};
    use crate::tetrablock::fundamental::solve_fundamental;

    fn pal(alpha: Scalar) -> (PalParameters, OperatorTriple, DefectData, FundamentalPair) {
        let p = PalParameters::with_alpha(alpha).unwrap();
        (p, pal_triple(&p).unwrap(), pal_defect().unwrap(), pal_fundamentals(&p).unwrap())
    }

    #[test]
    fn columns_and_adjoint_columns_are_consistent() {
        let (_, t, d, fp) = pal(Scalar::new(0.3, 0.4));
        let v = explicit_dilation(&t, &d, &fp).unwrap();
        let w = v.big_space.basis(4);
        for op in v.ops() {
            assert_eq!(op.adjoint_consistency(&w, &w), 0.0);
        }
    }

    #[test]
    fn is_a_tetrablock_isometry_with_norm_alpha() {
        let alpha = Scalar::new(0.0, 0.9);
        let (_, t, d, fp) = pal(alpha);
        let v = explicit_dilation(&t, &d, &fp).unwrap();
        let r = tetrablock_isometry_check(&v.as_triple(), 8, 1e-12, 256).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.max_identity_deviation(), 0.0);
        for est in [r.norm_v1, r.norm_v2] {
            assert!((est.lower - 0.9).abs() < 1e-12 && (est.upper - 0.9).abs() < 1e-12, "{est:?}");
        }
    }

    #[test]
    fn zero_alpha_gives_zero_v1_v2() {
        let (_, t, d, fp) = pal(Scalar::default());
        let v = explicit_dilation(&t, &d, &fp).unwrap();
        let w = v.big_space.basis(6);
        assert_eq!(v.v1.max_column_norm(&w), 0.0);
        assert_eq!(v.v2.max_column_norm(&w), 0.0);
        assert_eq!(operator_norm_estimate(&v.v3, 1e-12, 16).lower, 1.0);
    }

    #[test]
    fn dilates_the_pal_triple() {
        let (_, t, d, fp) = pal(Scalar::new(0.25, 0.0));
        let v = explicit_dilation(&t, &d, &fp).unwrap();
        let qs = [Monomial::new(0, 0, 1), Monomial::new(1, 1, 0), Monomial::new(1, 0, 1), Monomial::new(2, 1, 1)];
        let r = dilation_compression_check(&t, &v, &qs, 8, 1e-12).unwrap();
        assert!(r.passed());
        assert!(v.embedding_defect(8).unwrap() == 0.0 && v.co_invariance_defect(8).unwrap() == 0.0);
    }

    #[test]
    fn rejects_pairs_outside_the_family() {
        let (_, t, d, fp) = pal(Scalar::new(0.5, 0.0));
        let bad = FundamentalPair { f2: fp.f1.clone(), ..fp };
        assert!(matches!(explicit_dilation(&t, &d, &bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn adjoint_defect_and_fundamentals() {
        let alpha = Scalar::new(-0.6, 0.2);
        let p = PalParameters::with_alpha(alpha).unwrap();
        let adj = adjoint_dilation(&p).unwrap();
        let h = adj.triple.space.clone();
        let w = h.basis(8);
        // D_{P*}^2 = I − P P*, where the adjoint triple carries P* as its third entry.
        let pps = adj.triple.p.adjoint().compose(&adj.triple.p).unwrap();
        let rhs = LocalOp::identity(&h).sub(&pps).unwrap();
        let lhs = adj.data.dp_star.compose(&adj.data.dp_star).unwrap();
        assert_eq!(LocalOp::window_equality(&lhs, &rhs, &w, 0.0).max_deviation, 0.0);
        // The solver recovers G1 and G2 = 0.
        let solved = solve_fundamental(&adj.triple, &adj.data.defect, 8, 1e-12).unwrap();
        let dw = adj.data.defect.space.basis(8);
        assert_eq!(LocalOp::window_equality(&solved.f1, &adj.data.g1, &dw, 0.0).max_deviation, 0.0);
        assert_eq!(solved.f2.max_column_norm(&dw), 0.0);
        assert_eq!(adj.data.defect.space.truncated_dim(1), 6);
        let g = truncate_dense(&adj.data.g1, 1).matrix;
        assert_eq!(g[(5, 4)], alpha.conj());
    }

    #[test]
    fn adjoint_triple_is_dilated_by_a_tetrablock_isometry() {
        let p = PalParameters::with_alpha(Scalar::new(0.7, 0.7)).unwrap();
        let adj = adjoint_dilation(&p).unwrap();
        let r = tetrablock_isometry_check(&adj.dilation.as_triple(), 8, 1e-12, 256).unwrap();
        assert!(r.passed(), "{r:?}");
        let c = dilation_compression_check(&adj.triple, &adj.dilation, &Monomial::all_up_to(3), 6, 1e-12).unwrap();
        assert!(c.passed(), "{}", c.max_deviation());
    }
}
