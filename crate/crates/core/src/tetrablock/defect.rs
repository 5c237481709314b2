use std::sync::Arc;

use crate::dense::{psd_root, truncate_dense, DenseWindow};
use crate::op::{same_space, LocalOp};
use crate::space::{Space, SpaceSpec, Step};
use crate::vector::FinVec;
use crate::{Error, Result, IDENTITY_TOL};

pub const DEFAULT_CLAMP_TOL: f64 = 1e-10;

/// The defect operator `D_P = (I − P*P)^{1/2}` of a contraction on `H`,
/// together with a concrete model of the defect space `𝒟_P`.
///
/// `space` is either a sub-sum of the top-level parts of `H` (when `D_P` is
/// the coordinate projection onto those parts) or `H` itself; `embed` is the
/// isometric inclusion `𝒟_P → H`.
#[derive(Clone, Debug)]
pub struct DefectData {
    pub dp: LocalOp,
    /// Orthogonal projection of `H` onto the closure of the range of `D_P`.
    pub projector: LocalOp,
    pub space: Space,
    pub embed: LocalOp,
    pub is_projection: bool,
}

impl DefectData {
    pub fn host(&self) -> &Space {
        self.dp.domain()
    }

    /// `D_P` viewed as a map `H → 𝒟_P`.
    pub fn to_defect(&self) -> LocalOp {
        self.embed.adjoint().compose(&self.dp).expect("embed and dp share H")
    }

    /// `D_P` viewed as a map `𝒟_P → H`.
    pub fn from_defect(&self) -> LocalOp {
        self.dp.compose(&self.embed).expect("embed and dp share H")
    }

    /// Defect data for a known projection `dp` whose range is the image of
    /// the isometry `embed`. Checks `dp = embed ∘ embed*` on the window.
    pub fn from_projection(dp: LocalOp, embed: LocalOp, depth: usize) -> Result<Self> {
        if !same_space(embed.codomain(), dp.domain()) || !dp.is_endomorphism() {
            return Err(Error::SpaceMismatch {
                expected: format!("isometry into {:?}", dp.domain()),
                found: format!("{embed:?}"),
            });
        }
        let range = embed.compose(&embed.adjoint())?;
        let check = LocalOp::window_equality(&range, &dp, &dp.domain().basis(depth), IDENTITY_TOL);
        if !check.holds {
            return Err(Error::Precondition(format!(
                "operator is not the projection onto the embedded space (deviation {:e})",
                check.max_deviation
            )));
        }
        Ok(DefectData { projector: dp.clone(), space: embed.domain().clone(), dp, embed, is_projection: true })
    }
}

/// Computes `D_P` for a contraction `P`.
///
/// If `I − P*P` is an orthogonal projection on the window it is returned as
/// is; when it is moreover the coordinate projection onto some top-level
/// parts of `H`, the defect space is the sum of those parts. Otherwise the
/// square root of the dense window of `I − P*P` is lifted back to an operator
/// supported on the window, and the defect space is `H`.
pub fn defect_operator(p: &LocalOp, depth: usize, clamp_tol: f64) -> Result<DefectData> {
    if !p.is_endomorphism() {
        return Err(Error::Precondition("defect operator needs an endomorphism".into()));
    }
    let h = p.domain().clone();
    let lower = truncate_dense(p, depth).spectral_norm();
    if lower > 1.0 + clamp_tol {
        return Err(Error::NotContraction { lower });
    }
    let id = LocalOp::identity(&h);
    let q = id.sub(&p.adjoint().compose(p)?)?;
    let window = h.basis(depth);
    let idempotent = LocalOp::window_equality(&q.compose(&q)?, &q, &window, IDENTITY_TOL).holds;
    let hermitian = LocalOp::window_equality(&q, &q.adjoint(), &window, IDENTITY_TOL).holds;

    if idempotent && hermitian {
        let embed = coordinate_range(&q, &h, &window)?.unwrap_or_else(|| id.clone());
        let space = embed.domain().clone();
        return Ok(DefectData { dp: q.clone(), projector: q, space, embed, is_projection: true });
    }

    let dense = truncate_dense(&q, depth);
    let root = psd_root(&dense.matrix, clamp_tol)?;
    let lift = |m| DenseWindow::new(dense.rows.clone(), dense.cols.clone(), m)?.to_local_op(&h, &h);
    Ok(DefectData {
        dp: lift(root.sqrt)?,
        projector: lift(root.range_projector)?,
        space: h.clone(),
        embed: id,
        is_projection: false,
    })
}

/// When the projection `q` keeps some top-level parts of `H` whole and kills
/// the rest, returns the inclusion of the kept parts.
fn coordinate_range(q: &LocalOp, h: &Space, window: &[crate::space::BasisIndex]) -> Result<Option<LocalOp>> {
    let Some(parts) = h.parts() else { return Ok(None) };
    let mut kept = Vec::new();
    for k in 0..parts.len() {
        let inj = LocalOp::part_inject(h, k)?;
        let image = q.compose(&inj)?;
        let local: Vec<_> = window.iter().filter(|i| i.first() == Some(Step::Part(k))).map(|i| i.tail()).collect();
        if LocalOp::window_equality(&image, &inj, &local, IDENTITY_TOL).holds {
            kept.push(k);
        } else if image.max_column_norm(&local) > IDENTITY_TOL {
            return Ok(None);
        }
    }
    match kept.len() {
        0 => Ok(None),
        n if n == parts.len() => Ok(None),
        1 => Ok(Some(LocalOp::part_inject(h, kept[0])?)),
        _ => Ok(Some(sub_sum_inclusion(h, &kept)?)),
    }
}

/// Inclusion of `Sum(parts[k] for k in kept)` into `H = Sum(parts)`.
pub fn sub_sum_inclusion(h: &Space, kept: &[usize]) -> Result<LocalOp> {
    let parts = h.parts().ok_or_else(|| Error::Precondition(format!("{h:?} is not a direct sum")))?;
    let chosen: Vec<&SpaceSpec> = kept.iter().map(|&k| &parts[k]).collect();
    let sub = SpaceSpec::sum(&chosen)?;
    let kept: Arc<Vec<usize>> = Arc::new(kept.to_vec());
    let (k1, k2) = (Arc::clone(&kept), kept);
    let (h1, s1) = (Arc::clone(h), Arc::clone(&sub));
    Ok(LocalOp::new(
        sub,
        Arc::clone(h),
        0,
        move |i| match i.first() {
            Some(Step::Part(m)) => FinVec::basis(&h1, i.tail().prefixed(Step::Part(k1[m]))),
            _ => FinVec::zero(&h1),
        },
        move |i| match i.first().and_then(|s| match s {
            Step::Part(k) => k2.iter().position(|&x| x == k),
            _ => None,
        }) {
            Some(m) => FinVec::basis(&s1, i.tail().prefixed(Step::Part(m))),
            None => FinVec::zero(&s1),
        },
    ))
}
