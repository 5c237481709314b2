use crate::op::{same_space, LocalOp};
use crate::space::Space;
use crate::{Error, Result, DEFAULT_WINDOW_DEPTH, IDENTITY_TOL};

/// A commuting triple `(A, B, P)` of operators on one space.
#[derive(Clone, Debug)]
pub struct OperatorTriple {
    pub space: Space,
    pub a: LocalOp,
    pub b: LocalOp,
    pub p: LocalOp,
}

impl OperatorTriple {
    /// Admits the triple only if all three pairwise commutators vanish on the
    /// standard window to [`IDENTITY_TOL`].
    pub fn new(a: LocalOp, b: LocalOp, p: LocalOp) -> Result<Self> {
        let t = OperatorTriple::new_unchecked(a, b, p)?;
        let deviation = t.commutator_deviations(DEFAULT_WINDOW_DEPTH)?.into_iter().fold(0.0, f64::max);
        if deviation > IDENTITY_TOL {
            return Err(Error::NotCommuting { deviation });
        }
        Ok(t)
    }

    /// Only checks that the three operators are endomorphisms of one space.
    pub fn new_unchecked(a: LocalOp, b: LocalOp, p: LocalOp) -> Result<Self> {
        let space = a.domain().clone();
        for op in [&a, &b, &p] {
            if !op.is_endomorphism() || !same_space(op.domain(), &space) {
                return Err(Error::SpaceMismatch {
                    expected: format!("endomorphism of {space:?}"),
                    found: format!("{op:?}"),
                });
            }
        }
        Ok(OperatorTriple { space, a, b, p })
    }

    /// Window deviations of `[A,B]`, `[A,P]`, `[B,P]`.
    pub fn commutator_deviations(&self, depth: usize) -> Result<[f64; 3]> {
        let window = self.space.basis(depth);
        let dev = |s: &LocalOp, t: &LocalOp| -> Result<f64> { Ok(LocalOp::commutator(s, t)?.max_column_norm(&window)) };
        Ok([dev(&self.a, &self.b)?, dev(&self.a, &self.p)?, dev(&self.b, &self.p)?])
    }

    pub fn adjoint(&self) -> OperatorTriple {
        OperatorTriple { space: self.space.clone(), a: self.a.adjoint(), b: self.b.adjoint(), p: self.p.adjoint() }
    }

    pub fn ops(&self) -> [&LocalOp; 3] {
        [&self.a, &self.b, &self.p]
    }
}

/// A triple `(V1, V2, V3)` on a larger space `K` together with the isometric
/// embedding of the original space `H` into `K`.
#[derive(Clone, Debug)]
pub struct DilationTriple {
    pub big_space: Space,
    pub v1: LocalOp,
    pub v2: LocalOp,
    pub v3: LocalOp,
    pub embed: LocalOp,
}

impl DilationTriple {
    pub fn new(v1: LocalOp, v2: LocalOp, v3: LocalOp, embed: LocalOp) -> Result<Self> {
        let triple = OperatorTriple::new_unchecked(v1, v2, v3)?;
        if !same_space(embed.codomain(), &triple.space) {
            return Err(Error::SpaceMismatch {
                expected: format!("embedding into {:?}", triple.space),
                found: format!("{embed:?}"),
            });
        }
        let OperatorTriple { space, a, b, p } = triple;
        Ok(DilationTriple { big_space: space, v1: a, v2: b, v3: p, embed })
    }

    pub fn small_space(&self) -> &Space {
        self.embed.domain()
    }

    pub fn as_triple(&self) -> OperatorTriple {
        OperatorTriple { space: self.big_space.clone(), a: self.v1.clone(), b: self.v2.clone(), p: self.v3.clone() }
    }

    pub fn ops(&self) -> [&LocalOp; 3] {
        [&self.v1, &self.v2, &self.v3]
    }

    /// Deviation of `embed* ∘ embed` from the identity on the window of `H`.
    pub fn embedding_defect(&self, depth: usize) -> Result<f64> {
        let e = self.embed.adjoint().compose(&self.embed)?;
        let w = self.small_space().basis(depth);
        Ok(LocalOp::window_equality(&e, &LocalOp::identity(self.small_space()), &w, 0.0).max_deviation)
    }

    /// Largest `||(I − EE*) V_j* E h||` over the window of `H`: zero iff `H` is
    /// co-invariant for every `V_j` on that window.
    pub fn co_invariance_defect(&self, depth: usize) -> Result<f64> {
        let e = &self.embed;
        let proj = e.compose(&e.adjoint())?;
        let off = LocalOp::identity(&self.big_space).sub(&proj)?;
        let w = self.small_space().basis(depth);
        let mut worst = 0.0f64;
        for v in self.ops() {
            let leak = off.compose(&v.adjoint())?.compose(e)?;
            worst = worst.max(leak.max_column_norm(&w));
        }
        Ok(worst)
    }
}
