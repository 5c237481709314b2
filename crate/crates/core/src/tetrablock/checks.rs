//! Predicates on triples: tetrablock isometry and the dilation property.

use rand::Rng;

use crate::norm::{operator_norm_estimate, NormEstimate};
use crate::op::{same_space, LocalOp};
use crate::triple::{DilationTriple, OperatorTriple};
use crate::{Error, Result};

/// Relative convergence tolerance used for the norm estimates.
const NORM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
pub struct IsometryReport {
    /// `||V3* V3 − I||` on the window (largest column deviation).
    pub v3_isometry_deviation: f64,
    pub norm_v1: NormEstimate,
    pub norm_v2: NormEstimate,
    /// `V1 = V2* V3` on the window.
    pub relation_deviation: f64,
    /// Window deviations of `[V1,V2]`, `[V1,V3]`, `[V2,V3]`.
    pub commutator_deviations: [f64; 3],
    pub tol: f64,
    pub depth: usize,
}

impl IsometryReport {
    pub fn v3_isometric(&self) -> bool {
        self.v3_isometry_deviation <= self.tol
    }

    pub fn norms_bounded(&self) -> bool {
        self.norm_v1.upper <= 1.0 + self.tol && self.norm_v2.upper <= 1.0 + self.tol
    }

    pub fn relation_holds(&self) -> bool {
        self.relation_deviation <= self.tol
    }

    pub fn commuting(&self) -> bool {
        self.commutator_deviations.iter().all(|d| *d <= self.tol)
    }

    /// Largest of the identity deviations (norms excluded).
    pub fn max_identity_deviation(&self) -> f64 {
        self.commutator_deviations
            .iter()
            .copied()
            .fold(self.v3_isometry_deviation.max(self.relation_deviation), f64::max)
    }

    /// True when the triple is a tetrablock isometry to the window depth.
    pub fn passed(&self) -> bool {
        self.v3_isometric() && self.norms_bounded() && self.relation_holds() && self.commuting()
    }
}

/// Checks that `(V1, V2, V3)` is a tetrablock isometry: commuting, `V3` an
/// isometry, `V1 = V2* V3` and `||V2|| ≤ 1`. `||V1||` is reported alongside.
/// Identities are tested on the window of copy depth `depth`; norms use
/// [`operator_norm_estimate`] up to `norm_depth_max`.
pub fn tetrablock_isometry_check(
    t: &OperatorTriple,
    depth: usize,
    tol: f64,
    norm_depth_max: usize,
) -> Result<IsometryReport> {
    let window = t.space.basis(depth);
    let id = LocalOp::identity(&t.space);
    let v3v3 = t.p.adjoint().compose(&t.p)?;
    let v3_isometry_deviation = LocalOp::window_equality(&v3v3, &id, &window, 0.0).max_deviation;
    let rel = t.b.adjoint().compose(&t.p)?;
    let relation_deviation = LocalOp::window_equality(&t.a, &rel, &window, 0.0).max_deviation;
    Ok(IsometryReport {
        v3_isometry_deviation,
        norm_v1: operator_norm_estimate(&t.a, NORM_TOL, norm_depth_max),
        norm_v2: operator_norm_estimate(&t.b, NORM_TOL, norm_depth_max),
        relation_deviation,
        commutator_deviations: t.commutator_deviations(depth)?,
        tol,
        depth,
    })
}

/// `x1^e1 x2^e2 x3^e3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub e1: u32,
    pub e2: u32,
    pub e3: u32,
}

impl Monomial {
    pub const fn new(e1: u32, e2: u32, e3: u32) -> Self {
        Monomial { e1, e2, e3 }
    }

    pub fn degree(&self) -> u32 {
        self.e1 + self.e2 + self.e3
    }

    /// All monomials with `1 ≤ degree ≤ max_degree`, in lexicographic order.
    pub fn all_up_to(max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for e1 in 0..=max_degree {
            for e2 in 0..=max_degree - e1 {
                for e3 in 0..=max_degree - e1 - e2 {
                    if e1 + e2 + e3 > 0 {
                        out.push(Monomial::new(e1, e2, e3));
                    }
                }
            }
        }
        out
    }

    /// `count` monomials drawn uniformly from [`Monomial::all_up_to`].
    pub fn random<R: Rng + ?Sized>(rng: &mut R, count: usize, max_degree: u32) -> Vec<Monomial> {
        let all = Monomial::all_up_to(max_degree);
        if all.is_empty() {
            return Vec::new();
        }
        (0..count).map(|_| all[rng.gen_range(0..all.len())]).collect()
    }

    /// Evaluates the monomial at a commuting triple, factors in the order
    /// `x1^e1 x2^e2 x3^e3`.
    pub fn evaluate(&self, ops: [&LocalOp; 3]) -> Result<LocalOp> {
        let mut acc = LocalOp::identity(ops[0].domain());
        for (op, e) in ops.into_iter().zip([self.e1, self.e2, self.e3]) {
            if e > 0 {
                acc = acc.compose(&op.power(e as usize)?)?;
            }
        }
        Ok(acc)
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x1^{} x2^{} x3^{}", self.e1, self.e2, self.e3)
    }
}

#[derive(Clone, Debug)]
pub struct CompressionReport {
    /// `(q, ||E* q(V) E − q(T)||)` per requested monomial, window maximum.
    pub monomial_deviations: Vec<(Monomial, f64)>,
    /// `V_j* E = E T_j*` for `j = 1, 2, 3`.
    pub co_invariance_deviations: [f64; 3],
    pub tol: f64,
}

impl CompressionReport {
    pub fn max_deviation(&self) -> f64 {
        self.monomial_deviations.iter().map(|(_, d)| *d).chain(self.co_invariance_deviations).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() <= self.tol
    }
}

/// Checks that `d` dilates `t`: for every monomial `q`, the compression of
/// `q(V1, V2, V3)` to `H` is `q(A, B, P)`, and `H` is co-invariant.
pub fn dilation_compression_check(
    t: &OperatorTriple,
    d: &DilationTriple,
    monomials: &[Monomial],
    depth: usize,
    tol: f64,
) -> Result<CompressionReport> {
    if !same_space(&t.space, d.small_space()) {
        return Err(Error::SpaceMismatch {
            expected: format!("{:?}", d.small_space()),
            found: format!("{:?}", t.space),
        });
    }
    let e = &d.embed;
    let window = t.space.basis(depth);
    let mut monomial_deviations = Vec::with_capacity(monomials.len());
    for q in monomials {
        let big = q.evaluate(d.ops())?;
        let compressed = e.adjoint().compose(&big)?.compose(e)?;
        let small = q.evaluate(t.ops())?;
        monomial_deviations.push((*q, LocalOp::window_equality(&compressed, &small, &window, 0.0).max_deviation));
    }
    let mut co_invariance_deviations = [0.0; 3];
    for ((dev, v), x) in co_invariance_deviations.iter_mut().zip(d.ops()).zip(t.ops()) {
        let lhs = v.adjoint().compose(e)?;
        let rhs = e.compose(&x.adjoint())?;
        *dev = LocalOp::window_equality(&lhs, &rhs, &window, 0.0).max_deviation;
    }
    Ok(CompressionReport { monomial_deviations, co_invariance_deviations, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceSpec;
    use crate::Scalar;
    use rand::SeedableRng;

    fn scalar_triple(a: f64, b: f64, p: f64) -> OperatorTriple {
        let id = LocalOp::identity(&SpaceSpec::finite(1).unwrap());
        let s = |x: f64| id.scaled(Scalar::new(x, 0.0));
        OperatorTriple::new(s(a), s(b), s(p)).unwrap()
    }

    #[test]
    fn identity_point_is_a_tetrablock_isometry() {
        let r = tetrablock_isometry_check(&scalar_triple(1.0, 1.0, 1.0), 1, 1e-12, 8).unwrap();
        assert!(r.passed());
        assert_eq!(r.norm_v1.upper, 1.0);
    }

    #[test]
    fn non_isometric_third_entry_fails() {
        let r = tetrablock_isometry_check(&scalar_triple(0.0, 0.0, 0.5), 1, 1e-12, 8).unwrap();
        assert!(!r.v3_isometric());
        assert!((r.v3_isometry_deviation - 0.75).abs() < 1e-15);
        assert!(!r.passed());
    }

    #[test]
    fn monomial_enumeration_counts() {
        // Monomials in three variables of degree 1..=4: C(7,3) − 1.
        assert_eq!(Monomial::all_up_to(4).len(), 34);
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let qs = Monomial::random(&mut rng, 50, 4);
        assert_eq!(qs.len(), 50);
        assert!(qs.iter().all(|q| (1..=4).contains(&q.degree())));
    }

    #[test]
    fn a_triple_dilates_itself() {
        let t = scalar_triple(0.2, -0.1, 0.5);
        let d = DilationTriple::new(t.a.clone(), t.b.clone(), t.p.clone(), LocalOp::identity(&t.space)).unwrap();
        let r = dilation_compression_check(&t, &d, &Monomial::all_up_to(3), 1, 1e-14).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_deviation(), 0.0);
    }
}
