//! Numerical search for a `Ξ` satisfying the five identities and the
//! sup-norm bound.
//!
//! The identities are at most quadratic in `(Ξ, Ξ*)`, so on the truncated
//! defect window they form a real polynomial least-squares problem in the
//! real and imaginary parts of the entries of `Ξ`. It is solved by
//! Levenberg–Marquardt. Because each residual is quadratic, the central
//! difference `(R(x + e) − R(x − e)) / 2` is the exact directional
//! derivative, so the Jacobian carries no discretization error. A failed
//! search is not a proof that no `Ξ` exists.

use nalgebra::{DMatrix, DVector};

use crate::constructions::toeplitz_form::{toeplitz_symbols, XiCandidate};
use crate::dense::{window_matrix, DenseWindow};
use crate::hardy::{symbol_sup_norm, SupNormBracket};
use crate::op::LocalOp;
use crate::tetrablock::defect::DefectData;
use crate::tetrablock::fundamental::FundamentalPair;
use crate::{Error, Result, Scalar};

/// A candidate is accepted below this stacked residual norm.
pub const SEARCH_RESIDUAL_TOL: f64 = 1e-8;
/// Largest number of real unknowns the dense search will set up.
pub const MAX_SEARCH_PARAMS: usize = 1152;
pub const DEFAULT_BUDGET: usize = 200;
const SEARCH_GRID: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XiStart {
    Zero,
    F1Adjoint,
}

impl XiStart {
    pub fn name(&self) -> &'static str {
        match self {
            XiStart::Zero => "zero",
            XiStart::F1Adjoint => "F1*",
        }
    }
}

#[derive(Clone, Debug)]
pub struct StartOutcome {
    pub start: XiStart,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct XiSearchResult {
    /// Present iff some start reached the residual tolerance with a
    /// sup-norm within the bound.
    pub candidate: Option<XiCandidate>,
    pub accepted_start: Option<XiStart>,
    pub sup_norm: Option<SupNormBracket>,
    pub starts: Vec<StartOutcome>,
    pub depth: usize,
}

impl XiSearchResult {
    pub fn best_residual(&self) -> f64 {
        self.starts.iter().map(|s| s.residual).fold(f64::INFINITY, f64::min)
    }
}

struct Problem {
    n: usize,
    f1: DMatrix<Scalar>,
    f2: DMatrix<Scalar>,
    /// `D_P P` from the `H` window to the defect window.
    m: DMatrix<Scalar>,
    /// `[F2, F2*] − [F1, F1*]` and `[F1, F2]`, independent of `Ξ`.
    balance: DMatrix<Scalar>,
    f_comm: DMatrix<Scalar>,
}

fn comm(a: &DMatrix<Scalar>, b: &DMatrix<Scalar>) -> DMatrix<Scalar> {
    a * b - b * a
}

impl Problem {
    fn xi(&self, x: &DVector<f64>) -> DMatrix<Scalar> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            let k = 2 * (i * self.n + j);
            Scalar::new(x[k], x[k + 1])
        })
    }

    fn params(&self, xi: &DMatrix<Scalar>) -> DVector<f64> {
        let mut x = DVector::zeros(2 * self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let k = 2 * (i * self.n + j);
                x[k] = xi[(i, j)].re;
                x[k + 1] = xi[(i, j)].im;
            }
        }
        x
    }

    fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        let xi = self.xi(x);
        let xis = xi.adjoint();
        let blocks = [
            (&xi * self.f1.adjoint() - &xis * self.f2.adjoint()) * &self.m,
            &self.balance - comm(&xi, &xis),
            self.f_comm.clone(),
            comm(&xi, &self.f2) - comm(&xis, &self.f1),
            &xi * &self.m,
            &xis * &self.m,
        ];
        let len: usize = blocks.iter().map(|b| 2 * b.len()).sum();
        let mut out = DVector::zeros(len);
        let mut k = 0;
        for b in &blocks {
            for c in b.iter() {
                out[k] = c.re;
                out[k + 1] = c.im;
                k += 2;
            }
        }
        out
    }

    fn jacobian(&self, x: &DVector<f64>, rows: usize) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(rows, x.len());
        let mut xp = x.clone();
        for k in 0..x.len() {
            xp[k] = x[k] + 1.0;
            let plus = self.residual(&xp);
            xp[k] = x[k] - 1.0;
            let minus = self.residual(&xp);
            xp[k] = x[k];
            j.set_column(k, &((plus - minus) * 0.5));
        }
        j
    }

    /// Levenberg–Marquardt from `x`; returns the final point, its residual
    /// norm and the iteration count.
    fn solve(&self, mut x: DVector<f64>, budget: usize) -> (DVector<f64>, f64, usize) {
        let mut r = self.residual(&x);
        let mut cost = r.norm();
        let mut lambda = 1e-3;
        let mut iters = 0;
        while iters < budget && cost >= SEARCH_RESIDUAL_TOL {
            iters += 1;
            let j = self.jacobian(&x, r.len());
            let jt = j.transpose();
            let jtj = &jt * &j;
            let g = &jt * &r;
            if g.norm() == 0.0 {
                // Stationary point: every direction is flat to first order.
                break;
            }
            let mut improved = false;
            while lambda < 1e12 {
                let mut a = jtj.clone();
                for d in 0..a.nrows() {
                    a[(d, d)] += lambda * (1.0 + jtj[(d, d)]);
                }
                let Some(chol) = a.cholesky() else {
                    lambda *= 4.0;
                    continue;
                };
                let cand = &x - chol.solve(&g);
                let rc = self.residual(&cand);
                let c = rc.norm();
                if c < cost {
                    (x, r, cost) = (cand, rc, c);
                    lambda = (lambda / 3.0).max(1e-15);
                    improved = true;
                    break;
                }
                lambda *= 4.0;
            }
            if !improved {
                break;
            }
        }
        (x, cost, iters)
    }
}

/// Searches for `Ξ` on the defect window of copy depth `depth`, trying the
/// starts `Ξ0 = 0` and `Ξ0 = F1*` in that order with at most `budget`
/// iterations each. The first start whose residual falls below
/// [`SEARCH_RESIDUAL_TOL`] and whose `φ1` has sampled sup-norm at most
/// `1 + SEARCH_RESIDUAL_TOL` is returned.
pub fn xi_search(
    fp: &FundamentalPair,
    d: &DefectData,
    p_op: &LocalOp,
    depth: usize,
    budget: usize,
) -> Result<XiSearchResult> {
    let e = d.space.clone();
    let dw = e.basis(depth);
    let hw = p_op.domain().basis(depth);
    let n = dw.len();
    if 2 * n * n > MAX_SEARCH_PARAMS {
        return Err(Error::Precondition(format!(
            "defect window of dimension {n} is too large for the dense search; lower the depth"
        )));
    }
    let dense = |op: &LocalOp| window_matrix(op, dw.clone(), dw.clone()).matrix;
    let (f1, f2) = (dense(&fp.f1), dense(&fp.f2));
    let m = window_matrix(&d.to_defect().compose(p_op)?, dw.clone(), hw).matrix;
    let balance = comm(&f2, &f2.adjoint()) - comm(&f1, &f1.adjoint());
    let f_comm = comm(&f1, &f2);
    let problem = Problem { n, f1, f2, m, balance, f_comm };

    let mut starts = Vec::new();
    for start in [XiStart::Zero, XiStart::F1Adjoint] {
        let x0 = match start {
            XiStart::Zero => DVector::zeros(2 * n * n),
            XiStart::F1Adjoint => problem.params(&problem.f1.adjoint()),
        };
        let (x, residual, iterations) = problem.solve(x0, budget);
        starts.push(StartOutcome { start, residual, iterations });
        if residual >= SEARCH_RESIDUAL_TOL {
            continue;
        }
        let xi = DenseWindow::new(dw.clone(), dw.clone(), problem.xi(&x))?.to_local_op(&e, &e)?;
        let cand = XiCandidate::new(xi, &e)?;
        let (phi1, _) = toeplitz_symbols(fp, &cand)?;
        let sup = symbol_sup_norm(&phi1, SEARCH_GRID, depth)?;
        if sup.lower <= 1.0 + SEARCH_RESIDUAL_TOL {
            return Ok(XiSearchResult {
                candidate: Some(cand),
                accepted_start: Some(start),
                sup_norm: Some(sup),
                starts,
                depth,
            });
        }
    }
    Ok(XiSearchResult { candidate: None, accepted_start: None, sup_norm: None, starts, depth })
}
