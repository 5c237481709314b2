//! The map `π(A) = (a11, a22, det A)` and membership in the closed tetrablock
//! (images of contractions) and its distinguished boundary (images of
//! unitaries).
//!
//! Membership is decided directly from that definition: minimize `||A||`
//! over the fiber `π(A) = p`. The diagonal of `A` is fixed by `p`, and the
//! off-diagonal entries are constrained only through their product
//! `a12 a21 = x1 x2 − x3`, so the fiber is parameterized by
//! `a12 = r e^{iθ}`, `a21 = (x1 x2 − x3) / (r e^{iθ})`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;

use crate::{Error, Result, Scalar};

pub type Mat2 = Matrix2<Scalar>;

pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-6;
const GRID: usize = 64;
/// Half-width of the log-radius search interval around `sqrt|x1 x2 − x3|`.
const LOG_RADIUS_SPAN: f64 = 4.0;
const MIN_STEP: f64 = 1e-14;
const MAX_ITERS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TetrablockPoint {
    pub x1: Scalar,
    pub x2: Scalar,
    pub x3: Scalar,
}

impl TetrablockPoint {
    pub fn new(x1: Scalar, x2: Scalar, x3: Scalar) -> Self {
        TetrablockPoint { x1, x2, x3 }
    }

    pub fn to_array(&self) -> [Scalar; 3] {
        [self.x1, self.x2, self.x3]
    }
}

/// Parses `"re,im;re,im;re,im"`.
impl FromStr for TetrablockPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::OutOfRange(format!("expected three ';'-separated coordinates, got {s:?}")));
        }
        let mut xs = [Scalar::default(); 3];
        for (x, part) in xs.iter_mut().zip(parts) {
            *x = parse_complex(part)?;
        }
        Ok(TetrablockPoint::new(xs[0], xs[1], xs[2]))
    }
}

impl fmt::Display for TetrablockPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.to_array();
        write!(f, "{},{};{},{};{},{}", a.re, a.im, b.re, b.im, c.re, c.im)
    }
}

/// Parses `"re,im"` into a finite complex number.
pub fn parse_complex(s: &str) -> Result<Scalar> {
    let (re, im) = s.split_once(',').ok_or_else(|| Error::OutOfRange(format!("expected \"re,im\", got {s:?}")))?;
    let re: f64 = re.trim().parse().map_err(|_| Error::OutOfRange(format!("bad real part in {s:?}")))?;
    let im: f64 = im.trim().parse().map_err(|_| Error::OutOfRange(format!("bad imaginary part in {s:?}")))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(Scalar::new(re, im))
}

pub fn pi_map(m: &Mat2) -> TetrablockPoint {
    TetrablockPoint::new(m[(0, 0)], m[(1, 1)], m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)])
}

/// Spectral norm of a 2×2 matrix from its Frobenius norm and determinant.
pub fn norm2x2(m: &Mat2) -> f64 {
    let fro2 = m.iter().fold(0.0, |acc, c| acc + c.norm_sqr());
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).norm();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0);
    ((fro2 + disc.sqrt()) / 2.0).sqrt()
}

/// Spectral norm of `m* m − I`.
pub fn unitarity_defect(m: &Mat2) -> f64 {
    let g = m.adjoint() * m - Mat2::identity();
    // g is Hermitian: its norm is the largest |eigenvalue|.
    let tr = (g[(0, 0)].re + g[(1, 1)].re) / 2.0;
    let det = g[(0, 0)].re * g[(1, 1)].re - g[(0, 1)].norm_sqr();
    let rad = (tr * tr - det).max(0.0).sqrt();
    (tr + rad).abs().max((tr - rad).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipMode {
    Closure,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember,
    Unknown,
}

#[derive(Clone, Copy, Debug)]
pub struct MembershipResult {
    pub verdict: Membership,
    /// Best matrix found in the fiber over the point.
    pub witness: Mat2,
    pub achieved_norm: f64,
    pub unitarity_defect: f64,
    /// True when the local search shrank its steps to the floor.
    pub converged: bool,
}

fn fiber_matrix(p: &TetrablockPoint, c: Scalar, scale: f64, log_r: f64, theta: f64) -> Mat2 {
    let a12 = Scalar::from_polar(scale * log_r.exp(), theta);
    Mat2::new(p.x1, a12, c / a12, p.x2)
}

/// Decides whether `p` lies in the closed tetrablock (`Closure`) or in its
/// distinguished boundary (`Boundary`) by minimizing `||A||` over the fiber
/// with a 64×64 grid in `(log r, θ)` followed by compass-search refinement.
pub fn membership_oracle(p: &TetrablockPoint, mode: MembershipMode, tol: f64) -> Result<MembershipResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::OutOfRange(format!("tolerance must be positive, got {tol}")));
    }
    if p.to_array().iter().any(|x| !(x.re.is_finite() && x.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    let c = p.x1 * p.x2 - p.x3;
    let (witness, converged) = if c.norm() == 0.0 {
        // One off-diagonal entry must vanish; the other is free and the norm
        // is smallest when it vanishes too.
        (Mat2::new(p.x1, Scalar::default(), Scalar::default(), p.x2), true)
    } else {
        minimize_over_fiber(p, c)
    };
    let achieved_norm = norm2x2(&witness);
    let defect = unitarity_defect(&witness);
    let in_closure = achieved_norm <= 1.0 + tol;
    let verdict = match mode {
        MembershipMode::Closure if in_closure => Membership::Member,
        MembershipMode::Boundary if in_closure && defect <= tol => Membership::Member,
        _ if converged => Membership::NotMember,
        _ => Membership::Unknown,
    };
    Ok(MembershipResult { verdict, witness, achieved_norm, unitarity_defect: defect, converged })
}

fn minimize_over_fiber(p: &TetrablockPoint, c: Scalar) -> (Mat2, bool) {
    let scale = c.norm().sqrt();
    let f = |s: f64, t: f64| norm2x2(&fiber_matrix(p, c, scale, s, t));

    let ds = 2.0 * LOG_RADIUS_SPAN / (GRID - 1) as f64;
    let dt = 2.0 * PI / GRID as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..GRID {
        let s = -LOG_RADIUS_SPAN + i as f64 * ds;
        for j in 0..GRID {
            let t = j as f64 * dt;
            let v = f(s, t);
            if v < best.0 {
                best = (v, s, t);
            }
        }
    }

    let (mut val, mut s, mut t) = best;
    let (mut hs, mut ht) = (ds, dt);
    let mut converged = false;
    for _ in 0..MAX_ITERS {
        if hs < MIN_STEP && ht < MIN_STEP {
            converged = true;
            break;
        }
        let mut moved = false;
        for (cs, ct) in [(s + hs, t), (s - hs, t), (s, t + ht), (s, t - ht)] {
            let v = f(cs, ct);
            if v < val {
                (val, s, t) = (v, cs, ct);
                moved = true;
                break;
            }
        }
        if !moved {
            hs *= 0.5;
            ht *= 0.5;
        }
    }
    (fiber_matrix(p, c, scale, s, t), converged)
}
