//! The Ξ conditions hold exactly when the Toeplitz-form triple is a
//! tetrablock isometric dilation, probed on the Pal family with rotated and
//! perturbed choices of Ξ.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tetrablock::constructions::{
    pal_defect, pal_fundamentals, pal_triple, toeplitz_dilation, xi_conditions, PalParameters, XiCandidate,
};
use tetrablock::tetrablock::{dilation_compression_check, tetrablock_isometry_check, Monomial};
use tetrablock::{DenseWindow, LocalOp, Scalar};

const DEPTH: usize = 6;
const TOL: f64 = 1e-10;

struct Verdicts {
    conditions: bool,
    dilation: bool,
}

fn verdicts(alpha: Scalar, xi_of: impl Fn(&LocalOp) -> LocalOp) -> Verdicts {
    let p = PalParameters::with_alpha(alpha).unwrap();
    let (t, d, fp) = (pal_triple(&p).unwrap(), pal_defect().unwrap(), pal_fundamentals(&p).unwrap());
    let xi = XiCandidate::new(xi_of(&fp.f1), &d.space).unwrap();
    let rep = xi_conditions(&fp, &xi, &d, &t.p, DEPTH, TOL, 256).unwrap();
    let v = toeplitz_dilation(&t, &d, &fp, &xi).unwrap();
    let iso = tetrablock_isometry_check(&v.as_triple(), DEPTH, TOL, 8).unwrap();
    let comp = dilation_compression_check(&t, &v, &Monomial::all_up_to(2), DEPTH, TOL).unwrap();
    Verdicts { conditions: rep.passed(), dilation: iso.passed() && comp.passed() }
}

#[test]
fn rotating_xi_keeps_both_sides_true() {
    for k in 0..8 {
        let phase = Scalar::from_polar(1.0, k as f64 * std::f64::consts::PI / 4.0);
        let v = verdicts(Scalar::new(0.6, 0.2), |f1| f1.adjoint().scaled(phase));
        assert!(v.conditions && v.dilation, "phase {phase}");
    }
}

#[test]
fn xi_zero_fails_both_sides_for_nonzero_alpha() {
    let v = verdicts(Scalar::new(0.5, 0.0), |f1| LocalOp::zero(f1.domain(), f1.domain()));
    assert!(!v.conditions && !v.dilation);
    let v = verdicts(Scalar::new(0.0, 0.0), |f1| LocalOp::zero(f1.domain(), f1.domain()));
    assert!(v.conditions && v.dilation);
}

#[test]
fn random_perturbations_agree_on_both_sides() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..12 {
        let scale = 0.05 * rng.gen_range(0.0..1.0);
        let seed = rng.gen::<u64>();
        let v = verdicts(Scalar::new(0.5, -0.1), |f1| {
            let e = f1.domain();
            let w = e.basis(1);
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let m =
                DMatrix::from_fn(w.len(), w.len(), |_, _| Scalar::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
            let bump = DenseWindow::new(w.clone(), w, m).unwrap().to_local_op(e, e).unwrap();
            f1.adjoint().add(&bump.scaled(Scalar::new(scale, 0.0))).unwrap()
        });
        assert_eq!(v.conditions, v.dilation, "scale {scale}");
        assert!(!v.conditions);
    }
}
