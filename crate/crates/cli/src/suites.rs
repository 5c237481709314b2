//! The six suites. Each appends checks in a fixed order; a library error
//! ends the suite with a failing `error` check carrying the message.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tetrablock::constructions::toeplitz_form::XI_CONDITION_NAMES;
use tetrablock::constructions::xi_search::DEFAULT_BUDGET;
use tetrablock::constructions::xi_search::SEARCH_RESIDUAL_TOL;
use tetrablock::constructions::{
    adjoint_dilation, explicit_dilation, pal_defect, pal_fundamentals, pal_triple, toeplitz_dilation, xi_conditions,
    xi_search, PalParameters, XiCandidate, XiReport,
};
use tetrablock::hardy::extract_symbol;
use tetrablock::tetrablock::defect::{defect_operator, DefectData, DEFAULT_CLAMP_TOL};
use tetrablock::tetrablock::fundamental::{
    commutator_balance, fundamental_relations_check, solve_fundamental, FundamentalPair,
};
use tetrablock::tetrablock::geometry::{membership_oracle, pi_map, Membership, MembershipMode};
use tetrablock::tetrablock::{dilation_compression_check, tetrablock_isometry_check, Monomial};
use tetrablock::{truncate_dense, DilationTriple, LocalOp, OperatorTriple, Result, IDENTITY_TOL};

use crate::config::{RunConfig, Suite};
use crate::report::{mode_name, Check, CheckValue, Report, Status};

/// Random monomials per compression check.
pub const MONOMIAL_COUNT: usize = 100;
pub const MONOMIAL_MAX_DEGREE: u32 = 4;
/// The dense Ξ search solves for every entry of a window matrix, so it runs
/// on a shallow window whatever the identity-check depth.
pub const SEARCH_DEPTH_CAP: usize = 3;

pub fn run_suite(cfg: &RunConfig) -> Report {
    let mut checks = Vec::new();
    let run = match cfg.suite {
        Suite::VerifyPal => verify_pal(cfg, &mut checks),
        Suite::VerifyAdjoint => verify_adjoint(cfg, &mut checks),
        Suite::VerifyToeplitzForm => verify_toeplitz_form(cfg, &mut checks),
        Suite::XiCheck => xi_check(cfg, &mut checks),
        Suite::XiSearch => xi_search_suite(cfg, &mut checks),
        Suite::Membership => membership(cfg, &mut checks),
    };
    if let Err(e) = run {
        checks.push(Check::bounded("error", &e.to_string(), CheckValue::None, f64::INFINITY, cfg.tol));
    }
    Report { config: cfg.clone(), checks }
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

/// Probing outside the unit disc is allowed: there the norm checks fail.
fn pal_setup(cfg: &RunConfig) -> Result<(PalParameters, OperatorTriple)> {
    let p = PalParameters::new_unchecked(cfg.alpha, cfg.window_depth)?;
    let t = pal_triple(&p)?;
    Ok((p, t))
}

fn monomials(cfg: &RunConfig) -> Vec<Monomial> {
    Monomial::random(&mut ChaCha8Rng::seed_from_u64(cfg.seed), MONOMIAL_COUNT, MONOMIAL_MAX_DEGREE)
}

/// Isometry checks on the dilation, with `V` in names replaced by `prefix`.
fn isometry_checks(cfg: &RunConfig, v: &DilationTriple, prefix: &str, out: &mut Vec<Check>) -> Result<()> {
    let rep = tetrablock_isometry_check(&v.as_triple(), cfg.window_depth, cfg.tol, cfg.norm_depth_max)?;
    let n = |s: &str| s.replace('V', prefix);
    out.push(Check::identity(&n("V3-isometry"), &n("V3* V3 = I"), rep.v3_isometry_deviation, cfg.tol));
    out.push(Check::identity(&n("V1-equals-V2*V3"), &n("V1 = V2* V3"), rep.relation_deviation, cfg.tol));
    out.push(Check::identity(
        &n("V-commuting"),
        &n("[V1,V2] = [V1,V3] = [V2,V3] = 0"),
        max_of(rep.commutator_deviations),
        cfg.tol,
    ));
    out.push(Check::at_most(&n("norm-V1"), &n("||V1|| <= 1 (Schur upper bound)"), rep.norm_v1.upper, 1.0, cfg.tol));
    out.push(Check::at_most(&n("norm-V2"), &n("||V2|| <= 1 (Schur upper bound)"), rep.norm_v2.upper, 1.0, cfg.tol));
    Ok(())
}

fn compression_checks(cfg: &RunConfig, t: &OperatorTriple, v: &DilationTriple, out: &mut Vec<Check>) -> Result<()> {
    let rep = dilation_compression_check(t, v, &monomials(cfg), cfg.window_depth, cfg.tol)?;
    let mono = max_of(rep.monomial_deviations.iter().map(|(_, d)| *d));
    out.push(Check::identity(
        "compression",
        "E* q(dilation) E = q(triple) for seeded random monomials q of degree <= 4",
        mono,
        cfg.tol,
    ));
    out.push(Check::identity(
        "co-invariance",
        "H is co-invariant: (jth dilation operator)* E = E (jth operator)*",
        max_of(rep.co_invariance_deviations),
        cfg.tol,
    ));
    Ok(())
}

fn fundamental_checks(
    cfg: &RunConfig,
    t: &OperatorTriple,
    d: &DefectData,
    fp: &FundamentalPair,
    out: &mut Vec<Check>,
) -> Result<()> {
    out.push(Check::identity(
        "fundamental-residuals",
        "A - B* P = D F1 D and B - A* P = D F2 D",
        fp.residual1.max(fp.residual2),
        cfg.tol,
    ));
    let rel = fundamental_relations_check(t, d, fp, cfg.window_depth, cfg.tol)?;
    out.push(Check::identity(
        "fundamental-relations",
        "D A = F1 D + F2* D P and D B = F2 D + F1* D P",
        max_of(rel.deviations),
        cfg.tol,
    ));
    Ok(())
}

fn verify_pal(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<()> {
    let (p, t) = pal_setup(cfg)?;
    let depth = cfg.window_depth;
    let h_window = t.space.basis(depth);
    out.push(Check::identity(
        "triple-commuting",
        "[A,B] = [A,P] = [B,P] = 0",
        max_of(t.commutator_deviations(depth)?),
        cfg.tol,
    ));

    let d = defect_operator(&t.p, depth, DEFAULT_CLAMP_TOL)?;
    let expected = pal_defect()?;
    out.push(Check::identity(
        "defect-projection",
        "(I - P*P)^(1/2) is the projection onto the last two summands",
        LocalOp::window_equality(&d.dp, &expected.dp, &h_window, 0.0).max_deviation,
        cfg.tol,
    ));

    // Residuals are reported as a check, so the solver itself never rejects.
    let fp = solve_fundamental(&t, &d, depth, f64::INFINITY)?;
    fundamental_checks(cfg, &t, &d, &fp, out)?;
    let closed = pal_fundamentals(&p)?;
    let dw = d.space.basis(depth);
    out.push(Check::identity(
        "fundamental-F1",
        "F1 = [[H, 0], [0, 0]] on the defect space",
        LocalOp::window_equality(&fp.f1, &closed.f1, &dw, 0.0).max_deviation,
        cfg.tol,
    ));
    out.push(Check::identity("fundamental-F2-zero", "F2 = 0", fp.f2.max_column_norm(&dw), cfg.tol));

    let v = explicit_dilation(&t, &d, &fp)?;
    isometry_checks(cfg, &v, "V", out)?;
    compression_checks(cfg, &t, &v, out)?;

    let gap = commutator_balance(&fp, depth)?;
    out.push(Check::equals(
        "commutator-balance-gap",
        "||[F1,F1*] - [F2,F2*]|| = |alpha|^2, nonzero for alpha != 0",
        gap,
        p.alpha.norm_sqr(),
        cfg.tol,
    ));
    Ok(())
}

fn verify_adjoint(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<()> {
    let p = PalParameters::new_unchecked(cfg.alpha, cfg.window_depth)?;
    let adj = adjoint_dilation(&p)?;
    let depth = cfg.window_depth;
    let t = &adj.triple;

    let generic = defect_operator(&t.p, depth, DEFAULT_CLAMP_TOL)?;
    out.push(Check::identity(
        "adjoint-defect",
        "(I - P P*)^(1/2) = I + I + (I - Tz Tz*) + 0",
        LocalOp::window_equality(&generic.dp, &adj.data.dp_star, &t.space.basis(depth), 0.0).max_deviation,
        cfg.tol,
    ));
    let fp = FundamentalPair::with_residuals(t, &adj.data.defect, adj.data.g1.clone(), adj.data.g2.clone(), depth)?;
    fundamental_checks(cfg, t, &adj.data.defect, &fp, out)?;
    isometry_checks(cfg, &adj.dilation, "W", out)?;
    compression_checks(cfg, t, &adj.dilation, out)?;
    Ok(())
}

fn xi_condition_checks(cfg: &RunConfig, rep: &XiReport, prefix: &str, tol: f64, out: &mut Vec<Check>) {
    for (k, (dev, statement)) in rep.deviations.iter().zip(XI_CONDITION_NAMES).enumerate() {
        out.push(Check::identity(&format!("{prefix}-condition-{}", k + 1), statement, *dev, tol));
    }
    out.push(Check::at_most(
        &format!("{prefix}-sup-norm"),
        "sup over |z| = 1 of ||F1 + Xi z + F2* z^2|| <= 1 (sampled)",
        rep.sup_norm.lower,
        1.0,
        cfg.tol,
    ));
}

fn verify_toeplitz_form(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<()> {
    let (p, t) = pal_setup(cfg)?;
    let depth = cfg.window_depth;
    let d = defect_operator(&t.p, depth, DEFAULT_CLAMP_TOL)?;
    let fp = solve_fundamental(&t, &d, depth, f64::INFINITY)?;

    // Forward: Xi = F1* satisfies the conditions and reproduces the explicit dilation.
    let xi = XiCandidate::new(fp.f1.adjoint(), &d.space)?;
    let rep = xi_conditions(&fp, &xi, &d, &t.p, depth, cfg.tol, cfg.grid_size)?;
    xi_condition_checks(cfg, &rep, "xi", cfg.tol, out);
    out.push(Check::equals(
        "xi-sup-norm-equals-|alpha|",
        "||F1 + F1* z|| = |alpha| on the circle",
        rep.sup_norm.lower,
        p.alpha.norm(),
        cfg.tol,
    ));
    let tv = toeplitz_dilation(&t, &d, &fp, &xi)?;
    isometry_checks(cfg, &tv, "V", out)?;
    let explicit = explicit_dilation(&t, &d, &fp)?;
    let mut entry = 0.0f64;
    for (x, y) in tv.ops().into_iter().zip(explicit.ops()) {
        let diff = truncate_dense(x, depth).matrix - truncate_dense(y, depth).matrix;
        entry = entry.max(max_of(diff.iter().map(|c| c.norm())));
    }
    out.push(Check::identity(
        "matches-explicit-construction",
        "Toeplitz-form dilation with Xi = F1* equals the explicit one entrywise",
        entry,
        cfg.tol,
    ));

    // Reverse: the symbol read off the explicit V1 is analytic with the expected coefficients.
    let tail = LocalOp::part_inject(&explicit.big_space, 1)?;
    let t_phi1 = tail.adjoint().compose(&explicit.v1)?.compose(&tail)?;
    let sym = extract_symbol(&t_phi1, depth)?;
    let dw = d.space.basis(depth);
    let zero = LocalOp::zero(&d.space, &d.space);
    let coeff_dev = |n: i64, expected: &LocalOp| {
        LocalOp::window_equality(sym.coeff(n).unwrap_or(&zero), expected, &dw, 0.0).max_deviation
    };
    out.push(Check::identity(
        "symbol-z0",
        "constant coefficient of the symbol of V1 is F1",
        coeff_dev(0, &fp.f1),
        cfg.tol,
    ));
    out.push(Check::identity(
        "symbol-z1",
        "z coefficient of the symbol of V1 is F1*",
        coeff_dev(1, &fp.f1.adjoint()),
        cfg.tol,
    ));
    out.push(Check::identity(
        "symbol-z2",
        "z^2 coefficient of the symbol of V1 is F2*",
        coeff_dev(2, &fp.f2.adjoint()),
        cfg.tol,
    ));
    out.push(Check::identity(
        "symbol-analytic",
        "negative Fourier coefficients of the symbol of V1 vanish",
        sym.negative_part_size(depth),
        cfg.tol,
    ));
    Ok(())
}

fn xi_check(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<()> {
    let (_, t) = pal_setup(cfg)?;
    let depth = cfg.window_depth;
    let d = defect_operator(&t.p, depth, DEFAULT_CLAMP_TOL)?;
    let fp = solve_fundamental(&t, &d, depth, f64::INFINITY)?;

    let xi = XiCandidate::new(fp.f1.adjoint(), &d.space)?;
    let rep = xi_conditions(&fp, &xi, &d, &t.p, depth, cfg.tol, cfg.grid_size)?;
    xi_condition_checks(cfg, &rep, "xi", cfg.tol, out);

    // With Xi = 0 conditions 1, 4 and 5 are vacuous and 2, 3 become the
    // classical pair [F2,F2*] = [F1,F1*] and [F1,F2] = 0.
    let zero = xi_conditions(&fp, &XiCandidate::zero(&d.space), &d, &t.p, depth, cfg.tol, cfg.grid_size)?;
    let dw = d.space.basis(depth);
    let comm = LocalOp::commutator;
    let balance = comm(&fp.f2, &fp.f2.adjoint())?.sub(&comm(&fp.f1, &fp.f1.adjoint())?)?.max_column_norm(&dw);
    let f_comm = comm(&fp.f1, &fp.f2)?.max_column_norm(&dw);
    let [z1, z2, z3, z4, z5] = zero.deviations;
    out.push(Check::bounded(
        "xi-zero-reduction",
        "with Xi = 0 the conditions reduce to [F1,F2] = 0 and [F1,F1*] = [F2,F2*]",
        CheckValue::Real(z2),
        max_of([z1, z4, z5, (z2 - balance).abs(), (z3 - f_comm).abs()]),
        cfg.tol,
    ));
    Ok(())
}

fn xi_search_suite(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<()> {
    let (_, t) = pal_setup(cfg)?;
    let depth = cfg.window_depth.min(SEARCH_DEPTH_CAP);
    let d = defect_operator(&t.p, cfg.window_depth, DEFAULT_CLAMP_TOL)?;
    let fp = solve_fundamental(&t, &d, cfg.window_depth, f64::INFINITY)?;
    let found = xi_search(&fp, &d, &t.p, depth, DEFAULT_BUDGET)?;
    let tol = cfg.tol.max(SEARCH_RESIDUAL_TOL);
    let residual = found.best_residual();
    out.push(Check::bounded(
        "xi-search-residual",
        &format!("least-squares residual of the five identities on the copy depth {depth} window"),
        CheckValue::Real(residual),
        residual,
        tol,
    ));
    match &found.candidate {
        Some(xi) => {
            let rep = xi_conditions(&fp, xi, &d, &t.p, depth, tol, cfg.grid_size)?;
            xi_condition_checks(cfg, &rep, "xi-search", tol, out);
        }
        None => out.push(Check::bounded(
            "xi-search-candidate",
            "a Xi meeting the identities with sampled sup-norm <= 1 was found",
            CheckValue::None,
            f64::INFINITY,
            tol,
        )),
    }
    Ok(())
}

fn membership(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<()> {
    let point = cfg.point.expect("validated config has a point");
    let r = membership_oracle(&point, cfg.mode, cfg.tol)?;
    let (statement, deviation) = match cfg.mode {
        MembershipMode::Closure => ("some A with pi(A) = x has ||A|| <= 1", (r.achieved_norm - 1.0).max(0.0)),
        MembershipMode::Boundary => {
            ("some unitary A has pi(A) = x", (r.achieved_norm - 1.0).max(0.0).max(r.unitarity_defect))
        }
    };
    let status = match r.verdict {
        Membership::Member => Status::Pass,
        Membership::NotMember => Status::Fail,
        Membership::Unknown => Status::Unknown,
    };
    out.push(Check {
        name: format!("membership-{}", mode_name(cfg.mode)),
        anchor: statement.into(),
        status,
        value: CheckValue::Real(r.achieved_norm),
        tolerance: cfg.tol,
        deviation,
    });
    let image = pi_map(&r.witness).to_array();
    let fiber = max_of(image.iter().zip(point.to_array()).map(|(a, b)| (a - b).norm()));
    let scale = max_of(point.to_array().iter().map(|x| x.norm_sqr()));
    out.push(Check::identity(
        "fiber-witness",
        "the witness matrix maps to the point under pi",
        fiber,
        IDENTITY_TOL * (1.0 + scale),
    ));
    Ok(())
}
