//! Acceptance gate: ten verification criteria, one test each, every test
//! printing a single `[PASS criterion N] ...` line with its measured
//! numbers (or failing its assertion with the same numbers).
//!
//! Tolerances are centralized below; each constant documents what it
//! bounds and why that level is attainable at desk scale.

use std::time::Instant;

use num_complex::Complex64;
use oseen::analysis::{
    boundary_quadrature_check, catalogue, kernel_identity_check, KernelKind,
};
use oseen::experiments::{
    asymptotics_report, corpus, corpus_pairs, max_ratio, pressure_estimate_sweep,
    trace_forcing_family, trace_theorem_check, velocity_estimate_sweep, wake_profile_plane,
    RhsVariant,
};
use oseen::grids::{forward_transform, inverse_transform_real, HeightLevels, SpatialGrid1D};
use oseen::halfplane::{residual, solve_dirichlet, solve_slip, BoundarySignal, FieldComponent};
use oseen::symbols::{dirichlet_reduction, OseenParams};
use oseen::wholeplane::{
    divergence, duhamel_trace, forward_transform_plane, fundamental_solution_field,
    solve_oseen_full, solve_scalar, trace_decay_constant, PlaneField,
};

/// Interior-equation sup residual for corpus solves. The solver is
/// semi-analytic per mode, so residuals sit at rounding level; 1e-6
/// leaves five orders of headroom.
const PDE_RESIDUAL_TOL: f64 = 1e-6;
/// Divergence sup residual; divergence-freeness is a per-mode algebraic
/// identity, hence near machine precision.
const DIVERGENCE_TOL: f64 = 1e-10;
/// Boundary-condition sup residuals.
const BC_RESIDUAL_TOL: f64 = 1e-8;
/// Per-solve wall-clock budget at n = 1024, 64 levels.
const SOLVE_SECONDS_BUDGET: f64 = 10.0;
/// Sup distance between a slip solve and the equivalent Dirichlet solve;
/// both routes share transforms, so only rounding separates them.
const EQUIVALENCE_TOL: f64 = 1e-10;
/// FFT-vs-closed-form kernel identity sup error.
const KERNEL_TOL: f64 = 1e-6;
/// Quadrature slack allowed on the explicit-constant inequality.
const J1_SLACK: f64 = 1.05;
/// Relative error allowed on fitted decay-law exponents.
const SLOPE_TOL: f64 = 0.03;
/// Relative change allowed in a multiplier bound under scan refinement.
const MULTIPLIER_STABILITY_TOL: f64 = 0.05;
/// Sup distance between the quadrature boundary trace and the scalar
/// solver's zero-height slice.
const TRACE_MATCH_TOL: f64 = 1e-6;
/// Rounding slack on the decay-envelope monotonicity comparison.
const TRACE_ENVELOPE_SLACK: f64 = 1e-9;
/// Relative change allowed in estimate/trace ratios under 2x refinement.
const REFINEMENT_TOL: f64 = 0.10;
/// Downstream/upstream wake decay-length ratio must exceed this.
const WAKE_ANISOTROPY_FLOOR: f64 = 2.0;
/// Transverse wake symmetry tolerance.
const WAKE_TRANSVERSE_TOL: f64 = 0.20;
/// Whole-plane manufactured-solution recovery sup error.
const RECOVERY_TOL: f64 = 1e-8;
/// Per-mode divergence-identity tolerance for the whole-plane solver.
const MODE_DIVERGENCE_TOL: f64 = 1e-12;

fn params(a1: f64, a2: f64) -> OseenParams {
    OseenParams::new(a1, a2, 1.0).unwrap()
}

fn sup_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn rel_delta(coarse: f64, fine: f64) -> f64 {
    (coarse - fine).abs() / fine.max(f64::MIN_POSITIVE)
}

#[test]
fn criterion_01_corpus_solves_meet_residual_and_runtime_budgets() {
    let grid = SpatialGrid1D::new(20.0, 1024).unwrap();
    let levels = HeightLevels::default_for_grid(&grid, 64).unwrap();
    let p = params(1.0, -1.0);
    let pairs = corpus_pairs(&grid).unwrap();
    assert_eq!(pairs.len(), 20);

    let (mut pde, mut div, mut bc, mut slowest) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for pair in &pairs {
        let clock = Instant::now();
        let fields = solve_slip(&p, &pair.b, &pair.d, &levels).unwrap();
        slowest = slowest.max(clock.elapsed().as_secs_f64());
        let r = residual(&p, &fields).unwrap();
        pde = pde.max(r.pde_residual_linf);
        div = div.max(r.divergence_linf);
        bc = bc
            .max(r.bc_slip_residual_linf)
            .max(r.bc_normal_residual_linf);
    }
    let ok = pde < PDE_RESIDUAL_TOL
        && div < DIVERGENCE_TOL
        && bc < BC_RESIDUAL_TOL
        && slowest < SOLVE_SECONDS_BUDGET;
    println!(
        "[{} criterion 1] corpus solves at n = 1024, 64 levels: pde {pde:.3e} (tol \
         {PDE_RESIDUAL_TOL:.0e}), div {div:.3e} (tol {DIVERGENCE_TOL:.0e}), bc {bc:.3e} \
         (tol {BC_RESIDUAL_TOL:.0e}), slowest solve {slowest:.3}s (budget \
         {SOLVE_SECONDS_BUDGET}s)",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn criterion_02_slip_and_reduced_dirichlet_solves_agree() {
    let grid = SpatialGrid1D::new(20.0, 256).unwrap();
    let levels = HeightLevels::default_for_grid(&grid, 32).unwrap();
    let p = params(1.0, -1.0);

    let mut worst = 0.0f64;
    for pair in corpus_pairs(&grid).unwrap() {
        let slip = solve_slip(&p, &pair.b, &pair.d, &levels).unwrap();
        let b_hat = forward_transform(pair.b.samples(), &grid).unwrap();
        let d_hat = forward_transform(pair.d.samples(), &grid).unwrap();
        let mut d1_hat = vec![Complex64::new(0.0, 0.0); grid.n()];
        let mut d2_hat = vec![Complex64::new(0.0, 0.0); grid.n()];
        for i in 0..grid.n() {
            let (t1, t2) = dirichlet_reduction(&p, b_hat[i], d_hat[i], grid.frequency(i));
            d1_hat[i] = t1;
            d2_hat[i] = t2;
        }
        let d1 = BoundarySignal::new(grid, inverse_transform_real(&d1_hat, &grid).unwrap())
            .unwrap();
        let d2 = BoundarySignal::new(grid, inverse_transform_real(&d2_hat, &grid).unwrap())
            .unwrap();
        let dirichlet = solve_dirichlet(&p, &d1, &d2, &levels).unwrap();
        for j in 0..levels.len() {
            for comp in [FieldComponent::U1, FieldComponent::U2] {
                let a = slip.row(comp, j);
                let b = dirichlet.row(comp, j);
                for (x, y) in a.iter().zip(b) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    let ok = worst < EQUIVALENCE_TOL;
    println!(
        "[{} criterion 2] slip vs reduced-Dirichlet velocity sup distance {worst:.3e} \
         (tol {EQUIVALENCE_TOL:.0e})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn criterion_03_kernel_identities_hold_at_all_heights() {
    let mut worst = 0.0f64;
    let mut worst_label = String::new();
    for kind in KernelKind::ALL {
        for t in [0.1, 1.0, 10.0] {
            let check = kernel_identity_check(kind, t, 40.0, 2048).unwrap();
            if check.sup_error > worst {
                worst = check.sup_error;
                worst_label = format!("{} at t = {t}", kind.name());
            }
        }
    }
    let ok = worst < KERNEL_TOL;
    println!(
        "[{} criterion 3] kernel transform-vs-closed-form worst sup error {worst:.3e} \
         ({worst_label}; tol {KERNEL_TOL:.0e})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn criterion_04_explicit_constant_inequality_holds_with_slack() {
    let grid = SpatialGrid1D::new(20.0, 256).unwrap();
    let levels = HeightLevels::default_for_grid(&grid, 32).unwrap();
    let mut worst = 0.0f64;
    let mut checks = 0;
    for signal in corpus() {
        let b = signal.sample(&grid).unwrap();
        for p in [2.0, 3.0] {
            let check = boundary_quadrature_check(b.samples(), &grid, &levels, p).unwrap();
            worst = worst.max(check.ratio);
            checks += 1;
        }
    }
    let ok = worst <= J1_SLACK;
    println!(
        "[{} criterion 4] explicit-constant inequality over {checks} checks: worst \
         lhs/rhs {worst:.6} (allowed {J1_SLACK})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn criterion_05_decay_rate_power_laws_fit_within_three_percent() {
    let rows =
        asymptotics_report(&[params(0.0, 1.0), params(1.0, 0.0), params(1.0, -1.0)]).unwrap();
    let parabolic = (rows[0].small_k_slope / 2.0 - 1.0).abs();
    let transitional = (rows[1].small_k_slope / 0.5 - 1.0).abs();
    let large = rows
        .iter()
        .map(|r| (r.large_k_slope - 1.0).abs())
        .fold(0.0f64, f64::max);
    let ok = parabolic < SLOPE_TOL && transitional < SLOPE_TOL && large < SLOPE_TOL;
    println!(
        "[{} criterion 5] fitted decay exponents: outgoing small-k {:.5} (expect 2), \
         tangential small-k {:.5} (expect 0.5), worst large-k deviation {large:.2e} \
         (tol {SLOPE_TOL})",
        if ok { "PASS" } else { "FAIL" },
        rows[0].small_k_slope,
        rows[1].small_k_slope
    );
    assert!(ok);
}

#[test]
fn criterion_06_multiplier_catalogue_is_bounded_and_scan_stable() {
    let mut worst_shift = 0.0f64;
    let mut count = 0;
    let mut all_finite = true;
    for family in catalogue() {
        let bound = family.bound().unwrap();
        all_finite &= bound.sup.is_finite() && bound.sup > 0.0;
        worst_shift = worst_shift.max(bound.refinement_shift);
        count += 1;
    }
    let ok = all_finite && worst_shift < MULTIPLIER_STABILITY_TOL;
    println!(
        "[{} criterion 6] {count} catalogue multipliers finite, worst refinement shift \
         {worst_shift:.2e} (tol {MULTIPLIER_STABILITY_TOL})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

/// The band-pass forcing used for the quadrature-trace comparison:
/// supported well above the boundary, spectrally concentrated, decaying
/// below 1e-12 before the wall.
fn trace_fixture(grid: SpatialGrid1D) -> PlaneField {
    PlaneField::from_fn(grid, grid, |x1, x2| {
        (2.5 * x1).cos()
            * (-(x1 / 4.0) * (x1 / 4.0) - ((x2 - 2.0) / 0.35) * ((x2 - 2.0) / 0.35)).exp()
    })
    .unwrap()
}

#[test]
fn criterion_07_boundary_trace_formula_constant_and_stability() {
    let drift = [0.0, -1.0];
    let grid = SpatialGrid1D::new(20.0, 512).unwrap();
    let forcing = trace_fixture(grid);

    // (a) The quadrature trace matches the scalar solver's boundary slice.
    let trace = duhamel_trace(drift, &forcing).unwrap();
    let direct = solve_scalar(drift, &forcing).unwrap();
    let slice = direct.zero_height_slice();
    let err = trace
        .iter()
        .zip(&slice)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let scale = sup_abs(&slice);

    // (b) The decay constant falls at least as fast as the exponential
    // envelope e^{a2 s / 4}: normalized by the envelope, the sequence
    // must be non-increasing, so the constant fitted at s = 1 dominates
    // every later sample.
    let heights = [1.0, 2.0, 4.0, 8.0];
    let normalized: Vec<f64> = heights
        .iter()
        .map(|&s| trace_decay_constant(drift, s).unwrap() * (-drift[1] * s / 4.0).exp())
        .collect();
    let envelope_ok = normalized
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + TRACE_ENVELOPE_SLACK));
    let envelope_report: String = heights
        .iter()
        .zip(&normalized)
        .map(|(s, c)| format!(" s={s}: {c:.6};"))
        .collect();

    // (c) Trace-estimate ratios are refinement-stable.
    let mut ratios = Vec::new();
    for n in [256usize, 512] {
        let g = SpatialGrid1D::new(20.0, n).unwrap();
        let family = trace_forcing_family(&g).unwrap();
        ratios.push(trace_theorem_check(drift, &family, 2.0).unwrap());
    }
    let max_ratio_delta = ratios[0]
        .iter()
        .zip(&ratios[1])
        .map(|(c, f)| rel_delta(c.ratio, f.ratio))
        .fold(0.0f64, f64::max);

    let ok = err < TRACE_MATCH_TOL && envelope_ok && max_ratio_delta < REFINEMENT_TOL;
    println!(
        "[{} criterion 7] trace vs scalar solver sup error {err:.3e} (tol \
         {TRACE_MATCH_TOL:.0e}, trace scale {scale:.3e}); envelope-normalized \
         constants{envelope_report} ratio refinement delta {max_ratio_delta:.2e} \
         (tol {REFINEMENT_TOL})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn criterion_08_estimate_sweeps_are_finite_and_refinement_stable() {
    let mut ok = true;
    let mut lines = Vec::new();
    for (label, p) in [
        ("incoming", params(1.0, -1.0)),
        ("tangential", params(1.0, 0.0)),
        ("outgoing", params(1.0, 1.0)),
    ] {
        let mut maxima = Vec::new();
        for n in [256usize, 512] {
            let grid = SpatialGrid1D::new(20.0, n).unwrap();
            let levels = HeightLevels::default_for_grid(&grid, 24).unwrap();
            let pairs = corpus_pairs(&grid).unwrap();
            let pressure =
                pressure_estimate_sweep(&p, &pairs, &[2.0, 3.0], &levels, RhsVariant::Full)
                    .unwrap();
            let velocity =
                velocity_estimate_sweep(&p, &pairs, &[3.5, 4.0], &levels, RhsVariant::Full)
                    .unwrap();
            for row in pressure.iter().chain(&velocity) {
                ok &= row.ratio.is_finite();
            }
            maxima.push((max_ratio(&pressure), max_ratio(&velocity)));
        }
        let dp = rel_delta(maxima[0].0, maxima[1].0);
        let dv = rel_delta(maxima[0].1, maxima[1].1);
        ok &= dp < REFINEMENT_TOL && dv < REFINEMENT_TOL;
        lines.push(format!(
            "{label}: pressure max {:.4} (delta {dp:.2e}), velocity max {:.4} (delta {dv:.2e})",
            maxima[1].0, maxima[1].1
        ));
    }
    println!(
        "[{} criterion 8] sweep ratios under 2x refinement (tol {REFINEMENT_TOL}): {}",
        if ok { "PASS" } else { "FAIL" },
        lines.join("; ")
    );
    assert!(ok);
}

#[test]
fn criterion_09_wake_is_anisotropic_downstream_and_symmetric_across() {
    let grid = SpatialGrid1D::new(60.0, 512).unwrap();
    let drift = [1.0, 0.0];
    let field = fundamental_solution_field(drift, grid, grid).unwrap();
    let profile = wake_profile_plane(drift, &field, None).unwrap();
    let transverse = profile.transverse_ratio.unwrap();
    let ok = profile.anisotropy_ratio > WAKE_ANISOTROPY_FLOOR
        && (transverse - 1.0).abs() < WAKE_TRANSVERSE_TOL;
    println!(
        "[{} criterion 9] wake decay lengths down {:.4} / up {:.4}: anisotropy {:.4} \
         (floor {WAKE_ANISOTROPY_FLOOR}), transverse ratio {transverse:.6} (within \
         {WAKE_TRANSVERSE_TOL} of 1)",
        if ok { "PASS" } else { "FAIL" },
        profile.rays[0].decay_length,
        profile.rays[2].decay_length,
        profile.anisotropy_ratio
    );
    assert!(ok);
}

#[test]
fn criterion_10_whole_plane_manufactured_solution_is_recovered() {
    let grid = SpatialGrid1D::new(10.0, 128).unwrap();
    let drift = [1.0, -0.5];
    // Divergence-free velocity (x2, x1)e^{-r^2} with pressure x1 e^{-r^2};
    // forcing assembled from the analytic derivatives.
    let psi = |x1: f64, x2: f64| (-(x1 * x1 + x2 * x2)).exp();
    let u1 = PlaneField::from_fn(grid, grid, |x1, x2| x2 * psi(x1, x2)).unwrap();
    let u2 = PlaneField::from_fn(grid, grid, |x1, x2| x1 * psi(x1, x2)).unwrap();
    let pressure = PlaneField::from_fn(grid, grid, |x1, x2| x1 * psi(x1, x2)).unwrap();
    let f1 = PlaneField::from_fn(grid, grid, |x1, x2| {
        let g = psi(x1, x2);
        let r2 = x1 * x1 + x2 * x2;
        drift[0] * (-2.0 * x1 * x2) * g
            + drift[1] * (1.0 - 2.0 * x2 * x2) * g
            - x2 * (4.0 * r2 - 8.0) * g
            + (1.0 - 2.0 * x1 * x1) * g
    })
    .unwrap();
    let f2 = PlaneField::from_fn(grid, grid, |x1, x2| {
        let g = psi(x1, x2);
        let r2 = x1 * x1 + x2 * x2;
        drift[0] * (1.0 - 2.0 * x1 * x1) * g + drift[1] * (-2.0 * x1 * x2) * g
            - x1 * (4.0 * r2 - 8.0) * g
            - 2.0 * x1 * x2 * g
    })
    .unwrap();
    let g_field = PlaneField::from_fn(grid, grid, |x1, x2| -4.0 * x1 * x2 * psi(x1, x2)).unwrap();

    let flow = solve_oseen_full(drift, &f1, &f2, &g_field).unwrap();

    let sup_err = |a: &PlaneField, b: &PlaneField| {
        a.values()
            .iter()
            .zip(b.values())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    };
    let recovery = sup_err(&flow.u1, &u1)
        .max(sup_err(&flow.u2, &u2))
        .max(sup_err(&flow.pressure, &pressure));

    // Per-mode divergence identity: the coefficients of div u must equal
    // the coefficients of g exactly (both sides of the elimination).
    let div = divergence(&flow.u1, &flow.u2).unwrap();
    let div_hat = forward_transform_plane(&div).unwrap();
    let g_hat = forward_transform_plane(&g_field).unwrap();
    let g_scale = g_hat.iter().fold(0.0f64, |m, c| m.max(c.norm())).max(1.0);
    let mode_err = div_hat
        .iter()
        .zip(&g_hat)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
        / g_scale;

    let ok = recovery < RECOVERY_TOL && mode_err < MODE_DIVERGENCE_TOL;
    println!(
        "[{} criterion 10] manufactured whole-plane flow: recovery sup {recovery:.3e} \
         (tol {RECOVERY_TOL:.0e}), per-mode divergence identity {mode_err:.3e} (tol \
         {MODE_DIVERGENCE_TOL:.0e})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}
