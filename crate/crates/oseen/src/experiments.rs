//! Desk-scale verification drivers: estimate-ratio sweeps for the pressure
//! and velocity bounds, eigenvalue asymptotics fits, wake-anisotropy
//! profiles, and the boundary-trace estimate check.
//!
//! Function-space hypotheses are replaced by a fixed seeded corpus of 20
//! smooth decaying signals: a finite family plus refinement stability of
//! the observed ratios is the desk-scale substitute for quantifying over a
//! space. Ratios are reported, never asserted sharp; the ablation variants
//! (dropping a norm ingredient) are diagnostics, not claims.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grids::{inverse_transform_real, HeightLevels, SpatialGrid1D};
use crate::halfplane::{regime_label, solve_slip, BoundarySignal, FieldComponent, SolutionFields};
use crate::norms::{
    family_norm, lp_norm_halfplane, lp_norm_plane, sobolev_norm, spectral_derivative, NormSpec,
};
use crate::symbols::{eigenvalues, regime_of, OseenParams, Regime};
use crate::wholeplane::{duhamel_trace, PlaneField};

/// Default seed of the data corpus. All frozen reference values were
/// produced at this seed; reports must be reproducible.
pub const DEFAULT_CORPUS_SEED: u64 = 0x006f_7365_656e; // "oseen"

/// Number of radii sampled along each wake ray.
const WAKE_SAMPLES: usize = 40;

// ---------------------------------------------------------------------------
// Data corpus
// ---------------------------------------------------------------------------

/// Shape of a corpus signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalShape {
    /// `e^{−u²}` with `u = (x−c)/w`.
    Gaussian,
    /// Exact derivative of the Gaussian (mean-free by construction).
    GaussianDerivative,
    /// `cos(k₀(x−c)) e^{−u²}` — band-limited around `±k₀`.
    Modulated(f64),
    /// Flat-topped bump `e^{−u⁴}`: plateau-like near the center yet
    /// entire, so spectra (and every solution norm built on them) decay
    /// super-algebraically. A merely piecewise-smooth plateau would leave
    /// `k^{−3}` spectral tails that keep second-derivative norms from
    /// converging under grid refinement.
    PlateauBump,
}

/// One member of the seeded corpus: a named smooth decaying profile.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSignal {
    pub name: String,
    pub shape: SignalShape,
    pub center: f64,
    pub width: f64,
}

impl CorpusSignal {
    /// Evaluates the profile at a point.
    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.width;
        let g = (-u * u).exp();
        match self.shape {
            SignalShape::Gaussian => g,
            SignalShape::GaussianDerivative => -2.0 * u / self.width * g,
            SignalShape::Modulated(k0) => (k0 * (x - self.center)).cos() * g,
            SignalShape::PlateauBump => (-u.powi(4)).exp(),
        }
    }

    /// Samples the profile on a grid.
    pub fn sample(&self, grid: &SpatialGrid1D) -> Result<BoundarySignal> {
        BoundarySignal::from_fn(*grid, |x| self.eval(x))
    }
}

/// The default corpus: [`corpus_with_seed`] at [`DEFAULT_CORPUS_SEED`].
pub fn corpus() -> Vec<CorpusSignal> {
    corpus_with_seed(DEFAULT_CORPUS_SEED)
}

/// A 20-signal corpus: 6 Gaussians, 5 Gaussian derivatives, 6 modulated
/// Gaussians at three frequencies, 3 flat-topped bumps. The first member
/// of each family is pinned to a clean centered shape (these are the
/// named profiles the command line refers to) independent of the seed;
/// the rest draw centers in `[−3, 3]` and widths in `[0.8, 2.5]` from the
/// seed (bumps in `[1.5, 2.5]`: the `e^{−u⁴}` spectrum is the widest of
/// the families and needs the extra room to stay resolved on the default
/// grid).
pub fn corpus_with_seed(seed: u64) -> Vec<CorpusSignal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(20);
    let mut push = |name: String, shape: SignalShape, center: f64, width: f64| {
        out.push(CorpusSignal {
            name,
            shape,
            center,
            width,
        });
    };
    let random = |rng: &mut ChaCha8Rng| -> (f64, f64) {
        (rng.gen_range(-3.0..3.0), rng.gen_range(0.8..2.5))
    };

    push("gauss".into(), SignalShape::Gaussian, 0.0, 1.0);
    for i in 1..6 {
        let (c, w) = random(&mut rng);
        push(format!("gauss{i}"), SignalShape::Gaussian, c, w);
    }
    push("dgauss".into(), SignalShape::GaussianDerivative, 0.0, 1.0);
    for i in 1..5 {
        let (c, w) = random(&mut rng);
        push(format!("dgauss{i}"), SignalShape::GaussianDerivative, c, w);
    }
    for (label, k0, pinned_width) in [("modlow", 1.0, 1.5), ("modmid", 2.5, 1.2), ("modhigh", 5.0, 1.0)]
    {
        push(label.into(), SignalShape::Modulated(k0), 0.0, pinned_width);
        let (c, w) = random(&mut rng);
        push(format!("{label}1"), SignalShape::Modulated(k0), c, w);
    }
    push("bump".into(), SignalShape::PlateauBump, 0.0, 1.5);
    for i in 1..3 {
        let c = rng.gen_range(-3.0..3.0);
        let w = rng.gen_range(1.5..2.5);
        push(format!("bump{i}"), SignalShape::PlateauBump, c, w);
    }
    out
}

/// Looks a corpus member up by name.
pub fn corpus_entry(name: &str) -> Option<CorpusSignal> {
    corpus().into_iter().find(|s| s.name == name)
}

/// A named boundary-data pair for the slip problem.
#[derive(Debug, Clone)]
pub struct BoundaryPair {
    pub name: String,
    pub b: BoundarySignal,
    pub d: BoundarySignal,
}

/// [`pairs_from_corpus`] over the default corpus.
pub fn corpus_pairs(grid: &SpatialGrid1D) -> Result<Vec<BoundaryPair>> {
    pairs_from_corpus(&corpus(), grid)
}

/// Pairs every corpus member (as `b`) with the spectral derivative of the
/// member seven places further (as `d`). Differentiating makes `d` exactly
/// mean-free on the grid, so every solution mode decays, while keeping the
/// shapes smooth and varied.
pub fn pairs_from_corpus(
    signals: &[CorpusSignal],
    grid: &SpatialGrid1D,
) -> Result<Vec<BoundaryPair>> {
    let count = signals.len();
    (0..count)
        .map(|i| {
            let partner = &signals[(i + 7) % count];
            let d_samples = spectral_derivative(partner.sample(grid)?.samples(), grid, 1)?;
            Ok(BoundaryPair {
                name: format!("{}+{}'", signals[i].name, partner.name),
                b: signals[i].sample(grid)?,
                d: BoundarySignal::new(*grid, d_samples)?,
            })
        })
        .collect()
}

/// Normal-data-only pairs (`b = 0`): the derivative of each of the first
/// `count` corpus members. Used for regime-contrast sweeps where the same
/// `d` is run at different `a₂`.
pub fn d_only_pairs(grid: &SpatialGrid1D, count: usize) -> Result<Vec<BoundaryPair>> {
    let signals = corpus();
    signals
        .iter()
        .take(count.min(signals.len()))
        .map(|sig| {
            let d_samples = spectral_derivative(sig.sample(grid)?.samples(), grid, 1)?;
            Ok(BoundaryPair {
                name: format!("d-only:{}'", sig.name),
                b: BoundarySignal::new(*grid, vec![0.0; grid.n()])?,
                d: BoundarySignal::new(*grid, d_samples)?,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Estimate sweeps
// ---------------------------------------------------------------------------

/// Which right-hand side the sweep evaluates. The non-`Full` variants are
/// diagnostics: they weaken the boundary norm on purpose to show which
/// ingredient carries the estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhsVariant {
    /// The complete regime-correct combination.
    Full,
    /// Drop the second member of the `d` intersection space (no-op where
    /// the space has a single member).
    DropSecondIngredient,
    /// Replace every full Sobolev norm by its homogeneous seminorm.
    HomogeneousOnly,
}

impl RhsVariant {
    pub fn label(&self) -> &'static str {
        match self {
            RhsVariant::Full => "full",
            RhsVariant::DropSecondIngredient => "drop-second-ingredient",
            RhsVariant::HomogeneousOnly => "homogeneous-only",
        }
    }
}

/// One row of an estimate sweep: a datum, an exponent, and the two sides
/// of the inequality.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub regime: String,
    pub datum: String,
    pub exponent: f64,
    pub lhs_norm: f64,
    pub rhs_norm: f64,
    /// `lhs/rhs` when `rhs > 0`, else 0 (zero data).
    pub ratio: f64,
    pub rhs_variant: String,
    pub grid_n: usize,
    pub half_width: f64,
    pub level_count: usize,
}

#[allow(clippy::too_many_arguments)] // one argument per report column
fn make_report(
    params: &OseenParams,
    datum: &str,
    exponent: f64,
    lhs: f64,
    rhs: f64,
    variant: RhsVariant,
    grid: &SpatialGrid1D,
    levels: &HeightLevels,
) -> EstimateReport {
    EstimateReport {
        regime: regime_label(params).to_string(),
        datum: datum.to_string(),
        exponent,
        lhs_norm: lhs,
        rhs_norm: rhs,
        ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 },
        rhs_variant: variant.label().to_string(),
        grid_n: grid.n(),
        half_width: grid.half_width(),
        level_count: levels.len(),
    }
}

/// Largest ratio of a report list (0 for an empty list).
pub fn max_ratio(reports: &[EstimateReport]) -> f64 {
    reports.iter().fold(0.0f64, |m, r| m.max(r.ratio))
}

/// Boundary-space members for the pressure estimate at exponent `r`:
/// `b ∈ Ẇ^{1−1/r}_r` always; `d ∈ Ẇ^{2−1/r}_r` for outgoing convection
/// (`a₂ > 0`), intersected with `Ẇ^{1−1/r}_r` otherwise.
fn pressure_members(regime: Regime, r: f64, variant: RhsVariant) -> (Vec<NormSpec>, Vec<NormSpec>) {
    let b = vec![NormSpec::homogeneous(1.0 - 1.0 / r, r)];
    let mut d = vec![NormSpec::homogeneous(2.0 - 1.0 / r, r)];
    if regime != Regime::Parabolic {
        d.push(NormSpec::homogeneous(1.0 - 1.0 / r, r));
    }
    if variant == RhsVariant::DropSecondIngredient {
        d.truncate(1);
    }
    // All pressure members are homogeneous already, so HomogeneousOnly
    // changes nothing here.
    (b, d)
}

/// Boundary-space members for the velocity estimate at one `r ∈ A_s`:
///
/// * `a₂ < 0`: full norms `W^{1−1/r}_r` for `b`, `W^{2−1/r}_r` for `d`;
/// * `a₂ = 0`: `Ẇ^{1−1/r}_r` and `Ẇ^{2−1/r}_r ∩ Ẇ^{1−1/r}_r`;
/// * `a₂ > 0`: `Ẇ^{1−1/r}_r` and `Ẇ^{2−1/r}_r ∩ Ẇ^{2−2/r}_r`.
fn velocity_members(regime: Regime, r: f64, variant: RhsVariant) -> (Vec<NormSpec>, Vec<NormSpec>) {
    let (mut b, mut d) = match regime {
        Regime::Elliptic => (
            vec![NormSpec::inhomogeneous(1.0 - 1.0 / r, r)],
            vec![NormSpec::inhomogeneous(2.0 - 1.0 / r, r)],
        ),
        Regime::Transitional => (
            vec![NormSpec::homogeneous(1.0 - 1.0 / r, r)],
            vec![
                NormSpec::homogeneous(2.0 - 1.0 / r, r),
                NormSpec::homogeneous(1.0 - 1.0 / r, r),
            ],
        ),
        Regime::Parabolic => (
            vec![NormSpec::homogeneous(1.0 - 1.0 / r, r)],
            vec![
                NormSpec::homogeneous(2.0 - 1.0 / r, r),
                NormSpec::homogeneous(2.0 - 2.0 / r, r),
            ],
        ),
    };
    match variant {
        RhsVariant::Full => {}
        RhsVariant::DropSecondIngredient => d.truncate(1),
        RhsVariant::HomogeneousOnly => {
            for spec in b.iter_mut().chain(d.iter_mut()) {
                spec.homogeneous = true;
            }
        }
    }
    (b, d)
}

/// The exponent family `A_s = {3s/(3+s), s}` of the velocity estimate.
fn a_family(s: f64) -> [f64; 2] {
    [3.0 * s / (3.0 + s), s]
}

/// Physical rows of `|∇p|` on the level ladder, from the modal solution.
fn pressure_gradient_magnitude(fields: &SolutionFields) -> Result<Vec<f64>> {
    let modes = fields
        .modes()
        .ok_or_else(|| Error::Numerical("solution carries no spectral data".into()))?;
    let grid = fields.grid();
    let n = grid.n();
    let rows: Vec<Vec<f64>> = fields
        .levels()
        .levels()
        .par_iter()
        .map(|&t| -> Result<Vec<f64>> {
            let mut dx = vec![Complex64::new(0.0, 0.0); n];
            let mut dt = vec![Complex64::new(0.0, 0.0); n];
            for (i, m) in modes.iter().enumerate() {
                let p = m.pressure(t);
                dx[i] = Complex64::new(0.0, m.k) * p;
                dt[i] = m.pressure_dot(t);
            }
            let dx_phys = inverse_transform_real(&dx, grid)?;
            let dt_phys = inverse_transform_real(&dt, grid)?;
            Ok((0..n).map(|i| dx_phys[i].hypot(dt_phys[i])).collect())
        })
        .collect::<Result<_>>()?;
    Ok(rows.concat())
}

/// Physical rows of the Frobenius magnitude of `∇²u` (all eight entries
/// `∂ᵢ∂ⱼu_m`, the mixed one counted twice) on the level ladder.
fn velocity_hessian_magnitude(fields: &SolutionFields) -> Result<Vec<f64>> {
    let modes = fields
        .modes()
        .ok_or_else(|| Error::Numerical("solution carries no spectral data".into()))?;
    let grid = fields.grid();
    let n = grid.n();
    let rows: Vec<Vec<f64>> = fields
        .levels()
        .levels()
        .par_iter()
        .map(|&t| -> Result<Vec<f64>> {
            let mut spectra = vec![vec![Complex64::new(0.0, 0.0); n]; 6];
            for (i, m) in modes.iter().enumerate() {
                let ik = Complex64::new(0.0, m.k);
                spectra[0][i] = ik * ik * m.v1(t);
                spectra[1][i] = ik * m.v1_dot(t);
                spectra[2][i] = m.v1_ddot(t);
                spectra[3][i] = ik * ik * m.v2(t);
                spectra[4][i] = ik * m.v2_dot(t);
                spectra[5][i] = m.v2_ddot(t);
            }
            let phys: Vec<Vec<f64>> = spectra
                .iter()
                .map(|sp| inverse_transform_real(sp, grid))
                .collect::<Result<_>>()?;
            Ok((0..n)
                .map(|i| {
                    let sq = |v: f64| v * v;
                    (sq(phys[0][i])
                        + 2.0 * sq(phys[1][i])
                        + sq(phys[2][i])
                        + sq(phys[3][i])
                        + 2.0 * sq(phys[4][i])
                        + sq(phys[5][i]))
                    .sqrt()
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(rows.concat())
}

/// Physical rows of `|u|` on the level ladder.
fn velocity_magnitude(fields: &SolutionFields) -> Vec<f64> {
    let n = fields.grid().n();
    let mut out = Vec::with_capacity(n * fields.levels().len());
    for j in 0..fields.levels().len() {
        let u1 = fields.row(FieldComponent::U1, j);
        let u2 = fields.row(FieldComponent::U2, j);
        out.extend((0..n).map(|i| u1[i].hypot(u2[i])));
    }
    out
}

/// Pressure-estimate sweep: for every pair and every `r`, the ratio
/// `‖∇p‖_{L^r} / (‖b‖ + ‖d‖)` with the regime-correct boundary spaces.
pub fn pressure_estimate_sweep(
    params: &OseenParams,
    pairs: &[BoundaryPair],
    r_list: &[f64],
    levels: &HeightLevels,
    variant: RhsVariant,
) -> Result<Vec<EstimateReport>> {
    for &r in r_list {
        if !(r > 1.5) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "pressure exponents must lie in (3/2, p], got {r}"
            )));
        }
    }
    let regime = regime_of(params);
    let reports: Vec<Vec<EstimateReport>> = pairs
        .par_iter()
        .map(|pair| -> Result<Vec<EstimateReport>> {
            let fields = solve_slip(params, &pair.b, &pair.d, levels)?;
            let grad = pressure_gradient_magnitude(&fields)?;
            let grid = fields.grid();
            r_list
                .iter()
                .map(|&r| {
                    let lhs = lp_norm_halfplane(&grad, grid, fields.levels(), r)?;
                    let (mb, md) = pressure_members(regime, r, variant);
                    let rhs = family_norm(pair.b.samples(), grid, &mb)?
                        + family_norm(pair.d.samples(), grid, &md)?;
                    Ok(make_report(
                        params, &pair.name, r, lhs, rhs, variant, grid, levels,
                    ))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(reports.concat())
}

/// Velocity-estimate sweep: for every pair and every `s`, the ratio
/// `‖∇²u‖_{L^s} / max_{r ∈ A_s}(‖b‖ + ‖d‖)` with the regime-correct
/// boundary spaces.
pub fn velocity_estimate_sweep(
    params: &OseenParams,
    pairs: &[BoundaryPair],
    s_list: &[f64],
    levels: &HeightLevels,
    variant: RhsVariant,
) -> Result<Vec<EstimateReport>> {
    for &s in s_list {
        if !(s > 3.0) || !s.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "velocity exponents must lie in (3, p], got {s}"
            )));
        }
    }
    let regime = regime_of(params);
    let reports: Vec<Vec<EstimateReport>> = pairs
        .par_iter()
        .map(|pair| -> Result<Vec<EstimateReport>> {
            let fields = solve_slip(params, &pair.b, &pair.d, levels)?;
            let hess = velocity_hessian_magnitude(&fields)?;
            let grid = fields.grid();
            s_list
                .iter()
                .map(|&s| {
                    let lhs = lp_norm_halfplane(&hess, grid, fields.levels(), s)?;
                    let mut b_members = Vec::new();
                    let mut d_members = Vec::new();
                    for r in a_family(s) {
                        let (mb, md) = velocity_members(regime, r, variant);
                        b_members.extend(mb);
                        d_members.extend(md);
                    }
                    let rhs = family_norm(pair.b.samples(), grid, &b_members)?
                        + family_norm(pair.d.samples(), grid, &d_members)?;
                    Ok(make_report(
                        params, &pair.name, s, lhs, rhs, variant, grid, levels,
                    ))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(reports.concat())
}

/// Demonstrates why the incoming-convection velocity estimate needs full
/// Sobolev norms: shifting `d` by a constant leaves every homogeneous
/// seminorm unchanged but moves the solution by a constant, which the
/// body norm `‖u‖_{L^s} + ‖∇²u‖_{L^s}` sees. Returns the (full,
/// homogeneous-only) reports for the shifted datum; the homogeneous ratio
/// blows up as the shift grows while the full one stays put.
pub fn full_norm_necessity_demo(
    params: &OseenParams,
    pair: &BoundaryPair,
    shift: f64,
    s: f64,
    levels: &HeightLevels,
) -> Result<(EstimateReport, EstimateReport)> {
    if regime_of(params) != Regime::Elliptic {
        return Err(Error::RegimeViolation(
            "the full-norm demonstration runs the incoming-convection estimate (a2 < 0)".into(),
        ));
    }
    let grid = *pair.b.grid();
    let shifted: Vec<f64> = pair.d.samples().iter().map(|&v| v + shift).collect();
    let d_shifted = BoundarySignal::new(grid, shifted)?;
    let fields = solve_slip(params, &pair.b, &d_shifted, levels)?;
    let lhs = lp_norm_halfplane(&velocity_magnitude(&fields), &grid, fields.levels(), s)?
        + lp_norm_halfplane(&velocity_hessian_magnitude(&fields)?, &grid, fields.levels(), s)?;

    let mut rhs = [0.0f64; 2];
    for (slot, variant) in [(0, RhsVariant::Full), (1, RhsVariant::HomogeneousOnly)] {
        let mut b_members = Vec::new();
        let mut d_members = Vec::new();
        for r in a_family(s) {
            let (mb, md) = velocity_members(Regime::Elliptic, r, variant);
            b_members.extend(mb);
            d_members.extend(md);
        }
        rhs[slot] = family_norm(pair.b.samples(), &grid, &b_members)?
            + family_norm(d_shifted.samples(), &grid, &d_members)?;
    }
    let datum = format!("{}+const({shift})", pair.name);
    Ok((
        make_report(params, &datum, s, lhs, rhs[0], RhsVariant::Full, &grid, levels),
        make_report(
            params,
            &datum,
            s,
            lhs,
            rhs[1],
            RhsVariant::HomogeneousOnly,
            &grid,
            levels,
        ),
    ))
}

// ---------------------------------------------------------------------------
// Eigenvalue asymptotics
// ---------------------------------------------------------------------------

/// Fitted decay-rate exponents of `−Re λ₋(k)` for one parameter set.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsRow {
    pub label: String,
    pub regime: String,
    /// Log–log slope fitted on `k ∈ [1e−4, 1e−2]`.
    pub small_k_slope: f64,
    /// The predicted small-`k` law: 2 for `a₂ > 0`, 1/2 for `a₂ = 0`,
    /// 0 (a constant rate) for `a₂ < 0`.
    pub small_k_expected: f64,
    /// Log–log slope fitted on `k ∈ [1e2, 1e4]`.
    pub large_k_slope: f64,
    /// The universal large-`k` law `−Re λ₋ ∼ |k|`.
    pub large_k_expected: f64,
}

/// Least-squares slope of `ln y` against `ln k` over a 200-point log grid.
fn fitted_slope(params: &OseenParams, kmin: f64, kmax: f64) -> Result<f64> {
    let n = 200;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let k = kmin * (kmax / kmin).powf(i as f64 / (n - 1) as f64);
        let rate = -eigenvalues(params, k).lambda3.re;
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::Numerical(format!(
                "decay rate is not positive at k = {k:.3e}; cannot fit a power law"
            )));
        }
        xs.push(k.ln());
        ys.push(rate.ln());
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mx, my) = (mean(&xs), mean(&ys));
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    Ok(num / den)
}

/// Fits the small-`k` and large-`k` power laws of the convective branch
/// for each parameter set.
pub fn asymptotics_report(params_list: &[OseenParams]) -> Result<Vec<AsymptoticsRow>> {
    params_list
        .iter()
        .map(|p| {
            let expected = match regime_of(p) {
                Regime::Parabolic => 2.0,
                Regime::Transitional => 0.5,
                Regime::Elliptic => 0.0,
            };
            Ok(AsymptoticsRow {
                label: format!("a=({},{})", p.a1, p.a2),
                regime: regime_label(p).to_string(),
                small_k_slope: fitted_slope(p, 1e-4, 1e-2)?,
                small_k_expected: expected,
                large_k_slope: fitted_slope(p, 1e2, 1e4)?,
                large_k_expected: 1.0,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Wake profiles
// ---------------------------------------------------------------------------

/// Decay length fitted along one ray.
#[derive(Debug, Clone, Serialize)]
pub struct WakeRay {
    /// Angle measured from the drift direction (plane) or from `+x₁`
    /// (half-plane).
    pub angle_degrees: f64,
    /// `−1/slope` of the least-squares fit of `ln|u|` against distance.
    pub decay_length: f64,
}

/// Wake anisotropy summary.
#[derive(Debug, Clone, Serialize)]
pub struct WakeProfile {
    pub rays: Vec<WakeRay>,
    /// Downstream over upstream decay length.
    pub anisotropy_ratio: f64,
    /// Ratio of the two transverse rays (plane only).
    pub transverse_ratio: Option<f64>,
}

/// Decay length from samples along a ray; insists on strictly positive,
/// genuinely decaying values.
fn ray_decay_length(radii: &[f64], values: &[f64]) -> Result<f64> {
    if values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Numerical(
            "insufficient decay window: field vanishes along the ray".into(),
        ));
    }
    let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mr, ml) = (mean(radii), mean(&logs));
    let mut num = 0.0;
    let mut den = 0.0;
    for (r, l) in radii.iter().zip(&logs) {
        num += (r - mr) * (l - ml);
        den += (r - mr) * (r - mr);
    }
    let slope = num / den;
    if !(slope < 0.0) || !slope.is_finite() {
        return Err(Error::Numerical(
            "insufficient decay window: no decay along the ray".into(),
        ));
    }
    Ok(-1.0 / slope)
}

fn nearest_index(grid: &SpatialGrid1D, x: f64) -> usize {
    let i = ((x + grid.half_width()) / grid.spacing()).round();
    (i.max(0.0) as usize).min(grid.n() - 1)
}

/// Wake profile of a plane field around the origin: decay lengths along
/// the downstream, upstream and two transverse rays (angles 0°, 180°,
/// 90°, 270° from the drift direction), fitted on `r ∈ window` by
/// nearest-node sampling. The default window is `[2, 8]/|a|`.
pub fn wake_profile_plane(
    drift: [f64; 2],
    field: &PlaneField,
    window: Option<(f64, f64)>,
) -> Result<WakeProfile> {
    let speed = (drift[0] * drift[0] + drift[1] * drift[1]).sqrt();
    if !(speed > 0.0) || !speed.is_finite() {
        return Err(Error::InvalidArgument(
            "drift vector must be nonzero and finite".into(),
        ));
    }
    let (r_lo, r_hi) = window.unwrap_or((2.0 / speed, 8.0 / speed));
    if !(r_hi > r_lo && r_lo > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "fit window must satisfy 0 < lo < hi, got ({r_lo}, {r_hi})"
        )));
    }
    let radii: Vec<f64> = (0..WAKE_SAMPLES)
        .map(|i| r_lo + (r_hi - r_lo) * i as f64 / (WAKE_SAMPLES - 1) as f64)
        .collect();
    let e_down = [drift[0] / speed, drift[1] / speed];
    let directions = [
        (0.0, e_down),
        (90.0, [-e_down[1], e_down[0]]),
        (180.0, [-e_down[0], -e_down[1]]),
        (270.0, [e_down[1], -e_down[0]]),
    ];
    let mut rays = Vec::with_capacity(4);
    for (angle, dir) in directions {
        let values: Vec<f64> = radii
            .iter()
            .map(|&r| {
                let i1 = nearest_index(field.grid1(), r * dir[0]);
                let i2 = nearest_index(field.grid2(), r * dir[1]);
                field.value(i1, i2).abs()
            })
            .collect();
        rays.push(WakeRay {
            angle_degrees: angle,
            decay_length: ray_decay_length(&radii, &values)?,
        });
    }
    Ok(WakeProfile {
        anisotropy_ratio: rays[0].decay_length / rays[2].decay_length,
        transverse_ratio: Some(rays[1].decay_length / rays[3].decay_length),
        rays,
    })
}

/// Wake profile of a half-plane solution: decay lengths of `|u|` along
/// `±x₁` at the height level closest to `t = 1`, fitted on
/// `x₁ ∈ ±[2, 8]`.
pub fn wake_profile_halfplane(fields: &SolutionFields) -> Result<WakeProfile> {
    let grid = fields.grid();
    let levels = fields.levels().levels();
    let j = levels
        .iter()
        .enumerate()
        .min_by(|a, b| {
            (a.1 - 1.0)
                .abs()
                .partial_cmp(&(b.1 - 1.0).abs())
                .expect("levels are finite")
        })
        .map(|(j, _)| j)
        .ok_or_else(|| Error::InvalidArgument("solution has no height levels".into()))?;
    let u1 = fields.row(FieldComponent::U1, j);
    let u2 = fields.row(FieldComponent::U2, j);
    let radii: Vec<f64> = (0..WAKE_SAMPLES)
        .map(|i| 2.0 + 6.0 * i as f64 / (WAKE_SAMPLES - 1) as f64)
        .collect();
    let mut rays = Vec::with_capacity(2);
    for (angle, sign) in [(0.0, 1.0), (180.0, -1.0)] {
        let values: Vec<f64> = radii
            .iter()
            .map(|&r| {
                let i = nearest_index(grid, sign * r);
                u1[i].hypot(u2[i])
            })
            .collect();
        rays.push(WakeRay {
            angle_degrees: angle,
            decay_length: ray_decay_length(&radii, &values)?,
        });
    }
    Ok(WakeProfile {
        anisotropy_ratio: rays[0].decay_length / rays[1].decay_length,
        transverse_ratio: None,
        rays,
    })
}

// ---------------------------------------------------------------------------
// Boundary-trace estimate
// ---------------------------------------------------------------------------

/// One forcing's trace-estimate ratio.
#[derive(Debug, Clone, Serialize)]
pub struct TraceCheckReport {
    pub datum: String,
    pub exponent: f64,
    /// `‖u(·,0)‖_{W^{2−1/p}_p(ℝ)}` of the quadrature trace.
    pub lhs_norm: f64,
    /// `‖f‖_{L^p(ℝ²)}`.
    pub rhs_norm: f64,
    pub ratio: f64,
}

/// Checks the boundary-trace estimate
/// `‖u(·,0)‖_{W^{2−1/p}_p} ≤ C ‖f‖_{L^p}` for wall-directed drift on a
/// family of forcings supported above the boundary.
pub fn trace_theorem_check(
    drift: [f64; 2],
    forcings: &[(String, PlaneField)],
    p: f64,
) -> Result<Vec<TraceCheckReport>> {
    if !(drift[1] < 0.0) {
        return Err(Error::RegimeViolation(format!(
            "the trace estimate requires wall-directed drift a2 < 0, got a2 = {}",
            drift[1]
        )));
    }
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "trace exponent must satisfy p > 1, got {p}"
        )));
    }
    forcings
        .iter()
        .map(|(name, f)| {
            let trace = duhamel_trace(drift, f)?;
            let lhs = sobolev_norm(&trace, f.grid1(), 2.0 - 1.0 / p, p)?;
            let rhs = lp_norm_plane(f.values(), f.grid1(), f.grid2(), p)?;
            Ok(TraceCheckReport {
                datum: name.clone(),
                exponent: p,
                lhs_norm: lhs,
                rhs_norm: rhs,
                ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 },
            })
        })
        .collect()
}

/// A small family of forcings supported above the boundary, suitable for
/// the trace check: two band-limited bumps (whose solver comparison is
/// clean) and one plain bump.
pub fn trace_forcing_family(grid: &SpatialGrid1D) -> Result<Vec<(String, PlaneField)>> {
    let make = |name: &str, f: Box<dyn Fn(f64, f64) -> f64>| -> Result<(String, PlaneField)> {
        Ok((name.to_string(), PlaneField::from_fn(*grid, *grid, f)?))
    };
    Ok(vec![
        make(
            "bandpass-low",
            Box::new(|x1, x2| {
                (2.5 * x1).cos()
                    * (-(x1 / 3.0) * (x1 / 3.0) - ((x2 - 2.0) / 0.35) * ((x2 - 2.0) / 0.35)).exp()
            }),
        )?,
        make(
            "bandpass-high",
            Box::new(|x1, x2| {
                (3.5 * x1).cos()
                    * (-(x1 / 3.0) * (x1 / 3.0) - ((x2 - 3.0) / 0.5) * ((x2 - 3.0) / 0.5)).exp()
            }),
        )?,
        make(
            "plain-bump",
            Box::new(|x1, x2| {
                (-(x1 / 2.0) * (x1 / 2.0) - ((x2 - 2.0) / 0.3) * ((x2 - 2.0) / 0.3)).exp()
            }),
        )?,
    ])
}
