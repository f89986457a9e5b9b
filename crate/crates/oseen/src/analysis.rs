//! Symbol analysis: sup-bounds for Fourier multipliers, kernel identity
//! checks, and the boundary-to-interior quadrature inequality.
//!
//! The one-dimensional estimator measures `sup max(|Φ|, |k·Φ′|)` over both
//! half-lines — the quantity controlling `L^p` boundedness of a multiplier
//! of one variable — on a logarithmic grid with fresh-evaluation central
//! differences and one Richardson extrapolation step (in log coordinates
//! `k·Φ′ = dΦ/d(ln k)`, so the scheme needs no uneven-grid weights). A
//! two-dimensional variant bounds the mixed condition
//! `sup |ξ₁|^{κ₁+β}|ξ₂|^{κ₂+β}|∂^κ Φ|` over the four quadrants.
//!
//! The catalogue in [`catalogue`] collects the trace symbols of the
//! half-plane solver together with the decay envelopes of its slow branch
//! `λ₋ = (a₂ − Δ)/2`, each at parameter points where the bound is finite;
//! the wall-normal height `t` enters as a family parameter and the bounds
//! are taken uniformly over a height list.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grids::{forward_transform, inverse_transform_real, HeightLevels, SpatialGrid1D};
use crate::norms::{lp_norm_halfplane, slobodeckii_seminorm};
use crate::symbols::{eigenvalues, sigma, OseenParams};

/// `C^∞` step: 0 for `u ≤ 0`, 1 for `u ≥ 1`, smooth in between.
pub fn smoothstep(u: f64) -> f64 {
    fn bump(v: f64) -> f64 {
        if v > 0.0 {
            (-1.0 / v).exp()
        } else {
            0.0
        }
    }
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = bump(u);
        a / (a + bump(1.0 - u))
    }
}

/// Smooth low-pass cutoff: 1 for `|k| ≤ 1`, 0 for `|k| ≥ 2`.
pub fn unit_lowpass(k: f64) -> f64 {
    smoothstep(2.0 - k.abs())
}

/// Smooth low-pass cutoff with transition on `[cut, cut + 1]`.
pub fn scaled_lowpass(k: f64, cut: f64) -> f64 {
    smoothstep(cut + 1.0 - k.abs())
}

/// How modulus and scaled derivative combine in a sup scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupCombine {
    /// `max(|Φ|, |kΦ′|)` — the multiplier condition.
    Max,
    /// `|Φ| + |kΦ′|` — the summed form used for decay constants.
    Sum,
}

/// Result of a sup scan over a log grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SupScan {
    pub sup: f64,
    /// Frequency where the sup was attained.
    pub worst_k: f64,
}

/// Scans `sup` of the combined modulus/derivative measure of `phi` over
/// both half-lines `±[kmin, kmax]`, `n` log-spaced points each.
///
/// Non-finite multiplier values are reported as a numerical error naming
/// the offending frequency.
pub fn modulus_derivative_sup(
    phi: &dyn Fn(f64) -> Complex64,
    kmin: f64,
    kmax: f64,
    n: usize,
    combine: SupCombine,
) -> Result<SupScan> {
    if !(kmin > 0.0 && kmax > kmin && n >= 8) {
        return Err(Error::InvalidArgument(
            "sup scan needs 0 < kmin < kmax and at least 8 points".into(),
        ));
    }
    let du = (kmax / kmin).ln() / (n - 1) as f64;
    let mut best = SupScan {
        sup: 0.0,
        worst_k: kmin,
    };
    for sign in [1.0f64, -1.0] {
        for i in 0..n {
            let k = sign * kmin * ((i as f64) * du).exp();
            let f0 = phi(k);
            // k·Φ′ = dΦ/du at u = ln|k|: central differences at two step
            // sizes, Richardson-combined.
            let shift = |s: f64| phi(k * s.exp());
            let d1 = (shift(du) - shift(-du)) / (2.0 * du);
            let d2 = (shift(0.5 * du) - shift(-0.5 * du)) / du;
            let deriv = (d2 * 4.0 - d1) / 3.0;
            let measure = match combine {
                SupCombine::Max => f0.norm().max(deriv.norm()),
                SupCombine::Sum => f0.norm() + deriv.norm(),
            };
            if !measure.is_finite() {
                return Err(Error::Numerical(format!(
                    "multiplier is not finite near k = {k:.6e}"
                )));
            }
            if measure > best.sup {
                best = SupScan {
                    sup: measure,
                    worst_k: k,
                };
            }
        }
    }
    Ok(best)
}

const SCAN_KMIN: f64 = 1e-4;
const SCAN_KMAX: f64 = 1e4;
const SCAN_POINTS: usize = 2048;

/// Describes the frequency scan behind [`MultiplierFamily::bound`], for
/// report metadata.
pub fn scan_description() -> String {
    format!(
        "log grid |k| in [{SCAN_KMIN:.0e}, {SCAN_KMAX:.0e}], {SCAN_POINTS} -> {} points",
        2 * SCAN_POINTS
    )
}

/// Uniform-in-`t` multiplier bound with a grid-refinement consistency
/// measure.
#[derive(Debug, Clone, Serialize)]
pub struct MultiplierBound {
    /// The bound on the refined grid.
    pub sup: f64,
    pub worst_k: f64,
    /// Height at which the sup over the family was attained.
    pub worst_t: f64,
    /// `|M_coarse − M_fine| / M_fine`.
    pub refinement_shift: f64,
}

/// A named one-parameter family of multipliers `Φ(k; t)`.
pub struct MultiplierFamily {
    pub name: String,
    /// Parameter point of the underlying operator, when one applies.
    pub params: Option<OseenParams>,
    /// Heights over which the bound is taken uniformly.
    pub t_list: Vec<f64>,
    eval: Box<dyn Fn(f64, f64) -> Complex64 + Send + Sync>,
}

impl MultiplierFamily {
    pub fn new(
        name: impl Into<String>,
        params: Option<OseenParams>,
        t_list: Vec<f64>,
        eval: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            params,
            t_list,
            eval: Box::new(eval),
        }
    }

    /// Evaluates `Φ(k; t)`.
    pub fn evaluate(&self, k: f64, t: f64) -> Complex64 {
        (self.eval)(k, t)
    }

    /// The multiplier bound, uniform over the family's heights, with a
    /// 2× grid-refinement shift.
    pub fn bound(&self) -> Result<MultiplierBound> {
        let at_resolution = |n: usize| -> Result<(f64, f64, f64)> {
            let mut sup = 0.0;
            let mut worst = (SCAN_KMIN, self.t_list.first().copied().unwrap_or(0.0));
            for &t in &self.t_list {
                let phi = |k: f64| (self.eval)(k, t);
                let scan =
                    modulus_derivative_sup(&phi, SCAN_KMIN, SCAN_KMAX, n, SupCombine::Max)?;
                if scan.sup > sup {
                    sup = scan.sup;
                    worst = (scan.worst_k, t);
                }
            }
            Ok((sup, worst.0, worst.1))
        };
        let (coarse, _, _) = at_resolution(SCAN_POINTS)?;
        let (fine, worst_k, worst_t) = at_resolution(2 * SCAN_POINTS)?;
        Ok(MultiplierBound {
            sup: fine,
            worst_k,
            worst_t,
            refinement_shift: (coarse - fine).abs() / fine.max(f64::MIN_POSITIVE),
        })
    }
}

/// The common factor `(a₂ + 2|k| + Δ)·σ(k)·(λ₃(λ₃ − f) + k²) / (λ₃ + λ₁ − f)`
/// of the normal-data trace symbols.
fn normal_data_core(params: &OseenParams, k: f64) -> Complex64 {
    let eig = eigenvalues(params, k);
    let front = Complex64::new(params.a2 + 2.0 * k.abs(), 0.0) + eig.delta;
    let num = (eig.lambda3 * (eig.lambda3 - params.f) + k * k) * sigma(k);
    let den = eig.lambda3 + eig.lambda1 - params.f;
    front * num / den
}

/// Trace symbol attached to the slip data `b̂`:
/// `(a₂ + 2|k| + Δ)·λ₁ / (ik·(λ₃ + λ₁ − f))`. Bounded with limit 2 at
/// high frequency.
pub fn slip_data_symbol(params: OseenParams) -> MultiplierFamily {
    MultiplierFamily::new(
        "slip_data_symbol",
        Some(params),
        vec![0.0],
        move |k, _t| {
            if k == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let eig = eigenvalues(&params, k);
            let front = Complex64::new(params.a2 + 2.0 * k.abs(), 0.0) + eig.delta;
            front * eig.lambda1
                / (Complex64::new(0.0, k) * (eig.lambda3 + eig.lambda1 - params.f))
        },
    )
}

/// Low-frequency trace symbol attached to the normal data `d̂`, cut off
/// above `|k| = 2`. The denominator pairing depends on the regime: `−k²`
/// for `a₂ > 0` (where boundedness additionally requires `a₁ = 0`), `−ik`
/// otherwise.
pub fn normal_data_lowband(params: OseenParams) -> MultiplierFamily {
    let regime = if params.a2 > 0.0 {
        "parabolic"
    } else if params.a2 == 0.0 {
        "transitional"
    } else {
        "elliptic"
    };
    MultiplierFamily::new(
        format!("normal_data_lowband_{regime}"),
        Some(params),
        vec![0.0],
        move |k, _t| {
            let cut = unit_lowpass(k);
            if cut == 0.0 || k == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let core = normal_data_core(&params, k);
            let pair = if params.a2 > 0.0 {
                Complex64::new(-k * k, 0.0)
            } else {
                Complex64::new(0.0, -k)
            };
            cut * core / pair
        },
    )
}

/// High-frequency trace symbol attached to the normal data `d̂`
/// (complementary cutoff, `−k²` pairing in every regime).
pub fn normal_data_highband(params: OseenParams) -> MultiplierFamily {
    let regime = if params.a2 > 0.0 {
        "parabolic"
    } else if params.a2 == 0.0 {
        "transitional"
    } else {
        "elliptic"
    };
    MultiplierFamily::new(
        format!("normal_data_highband_{regime}"),
        Some(params),
        vec![0.0],
        move |k, _t| {
            let cut = 1.0 - unit_lowpass(k);
            if cut == 0.0 || k == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            cut * normal_data_core(&params, k) / Complex64::new(-k * k, 0.0)
        },
    )
}

/// Largest `c` with `Re λ₋(k) + c|k| ≤ 0` on the scan grid, capped at 1.
pub fn decay_rate_floor(params: &OseenParams) -> f64 {
    let n = 4096;
    let du = (SCAN_KMAX / SCAN_KMIN).ln() / (n - 1) as f64;
    let mut c = f64::INFINITY;
    for i in 0..n {
        let k = SCAN_KMIN * ((i as f64) * du).exp();
        let eig = eigenvalues(params, k);
        c = c.min(-eig.lambda3.re / k);
    }
    c.min(1.0)
}

/// Quadratic decay envelope of the slow branch for `a₂ > 0`: the largest
/// `L̃` with `Re λ₋ + L̃k² ≤ 0` on `(0, ℓ+1]`, where `ℓ` is the smallest
/// frequency beyond which `−Re λ₋ ≥ |k|/2`. Returns `(L̃, ℓ)`.
pub fn parabolic_envelope(params: &OseenParams) -> (f64, f64) {
    let n = 8192;
    let grid = |lo: f64, hi: f64, i: usize| -> f64 {
        lo * ((hi / lo).ln() * (i as f64) / (n - 1) as f64).exp()
    };
    let mut cut = SCAN_KMIN;
    // Largest grid point where the linear-decay ratio still fails 1/2; the
    // envelope support starts one point above it.
    for i in (0..n).rev() {
        let k = grid(SCAN_KMIN, SCAN_KMAX, i);
        let eig = eigenvalues(params, k);
        if -eig.lambda3.re / k < 0.5 {
            cut = grid(SCAN_KMIN, SCAN_KMAX, (i + 1).min(n - 1));
            break;
        }
    }
    let mut l_tilde = f64::INFINITY;
    for i in 0..n {
        let k = grid(SCAN_KMIN, cut + 1.0, i);
        let eig = eigenvalues(params, k);
        l_tilde = l_tilde.min(-eig.lambda3.re / (k * k));
    }
    (l_tilde, cut)
}

/// Decay family of the slow branch.
///
/// For `a₂ ≤ 0` this is `e^{t(λ₋ + c|k|)}` with `c` from
/// [`decay_rate_floor`]; for `a₂ > 0` the branch only decays
/// quadratically at low frequency, so the family is
/// `π_ℓ(k)·e^{t(λ₋ + L̃k²)}` with the envelope of [`parabolic_envelope`]
/// and the cutoff `π_ℓ` of [`scaled_lowpass`]. Outside the cutoff support
/// the value is exactly zero — the exponent must not be evaluated there,
/// since it overflows where the cutoff vanishes.
pub fn branch_decay(params: OseenParams, t_list: Vec<f64>) -> MultiplierFamily {
    if params.a2 > 0.0 {
        let (l_tilde, cut) = parabolic_envelope(&params);
        MultiplierFamily::new(
            "branch_decay_parabolic",
            Some(params),
            t_list,
            move |k, t| {
                let w = scaled_lowpass(k, cut);
                if w == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let eig = eigenvalues(&params, k);
                w * (Complex64::new(l_tilde * k * k, 0.0) + eig.lambda3).scale(t).exp()
            },
        )
    } else {
        let c = decay_rate_floor(&params);
        let regime = if params.a2 == 0.0 {
            "transitional"
        } else {
            "elliptic"
        };
        MultiplierFamily::new(
            format!("branch_decay_{regime}"),
            Some(params),
            t_list,
            move |k, t| {
                let eig = eigenvalues(&params, k);
                (Complex64::new(c * k.abs(), 0.0) + eig.lambda3).scale(t).exp()
            },
        )
    }
}

/// The standard height list for uniform-in-`t` bounds.
pub fn default_heights() -> Vec<f64> {
    vec![0.0, 0.1, 1.0, 10.0]
}

/// The full multiplier catalogue at its canonical parameter points. Every
/// entry has a finite bound; in particular the parabolic low-band entry
/// sits at `a₁ = 0`, the only axis direction where it is bounded.
pub fn catalogue() -> Vec<MultiplierFamily> {
    let ts = default_heights();
    let p = |a1: f64, a2: f64| OseenParams::new(a1, a2, 1.0).expect("valid catalogue params");
    vec![
        slip_data_symbol(p(1.0, 0.0)),
        normal_data_lowband(p(0.0, 1.0)),
        normal_data_lowband(p(1.0, 0.0)),
        normal_data_lowband(p(1.0, -1.0)),
        normal_data_highband(p(1.0, 1.0)),
        normal_data_highband(p(1.0, 0.0)),
        normal_data_highband(p(1.0, -1.0)),
        branch_decay(p(1.0, 0.0), ts.clone()),
        branch_decay(p(1.0, -1.0), ts.clone()),
        branch_decay(p(1.0, 1.0), ts.clone()),
        MultiplierFamily::new("unit_lowpass", None, vec![0.0], |k, _| {
            Complex64::new(unit_lowpass(k), 0.0)
        }),
        MultiplierFamily::new("wide_lowpass", None, vec![0.0], |k, _| {
            Complex64::new(scaled_lowpass(k, 2.0), 0.0)
        }),
    ]
}

/// Two-dimensional multiplier bound:
/// `max over κ ∈ {0,1}² of sup |ξ₁|^{κ₁+β}|ξ₂|^{κ₂+β}|∂^κΦ|`,
/// scanned over all four quadrants on a log grid. In log coordinates the
/// weighted derivatives become `|ξ₁|^β|ξ₂|^β·∂_u^{κ₁}∂_v^{κ₂}Φ`, again via
/// fresh-evaluation Richardson differences.
pub fn lizorkin_bound(
    phi: &dyn Fn(f64, f64) -> Complex64,
    beta: f64,
    n_per_axis: usize,
) -> Result<f64> {
    if n_per_axis < 8 {
        return Err(Error::InvalidArgument(
            "two-dimensional scan needs at least 8 points per axis".into(),
        ));
    }
    let (lo, hi) = (SCAN_KMIN, SCAN_KMAX);
    let du = (hi / lo).ln() / (n_per_axis - 1) as f64;
    let coord = |i: usize| lo * ((i as f64) * du).exp();
    let mut best = 0.0f64;
    for s1 in [1.0f64, -1.0] {
        for s2 in [1.0f64, -1.0] {
            for i in 0..n_per_axis {
                let x1 = s1 * coord(i);
                for j in 0..n_per_axis {
                    let x2 = s2 * coord(j);
                    let at = |a: f64, b: f64| phi(x1 * a.exp(), x2 * b.exp());
                    let weight = x1.abs().powf(beta) * x2.abs().powf(beta);
                    let d_u = |d: f64| (at(d, 0.0) - at(-d, 0.0)) / (2.0 * d);
                    let d_v = |d: f64| (at(0.0, d) - at(0.0, -d)) / (2.0 * d);
                    let d_uv = |d: f64| {
                        (at(d, d) - at(d, -d) - at(-d, d) + at(-d, -d)) / (4.0 * d * d)
                    };
                    let richardson =
                        |f: &dyn Fn(f64) -> Complex64| (f(0.5 * du) * 4.0 - f(du)) / 3.0;
                    let candidates = [
                        at(0.0, 0.0).norm(),
                        richardson(&d_u).norm(),
                        richardson(&d_v).norm(),
                        richardson(&d_uv).norm(),
                    ];
                    for c in candidates {
                        let v = weight * c;
                        if !v.is_finite() {
                            return Err(Error::Numerical(format!(
                                "symbol is not finite near ξ = ({x1:.4e}, {x2:.4e})"
                            )));
                        }
                        best = best.max(v);
                    }
                }
            }
        }
    }
    Ok(best)
}

/// The four convolution kernels whose symbol ↔ physical-profile pairs are
/// checked against closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelKind {
    /// `e^{−|k|t}` ↔ `√(2/π)·t/(t² + x²)`.
    PoissonDecay,
    /// `ik·e^{−|k|t}` ↔ `−√(2/π)·2xt/(t² + x²)²`.
    PoissonDerivative,
    /// `e^{−tk²}` ↔ `e^{−x²/4t}/√(2t)`.
    HeatDecay,
    /// `ik·e^{−tk²}` ↔ `−x·e^{−x²/4t}/(2√2·t^{3/2})`.
    HeatDerivative,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [
        KernelKind::PoissonDecay,
        KernelKind::PoissonDerivative,
        KernelKind::HeatDecay,
        KernelKind::HeatDerivative,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            KernelKind::PoissonDecay => "poisson_decay",
            KernelKind::PoissonDerivative => "poisson_derivative",
            KernelKind::HeatDecay => "heat_decay",
            KernelKind::HeatDerivative => "heat_derivative",
        }
    }

    /// Symbol value at frequency `k`, height `t`.
    pub fn symbol(&self, k: f64, t: f64) -> Complex64 {
        match self {
            KernelKind::PoissonDecay => Complex64::new((-k.abs() * t).exp(), 0.0),
            KernelKind::PoissonDerivative => Complex64::new(0.0, k) * (-k.abs() * t).exp(),
            KernelKind::HeatDecay => Complex64::new((-t * k * k).exp(), 0.0),
            KernelKind::HeatDerivative => Complex64::new(0.0, k) * (-t * k * k).exp(),
        }
    }

    /// The `2L`-periodization of the physical kernel. The Poisson pair
    /// periodizes in closed form,
    /// `Σⱼ t/(t²+(x+2Lj)²) = (π/2L)·sinh(πt/L)/(cosh(πt/L) − cos(πx/L))`,
    /// and its `x`-derivative; the heat pair uses mirror images, which
    /// decay like `e^{−L²/t}` and are negligible beyond `|j| = 3` at the
    /// scales checked here.
    pub fn periodized(&self, x: f64, t: f64, half_width: f64) -> f64 {
        let l = half_width;
        let c = (2.0 / std::f64::consts::PI).sqrt();
        let pi = std::f64::consts::PI;
        match self {
            KernelKind::PoissonDecay => {
                let (a, b) = (pi * t / l, pi * x / l);
                c * (pi / (2.0 * l)) * a.sinh() / (a.cosh() - b.cos())
            }
            KernelKind::PoissonDerivative => {
                let (a, b) = (pi * t / l, pi * x / l);
                -c * (pi * pi / (2.0 * l * l)) * a.sinh() * b.sin()
                    / (a.cosh() - b.cos()).powi(2)
            }
            KernelKind::HeatDecay => {
                let mut acc = 0.0;
                for j in -3i32..=3 {
                    let y = x + 2.0 * l * j as f64;
                    acc += (-y * y / (4.0 * t)).exp() / (2.0 * t).sqrt();
                }
                acc
            }
            KernelKind::HeatDerivative => {
                let mut acc = 0.0;
                for j in -3i32..=3 {
                    let y = x + 2.0 * l * j as f64;
                    acc += -y * (-y * y / (4.0 * t)).exp()
                        / (2.0 * 2.0f64.sqrt() * t.powf(1.5));
                }
                acc
            }
        }
    }

    /// Closed-form bound on `(1/√(2π))∫_{|k|>K}|symbol| dk` — the spectral
    /// mass the discrete transform cannot see.
    fn spectral_tail(&self, cutoff: f64, t: f64) -> f64 {
        let raw = match self {
            KernelKind::PoissonDecay => 2.0 * (-cutoff * t).exp() / t,
            KernelKind::PoissonDerivative => {
                2.0 * (-cutoff * t).exp() * (cutoff / t + 1.0 / (t * t))
            }
            KernelKind::HeatDecay => (-t * cutoff * cutoff).exp() / (t * cutoff),
            KernelKind::HeatDerivative => (-t * cutoff * cutoff).exp() / t,
        };
        raw / (2.0 * std::f64::consts::PI).sqrt()
    }
}

/// Outcome of a kernel identity check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelCheck {
    /// Sup distance between the transform route and the periodized closed
    /// form.
    pub sup_error: f64,
    /// Resolution after automatic doubling.
    pub n_used: usize,
}

const KERNEL_TAIL_TOL: f64 = 1e-9;
const KERNEL_N_MAX: usize = 1 << 16;

fn check_height(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "kernel height must be positive and finite, got {t}"
        )));
    }
    Ok(())
}

/// Compares the discrete inverse transform of the sampled symbol against
/// the periodized closed-form kernel, doubling the resolution until the
/// unseen spectral tail is below 1e−9.
pub fn kernel_identity_check(
    kind: KernelKind,
    t: f64,
    half_width: f64,
    n_start: usize,
) -> Result<KernelCheck> {
    check_height(t)?;
    let mut n = n_start;
    loop {
        let grid = SpatialGrid1D::new(half_width, n)?;
        let cutoff = grid.frequency_spacing() * (n / 2) as f64;
        if kind.spectral_tail(cutoff, t) <= KERNEL_TAIL_TOL {
            let coeffs: Vec<Complex64> =
                (0..n).map(|i| kind.symbol(grid.frequency(i), t)).collect();
            let transform = inverse_transform_real(&coeffs, &grid)?;
            let mut sup = 0.0f64;
            for (i, v) in transform.iter().enumerate() {
                sup = sup.max((v - kind.periodized(grid.node(i), t, half_width)).abs());
            }
            return Ok(KernelCheck {
                sup_error: sup,
                n_used: n,
            });
        }
        if n >= KERNEL_N_MAX {
            return Err(Error::Numerical(format!(
                "kernel {} at t = {t} still has spectral tail above {KERNEL_TAIL_TOL:.0e} \
                 at n = {n}",
                kind.name()
            )));
        }
        n *= 2;
    }
}

/// Applies a kernel to boundary samples by direct physical-space circular
/// convolution: `(h/√(2π))·Σ_l K(xⱼ − x_l)·f_l`.
///
/// The kernel profile is the unitary inverse transform of the symbol, so
/// plain convolution against it would pick up the convolution-theorem
/// factor `√(2π)`; dividing it out makes this route compute exactly the
/// spectral multiplication by the symbol, through entirely different
/// arithmetic.
pub fn kernel_convolve(
    kind: KernelKind,
    samples: &[f64],
    grid: &SpatialGrid1D,
    t: f64,
) -> Result<Vec<f64>> {
    check_height(t)?;
    let n = grid.n();
    if samples.len() != n {
        return Err(Error::GridMismatch(format!(
            "convolution input has {} samples on an n = {n} grid",
            samples.len()
        )));
    }
    // Kernel at node displacements: K((j−l)h) = K_nodes[(j−l+n/2) mod n].
    let kernel_nodes: Vec<f64> = (0..n)
        .map(|i| kind.periodized(grid.node(i), t, grid.half_width()))
        .collect();
    let scale = grid.spacing() / (2.0 * std::f64::consts::PI).sqrt();
    let mut out = vec![0.0; n];
    for j in 0..n {
        let mut acc = 0.0;
        for (l, f) in samples.iter().enumerate() {
            acc += kernel_nodes[(j + n + n / 2 - l) % n] * f;
        }
        out[j] = scale * acc;
    }
    Ok(out)
}

/// Applies a kernel spectrally: transform, multiply by the symbol,
/// transform back.
pub fn kernel_apply_spectral(
    kind: KernelKind,
    samples: &[f64],
    grid: &SpatialGrid1D,
    t: f64,
) -> Result<Vec<f64>> {
    check_height(t)?;
    let mut hat = forward_transform(samples, grid)?;
    for (i, c) in hat.iter_mut().enumerate() {
        *c *= kind.symbol(grid.frequency(i), t);
    }
    inverse_transform_real(&hat, grid)
}

/// Outcome of the boundary-to-interior quadrature inequality check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureCheck {
    /// `‖field‖_{L^p}` over the half-plane.
    pub lhs: f64,
    /// `π^{1/q}·p^{−1/p}·[b]_{1−1/p, p}` with `1/q = 1 − 1/p`.
    pub rhs: f64,
    /// `lhs / rhs`; at most 1 in the continuum (exactly `2^{−1/2}` for
    /// `p = 2`).
    pub ratio: f64,
}

/// Checks `‖J b‖_{L^p(ℝ×ℝ₊)} ≤ π^{1/q} p^{−1/p} [b]_{1−1/p,p}` for the
/// field with spectral profile `−π·ik·e^{−|k|t}·b̂(k)`.
pub fn boundary_quadrature_check(
    b: &[f64],
    grid: &SpatialGrid1D,
    levels: &HeightLevels,
    p: f64,
) -> Result<QuadratureCheck> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "the quadrature inequality needs 1 < p < ∞, got {p}"
        )));
    }
    let b_hat = forward_transform(b, grid)?;
    let n = grid.n();
    let mut field = vec![0.0; n * levels.len()];
    for (j, &t) in levels.levels().iter().enumerate() {
        let coeffs: Vec<Complex64> = (0..n)
            .map(|i| {
                let k = grid.frequency(i);
                Complex64::new(0.0, -std::f64::consts::PI * k) * (-k.abs() * t).exp() * b_hat[i]
            })
            .collect();
        let row = inverse_transform_real(&coeffs, grid)?;
        field[j * n..(j + 1) * n].copy_from_slice(&row);
    }
    let lhs = lp_norm_halfplane(&field, grid, levels, p)?;
    let q_inv = 1.0 - 1.0 / p;
    let rhs = std::f64::consts::PI.powf(q_inv)
        * p.powf(-1.0 / p)
        * slobodeckii_seminorm(b, grid, 1.0 - 1.0 / p, p)?;
    Ok(QuadratureCheck {
        lhs,
        rhs,
        ratio: lhs / rhs,
    })
}
