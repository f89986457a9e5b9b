//! Closed-form scalar functions of the tangential frequency `k`:
//! discriminant, decaying eigenvalues, boundary coefficients of the modal
//! representation, and the slip→Dirichlet boundary reduction.
//!
//! After transforming in the tangential variable, each frequency `k` of the
//! half-plane system satisfies an ODE in the wall-normal coordinate `t`
//! whose decaying solutions are `e^{tλ₁}` and `e^{tλ₃}` with
//!
//! ```text
//! λ₁ = −|k|,      λ₃ = (a₂ − Δ)/2,      Δ = √(a₂² + 4(k² + i a₁ k)),
//! ```
//!
//! the square root taken on the principal branch so that `Re Δ ≥ 0` and both
//! eigenvalues have nonpositive real part. `λ₊ = (a₂ + Δ)/2` is the growing
//! counterpart used by the whole-plane boundary-trace formula. The velocity
//! and pressure modes are
//!
//! ```text
//! v₁ = e^{tλ₁}U₀₁ + e^{tλ₃}U₀₃,
//! v₂ = −(ik/λ₁)e^{tλ₁}U₀₁ − (ik/λ₃)e^{tλ₃}U₀₃,
//! π  = −(a₁ + σ(k)·i·a₂)·e^{tλ₁}U₀₁,
//! ```
//!
//! with `(U₀₁, U₀₃)` solved from the slip boundary rows; this module holds
//! those coefficient formulas and the equivalent Dirichlet data.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Convection vector and friction coefficient of the flow problem.
///
/// `a = (a1, a2)` is the convection (the linearization velocity), `f > 0`
/// the friction coefficient in the slip law. The regime of the problem is
/// decided by the sign of `a2` alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OseenParams {
    pub a1: f64,
    pub a2: f64,
    pub f: f64,
}

impl OseenParams {
    /// Validates `f > 0` and `a ≠ 0`.
    pub fn new(a1: f64, a2: f64, f: f64) -> Result<Self> {
        if !(f > 0.0) || !f.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "friction coefficient must be positive, got {f}"
            )));
        }
        if a1 * a1 + a2 * a2 == 0.0 || !a1.is_finite() || !a2.is_finite() {
            return Err(Error::InvalidArgument(
                "convection vector must be nonzero and finite".into(),
            ));
        }
        Ok(Self { a1, a2, f })
    }

    /// Validates additionally that `|a| = v_inf` to 1e-12: the convection
    /// is the far-field speed in the intended application.
    pub fn with_speed(a1: f64, a2: f64, f: f64, v_inf: f64) -> Result<Self> {
        let p = Self::new(a1, a2, f)?;
        let speed = (a1 * a1 + a2 * a2).sqrt();
        if (speed - v_inf).abs() > 1e-12 * speed.max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "|a| = {speed} does not match the declared speed {v_inf}"
            )));
        }
        Ok(p)
    }

    /// Convection magnitude |a|.
    pub fn speed(&self) -> f64 {
        (self.a1 * self.a1 + self.a2 * self.a2).sqrt()
    }
}

/// Flow regime, decided exactly by the sign of the wall-normal convection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `a2 < 0`: convection into the wall; strongest boundary smoothing.
    Elliptic,
    /// `a2 = 0`: convection parallel to the wall.
    Transitional,
    /// `a2 > 0`: convection away from the wall; wake-type behavior.
    Parabolic,
}

/// Classifies parameters by the exact sign of `a2` (no epsilon band: the
/// regime is a modeling choice, not a measurement).
pub fn regime_of(params: &OseenParams) -> Regime {
    if params.a2 < 0.0 {
        Regime::Elliptic
    } else if params.a2 > 0.0 {
        Regime::Parabolic
    } else {
        Regime::Transitional
    }
}

/// Sign function with `σ(0) = 0`, used by the pressure mode and the
/// Dirichlet reduction.
pub fn sigma(k: f64) -> f64 {
    if k > 0.0 {
        1.0
    } else if k < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// The per-mode eigenvalue data.
#[derive(Debug, Clone, Copy)]
pub struct EigenSet {
    /// `λ₁ = −|k|` — the pressure-branch decay rate.
    pub lambda1: Complex64,
    /// `λ₃ = (a₂ − Δ)/2` — the convective-branch decay rate (`Re ≤ 0`).
    pub lambda3: Complex64,
    /// `λ₊ = (a₂ + Δ)/2` — the growing branch (`Re ≥ 0`).
    pub lambda_plus: Complex64,
    /// Discriminant `Δ = √(a₂² + 4(k² + i a₁ k))`, principal branch.
    pub delta: Complex64,
}

/// Principal-branch discriminant `Δ(k) = √(a₂² + 4(k² + i a₁ k))`.
///
/// `Re Δ ≥ 0` always; `Δ` is continuous on each half-line `k > 0`, `k < 0`.
pub fn discriminant(params: &OseenParams, k: f64) -> Complex64 {
    let radicand = Complex64::new(
        params.a2 * params.a2 + 4.0 * k * k,
        4.0 * params.a1 * k,
    );
    radicand.sqrt()
}

/// Eigenvalues of the wall-normal ODE at frequency `k`.
pub fn eigenvalues(params: &OseenParams, k: f64) -> EigenSet {
    let delta = discriminant(params, k);
    EigenSet {
        lambda1: Complex64::new(-k.abs(), 0.0),
        lambda3: (Complex64::new(params.a2, 0.0) - delta) * 0.5,
        lambda_plus: (Complex64::new(params.a2, 0.0) + delta) * 0.5,
        delta,
    }
}

/// Modal boundary coefficients `(U₀₁, U₀₃)` for slip data `(b̂, d̂)` at
/// frequency `k`.
///
/// For `k ≠ 0`:
///
/// ```text
/// U₀₁ = λ₁·(d̂·(λ₃(−f+λ₃)+k²) + ik·b̂) / (ik·(λ₃−λ₁)·(−f+λ₃+λ₁)),
/// U₀₃ = (b̂ − ik·d̂ − (f−λ₁)·U₀₁) / (f−λ₃).
/// ```
///
/// At `k = 0` the formula is singular; the zero mode is defined by the
/// construction that keeps all equations exact: `U₀₁(0) = 0` and
/// `U₀₃(0) = b̂(0)/(f−λ₃(0))` (the `v₂` zero mode is carried separately as
/// the constant `−d̂(0)`, see the half-plane solver). Exact decay at
/// infinity then requires mean-free data, which callers warn about.
pub fn boundary_coefficients(
    params: &OseenParams,
    b_hat: Complex64,
    d_hat: Complex64,
    k: f64,
) -> (Complex64, Complex64) {
    let eig = eigenvalues(params, k);
    let f = Complex64::new(params.f, 0.0);
    if k == 0.0 {
        let u03 = b_hat / (f - eig.lambda3);
        return (Complex64::new(0.0, 0.0), u03);
    }
    let ik = Complex64::new(0.0, k);
    let k2 = Complex64::new(k * k, 0.0);
    let l1 = eig.lambda1;
    let l3 = eig.lambda3;
    let u01 = l1 * (d_hat * (l3 * (-f + l3) + k2) + ik * b_hat)
        / (ik * (l3 - l1) * (-f + l3 + l1));
    let u03 = (b_hat - ik * d_hat - (f - l1) * u01) / (f - l3);
    (u01, u03)
}

/// Dirichlet boundary data `(D̂₁, D̂₂)` equivalent to slip data `(b̂, d̂)`:
/// the boundary values of the slip solution's velocity.
///
/// ```text
/// D̂₁ = (b̂ − d̂·(i·σ(k)·λ₃ + ik)) / (f − λ₁ − λ₃),      D̂₂ = −d̂.
/// ```
///
/// Finite for every `k` including `k = 0` (the denominator has real part
/// `≥ f > 0`).
pub fn dirichlet_reduction(
    params: &OseenParams,
    b_hat: Complex64,
    d_hat: Complex64,
    k: f64,
) -> (Complex64, Complex64) {
    let eig = eigenvalues(params, k);
    let f = Complex64::new(params.f, 0.0);
    let phase = Complex64::new(0.0, sigma(k)) * eig.lambda3 + Complex64::new(0.0, k);
    let d1 = (b_hat - d_hat * phase) / (f - eig.lambda1 - eig.lambda3);
    (d1, -d_hat)
}
