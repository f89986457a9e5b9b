//! Whole-plane solvers: the scalar drift–diffusion equation, the full
//! Oseen system with pressure, the boundary-trace quadrature for
//! wall-directed convection, and the convective fundamental solution.
//!
//! All solvers work on a periodic-truncated box `[−L₁,L₁) × [−L₂,L₂)`
//! through the 2D unitary discrete Fourier transform. The zero Fourier
//! mode of every solution is set to zero: the solution of the constant
//! drift–diffusion equation is only defined up to constants, and the zero
//! choice selects the representative that decays at infinity.

use std::fs::File;
use std::io::{BufWriter, Write as _};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grids::{
    forward_transform, forward_transform_complex, inverse_transform, inverse_transform_real,
    SpatialGrid1D,
};
use crate::symbols::{eigenvalues, OseenParams};

/// Absolute bound the forcing must satisfy at heights `x₂ ≤ 0` before the
/// boundary-trace quadrature applies (the representation integrates over
/// `x₂ > 0` only, so mass at or below the boundary is silently dropped —
/// better to refuse it).
pub const TRACE_SUPPORT_TOL: f64 = 1e-12;

/// Relative bound on the mean of the divergence source `g`: a periodic
/// velocity field cannot have net divergence, so a mean beyond this is a
/// compatibility error rather than discretization noise.
pub const DIVERGENCE_MEAN_TOL: f64 = 1e-10;

fn check_drift(drift: [f64; 2]) -> Result<()> {
    let [a1, a2] = drift;
    if !a1.is_finite() || !a2.is_finite() || a1 * a1 + a2 * a2 == 0.0 {
        return Err(Error::InvalidArgument(
            "drift vector must be nonzero and finite".into(),
        ));
    }
    Ok(())
}

/// Eigenvalue parameters for a pure drift problem. The friction
/// coefficient only enters boundary conditions, which the whole plane does
/// not have; any positive placeholder gives the same eigenvalues.
fn drift_params(drift: [f64; 2]) -> OseenParams {
    OseenParams {
        a1: drift[0],
        a2: drift[1],
        f: 1.0,
    }
}

/// Real scalar field sampled on a 2D periodic-truncated box.
///
/// Storage is row-major over the first coordinate: `values[i1 * n2 + i2]`
/// holds the sample at `(grid1.node(i1), grid2.node(i2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneField {
    grid1: SpatialGrid1D,
    grid2: SpatialGrid1D,
    values: Vec<f64>,
}

impl PlaneField {
    /// Wraps samples on the tensor grid. Rejects length mismatches and
    /// non-finite values; logs a warning when the samples do not decay
    /// toward the box edge in either direction (periodic truncation then
    /// aliases).
    pub fn new(grid1: SpatialGrid1D, grid2: SpatialGrid1D, values: Vec<f64>) -> Result<Self> {
        let field = Self::validated(grid1, grid2, values)?;
        let (n1, n2) = (grid1.n(), grid2.n());
        let mut row_sup = vec![0.0f64; n1];
        let mut col_sup = vec![0.0f64; n2];
        for (row, row_slot) in field.values.chunks_exact(n2).zip(&mut row_sup) {
            for (&value, col_slot) in row.iter().zip(&mut col_sup) {
                let v = value.abs();
                *row_slot = row_slot.max(v);
                *col_slot = col_slot.max(v);
            }
        }
        if let Some(ratio) = field.grid1.edge_decay_violation(&row_sup) {
            log::warn!("plane field does not decay at the x1 box edge (edge/sup = {ratio:.2e})");
        }
        if let Some(ratio) = field.grid2.edge_decay_violation(&col_sup) {
            log::warn!("plane field does not decay at the x2 box edge (edge/sup = {ratio:.2e})");
        }
        Ok(field)
    }

    /// Shape and finiteness validation without the edge-decay warning,
    /// for fields that legitimately do not decay and are never fed into a
    /// transform (the fundamental-solution wake, for one).
    fn validated(grid1: SpatialGrid1D, grid2: SpatialGrid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid1.n() * grid2.n() {
            return Err(Error::GridMismatch(format!(
                "field has {} samples but the grid is {} x {}",
                values.len(),
                grid1.n(),
                grid2.n()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(
                "field contains non-finite samples".into(),
            ));
        }
        Ok(Self {
            grid1,
            grid2,
            values,
        })
    }

    /// Samples `f(x1, x2)` on the tensor grid.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(
        grid1: SpatialGrid1D,
        grid2: SpatialGrid1D,
        f: F,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(grid1.n() * grid2.n());
        for i1 in 0..grid1.n() {
            let x1 = grid1.node(i1);
            for i2 in 0..grid2.n() {
                values.push(f(x1, grid2.node(i2)));
            }
        }
        Self::new(grid1, grid2, values)
    }

    /// The all-zero field.
    pub fn zeros(grid1: SpatialGrid1D, grid2: SpatialGrid1D) -> Self {
        let values = vec![0.0; grid1.n() * grid2.n()];
        Self {
            grid1,
            grid2,
            values,
        }
    }

    /// Grid of the first coordinate.
    pub fn grid1(&self) -> &SpatialGrid1D {
        &self.grid1
    }

    /// Grid of the second coordinate.
    pub fn grid2(&self) -> &SpatialGrid1D {
        &self.grid2
    }

    /// Row-major samples, `values[i1 * n2 + i2]`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sample at node `(i1, i2)`.
    pub fn value(&self, i1: usize, i2: usize) -> f64 {
        self.values[i1 * self.grid2.n() + i2]
    }

    /// Largest magnitude over the box.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
    }

    /// Plain average of the samples (proportional to the zero Fourier
    /// mode).
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Samples along `x2 = 0` as a function of `x1`.
    pub fn zero_height_slice(&self) -> Vec<f64> {
        let i2 = self.grid2.n() / 2;
        (0..self.grid1.n()).map(|i1| self.value(i1, i2)).collect()
    }

    /// Spectral partial derivative `∂^order / ∂x_axis^order` (axis 0 or 1).
    pub fn partial_derivative(&self, axis: usize, order: u32) -> Result<PlaneField> {
        if axis > 1 {
            return Err(Error::InvalidArgument(format!(
                "derivative axis must be 0 or 1, got {axis}"
            )));
        }
        let mut coeffs = forward_transform_plane(self)?;
        let (n1, n2) = (self.grid1.n(), self.grid2.n());
        for m1 in 0..n1 {
            for m2 in 0..n2 {
                let k = if axis == 0 {
                    self.grid1.frequency(m1)
                } else {
                    self.grid2.frequency(m2)
                };
                coeffs[m1 * n2 + m2] *= Complex64::new(0.0, k).powu(order);
            }
        }
        let values = inverse_transform_plane_real(&coeffs, &self.grid1, &self.grid2)?;
        Ok(PlaneField {
            grid1: self.grid1,
            grid2: self.grid2,
            values,
        })
    }

    /// Writes the field as CSV with header `x1,x2,value`, row-major over
    /// the first coordinate.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "x1,x2,value")?;
        let n2 = self.grid2.n();
        for i1 in 0..self.grid1.n() {
            let x1 = self.grid1.node(i1);
            for i2 in 0..n2 {
                writeln!(
                    out,
                    "{:.17e},{:.17e},{:.17e}",
                    x1,
                    self.grid2.node(i2),
                    self.values[i1 * n2 + i2]
                )?;
            }
        }
        Ok(())
    }
}

/// Velocity pair and pressure of a whole-plane flow on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneFlow {
    pub u1: PlaneField,
    pub u2: PlaneField,
    pub pressure: PlaneField,
}

/// 2D forward transform: the 1D unitary transform applied along each axis
/// in turn. Coefficients are row-major over the first frequency index,
/// matching the field layout.
pub fn forward_transform_plane(field: &PlaneField) -> Result<Vec<Complex64>> {
    let (n1, n2) = (field.grid1.n(), field.grid2.n());
    let rows: Vec<Vec<Complex64>> = (0..n1)
        .into_par_iter()
        .map(|i1| forward_transform(&field.values[i1 * n2..(i1 + 1) * n2], &field.grid2))
        .collect::<Result<_>>()?;
    let cols: Vec<Vec<Complex64>> = (0..n2)
        .into_par_iter()
        .map(|m2| {
            let col: Vec<Complex64> = (0..n1).map(|i1| rows[i1][m2]).collect();
            forward_transform_complex(&col, &field.grid1)
        })
        .collect::<Result<_>>()?;
    let mut out = vec![Complex64::new(0.0, 0.0); n1 * n2];
    for (m2, col) in cols.iter().enumerate() {
        for (m1, &c) in col.iter().enumerate() {
            out[m1 * n2 + m2] = c;
        }
    }
    Ok(out)
}

/// 2D inverse transform of coefficients representing a real field.
pub fn inverse_transform_plane_real(
    coefficients: &[Complex64],
    grid1: &SpatialGrid1D,
    grid2: &SpatialGrid1D,
) -> Result<Vec<f64>> {
    let (n1, n2) = (grid1.n(), grid2.n());
    if coefficients.len() != n1 * n2 {
        return Err(Error::GridMismatch(format!(
            "coefficient vector has {} entries but the grid is {n1} x {n2}",
            coefficients.len()
        )));
    }
    let cols: Vec<Vec<Complex64>> = (0..n2)
        .into_par_iter()
        .map(|m2| {
            let col: Vec<Complex64> = (0..n1).map(|m1| coefficients[m1 * n2 + m2]).collect();
            inverse_transform(&col, grid1)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = (0..n1)
        .into_par_iter()
        .map(|i1| {
            let row: Vec<Complex64> = (0..n2).map(|m2| cols[m2][i1]).collect();
            inverse_transform_real(&row, grid2)
        })
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; n1 * n2];
    for (i1, row) in rows.iter().enumerate() {
        values[i1 * n2..(i1 + 1) * n2].copy_from_slice(row);
    }
    Ok(values)
}

/// Applies the drift–diffusion symbol `i a·ξ + |ξ|²` to a field — the
/// forward operator `(a·∇ − Δ)` evaluated spectrally.
pub fn apply_scalar_symbol(drift: [f64; 2], field: &PlaneField) -> Result<PlaneField> {
    check_drift(drift)?;
    let mut coeffs = forward_transform_plane(field)?;
    let (n1, n2) = (field.grid1.n(), field.grid2.n());
    for m1 in 0..n1 {
        let k1 = field.grid1.frequency(m1);
        for m2 in 0..n2 {
            let k2 = field.grid2.frequency(m2);
            coeffs[m1 * n2 + m2] *= Complex64::new(
                k1 * k1 + k2 * k2,
                drift[0] * k1 + drift[1] * k2,
            );
        }
    }
    let values = inverse_transform_plane_real(&coeffs, &field.grid1, &field.grid2)?;
    Ok(PlaneField {
        grid1: field.grid1,
        grid2: field.grid2,
        values,
    })
}

/// Solves `(a·∇ − Δ) u = forcing` on the periodic box by dividing each
/// Fourier mode by `i a·ξ + |ξ|²`. The zero mode of the solution is set to
/// zero (solution defined up to constants; this picks the decaying
/// representative). Vector data can be solved componentwise.
pub fn solve_scalar(drift: [f64; 2], forcing: &PlaneField) -> Result<PlaneField> {
    check_drift(drift)?;
    let mut coeffs = forward_transform_plane(forcing)?;
    let (n1, n2) = (forcing.grid1.n(), forcing.grid2.n());
    let (z1, z2) = (
        forcing.grid1.zero_mode_index(),
        forcing.grid2.zero_mode_index(),
    );
    for m1 in 0..n1 {
        let k1 = forcing.grid1.frequency(m1);
        for m2 in 0..n2 {
            let k2 = forcing.grid2.frequency(m2);
            let c = &mut coeffs[m1 * n2 + m2];
            if m1 == z1 && m2 == z2 {
                *c = Complex64::new(0.0, 0.0);
            } else {
                // Re(symbol) = |ξ|² > 0 away from the zero mode, so the
                // division is always well conditioned.
                *c /= Complex64::new(k1 * k1 + k2 * k2, drift[0] * k1 + drift[1] * k2);
            }
        }
    }
    let values = inverse_transform_plane_real(&coeffs, &forcing.grid1, &forcing.grid2)?;
    Ok(PlaneField {
        grid1: forcing.grid1,
        grid2: forcing.grid2,
        values,
    })
}

/// Solves the forced Oseen system on the periodic box:
///
/// ```text
/// (a·∇ − Δ) u + ∇p = f,    div u = g.
/// ```
///
/// Taking the divergence of the momentum equation eliminates the velocity
/// and yields, per mode with `s(ξ) = i a·ξ + |ξ|²`,
///
/// ```text
/// p̂ = (s ĝ − i ξ·f̂) / |ξ|²,    û = (f̂ − i ξ p̂) / s,
/// ```
/// after which `i ξ·û = ĝ` holds identically — no divergence correction
/// is needed. Zero modes of `u` and `p` are set to zero. A net divergence
/// source (`ĝ(0) ≠ 0`) is rejected: it is incompatible with periodicity.
pub fn solve_oseen_full(
    drift: [f64; 2],
    f1: &PlaneField,
    f2: &PlaneField,
    g: &PlaneField,
) -> Result<PlaneFlow> {
    check_drift(drift)?;
    if f1.grid1 != f2.grid1
        || f1.grid2 != f2.grid2
        || f1.grid1 != g.grid1
        || f1.grid2 != g.grid2
    {
        return Err(Error::GridMismatch(
            "forcing components and divergence source must share one grid".into(),
        ));
    }
    let mut f1_hat = forward_transform_plane(f1)?;
    let f2_hat = forward_transform_plane(f2)?;
    let g_hat = forward_transform_plane(g)?;
    let (n1, n2) = (f1.grid1.n(), f1.grid2.n());
    let (z1, z2) = (f1.grid1.zero_mode_index(), f1.grid2.zero_mode_index());

    let g_sup = g_hat.iter().fold(0.0f64, |a, c| a.max(c.norm()));
    let g_mean = g_hat[z1 * n2 + z2].norm();
    if g_mean > DIVERGENCE_MEAN_TOL * g_sup.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "divergence source has nonzero mean ({g_mean:.2e}): \
             incompatible with a periodic velocity field"
        )));
    }

    let mut u2_hat = f2_hat.clone();
    let mut p_hat = g_hat.clone();
    for m1 in 0..n1 {
        let k1 = f1.grid1.frequency(m1);
        for m2 in 0..n2 {
            let idx = m1 * n2 + m2;
            if m1 == z1 && m2 == z2 {
                f1_hat[idx] = Complex64::new(0.0, 0.0);
                u2_hat[idx] = Complex64::new(0.0, 0.0);
                p_hat[idx] = Complex64::new(0.0, 0.0);
                continue;
            }
            let k2 = f1.grid2.frequency(m2);
            let ksq = k1 * k1 + k2 * k2;
            let s = Complex64::new(ksq, drift[0] * k1 + drift[1] * k2);
            let ik1 = Complex64::new(0.0, k1);
            let ik2 = Complex64::new(0.0, k2);
            let p = (s * g_hat[idx] - ik1 * f1_hat[idx] - ik2 * f2_hat[idx]) / ksq;
            u2_hat[idx] = (f2_hat[idx] - ik2 * p) / s;
            f1_hat[idx] = (f1_hat[idx] - ik1 * p) / s; // reused as û₁
            p_hat[idx] = p;
        }
    }

    let make = |coeffs: &[Complex64]| -> Result<PlaneField> {
        let values = inverse_transform_plane_real(coeffs, &f1.grid1, &f1.grid2)?;
        Ok(PlaneField {
            grid1: f1.grid1,
            grid2: f1.grid2,
            values,
        })
    };
    Ok(PlaneFlow {
        u1: make(&f1_hat)?,
        u2: make(&u2_hat)?,
        pressure: make(&p_hat)?,
    })
}

/// Spectral divergence `∂₁u₁ + ∂₂u₂` of a velocity pair.
pub fn divergence(u1: &PlaneField, u2: &PlaneField) -> Result<PlaneField> {
    if u1.grid1 != u2.grid1 || u1.grid2 != u2.grid2 {
        return Err(Error::GridMismatch(
            "velocity components must share one grid".into(),
        ));
    }
    let c1 = forward_transform_plane(u1)?;
    let c2 = forward_transform_plane(u2)?;
    let (n1, n2) = (u1.grid1.n(), u1.grid2.n());
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n1 * n2];
    for m1 in 0..n1 {
        let k1 = u1.grid1.frequency(m1);
        for m2 in 0..n2 {
            let k2 = u1.grid2.frequency(m2);
            let idx = m1 * n2 + m2;
            coeffs[idx] =
                Complex64::new(0.0, k1) * c1[idx] + Complex64::new(0.0, k2) * c2[idx];
        }
    }
    let values = inverse_transform_plane_real(&coeffs, &u1.grid1, &u1.grid2)?;
    Ok(PlaneField {
        grid1: u1.grid1,
        grid2: u1.grid2,
        values,
    })
}

/// Composite Simpson quadrature on uniformly spaced samples with spacing
/// `h`. An even sample count gets Simpson on the first `n−1` nodes plus a
/// trapezoid on the last interval; fewer than 3 samples fall back to the
/// trapezoid rule.
fn simpson_uniform(values: &[Complex64], h: f64) -> Complex64 {
    let m = values.len();
    if m < 2 {
        return Complex64::new(0.0, 0.0);
    }
    if m == 2 {
        return (values[0] + values[1]) * (0.5 * h);
    }
    let simpson_odd = |v: &[Complex64]| {
        let mut acc = v[0] + v[v.len() - 1];
        for (j, &y) in v.iter().enumerate().take(v.len() - 1).skip(1) {
            acc += y * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * (h / 3.0)
    };
    if m % 2 == 1 {
        simpson_odd(values)
    } else {
        simpson_odd(&values[..m - 1]) + (values[m - 2] + values[m - 1]) * (0.5 * h)
    }
}

/// Boundary trace `u(·, 0)` of the drift–diffusion solution for forcing
/// supported strictly above the boundary, computed without solving in the
/// bulk: per tangential frequency `k`,
///
/// ```text
/// û(k, 0) = ∫₀^∞ Δ(k)⁻¹ e^{−λ₊(k) s} f̂(s, k) ds,
/// ```
///
/// integrated by Simpson quadrature over the positive grid heights.
/// Requires wall-directed drift `a₂ < 0` (then `Re Δ ≥ |a₂| > 0` and the
/// kernel decays in `s` uniformly in `k`) and forcing below
/// [`TRACE_SUPPORT_TOL`] at all heights `x₂ ≤ 0`.
pub fn duhamel_trace(drift: [f64; 2], forcing: &PlaneField) -> Result<Vec<f64>> {
    check_drift(drift)?;
    if !(drift[1] < 0.0) {
        return Err(Error::RegimeViolation(format!(
            "the boundary-trace formula requires wall-directed drift a2 < 0, got a2 = {}",
            drift[1]
        )));
    }
    let (n1, n2) = (forcing.grid1.n(), forcing.grid2.n());
    let zero_row = n2 / 2; // grid2.node(n2/2) == 0
    let mut lower_sup = 0.0f64;
    for i1 in 0..n1 {
        for i2 in 0..=zero_row {
            lower_sup = lower_sup.max(forcing.values[i1 * n2 + i2].abs());
        }
    }
    if lower_sup > TRACE_SUPPORT_TOL {
        return Err(Error::InvalidArgument(format!(
            "forcing must be supported in x2 > 0: |f| = {lower_sup:.2e} at x2 <= 0 \
             exceeds {TRACE_SUPPORT_TOL:.0e}"
        )));
    }

    // Tangential transform of every positive-height row.
    let heights: Vec<usize> = (zero_row + 1..n2).collect();
    let rows: Vec<Vec<Complex64>> = heights
        .par_iter()
        .map(|&i2| {
            let line: Vec<f64> = (0..n1).map(|i1| forcing.values[i1 * n2 + i2]).collect();
            forward_transform(&line, &forcing.grid1)
        })
        .collect::<Result<_>>()?;

    let params = drift_params(drift);
    let h = forcing.grid2.spacing();
    let s_nodes: Vec<f64> = heights.iter().map(|&i2| forcing.grid2.node(i2)).collect();
    let trace_hat: Vec<Complex64> = (0..n1)
        .into_par_iter()
        .map(|m1| {
            let k = forcing.grid1.frequency(m1);
            let eig = eigenvalues(&params, k);
            let integrand: Vec<Complex64> = rows
                .iter()
                .zip(&s_nodes)
                .map(|(row, &s)| (-eig.lambda_plus * s).exp() / eig.delta * row[m1])
                .collect();
            simpson_uniform(&integrand, h)
        })
        .collect();
    inverse_transform_real(&trace_hat, &forcing.grid1)
}

/// Decay constant of the boundary-trace kernel at height `s`:
///
/// ```text
/// C_M(s) = sup_ξ ( |Ψ| + |ξ ∂_ξ Ψ| ),    Ψ(ξ) = Δ(ξ)⁻¹ e^{λ₋(ξ) s},
/// ```
///
/// scanned over `±[1e−6, 1e6]`. For wall-directed drift this decays like
/// `e^{a₂ s / 4}`, which is what makes the trace integral converge.
pub fn trace_decay_constant(drift: [f64; 2], s: f64) -> Result<f64> {
    check_drift(drift)?;
    if !(drift[1] < 0.0) {
        return Err(Error::RegimeViolation(format!(
            "the trace decay constant is defined for a2 < 0, got a2 = {}",
            drift[1]
        )));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "trace height must be positive and finite, got {s}"
        )));
    }
    let params = drift_params(drift);
    let psi = move |k: f64| {
        let eig = eigenvalues(&params, k);
        (eig.lambda3 * s).exp() / eig.delta
    };
    let scan =
        crate::analysis::modulus_derivative_sup(&psi, 1e-6, 1e6, 4096, crate::analysis::SupCombine::Sum)?;
    Ok(scan.sup)
}

// Polynomial approximations for K₀ and I₀ (Abramowitz & Stegun 9.8.1,
// 9.8.5, 9.8.6); absolute error below 2e−7 throughout.

fn bessel_i0(x: f64) -> f64 {
    let t2 = (x / 3.75) * (x / 3.75);
    1.0 + t2
        * (3.5156229
            + t2 * (3.0899424 + t2 * (1.2067492 + t2 * (0.2659732 + t2 * (0.0360768 + t2 * 0.0045813)))))
}

fn bessel_k0_small(x: f64) -> f64 {
    let w = x * x / 4.0;
    -(x / 2.0).ln() * bessel_i0(x)
        + (-0.57721566
            + w * (0.42278420
                + w * (0.23069756
                    + w * (0.03488590 + w * (0.00262698 + w * (0.00010750 + w * 0.00000740))))))
}

/// `e^x K₀(x)` for `x ≥ 2` — the exponentially scaled form, finite for
/// arbitrarily large arguments.
fn bessel_k0_large_scaled(x: f64) -> f64 {
    let v = 2.0 / x;
    (1.25331414
        + v * (-0.07832358
            + v * (0.02189568
                + v * (-0.01062446 + v * (0.00587872 + v * (-0.00251540 + v * 0.00053208))))))
        / x.sqrt()
}

/// Modified Bessel function of the second kind, `K₀(x)` for `x > 0`
/// (returns `+∞` at and below zero, matching the logarithmic blow-up).
pub fn bessel_k0(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::INFINITY;
    }
    if x <= 2.0 {
        bessel_k0_small(x)
    } else {
        (-x).exp() * bessel_k0_large_scaled(x)
    }
}

/// Fundamental solution of `(a·∇ − Δ)` at `x`:
///
/// ```text
/// Φ_a(x) = (2π)⁻¹ e^{a·x/2} K₀(|a||x|/2),
/// ```
///
/// evaluated in exponentially combined form so the downstream wake
/// (`a·x ≈ |a||x|`) never overflows. The logarithmic singularity at the
/// origin is replaced by 0: the kernel is only used for far-field
/// comparisons, never integrated across the origin.
pub fn fundamental_solution(drift: [f64; 2], x1: f64, x2: f64) -> f64 {
    let speed = (drift[0] * drift[0] + drift[1] * drift[1]).sqrt();
    let r = x1.hypot(x2);
    if r == 0.0 {
        return 0.0;
    }
    let z = 0.5 * speed * r;
    let along = 0.5 * (drift[0] * x1 + drift[1] * x2);
    let two_pi = 2.0 * std::f64::consts::PI;
    if z <= 2.0 {
        along.exp() * bessel_k0_small(z) / two_pi
    } else {
        // e^{along} K₀(z) = e^{along − z} · (e^z K₀(z)); along − z ≤ 0.
        (along - z).exp() * bessel_k0_large_scaled(z) / two_pi
    }
}

/// Samples the fundamental solution on a tensor grid (origin sample 0).
pub fn fundamental_solution_field(
    drift: [f64; 2],
    grid1: SpatialGrid1D,
    grid2: SpatialGrid1D,
) -> Result<PlaneField> {
    check_drift(drift)?;
    let mut values = Vec::with_capacity(grid1.n() * grid2.n());
    for i1 in 0..grid1.n() {
        let x1 = grid1.node(i1);
        for i2 in 0..grid2.n() {
            values.push(fundamental_solution(drift, x1, grid2.node(i2)));
        }
    }
    // The downstream wake decays only like r^{-1/2}, so this field never
    // satisfies the box-edge decay guideline; skip that warning.
    PlaneField::validated(grid1, grid2, values)
}
