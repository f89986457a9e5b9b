//! Half-plane Oseen solvers with slip or Dirichlet boundary data.
//!
//! Each tangential frequency `k` of the homogeneous system decouples into a
//! wall-normal ODE whose decaying solutions are `e^{tλ₁}` and `e^{tλ₃}`
//! (see [`crate::symbols`]). The solvers assemble the modal profiles
//!
//! ```text
//! v₁ = e^{tλ₁}U₀₁ + e^{tλ₃}U₀₃,
//! v₂ = −(ik/λ₁)e^{tλ₁}U₀₁ − (ik/λ₃)e^{tλ₃}U₀₃,
//! π  = −(a₁ + σ(k)·i·a₂)·e^{tλ₁}U₀₁,
//! ```
//!
//! and return physical fields on a [`SpatialGrid1D`] × [`HeightLevels`]
//! product grid. Because every mode is an explicit exponential, wall-normal
//! derivatives are available analytically; residual evaluation uses them
//! when the solution carries its spectral data and falls back to
//! finite differences for externally supplied fields.
//!
//! Boundary conventions: the fluid fills `x₂ > 0` with outward normal
//! `(0,−1)`, so the data enter as tangential stress-plus-friction
//! `−(∂₂u₁ + ∂₁u₂) + f·u₁ = b` and normal velocity `u₂(x₁,0) = −d`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::grids::{
    fd_weights, forward_transform, inverse_transform_real, HeightLevels, SpatialGrid1D,
};
use crate::symbols::{
    boundary_coefficients, dirichlet_reduction, eigenvalues, sigma, OseenParams, Regime,
};

/// Magic bytes opening the binary field-dump header.
pub const FIELD_DUMP_MAGIC: &[u8; 8] = b"OSEENFLD";

/// Real boundary data sampled on a spatial grid.
#[derive(Debug, Clone)]
pub struct BoundarySignal {
    grid: SpatialGrid1D,
    samples: Vec<f64>,
}

impl BoundarySignal {
    /// Wraps samples, rejecting non-finite values and length mismatches.
    /// Logs a warning when the signal does not decay at the box edge.
    pub fn new(grid: SpatialGrid1D, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "boundary signal has {} samples but the grid has {} points",
                samples.len(),
                grid.n()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "boundary signal contains NaN or infinite samples".into(),
            ));
        }
        if let Some(r) = grid.edge_decay_violation(&samples) {
            log::warn!(
                "boundary signal does not decay at the box edge (relative sup {r:.2e}); \
                 periodic truncation will alias"
            );
        }
        Ok(Self { grid, samples })
    }

    /// Samples a closure on the grid.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: SpatialGrid1D, f: F) -> Result<Self> {
        Self::new(grid, grid.sample(f))
    }

    /// The underlying grid.
    pub fn grid(&self) -> &SpatialGrid1D {
        &self.grid
    }

    /// The sample values.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

/// One frequency's solution data: eigenvalues, branch amplitudes, and the
/// pressure factor. All wall-normal derivatives of the profiles are
/// analytic in `t`.
#[derive(Debug, Clone, Copy)]
pub struct ModalSolution {
    pub k: f64,
    pub lambda1: Complex64,
    pub lambda3: Complex64,
    /// Amplitude of the `e^{tλ₁}` branch.
    pub u01: Complex64,
    /// Amplitude of the `e^{tλ₃}` branch.
    pub u03: Complex64,
    /// `π(t) = pressure_factor · e^{tλ₁} · U₀₁`.
    pub pressure_factor: Complex64,
    /// The `k = 0` mode of `v₂` is a constant carried separately (the
    /// formula `−ik/λ` degenerates there); zero for all other modes.
    pub v2_constant: Complex64,
}

impl ModalSolution {
    /// Tangential velocity profile `v₁(t)`.
    pub fn v1(&self, t: f64) -> Complex64 {
        (self.lambda1 * t).exp() * self.u01 + (self.lambda3 * t).exp() * self.u03
    }

    /// `∂ₜv₁(t)`.
    pub fn v1_dot(&self, t: f64) -> Complex64 {
        self.lambda1 * (self.lambda1 * t).exp() * self.u01
            + self.lambda3 * (self.lambda3 * t).exp() * self.u03
    }

    /// `∂ₜ²v₁(t)`.
    pub fn v1_ddot(&self, t: f64) -> Complex64 {
        self.lambda1 * self.lambda1 * (self.lambda1 * t).exp() * self.u01
            + self.lambda3 * self.lambda3 * (self.lambda3 * t).exp() * self.u03
    }

    /// Normal velocity profile `v₂(t)`.
    pub fn v2(&self, t: f64) -> Complex64 {
        if self.k == 0.0 {
            return self.v2_constant;
        }
        let ik = Complex64::new(0.0, self.k);
        -ik / self.lambda1 * (self.lambda1 * t).exp() * self.u01
            - ik / self.lambda3 * (self.lambda3 * t).exp() * self.u03
    }

    /// `∂ₜv₂(t) = −ik·v₁(t)` by construction; evaluated from the branches.
    pub fn v2_dot(&self, t: f64) -> Complex64 {
        if self.k == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let ik = Complex64::new(0.0, self.k);
        -ik * ((self.lambda1 * t).exp() * self.u01 + (self.lambda3 * t).exp() * self.u03)
    }

    /// `∂ₜ²v₂(t)`.
    pub fn v2_ddot(&self, t: f64) -> Complex64 {
        if self.k == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let ik = Complex64::new(0.0, self.k);
        -ik * (self.lambda1 * (self.lambda1 * t).exp() * self.u01
            + self.lambda3 * (self.lambda3 * t).exp() * self.u03)
    }

    /// Pressure profile `π(t)`.
    pub fn pressure(&self, t: f64) -> Complex64 {
        self.pressure_factor * (self.lambda1 * t).exp() * self.u01
    }

    /// `∂ₜπ(t)`.
    pub fn pressure_dot(&self, t: f64) -> Complex64 {
        self.pressure_factor * self.lambda1 * (self.lambda1 * t).exp() * self.u01
    }
}

/// The boundary data a solution was built from, kept for residual checks.
#[derive(Debug, Clone)]
pub enum BoundaryData {
    /// Slip problem: transformed `(b̂, d̂)`.
    Slip {
        b_hat: Vec<Complex64>,
        d_hat: Vec<Complex64>,
    },
    /// Dirichlet problem: transformed velocity traces `(D̂₁, D̂₂)`.
    Dirichlet {
        d1_hat: Vec<Complex64>,
        d2_hat: Vec<Complex64>,
    },
}

/// Velocity and pressure fields on a spatial grid × height levels, stored
/// row-major by level: entry `(level j, node i)` sits at `j·n + i`.
#[derive(Debug, Clone)]
pub struct SolutionFields {
    grid: SpatialGrid1D,
    levels: HeightLevels,
    u1: Vec<f64>,
    u2: Vec<f64>,
    p: Vec<f64>,
    /// Per-mode spectral data when the fields came from a solver; enables
    /// analytic wall-normal derivatives in residual evaluation.
    modes: Option<Vec<ModalSolution>>,
    data: Option<BoundaryData>,
}

/// Sup norms of the interior equations and boundary conditions.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// `sup |a₁u,₁ + a₂u,₂ − Δu + ∇p|` over both components.
    pub pde_residual_linf: f64,
    /// `sup |div u|`.
    pub divergence_linf: f64,
    /// Sup of the tangential (slip) boundary-condition residual.
    pub bc_slip_residual_linf: f64,
    /// Sup of the normal boundary-condition residual.
    pub bc_normal_residual_linf: f64,
}

fn check_pair(a: &BoundarySignal, b: &BoundarySignal) -> Result<SpatialGrid1D> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch(
            "boundary signals live on different grids".into(),
        ));
    }
    Ok(a.grid)
}

fn warn_on_nonzero_mean(name: &str, hat: &[Complex64], grid: &SpatialGrid1D) {
    let zero = hat[grid.zero_mode_index()].norm();
    let sup = hat.iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
    if sup > 0.0 && zero > 1e-10 * sup {
        log::warn!(
            "{name} data has a nonzero mean (zero mode {zero:.2e}); the constant mode \
             cannot decay at infinity"
        );
    }
}

/// Assembles physical rows from modal profiles, one inverse transform per
/// level, in parallel over levels.
fn assemble(
    grid: &SpatialGrid1D,
    levels: &HeightLevels,
    modes: &[ModalSolution],
    profile: impl Fn(&ModalSolution, f64) -> Complex64 + Sync,
) -> Result<Vec<f64>> {
    let n = grid.n();
    let rows: Vec<Vec<f64>> = levels
        .levels()
        .par_iter()
        .map(|&t| {
            let coeffs: Vec<Complex64> = modes.iter().map(|m| profile(m, t)).collect();
            inverse_transform_real(&coeffs, grid)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n * levels.len());
    for row in rows {
        out.extend_from_slice(&row);
    }
    Ok(out)
}

fn build_fields(
    grid: SpatialGrid1D,
    levels: HeightLevels,
    modes: Vec<ModalSolution>,
    data: BoundaryData,
) -> Result<SolutionFields> {
    let u1 = assemble(&grid, &levels, &modes, |m, t| m.v1(t))?;
    let u2 = assemble(&grid, &levels, &modes, |m, t| m.v2(t))?;
    let p = assemble(&grid, &levels, &modes, |m, t| m.pressure(t))?;
    Ok(SolutionFields {
        grid,
        levels,
        u1,
        u2,
        p,
        modes: Some(modes),
        data: Some(data),
    })
}

/// Solves the slip problem: tangential stress-plus-friction data `b` and
/// normal-velocity data `d` (the trace is `u₂(·,0) = −d`).
///
/// The zero mode is handled without division: `U₀₁(0) = 0`,
/// `U₀₃(0) = b̂(0)/(f−λ₃(0))`, and the `v₂` zero mode is the constant
/// `−d̂(0)`. Mean-free data keep every mode decaying; nonzero means are
/// legal but logged, since the constant mode cannot vanish at infinity.
pub fn solve_slip(
    params: &OseenParams,
    b: &BoundarySignal,
    d: &BoundarySignal,
    levels: &HeightLevels,
) -> Result<SolutionFields> {
    let grid = check_pair(b, d)?;
    let b_hat = forward_transform(b.samples(), &grid)?;
    let d_hat = forward_transform(d.samples(), &grid)?;
    warn_on_nonzero_mean("normal", &d_hat, &grid);
    if params.a2 >= 0.0 {
        // λ₃(0) = 0 here, so a mean in b leaves a non-decaying constant too.
        warn_on_nonzero_mean("slip", &b_hat, &grid);
    }
    let pressure_factor = |k: f64| Complex64::new(-params.a1, -sigma(k) * params.a2);
    let modes: Vec<ModalSolution> = (0..grid.n())
        .map(|i| {
            let k = grid.frequency(i);
            let eig = eigenvalues(params, k);
            let (u01, u03) = boundary_coefficients(params, b_hat[i], d_hat[i], k);
            let v2_constant = if k == 0.0 { -d_hat[i] } else { Complex64::new(0.0, 0.0) };
            ModalSolution {
                k,
                lambda1: eig.lambda1,
                lambda3: eig.lambda3,
                u01,
                u03,
                pressure_factor: pressure_factor(k),
                v2_constant,
            }
        })
        .collect();
    build_fields(grid, levels.clone(), modes, BoundaryData::Slip { b_hat, d_hat })
}

/// Solves the Dirichlet problem: prescribed velocity trace
/// `(u₁, u₂)(·,0) = (D₁, D₂)`, inverted inside the same two-branch
/// representation as the slip solver (so a slip solution and the Dirichlet
/// solution of its trace coincide identically). The pressure of the reduced
/// problem is identically zero; the full pressure always comes from
/// [`solve_slip`].
pub fn solve_dirichlet(
    params: &OseenParams,
    d1: &BoundarySignal,
    d2: &BoundarySignal,
    levels: &HeightLevels,
) -> Result<SolutionFields> {
    let grid = check_pair(d1, d2)?;
    let d1_hat = forward_transform(d1.samples(), &grid)?;
    let d2_hat = forward_transform(d2.samples(), &grid)?;
    warn_on_nonzero_mean("normal trace", &d2_hat, &grid);
    let modes: Vec<ModalSolution> = (0..grid.n())
        .map(|i| {
            let k = grid.frequency(i);
            let eig = eigenvalues(params, k);
            let (v01, v03, v2_constant);
            if k == 0.0 {
                v01 = Complex64::new(0.0, 0.0);
                v03 = d1_hat[i];
                v2_constant = d2_hat[i];
            } else {
                // Trace system: v₁(0) = V₀₁ + V₀₃ = D̂₁,
                // v₂(0) = −(ik/λ₁)V₀₁ − (ik/λ₃)V₀₃ = D̂₂.
                let ik = Complex64::new(0.0, k);
                let r1 = -ik / eig.lambda1;
                let r3 = -ik / eig.lambda3;
                let det = r3 - r1;
                v01 = (d1_hat[i] * r3 - d2_hat[i]) / det;
                v03 = (d2_hat[i] - d1_hat[i] * r1) / det;
                v2_constant = Complex64::new(0.0, 0.0);
            }
            ModalSolution {
                k,
                lambda1: eig.lambda1,
                lambda3: eig.lambda3,
                u01: v01,
                u03: v03,
                pressure_factor: Complex64::new(0.0, 0.0),
                v2_constant,
            }
        })
        .collect();
    build_fields(
        grid,
        levels.clone(),
        modes,
        BoundaryData::Dirichlet { d1_hat, d2_hat },
    )
}

impl SolutionFields {
    /// The spatial grid.
    pub fn grid(&self) -> &SpatialGrid1D {
        &self.grid
    }

    /// The height levels.
    pub fn levels(&self) -> &HeightLevels {
        &self.levels
    }

    /// Row `j` (one height level) of a component.
    pub fn row(&self, component: FieldComponent, j: usize) -> &[f64] {
        let n = self.grid.n();
        let arr = match component {
            FieldComponent::U1 => &self.u1,
            FieldComponent::U2 => &self.u2,
            FieldComponent::P => &self.p,
        };
        &arr[j * n..(j + 1) * n]
    }

    /// The spectral modes when available (solver-built fields).
    pub fn modes(&self) -> Option<&[ModalSolution]> {
        self.modes.as_deref()
    }

    /// Copy of these fields with the spectral data removed, as if the
    /// samples had been loaded from disk. Residual evaluation then has to
    /// fall back to finite differences.
    pub fn without_spectral_data(&self) -> Self {
        Self {
            modes: None,
            ..self.clone()
        }
    }

    /// Adds `eps · x₂-profile` to the pressure (a deliberate non-solution,
    /// used to verify that the residual operator responds linearly).
    pub fn perturb_pressure(&mut self, eps: f64) {
        let n = self.grid.n();
        for (j, &t) in self.levels.levels().iter().enumerate() {
            let bump = eps * (-t).exp();
            for i in 0..n {
                self.p[j * n + i] += bump;
            }
        }
        self.modes = None;
    }

    /// Sup of |u| over the top height level (decay-at-infinity diagnostic).
    pub fn top_level_sup(&self) -> f64 {
        let j = self.levels.len() - 1;
        self.row(FieldComponent::U1, j)
            .iter()
            .chain(self.row(FieldComponent::U2, j))
            .fold(0.0f64, |a, &v| a.max(v.abs()))
    }

    /// Boundary slices `(u₁, u₂, p)` at `x₂ = 0`.
    ///
    /// Errors unless the first level is exactly 0.
    pub fn trace(&self) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        if !self.levels.starts_at_zero() {
            return Err(Error::InvalidArgument(
                "trace requires the first height level to be exactly t = 0".into(),
            ));
        }
        Ok((
            self.row(FieldComponent::U1, 0).to_vec(),
            self.row(FieldComponent::U2, 0).to_vec(),
            self.row(FieldComponent::P, 0).to_vec(),
        ))
    }

    /// Writes the CSV dump: header `x1,x2,u1,u2,p`, row-major over levels.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x1,x2,u1,u2,p")?;
        let n = self.grid.n();
        for (j, &t) in self.levels.levels().iter().enumerate() {
            for i in 0..n {
                writeln!(
                    w,
                    "{},{},{:.17e},{:.17e},{:.17e}",
                    self.grid.node(i),
                    t,
                    self.u1[j * n + i],
                    self.u2[j * n + i],
                    self.p[j * n + i]
                )?;
            }
        }
        Ok(())
    }

    /// Writes the compact binary dump: a 32-byte header (8 magic bytes,
    /// `n: u32`, `M: u32`, `L: f64`, `T: f64`, all little-endian), then the
    /// `u1`, `u2`, `p` arrays as row-major f64, followed by the `M` level
    /// values.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(FIELD_DUMP_MAGIC)?;
        w.write_all(&(self.grid.n() as u32).to_le_bytes())?;
        w.write_all(&(self.levels.len() as u32).to_le_bytes())?;
        w.write_all(&self.grid.half_width().to_le_bytes())?;
        w.write_all(&self.levels.top().to_le_bytes())?;
        for arr in [&self.u1, &self.u2, &self.p] {
            for v in arr {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        for v in self.levels.levels() {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a binary dump written by [`SolutionFields::write_binary`].
    /// The result carries no spectral data.
    pub fn read_binary(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("binary field dump: {m}"));
        if bytes.len() < 32 || &bytes[0..8] != FIELD_DUMP_MAGIC {
            return Err(bad("missing header magic"));
        }
        let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let m = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
        let half_width = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
        let expected = 32 + 8 * (3 * n * m + m);
        if bytes.len() != expected {
            return Err(bad("truncated payload"));
        }
        let read_f64s = |offset: usize, count: usize| -> Vec<f64> {
            (0..count)
                .map(|i| {
                    f64::from_le_bytes(
                        bytes[offset + 8 * i..offset + 8 * (i + 1)].try_into().unwrap(),
                    )
                })
                .collect()
        };
        let u1 = read_f64s(32, n * m);
        let u2 = read_f64s(32 + 8 * n * m, n * m);
        let p = read_f64s(32 + 16 * n * m, n * m);
        let levels = HeightLevels::from_levels(read_f64s(32 + 24 * n * m, m))?;
        Ok(Self {
            grid: SpatialGrid1D::new(half_width, n)?,
            levels,
            u1,
            u2,
            p,
            modes: None,
            data: None,
        })
    }
}

/// Field component selector for [`SolutionFields::row`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldComponent {
    U1,
    U2,
    P,
}

/// Evaluates the sup-norm residuals of the interior equations
/// (`a₁u,₁ + a₂u,₂ − Δu + ∇p`, `div u`) and of the boundary conditions.
///
/// Solver-built fields are differentiated analytically in the wall-normal
/// direction (their modes are exact exponentials); fields without spectral
/// data use Fornberg finite-difference stencils on the height levels
/// (five-point, fourth-order on smooth profiles) and spectral derivatives
/// tangentially. At least 5 levels are required.
pub fn residual(params: &OseenParams, fields: &SolutionFields) -> Result<ResidualReport> {
    if fields.levels.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "residual evaluation needs at least 5 height levels, got {}",
            fields.levels.len()
        )));
    }
    match &fields.modes {
        Some(modes) => residual_spectral(params, fields, modes),
        None => residual_finite_difference(params, fields),
    }
}

fn sup_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
}

fn residual_spectral(
    params: &OseenParams,
    fields: &SolutionFields,
    modes: &[ModalSolution],
) -> Result<ResidualReport> {
    let grid = &fields.grid;
    let levels = &fields.levels;
    let a1 = params.a1;
    let a2 = Complex64::new(params.a2, 0.0);

    let mom1 = |m: &ModalSolution, t: f64| {
        let ia1k = Complex64::new(0.0, a1 * m.k);
        let k2 = Complex64::new(m.k * m.k, 0.0);
        ia1k * m.v1(t) + a2 * m.v1_dot(t) + k2 * m.v1(t) - m.v1_ddot(t)
            + Complex64::new(0.0, m.k) * m.pressure(t)
    };
    let mom2 = |m: &ModalSolution, t: f64| {
        let ia1k = Complex64::new(0.0, a1 * m.k);
        let k2 = Complex64::new(m.k * m.k, 0.0);
        ia1k * m.v2(t) + a2 * m.v2_dot(t) + k2 * m.v2(t) - m.v2_ddot(t) + m.pressure_dot(t)
    };
    let div = |m: &ModalSolution, t: f64| Complex64::new(0.0, m.k) * m.v1(t) + m.v2_dot(t);

    let r1 = assemble(grid, levels, modes, mom1)?;
    let r2 = assemble(grid, levels, modes, mom2)?;
    let rdiv = assemble(grid, levels, modes, div)?;

    let (bc_slip, bc_normal) = match fields.data.as_ref() {
        Some(BoundaryData::Slip { b_hat, d_hat }) => {
            // Tangential: −(∂ₜv₁ + ik·v₂) + f·v₁ = b̂ at t = 0;
            // normal: v₂(0) = −d̂.
            let slip_res: Vec<Complex64> = modes
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    -(m.v1_dot(0.0) + Complex64::new(0.0, m.k) * m.v2(0.0))
                        + Complex64::new(params.f, 0.0) * m.v1(0.0)
                        - b_hat[i]
                })
                .collect();
            let normal_res: Vec<Complex64> = modes
                .iter()
                .enumerate()
                .map(|(i, m)| m.v2(0.0) + d_hat[i])
                .collect();
            (
                sup_abs(&inverse_transform_real(&slip_res, grid)?),
                sup_abs(&inverse_transform_real(&normal_res, grid)?),
            )
        }
        Some(BoundaryData::Dirichlet { d1_hat, d2_hat }) => {
            let r1: Vec<Complex64> = modes
                .iter()
                .enumerate()
                .map(|(i, m)| m.v1(0.0) - d1_hat[i])
                .collect();
            let r2: Vec<Complex64> = modes
                .iter()
                .enumerate()
                .map(|(i, m)| m.v2(0.0) - d2_hat[i])
                .collect();
            (
                sup_abs(&inverse_transform_real(&r1, grid)?),
                sup_abs(&inverse_transform_real(&r2, grid)?),
            )
        }
        None => (0.0, 0.0),
    };

    Ok(ResidualReport {
        pde_residual_linf: sup_abs(&r1).max(sup_abs(&r2)),
        divergence_linf: sup_abs(&rdiv),
        bc_slip_residual_linf: bc_slip,
        bc_normal_residual_linf: bc_normal,
    })
}

/// Spectral tangential derivative of one row: transform, multiply by
/// `(ik)^order`, transform back.
fn spectral_dx(row: &[f64], grid: &SpatialGrid1D, order: u32) -> Result<Vec<f64>> {
    let mut hat = forward_transform(row, grid)?;
    for (i, c) in hat.iter_mut().enumerate() {
        *c *= Complex64::new(0.0, grid.frequency(i)).powu(order);
    }
    inverse_transform_real(&hat, grid)
}

fn residual_finite_difference(
    params: &OseenParams,
    fields: &SolutionFields,
) -> Result<ResidualReport> {
    let grid = &fields.grid;
    let n = grid.n();
    let ts = fields.levels.levels();
    let m = ts.len();

    // Wall-normal first/second derivatives of all three fields via
    // five-point Fornberg stencils centered as well as the level allows.
    let stencil = |j: usize| -> (usize, usize) {
        let lo = j.saturating_sub(2).min(m - 5);
        (lo, lo + 5)
    };
    let dt_of = |arr: &[f64], order: usize| -> Result<Vec<f64>> {
        let mut out = vec![0.0; n * m];
        for j in 0..m {
            let (lo, hi) = stencil(j);
            let w = fd_weights(&ts[lo..hi], ts[j], order)?;
            for i in 0..n {
                let mut acc = 0.0;
                for (s, &ws) in w.iter().enumerate() {
                    acc += ws * arr[(lo + s) * n + i];
                }
                out[j * n + i] = acc;
            }
        }
        Ok(out)
    };

    let u1_t = dt_of(&fields.u1, 1)?;
    let u1_tt = dt_of(&fields.u1, 2)?;
    let u2_t = dt_of(&fields.u2, 1)?;
    let u2_tt = dt_of(&fields.u2, 2)?;
    let p_t = dt_of(&fields.p, 1)?;

    let mut pde = 0.0f64;
    let mut divr = 0.0f64;
    for j in 0..m {
        let u1_row = fields.row(FieldComponent::U1, j);
        let u2_row = fields.row(FieldComponent::U2, j);
        let p_row = fields.row(FieldComponent::P, j);
        let u1_x = spectral_dx(u1_row, grid, 1)?;
        let u1_xx = spectral_dx(u1_row, grid, 2)?;
        let u2_x = spectral_dx(u2_row, grid, 1)?;
        let u2_xx = spectral_dx(u2_row, grid, 2)?;
        let p_x = spectral_dx(p_row, grid, 1)?;
        for i in 0..n {
            let r1 = params.a1 * u1_x[i] + params.a2 * u1_t[j * n + i] - u1_xx[i]
                - u1_tt[j * n + i]
                + p_x[i];
            let r2 = params.a1 * u2_x[i] + params.a2 * u2_t[j * n + i] - u2_xx[i]
                - u2_tt[j * n + i]
                + p_t[j * n + i];
            pde = pde.max(r1.abs()).max(r2.abs());
            divr = divr.max((u1_x[i] + u2_t[j * n + i]).abs());
        }
    }

    // Boundary rows from the stored data, when present.
    let (bc_slip, bc_normal) = match fields.data.as_ref() {
        Some(BoundaryData::Slip { b_hat, d_hat }) => {
            let b = inverse_transform_real(b_hat, grid)?;
            let d = inverse_transform_real(d_hat, grid)?;
            let u1_0 = fields.row(FieldComponent::U1, 0);
            let u2_0 = fields.row(FieldComponent::U2, 0);
            let u2_x0 = spectral_dx(u2_0, grid, 1)?;
            let mut slip = 0.0f64;
            let mut normal = 0.0f64;
            for i in 0..n {
                let s = -(u1_t[i] + u2_x0[i]) + params.f * u1_0[i] - b[i];
                slip = slip.max(s.abs());
                normal = normal.max((u2_0[i] + d[i]).abs());
            }
            (slip, normal)
        }
        Some(BoundaryData::Dirichlet { d1_hat, d2_hat }) => {
            let d1 = inverse_transform_real(d1_hat, grid)?;
            let d2 = inverse_transform_real(d2_hat, grid)?;
            let u1_0 = fields.row(FieldComponent::U1, 0);
            let u2_0 = fields.row(FieldComponent::U2, 0);
            let mut s = 0.0f64;
            let mut v = 0.0f64;
            for i in 0..n {
                s = s.max((u1_0[i] - d1[i]).abs());
                v = v.max((u2_0[i] - d2[i]).abs());
            }
            (s, v)
        }
        None => (0.0, 0.0),
    };

    Ok(ResidualReport {
        pde_residual_linf: pde,
        divergence_linf: divr,
        bc_slip_residual_linf: bc_slip,
        bc_normal_residual_linf: bc_normal,
    })
}

/// Convenience: solve the slip problem and return the Dirichlet-equivalent
/// boundary signals `(D₁, D₂)` of its velocity trace.
pub fn dirichlet_data_of(
    params: &OseenParams,
    b: &BoundarySignal,
    d: &BoundarySignal,
) -> Result<(BoundarySignal, BoundarySignal)> {
    let grid = check_pair(b, d)?;
    let b_hat = forward_transform(b.samples(), &grid)?;
    let d_hat = forward_transform(d.samples(), &grid)?;
    let mut d1_hat = vec![Complex64::new(0.0, 0.0); grid.n()];
    let mut d2_hat = vec![Complex64::new(0.0, 0.0); grid.n()];
    for i in 0..grid.n() {
        let k = grid.frequency(i);
        let (d1, d2) = dirichlet_reduction(params, b_hat[i], d_hat[i], k);
        d1_hat[i] = d1;
        d2_hat[i] = d2;
    }
    Ok((
        BoundarySignal::new(grid, inverse_transform_real(&d1_hat, &grid)?)?,
        BoundarySignal::new(grid, inverse_transform_real(&d2_hat, &grid)?)?,
    ))
}

/// Largest sup-norm difference between the velocity fields of two solutions
/// on the same grid and levels.
pub fn velocity_sup_distance(a: &SolutionFields, b: &SolutionFields) -> Result<f64> {
    if a.grid != b.grid || a.levels != b.levels {
        return Err(Error::GridMismatch(
            "solutions live on different discretizations".into(),
        ));
    }
    let mut worst = 0.0f64;
    for (x, y) in a.u1.iter().zip(&b.u1) {
        worst = worst.max((x - y).abs());
    }
    for (x, y) in a.u2.iter().zip(&b.u2) {
        worst = worst.max((x - y).abs());
    }
    Ok(worst)
}

/// Downstream/upstream anisotropy of `|u|` along the wall-normal direction:
/// a regime diagnostic comparing how fast the solution decays in `x₂` for
/// `a₂ > 0` versus `a₂ < 0`.
pub fn normal_decay_scale(fields: &SolutionFields) -> Result<f64> {
    // First height where the level-sup of |u| drops below half its
    // boundary value, linearly interpolated.
    let sup_at = |j: usize| -> f64 {
        fields
            .row(FieldComponent::U1, j)
            .iter()
            .chain(fields.row(FieldComponent::U2, j))
            .fold(0.0f64, |a, &v| a.max(v.abs()))
    };
    let s0 = sup_at(0);
    if s0 <= 0.0 {
        return Err(Error::Numerical(
            "insufficient decay window: zero boundary amplitude".into(),
        ));
    }
    let target = 0.5 * s0;
    let ts = fields.levels.levels();
    let mut prev = s0;
    for j in 1..fields.levels.len() {
        let s = sup_at(j);
        if s <= target {
            let frac = if prev > s {
                (prev - target) / (prev - s)
            } else {
                0.0
            };
            return Ok(ts[j - 1] + frac * (ts[j] - ts[j - 1]));
        }
        prev = s;
    }
    Err(Error::Numerical(
        "insufficient decay window: |u| never halves inside the level range".into(),
    ))
}

/// Per-regime sanity used in doc examples and quick checks.
pub fn regime_label(params: &OseenParams) -> &'static str {
    match crate::symbols::regime_of(params) {
        Regime::Elliptic => "elliptic",
        Regime::Transitional => "transitional",
        Regime::Parabolic => "parabolic",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup(n: usize) -> (SpatialGrid1D, HeightLevels) {
        let grid = SpatialGrid1D::new(20.0, n).unwrap();
        let levels = HeightLevels::default_for_grid(&grid, 64).unwrap();
        (grid, levels)
    }

    fn gauss_pair(grid: SpatialGrid1D) -> (BoundarySignal, BoundarySignal) {
        let b = BoundarySignal::from_fn(grid, |x| (-x * x).exp()).unwrap();
        // Mean-free normal data: a Gaussian derivative.
        let d = BoundarySignal::from_fn(grid, |x| -2.0 * x * (-x * x).exp()).unwrap();
        (b, d)
    }

    #[test]
    fn zero_data_gives_zero_fields() {
        let (grid, levels) = setup(128);
        let z = BoundarySignal::new(grid, vec![0.0; grid.n()]).unwrap();
        let p = OseenParams::new(1.0, 1.0, 1.0).unwrap();
        let fields = solve_slip(&p, &z, &z, &levels).unwrap();
        assert_eq!(fields.u1.iter().fold(0.0f64, |a, &v| a.max(v.abs())), 0.0);
        assert_eq!(fields.u2.iter().fold(0.0f64, |a, &v| a.max(v.abs())), 0.0);
        assert_eq!(fields.p.iter().fold(0.0f64, |a, &v| a.max(v.abs())), 0.0);
        let r = residual(&p, &fields).unwrap();
        assert_eq!(r.pde_residual_linf, 0.0);
        assert_eq!(r.divergence_linf, 0.0);
    }

    #[test]
    fn grid_mismatch_and_nan_are_rejected() {
        let (grid, levels) = setup(128);
        let other = SpatialGrid1D::new(10.0, 128).unwrap();
        let a = BoundarySignal::new(grid, vec![0.0; 128]).unwrap();
        let b = BoundarySignal::new(other, vec![0.0; 128]).unwrap();
        let p = OseenParams::new(1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            solve_slip(&p, &a, &b, &levels),
            Err(Error::GridMismatch(_))
        ));
        let mut samples = vec![0.0; 128];
        samples[3] = f64::NAN;
        assert!(matches!(
            BoundarySignal::new(grid, samples),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn slip_solution_residuals_vanish_in_all_regimes() {
        let (grid, levels) = setup(256);
        let (b, d) = gauss_pair(grid);
        for (a1, a2) in [(1.0, -1.0), (1.0, 0.0), (1.0, 1.0), (0.3, 2.0)] {
            let p = OseenParams::new(a1, a2, 1.0).unwrap();
            let fields = solve_slip(&p, &b, &d, &levels).unwrap();
            let r = residual(&p, &fields).unwrap();
            assert!(r.pde_residual_linf < 1e-10, "pde {} at a2={a2}", r.pde_residual_linf);
            assert!(r.divergence_linf < 1e-12, "div {} at a2={a2}", r.divergence_linf);
            assert!(r.bc_slip_residual_linf < 1e-10, "slip {}", r.bc_slip_residual_linf);
            assert!(r.bc_normal_residual_linf < 1e-10, "normal {}", r.bc_normal_residual_linf);
        }
    }

    #[test]
    fn normal_trace_equals_minus_d() {
        let (grid, levels) = setup(256);
        let (b, d) = gauss_pair(grid);
        let p = OseenParams::new(0.5, -1.0, 2.0).unwrap();
        let fields = solve_slip(&p, &b, &d, &levels).unwrap();
        let (_, u2_0, _) = fields.trace().unwrap();
        let mut worst = 0.0f64;
        for (v, w) in u2_0.iter().zip(d.samples()) {
            worst = worst.max((v + w).abs());
        }
        assert!(worst < 1e-10, "sup |u2(·,0) + d| = {worst}");
    }

    #[test]
    fn single_mode_data_stays_single_mode() {
        let (grid, levels) = setup(256);
        let k0 = 2.0 * std::f64::consts::PI / 20.0 * 4.0; // an exact grid mode
        let b = BoundarySignal::from_fn(grid, |x| (k0 * x).cos()).unwrap();
        let d = BoundarySignal::new(grid, vec![0.0; grid.n()]).unwrap();
        let p = OseenParams::new(1.0, 0.0, 1.0).unwrap();
        let fields = solve_slip(&p, &b, &d, &levels).unwrap();
        let r = residual(&p, &fields).unwrap();
        assert!(r.pde_residual_linf < 1e-8);
        // All spectral mass sits on ±k0.
        let modes = fields.modes().unwrap();
        for m in modes {
            if (m.k.abs() - k0).abs() > 1e-9 {
                assert!(m.u01.norm() + m.u03.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn solution_is_linear_in_the_data() {
        let (grid, levels) = setup(128);
        let (b, d) = gauss_pair(grid);
        let p = OseenParams::new(1.0, 1.0, 1.0).unwrap();
        let f1 = solve_slip(&p, &b, &d, &levels).unwrap();
        let b2 = BoundarySignal::new(grid, b.samples().iter().map(|v| 2.5 * v).collect()).unwrap();
        let d2 = BoundarySignal::new(grid, d.samples().iter().map(|v| 2.5 * v).collect()).unwrap();
        let f2 = solve_slip(&p, &b2, &d2, &levels).unwrap();
        let mut worst = 0.0f64;
        for (x, y) in f1.u1.iter().zip(&f2.u1) {
            worst = worst.max((2.5 * x - y).abs());
        }
        for (x, y) in f1.p.iter().zip(&f2.p) {
            worst = worst.max((2.5 * x - y).abs());
        }
        assert!(worst < 1e-12, "linearity deviation {worst}");
    }

    #[test]
    fn dirichlet_of_reduced_data_reproduces_the_slip_velocity() {
        let (grid, levels) = setup(256);
        let (b, d) = gauss_pair(grid);
        for (a1, a2) in [(1.0, -1.0), (1.0, 0.0), (0.5, 1.5)] {
            let p = OseenParams::new(a1, a2, 1.0).unwrap();
            let slip = solve_slip(&p, &b, &d, &levels).unwrap();
            let (d1, d2) = dirichlet_data_of(&p, &b, &d).unwrap();
            let diri = solve_dirichlet(&p, &d1, &d2, &levels).unwrap();
            let dist = velocity_sup_distance(&slip, &diri).unwrap();
            assert!(dist < 1e-10, "sup distance {dist} at a2={a2}");
        }
    }

    #[test]
    fn dirichlet_trace_is_the_data() {
        let (grid, levels) = setup(256);
        let d1 = BoundarySignal::from_fn(grid, |x| (-x * x).exp()).unwrap();
        let d2 = BoundarySignal::from_fn(grid, |x| -2.0 * x * (-x * x).exp()).unwrap();
        let p = OseenParams::new(1.0, 0.0, 1.0).unwrap();
        let fields = solve_dirichlet(&p, &d1, &d2, &levels).unwrap();
        let (u1_0, u2_0, p_0) = fields.trace().unwrap();
        let mut worst = 0.0f64;
        for i in 0..grid.n() {
            worst = worst.max((u1_0[i] - d1.samples()[i]).abs());
            worst = worst.max((u2_0[i] - d2.samples()[i]).abs());
        }
        assert!(worst < 1e-10, "trace deviation {worst}");
        assert!(p_0.iter().all(|&v| v == 0.0));
        let r = residual(&p, &fields).unwrap();
        assert!(r.bc_slip_residual_linf < 1e-10);
        assert!(r.bc_normal_residual_linf < 1e-10);
    }

    #[test]
    fn trace_requires_a_boundary_level() {
        let grid = SpatialGrid1D::new(20.0, 128).unwrap();
        let levels = HeightLevels::from_levels(vec![0.5, 1.0, 2.0, 4.0, 8.0]).unwrap();
        let (b, d) = gauss_pair(grid);
        let p = OseenParams::new(1.0, -1.0, 1.0).unwrap();
        let fields = solve_slip(&p, &b, &d, &levels).unwrap();
        assert!(matches!(fields.trace(), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn fields_decay_at_the_top_level_for_band_limited_data() {
        // Exact grid modes keep all spectral mass away from k = 0, where
        // the parabolic regime decays only algebraically in t.
        let (grid, levels) = setup(256);
        let k8 = std::f64::consts::PI * 8.0 / 20.0;
        let k20 = std::f64::consts::PI;
        let b = BoundarySignal::from_fn(grid, |x| (k8 * x).cos() + 0.5 * (k20 * x).cos()).unwrap();
        let d = BoundarySignal::from_fn(grid, |x| 0.3 * (k8 * x).sin()).unwrap();
        for a2 in [-1.0, 0.0, 1.0] {
            let p = OseenParams::new(1.0, a2, 1.0).unwrap();
            let fields = solve_slip(&p, &b, &d, &levels).unwrap();
            assert!(
                fields.top_level_sup() < 1e-8,
                "top-level sup {} at a2={a2}",
                fields.top_level_sup()
            );
        }
    }

    #[test]
    fn pressure_profile_is_a_pure_decay_exponential_per_mode() {
        let (grid, levels) = setup(128);
        let (b, d) = gauss_pair(grid);
        let p = OseenParams::new(1.0, 1.0, 1.0).unwrap();
        let fields = solve_slip(&p, &b, &d, &levels).unwrap();
        let modes = fields.modes().unwrap();
        for m in modes.iter().filter(|m| m.k != 0.0 && m.pressure(0.0).norm() > 1e-12) {
            for &t in &levels.levels()[..40] {
                let rebuilt = m.pressure(0.0) * (m.lambda1 * t).exp();
                let dev = (m.pressure(t) - rebuilt).norm();
                assert!(dev < 1e-10 * m.pressure(0.0).norm().max(1e-30));
                // λ₁ = −|k|: the profile is e^{−|k|t} exactly.
                assert_eq!(m.lambda1.im, 0.0);
                assert_eq!(m.lambda1.re, -m.k.abs());
            }
        }
    }

    fn uniform_levels(top: f64, count: usize) -> HeightLevels {
        let dt = top / (count as f64 - 1.0);
        HeightLevels::from_levels((0..count).map(|j| j as f64 * dt).collect()).unwrap()
    }

    fn wide_gauss_pair(grid: SpatialGrid1D) -> (BoundarySignal, BoundarySignal) {
        // Narrow spectrum ⇒ small high-order t-derivatives, which is what
        // the finite-difference error constant scales with.
        let b = BoundarySignal::from_fn(grid, |x| (-x * x / 4.0).exp()).unwrap();
        let d = BoundarySignal::from_fn(grid, |x| -0.5 * x * (-x * x / 4.0).exp()).unwrap();
        (b, d)
    }

    #[test]
    fn finite_difference_residual_confirms_an_exact_solution() {
        let grid = SpatialGrid1D::new(20.0, 64).unwrap();
        let levels = uniform_levels(12.0, 4801);
        let (b, d) = wide_gauss_pair(grid);
        let p = OseenParams::new(1.0, -1.0, 1.0).unwrap();
        let fields = solve_slip(&p, &b, &d, &levels).unwrap();
        let r = residual(&p, &fields.without_spectral_data()).unwrap();
        // Dominated by the one-sided wall-normal stencil at t = 0.
        assert!(r.pde_residual_linf < 1e-6, "fd residual {}", r.pde_residual_linf);
        assert!(r.divergence_linf < 1e-8, "fd divergence {}", r.divergence_linf);
        assert!(r.bc_slip_residual_linf < 1e-7);
        assert!(r.bc_normal_residual_linf < 1e-12);
    }

    #[test]
    fn perturbed_pressure_produces_residual_linear_in_the_perturbation() {
        let grid = SpatialGrid1D::new(20.0, 64).unwrap();
        let levels = uniform_levels(12.0, 1201);
        let (b, d) = wide_gauss_pair(grid);
        let p = OseenParams::new(1.0, -1.0, 1.0).unwrap();
        let fields = solve_slip(&p, &b, &d, &levels).unwrap();
        let mut f1 = fields.clone();
        f1.perturb_pressure(1e-3);
        let mut f2 = fields.clone();
        f2.perturb_pressure(2e-3);
        let r1 = residual(&p, &f1).unwrap().pde_residual_linf;
        let r2 = residual(&p, &f2).unwrap().pde_residual_linf;
        assert!(r1 > 5e-4, "perturbation must dominate the fd noise, got {r1}");
        assert_relative_eq!(r2 / r1, 2.0, max_relative = 0.05);
    }

    #[test]
    fn residual_requires_enough_levels() {
        let grid = SpatialGrid1D::new(20.0, 128).unwrap();
        let levels = HeightLevels::from_levels(vec![0.0, 0.1, 1.0, 5.0]).unwrap();
        let (b, d) = gauss_pair(grid);
        let p = OseenParams::new(1.0, -1.0, 1.0).unwrap();
        let fields = solve_slip(&p, &b, &d, &levels).unwrap();
        assert!(matches!(
            residual(&p, &fields),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn wake_anisotropy_between_regimes() {
        // Identical localized normal data pushed downstream (a2 > 0) decays
        // slower in x₂ than pulled upstream (a2 < 0).
        let (grid, levels) = setup(256);
        let b = BoundarySignal::new(grid, vec![0.0; grid.n()]).unwrap();
        let d = BoundarySignal::from_fn(grid, |x| -2.0 * x * (-x * x).exp()).unwrap();
        let down = OseenParams::new(0.0, 1.0, 1.0).unwrap();
        let up = OseenParams::new(0.0, -1.0, 1.0).unwrap();
        let scale_down = normal_decay_scale(&solve_slip(&down, &b, &d, &levels).unwrap()).unwrap();
        let scale_up = normal_decay_scale(&solve_slip(&up, &b, &d, &levels).unwrap()).unwrap();
        assert!(
            scale_down / scale_up > 1.0,
            "downstream/upstream scales {scale_down}/{scale_up}"
        );
    }

    #[test]
    fn binary_dump_round_trips() {
        let grid = SpatialGrid1D::new(10.0, 64).unwrap();
        let levels = HeightLevels::geometric(1e-2, 5.0, 8).unwrap();
        let (b, d) = (
            BoundarySignal::from_fn(grid, |x| (-x * x).exp()).unwrap(),
            BoundarySignal::from_fn(grid, |x| -2.0 * x * (-x * x).exp()).unwrap(),
        );
        let p = OseenParams::new(1.0, -1.0, 1.0).unwrap();
        let fields = solve_slip(&p, &b, &d, &levels).unwrap();
        let mut buf = Vec::new();
        fields.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[0..8], FIELD_DUMP_MAGIC);
        let back = SolutionFields::read_binary(&buf).unwrap();
        assert_eq!(back.u1, fields.u1);
        assert_eq!(back.u2, fields.u2);
        assert_eq!(back.p, fields.p);
        assert_eq!(back.levels.levels(), fields.levels.levels());
        assert!(SolutionFields::read_binary(&buf[..buf.len() - 1]).is_err());
        assert!(SolutionFields::read_binary(b"NOTAFILE").is_err());
    }

    #[test]
    fn csv_dump_has_the_documented_header() {
        let grid = SpatialGrid1D::new(10.0, 16).unwrap();
        let levels = HeightLevels::from_levels(vec![0.0, 0.5, 1.0, 2.0, 4.0]).unwrap();
        let (b, d) = (
            BoundarySignal::from_fn(grid, |x| (-x * x).exp()).unwrap(),
            BoundarySignal::new(grid, vec![0.0; 16]).unwrap(),
        );
        let p = OseenParams::new(1.0, 0.0, 1.0).unwrap();
        let fields = solve_slip(&p, &b, &d, &levels).unwrap();
        let mut buf = Vec::new();
        fields.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x1,x2,u1,u2,p");
        assert_eq!(lines.count(), 16 * 5);
    }
}
