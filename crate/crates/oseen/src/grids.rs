//! Uniform spatial/spectral grids and the project-wide Fourier convention.
//!
//! Everything downstream is built on a single transform contract: the
//! symmetric (unitary) convention
//!
//! ```text
//! f̂(k) = (2π)^{-1/2} ∫ e^{-ikx} f(x) dx
//! ```
//!
//! discretized on the periodic box `[-L, L)` with `n` equispaced samples
//! `x_j = -L + j·h`, `h = 2L/n`, and angular frequencies `k_m = π m / L`
//! for `m = -n/2 .. n/2-1` stored in monotone order. Under this convention
//! the closed-form kernel identities used by the verification suites hold
//! verbatim (e.g. `F[e^{-x²}] = 2^{-1/2} e^{-k²/4}`), Parseval reads
//! `h·Σ|f_j|² = Δk·Σ|f̂_m|²`, and convolution picks up a factor `√(2π)`.
//!
//! The module also provides [`HeightLevels`], the quadrature grid in the
//! wall-normal coordinate used for half-plane fields, and Fornberg
//! finite-difference weights on arbitrary nodes for differentiating data
//! that only exists as samples.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

use crate::error::{Error, Result};

/// Relative magnitude a signal may have on the outer 5% of the box before
/// periodic truncation is considered unsafe (wrap-around aliasing).
pub const EDGE_DECAY_TOL: f64 = 1e-10;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Uniform periodic grid on `[-L, L)`.
///
/// ```
/// use oseen::grids::SpatialGrid1D;
/// let g = SpatialGrid1D::new(20.0, 256).unwrap();
/// assert_eq!(g.spacing(), 40.0 / 256.0);
/// assert_eq!(g.node(0), -20.0);
/// assert_eq!(g.frequency(128), 0.0); // k = 0 sits at index n/2
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid1D {
    half_width: f64,
    n_points: usize,
}

impl SpatialGrid1D {
    /// Creates a grid with half-width `L` and `n` points.
    ///
    /// `n` must be even and at least 8 so that the spectral index set
    /// `m = -n/2 .. n/2-1` is balanced around the zero mode.
    pub fn new(half_width: f64, n_points: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "grid half-width must be positive and finite, got {half_width}"
            )));
        }
        if n_points < 8 || !n_points.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "grid size must be even and >= 8, got {n_points}"
            )));
        }
        Ok(Self {
            half_width,
            n_points,
        })
    }

    /// Number of sample points `n`.
    pub fn n(&self) -> usize {
        self.n_points
    }

    /// Half-width `L` of the box `[-L, L)`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Grid spacing `h = 2L/n`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n_points as f64
    }

    /// Frequency spacing `Δk = π/L`.
    pub fn frequency_spacing(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    /// Sample location `x_j = -L + j·h`.
    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// All sample locations.
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.node(j)).collect()
    }

    /// Angular frequency at storage index `i`: `k = π(i - n/2)/L`.
    ///
    /// Frequencies are stored monotonically; index `n/2` is the zero mode.
    pub fn frequency(&self, i: usize) -> f64 {
        let m = i as isize - (self.n_points / 2) as isize;
        std::f64::consts::PI * m as f64 / self.half_width
    }

    /// All angular frequencies in monotone storage order.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.frequency(i)).collect()
    }

    /// Storage index of the zero frequency.
    pub fn zero_mode_index(&self) -> usize {
        self.n_points / 2
    }

    /// Samples a function on the grid.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes().into_iter().map(f).collect()
    }

    /// Largest magnitude of `samples` on the outer 5% of the box, if it
    /// exceeds [`EDGE_DECAY_TOL`] relative to the overall sup; `None` when
    /// the signal decays acceptably. Callers treat `Some` as a warning:
    /// periodic truncation will alias.
    pub fn edge_decay_violation(&self, samples: &[f64]) -> Option<f64> {
        let n = self.n_points;
        let margin = (n as f64 * 0.05).ceil() as usize;
        let sup = samples.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if sup == 0.0 {
            return None;
        }
        let mut edge = 0.0f64;
        for j in 0..margin.min(n) {
            edge = edge.max(samples[j].abs());
            edge = edge.max(samples[n - 1 - j].abs());
        }
        if edge > EDGE_DECAY_TOL * sup {
            Some(edge / sup)
        } else {
            None
        }
    }
}

fn check_len(len: usize, grid: &SpatialGrid1D, what: &str) -> Result<()> {
    if len != grid.n() {
        return Err(Error::GridMismatch(format!(
            "{what} has {len} samples but the grid has {} points",
            grid.n()
        )));
    }
    Ok(())
}

/// Forward transform of complex samples.
///
/// Returns coefficients on the monotone frequency grid, implementing
/// `f̂(k_m) = h (2π)^{-1/2} Σ_j e^{-i k_m x_j} f(x_j)`. Because the grid
/// starts at `-L`, the phase `e^{i k_m L} = (-1)^m` twists the plain DFT.
pub fn forward_transform_complex(
    samples: &[Complex64],
    grid: &SpatialGrid1D,
) -> Result<Vec<Complex64>> {
    check_len(samples.len(), grid, "input signal")?;
    let n = grid.n();
    let mut buf = samples.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n).process(&mut buf));
    let scale = grid.spacing() / (2.0 * std::f64::consts::PI).sqrt();
    let half = n / 2;
    let out = (0..n)
        .map(|i| {
            // storage index i holds m = i - n/2, which lives at DFT bin
            // (i + n/2) mod n; the twist is (-1)^m.
            let sign = if (i + half).is_multiple_of(2) { 1.0 } else { -1.0 };
            buf[(i + half) % n] * (sign * scale)
        })
        .collect();
    Ok(out)
}

/// Forward transform of real samples. See [`forward_transform_complex`].
pub fn forward_transform(samples: &[f64], grid: &SpatialGrid1D) -> Result<Vec<Complex64>> {
    let complex: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward_transform_complex(&complex, grid)
}

/// Inverse transform back to samples:
/// `f(x_j) = Δk (2π)^{-1/2} Σ_m e^{i k_m x_j} f̂(k_m)`.
///
/// Exact inverse of [`forward_transform_complex`] up to rounding.
pub fn inverse_transform(coefficients: &[Complex64], grid: &SpatialGrid1D) -> Result<Vec<Complex64>> {
    check_len(coefficients.len(), grid, "coefficient vector")?;
    let n = grid.n();
    let half = n / 2;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, &c) in coefficients.iter().enumerate() {
        let sign = if (i + half).is_multiple_of(2) { 1.0 } else { -1.0 };
        buf[(i + half) % n] = c * sign;
    }
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(&mut buf));
    let scale = grid.frequency_spacing() / (2.0 * std::f64::consts::PI).sqrt();
    Ok(buf.into_iter().map(|v| v * scale).collect())
}

/// Inverse transform of coefficients known to represent a real signal;
/// returns the real parts.
pub fn inverse_transform_real(coefficients: &[Complex64], grid: &SpatialGrid1D) -> Result<Vec<f64>> {
    Ok(inverse_transform(coefficients, grid)?
        .into_iter()
        .map(|v| v.re)
        .collect())
}

/// Wall-normal evaluation heights `t_0 < t_1 < … < t_{M-1}` with positive
/// quadrature weights for `∫_0^∞ · dt`.
///
/// The default construction is geometric: `t_0 = 0`,
/// `t_j = t_min · ρ^{j-1}` with `ρ` chosen so `t_{M-1} = T`. A geometric
/// ladder resolves both the boundary layer near `t = 0` and the exponential
/// tail with few levels. Weights are trapezoidal on the (non-uniform) nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightLevels {
    levels: Vec<f64>,
    weights: Vec<f64>,
}

impl HeightLevels {
    /// Geometric levels from 0 to `t_max` with `m` levels total and first
    /// positive level `t_min`.
    pub fn geometric(t_min: f64, t_max: f64, m: usize) -> Result<Self> {
        if m < 5 {
            return Err(Error::InvalidArgument(format!(
                "need at least 5 height levels, got {m}"
            )));
        }
        if !(t_min > 0.0 && t_max > t_min) {
            return Err(Error::InvalidArgument(format!(
                "height levels need 0 < t_min < t_max, got t_min={t_min}, t_max={t_max}"
            )));
        }
        let rho = (t_max / t_min).powf(1.0 / (m - 2) as f64);
        let mut levels = Vec::with_capacity(m);
        levels.push(0.0);
        for j in 1..m - 1 {
            levels.push(t_min * rho.powi(j as i32 - 1));
        }
        levels.push(t_max); // exact top level, not t_min·ρ^{m-2} up to rounding
        Self::from_levels(levels)
    }

    /// Levels tuned to a spatial grid: the slowest spectral decay rate on
    /// the box is `π/L` (the first nonzero mode of `e^{-|k|t}`), so the top
    /// level `T = ln(10^{14})·L/π` pushes that mode below 1e-14.
    pub fn default_for_grid(grid: &SpatialGrid1D, m: usize) -> Result<Self> {
        let t_max = 14.0 * std::f64::consts::LN_10 * grid.half_width() / std::f64::consts::PI;
        Self::geometric(1e-3, t_max, m)
    }

    /// Builds levels from explicit strictly increasing nodes starting at
    /// `t_0 ≥ 0`, with trapezoidal weights.
    pub fn from_levels(levels: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidArgument(
                "need at least 2 height levels".into(),
            ));
        }
        if levels[0] < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "height levels must start at t >= 0, got {}",
                levels[0]
            )));
        }
        if levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "height levels must be strictly increasing".into(),
            ));
        }
        let m = levels.len();
        let mut weights = vec![0.0; m];
        weights[0] = 0.5 * (levels[1] - levels[0]);
        for j in 1..m - 1 {
            weights[j] = 0.5 * (levels[j + 1] - levels[j - 1]);
        }
        weights[m - 1] = 0.5 * (levels[m - 1] - levels[m - 2]);
        Ok(Self { levels, weights })
    }

    /// The ordered heights.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Trapezoidal quadrature weights, one per level.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of levels `M`.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    /// True when there are no levels (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Whether the first level sits exactly on the boundary `t = 0`.
    pub fn starts_at_zero(&self) -> bool {
        self.levels[0] == 0.0
    }

    /// Top level `T`.
    pub fn top(&self) -> f64 {
        *self.levels.last().unwrap()
    }
}

/// Finite-difference weights on arbitrary nodes (Fornberg's algorithm).
///
/// Returns `w` such that `Σ_i w[i]·f(nodes[i]) ≈ f^{(order)}(x0)`, exact for
/// polynomials of degree `nodes.len() - 1`.
///
/// ```
/// use oseen::grids::fd_weights;
/// let nodes = [0.0, 0.1, 0.3, 0.7, 1.5];
/// let w = fd_weights(&nodes, 0.0, 1).unwrap();
/// let deriv: f64 = nodes.iter().zip(&w).map(|(&t, &c)| c * t * t * t).sum();
/// assert!(deriv.abs() < 1e-12); // d/dt t³ at 0
/// ```
pub fn fd_weights(nodes: &[f64], x0: f64, order: usize) -> Result<Vec<f64>> {
    let n = nodes.len();
    if n == 0 || order >= n {
        return Err(Error::InvalidArgument(format!(
            "need more than {order} nodes for derivative order {order}, got {n}"
        )));
    }
    // Fornberg (1988), generation of finite difference formulas on
    // arbitrarily spaced grids.
    let m = order;
    let mut c = vec![vec![0.0f64; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    Ok(c.iter().map(|row| row[m]).collect())
}
