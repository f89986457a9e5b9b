//! Lebesgue, Slobodeckii, and Sobolev norms on the periodic box.
//!
//! Boundary data live on a [`SpatialGrid1D`]; interior fields live on the
//! grid × [`HeightLevels`] product. The fractional seminorm
//!
//! ```text
//! [f]_{s,p}^p = ∬ |f(x) − f(y)|^p / |x − y|^{1+ps} dx dy,   s ∈ (0,1),
//! ```
//!
//! is evaluated by splitting the double integral into three exactly
//! integrable pieces:
//!
//! * **far** (`|x−y| ≥ 2h`): the plain pair sum over grid nodes with weight
//!   `h²`, halved on the seam `|i−j| = 2` where the near zone takes over;
//! * **near** (`|x−y| < 2h`): first-order Taylor `f(x)−f(y) ≈ f′(x)(x−y)`
//!   makes the singular factor integrable in closed form,
//!   `2δ^{p(1−s)}/(p(1−s)) · h Σ|f′(xᵢ)|^p` with `δ = 2h` and a spectral
//!   derivative;
//! * **tail** (partner outside the box): the data are treated as zero
//!   beyond `±(L + h/2)`, leaving the exact kernel integral
//!   `(2/(ps)) · h Σ|fᵢ|^p [(L+h/2−xᵢ)^{−ps} + (L+h/2+xᵢ)^{−ps}]`.
//!
//! Orders above 1 split off the integer part, which is differentiated
//! spectrally before the fractional seminorm is applied.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::{forward_transform, inverse_transform_real, HeightLevels, SpatialGrid1D};

fn check_exponent(p: f64) -> Result<()> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "integrability exponent must be finite and ≥ 1, got {p}"
        )));
    }
    Ok(())
}

fn check_len(len: usize, expected: usize, what: &str) -> Result<()> {
    if len != expected {
        return Err(Error::GridMismatch(format!(
            "{what}: expected {expected} samples, got {len}"
        )));
    }
    Ok(())
}

/// `L^p` norm on the boundary line: `(h Σ|fᵢ|^p)^{1/p}`.
pub fn lp_norm_line(samples: &[f64], grid: &SpatialGrid1D, p: f64) -> Result<f64> {
    check_exponent(p)?;
    check_len(samples.len(), grid.n(), "line norm")?;
    let sum: f64 = samples.iter().map(|v| v.abs().powf(p)).sum();
    Ok((grid.spacing() * sum).powf(1.0 / p))
}

/// `L^p` norm on the half-plane for a row-major field (levels × nodes),
/// trapezoid weights in the wall-normal direction.
pub fn lp_norm_halfplane(
    values: &[f64],
    grid: &SpatialGrid1D,
    levels: &HeightLevels,
    p: f64,
) -> Result<f64> {
    check_exponent(p)?;
    let n = grid.n();
    check_len(values.len(), n * levels.len(), "half-plane norm")?;
    let mut total = 0.0;
    for (j, &w) in levels.weights().iter().enumerate() {
        let row_sum: f64 = values[j * n..(j + 1) * n]
            .iter()
            .map(|v| v.abs().powf(p))
            .sum();
        total += w * row_sum;
    }
    Ok((grid.spacing() * total).powf(1.0 / p))
}

/// `L^p` norm on the plane for a row-major field over two grids
/// (`grid2` indexes rows, `grid1` columns): `(h₁h₂ Σ|fᵢⱼ|^p)^{1/p}`.
pub fn lp_norm_plane(
    values: &[f64],
    grid1: &SpatialGrid1D,
    grid2: &SpatialGrid1D,
    p: f64,
) -> Result<f64> {
    check_exponent(p)?;
    check_len(values.len(), grid1.n() * grid2.n(), "plane norm")?;
    let sum: f64 = values.iter().map(|v| v.abs().powf(p)).sum();
    Ok((grid1.spacing() * grid2.spacing() * sum).powf(1.0 / p))
}

/// Spectral derivative of integer order on the periodic box.
pub fn spectral_derivative(
    samples: &[f64],
    grid: &SpatialGrid1D,
    order: u32,
) -> Result<Vec<f64>> {
    let mut hat = forward_transform(samples, grid)?;
    for (i, c) in hat.iter_mut().enumerate() {
        *c *= Complex64::new(0.0, grid.frequency(i)).powu(order);
    }
    inverse_transform_real(&hat, grid)
}

/// Splits a positive order into integer and fractional parts, rejecting
/// integers (the seminorm kernel is not integrable there).
fn split_order(s: f64) -> Result<(u32, f64)> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "smoothness order must be positive and finite, got {s}"
        )));
    }
    let m = s.floor();
    let frac = s - m;
    if frac == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "smoothness order {s} is an integer; the fractional seminorm is only \
             defined for non-integer orders"
        )));
    }
    Ok((m as u32, frac))
}

fn fractional_seminorm_core(
    samples: &[f64],
    grid: &SpatialGrid1D,
    s: f64,
    p: f64,
) -> Result<f64> {
    let n = grid.n();
    let h = grid.spacing();
    let half = grid.half_width();

    // Far zone: ordered pairs at node distance ≥ 2, seam weight h²/2.
    let mut far = 0.0;
    for off in 2..n {
        let weight = if off == 2 { 0.5 * h * h } else { h * h };
        let kernel = weight / (off as f64 * h).powf(1.0 + p * s);
        let mut acc = 0.0;
        for i in 0..n - off {
            acc += (samples[i] - samples[i + off]).abs().powf(p);
        }
        // Both orderings of each unordered pair.
        far += 2.0 * kernel * acc;
    }

    // Near zone: |x − y| < δ = 2h via the tangent-line approximation.
    let delta = 2.0 * h;
    let deriv = spectral_derivative(samples, grid, 1)?;
    let near_factor = 2.0 * delta.powf(p * (1.0 - s)) / (p * (1.0 - s));
    let near: f64 = near_factor * h * deriv.iter().map(|v| v.abs().powf(p)).sum::<f64>();

    // Tail: the partner ranges over the complement of the box, where the
    // data are taken to vanish.
    let edge = half + 0.5 * h;
    let mut tail = 0.0;
    for (i, v) in samples.iter().enumerate() {
        let x = grid.node(i);
        tail += v.abs().powf(p) * ((edge - x).powf(-p * s) + (edge + x).powf(-p * s));
    }
    tail *= 2.0 / (p * s) * h;

    Ok((far + near + tail).powf(1.0 / p))
}

/// Slobodeckii seminorm `[f]_{s,p}` for non-integer `s > 0`; the integer
/// part of `s` is taken as a spectral derivative first.
pub fn slobodeckii_seminorm(
    samples: &[f64],
    grid: &SpatialGrid1D,
    s: f64,
    p: f64,
) -> Result<f64> {
    check_exponent(p)?;
    check_len(samples.len(), grid.n(), "fractional seminorm")?;
    let (m, frac) = split_order(s)?;
    if m == 0 {
        fractional_seminorm_core(samples, grid, frac, p)
    } else {
        let d = spectral_derivative(samples, grid, m)?;
        fractional_seminorm_core(&d, grid, frac, p)
    }
}

/// Homogeneous Sobolev seminorm `|f|_{Ẇ^s_p}`: the `L^p` norm for `s = 0`,
/// the `s`-th derivative's `L^p` norm for integer `s`, the Slobodeckii
/// seminorm otherwise.
pub fn homogeneous_seminorm(
    samples: &[f64],
    grid: &SpatialGrid1D,
    s: f64,
    p: f64,
) -> Result<f64> {
    check_exponent(p)?;
    if s < 0.0 || !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "smoothness order must be non-negative and finite, got {s}"
        )));
    }
    if s == s.floor() {
        let d = if s == 0.0 {
            samples.to_vec()
        } else {
            spectral_derivative(samples, grid, s as u32)?
        };
        lp_norm_line(&d, grid, p)
    } else {
        slobodeckii_seminorm(samples, grid, s, p)
    }
}

/// Inhomogeneous Sobolev norm `‖f‖_{W^s_p}`: all derivatives up to the
/// integer part in `L^p`, plus the fractional seminorm when `s` is not an
/// integer, combined as `(Σ ‖·‖^p)^{1/p}`.
pub fn sobolev_norm(samples: &[f64], grid: &SpatialGrid1D, s: f64, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if s < 0.0 || !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "smoothness order must be non-negative and finite, got {s}"
        )));
    }
    let m = s.floor() as u32;
    let mut total = 0.0;
    for j in 0..=m {
        let d = if j == 0 {
            samples.to_vec()
        } else {
            spectral_derivative(samples, grid, j)?
        };
        total += lp_norm_line(&d, grid, p)?.powf(p);
    }
    if s != s.floor() {
        total += slobodeckii_seminorm(samples, grid, s, p)?.powf(p);
    }
    Ok(total.powf(1.0 / p))
}

/// One member of a norm family: smoothness order, integrability exponent,
/// and whether the homogeneous seminorm or the full inhomogeneous norm is
/// meant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub order: f64,
    pub exponent: f64,
    pub homogeneous: bool,
}

impl NormSpec {
    /// Homogeneous `Ẇ^s_p` member.
    pub fn homogeneous(order: f64, exponent: f64) -> Self {
        Self {
            order,
            exponent,
            homogeneous: true,
        }
    }

    /// Inhomogeneous `W^s_p` member.
    pub fn inhomogeneous(order: f64, exponent: f64) -> Self {
        Self {
            order,
            exponent,
            homogeneous: false,
        }
    }

    /// Evaluates this member on a signal.
    pub fn evaluate(&self, samples: &[f64], grid: &SpatialGrid1D) -> Result<f64> {
        if self.homogeneous {
            homogeneous_seminorm(samples, grid, self.order, self.exponent)
        } else {
            sobolev_norm(samples, grid, self.order, self.exponent)
        }
    }
}

/// Norm of an intersection space: the max over the member norms.
/// An empty family is rejected.
pub fn family_norm(samples: &[f64], grid: &SpatialGrid1D, members: &[NormSpec]) -> Result<f64> {
    if members.is_empty() {
        return Err(Error::InvalidArgument(
            "norm family must have at least one member".into(),
        ));
    }
    let mut worst = 0.0f64;
    for m in members {
        worst = worst.max(m.evaluate(samples, grid)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn gauss_on(n: usize) -> (SpatialGrid1D, Vec<f64>) {
        let grid = SpatialGrid1D::new(20.0, n).unwrap();
        (grid, grid.sample(|x| (-x * x).exp()))
    }

    #[test]
    fn gaussian_l2_matches_the_closed_form() {
        let (grid, f) = gauss_on(256);
        // ‖e^{−x²}‖₂ = (π/2)^{1/4}.
        let exact = (PI / 2.0).powf(0.25);
        assert_relative_eq!(
            lp_norm_line(&f, &grid, 2.0).unwrap(),
            exact,
            max_relative = 1e-12
        );
    }

    #[test]
    fn gaussian_l3_matches_the_closed_form() {
        let (grid, f) = gauss_on(256);
        // ‖e^{−x²}‖₃ = (π/3)^{1/6}.
        let exact = (PI / 3.0).powf(1.0 / 6.0);
        assert_relative_eq!(
            lp_norm_line(&f, &grid, 3.0).unwrap(),
            exact,
            max_relative = 1e-12
        );
    }

    #[test]
    fn halfplane_norm_integrates_a_product_profile() {
        let grid = SpatialGrid1D::new(20.0, 128).unwrap();
        let levels = HeightLevels::geometric(1e-3, 60.0, 200).unwrap();
        let n = grid.n();
        let mut vals = vec![0.0; n * levels.len()];
        for (j, &t) in levels.levels().iter().enumerate() {
            for i in 0..n {
                let x = grid.node(i);
                vals[j * n + i] = (-x * x).exp() * (-t).exp();
            }
        }
        // ‖e^{−x²}e^{−t}‖²_{L²} = √(π/2) · 1/2.
        let exact = ((PI / 2.0).sqrt() * 0.5).sqrt();
        assert_relative_eq!(
            lp_norm_halfplane(&vals, &grid, &levels, 2.0).unwrap(),
            exact,
            max_relative = 1e-3
        );
    }

    #[test]
    fn plane_norm_integrates_a_separable_gaussian() {
        let g1 = SpatialGrid1D::new(15.0, 128).unwrap();
        let g2 = SpatialGrid1D::new(10.0, 64).unwrap();
        let mut vals = vec![0.0; g1.n() * g2.n()];
        for j in 0..g2.n() {
            for i in 0..g1.n() {
                vals[j * g1.n() + i] = (-g1.node(i).powi(2) - g2.node(j).powi(2)).exp();
            }
        }
        // ‖e^{−|x|²}‖_{L²(ℝ²)} = √(π/2).
        assert_relative_eq!(
            lp_norm_plane(&vals, &g1, &g2, 2.0).unwrap(),
            (PI / 2.0).sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn gaussian_half_order_seminorm_matches_the_fourier_value() {
        // [e^{−x²}]_{1/2,2} = √(2π), via [f]²_{s,2} = 2π∫|k||f̂|²dk.
        let (grid, f) = gauss_on(512);
        let got = slobodeckii_seminorm(&f, &grid, 0.5, 2.0).unwrap();
        let exact = (2.0 * PI).sqrt();
        assert_relative_eq!(got, exact, max_relative = 1e-4);
        // Frozen regression value for this discretization.
        assert_relative_eq!(got, 2.5067087666, max_relative = 1e-8);
    }

    #[test]
    fn seminorm_above_order_one_differentiates_first() {
        // [e^{−x²}]_{3/2,2} = [(e^{−x²})′]_{1/2,2} = 2√π.
        let (grid, f) = gauss_on(1024);
        let got = slobodeckii_seminorm(&f, &grid, 1.5, 2.0).unwrap();
        assert_relative_eq!(got, 2.0 * PI.sqrt(), max_relative = 1e-3);
    }

    #[test]
    fn seminorm_obeys_the_scaling_law() {
        // [f(λ·)]_{s,p} = λ^{s−1/p}[f]_{s,p} on a box large enough for both.
        let grid = SpatialGrid1D::new(20.0, 1024).unwrap();
        let f: Vec<f64> = grid.sample(|x| (-x * x).exp());
        let fl: Vec<f64> = grid.sample(|x| (-4.0 * x * x).exp());
        for (s, p) in [(0.5, 2.0), (0.7, 3.0), (0.25, 2.0)] {
            let base = slobodeckii_seminorm(&f, &grid, s, p).unwrap();
            let scaled = slobodeckii_seminorm(&fl, &grid, s, p).unwrap();
            let predicted = 2.0f64.powf(s - 1.0 / p) * base;
            assert_relative_eq!(scaled, predicted, max_relative = 1e-2);
        }
    }

    #[test]
    fn seminorm_is_absolutely_homogeneous_and_subadditive() {
        let grid = SpatialGrid1D::new(20.0, 256).unwrap();
        let f: Vec<f64> = grid.sample(|x| (-x * x).exp());
        let g: Vec<f64> = grid.sample(|x| x * (-x * x / 2.0).exp());
        let s = 0.6;
        let p = 2.5;
        let nf = slobodeckii_seminorm(&f, &grid, s, p).unwrap();
        let scaled: Vec<f64> = f.iter().map(|v| -3.5 * v).collect();
        assert_relative_eq!(
            slobodeckii_seminorm(&scaled, &grid, s, p).unwrap(),
            3.5 * nf,
            max_relative = 1e-12
        );
        let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let ng = slobodeckii_seminorm(&g, &grid, s, p).unwrap();
        let nsum = slobodeckii_seminorm(&sum, &grid, s, p).unwrap();
        assert!(nsum <= nf + ng + 1e-8, "{nsum} vs {}", nf + ng);
    }

    #[test]
    fn seminorm_is_stable_under_mesh_refinement() {
        let coarse = SpatialGrid1D::new(20.0, 256).unwrap();
        let fine = SpatialGrid1D::new(20.0, 512).unwrap();
        for (s, p) in [(0.5, 2.0), (2.0 / 3.0, 3.0)] {
            let a = slobodeckii_seminorm(&coarse.sample(|x| (-x * x).exp()), &coarse, s, p)
                .unwrap();
            let b = slobodeckii_seminorm(&fine.sample(|x| (-x * x).exp()), &fine, s, p).unwrap();
            assert!(
                (a - b).abs() / b < 1e-2,
                "refinement moved [f]_{{{s},{p}}} from {a} to {b}"
            );
        }
    }

    #[test]
    fn integer_orders_and_bad_exponents_are_rejected() {
        let (grid, f) = gauss_on(64);
        assert!(matches!(
            slobodeckii_seminorm(&f, &grid, 1.0, 2.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            slobodeckii_seminorm(&f, &grid, 0.5, 0.8),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            lp_norm_line(&f, &grid, f64::NAN),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            family_norm(&f, &grid, &[]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn integer_homogeneous_seminorm_is_the_derivative_norm() {
        let (grid, f) = gauss_on(512);
        // |e^{−x²}|_{Ẇ¹₂} = ‖−2xe^{−x²}‖₂ = (π/2)^{1/4}.
        let got = homogeneous_seminorm(&f, &grid, 1.0, 2.0).unwrap();
        assert_relative_eq!(got, (PI / 2.0).powf(0.25), max_relative = 1e-10);
        // s = 0 degenerates to the plain L^p norm.
        assert_relative_eq!(
            homogeneous_seminorm(&f, &grid, 0.0, 2.0).unwrap(),
            lp_norm_line(&f, &grid, 2.0).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn sobolev_norm_combines_the_pieces() {
        let (grid, f) = gauss_on(512);
        let s = 1.5;
        let p = 2.0;
        let full = sobolev_norm(&f, &grid, s, p).unwrap();
        let l2 = lp_norm_line(&f, &grid, p).unwrap();
        let d1 = spectral_derivative(&f, &grid, 1).unwrap();
        let dl2 = lp_norm_line(&d1, &grid, p).unwrap();
        let semi = slobodeckii_seminorm(&f, &grid, s, p).unwrap();
        let expected = (l2.powf(p) + dl2.powf(p) + semi.powf(p)).powf(1.0 / p);
        assert_relative_eq!(full, expected, max_relative = 1e-12);
        assert!(full >= semi && full >= l2);
    }

    #[test]
    fn family_norm_takes_the_worst_member() {
        let (grid, f) = gauss_on(512);
        let m1 = NormSpec::homogeneous(0.5, 2.0);
        let m2 = NormSpec::homogeneous(1.5, 2.0);
        let fam = family_norm(&f, &grid, &[m1, m2]).unwrap();
        let v1 = m1.evaluate(&f, &grid).unwrap();
        let v2 = m2.evaluate(&f, &grid).unwrap();
        assert_eq!(fam, v1.max(v2));
        assert!(v2 > v1, "higher order should dominate for this signal");
    }
}
