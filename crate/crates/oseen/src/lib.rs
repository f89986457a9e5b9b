//! Semi-analytic spectral solver for the planar Oseen system with slip
//! boundary conditions, plus the numerical machinery to verify the solution
//! formulas, kernel identities, multiplier bounds, and norm estimates that
//! back them.
//!
//! The flow problem is the stationary linearized system
//!
//! ```text
//! a₁ u,₁ + a₂ u,₂ − Δu + ∇p = 0,   div u = 0   in the half-plane x₂ > 0,
//! ```
//!
//! with a Navier (slip) boundary law on x₂ = 0: prescribed tangential
//! stress-plus-friction `−(∂₂u₁ + ∂₁u₂) + f·u₁ = b` and normal velocity
//! `u₂ = −d`. After a Fourier transform in the tangential variable each
//! frequency decouples into an ODE in the wall-normal coordinate whose
//! decaying solutions are two explicit exponentials; the solver assembles
//! them, and the analysis layer checks the identities and estimates that
//! make the construction rigorous.
//!
//! Module map:
//! - [`grids`]: the single project-wide Fourier convention, height levels,
//!   finite-difference weights.
//! - [`symbols`]: eigenvalues, boundary coefficients, slip→Dirichlet
//!   reduction — all closed-form functions of the frequency.
//! - [`halfplane`]: the slip and Dirichlet solvers and their residuals.
//! - [`wholeplane`]: whole-plane scalar and full Oseen solvers, the Duhamel
//!   boundary trace, and the fundamental solution.
//! - [`norms`]: Lp, Sobolev, and Slobodeckii norms with singular-integral
//!   quadrature.
//! - [`analysis`]: Marcinkiewicz/Lizorkin multiplier bounds, kernel
//!   identities, convolution checks.
//! - [`experiments`]: estimate sweeps, asymptotics fits, wake profiles,
//!   trace checks over a fixed seeded corpus.
//! - [`config`] / [`report`]: CLI plumbing — flat key=value configs and
//!   deterministic CSV/JSON reports.

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`: the
// negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod error;
pub mod experiments;
pub mod grids;
pub mod halfplane;
pub mod norms;
pub mod report;
pub mod symbols;
pub mod wholeplane;

pub use error::{Error, Result};
