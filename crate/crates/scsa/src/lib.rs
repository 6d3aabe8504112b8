//! Semi-classical spectral analysis of 1-D periodic signals.
//!
//! A signal `y` is interpreted as the potential of the Schrödinger operator
//! `-h² d²/dx² - y(x)` with periodic boundary conditions. Its negative
//! eigenvalues and eigenfunctions are then combined into Riesz means and a
//! reconstruction of `y`, which converges to the signal as `h -> 0`.
//!
//! The pipeline is: build a [`model::Grid`] and [`model::Signal`], discretize
//! the operator with a pseudo-spectral Fourier second-derivative matrix
//! ([`discretize`]), diagonalize it ([`eig`]), and evaluate the reconstruction
//! and Riesz-mean formulas ([`reconstruct`]). [`validate`] holds the analytic
//! Pöschl–Teller oracle, admissibility diagnostics, error metrics and
//! convergence-order fits used to check the semi-classical asymptotics.

pub mod cli;
pub mod discretize;
pub mod eig;
pub mod error;
pub mod model;
pub mod reconstruct;
pub mod validate;

pub use error::{Error, Result};
