//! Classical constants, the reconstruction formulas and Riesz means.
//!
//! The reconstruction of the signal at level `lambda` and exponent `gamma` is
//!
//! ```text
//! y_rec(x) = -lambda + ( (h / L_gamma) * sum_{lambda_n < lambda}
//!                        (lambda - lambda_n)^gamma  psi_n(x)^2 )^(2/(2 gamma + 1))
//! ```
//!
//! with `L_gamma = Gamma(gamma+1) / (2 sqrt(pi) Gamma(gamma+3/2))` the
//! classical Weyl constant. The sum uses the strict cutoff `lambda_n <
//! lambda`; the Riesz mean uses the non-strict one. Both are guarded by the
//! decomposition's tie epsilon so floating-point ties behave
//! deterministically.

use crate::eig::SpectralDecomposition;
use crate::error::{Error, Result};
use crate::model::{Grid, Signal, WindowK};

/// Classical Weyl constant `L_gamma = Gamma(gamma+1)/(2 sqrt(pi) Gamma(gamma+3/2))`.
pub fn classical_constant(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::Param(format!("gamma must be >= 0, got {gamma}")));
    }
    let log = libm::lgamma(gamma + 1.0) - libm::lgamma(gamma + 1.5);
    Ok(log.exp() / (2.0 * std::f64::consts::PI.sqrt()))
}

/// `c_gamma = integral of (1 - eta²)_+^gamma = 2 pi L_gamma`.
pub fn c_gamma(gamma: f64) -> Result<f64> {
    Ok(std::f64::consts::TAU * classical_constant(gamma)?)
}

/// Parameters of one reconstruction run: Planck-like parameter `h`, Riesz
/// exponent `gamma`, energy level `lambda` and the analysis window `K`.
#[derive(Debug, Clone)]
pub struct ReconstructionParams {
    pub h: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub window: WindowK,
}

impl ReconstructionParams {
    pub fn new(h: f64, gamma: f64, lambda: f64, window: WindowK) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::Param(format!("h must be > 0, got {h}")));
        }
        if !(gamma >= 0.0) {
            return Err(Error::Param(format!("gamma must be >= 0, got {gamma}")));
        }
        if !lambda.is_finite() {
            return Err(Error::Param("lambda must be finite".into()));
        }
        Ok(ReconstructionParams {
            h,
            gamma,
            lambda,
            window,
        })
    }
}

/// Reconstructed signal values on the full grid, with the parameters and the
/// number of eigenvalue terms that entered the sum.
#[derive(Debug, Clone)]
pub struct ReconstructedSignal {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub params: ReconstructionParams,
    pub terms_used: usize,
}

/// Evaluates the reconstruction formula on every grid point. The window in
/// `params` only marks where the asymptotics are guaranteed; error reporting
/// restricts to it, the values outside are still produced.
pub fn reconstruct(
    decomp: &SpectralDecomposition,
    params: &ReconstructionParams,
) -> Result<ReconstructedSignal> {
    if (decomp.h() - params.h).abs() > 0.0 {
        return Err(Error::Param(format!(
            "decomposition h = {} does not match params h = {}",
            decomp.h(),
            params.h
        )));
    }
    let m = decomp.grid().len();
    let constant = classical_constant(params.gamma)?;
    let factor = params.h / constant;
    let exponent = 2.0 / (2.0 * params.gamma + 1.0);
    let included = decomp.below(params.lambda);
    let terms_used = included.len();
    let mut inner = vec![0.0f64; m];
    for n in included {
        let weight = factor * (params.lambda - decomp.eigenvalues()[n]).powf(params.gamma);
        for (acc, &psi) in inner.iter_mut().zip(decomp.eigenfunction(n)) {
            *acc += weight * psi * psi;
        }
    }
    let values = inner
        .iter()
        .map(|&s| -params.lambda + s.powf(exponent))
        .collect();
    Ok(ReconstructedSignal {
        grid: decomp.grid().clone(),
        values,
        params: params.clone(),
        terms_used,
    })
}

/// The `lambda = 0` formula `y_h(x, 0) = 4 h sum_{lambda_n < 0}
/// (-lambda_n)^(1/2) psi_n(x)²`, the special case used by earlier
/// semi-classical signal-analysis work.
pub fn reconstruct_zero(decomp: &SpectralDecomposition) -> ReconstructedSignal {
    let m = decomp.grid().len();
    let mut values = vec![0.0f64; m];
    let included = decomp.below(0.0);
    let terms_used = included.len();
    for n in included {
        let weight = 4.0 * decomp.h() * (-decomp.eigenvalues()[n]).sqrt();
        for (acc, &psi) in values.iter_mut().zip(decomp.eigenfunction(n)) {
            *acc += weight * psi * psi;
        }
    }
    ReconstructedSignal {
        grid: decomp.grid().clone(),
        values,
        params: ReconstructionParams {
            h: decomp.h(),
            gamma: 0.5,
            lambda: 0.0,
            window: WindowK::full(m),
        },
        terms_used,
    }
}

/// Riesz mean `S_gamma(h, lambda) = sum_{lambda_n <= lambda}
/// (lambda - lambda_n)^gamma`; `gamma = 0` counts the eigenvalues.
pub fn riesz_mean(decomp: &SpectralDecomposition, lambda: f64, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::Param(format!("gamma must be >= 0, got {gamma}")));
    }
    Ok(decomp
        .at_or_below(lambda)
        .map(|n| (lambda - decomp.eigenvalues()[n]).max(0.0).powf(gamma))
        .sum())
}

/// Classical phase-space integral `L_gamma * integral (lambda + y)_+^(gamma+1/2) dx`
/// approximated by the uniform Riemann sum on the periodic grid.
pub fn classical_riesz_integral(signal: &Signal, lambda: f64, gamma: f64) -> Result<f64> {
    let constant = classical_constant(gamma)?;
    let spacing = signal.grid().spacing();
    let sum: f64 = signal
        .values()
        .iter()
        .map(|&y| (lambda + y).max(0.0).powf(gamma + 0.5))
        .sum();
    Ok(constant * sum * spacing)
}

/// Diagonal Riesz density `e_h^gamma(lambda, x_j, x_j) = sum_{lambda_n <= lambda}
/// (lambda - lambda_n)^gamma psi_n(x_j)²`.
pub fn local_riesz_density(
    decomp: &SpectralDecomposition,
    lambda: f64,
    gamma: f64,
    j: usize,
) -> Result<f64> {
    if j >= decomp.grid().len() {
        return Err(Error::Param(format!(
            "grid index {j} out of range for M = {}",
            decomp.grid().len()
        )));
    }
    if !(gamma >= 0.0) {
        return Err(Error::Param(format!("gamma must be >= 0, got {gamma}")));
    }
    Ok(decomp
        .at_or_below(lambda)
        .map(|n| {
            let psi = decomp.eigenfunction(n)[j];
            (lambda - decomp.eigenvalues()[n]).max(0.0).powf(gamma) * psi * psi
        })
        .sum())
}
