//! Analytic oracles, admissibility diagnostics, error metrics and
//! convergence-order estimation.

use crate::eig::SpectralDecomposition;
use crate::error::{Error, Result};
use crate::model::{Signal, WindowK};
use crate::reconstruct::{classical_riesz_integral, ReconstructedSignal};

/// Whole-line bound states of `-h² d²/dx² - sech²(x)`:
/// `lambda_n = -h² (nu - n)²` for `n = 0..ceil(nu)` with
/// `nu = (-1 + sqrt(1 + 4/h²)) / 2`. Returned ascending (deepest first).
pub fn poschl_teller_spectrum(h: f64) -> Vec<f64> {
    assert!(h > 0.0);
    let nu = (-1.0 + (1.0 + 4.0 / (h * h)).sqrt()) / 2.0;
    let count = nu.ceil() as usize;
    (0..count)
        .map(|n| {
            let k = nu - n as f64;
            -h * h * k * k
        })
        .collect()
}

/// Outcome of the admissibility check for a `(K, lambda)` pair: the
/// reconstruction theorem needs lambda below the boundary values of `-y`,
/// `y > -lambda` on `K`, and `-lambda` a noncritical value of `y`.
/// Diagnostics only, never a gate: the `lambda = 0` runs of interest violate
/// the first condition on purpose.
#[derive(Debug, Clone)]
pub struct Admissibility {
    /// `lambda < min(-y(a), -y(b))`, sampled at the interval edges.
    pub boundary_ok: bool,
    /// `y_j > -lambda` for every index in the window.
    pub window_ok: bool,
    /// At every sign change of `y + lambda`, the local slope of `y` exceeds
    /// the threshold (finite-difference proxy for noncriticality).
    pub noncritical_ok: bool,
    /// Slope threshold used by the noncriticality proxy.
    pub slope_threshold: f64,
    /// Smallest |y'| seen at a crossing, +inf when there is none.
    pub worst_crossing_slope: f64,
}

impl Admissibility {
    pub fn all_ok(&self) -> bool {
        self.boundary_ok && self.window_ok && self.noncritical_ok
    }
}

/// Checks the three admissibility conditions on sampled data.
pub fn check_admissible(signal: &Signal, lambda: f64, window: &WindowK) -> Admissibility {
    let values = signal.values();
    let m = values.len();
    let edge_min = (-values[0]).min(-values[m - 1]);
    let boundary_ok = lambda < edge_min;

    let window_ok = window.indices().all(|j| values[j] > -lambda);

    let grid = signal.grid();
    let slope_threshold = 0.05 * signal.range() / grid.length();
    let spacing = grid.spacing();
    let mut worst_crossing_slope = f64::INFINITY;
    for j in 0..m {
        let next = (j + 1) % m;
        let a = values[j] + lambda;
        let b = values[next] + lambda;
        if a == 0.0 || a * b < 0.0 {
            let slope = ((values[next] - values[j]) / spacing).abs();
            worst_crossing_slope = worst_crossing_slope.min(slope);
        }
    }
    let noncritical_ok = worst_crossing_slope > slope_threshold;

    Admissibility {
        boundary_ok,
        window_ok,
        noncritical_ok,
        slope_threshold,
        worst_crossing_slope,
    }
}

/// Pointwise and aggregate relative reconstruction error over a window.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    /// `|y_rec - y| / max(|y|, floor)` per window index, in window order.
    pub pointwise_rel: Vec<f64>,
    pub sup_rel: f64,
    pub rms_rel: f64,
    pub terms_used: usize,
    pub h: f64,
    pub gamma: f64,
    pub lambda: f64,
}

/// Relative error of a reconstruction against the known signal, restricted
/// to the window. The per-point normalization is `max(|y|, floor)` with
/// `floor = 1e-12 max|y|`, so tiny true values cannot blow the metric up.
pub fn relative_error(
    recon: &ReconstructedSignal,
    truth: &Signal,
    window: &WindowK,
) -> Result<ErrorReport> {
    if recon.grid != *truth.grid() {
        return Err(Error::Dimension(
            "reconstruction and truth are on different grids".into(),
        ));
    }
    let max_abs = truth.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let floor = 1e-12 * max_abs;
    let pointwise_rel: Vec<f64> = window
        .indices()
        .map(|j| {
            let t = truth.values()[j];
            (recon.values[j] - t).abs() / t.abs().max(floor)
        })
        .collect();
    let sup_rel = pointwise_rel.iter().cloned().fold(0.0, f64::max);
    let rms_rel = (pointwise_rel.iter().map(|e| e * e).sum::<f64>()
        / pointwise_rel.len() as f64)
        .sqrt();
    Ok(ErrorReport {
        pointwise_rel,
        sup_rel,
        rms_rel,
        terms_used: recon.terms_used,
        h: recon.params.h,
        gamma: recon.params.gamma,
        lambda: recon.params.lambda,
    })
}

/// Least-squares fit of `log error` against `log h`.
#[derive(Debug, Clone)]
pub struct ConvergenceFit {
    pub h_values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Fitted slope: the empirical convergence order.
    pub order: f64,
    pub r_squared: f64,
}

/// Fits the empirical convergence order from at least three strictly
/// decreasing `h` values and the matching positive errors.
pub fn convergence_order(h_values: &[f64], errors: &[f64]) -> Result<ConvergenceFit> {
    if h_values.len() < 3 || h_values.len() != errors.len() {
        return Err(Error::Param(format!(
            "need >= 3 matching (h, error) pairs, got {} and {}",
            h_values.len(),
            errors.len()
        )));
    }
    if !h_values.windows(2).all(|w| w[0] > w[1] && w[1] > 0.0) {
        return Err(Error::Param("h values must be strictly decreasing and positive".into()));
    }
    if let Some(e) = errors.iter().find(|&&e| !(e > 0.0)) {
        return Err(Error::Param(format!("errors must be positive, got {e}")));
    }
    let n = h_values.len() as f64;
    let xs: Vec<f64> = h_values.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let order = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok(ConvergenceFit {
        h_values: h_values.to_vec(),
        errors: errors.to_vec(),
        order,
        r_squared,
    })
}

/// `h N_{h,lambda} - L_0 * integral (lambda + y)_+^(1/2) dx`, the Weyl-law
/// counting residual at level lambda.
pub fn weyl_count_residual(
    decomp: &SpectralDecomposition,
    signal: &Signal,
    lambda: f64,
) -> Result<f64> {
    let counted = decomp.h() * decomp.count_below(lambda) as f64;
    Ok(counted - classical_riesz_integral(signal, lambda, 0.0)?)
}
