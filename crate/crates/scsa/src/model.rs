//! Grids, sampled signals and analysis windows.
//!
//! The grid is periodic: `M` points with spacing `(b - a) / M`, so
//! `x_M + spacing` identifies with `a`. The right endpoint `b` itself is not
//! a sample point; including both endpoints would double-count the seam and
//! break the exactness of Fourier differentiation.

use crate::error::{Error, Result};

/// Uniform periodic grid on `[a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    m: usize,
    spacing: f64,
}

impl Grid {
    /// `M` must be even (required by the pseudo-spectral second-derivative
    /// formula) and at least 8.
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Grid(format!("need a < b, got a = {a}, b = {b}")));
        }
        if m < 8 {
            return Err(Error::Grid(format!("M must be >= 8, got {m}")));
        }
        if m % 2 != 0 {
            return Err(Error::Grid(format!("M must be even, got {m}")));
        }
        let spacing = (b - a) / m as f64;
        Ok(Grid { a, b, m, spacing })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of sample points.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Period of the grid, `b - a`.
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Sample point `x_j = a + j * spacing` (0-based).
    pub fn point(&self, j: usize) -> f64 {
        debug_assert!(j < self.m);
        self.a + j as f64 * self.spacing
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(|j| self.point(j))
    }
}

/// Real-valued samples on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: Grid,
    values: Vec<f64>,
}

impl Signal {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Signal(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Signal(format!("non-finite sample value {v}")));
        }
        Ok(Signal { grid, values })
    }

    /// Sample a function at the grid points.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Signal::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn range(&self) -> f64 {
        self.max() - self.min()
    }

    /// `signal + c`, same grid.
    pub fn shifted(&self, c: f64) -> Signal {
        Signal {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }
}

/// Contiguous (modulo-M) index range into a grid, the analysis window `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowK {
    start: usize,
    len: usize,
    m: usize,
    /// Set when the qualifying index set was not contiguous and this window
    /// is only its largest contiguous component.
    fragmented: bool,
}

impl WindowK {
    pub fn new(start: usize, len: usize, m: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Param("window must be non-empty".into()));
        }
        if start >= m || len > m {
            return Err(Error::Param(format!(
                "window {start}+{len} out of range for M = {m}"
            )));
        }
        Ok(WindowK {
            start,
            len,
            m,
            fragmented: false,
        })
    }

    /// Whole grid as a window.
    pub fn full(m: usize) -> Self {
        WindowK {
            start: 0,
            len: m,
            m,
            fragmented: false,
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn fragmented(&self) -> bool {
        self.fragmented
    }

    /// Grid indices covered, in order, wrapping modulo M.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).map(move |k| (self.start + k) % self.m)
    }

    pub fn contains(&self, j: usize) -> bool {
        let rel = (j + self.m - self.start) % self.m;
        rel < self.len
    }
}

/// `sech²(x - center)` sampled on the grid.
pub fn sech2_signal(grid: &Grid, center: f64) -> Result<Signal> {
    if !(center > grid.a() && center < grid.b()) {
        return Err(Error::Param(format!(
            "center {center} outside ({}, {})",
            grid.a(),
            grid.b()
        )));
    }
    Signal::from_fn(grid.clone(), |x| {
        let s = 1.0 / (x - center).cosh();
        s * s
    })
}

/// Smooth positive pulse mimicking one arterial-pressure beat: a main
/// systolic bump, a smaller dicrotic bump at `notch_position` (fraction of
/// the period), rescaled so the sampled max is `systolic` and the sampled
/// min is `diastolic`. Built from periodic bumps, so it is C^infinity across
/// the seam.
pub fn synthetic_beat(
    grid: &Grid,
    systolic: f64,
    diastolic: f64,
    notch_position: f64,
) -> Result<Signal> {
    if !(systolic > diastolic && diastolic > 0.0) {
        return Err(Error::Param(format!(
            "need systolic > diastolic > 0, got {systolic}, {diastolic}"
        )));
    }
    if !(notch_position > 0.0 && notch_position < 1.0) {
        return Err(Error::Param(format!(
            "notch_position must be in (0, 1), got {notch_position}"
        )));
    }
    let tau = std::f64::consts::TAU;
    // von Mises style bumps: exp(kappa (cos(2 pi (t - t0)) - 1))
    let bump = |t: f64, t0: f64, kappa: f64| (kappa * ((tau * (t - t0)).cos() - 1.0)).exp();
    let shape = |t: f64| bump(t, 0.25, 8.0) + 0.3 * bump(t, notch_position, 60.0);
    let period = grid.length();
    let a = grid.a();
    let raw: Vec<f64> = grid.points().map(|x| shape((x - a) / period)).collect();
    let lo = raw.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let values = raw
        .iter()
        .map(|v| diastolic + (systolic - diastolic) * (v - lo) / (hi - lo))
        .collect();
    Signal::new(grid.clone(), values)
}

/// Default window margin: 2% of the signal range.
pub fn default_margin(signal: &Signal) -> f64 {
    0.02 * signal.range()
}

/// Largest contiguous (modulo-M) run of indices with `y_j > -lambda + margin`,
/// i.e. the sampled version of the classically allowed region `y(K) ⊂
/// ]-lambda, +inf[` with a safety margin.
pub fn window_from_lambda(signal: &Signal, lambda: f64, margin: f64) -> Result<WindowK> {
    if !(margin > 0.0) {
        return Err(Error::Param(format!("margin must be > 0, got {margin}")));
    }
    let m = signal.grid().len();
    let threshold = -lambda + margin;
    let mask: Vec<bool> = signal.values().iter().map(|&y| y > threshold).collect();
    let qualifying = mask.iter().filter(|&&q| q).count();
    if qualifying == 0 {
        return Err(Error::LambdaTooLow);
    }
    if qualifying == m {
        return Ok(WindowK::full(m));
    }
    // Scan runs circularly, starting just after some excluded index.
    let anchor = mask.iter().position(|&q| !q).unwrap();
    let mut best_start = 0;
    let mut best_len = 0;
    let mut run_start = None;
    let mut run_len = 0;
    for k in 1..=m {
        let j = (anchor + k) % m;
        if mask[j] {
            if run_start.is_none() {
                run_start = Some(j);
                run_len = 0;
            }
            run_len += 1;
            if run_len > best_len {
                best_len = run_len;
                best_start = run_start.unwrap();
            }
        } else {
            run_start = None;
        }
    }
    let mut window = WindowK::new(best_start, best_len, m)?;
    window.fragmented = best_len < qualifying;
    Ok(window)
}
