//! Pseudo-spectral and finite-difference second-derivative matrices and the
//! discrete Hamiltonian `-h² D₂ - diag(Y)`.

use crate::error::{Error, Result};
use crate::model::{Grid, Signal};

/// Dense cap for matrix dimension. The experiments this library targets fit
/// comfortably below it.
pub const DENSE_DIM_CAP: usize = 4096;

/// Dense real symmetric matrix, column-major storage.
#[derive(Debug, Clone)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 || n > DENSE_DIM_CAP {
            return Err(Error::Dimension(format!(
                "matrix dimension {n} outside 1..={DENSE_DIM_CAP}"
            )));
        }
        Ok(SymmetricMatrix {
            n,
            data: vec![0.0; n * n],
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.n + row]
    }

    /// Sets both `(row, col)` and `(col, row)`.
    #[inline]
    pub fn set_sym(&mut self, row: usize, col: usize, v: f64) {
        self.data[col * self.n + row] = v;
        self.data[row * self.n + col] = v;
    }

    /// Column-major backing slice.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut out = vec![0.0; self.n];
        for (col, &xc) in x.iter().enumerate() {
            let column = &self.data[col * self.n..(col + 1) * self.n];
            for (o, &a) in out.iter_mut().zip(column) {
                *o += a * xc;
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `self + c * I`, in place.
    pub fn add_diagonal(&mut self, c: f64) {
        for i in 0..self.n {
            self.data[i * self.n + i] += c;
        }
    }
}

/// Periodic pseudo-spectral second-derivative matrix on the grid.
///
/// For period `L = b - a` and `theta = 2 pi / M`, with scale `s = (2 pi / L)²`:
/// diagonal `s (-pi²/(3 theta²) - 1/6)`, off-diagonal
/// `-s (-1)^(j-k) / (2 sin²((j-k) theta / 2))`. Applying it to samples of a
/// resolvable Fourier mode reproduces the analytic second derivative to near
/// machine precision. Requires even `M`.
pub fn fourier_d2(grid: &Grid) -> Result<SymmetricMatrix> {
    let m = grid.len();
    if m % 2 != 0 {
        return Err(Error::Grid(format!("fourier_d2 requires even M, got {m}")));
    }
    let theta = std::f64::consts::TAU / m as f64;
    let scale = (std::f64::consts::TAU / grid.length()).powi(2);
    let pi = std::f64::consts::PI;
    let diag = scale * (-pi * pi / (3.0 * theta * theta) - 1.0 / 6.0);
    // entries depend only on the circulant offset d = j - k (mod M)
    let mut offset = vec![0.0; m];
    offset[0] = diag;
    for d in 1..m {
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        let s = (0.5 * d as f64 * theta).sin();
        offset[d] = scale * (-sign / (2.0 * s * s));
    }
    let mut out = SymmetricMatrix::zeros(m)?;
    for j in 0..m {
        for k in j..m {
            out.set_sym(j, k, offset[k - j]);
        }
    }
    Ok(out)
}

/// Periodic 3-point finite-difference second derivative, `(1, -2, 1)/Δ²`
/// as a circulant symmetric matrix. Kept for accuracy comparisons against
/// the pseudo-spectral matrix.
pub fn finite_difference_d2(grid: &Grid) -> Result<SymmetricMatrix> {
    let m = grid.len();
    let inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    let mut out = SymmetricMatrix::zeros(m)?;
    for j in 0..m {
        out.set_sym(j, j, -2.0 * inv_h2);
        out.set_sym(j, (j + 1) % m, inv_h2);
    }
    Ok(out)
}

/// True when `h` under-resolves the grid: the semi-classical analysis needs
/// `h` not too small compared to the spacing. Surfaced as a warning by
/// callers, never an error.
pub fn h_undersamples(grid: &Grid, h: f64) -> bool {
    h < 2.0 * grid.spacing()
}

/// Discrete Hamiltonian `-h² d2 - diag(Y)`.
pub fn hamiltonian(signal: &Signal, h: f64, d2: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::Param(format!("h must be > 0, got {h}")));
    }
    let m = signal.grid().len();
    if d2.dim() != m {
        return Err(Error::Dimension(format!(
            "d2 is {}x{} but signal has {} samples",
            d2.dim(),
            d2.dim(),
            m
        )));
    }
    let mut out = SymmetricMatrix {
        n: m,
        data: d2.data.iter().map(|v| -h * h * v).collect(),
    };
    for (j, &y) in signal.values().iter().enumerate() {
        out.data[j * m + j] -= y;
    }
    Ok(out)
}
