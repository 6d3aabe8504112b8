//! Full symmetric eigendecomposition and the spectral decomposition of the
//! discrete Hamiltonian.
//!
//! The solver is the classic Householder reduction to tridiagonal form
//! followed by the implicit-shift QL iteration, derived from the Algol
//! procedures tred2/tql2 (Bowdler, Martin, Reinsch, Wilkinson) and their
//! EISPACK translations. Dense O(M³) is plenty at the dimensions used here.

use crate::discretize::{self, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::model::{Grid, Signal};

const MAX_QL_ITER: usize = 100;
const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenvalues (ascending) and Euclidean-orthonormal eigenvectors.
/// `vectors` is column-major; column `i` is the eigenvector of `values[i]`.
pub struct Eigen {
    pub n: usize,
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

impl Eigen {
    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.n..(i + 1) * self.n]
    }
}

/// Full eigendecomposition of a symmetric matrix.
pub fn eigendecompose(matrix: &SymmetricMatrix) -> Result<Eigen> {
    let asym = matrix.max_asymmetry();
    let scale = matrix.max_abs().max(1.0);
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(asym));
    }
    let n = matrix.dim();
    let mut v = matrix.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut v, &mut d, &mut e)?;
    sort_ascending(n, &mut v, &mut d);
    Ok(Eigen {
        n,
        values: d,
        vectors: v,
    })
}

// v is column-major: v[col * n + row].
fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    for j in 0..n {
        d[j] = v[j * n + (n - 1)];
    }

    // Householder reduction to tridiagonal form.
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[j * n + (i - 1)];
                v[j * n + i] = 0.0;
                v[i * n + j] = 0.0;
            }
        } else {
            // Generate Householder vector.
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }

            // Apply similarity transformation to remaining columns.
            for j in 0..i {
                let f = d[j];
                v[i * n + j] = f;
                let mut g = e[j] + v[j * n + j] * f;
                let col_j = j * n;
                for k in (j + 1)..i {
                    g += v[col_j + k] * d[k];
                    e[k] += v[col_j + k] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                let col_j = j * n;
                for k in j..i {
                    v[col_j + k] -= f * e[k] + g * d[k];
                }
                d[j] = v[j * n + (i - 1)];
                v[j * n + i] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate transformations.
    for i in 0..(n - 1) {
        v[i * n + (n - 1)] = v[i * n + i];
        v[i * n + i] = 1.0;
        let h = d[i + 1];
        let col_next = (i + 1) * n;
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[col_next + k] / h;
            }
            for j in 0..=i {
                let col_j = j * n;
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[col_next + k] * v[col_j + k];
                }
                for k in 0..=i {
                    v[col_j + k] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[col_next + k] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[j * n + (n - 1)];
        v[j * n + (n - 1)] = 0.0;
    }
    v[(n - 1) * n + (n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL iteration on the tridiagonal form, eigenvectors
// accumulated into v (column-major).
fn tql2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = 2.0f64.powi(-52);
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITER {
                    return Err(Error::NoConvergence(l));
                }

                // Compute implicit shift.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                // Implicit QL transformation.
                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    // Rotate the eigenvector columns i and i+1.
                    let (col_i, col_next) = {
                        let (a, b) = v.split_at_mut((i + 1) * n);
                        (&mut a[i * n..], &mut b[..n])
                    };
                    for (vi, vnext) in col_i.iter_mut().zip(col_next.iter_mut()) {
                        let h = *vnext;
                        *vnext = s * *vi + c * h;
                        *vi = c * *vi - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn sort_ascending(n: usize, v: &mut [f64], d: &mut [f64]) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let sorted_d: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut sorted_v = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        sorted_v[dst * n..(dst + 1) * n].copy_from_slice(&v[src * n..(src + 1) * n]);
    }
    d.copy_from_slice(&sorted_d);
    v.copy_from_slice(&sorted_v);
}

/// Spectrum and L²-normalized eigenfunctions of the discrete Hamiltonian
/// `-h² D₂ - diag(Y)` for one value of `h`.
pub struct SpectralDecomposition {
    h: f64,
    grid: Grid,
    eigenvalues: Vec<f64>,
    /// Column-major; column `i` holds the samples of the i-th eigenfunction,
    /// scaled by 1/sqrt(spacing) so that the discrete L² norm is 1.
    eigenfunctions: Vec<f64>,
    n_h: usize,
    tie_epsilon: f64,
}

impl SpectralDecomposition {
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Samples of eigenfunction `i` (L²-normalized).
    pub fn eigenfunction(&self, i: usize) -> &[f64] {
        let m = self.grid.len();
        &self.eigenfunctions[i * m..(i + 1) * m]
    }

    /// Number of strictly negative eigenvalues, `N_h`.
    pub fn negative_count(&self) -> usize {
        self.n_h
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .first()
            .unwrap()
            .abs()
            .max(self.eigenvalues.last().unwrap().abs())
    }

    /// Tolerance guarding cutoff ties; eigenvalues within it of a cutoff are
    /// treated as equal to the cutoff.
    pub fn tie_epsilon(&self) -> f64 {
        self.tie_epsilon
    }

    /// `N_{h,lambda}`: eigenvalues strictly below `lambda` (modulo the tie
    /// guard), the count entering the reconstruction formula.
    pub fn count_below(&self, lambda: f64) -> usize {
        let cut = lambda - self.tie_epsilon;
        self.eigenvalues.partition_point(|&ev| ev < cut)
    }

    /// Eigenvalue indices with `lambda_hn < lambda` (strict, tie-guarded).
    pub fn below(&self, lambda: f64) -> std::ops::Range<usize> {
        0..self.count_below(lambda)
    }

    /// Eigenvalue indices with `lambda_hn <= lambda` (non-strict, as in the
    /// Riesz-mean definition).
    pub fn at_or_below(&self, lambda: f64) -> std::ops::Range<usize> {
        let cut = lambda + self.tie_epsilon;
        0..self.eigenvalues.partition_point(|&ev| ev < cut)
    }
}

/// Diagonalizes the Hamiltonian built from the signal with the
/// pseudo-spectral `D₂`, rescaling eigenvectors to unit discrete L² norm.
pub fn decompose(signal: &Signal, h: f64) -> Result<SpectralDecomposition> {
    let d2 = discretize::fourier_d2(signal.grid())?;
    decompose_with(signal, h, &d2)
}

/// As [`decompose`], with a caller-supplied second-derivative matrix.
pub fn decompose_with(
    signal: &Signal,
    h: f64,
    d2: &SymmetricMatrix,
) -> Result<SpectralDecomposition> {
    let matrix = discretize::hamiltonian(signal, h, d2)?;
    let eigen = eigendecompose(&matrix)?;
    let grid = signal.grid().clone();
    let inv_sqrt_spacing = 1.0 / grid.spacing().sqrt();
    let mut eigenfunctions = eigen.vectors;
    for value in eigenfunctions.iter_mut() {
        *value *= inv_sqrt_spacing;
    }
    let radius = eigen
        .values
        .first()
        .unwrap()
        .abs()
        .max(eigen.values.last().unwrap().abs());
    let tie_epsilon = 1e-10 * radius;
    let n_h = eigen.values.partition_point(|&ev| ev < -tie_epsilon);
    Ok(SpectralDecomposition {
        h,
        grid,
        eigenvalues: eigen.values,
        eigenfunctions,
        n_h,
        tie_epsilon,
    })
}
