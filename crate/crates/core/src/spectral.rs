//! Graph matrices and a cyclic Jacobi eigensolver for real symmetric matrices.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrices of the order-0 graph are not defined")]
    EmptyGraph,
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixKind {
    #[serde(rename = "A")]
    Adjacency,
    #[serde(rename = "L")]
    Laplacian,
    #[serde(rename = "NL")]
    NormalizedLaplacian,
}

impl MatrixKind {
    pub fn short(self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "A",
            MatrixKind::Laplacian => "L",
            MatrixKind::NormalizedLaplacian => "NL",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

/// Dense n×n symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseSymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds a matrix from rows, rejecting any asymmetric pair.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, SpectralError> {
        let n = rows.len();
        let mut m = DenseSymMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has length {} in a {n}x{n} matrix", row.len());
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(SpectralError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both (i, j) and (j, i).
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[f64]>::to_vec)
            .collect()
    }

    fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    fn off_diagonal_sq(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let x = self.get(i, j);
                s += 2.0 * x * x;
            }
        }
        s
    }
}

/// Eigenvalues sorted in nondecreasing order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FloatSpectrum(Vec<f64>);

impl FloatSpectrum {
    /// Sorts the values; NaNs are ordered last by `total_cmp`.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        FloatSpectrum(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn min(&self) -> Option<f64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.0.last().copied()
    }

    /// Largest elementwise deviation, or `None` for different lengths.
    pub fn max_deviation(&self, other: &[f64]) -> Option<f64> {
        (self.0.len() == other.len()).then(|| self.0.iter().zip(other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

/// Adjacency, Laplacian `D − A`, or normalized Laplacian of `g`.
///
/// The normalized Laplacian has diagonal 1 for vertices of positive degree and
/// 0 for isolated vertices, and `−1/√(dᵢdⱼ)` across each edge.
pub fn matrix(g: &Graph, kind: MatrixKind) -> Result<DenseSymMatrix, SpectralError> {
    let n = g.order();
    if n == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    let mut m = DenseSymMatrix::zeros(n);
    let degrees = g.degrees();
    match kind {
        MatrixKind::Adjacency => {
            for (u, v) in g.edges() {
                m.set(u, v, 1.0);
            }
        }
        MatrixKind::Laplacian => {
            for (u, &d) in degrees.iter().enumerate() {
                m.set(u, u, d as f64);
            }
            for (u, v) in g.edges() {
                m.set(u, v, -1.0);
            }
        }
        MatrixKind::NormalizedLaplacian => {
            for (u, &d) in degrees.iter().enumerate() {
                if d > 0 {
                    m.set(u, u, 1.0);
                }
            }
            for (u, v) in g.edges() {
                m.set(u, v, -1.0 / ((degrees[u] * degrees[v]) as f64).sqrt());
            }
        }
    }
    Ok(m)
}

/// Convergence target: off-diagonal Frobenius norm below this fraction of the
/// full Frobenius norm.
pub const JACOBI_RELATIVE_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// All eigenvalues of a symmetric matrix by the cyclic Jacobi method.
pub fn eigenvalues_sym(m: &DenseSymMatrix) -> Result<FloatSpectrum, SpectralError> {
    let n = m.dim();
    let mut a = m.clone();
    let target_sq = JACOBI_RELATIVE_TOLERANCE * JACOBI_RELATIVE_TOLERANCE * a.frobenius_sq();

    for sweep in 0..=JACOBI_MAX_SWEEPS {
        let off = a.off_diagonal_sq();
        if off == 0.0 || off <= target_sq {
            return Ok(FloatSpectrum::from_unsorted((0..n).map(|i| a.get(i, i)).collect()));
        }
        if sweep == JACOBI_MAX_SWEEPS {
            break;
        }
        // Early sweeps only rotate the larger elements.
        let threshold = if sweep < 3 {
            0.2 * off.sqrt() / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 || apq.abs() <= threshold {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                if sweep > 3 && 1e2 * apq.abs() + app.abs() == app.abs() && 1e2 * apq.abs() + aqq.abs() == aqq.abs() {
                    a.set(p, q, 0.0);
                    continue;
                }
                rotate(&mut a, p, q, app, aqq, apq);
            }
        }
    }
    Err(SpectralError::NoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
        residual: a.off_diagonal_sq().sqrt(),
    })
}

/// Applies the plane rotation that annihilates `a[p][q]`.
fn rotate(a: &mut DenseSymMatrix, p: usize, q: usize, app: f64, aqq: f64, apq: f64) {
    let n = a.n;
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    a.data[p * n + p] = app - t * apq;
    a.data[q * n + q] = aqq + t * apq;
    a.set(p, q, 0.0);
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a.data[k * n + p];
        let akq = a.data[k * n + q];
        let new_kp = akp - s * (akq + tau * akp);
        let new_kq = akq + s * (akp - tau * akq);
        a.set(k, p, new_kp);
        a.set(k, q, new_kq);
    }
}

/// Convenience: eigenvalues of the chosen matrix of `g`.
pub fn graph_spectrum(g: &Graph, kind: MatrixKind) -> Result<FloatSpectrum, SpectralError> {
    eigenvalues_sym(&matrix(g, kind)?)
}
