//! Perron roots of small nonnegative matrices.
//!
//! Power iteration runs on `A + I` from the all-ones vector, which keeps
//! periodic irreducible matrices from oscillating. Every step yields the
//! Collatz–Wielandt bounds `min (Ax)_i / x_i <= ρ <= max (Ax)_i / x_i`, so the
//! result is a bracket, not just an estimate.

use thiserror::Error;

use crate::digraph::tarjan_scc;

pub const MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix has a negative or non-finite entry at ({row}, {col})")]
    BadEntry { row: usize, col: usize },
    #[error("tolerance must be positive and finite")]
    BadTolerance,
    #[error("power iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
}

/// Lower and upper bounds on a spectral radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusBounds {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

impl RadiusBounds {
    pub fn estimate(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    fn exact(value: f64) -> Self {
        RadiusBounds { lower: value, upper: value, iterations: 0 }
    }
}

fn check(matrix: &[Vec<f64>], tol: f64) -> Result<(), SpectralError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SpectralError::BadTolerance);
    }
    let n = matrix.len();
    for (row, r) in matrix.iter().enumerate() {
        if r.len() != n {
            return Err(SpectralError::NotSquare);
        }
        for (col, &x) in r.iter().enumerate() {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(SpectralError::BadEntry { row, col });
            }
        }
    }
    Ok(())
}

/// Bounds on the spectral radius of a nonnegative square matrix, at most
/// `tol` apart (or a few ulps of the radius when `tol` is finer than `f64`
/// can resolve). Reducible matrices are split into strongly connected
/// diagonal blocks and the largest block radius is returned.
pub fn spectral_radius_bounds(matrix: &[Vec<f64>], tol: f64) -> Result<RadiusBounds, SpectralError> {
    check(matrix, tol)?;
    let n = matrix.len();
    if n == 0 {
        return Ok(RadiusBounds::exact(0.0));
    }
    let adj: Vec<Vec<usize>> =
        matrix.iter().map(|r| (0..n).filter(|&j| r[j] > 0.0).collect()).collect();
    let (comp, count) = tarjan_scc(&adj);
    let mut best = RadiusBounds::exact(0.0);
    let mut iterations = 0;
    for c in 0..count {
        let members: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
        let block: Vec<Vec<f64>> =
            members.iter().map(|&i| members.iter().map(|&j| matrix[i][j]).collect()).collect();
        let b = irreducible_radius(&block, tol)?;
        iterations += b.iterations;
        best.lower = best.lower.max(b.lower);
        best.upper = best.upper.max(b.upper);
    }
    best.iterations = iterations;
    Ok(best)
}

/// Midpoint of [`spectral_radius_bounds`].
pub fn spectral_radius(matrix: &[Vec<f64>], tol: f64) -> Result<f64, SpectralError> {
    spectral_radius_bounds(matrix, tol).map(|b| b.estimate())
}

fn irreducible_radius(block: &[Vec<f64>], tol: f64) -> Result<RadiusBounds, SpectralError> {
    let n = block.len();
    if n == 1 {
        return Ok(RadiusBounds::exact(block[0][0]));
    }
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    for it in 1..=MAX_ITERATIONS {
        for (i, row) in block.iter().enumerate() {
            y[i] = row.iter().zip(&x).map(|(a, b)| a * b).sum();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let q = y[i] / x[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        let floor = 16.0 * f64::EPSILON * hi.max(f64::MIN_POSITIVE);
        if hi - lo <= tol.max(floor) {
            return Ok(RadiusBounds { lower: lo, upper: hi, iterations: it });
        }
        let mut norm = 0.0f64;
        for i in 0..n {
            y[i] += x[i];
            norm = norm.max(y[i]);
        }
        for i in 0..n {
            x[i] = y[i] / norm;
        }
    }
    Err(SpectralError::NonConvergence { iterations: MAX_ITERATIONS })
}
