//! Hermitian eigendecomposition with a deterministic eigenvector gauge,
//! density-matrix validation and eigenframe alignment along paths.
//!
//! Single-point gauge rule: in every eigenvector the entry of largest
//! magnitude (first one on exact ties) is real and positive. Eigenvalues are
//! sorted in descending order; exact ties are broken lexicographically on the
//! gauge-fixed components.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{QgtError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Numerical tolerances shared across the crate.
pub mod tol {
    pub const HERMITICITY: f64 = 1e-10;
    pub const TRACE: f64 = 1e-10;
    pub const RANK: f64 = 1e-12;
    pub const ORTHO: f64 = 1e-10;
    pub const EIG: f64 = 1e-9;
    pub const MATCH: f64 = 0.5;
    pub const GAP: f64 = 1e-8;
}

/// Eigenvalues (descending) and the matching orthonormal eigenframe of a
/// Hermitian matrix. Columns of `frame` are the eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    frame: CMatrix,
    min_gap: f64,
}

impl SpectralDecomposition {
    /// Builds a decomposition from raw parts. The caller guarantees that the
    /// columns of `frame` are orthonormal eigenvectors.
    pub fn from_parts(eigenvalues: Vec<f64>, frame: CMatrix) -> Self {
        assert_eq!(eigenvalues.len(), frame.ncols());
        let min_gap = min_gap(&eigenvalues);
        Self {
            eigenvalues,
            frame,
            min_gap,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    /// Eigenvector of level `n`.
    pub fn vector(&self, n: usize) -> CVector {
        self.frame.column(n).into_owned()
    }

    /// Smallest distance between any two eigenvalues (infinite for dim 1).
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// `Σ_n f(λ_n) |n⟩⟨n|`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let mut scaled = self.frame.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= w;
            }
        }
        &scaled * self.frame.adjoint()
    }

    /// `Σ_n λ_n |n⟩⟨n|`.
    pub fn reconstruct(&self) -> CMatrix {
        self.map_spectrum(|x| x)
    }

    /// Returns a copy with column `n` multiplied by `e^{i phase_n}`.
    pub fn with_phases(&self, phases: &[f64]) -> Self {
        assert_eq!(phases.len(), self.dim());
        let mut frame = self.frame.clone();
        for (j, &p) in phases.iter().enumerate() {
            let u = Complex64::from_polar(1.0, p);
            for i in 0..frame.nrows() {
                frame[(i, j)] *= u;
            }
        }
        Self {
            eigenvalues: self.eigenvalues.clone(),
            frame,
            min_gap: self.min_gap,
        }
    }

    /// Reorders levels so that new level `i` is old level `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let eigenvalues = perm.iter().map(|&p| self.eigenvalues[p]).collect();
        let frame = CMatrix::from_fn(self.frame.nrows(), perm.len(), |i, j| {
            self.frame[(i, perm[j])]
        });
        Self::from_parts(eigenvalues, frame)
    }

    /// Largest deviation of `frame† frame` from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.frame.adjoint() * &self.frame;
        let mut worst = 0.0f64;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Per-level phases `θ_n` of spectral rays, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFrame {
    pub phases: Vec<f64>,
}

impl PhaseFrame {
    pub fn zeros(n: usize) -> Self {
        Self {
            phases: vec![0.0; n],
        }
    }

    /// Phases reduced to the principal branch (−π, π].
    pub fn principal(&self) -> Vec<f64> {
        self.phases.iter().map(|&p| wrap_phase(p)).collect()
    }
}

/// Reduces an angle to (−π, π].
pub fn wrap_phase(p: f64) -> f64 {
    use std::f64::consts::PI;
    let mut w = p.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// A full-rank, unit-trace Hermitian matrix that passed [`validate_density`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

fn min_gap(values: &[f64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            gap = gap.min((values[i] - values[j]).abs());
        }
    }
    gap
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn check_square_finite(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(QgtError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(QgtError::InvalidArgument("empty matrix".into()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(QgtError::NonFinite);
    }
    Ok(())
}

/// Max-entry deviation `|m_ij − conj(m_ji)|`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Checks squareness, finiteness and Hermiticity (relative to the largest entry,
/// floored at one).
pub fn ensure_hermitian(m: &CMatrix) -> Result<()> {
    check_square_finite(m)?;
    let deviation = hermiticity_deviation(m);
    if deviation > tol::HERMITICITY * max_abs(m).max(1.0) {
        return Err(QgtError::NotHermitian { deviation });
    }
    Ok(())
}

/// Rotates a vector so that its largest-magnitude entry is real and positive.
pub fn gauge_fix(v: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_mag = -1.0f64;
    for (i, z) in v.iter().enumerate() {
        let mag = z.norm();
        if mag > best_mag {
            best_mag = mag;
            best = i;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let rot = v[best].conj() / best_mag;
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[best] = Complex64::new(best_mag, 0.0);
}

fn lexicographic(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then_with(|| x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Eigendecomposition of a Hermitian matrix with descending eigenvalues and
/// gauge-fixed eigenvectors.
pub fn hermitian_eigendecompose(m: &CMatrix) -> Result<SpectralDecomposition> {
    ensure_hermitian(m)?;
    let n = m.nrows();
    let symmetric = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::try_new(symmetric, f64::EPSILON, 1000 * n.max(8))
        .ok_or(QgtError::ConvergenceFailure)?;

    let mut levels: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|j| {
            let mut v: Vec<Complex64> = eig.eigenvectors.column(j).iter().copied().collect();
            gauge_fix(&mut v);
            (eig.eigenvalues[j], v)
        })
        .collect();
    levels.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| lexicographic(&a.1, &b.1)));

    let eigenvalues: Vec<f64> = levels.iter().map(|l| l.0).collect();
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(QgtError::ConvergenceFailure);
    }
    let frame = CMatrix::from_fn(n, n, |i, j| levels[j].1[i]);
    Ok(SpectralDecomposition::from_parts(eigenvalues, frame))
}

/// Validates a candidate density matrix: Hermitian, unit trace, full rank.
pub fn validate_density(m: &CMatrix) -> Result<DensityMatrix> {
    ensure_hermitian(m)?;
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol::TRACE {
        return Err(QgtError::TraceNotOne { trace });
    }
    let spectrum = hermitian_eigendecompose(m)?;
    let min_eigenvalue = *spectrum.eigenvalues().last().unwrap();
    if min_eigenvalue < tol::RANK {
        return Err(QgtError::NotFullRank { min_eigenvalue });
    }
    Ok(DensityMatrix {
        matrix: m.clone(),
        spectrum,
    })
}

/// Level pairing between two frames: entry `i` is the level of `next` paired
/// with level `i` of `prev`.
///
/// Pairing is by maximum overlap magnitude. When that is not a bijection the
/// pairing falls back to index order provided every diagonal overlap is at
/// least `tol::MATCH`; otherwise the matching is ambiguous.
pub fn level_matching(
    prev: &SpectralDecomposition,
    next: &SpectralDecomposition,
) -> Result<Vec<usize>> {
    if prev.dim() != next.dim() {
        return Err(QgtError::DimensionMismatch {
            left: prev.dim(),
            right: next.dim(),
        });
    }
    let n = prev.dim();
    let overlap = prev.frame().adjoint() * next.frame();
    let best: Vec<usize> = (0..n)
        .map(|i| {
            let mut arg = 0;
            let mut mag = -1.0;
            for j in 0..n {
                let m = overlap[(i, j)].norm();
                if m > mag {
                    mag = m;
                    arg = j;
                }
            }
            arg
        })
        .collect();

    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut collision = None;
    for (i, &j) in best.iter().enumerate() {
        match owner[j] {
            None => owner[j] = Some(i),
            Some(first) => {
                collision = Some((first, i, j));
                break;
            }
        }
    }
    match collision {
        None => Ok(best),
        Some((first, second, target)) => {
            if (0..n).all(|i| overlap[(i, i)].norm() >= tol::MATCH) {
                Ok((0..n).collect())
            } else {
                Err(QgtError::AmbiguousMatching {
                    target,
                    first,
                    second,
                })
            }
        }
    }
}

/// Re-labels and re-phases `next` so that each `⟨n_prev|n_next⟩` is real and
/// non-negative. Only column order and per-column phases change.
pub fn align_frames(
    prev: &SpectralDecomposition,
    next: &SpectralDecomposition,
) -> Result<SpectralDecomposition> {
    let perm = level_matching(prev, next)?;
    let permuted = next.permuted(&perm);
    let phases: Vec<f64> = (0..prev.dim())
        .map(|i| {
            let o = prev.frame().column(i).dotc(&permuted.frame().column(i));
            if o.norm() > 0.0 {
                -o.arg()
            } else {
                0.0
            }
        })
        .collect();
    let mut aligned = permuted.with_phases(&phases);
    // Make the overlap exactly real.
    for i in 0..prev.dim() {
        let o = prev.frame().column(i).dotc(&aligned.frame.column(i));
        if o.im != 0.0 && o.norm() > 0.0 {
            let fix = Complex64::from_polar(1.0, -o.arg());
            for r in 0..aligned.frame.nrows() {
                aligned.frame[(r, i)] *= fix;
            }
        }
    }
    Ok(aligned)
}
