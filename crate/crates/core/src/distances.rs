//! Finite distances between spectral decompositions and between
//! purifications, and the split of the raw purification distance into a
//! base part and a phase (fiber) part.

use num_complex::Complex64;

use crate::derivatives::{spectral_tangent, PhaseField, Route, StepPolicy};
use crate::error::{QgtError, Result};
use crate::models::StateFamily;
use crate::spectral::{
    align_frames, level_matching, tol, CMatrix, DensityMatrix, PhaseFrame, SpectralDecomposition,
};

/// `W = Σ_n √λ_n e^{iθ_n} |n⟩⟨n₀|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Purification {
    pub w: CMatrix,
    pub frame: SpectralDecomposition,
    pub phases: PhaseFrame,
}

impl Purification {
    /// Builds `W` from a spectrum, a reference frame `{|n₀⟩}` (columns) and
    /// per-level phases.
    pub fn new(
        frame: &SpectralDecomposition,
        reference: &CMatrix,
        phases: PhaseFrame,
    ) -> Result<Self> {
        let n = frame.dim();
        if reference.nrows() != n || reference.ncols() != n {
            return Err(QgtError::DimensionMismatch {
                left: n,
                right: reference.nrows(),
            });
        }
        if phases.phases.len() != n {
            return Err(QgtError::DimensionMismatch {
                left: n,
                right: phases.phases.len(),
            });
        }
        let mut w = CMatrix::zeros(n, n);
        for (l, (&lam, &theta)) in frame.eigenvalues().iter().zip(&phases.phases).enumerate() {
            let amp = Complex64::from_polar(lam.max(0.0).sqrt(), theta);
            w += frame.frame().column(l) * reference.column(l).adjoint() * amp;
        }
        Ok(Self {
            w,
            frame: frame.clone(),
            phases,
        })
    }

    /// Purification of `ρ` anchored on its own eigenframe, all phases zero.
    pub fn canonical(rho: &DensityMatrix) -> Self {
        let s = rho.spectrum();
        Self::new(s, s.frame(), PhaseFrame::zeros(s.dim()))
            .expect("dimensions agree by construction")
    }

    /// `‖W‖_HS`.
    pub fn norm(&self) -> f64 {
        self.w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `W W†`.
    pub fn density(&self) -> CMatrix {
        &self.w * self.w.adjoint()
    }
}

/// How levels of two spectra are paired in [`sjoqvist_finite_distance_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevelPairing {
    /// Level `n` with level `n` (both sorted by descending eigenvalue).
    #[default]
    EigenvalueOrder,
    /// Levels paired by maximum eigenvector overlap.
    MaxOverlap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDistance {
    pub distance: f64,
    pub squared: f64,
    /// Set when a spectral gap of either input is below `10 · gap_tol`.
    pub near_degenerate: bool,
}

fn check_spectrum(s: &SpectralDecomposition) -> Result<bool> {
    let gap = s.min_gap();
    if gap < tol::GAP {
        return Err(QgtError::DegenerateSpectrum { gap });
    }
    Ok(gap < 10.0 * tol::GAP)
}

/// Gauge-minimized distance `d² = 2 − 2 Σ_n √(λ_n λ'_n) |⟨n|n'⟩|` with
/// levels paired by descending-eigenvalue index.
pub fn sjoqvist_finite_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<FiniteDistance> {
    sjoqvist_finite_distance_with(a, b, LevelPairing::EigenvalueOrder)
}

pub fn sjoqvist_finite_distance_with(
    a: &DensityMatrix,
    b: &DensityMatrix,
    pairing: LevelPairing,
) -> Result<FiniteDistance> {
    if a.dim() != b.dim() {
        return Err(QgtError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let near = check_spectrum(a.spectrum())? | check_spectrum(b.spectrum())?;
    if near {
        log::warn!("near-degenerate spectrum in finite distance; level pairing may be fragile");
    }
    let (sa, sb) = (a.spectrum(), b.spectrum());
    let perm: Vec<usize> = match pairing {
        LevelPairing::EigenvalueOrder => (0..a.dim()).collect(),
        LevelPairing::MaxOverlap => level_matching(sa, sb)?,
    };
    let squared = spectral_distance_sq(sa, &sb.permuted(&perm));
    Ok(FiniteDistance {
        distance: squared.sqrt(),
        squared,
        near_degenerate: near,
    })
}

/// `Σ_n ‖√λ'_n e^{iφ_n}|n'⟩ − √λ_n|n⟩‖²` with `φ_n` chosen so each overlap
/// is real and non-negative. Summing difference vectors avoids the
/// cancellation in `2 − 2Σ…` for nearby states.
fn spectral_distance_sq(a: &SpectralDecomposition, b: &SpectralDecomposition) -> f64 {
    let mut total = 0.0;
    for l in 0..a.dim() {
        let u = a.frame().column(l);
        let v = b.frame().column(l);
        let o = u.dotc(&v);
        let rot = if o.norm() > 0.0 {
            Complex64::from_polar(1.0, -o.arg())
        } else {
            Complex64::new(1.0, 0.0)
        };
        let (la, lb) = (
            a.eigenvalues()[l].max(0.0).sqrt(),
            b.eigenvalues()[l].max(0.0).sqrt(),
        );
        total += (v * (rot * lb) - u * Complex64::new(la, 0.0)).norm_squared();
    }
    total
}

/// `‖W_p − W_q‖_HS`.
pub fn raw_purification_distance(p: &Purification, q: &Purification) -> Result<f64> {
    if p.w.shape() != q.w.shape() {
        return Err(QgtError::DimensionMismatch {
            left: p.w.nrows(),
            right: q.w.nrows(),
        });
    }
    Ok((&p.w - &q.w).norm())
}

/// The three terms of the raw-distance split along one displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionTerms {
    /// `‖W(R+dR) − W(R)‖²`.
    pub raw: f64,
    /// Finite distance squared between the spectral decompositions.
    pub base: f64,
    /// `Σ_n λ_n (dθ_n − iA_n(dR))²`.
    pub fiber: f64,
    /// `|raw − base − fiber|`.
    pub residual: f64,
}

/// Evaluates the split `ds²(W) = ds²(spectra) + Σ_n λ_n (dθ_n − iA_n)²`
/// between `R` and `R + dR`.
///
/// The section of eigenvectors is the frame at `R` continued by alignment,
/// optionally twisted by `e^{i(χ_n(R') − χ_n(R))}`. Purification phases are
/// `θ_n(R') = Σ_μ phase_grad[μ][n] (R' − R)^μ`. `λ_n` and `A_n` are taken at
/// `R`, so the residual is third order in `‖dR‖`.
pub fn decomposition_residual(
    fam: &dyn StateFamily,
    r: &[f64],
    dr: &[f64],
    phase_grad: &[Vec<f64>],
    twist: Option<&PhaseField>,
    policy: &StepPolicy,
) -> Result<DecompositionTerms> {
    let k = fam.n_params();
    if dr.len() != k || r.len() != k || phase_grad.len() != k {
        return Err(QgtError::ParameterCount {
            expected: k,
            got: dr.len().min(phase_grad.len()),
        });
    }
    let norm_dr = dr.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_dr > 1e-2 {
        return Err(QgtError::InvalidArgument(format!(
            "displacement norm {norm_dr:e} exceeds 1e-2"
        )));
    }
    let tangent = spectral_tangent(fam, r, policy, Route::FrameFd, twist)?;
    let n = tangent.n_levels();
    if phase_grad.iter().any(|row| row.len() != n) {
        return Err(QgtError::DimensionMismatch {
            left: n,
            right: phase_grad[0].len(),
        });
    }
    let here = &tangent.levels.spectrum;
    let r2: Vec<f64> = r.iter().zip(dr).map(|(a, b)| a + b).collect();
    let there = fam.levels(&r2)?;
    let gap = there.generator_gap();
    if gap < tol::GAP {
        return Err(QgtError::DegenerateSpectrum { gap });
    }
    let mut section = align_frames(here, &there.spectrum)?;
    if let Some(field) = twist {
        let (a, b) = (field.eval(&r2), field.eval(r));
        let phases: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        section = section.with_phases(&phases);
    }

    let theta: Vec<f64> = (0..n)
        .map(|l| (0..k).map(|mu| phase_grad[mu][l] * dr[mu]).sum())
        .collect();
    let reference = here.frame();
    let w0 = Purification::new(here, reference, PhaseFrame::zeros(n))?;
    let w1 = Purification::new(
        &section,
        reference,
        PhaseFrame {
            phases: theta.clone(),
        },
    )?;
    let raw = raw_purification_distance(&w0, &w1)?.powi(2);

    let base = spectral_distance_sq(here, &section);

    let conn = tangent
        .berry_conn
        .as_ref()
        .expect("frame route fills the connection");
    let lambda = here.eigenvalues();
    let fiber: f64 = (0..n)
        .map(|l| {
            let a_dr: Complex64 = (0..k).map(|mu| conn[mu][l] * dr[mu]).sum();
            let x = theta[l] - (Complex64::new(0.0, 1.0) * a_dr).re;
            lambda[l] * x * x
        })
        .sum();

    Ok(DecompositionTerms {
        raw,
        base,
        fiber,
        residual: (raw - base - fiber).abs(),
    })
}
