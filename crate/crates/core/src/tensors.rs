//! Geometric tensors: the pure-state QGT, the mixed-state QGT `Q^S` with
//! its Fisher-Rao / Fubini-Study / curvature split, per-level tensors, and
//! the Bures metric.
//!
//! Conventions: `Q = g − iΩ`, so `Ω = −Im Q`; per-level curvature
//! `f_n = −2 Im Q^n` and `Ω = ½ Σ_n λ_n f_n`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::derivatives::{
    pure_tangent, spectral_tangent, PhaseField, Route, StepPolicy, TangentData,
};
use crate::error::{QgtError, Result};
use crate::models::StateFamily;
use crate::spectral::{tol, CMatrix};

pub type RMatrix = DMatrix<f64>;

/// Tensors of one eigenlevel.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTensor {
    pub weight: f64,
    /// `Q^n_μν = ⟨∂_μn|(1 − P_n)|∂_νn⟩`.
    pub q_n: CMatrix,
    /// `f_n = −2 Im Q^n`.
    pub f_n: RMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QgtResult {
    pub q: CMatrix,
    pub g_fr: RMatrix,
    pub g_fs: RMatrix,
    pub omega: RMatrix,
    pub per_level: Vec<LevelTensor>,
}

impl QgtResult {
    pub fn n_params(&self) -> usize {
        self.q.nrows()
    }

    /// `Re Q = g_fr + g_fs`.
    pub fn metric(&self) -> RMatrix {
        self.q.map(|z| z.re)
    }

    /// `F_μν = −2 Im Q_μν`.
    pub fn curvature(&self) -> RMatrix {
        self.q.map(|z| -2.0 * z.im)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuresResult {
    pub g_b: RMatrix,
}

fn gram(vectors: &[nalgebra::DVector<Complex64>]) -> CMatrix {
    let k = vectors.len();
    CMatrix::from_fn(k, k, |a, b| vectors[a].dotc(&vectors[b]))
}

/// QGT of a pure family, from gauge-invariant projected derivatives.
pub fn pure_qgt(fam: &dyn StateFamily, r: &[f64], policy: &StepPolicy) -> Result<QgtResult> {
    pure_qgt_twisted(fam, r, policy, None)
}

/// [`pure_qgt`] with a smooth phase twist applied to the sampled states.
pub fn pure_qgt_twisted(
    fam: &dyn StateFamily,
    r: &[f64],
    policy: &StepPolicy,
    twist: Option<&PhaseField>,
) -> Result<QgtResult> {
    if !fam.is_pure() {
        return Err(QgtError::NotPure);
    }
    let t = pure_tangent(fam, r, policy, twist)?;
    let q = gram(&t.proj_vec_grad);
    let k = q.nrows();
    let f_n = q.map(|z| -2.0 * z.im);
    Ok(QgtResult {
        g_fr: RMatrix::zeros(k, k),
        g_fs: q.map(|z| z.re),
        omega: q.map(|z| -z.im),
        per_level: vec![LevelTensor {
            weight: 1.0,
            q_n: q.clone(),
            f_n,
        }],
        q,
    })
}

/// Mixed-state QGT `Q^S` from perturbative eigen-derivatives.
pub fn sjoqvist_qgt(fam: &dyn StateFamily, r: &[f64], policy: &StepPolicy) -> Result<QgtResult> {
    let t = spectral_tangent(fam, r, policy, Route::Perturbative, None)?;
    Ok(qgt_from_tangent(&t))
}

/// `Q^S` from frame-differenced eigenvectors, optionally under a smooth
/// per-level phase twist.
pub fn sjoqvist_qgt_frame(
    fam: &dyn StateFamily,
    r: &[f64],
    policy: &StepPolicy,
    twist: Option<&PhaseField>,
) -> Result<QgtResult> {
    let t = spectral_tangent(fam, r, policy, Route::FrameFd, twist)?;
    Ok(qgt_from_tangent(&t))
}

/// Assembles `Q^S` and its parts from tangent data.
pub fn qgt_from_tangent(t: &TangentData) -> QgtResult {
    let k = t.n_params();
    let n = t.n_levels();
    let lambda = t.levels.weights();
    let mut q = CMatrix::zeros(k, k);
    let mut g_fr = RMatrix::zeros(k, k);
    let mut g_fs = RMatrix::zeros(k, k);
    let mut per_level = Vec::with_capacity(n);
    for (lev, &w) in lambda.iter().enumerate() {
        let proj: Vec<_> = (0..k).map(|mu| t.proj_vec_grad[mu][lev].clone()).collect();
        let q_n = gram(&proj);
        // λ s_μ s_ν / 4 with s = ∂ ln λ, i.e. ∂λ∂λ/(4λ) without dividing
        let fr = RMatrix::from_fn(k, k, |a, b| {
            w * t.log_weight_grad[a][lev] * t.log_weight_grad[b][lev] / 4.0
        });
        g_fr += &fr;
        g_fs += q_n.map(|z| w * z.re);
        q += fr.map(|x| Complex64::new(x, 0.0)) + q_n.map(|z| z * w);
        per_level.push(LevelTensor {
            weight: w,
            f_n: q_n.map(|z| -2.0 * z.im),
            q_n,
        });
    }
    QgtResult {
        omega: q.map(|z| -z.im),
        q,
        g_fr,
        g_fs,
        per_level,
    }
}

/// [`pure_qgt`] for pure families, [`sjoqvist_qgt`] otherwise.
pub fn qgt(fam: &dyn StateFamily, r: &[f64], policy: &StepPolicy) -> Result<QgtResult> {
    if fam.is_pure() {
        pure_qgt(fam, r, policy)
    } else {
        sjoqvist_qgt(fam, r, policy)
    }
}

fn check_full_rank(t: &TangentData) -> Result<()> {
    let min = t
        .levels
        .weights()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min < tol::RANK {
        return Err(QgtError::NotFullRank {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// Bures metric `½ Σ_ij Re[⟨i|∂_μρ|j⟩⟨j|∂_νρ|i⟩] / (λ_i + λ_j)` in the
/// eigenbasis of `ρ(R)`, with `∂ρ` from finite differences of `ρ`.
pub fn bures_metric(fam: &dyn StateFamily, r: &[f64], policy: &StepPolicy) -> Result<BuresResult> {
    let t = spectral_tangent(fam, r, policy, Route::FrameFd, None)?;
    check_full_rank(&t)?;
    let frame = t.levels.spectrum.frame();
    let lambda = t.levels.weights();
    let n = lambda.len();
    let x: Vec<CMatrix> = t
        .rho_grad
        .iter()
        .map(|d| frame.adjoint() * d * frame)
        .collect();
    let k = x.len();
    let g_b = RMatrix::from_fn(k, k, |a, b| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (x[a][(i, j)] * x[b][(j, i)]).re / (lambda[i] + lambda[j]);
            }
        }
        0.5 * s
    });
    Ok(BuresResult { g_b })
}

/// Bures metric rewritten as
/// `g^FR + ½ Σ_{n≠m} (λ_n − λ_m)²/(λ_n + λ_m) Re[⟨m|∂_μn⟩ conj⟨m|∂_νn⟩]`,
/// from perturbative eigen-derivatives.
pub fn bures_metric_reexpressed(
    fam: &dyn StateFamily,
    r: &[f64],
    policy: &StepPolicy,
) -> Result<BuresResult> {
    let t = spectral_tangent(fam, r, policy, Route::Perturbative, None)?;
    check_full_rank(&t)?;
    Ok(bures_from_tangent(&t))
}

pub fn bures_from_tangent(t: &TangentData) -> BuresResult {
    let frame = t.levels.spectrum.frame();
    let lambda = t.levels.weights();
    let n = lambda.len();
    let k = t.n_params();
    // c[μ][(m, n)] = ⟨m|∂_μ n⟩ for m ≠ n
    let c: Vec<CMatrix> = (0..k)
        .map(|mu| CMatrix::from_fn(n, n, |m, l| frame.column(m).dotc(&t.proj_vec_grad[mu][l])))
        .collect();
    let g_b = RMatrix::from_fn(k, k, |a, b| {
        let mut s = 0.0;
        for l in 0..n {
            s += lambda[l] * t.log_weight_grad[a][l] * t.log_weight_grad[b][l] / 4.0;
            for m in 0..n {
                if m == l {
                    continue;
                }
                let den = lambda[l] + lambda[m];
                if den > 0.0 {
                    let num = (lambda[l] - lambda[m]).powi(2);
                    s += 0.5 * num / den * (c[a][(m, l)] * c[b][(m, l)].conj()).re;
                }
            }
        }
        s
    });
    BuresResult { g_b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        bloch_family, bosonic_coherent_family, diagonal_qubit_family, ground_state_family,
        random_smooth_family, BlochHamiltonian, BlochPure, Domain, ModelConfig, PureFamily,
    };
    use crate::spectral::CVector;
    use std::f64::consts::PI;

    fn max_abs_c(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn max_abs(m: &RMatrix) -> f64 {
        m.iter().map(|z| z.abs()).fold(0.0, f64::max)
    }

    /// Independent oracle: fidelity expansion for the metric and a small
    /// plaquette phase for the curvature, straight from state overlaps.
    fn overlap_oracle(fam: &dyn StateFamily, r: [f64; 2], h: f64) -> (RMatrix, f64) {
        let psi = |p: [f64; 2]| fam.state_vector(&p).unwrap();
        let p0 = psi(r);
        let fid = |d: [f64; 2]| 1.0 - p0.dotc(&psi([r[0] + d[0], r[1] + d[1]])).norm_sqr();
        let g00 = (fid([h, 0.0]) + fid([-h, 0.0])) / (2.0 * h * h);
        let g11 = (fid([0.0, h]) + fid([0.0, -h])) / (2.0 * h * h);
        let gpp = (fid([h, h]) + fid([-h, -h])) / (2.0 * h * h);
        let g01 = (gpp - g00 - g11) / 2.0;
        let corners = [
            [r[0] - h / 2.0, r[1] - h / 2.0],
            [r[0] + h / 2.0, r[1] - h / 2.0],
            [r[0] + h / 2.0, r[1] + h / 2.0],
            [r[0] - h / 2.0, r[1] + h / 2.0],
        ];
        let v: Vec<CVector> = corners.iter().map(|&c| psi(c)).collect();
        let prod = v[0].dotc(&v[1]) * v[1].dotc(&v[2]) * v[2].dotc(&v[3]) * v[3].dotc(&v[0]);
        let f = -prod.arg() / (h * h);
        (RMatrix::from_row_slice(2, 2, &[g00, g01, g01, g11]), f)
    }

    #[test]
    fn pure_bloch_closed_form() {
        let fam = BlochPure::new();
        for &(theta, phi) in &[(0.4, 0.0), (1.05, 0.3), (2.5, -2.0)] {
            let q = pure_qgt(&fam, &[theta, phi], &StepPolicy::default()).unwrap();
            let s: f64 = f64::sin(theta);
            assert!((q.q[(0, 0)].re - 0.25).abs() < 1e-9);
            assert!((q.q[(1, 1)].re - s * s / 4.0).abs() < 1e-9);
            assert!(q.q[(0, 1)].re.abs() < 1e-9);
            assert!((q.q[(0, 1)].im - s / 4.0).abs() < 1e-9);
            assert!((q.omega[(0, 1)] + s / 4.0).abs() < 1e-9);
            assert!((q.per_level[0].f_n[(0, 1)] + s / 2.0).abs() < 1e-9);

            let (g, f) = overlap_oracle(&fam, [theta, phi], 1e-4);
            assert!(max_abs(&(q.metric() - &g)) < 1e-6);
            assert!((q.curvature()[(0, 1)] - f).abs() < 1e-6);
        }
    }

    #[test]
    fn ground_level_of_bloch_field_has_opposite_curvature() {
        let fam = ground_state_family(BlochHamiltonian::new(1.0));
        let theta: f64 = 1.2;
        let q = pure_qgt(&fam, &[theta, 0.7], &StepPolicy::default()).unwrap();
        assert!((q.q[(0, 1)].im + theta.sin() / 4.0).abs() < 1e-9);
        assert!((q.q[(1, 1)].re - theta.sin().powi(2) / 4.0).abs() < 1e-9);
        let (g, f) = overlap_oracle(&fam, [theta, 0.7], 1e-4);
        assert!(max_abs(&(q.metric() - &g)) < 1e-6);
        assert!((q.curvature()[(0, 1)] - f).abs() < 1e-6);
    }

    #[test]
    fn pure_constant_family_zero() {
        let fam = PureFamily::new("const", 3, Domain::unbounded(2), |_| {
            Ok(CVector::from_vec(vec![
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.0, 0.0),
            ]))
        });
        let q = pure_qgt(&fam, &[0.2, 0.3], &StepPolicy::default()).unwrap();
        assert_eq!(max_abs_c(&q.q), 0.0);
    }

    #[test]
    fn pure_qgt_gauge_invariant() {
        let field = PhaseField::random(9, 1, 2);
        let base = BlochPure::new();
        let twisted = PureFamily::new("twisted", 2, base.domain().clone(), move |r| {
            let chi = field.eval(r)[0];
            Ok(base.state_vector(r)? * Complex64::from_polar(1.0, chi))
        });
        let r = [0.8, 1.9];
        let a = pure_qgt(&BlochPure::new(), &r, &StepPolicy::default()).unwrap();
        let b = pure_qgt(&twisted, &r, &StepPolicy::default()).unwrap();
        assert!(max_abs_c(&(&a.q - &b.q)) < 1e-8);
    }

    #[test]
    fn pure_qgt_rejects_mixed() {
        let fam = diagonal_qubit_family();
        assert!(matches!(
            pure_qgt(&fam, &[0.2], &StepPolicy::default()),
            Err(QgtError::NotPure)
        ));
    }

    #[test]
    fn diagonal_family_fisher_rao() {
        let fam = diagonal_qubit_family();
        let x: f64 = 0.3;
        let q = sjoqvist_qgt(&fam, &[x], &StepPolicy::default()).unwrap();
        let expected = 1.0 / (4.0 * (1.0 - x * x));
        assert!((q.q[(0, 0)].re - expected).abs() < 1e-9);
        assert!((q.g_fr[(0, 0)] - expected).abs() < 1e-9);
        assert!(q.g_fs[(0, 0)].abs() < 1e-12);
        let b = bures_metric(&fam, &[x], &StepPolicy::default()).unwrap();
        assert!((b.g_b[(0, 0)] - expected).abs() < 1e-9);
    }

    #[test]
    fn thermal_bloch_closed_form() {
        let (beta, omega) = (1.0, 1.0);
        let fam = bloch_family(false, Some(beta), omega).unwrap();
        let t = (beta * omega / 2.0).tanh();
        for &(theta, phi) in &[(PI / 3.0, 0.0), (0.5, 1.0), (2.2, -0.4)] {
            let q = sjoqvist_qgt(fam.as_ref(), &[theta, phi], &StepPolicy::default()).unwrap();
            let s: f64 = f64::sin(theta);
            assert!(max_abs(&q.g_fr) < 1e-12);
            assert!((q.q[(0, 0)].re - 0.25).abs() < 1e-9);
            assert!((q.q[(1, 1)].re - s * s / 4.0).abs() < 1e-9);
            assert!(q.q[(0, 1)].re.abs() < 1e-9);
            // λ0 − λ1 = tanh(βω/2); the dominant level is the field ground state
            assert!((q.omega[(0, 1)] - t * s / 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn coherent_family_closed_form() {
        let fam = bosonic_coherent_family(&ModelConfig {
            beta: 1.0,
            omega: 1.0,
            n_cut: 60,
            ..Default::default()
        })
        .unwrap();
        let coth = 1.0 / 0.5f64.tanh();
        for r in [[0.0, 0.0], [0.5, 0.0], [0.3, 0.4]] {
            let q = sjoqvist_qgt(&fam, &r, &StepPolicy::default()).unwrap();
            assert!((q.q[(0, 0)].re / coth - 1.0).abs() < 1e-3);
            assert!((q.q[(1, 1)].re / coth - 1.0).abs() < 1e-3);
            assert!(q.q[(0, 1)].re.abs() < 1e-3);
            assert!((q.omega[(0, 1)] + 1.0).abs() < 1e-3);
        }
        assert!((coth - 2.16395).abs() < 1e-5);
    }

    #[test]
    fn coherent_per_level_tensors() {
        let fam = bosonic_coherent_family(&ModelConfig::default()).unwrap();
        let q = sjoqvist_qgt(&fam, &[0.0, 0.0], &StepPolicy::default()).unwrap();
        for (n, lvl) in q.per_level.iter().take(5).enumerate() {
            let expected = 2.0 * n as f64 + 1.0;
            assert!((lvl.q_n[(0, 0)].re - expected).abs() < 1e-6);
            assert!((lvl.q_n[(0, 1)].im - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_temperature_bloch_matches_ground_level() {
        let fam = bloch_family(false, Some(50.0), 1.0).unwrap();
        let ground = ground_state_family(BlochHamiltonian::new(1.0));
        for r in [[1.05, 0.0], [0.3, 2.0]] {
            let a = sjoqvist_qgt(fam.as_ref(), &r, &StepPolicy::default()).unwrap();
            let b = pure_qgt(&ground, &r, &StepPolicy::default()).unwrap();
            assert!(max_abs_c(&(&a.q - &b.q)) < 1e-6);
        }
    }

    #[test]
    fn bures_large_beta_limit() {
        let fam = bloch_family(false, Some(20.0), 1.0).unwrap();
        let theta: f64 = 0.9;
        let b = bures_metric(fam.as_ref(), &[theta, 0.2], &StepPolicy::default()).unwrap();
        let expected = RMatrix::from_row_slice(2, 2, &[0.25, 0.0, 0.0, theta.sin().powi(2) / 4.0]);
        assert!(max_abs(&(b.g_b - expected)) < 1e-8);
    }

    #[test]
    fn bures_two_forms_agree() {
        for seed in 0..10 {
            let fam = random_smooth_family(seed, 3, 2).unwrap();
            let r = [0.1, -0.3];
            let a = bures_metric(&fam, &r, &StepPolicy::default()).unwrap();
            let b = bures_metric_reexpressed(&fam, &r, &StepPolicy::default()).unwrap();
            assert!(max_abs(&(a.g_b - b.g_b)) < 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn bures_rejects_rank_deficient() {
        let fam = bloch_family(false, Some(50.0), 1.0).unwrap();
        let res = bures_metric(fam.as_ref(), &[1.0, 0.0], &StepPolicy::default());
        assert!(matches!(res, Err(QgtError::NotFullRank { .. })));
    }

    #[test]
    fn frame_route_matches_perturbative() {
        let fam = random_smooth_family(4, 4, 3).unwrap();
        let r = [0.2, 0.1, -0.2];
        let a = sjoqvist_qgt(&fam, &r, &StepPolicy::default()).unwrap();
        let field = PhaseField::random(3, 4, 3);
        let b = sjoqvist_qgt_frame(&fam, &r, &StepPolicy::default(), Some(&field)).unwrap();
        assert!(max_abs_c(&(&a.q - &b.q)) < 1e-7);
    }
}
