//! Numerical differentiation of state families.
//!
//! Two routes produce eigen-derivatives: a first-order perturbative route
//! built from `∂G` (the finite-differenced generator, see
//! [`StateFamily::generator`]) and a frame route that differences aligned
//! eigenframes directly. The perturbative route is gauge-free and is used by
//! every tensor; the frame route exists for cross-checks and for Berry
//! connections.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QgtError, Result};
use crate::models::{Domain, Levels, SpectralSource, StateFamily};
use crate::spectral::{align_frames, level_matching, tol, CMatrix, CVector, SpectralDecomposition};

pub const DEFAULT_STEP: f64 = 1e-5;
pub const MIN_STEP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `(f(x+h) − f(x−h)) / 2h`
    Central2,
    /// Five-point stencil, fourth order.
    Central4,
    /// `(4 D(h/2) − D(h)) / 3` on top of the central difference.
    Richardson,
}

impl std::str::FromStr for Scheme {
    type Err = QgtError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "central2" => Ok(Scheme::Central2),
            "central4" => Ok(Scheme::Central4),
            "richardson" => Ok(Scheme::Richardson),
            other => Err(QgtError::InvalidArgument(format!(
                "unknown fd scheme '{other}' (expected central2, central4 or richardson)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepPolicy {
    pub h: f64,
    pub scheme: Scheme,
    /// Per-axis step overrides.
    pub axis_steps: Vec<Option<f64>>,
}

impl Default for StepPolicy {
    fn default() -> Self {
        Self {
            h: DEFAULT_STEP,
            scheme: Scheme::Central2,
            axis_steps: Vec::new(),
        }
    }
}

impl StepPolicy {
    pub fn new(h: f64, scheme: Scheme) -> Result<Self> {
        let p = Self {
            h,
            scheme,
            axis_steps: Vec::new(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_axis_step(mut self, axis: usize, h: f64) -> Result<Self> {
        if self.axis_steps.len() <= axis {
            self.axis_steps.resize(axis + 1, None);
        }
        self.axis_steps[axis] = Some(h);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let steps = std::iter::once(self.h).chain(self.axis_steps.iter().flatten().copied());
        for h in steps {
            if !(h.is_finite() && h >= MIN_STEP) {
                return Err(QgtError::InvalidArgument(format!(
                    "finite-difference step must be >= {MIN_STEP:e}, got {h}"
                )));
            }
        }
        Ok(())
    }

    pub fn step(&self, axis: usize) -> f64 {
        self.axis_steps
            .get(axis)
            .copied()
            .flatten()
            .unwrap_or(self.h)
    }

    /// `(weight, offset)` pairs of the stencil along one axis.
    fn stencil(&self, axis: usize) -> Vec<(f64, f64)> {
        let h = self.step(axis);
        match self.scheme {
            Scheme::Central2 => vec![(-0.5 / h, -h), (0.5 / h, h)],
            Scheme::Central4 => vec![
                (1.0 / (12.0 * h), -2.0 * h),
                (-8.0 / (12.0 * h), -h),
                (8.0 / (12.0 * h), h),
                (-1.0 / (12.0 * h), 2.0 * h),
            ],
            Scheme::Richardson => vec![
                (1.0 / (6.0 * h), -h),
                (-4.0 / (3.0 * h), -0.5 * h),
                (4.0 / (3.0 * h), 0.5 * h),
                (-1.0 / (6.0 * h), h),
            ],
        }
    }
}

/// Derivative of a matrix-valued function along `axis` at `r`. Every stencil
/// point must lie inside `domain`.
pub fn fd_axis(
    domain: &Domain,
    r: &[f64],
    axis: usize,
    policy: &StepPolicy,
    f: impl Fn(&[f64]) -> Result<CMatrix>,
) -> Result<CMatrix> {
    if axis >= r.len() {
        return Err(QgtError::AxisOutOfRange {
            axis,
            n_params: r.len(),
        });
    }
    let mut acc: Option<CMatrix> = None;
    for (w, offset) in policy.stencil(axis) {
        let mut p = r.to_vec();
        p[axis] += offset;
        domain.check(&p)?;
        let term = f(&p)? * Complex64::new(w, 0.0);
        acc = Some(match acc {
            None => term,
            Some(a) => a + term,
        });
    }
    Ok(acc.expect("stencils are non-empty"))
}

/// `∂_μρ` for every axis, by finite differences of `ρ(R)`.
pub fn matrix_fd(fam: &dyn StateFamily, r: &[f64], policy: &StepPolicy) -> Result<Vec<CMatrix>> {
    policy.validate()?;
    fam.domain().check(r)?;
    (0..fam.n_params())
        .map(|mu| fd_axis(fam.domain(), r, mu, policy, |p| fam.density(p)))
        .collect()
}

/// Smooth random per-level phase field
/// `χ_n(R) = Σ_μ a_nμ sin(b_nμ R^μ + c_nμ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    // [level][axis] -> (a, b, c)
    coeffs: Vec<Vec<(f64, f64, f64)>>,
}

impl PhaseField {
    pub fn random(seed: u64, n_levels: usize, n_params: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..n_levels)
            .map(|_| {
                (0..n_params)
                    .map(|_| {
                        (
                            rng.random_range(-2.0..2.0),
                            rng.random_range(-3.0..3.0),
                            rng.random_range(0.0..std::f64::consts::TAU),
                        )
                    })
                    .collect()
            })
            .collect();
        Self { coeffs }
    }

    pub fn n_levels(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, r: &[f64]) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|level| {
                level
                    .iter()
                    .zip(r)
                    .map(|(&(a, b, c), &x)| a * (b * x + c).sin())
                    .sum()
            })
            .collect()
    }

    /// `∂_μχ_n`, indexed `[μ][n]`.
    pub fn gradient(&self, r: &[f64]) -> Vec<Vec<f64>> {
        (0..r.len())
            .map(|mu| {
                self.coeffs
                    .iter()
                    .map(|level| {
                        let (a, b, c) = level[mu];
                        a * b * (b * r[mu] + c).cos()
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Perturbative,
    FrameFd,
}

/// Eigen-derivatives of a mixed family at one point. Vectors are indexed
/// `[μ][n]`.
#[derive(Debug, Clone)]
pub struct TangentData {
    /// Eigen-data at the evaluation point.
    pub levels: Levels,
    /// `∂_μρ`.
    pub rho_grad: Vec<CMatrix>,
    /// `∂_μλ_n`.
    pub eigval_grad: Vec<Vec<f64>>,
    /// `∂_μ ln λ_n`, finite even when `λ_n` underflows.
    pub log_weight_grad: Vec<Vec<f64>>,
    /// `(1 − P_n)|∂_μ n⟩`.
    pub proj_vec_grad: Vec<Vec<CVector>>,
    /// `A_{nμ} = ⟨n|∂_μ n⟩`; frame route only.
    pub berry_conn: Option<Vec<Vec<Complex64>>>,
}

impl TangentData {
    pub fn n_params(&self) -> usize {
        self.rho_grad.len()
    }

    pub fn n_levels(&self) -> usize {
        self.levels.weights().len()
    }
}

fn check_gap(levels: &Levels) -> Result<()> {
    let gap = levels.generator_gap();
    if gap < tol::GAP {
        return Err(QgtError::DegenerateSpectrum { gap });
    }
    Ok(())
}

fn log_weights(levels: &Levels, source: SpectralSource) -> Vec<f64> {
    match source {
        SpectralSource::Density => levels.weights().iter().map(|w| w.ln()).collect(),
        SpectralSource::Thermal { beta } => {
            let e = &levels.generator_values;
            let e0 = e.iter().copied().fold(f64::INFINITY, f64::min);
            let log_z = e
                .iter()
                .map(|&x| (-beta * (x - e0)).exp())
                .sum::<f64>()
                .ln();
            e.iter().map(|&x| -beta * (x - e0) - log_z).collect()
        }
    }
}

/// Eigen-derivatives of `fam` at `r`.
///
/// With [`Route::FrameFd`] an optional `twist` applies the smooth gauge
/// change `|n(R')⟩ → e^{i(χ_n(R') − χ_n(R))}|n(R')⟩` to the aligned frames
/// before differencing.
pub fn spectral_tangent(
    fam: &dyn StateFamily,
    r: &[f64],
    policy: &StepPolicy,
    route: Route,
    twist: Option<&PhaseField>,
) -> Result<TangentData> {
    policy.validate()?;
    fam.domain().check(r)?;
    if fam.is_pure() {
        return Err(QgtError::NotFullRank {
            min_eigenvalue: 0.0,
        });
    }
    let levels = fam.levels(r)?;
    check_gap(&levels)?;
    match route {
        Route::Perturbative => perturbative(fam, r, policy, levels),
        Route::FrameFd => frame_fd(fam, r, policy, levels, twist),
    }
}

fn perturbative(
    fam: &dyn StateFamily,
    r: &[f64],
    policy: &StepPolicy,
    levels: Levels,
) -> Result<TangentData> {
    let n = levels.weights().len();
    let frame = levels.spectrum.frame().clone();
    let lambda = levels.weights().to_vec();
    let g = levels.generator_values.clone();
    let source = fam.source();

    let mut rho_grad = Vec::new();
    let mut eigval_grad = Vec::new();
    let mut log_weight_grad = Vec::new();
    let mut proj_vec_grad = Vec::new();
    for mu in 0..fam.n_params() {
        let dg = fd_axis(fam.domain(), r, mu, policy, |p| fam.generator(p))?;
        let m = frame.adjoint() * &dg * &frame;
        let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();

        let (dl, score) = match source {
            SpectralSource::Density => {
                let score = diag.iter().zip(&lambda).map(|(d, l)| d / l).collect();
                (diag.clone(), score)
            }
            SpectralSource::Thermal { beta } => {
                let mean: f64 = diag.iter().zip(&lambda).map(|(d, l)| d * l).sum();
                let score: Vec<f64> = diag.iter().map(|d| -beta * (d - mean)).collect();
                let dl = score.iter().zip(&lambda).map(|(s, l)| s * l).collect();
                (dl, score)
            }
        };

        // ⟨m|∂n⟩ for m ≠ n
        let coupling = CMatrix::from_fn(n, n, |a, b| {
            if a == b {
                Complex64::new(0.0, 0.0)
            } else {
                m[(a, b)] / (g[b] - g[a])
            }
        });
        let proj: Vec<CVector> = (0..n).map(|b| &frame * coupling.column(b)).collect();

        let drho = match source {
            SpectralSource::Density => dg,
            SpectralSource::Thermal { .. } => {
                let x = CMatrix::from_fn(n, n, |a, b| {
                    if a == b {
                        Complex64::new(dl[a], 0.0)
                    } else {
                        coupling[(a, b)] * (lambda[b] - lambda[a])
                    }
                });
                &frame * x * frame.adjoint()
            }
        };

        rho_grad.push(drho);
        eigval_grad.push(dl);
        log_weight_grad.push(score);
        proj_vec_grad.push(proj);
    }
    Ok(TangentData {
        levels,
        rho_grad,
        eigval_grad,
        log_weight_grad,
        proj_vec_grad,
        berry_conn: None,
    })
}

fn twisted(
    frame: &SpectralDecomposition,
    twist: Option<&PhaseField>,
    r: &[f64],
    r0: &[f64],
) -> SpectralDecomposition {
    match twist {
        None => frame.clone(),
        Some(field) => {
            let at = field.eval(r);
            let base = field.eval(r0);
            let phases: Vec<f64> = at.iter().zip(&base).map(|(a, b)| a - b).collect();
            frame.with_phases(&phases)
        }
    }
}

fn frame_fd(
    fam: &dyn StateFamily,
    r: &[f64],
    policy: &StepPolicy,
    levels: Levels,
    twist: Option<&PhaseField>,
) -> Result<TangentData> {
    let n = levels.weights().len();
    if let Some(field) = twist {
        if field.n_levels() != n {
            return Err(QgtError::DimensionMismatch {
                left: n,
                right: field.n_levels(),
            });
        }
    }
    let source = fam.source();
    let reference = levels.spectrum.clone();
    let frame = reference.frame().clone();
    let lambda = levels.weights().to_vec();

    // Columns 0..n: aligned (and twisted) frame; column n: log-weights.
    let sample = |p: &[f64]| -> Result<CMatrix> {
        let lv = fam.levels(p)?;
        let perm = level_matching(&reference, &lv.spectrum)?;
        let aligned = twisted(&align_frames(&reference, &lv.spectrum)?, twist, p, r);
        let raw = log_weights(&lv, source);
        let logw: Vec<f64> = perm.iter().map(|&j| raw[j]).collect();
        let mut out = CMatrix::zeros(n, n + 1);
        out.view_mut((0, 0), (n, n)).copy_from(aligned.frame());
        for (i, l) in logw.iter().enumerate() {
            out[(i, n)] = Complex64::new(*l, 0.0);
        }
        Ok(out)
    };

    let mut eigval_grad = Vec::new();
    let mut log_weight_grad = Vec::new();
    let mut proj_vec_grad = Vec::new();
    let mut berry_conn = Vec::new();
    for mu in 0..fam.n_params() {
        let d = fd_axis(fam.domain(), r, mu, policy, sample)?;
        let score: Vec<f64> = (0..n).map(|i| d[(i, n)].re).collect();
        let dl: Vec<f64> = score.iter().zip(&lambda).map(|(s, l)| s * l).collect();
        let mut proj = Vec::with_capacity(n);
        let mut conn = Vec::with_capacity(n);
        for b in 0..n {
            let col = frame.column(b).into_owned();
            let dn = d.column(b).into_owned();
            let a = col.dotc(&dn);
            proj.push(dn - &col * a);
            conn.push(a);
        }
        eigval_grad.push(dl);
        log_weight_grad.push(score);
        proj_vec_grad.push(proj);
        berry_conn.push(conn);
    }
    Ok(TangentData {
        rho_grad: matrix_fd(fam, r, policy)?,
        levels,
        eigval_grad,
        log_weight_grad,
        proj_vec_grad,
        berry_conn: Some(berry_conn),
    })
}

/// Derivative data of a pure family: the state and its projected
/// derivatives `(1 − |ψ⟩⟨ψ|)|∂_μψ⟩`.
#[derive(Debug, Clone)]
pub struct PureTangent {
    pub psi: CVector,
    pub proj_vec_grad: Vec<CVector>,
    /// `⟨ψ|∂_μψ⟩` of the locally aligned section.
    pub berry_conn: Vec<Complex64>,
}

/// Projected derivatives of a pure family. Neighbouring states are rephased
/// against `ψ(R)` before differencing; `twist` (level 0 only) adds a smooth
/// gauge change on top.
pub fn pure_tangent(
    fam: &dyn StateFamily,
    r: &[f64],
    policy: &StepPolicy,
    twist: Option<&PhaseField>,
) -> Result<PureTangent> {
    policy.validate()?;
    let psi = fam.state_vector(r)?;
    let phase_at = |p: &[f64]| match twist {
        None => 0.0,
        Some(f) => f.eval(p)[0] - f.eval(r)[0],
    };
    let sample = |p: &[f64]| -> Result<CMatrix> {
        let v = fam.state_vector(p)?;
        let o = psi.dotc(&v);
        let rot = if o.norm() > 0.0 { -o.arg() } else { 0.0 } + phase_at(p);
        let v = v * Complex64::from_polar(1.0, rot);
        Ok(CMatrix::from_column_slice(v.len(), 1, v.as_slice()))
    };
    let mut proj_vec_grad = Vec::new();
    let mut berry_conn = Vec::new();
    for mu in 0..fam.n_params() {
        let d = fd_axis(fam.domain(), r, mu, policy, sample)?;
        let dpsi = d.column(0).into_owned();
        let a = psi.dotc(&dpsi);
        proj_vec_grad.push(dpsi - &psi * a);
        berry_conn.push(a);
    }
    Ok(PureTangent {
        psi,
        proj_vec_grad,
        berry_conn,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        bloch_family, diagonal_qubit_family, random_smooth_family, Axis, DensityFamily,
    };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn step_policy_validation() {
        assert!(StepPolicy::new(1e-9, Scheme::Central2).is_err());
        assert!(StepPolicy::new(0.0, Scheme::Central2).is_err());
        let p = StepPolicy::default().with_axis_step(1, 1e-3).unwrap();
        assert_eq!(p.step(0), 1e-5);
        assert_eq!(p.step(1), 1e-3);
        assert!("central4".parse::<Scheme>().is_ok());
        assert!("forward".parse::<Scheme>().is_err());
    }

    #[test]
    fn matrix_fd_linear_family() {
        let fam = diagonal_qubit_family();
        let d = matrix_fd(&fam, &[0.0], &StepPolicy::default()).unwrap();
        assert!((d[0][(0, 0)] - c(0.5, 0.0)).norm() < 1e-10);
        assert!((d[0][(1, 1)] - c(-0.5, 0.0)).norm() < 1e-10);
        assert!(d[0][(0, 1)].norm() < 1e-10);
    }

    #[test]
    fn matrix_fd_constant_family() {
        let fam = DensityFamily::new("const", 2, Domain::unbounded(2), |_| {
            Ok(CMatrix::from_diagonal(&CVector::from_vec(vec![
                c(0.6, 0.0),
                c(0.4, 0.0),
            ])))
        });
        for d in matrix_fd(&fam, &[0.1, 0.2], &StepPolicy::default()).unwrap() {
            assert_eq!(max_abs(&d), 0.0);
        }
    }

    #[test]
    fn matrix_fd_thermal_qubit_closed_form() {
        // ρ = (1 − t n̂·σ)/2 with t = tanh(βω/2); at θ = π/2, φ = 0:
        // ∂_θρ = −(t/2)(cosθ σx − sinθ σz) = (t/2) σz.
        let (beta, omega) = (1.0, 1.0);
        let fam = bloch_family(false, Some(beta), omega).unwrap();
        let t = (beta * omega / 2.0).tanh();
        for scheme in [Scheme::Central2, Scheme::Central4, Scheme::Richardson] {
            let policy = StepPolicy::new(1e-4, scheme).unwrap();
            let d = matrix_fd(fam.as_ref(), &[std::f64::consts::FRAC_PI_2, 0.0], &policy).unwrap();
            let expected =
                CMatrix::from_diagonal(&CVector::from_vec(vec![c(t / 2.0, 0.0), c(-t / 2.0, 0.0)]));
            assert!(max_abs(&(&d[0] - expected)) < 1e-8, "{scheme:?}");
        }
    }

    #[test]
    fn stencil_outside_domain_rejected() {
        let fam = diagonal_qubit_family();
        let policy = StepPolicy::new(1e-2, Scheme::Central2).unwrap();
        assert!(matches!(
            matrix_fd(&fam, &[0.995], &policy),
            Err(QgtError::DomainExceeded { .. })
        ));
    }

    #[test]
    fn central2_is_second_order() {
        // f(x) = diag(sin x, cos x); reference from the analytic derivative.
        let domain = Domain::new(vec![Axis::unbounded("x")]);
        let f = |p: &[f64]| {
            Ok(CMatrix::from_diagonal(&CVector::from_vec(vec![
                c(p[0].sin(), 0.0),
                c(p[0].cos(), 0.0),
            ])))
        };
        let x: f64 = 0.7;
        let exact =
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(x.cos(), 0.0), c(-x.sin(), 0.0)]));
        let reference = fd_axis(
            &domain,
            &[x],
            0,
            &StepPolicy::new(1e-3, Scheme::Richardson).unwrap(),
            f,
        )
        .unwrap();
        assert!(max_abs(&(&reference - &exact)) < 1e-12);
        let hs = [1e-2, 1e-3, 1e-4, 1e-5];
        let errs: Vec<f64> = hs
            .iter()
            .map(|&h| {
                let d = fd_axis(
                    &domain,
                    &[x],
                    0,
                    &StepPolicy::new(h, Scheme::Central2).unwrap(),
                    f,
                )
                .unwrap();
                max_abs(&(d - &reference))
            })
            .collect();
        let lx: Vec<f64> = hs.iter().map(|h| h.log10()).collect();
        let ly: Vec<f64> = errs.iter().map(|e| e.log10()).collect();
        let slope = fit_slope(&lx, &ly);
        assert!((slope - 2.0).abs() <= 0.2, "slope {slope}, errors {errs:?}");
    }

    pub(crate) fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let den: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
        num / den
    }

    #[test]
    fn diagonal_family_tangent() {
        let fam = diagonal_qubit_family();
        for route in [Route::Perturbative, Route::FrameFd] {
            let t = spectral_tangent(&fam, &[0.3], &StepPolicy::default(), route, None).unwrap();
            assert!((t.eigval_grad[0][0] - 0.5).abs() < 1e-10);
            assert!((t.eigval_grad[0][1] + 0.5).abs() < 1e-10);
            for v in &t.proj_vec_grad[0] {
                assert!(v.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn diagonal_family_degenerate_at_origin() {
        let fam = diagonal_qubit_family();
        let res = spectral_tangent(
            &fam,
            &[0.0],
            &StepPolicy::default(),
            Route::Perturbative,
            None,
        );
        assert!(matches!(res, Err(QgtError::DegenerateSpectrum { .. })));
    }

    #[test]
    fn thermal_bloch_eigenvalues_constant() {
        let fam = bloch_family(false, Some(2.0), 1.0).unwrap();
        for route in [Route::Perturbative, Route::FrameFd] {
            let t = spectral_tangent(
                fam.as_ref(),
                &[1.1, 0.4],
                &StepPolicy::default(),
                route,
                None,
            )
            .unwrap();
            for row in &t.eigval_grad {
                for v in row {
                    assert!(v.abs() < 1e-9, "{route:?}: {v}");
                }
            }
        }
    }

    #[test]
    fn dual_routes_agree_on_random_family() {
        let policy = StepPolicy::default();
        for seed in 0..10 {
            let fam = random_smooth_family(seed, 4, 2).unwrap();
            let r = [0.2, -0.1];
            let a = spectral_tangent(&fam, &r, &policy, Route::Perturbative, None).unwrap();
            let b = spectral_tangent(&fam, &r, &policy, Route::FrameFd, None).unwrap();
            for mu in 0..2 {
                for n in 0..4 {
                    let diff = (&a.proj_vec_grad[mu][n] - &b.proj_vec_grad[mu][n]).norm();
                    assert!(diff < 1e-6, "seed {seed} mu {mu} n {n}: {diff}");
                    assert!((a.eigval_grad[mu][n] - b.eigval_grad[mu][n]).abs() < 1e-6);
                }
                let drho = &a.rho_grad[mu] - &b.rho_grad[mu];
                assert!(max_abs(&drho) < 1e-8);
            }
        }
    }

    #[test]
    fn projected_derivative_orthogonal_to_level() {
        let fam = random_smooth_family(3, 5, 3).unwrap();
        let t = spectral_tangent(
            &fam,
            &[0.1, 0.2, 0.3],
            &StepPolicy::default(),
            Route::FrameFd,
            None,
        )
        .unwrap();
        for mu in 0..3 {
            for n in 0..5 {
                let v = t.levels.spectrum.vector(n);
                assert!(v.dotc(&t.proj_vec_grad[mu][n]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn frame_route_gauge_twist() {
        let fam = random_smooth_family(11, 3, 2).unwrap();
        let r = [0.3, 0.5];
        let policy = StepPolicy::default();
        let plain = spectral_tangent(&fam, &r, &policy, Route::FrameFd, None).unwrap();
        let field = PhaseField::random(5, 3, 2);
        let tw = spectral_tangent(&fam, &r, &policy, Route::FrameFd, Some(&field)).unwrap();
        let grad = field.gradient(&r);
        let (a0, a1) = (
            plain.berry_conn.as_ref().unwrap(),
            tw.berry_conn.as_ref().unwrap(),
        );
        for mu in 0..2 {
            for n in 0..3 {
                assert!((&plain.proj_vec_grad[mu][n] - &tw.proj_vec_grad[mu][n]).norm() < 1e-8);
                // A → A + i∂χ
                assert!((a1[mu][n] - a0[mu][n] - c(0.0, grad[mu][n])).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn aligned_connection_is_small() {
        // aligned neighbours make the local section nearly horizontal
        let fam = random_smooth_family(2, 3, 2).unwrap();
        let t = spectral_tangent(
            &fam,
            &[0.0, 0.0],
            &StepPolicy::default(),
            Route::FrameFd,
            None,
        )
        .unwrap();
        for row in t.berry_conn.unwrap() {
            for a in row {
                assert!(a.norm() < 1e-8);
            }
        }
    }

    #[test]
    fn pure_tangent_bloch() {
        let fam = bloch_family(true, None, 1.0).unwrap();
        let theta: f64 = 0.9;
        let t = pure_tangent(fam.as_ref(), &[theta, 0.3], &StepPolicy::default(), None).unwrap();
        assert!((t.proj_vec_grad[0].norm_squared() - 0.25).abs() < 1e-9);
        assert!((t.proj_vec_grad[1].norm_squared() - theta.sin().powi(2) / 4.0).abs() < 1e-9);
    }

    #[test]
    fn phase_field_gradient_matches_fd() {
        let field = PhaseField::random(1, 3, 2);
        let r = [0.4, -0.2];
        let g = field.gradient(&r);
        let h = 1e-6;
        for mu in 0..2 {
            let mut p = r;
            let mut m = r;
            p[mu] += h;
            m[mu] -= h;
            let (fp, fm) = (field.eval(&p), field.eval(&m));
            for n in 0..3 {
                assert!(((fp[n] - fm[n]) / (2.0 * h) - g[mu][n]).abs() < 1e-8);
            }
        }
    }
}
