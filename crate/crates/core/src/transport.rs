//! Parallel transport along parameter curves, Berry phases, and the surface
//! phase `θ_g` from plaquette Wilson loops.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{QgtError, Result};
use crate::models::{Domain, StateFamily};
use crate::spectral::{
    level_matching, tol, wrap_phase, CMatrix, PhaseFrame, SpectralDecomposition,
};

pub const MIN_CURVE_STEPS: usize = 8;
pub const MIN_PATCH_POINTS: usize = 4;

type Sampler = dyn Fn(f64) -> Vec<f64> + Send + Sync;

/// A parameter curve `t ↦ R(t)`, `t ∈ [0, 1]`.
#[derive(Clone)]
pub struct Curve {
    sampler: Arc<Sampler>,
    pub n_steps: usize,
    pub closed: bool,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("n_steps", &self.n_steps)
            .field("closed", &self.closed)
            .finish()
    }
}

impl Curve {
    pub fn new(
        sampler: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        n_steps: usize,
        closed: bool,
    ) -> Result<Self> {
        if n_steps < MIN_CURVE_STEPS {
            return Err(QgtError::InvalidArgument(format!(
                "curves need at least {MIN_CURVE_STEPS} steps, got {n_steps}"
            )));
        }
        Ok(Self {
            sampler: Arc::new(sampler),
            n_steps,
            closed,
        })
    }

    pub fn sample(&self, t: f64) -> Vec<f64> {
        (self.sampler)(t)
    }

    /// Counter-clockwise circle in the first two coordinates.
    pub fn circle(center: [f64; 2], radius: f64, n_steps: usize) -> Result<Self> {
        Self::new(
            move |t| {
                vec![
                    center[0] + radius * (TAU * t).cos(),
                    center[1] + radius * (TAU * t).sin(),
                ]
            },
            n_steps,
            true,
        )
    }

    /// Counter-clockwise boundary of `[u0, u1] × [v0, v1]`, uniform in arc
    /// length.
    pub fn rectangle(u0: f64, u1: f64, v0: f64, v1: f64, n_steps: usize) -> Result<Self> {
        let corners = vec![
            vec![u0, v0],
            vec![u1, v0],
            vec![u1, v1],
            vec![u0, v1],
            vec![u0, v0],
        ];
        Self::polyline(corners, n_steps, true)
    }

    /// Piecewise-linear path through `points`, uniform in arc length.
    pub fn polyline(points: Vec<Vec<f64>>, n_steps: usize, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(QgtError::InvalidArgument(
                "a path needs at least two points".into(),
            ));
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(QgtError::InvalidArgument(
                "path points differ in dimension".into(),
            ));
        }
        let mut cumulative = vec![0.0];
        for w in points.windows(2) {
            let len = w[0]
                .iter()
                .zip(&w[1])
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            cumulative.push(cumulative.last().unwrap() + len);
        }
        let total = *cumulative.last().unwrap();
        if total == 0.0 {
            return Err(QgtError::InvalidArgument("path has zero length".into()));
        }
        Self::new(
            move |t| {
                let s = t.clamp(0.0, 1.0) * total;
                let seg = cumulative
                    .partition_point(|&c| c <= s)
                    .clamp(1, points.len() - 1)
                    - 1;
                let len = cumulative[seg + 1] - cumulative[seg];
                let f = if len > 0.0 {
                    (s - cumulative[seg]) / len
                } else {
                    0.0
                };
                points[seg]
                    .iter()
                    .zip(&points[seg + 1])
                    .map(|(a, b)| a + f * (b - a))
                    .collect()
            },
            n_steps,
            closed,
        )
    }

    /// Sample points `R(t_j)`. Closed curves omit the repeated end point.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let count = if self.closed {
            self.n_steps
        } else {
            self.n_steps + 1
        };
        (0..count)
            .map(|j| self.sample(j as f64 / self.n_steps as f64))
            .collect()
    }

    /// Checks that a closed curve returns to its start, modulo the periods
    /// of `domain`.
    pub fn check_closure(&self, domain: &Domain) -> Result<()> {
        if !self.closed {
            return Ok(());
        }
        let (a, b) = (self.sample(0.0), self.sample(1.0));
        for (axis, ((x, y), spec)) in a.iter().zip(&b).zip(domain.axes()).enumerate() {
            let d = y - x;
            let ok = match spec.period {
                Some(p) => {
                    let m = (d / p).round();
                    (d - m * p).abs() <= 1e-12 * p.max(1.0)
                }
                None => d.abs() <= 1e-12 * x.abs().max(1.0),
            };
            if !ok {
                return Err(QgtError::InvalidArgument(format!(
                    "closed curve does not return to its start on axis {axis} ({x} vs {y})"
                )));
            }
        }
        Ok(())
    }
}

/// Uniform `n_u × n_v` lattice over `[u0, u1] × [v0, v1]` of a
/// two-parameter family.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePatch {
    pub u: (f64, f64),
    pub v: (f64, f64),
    pub n_u: usize,
    pub n_v: usize,
}

impl SurfacePatch {
    pub fn new(u: (f64, f64), v: (f64, f64), n_u: usize, n_v: usize) -> Result<Self> {
        if n_u < MIN_PATCH_POINTS || n_v < MIN_PATCH_POINTS {
            return Err(QgtError::InvalidArgument(format!(
                "patch needs at least {MIN_PATCH_POINTS} points per axis, got {n_u}x{n_v}"
            )));
        }
        if !(u.1 > u.0 && v.1 > v.0) {
            return Err(QgtError::InvalidArgument(
                "patch bounds must be increasing".into(),
            ));
        }
        Ok(Self { u, v, n_u, n_v })
    }

    pub fn du(&self) -> f64 {
        (self.u.1 - self.u.0) / (self.n_u - 1) as f64
    }

    pub fn dv(&self) -> f64 {
        (self.v.1 - self.v.0) / (self.n_v - 1) as f64
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.u.0 + i as f64 * self.du(),
            self.v.0 + j as f64 * self.dv(),
        ]
    }

    /// Centre of cell `(i, j)`.
    pub fn midpoint(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.u.0 + (i as f64 + 0.5) * self.du(),
            self.v.0 + (j as f64 + 0.5) * self.dv(),
        ]
    }

    pub fn n_cells(&self) -> usize {
        (self.n_u - 1) * (self.n_v - 1)
    }

    pub fn cell_area(&self) -> f64 {
        self.du() * self.dv()
    }

    /// Counter-clockwise boundary of the patch as a closed curve.
    pub fn boundary(&self, n_steps: usize) -> Result<Curve> {
        Curve::rectangle(self.u.0, self.u.1, self.v.0, self.v.1, n_steps)
    }

    /// Same region with `factor` times as many cells per axis.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            n_u: (self.n_u - 1) * factor + 1,
            n_v: (self.n_v - 1) * factor + 1,
            ..self.clone()
        }
    }
}

/// A Berry phase on the principal branch with its winding count:
/// `unwrapped = principal + 2π · winding`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerryPhase {
    pub principal: f64,
    pub winding: i64,
    pub unwrapped: f64,
}

impl BerryPhase {
    pub fn from_unwrapped(unwrapped: f64) -> Self {
        let principal = wrap_phase(unwrapped);
        Self {
            principal,
            winding: ((unwrapped - principal) / TAU).round() as i64,
            unwrapped,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransportResult {
    /// Phases `θ_n(t_j)` of the horizontal lift after each step.
    pub phase_history: Vec<PhaseFrame>,
    /// Accumulated per-level phases.
    pub berry_phases: Vec<BerryPhase>,
    /// Largest `|Im Tr(W_j† W_{j+1})| / Δt` along the lift.
    pub connection_residual_max: f64,
    /// `Σ_n λ_n θ_n` with `λ_n` at the start of the curve.
    pub theta_total: f64,
    /// Weights at the start of the curve.
    pub weights: Vec<f64>,
}

/// Spectral data used for transport: one level with weight one for pure
/// families, the eigen-data of `ρ` otherwise.
fn point_frame(fam: &dyn StateFamily, r: &[f64]) -> Result<SpectralDecomposition> {
    if fam.is_pure() {
        let psi = fam.state_vector(r)?;
        Ok(SpectralDecomposition::from_parts(
            vec![1.0],
            CMatrix::from_column_slice(psi.len(), 1, psi.as_slice()),
        ))
    } else {
        let levels = fam.levels(r)?;
        let gap = levels.generator_gap();
        if gap < tol::GAP {
            return Err(QgtError::DegenerateSpectrum { gap });
        }
        Ok(levels.spectrum)
    }
}

/// `⟨n|n'⟩` per level, after checking that the labelling is continuous.
fn level_overlaps(
    a: &SpectralDecomposition,
    b: &SpectralDecomposition,
    step: usize,
) -> Result<Vec<Complex64>> {
    match level_matching(a, b) {
        Ok(perm) if perm.iter().enumerate().all(|(i, &p)| i == p) => {}
        _ => return Err(QgtError::LevelCrossing { step }),
    }
    Ok((0..a.dim())
        .map(|n| a.frame().column(n).dotc(&b.frame().column(n)))
        .collect())
}

fn frames_along(fam: &dyn StateFamily, points: &[Vec<f64>]) -> Result<Vec<SpectralDecomposition>> {
    points.par_iter().map(|p| point_frame(fam, p)).collect()
}

/// Horizontal lift of the spectral decomposition along `curve`:
/// `θ_n ← θ_n − arg⟨n(t_j)|n(t_{j+1})⟩` per level.
pub fn horizontal_lift(fam: &dyn StateFamily, curve: &Curve) -> Result<TransportResult> {
    curve.check_closure(fam.domain())?;
    let points = curve.points();
    let frames = frames_along(fam, &points)?;
    let n = frames[0].dim();
    let weights = frames[0].eigenvalues().to_vec();
    let dt = 1.0 / curve.n_steps as f64;

    let mut theta = vec![0.0; n];
    let mut history = vec![PhaseFrame::zeros(n)];
    let mut residual_max = 0.0f64;
    for step in 0..curve.n_steps {
        let a = &frames[step];
        let b = if curve.closed && step + 1 == curve.n_steps {
            &frames[0]
        } else {
            &frames[step + 1]
        };
        let overlaps = level_overlaps(a, b, step)?;
        let previous = theta.clone();
        for (t, o) in theta.iter_mut().zip(&overlaps) {
            *t -= o.arg();
        }
        // Tr(W_j† W_{j+1}) = Σ √(λλ') e^{i(θ'−θ)} ⟨n|n'⟩
        let tr: Complex64 = (0..n)
            .map(|l| {
                let amp = (a.eigenvalues()[l] * b.eigenvalues()[l]).max(0.0).sqrt();
                overlaps[l] * Complex64::from_polar(amp, theta[l] - previous[l])
            })
            .sum();
        residual_max = residual_max.max(tr.im.abs() / dt);
        history.push(PhaseFrame {
            phases: theta.clone(),
        });
    }
    let theta_total = weights.iter().zip(&theta).map(|(w, t)| w * t).sum();
    Ok(TransportResult {
        phase_history: history,
        berry_phases: theta
            .iter()
            .map(|&t| BerryPhase::from_unwrapped(t))
            .collect(),
        connection_residual_max: residual_max,
        theta_total,
        weights,
    })
}

/// Berry phase of a pure family around a closed curve from the discrete
/// Wilson loop `−arg Π_j ⟨ψ_j|ψ_{j+1}⟩`, on the principal branch.
pub fn pure_berry_phase(fam: &dyn StateFamily, curve: &Curve) -> Result<f64> {
    if !fam.is_pure() {
        return Err(QgtError::NotPure);
    }
    if !curve.closed {
        return Err(QgtError::InvalidArgument(
            "Berry phase needs a closed curve".into(),
        ));
    }
    curve.check_closure(fam.domain())?;
    let states: Vec<_> = curve
        .points()
        .par_iter()
        .map(|p| fam.state_vector(p))
        .collect::<Result<_>>()?;
    let mut product = Complex64::new(1.0, 0.0);
    for j in 0..states.len() {
        let next = &states[(j + 1) % states.len()];
        product *= states[j].dotc(next);
        // keep the running product normalised
        let norm = product.norm();
        if norm > 0.0 {
            product /= norm;
        }
    }
    Ok(wrap_phase(-product.arg()))
}

/// Result of [`theta_g`].
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePhase {
    /// `θ_g = ½ Σ_p Σ_n λ_n φ_{p,n}`.
    pub theta_g: f64,
    /// `Σ_p |½ Σ_n λ_n φ_{p,n}|`, the plaquette estimate of `∫|F₁₂|/2`.
    pub abs_curvature: f64,
    /// Per-level sums `Σ_p φ_{p,n}`.
    pub level_flux: Vec<f64>,
}

/// Gauge-invariant surface phase over a patch from per-level plaquette
/// phases `φ_{p,n} = −arg(⟨1|2⟩⟨2|3⟩⟨3|4⟩⟨4|1⟩)`, with weights `λ_n` taken
/// at the plaquette centre.
pub fn theta_g(fam: &dyn StateFamily, patch: &SurfacePatch) -> Result<SurfacePhase> {
    if fam.n_params() != 2 {
        return Err(QgtError::NotTwoParameter {
            n_params: fam.n_params(),
        });
    }
    let lattice: Vec<SpectralDecomposition> = (0..patch.n_u * patch.n_v)
        .into_par_iter()
        .map(|idx| point_frame(fam, &patch.point(idx / patch.n_v, idx % patch.n_v)))
        .collect::<Result<_>>()?;
    let at = |i: usize, j: usize| &lattice[i * patch.n_v + j];
    let n = lattice[0].dim();

    let cells: Vec<(f64, Vec<f64>)> = (0..patch.n_cells())
        .into_par_iter()
        .map(|c| {
            let (i, j) = (c / (patch.n_v - 1), c % (patch.n_v - 1));
            let corners = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            let mut loop_product = vec![Complex64::new(1.0, 0.0); n];
            for e in 0..4 {
                let o = level_overlaps(corners[e], corners[(e + 1) % 4], c)?;
                for (acc, x) in loop_product.iter_mut().zip(o) {
                    *acc *= x;
                }
            }
            let phases: Vec<f64> = loop_product.iter().map(|p| -p.arg()).collect();
            let weights = if fam.is_pure() {
                vec![1.0]
            } else {
                fam.levels(&patch.midpoint(i, j))?.weights().to_vec()
            };
            let omega = 0.5 * weights.iter().zip(&phases).map(|(w, p)| w * p).sum::<f64>();
            Ok((omega, phases))
        })
        .collect::<Result<_>>()?;

    let theta_g = cells.iter().map(|(o, _)| o).sum();
    let abs_curvature = cells.iter().map(|(o, _)| o.abs()).sum();
    let level_flux = (0..n)
        .map(|l| cells.iter().map(|(_, p)| p[l]).sum())
        .collect();
    Ok(SurfacePhase {
        theta_g,
        abs_curvature,
        level_flux,
    })
}

/// `−π(1 − cos θ₀)`: Berry phase of `(cos θ/2, e^{iφ} sin θ/2)` around the
/// latitude `θ₀`, traversed with increasing `φ`.
pub fn monopole_latitude_phase(theta0: f64) -> f64 {
    -PI * (1.0 - theta0.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{bloch_family, BlochPure, DensityFamily, PureFamily};
    use crate::spectral::CVector;

    fn latitude(theta0: f64, n_steps: usize) -> Curve {
        Curve::new(move |t| vec![theta0, TAU * t], n_steps, true).unwrap()
    }

    #[test]
    fn curve_validation() {
        assert!(Curve::circle([0.0, 0.0], 1.0, 4).is_err());
        let c = Curve::rectangle(0.0, 1.0, 0.0, 2.0, 12).unwrap();
        assert_eq!(c.sample(0.0), vec![0.0, 0.0]);
        assert_eq!(c.sample(1.0), vec![0.0, 0.0]);
        assert_eq!(c.sample(1.0 / 6.0), vec![1.0, 0.0]);
        assert_eq!(c.points().len(), 12);
        let open = Curve::polyline(vec![vec![0.0], vec![1.0]], 10, false).unwrap();
        assert_eq!(open.points().len(), 11);
        assert!(SurfacePatch::new((0.0, 1.0), (0.0, 1.0), 3, 8).is_err());
    }

    #[test]
    fn closure_modulo_period() {
        let fam = BlochPure::new();
        latitude(1.0, 16).check_closure(fam.domain()).unwrap();
        let open_loop = Curve::new(|t| vec![1.0, 3.0 * t], 16, true).unwrap();
        assert!(open_loop.check_closure(fam.domain()).is_err());
    }

    #[test]
    fn constant_curve_no_phase() {
        let fam = bloch_family(false, Some(1.0), 1.0).unwrap();
        let curve = Curve::new(|_| vec![1.0, 0.5], 16, true).unwrap();
        let res = horizontal_lift(fam.as_ref(), &curve).unwrap();
        for b in &res.berry_phases {
            assert_eq!(b.unwrapped, 0.0);
        }
        assert_eq!(res.connection_residual_max, 0.0);
    }

    #[test]
    fn latitude_equator_pure() {
        let fam = BlochPure::new();
        let res = horizontal_lift(&fam, &latitude(PI / 2.0, 1000)).unwrap();
        let b = res.berry_phases[0];
        assert!((b.unwrapped + PI).abs() < 1e-5);
        assert!((b.principal - PI).abs() < 1e-5);
        assert_eq!(b.winding, -1);
    }

    #[test]
    fn latitude_convergence() {
        let fam = BlochPure::new();
        let theta0: f64 = 1.0;
        let exact = monopole_latitude_phase(theta0);
        let e3 = (pure_berry_phase(&fam, &latitude(theta0, 1000)).unwrap() - exact).abs();
        let e4 = (pure_berry_phase(&fam, &latitude(theta0, 10000)).unwrap() - exact).abs();
        assert!(e4 < 1e-7);
        assert!(e4 < e3 / 50.0);
    }

    #[test]
    fn thermal_bloch_latitude_per_level() {
        let fam = bloch_family(false, Some(1.0), 1.0).unwrap();
        for theta0 in [PI / 2.0, 1.0] {
            let res = horizontal_lift(fam.as_ref(), &latitude(theta0, 2000)).unwrap();
            // the dominant level is the field ground state, whose phase is
            // opposite to the pure family's (modulo 2π)
            let pure = monopole_latitude_phase(theta0);
            assert!(
                wrap_phase(res.berry_phases[0].principal + pure).abs() < 1e-5,
                "{:?}",
                res.berry_phases
            );
            assert!(
                wrap_phase(res.berry_phases[1].principal - pure).abs() < 1e-5,
                "{:?}",
                res.berry_phases
            );
            assert!(
                res.connection_residual_max <= 1e-8,
                "{}",
                res.connection_residual_max
            );
        }
    }

    #[test]
    fn pure_phase_orientation_and_gauge() {
        let fam = BlochPure::new();
        let theta0 = 0.8;
        let fwd = pure_berry_phase(&fam, &latitude(theta0, 512)).unwrap();
        let rev = Curve::new(move |t| vec![theta0, -TAU * t], 512, true).unwrap();
        let back = pure_berry_phase(&fam, &rev).unwrap();
        assert!((fwd + back).abs() < 1e-12);

        // rough per-point phases
        let base = BlochPure::new();
        let rough = PureFamily::new("rough", 2, base.domain().clone(), move |r| {
            let chi = (1e4 * (r[0] + 3.0 * r[1])).sin() * 3.0;
            Ok(base.state_vector(r)? * Complex64::from_polar(1.0, chi))
        });
        let g = pure_berry_phase(&rough, &latitude(theta0, 512)).unwrap();
        assert!((g - fwd).abs() < 1e-9);
    }

    #[test]
    fn tiny_loop_curvature_times_area() {
        let fam = BlochPure::new();
        let (theta, radius): (f64, f64) = (1.2, 1e-3);
        let curve = Curve::circle([theta, 0.4], radius, 256).unwrap();
        let phase = pure_berry_phase(&fam, &curve).unwrap();
        // f = −2 Im Q_θφ = −sinθ/2
        let expected = -theta.sin() / 2.0 * PI * radius * radius;
        assert!((phase - expected).abs() < 1e-3 * expected.abs());
    }

    #[test]
    fn pure_phase_rejects_mixed() {
        let fam = bloch_family(false, Some(1.0), 1.0).unwrap();
        assert!(matches!(
            pure_berry_phase(fam.as_ref(), &latitude(1.0, 16)),
            Err(QgtError::NotPure)
        ));
    }

    #[test]
    fn theta_g_constant_weights_matches_boundary() {
        let fam = bloch_family(false, Some(1.0), 1.0).unwrap();
        let patch = SurfacePatch::new((0.4, 1.0), (0.0, 1.5), 65, 65).unwrap();
        let sp = theta_g(fam.as_ref(), &patch).unwrap();
        let lift = horizontal_lift(fam.as_ref(), &patch.boundary(4096).unwrap()).unwrap();
        let half: f64 = 0.5 * lift.theta_total;
        assert!((sp.theta_g - half).abs() < 1e-4, "{} vs {half}", sp.theta_g);
    }

    #[test]
    fn theta_g_pure_cap_stokes() {
        let fam = BlochPure::new();
        let theta0 = 1.1;
        let patch = SurfacePatch::new((1e-6, theta0), (0.0, TAU), 65, 129).unwrap();
        let sp = theta_g(&fam, &patch).unwrap();
        let berry = monopole_latitude_phase(theta0);
        assert!((sp.theta_g - 0.5 * berry).abs() < 1e-3);
    }

    #[test]
    fn theta_g_second_order() {
        let fam = bloch_family(false, Some(2.0), 1.0).unwrap();
        let coarse = SurfacePatch::new((0.3, 1.2), (0.0, 2.0), 9, 9).unwrap();
        let a = theta_g(fam.as_ref(), &coarse).unwrap().theta_g;
        let b = theta_g(fam.as_ref(), &coarse.refined(2)).unwrap().theta_g;
        let c = theta_g(fam.as_ref(), &coarse.refined(4)).unwrap().theta_g;
        assert!((a - b).abs() >= 3.5 * (b - c).abs());
    }

    #[test]
    fn theta_g_commuting_family_zero() {
        let fam = DensityFamily::new("commuting", 2, Domain::unbounded(2), |r| {
            let p = 0.7 + 0.1 * r[0].sin() * r[1].cos();
            Ok(CMatrix::from_diagonal(&CVector::from_vec(vec![
                Complex64::new(p, 0.0),
                Complex64::new(1.0 - p, 0.0),
            ])))
        });
        let patch = SurfacePatch::new((0.0, 1.0), (0.0, 1.0), 8, 8).unwrap();
        let sp = theta_g(&fam, &patch).unwrap();
        assert_eq!(sp.theta_g, 0.0);
    }

    #[test]
    fn theta_g_needs_two_parameters() {
        let fam = crate::models::diagonal_qubit_family();
        let patch = SurfacePatch::new((0.0, 1.0), (0.0, 1.0), 8, 8).unwrap();
        assert!(matches!(
            theta_g(&fam, &patch),
            Err(QgtError::NotTwoParameter { .. })
        ));
    }

    #[test]
    fn crossing_detected() {
        // levels swap order as R passes 0.5
        let fam = DensityFamily::new("crossing", 2, Domain::unbounded(1), |r| {
            let p = 0.5 + 0.3 * (r[0] - 0.5);
            Ok(CMatrix::from_diagonal(&CVector::from_vec(vec![
                Complex64::new(p, 0.0),
                Complex64::new(1.0 - p, 0.0),
            ])))
        });
        let curve = Curve::polyline(vec![vec![0.0], vec![1.05]], 20, false).unwrap();
        assert!(matches!(
            horizontal_lift(&fam, &curve),
            Err(QgtError::LevelCrossing { .. })
        ));
    }
}
