//! Numerical witnesses of the metric/curvature inequalities, the quantum
//! volume of a two-parameter patch, and the volume-phase relation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::derivatives::StepPolicy;
use crate::error::{QgtError, Result};
use crate::models::{random_smooth_family, StateFamily};
use crate::spectral::CMatrix;
use crate::tensors::{bures_from_tangent, qgt, qgt_from_tangent, BuresResult, QgtResult, RMatrix};
use crate::transport::{theta_g, SurfacePatch};

pub const RESIDUAL_TOL: f64 = 1e-10;

/// One inequality `lhs ≥ rhs` evaluated at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub residual: f64,
    pub pass: bool,
    pub context: String,
}

impl InequalityReport {
    pub fn new(name: &str, lhs: f64, rhs: f64, context: String) -> Self {
        let residual = lhs - rhs;
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            residual,
            pass: residual >= -RESIDUAL_TOL * Self::scale_of(lhs, rhs),
            context,
        }
    }

    fn scale_of(lhs: f64, rhs: f64) -> f64 {
        1f64.max(lhs.abs()).max(rhs.abs())
    }

    /// Residual divided by `max(1, |lhs|, |rhs|)`.
    pub fn scaled_residual(&self) -> f64 {
        self.residual / Self::scale_of(self.lhs, self.rhs)
    }

    pub fn with_context(mut self, context: &str) -> Self {
        self.context = context.to_string();
        self
    }
}

/// `Q_μμ Q_νν ≥ |Q_μν|²` for the full tensor and its pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct PairInequality {
    pub full: InequalityReport,
    pub fisher_rao: InequalityReport,
    /// The `Σ_n λ_n Q^n` block.
    pub weighted_fs: InequalityReport,
    pub per_level: Vec<InequalityReport>,
}

impl PairInequality {
    pub fn all(&self) -> impl Iterator<Item = &InequalityReport> {
        [&self.full, &self.fisher_rao, &self.weighted_fs]
            .into_iter()
            .chain(&self.per_level)
    }
}

fn check_axes(k: usize, mu: usize, nu: usize) -> Result<()> {
    for axis in [mu, nu] {
        if axis >= k {
            return Err(QgtError::AxisOutOfRange { axis, n_params: k });
        }
    }
    Ok(())
}

fn complex_pair(name: &str, q: &CMatrix, mu: usize, nu: usize) -> InequalityReport {
    InequalityReport::new(
        name,
        q[(mu, mu)].re * q[(nu, nu)].re,
        q[(mu, nu)].norm_sqr(),
        format!("axes ({mu}, {nu})"),
    )
}

fn real_pair(name: &str, g: &RMatrix, mu: usize, nu: usize) -> InequalityReport {
    InequalityReport::new(
        name,
        g[(mu, mu)] * g[(nu, nu)],
        g[(mu, nu)].powi(2),
        format!("axes ({mu}, {nu})"),
    )
}

pub fn qgt_pair_inequality(q: &QgtResult, mu: usize, nu: usize) -> Result<PairInequality> {
    check_axes(q.n_params(), mu, nu)?;
    let k = q.n_params();
    let mut weighted = CMatrix::zeros(k, k);
    for lvl in &q.per_level {
        weighted += &lvl.q_n * num_complex::Complex64::new(lvl.weight, 0.0);
    }
    Ok(PairInequality {
        full: complex_pair("qgt-pair", &q.q, mu, nu),
        fisher_rao: real_pair("fisher-rao-pair", &q.g_fr, mu, nu),
        weighted_fs: complex_pair("weighted-fs-pair", &weighted, mu, nu),
        per_level: q
            .per_level
            .iter()
            .enumerate()
            .map(|(n, lvl)| {
                complex_pair("level-pair", &lvl.q_n, mu, nu)
                    .with_context(&format!("level {n}, axes ({mu}, {nu})"))
            })
            .collect(),
    })
}

pub fn bures_pair_inequality(g: &BuresResult, mu: usize, nu: usize) -> Result<InequalityReport> {
    check_axes(g.g_b.nrows(), mu, nu)?;
    Ok(real_pair("bures-pair", &g.g_b, mu, nu))
}

/// `√det(Re Q) ≥ |F₁₂|/2` with `F = −2 Im Q`.
pub fn det_curvature_bound_2d(q: &QgtResult) -> Result<InequalityReport> {
    if q.n_params() != 2 {
        return Err(QgtError::NotTwoParameter {
            n_params: q.n_params(),
        });
    }
    Ok(InequalityReport::new(
        "det-curvature",
        sqrt_det(&q.metric()),
        q.q[(0, 1)].im.abs(),
        String::new(),
    ))
}

fn sqrt_det(g: &RMatrix) -> f64 {
    (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)])
        .max(0.0)
        .sqrt()
}

fn require_two(fam: &dyn StateFamily) -> Result<()> {
    if fam.n_params() != 2 {
        return Err(QgtError::NotTwoParameter {
            n_params: fam.n_params(),
        });
    }
    Ok(())
}

/// Midpoint-rule integral of `√det(Re Q)` over the patch cells.
pub fn quantum_volume(
    fam: &dyn StateFamily,
    patch: &SurfacePatch,
    policy: &StepPolicy,
) -> Result<f64> {
    require_two(fam)?;
    let cells: Vec<f64> = (0..patch.n_cells())
        .into_par_iter()
        .map(|c| {
            let (i, j) = (c / (patch.n_v - 1), c % (patch.n_v - 1));
            Ok(sqrt_det(&qgt(fam, &patch.midpoint(i, j), policy)?.metric()))
        })
        .collect::<Result<_>>()?;
    Ok(cells.iter().sum::<f64>() * patch.cell_area())
}

/// `V ≥ ∫|F₁₂|/2 ≥ |θ_g|` on one patch.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumePhaseReport {
    pub volume: f64,
    /// Plaquette estimate of `∫|F₁₂|/2`.
    pub abs_curvature: f64,
    pub theta_g: f64,
    /// `V ≥ |θ_g|`.
    pub report: InequalityReport,
    /// `V ≥ ∫|F₁₂|/2`.
    pub volume_vs_curvature: InequalityReport,
    /// `∫|F₁₂|/2 ≥ |θ_g|`.
    pub curvature_vs_phase: InequalityReport,
}

pub fn volume_phase_relation(
    fam: &dyn StateFamily,
    patch: &SurfacePatch,
    policy: &StepPolicy,
) -> Result<VolumePhaseReport> {
    let volume = quantum_volume(fam, patch, policy)?;
    let sp = theta_g(fam, patch)?;
    let ctx = format!(
        "patch u=[{}, {}] v=[{}, {}]",
        patch.u.0, patch.u.1, patch.v.0, patch.v.1
    );
    Ok(VolumePhaseReport {
        volume,
        abs_curvature: sp.abs_curvature,
        theta_g: sp.theta_g,
        report: InequalityReport::new("volume-phase", volume, sp.theta_g.abs(), ctx.clone()),
        volume_vs_curvature: InequalityReport::new(
            "volume-curvature",
            volume,
            sp.abs_curvature,
            ctx.clone(),
        ),
        curvature_vs_phase: InequalityReport::new(
            "curvature-phase",
            sp.abs_curvature,
            sp.theta_g.abs(),
            ctx,
        ),
    })
}

/// Deterministic aggregate over many reports.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub count: usize,
    pub failures: usize,
    pub min_scaled_residual: f64,
    /// The report attaining the minimum scaled residual.
    pub argmin: Option<InequalityReport>,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn aggregate<'a>(reports: impl IntoIterator<Item = &'a InequalityReport>) -> SuiteSummary {
    let mut summary = SuiteSummary {
        count: 0,
        failures: 0,
        min_scaled_residual: f64::INFINITY,
        argmin: None,
    };
    for r in reports {
        summary.count += 1;
        if !r.pass {
            summary.failures += 1;
        }
        let s = r.scaled_residual();
        if s < summary.min_scaled_residual {
            summary.min_scaled_residual = s;
            summary.argmin = Some(r.clone());
        }
    }
    summary
}

/// Reports for one randomized draw: a seeded random family with dimension
/// in 2..=6 and 1..=3 parameters, a random point and a random axis pair.
pub fn random_draw_reports(
    seed: u64,
    draw: u64,
    policy: &StepPolicy,
) -> Result<Vec<InequalityReport>> {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(draw));
    let dim = rng.random_range(2..=6);
    let k = rng.random_range(1..=3);
    let fam = random_smooth_family(rng.random(), dim, k)?;
    let r: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mu = rng.random_range(0..k);
    let nu = if k == 1 {
        0
    } else {
        (mu + rng.random_range(1..k)) % k
    };

    let tangent = crate::derivatives::spectral_tangent(
        &fam,
        &r,
        policy,
        crate::derivatives::Route::Perturbative,
        None,
    )?;
    let q = qgt_from_tangent(&tangent);
    let g_b = bures_from_tangent(&tangent);
    let ctx = format!("draw {draw}: dim {dim}, k {k}, R {r:?}, axes ({mu}, {nu})");

    let mut out: Vec<InequalityReport> = qgt_pair_inequality(&q, mu, nu)?.all().cloned().collect();
    out.push(bures_pair_inequality(&g_b, mu, nu)?);
    for a in 0..k {
        out.push(InequalityReport::new(
            "bures-below-qgt",
            q.q[(a, a)].re,
            g_b.g_b[(a, a)],
            String::new(),
        ));
    }
    if k == 2 {
        out.push(det_curvature_bound_2d(&q)?);
    }
    for rep in &mut out {
        rep.context = if rep.context.is_empty() {
            ctx.clone()
        } else {
            format!("{ctx}; {}", rep.context)
        };
    }
    Ok(out)
}

/// Runs `draws` randomized draws in parallel; the result does not depend on
/// the thread count.
pub fn run_inequality_suite(
    seed: u64,
    draws: usize,
    policy: &StepPolicy,
) -> Result<(SuiteSummary, Vec<InequalityReport>)> {
    let reports: Vec<Vec<InequalityReport>> = (0..draws as u64)
        .into_par_iter()
        .map(|d| random_draw_reports(seed, d, policy))
        .collect::<Result<_>>()?;
    let flat: Vec<InequalityReport> = reports.into_iter().flatten().collect();
    Ok((aggregate(&flat), flat))
}
