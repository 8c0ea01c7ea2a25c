//! Task execution.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use qgt_core::distances::sjoqvist_finite_distance;
use qgt_core::inequalities::{run_inequality_suite, volume_phase_relation};
use qgt_core::models::{
    bloch_family, bosonic_coherent_family, diagonal_qubit_family, ground_state_family,
    random_smooth_family, BlochHamiltonian,
};
use qgt_core::tensors::qgt;
use qgt_core::transport::{horizontal_lift, theta_g};
use qgt_core::StateFamily;

use crate::config::{model_params, ModelName, ModelSpec, RunConfig, Task, Threads};
use crate::error::CliError;
use crate::output::{qgt_blocks, qgt_columns, qgt_row, Cell, Report};
use crate::region::{build_curve, build_patch, Region};

/// Result of a run: the report and whether a verification passed.
pub struct Outcome {
    pub report: Report,
    pub header: Map<String, Value>,
    pub verified: Option<bool>,
}

pub fn build_family(spec: &ModelSpec) -> Result<Box<dyn StateFamily>, CliError> {
    let cfg = &spec.config;
    let ctx = |e| CliError::compute("build model", spec.name.name(), e);
    Ok(match spec.name {
        ModelName::ThermalBloch => bloch_family(false, Some(cfg.beta), cfg.omega).map_err(ctx)?,
        ModelName::PureBloch => bloch_family(true, None, cfg.omega).map_err(ctx)?,
        ModelName::GroundBloch => Box::new(ground_state_family(BlochHamiltonian::new(cfg.omega))),
        ModelName::BosonicCoherent => Box::new(bosonic_coherent_family(cfg).map_err(ctx)?),
        ModelName::Random => {
            Box::new(random_smooth_family(cfg.seed, spec.dim, spec.params).map_err(ctx)?)
        }
        ModelName::DiagonalQubit => Box::new(diagonal_qubit_family()),
    })
}

fn fmt_point(r: &[f64]) -> String {
    let parts: Vec<String> = r.iter().map(|x| format!("{x}")).collect();
    format!("R=({})", parts.join(", "))
}

/// Runs the configured task inside a pool of the requested size.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n = match cfg.threads {
        Threads::Auto => 0,
        Threads::Fixed(n) => n,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    pool.install(|| run_task(cfg))
}

fn run_task(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut header = Map::new();
    header.insert("task".into(), json!(cfg.task.name()));
    if let Some(model) = &cfg.model {
        header.insert("model".into(), json!(model.name.name()));
    }
    let mut verified = None;
    let report = match cfg.task {
        Task::Models => models_report(),
        Task::Verify => {
            let (rep, ok) = verify(cfg)?;
            verified = Some(ok);
            rep
        }
        _ => {
            let spec = cfg.model.as_ref().ok_or(CliError::MissingModel)?;
            let fam = build_family(spec)?;
            let region = cfg.region.as_ref().expect("validated region");
            match (cfg.task, region) {
                (Task::Tensor, Region::Point(r)) => tensor(fam.as_ref(), r, cfg)?,
                (Task::Sweep, Region::Grid(axes)) => {
                    sweep(fam.as_ref(), &Region::grid_points(axes), cfg)?
                }
                (Task::Distance, Region::Point(a)) => {
                    distance(fam.as_ref(), a, cfg.to.as_deref().expect("validated"))?
                }
                (Task::Transport, Region::Curve(spec)) => {
                    let curve = build_curve(spec)
                        .map_err(|e| CliError::compute("transport", "curve", e))?;
                    transport(fam.as_ref(), &curve)?
                }
                (Task::ThetaG, Region::Patch(axes)) => {
                    let patch =
                        build_patch(axes).map_err(|e| CliError::compute("theta-g", "patch", e))?;
                    surface_phase(fam.as_ref(), &patch)?
                }
                (Task::Volume, Region::Patch(axes)) => {
                    let patch =
                        build_patch(axes).map_err(|e| CliError::compute("volume", "patch", e))?;
                    volume(fam.as_ref(), &patch, cfg)?
                }
                (task, _) => {
                    return Err(CliError::IncompatibleTaskRegion {
                        task: task.name().into(),
                        region: "given".into(),
                    })
                }
            }
        }
    };
    Ok(Outcome {
        report,
        header,
        verified,
    })
}

fn models_report() -> Report {
    let mut rep = Report::new(vec!["name".into(), "params".into(), "description".into()]);
    for m in ModelName::ALL {
        let spec = ModelSpec {
            name: m,
            config: Default::default(),
            dim: 3,
            params: 2,
        };
        let k = if m == ModelName::Random {
            "params".to_string()
        } else {
            model_params(&spec).to_string()
        };
        rep.push(vec![
            Cell::Text(m.name().into()),
            Cell::Text(k),
            Cell::Text(m.summary().into()),
        ]);
    }
    rep
}

fn tensor(fam: &dyn StateFamily, r: &[f64], cfg: &RunConfig) -> Result<Report, CliError> {
    let q = qgt(fam, r, &cfg.fd).map_err(|e| CliError::compute("tensor", fmt_point(r), e))?;
    let mut rep = Report::new(qgt_columns(r.len()));
    rep.push(qgt_row(r, &q));
    rep.extra = qgt_blocks(&q);
    rep.extra.insert("R".into(), json!(r));
    Ok(rep)
}

/// Evaluates every grid point in parallel; rows come out in grid order and
/// the first failing point in that order is reported.
fn sweep(fam: &dyn StateFamily, points: &[Vec<f64>], cfg: &RunConfig) -> Result<Report, CliError> {
    let results: Vec<_> = points.par_iter().map(|r| qgt(fam, r, &cfg.fd)).collect();
    let k = points.first().map_or(0, Vec::len);
    let mut rep = Report::new(qgt_columns(k));
    for (r, res) in points.iter().zip(results) {
        let q = res.map_err(|e| CliError::compute("sweep", fmt_point(r), e))?;
        rep.push(qgt_row(r, &q));
    }
    Ok(rep)
}

fn distance(fam: &dyn StateFamily, a: &[f64], b: &[f64]) -> Result<Report, CliError> {
    let rho_a = fam
        .evaluate(a)
        .map_err(|e| CliError::compute("distance", fmt_point(a), e))?;
    let rho_b = fam
        .evaluate(b)
        .map_err(|e| CliError::compute("distance", fmt_point(b), e))?;
    let d = sjoqvist_finite_distance(&rho_a, &rho_b).map_err(|e| {
        CliError::compute(
            "distance",
            format!("{} → {}", fmt_point(a), fmt_point(b)),
            e,
        )
    })?;
    let mut rep = Report::new(vec![
        "distance".into(),
        "squared".into(),
        "near_degenerate".into(),
    ]);
    rep.push(vec![
        Cell::Real(d.distance),
        Cell::Real(d.squared),
        Cell::Flag(d.near_degenerate),
    ]);
    rep.extra.insert("from".into(), json!(a));
    rep.extra.insert("to".into(), json!(b));
    Ok(rep)
}

fn transport(
    fam: &dyn StateFamily,
    curve: &qgt_core::transport::Curve,
) -> Result<Report, CliError> {
    let res =
        horizontal_lift(fam, curve).map_err(|e| CliError::compute("transport", "curve", e))?;
    let mut rep = Report::new(
        [
            "level",
            "weight",
            "berry_principal",
            "berry_unwrapped",
            "winding",
        ]
        .map(String::from)
        .to_vec(),
    );
    for (n, (b, w)) in res.berry_phases.iter().zip(&res.weights).enumerate() {
        rep.push(vec![
            Cell::Int(n as i64),
            Cell::Real(*w),
            Cell::Real(b.principal),
            Cell::Real(b.unwrapped),
            Cell::Int(b.winding),
        ]);
    }
    rep.extra
        .insert("theta_total".into(), json!(res.theta_total));
    rep.extra.insert(
        "connection_residual_max".into(),
        json!(res.connection_residual_max),
    );
    Ok(rep)
}

fn surface_phase(
    fam: &dyn StateFamily,
    patch: &qgt_core::transport::SurfacePatch,
) -> Result<Report, CliError> {
    let sp = theta_g(fam, patch).map_err(|e| CliError::compute("theta-g", "patch", e))?;
    let mut cols = vec!["theta_g".to_string(), "abs_curvature".to_string()];
    cols.extend((1..=sp.level_flux.len()).map(|n| format!("flux_{n}")));
    let mut rep = Report::new(cols);
    let mut row = vec![Cell::Real(sp.theta_g), Cell::Real(sp.abs_curvature)];
    row.extend(sp.level_flux.iter().map(|&f| Cell::Real(f)));
    rep.push(row);
    Ok(rep)
}

fn volume(
    fam: &dyn StateFamily,
    patch: &qgt_core::transport::SurfacePatch,
    cfg: &RunConfig,
) -> Result<Report, CliError> {
    let rel = volume_phase_relation(fam, patch, &cfg.fd)
        .map_err(|e| CliError::compute("volume", "patch", e))?;
    let mut rep = Report::new(
        [
            "volume",
            "abs_curvature",
            "theta_g",
            "volume_curvature_residual",
            "curvature_phase_residual",
            "pass",
        ]
        .map(String::from)
        .to_vec(),
    );
    rep.push(vec![
        Cell::Real(rel.volume),
        Cell::Real(rel.abs_curvature),
        Cell::Real(rel.theta_g),
        Cell::Real(rel.volume_vs_curvature.residual),
        Cell::Real(rel.curvature_vs_phase.residual),
        Cell::Flag(rel.volume_vs_curvature.pass && rel.curvature_vs_phase.pass),
    ]);
    Ok(rep)
}

fn verify(cfg: &RunConfig) -> Result<(Report, bool), CliError> {
    let v = &cfg.verify;
    let (summary, _) = run_inequality_suite(v.seed, v.draws, &cfg.fd)
        .map_err(|e| CliError::compute("verify", format!("seed {}", v.seed), e))?;
    let (argmin_name, argmin_context) = summary
        .argmin
        .as_ref()
        .map(|r| (r.name.clone(), r.context.clone()))
        .unwrap_or_default();
    let mut rep = Report::new(
        [
            "suite",
            "seed",
            "draws",
            "reports",
            "failures",
            "min_scaled_residual",
            "argmin",
            "argmin_context",
        ]
        .map(String::from)
        .to_vec(),
    );
    rep.push(vec![
        Cell::Text(v.suite.clone()),
        Cell::UInt(v.seed),
        Cell::Int(v.draws as i64),
        Cell::Int(summary.count as i64),
        Cell::Int(summary.failures as i64),
        Cell::Real(summary.min_scaled_residual),
        Cell::Text(argmin_name),
        Cell::Text(argmin_context),
    ]);
    rep.extra.insert("passed".into(), json!(summary.passed()));
    Ok((rep, summary.passed()))
}
