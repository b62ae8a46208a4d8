use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::curvature::{constraint_project, random_curvature, trace_check_in, CurvatureMatrix, TraceReport};
use super::higgs::{higgs_curvature_term, hitchin_simpson, random_higgs};
use crate::error::{Error, Result};
use crate::exterior::{random_kahler, Form};
use crate::parallel::{run_trials, Execution};
use crate::ring::{torus_ring, Model};
use crate::scalar::DEFAULT_TOLERANCE;
use crate::symfunc::{schur_pair, Partition};

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// Random admissible curvatures against `(s_{(d−1)}, s'_{(d−1)})` of `e`
/// random Kähler forms. With `higgs`, the curvature is the trace-free
/// Hitchin–Simpson curvature of a random nilpotent Higgs field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureConfig {
    pub d: usize,
    pub r: usize,
    pub e: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub higgs: bool,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSummary {
    pub config: CurvatureConfig,
    pub reports: Vec<TraceReport>,
    /// Smallest `total / scale` over all trials.
    pub worst_total: Option<f64>,
    pub all_nonnegative: bool,
}

/// One trial: `(F₀, Ω_{d−1}, Ω_{d−2})` for ChaCha8 seed `seed`, stream `t`.
pub fn curvature_instance(
    config: &CurvatureConfig,
    t: usize,
) -> Result<(CurvatureMatrix<f64>, Form<f64>, Form<f64>)> {
    if config.d < 2 || config.r == 0 || config.e == 0 {
        return Err(Error::Config("need d >= 2, r >= 1 and e >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(t as u64);
    let forms: Vec<Form<f64>> = (0..config.e).map(|_| random_kahler(config.d, &mut rng)).collect();
    let (omega1, omega2) = schur_pair(&Partition::row(config.d - 1), &forms)?;
    let raw = random_curvature(config.r, config.d, &mut rng);
    let f0 = if config.higgs {
        let theta = random_higgs(config.r, config.d, &mut rng);
        let term = higgs_curvature_term(&theta)?;
        // the Chern part is chosen so the combined curvature is admissible
        let target = constraint_project(&raw.try_add(&term)?, &omega1)?;
        let neg_term = CurvatureMatrix::new(
            term.entries().iter().map(|row| row.iter().map(|f| -f).collect()).collect(),
        )?;
        hitchin_simpson(&target.try_add(&neg_term)?, &theta)?
    } else {
        constraint_project(&raw, &omega1)?
    };
    Ok((f0, omega1, omega2))
}

fn trial(config: &CurvatureConfig, model: &Model<f64>, t: usize) -> Result<TraceReport> {
    let (f0, omega1, omega2) = curvature_instance(config, t)?;
    trace_check_in(model, &f0, &omega1, &omega2, config.tolerance)
}

pub fn curvature_trials(config: &CurvatureConfig, exec: Execution) -> Result<CurvatureSummary> {
    let model = torus_ring::<f64>(config.d)?;
    let reports = run_trials(config.trials, exec, |t| trial(config, &model, t))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let worst_total = reports.iter().map(|r| r.total / r.scale).reduce(f64::min);
    Ok(CurvatureSummary {
        config: config.clone(),
        all_nonnegative: reports.iter().all(|r| r.nonnegative),
        worst_total,
        reports,
    })
}
