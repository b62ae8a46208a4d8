use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gram::relative_gap;
use super::pointwise::pointwise_hr_pair_in;
use crate::error::{Error, Result};
use crate::exterior::{random_kahler, Form};
use crate::parallel::{run_trials, Execution};
use crate::ring::{torus_ring, Model};
use crate::scalar::DEFAULT_TOLERANCE;
use crate::symfunc::{schur_pair, Partition};
use crate::verdict::{Outcome, Verdict};

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// Randomized search for pointwise failures of `(s_λ, s'_λ)` evaluated on
/// `e` random Kähler forms on `ℂ^d`, tested against `ω_std`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub d: usize,
    pub e: usize,
    pub partition: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<Partition> {
        if self.d < 2 {
            return Err(Error::Config(format!("d = {} but at least 2 is needed", self.d)));
        }
        let lambda = Partition::new(self.partition.clone()).map_err(|e| Error::Config(e.to_string()))?;
        if lambda.weight() != self.d - 1 {
            return Err(Error::Config(format!(
                "|λ| = {} but d − 1 = {}",
                lambda.weight(),
                self.d - 1
            )));
        }
        if lambda.len() > self.e {
            return Err(Error::Config(format!("λ has {} parts but e = {}", lambda.len(), self.e)));
        }
        Ok(lambda)
    }
}

/// Everything needed to replay a trial: the sampled forms and the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub outcome: Outcome,
    /// `min|μ| / max|μ|` over the Gram eigenvalues.
    pub margin: f64,
    pub forms: Vec<serde_json::Value>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub passes: usize,
    pub fails: usize,
    pub degenerate: usize,
    pub worst_margin: Option<f64>,
    pub worst_trial: Option<usize>,
    pub failures: Vec<TrialRecord>,
}

impl SearchReport {
    pub fn all_pass(&self) -> bool {
        self.passes == self.config.trials
    }
}

/// The forms of trial `t`: ChaCha8 seeded with `seed`, stream `t`.
pub fn trial_forms(config: &SearchConfig, t: usize) -> Vec<Form<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(t as u64);
    (0..config.e).map(|_| random_kahler(config.d, &mut rng)).collect()
}

pub fn run_trial(config: &SearchConfig, lambda: &Partition, model: &Model<f64>, t: usize) -> Result<TrialRecord> {
    let forms = trial_forms(config, t);
    let (s, ds) = schur_pair(lambda, &forms)?;
    let verdict = pointwise_hr_pair_in(model, &s, &ds, &Form::kahler_std(config.d), config.tolerance)?;
    Ok(TrialRecord {
        trial: t,
        outcome: verdict.outcome,
        margin: relative_gap(&verdict.eigenvalues),
        forms: forms.iter().map(Form::to_json).collect(),
        verdict,
    })
}

/// Deterministic in `config` regardless of `exec`.
pub fn sample_search(config: &SearchConfig, exec: Execution) -> Result<SearchReport> {
    let lambda = config.validate()?;
    let model = torus_ring::<f64>(config.d)?;
    let records = run_trials(config.trials, exec, |t| run_trial(config, &lambda, &model, t));
    let mut report = SearchReport {
        config: config.clone(),
        passes: 0,
        fails: 0,
        degenerate: 0,
        worst_margin: None,
        worst_trial: None,
        failures: Vec::new(),
    };
    for r in records {
        let r = r?;
        if report.worst_margin.is_none_or(|m| r.margin < m) {
            report.worst_margin = Some(r.margin);
            report.worst_trial = Some(r.trial);
        }
        match r.outcome {
            Outcome::Pass => report.passes += 1,
            Outcome::Fail => report.fails += 1,
            Outcome::Degenerate => report.degenerate += 1,
        }
        if !r.outcome.is_pass() {
            report.failures.push(r);
        }
    }
    Ok(report)
}
