//! The full phenotype: every behavioral metric computed from a complete
//! benchmark run. A missing entry is an error, never a silent gap.

use std::collections::BTreeMap;

use phenolab_core::{TaskId, Transcript};
use serde::{Deserialize, Serialize};

use crate::{
    fit_exploration, fit_learning, fit_prior_likelihood, metacognition, model_basedness,
    performance::bart_risk, MetricsError,
};

/// The ten behavioral metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhenotypeVector {
    pub prior_weighting: f64,
    pub likelihood_weighting: f64,
    pub directed_exploration: f64,
    pub random_exploration: f64,
    pub meta_cognition: f64,
    pub learning_rate: f64,
    pub optimism_bias: f64,
    pub model_basedness: f64,
    pub temporal_discounting: f64,
    pub risk: f64,
}

/// The six performance metrics (temporal discounting's score is behavioral).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerformanceVector {
    pub posterior_accuracy: f64,
    pub horizon_dollars: f64,
    pub restless_accuracy: f64,
    pub instrumental_dollars: f64,
    pub two_step_treasures: f64,
    pub bart_points: f64,
}

impl PhenotypeVector {
    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "prior_weighting" => self.prior_weighting,
            "likelihood_weighting" => self.likelihood_weighting,
            "directed_exploration" => self.directed_exploration,
            "random_exploration" => self.random_exploration,
            "meta_cognition" => self.meta_cognition,
            "learning_rate" => self.learning_rate,
            "optimism_bias" => self.optimism_bias,
            "model_basedness" => self.model_basedness,
            "temporal_discounting" => self.temporal_discounting,
            "risk" => self.risk,
            _ => return None,
        })
    }
}

impl PerformanceVector {
    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "posterior_accuracy" => self.posterior_accuracy,
            "horizon_dollars" => self.horizon_dollars,
            "restless_accuracy" => self.restless_accuracy,
            "instrumental_dollars" => self.instrumental_dollars,
            "two_step_treasures" => self.two_step_treasures,
            "bart_points" => self.bart_points,
            _ => return None,
        })
    }
}

/// Fits every behavioral metric. Transcripts are pooled across simulations
/// per task before fitting.
pub fn compute_phenotype(
    by_task: &BTreeMap<TaskId, Vec<Transcript>>,
) -> Result<PhenotypeVector, MetricsError> {
    let get = |task: TaskId| -> Result<&Vec<Transcript>, MetricsError> {
        by_task
            .get(&task)
            .filter(|v| !v.is_empty())
            .ok_or(MetricsError::MissingTask(task))
    };

    let urn_fit = fit_prior_likelihood(get(TaskId::ProbabilisticReasoning)?)?;
    let exploration = fit_exploration(get(TaskId::Horizon)?)?;
    let meta = metacognition(get(TaskId::RestlessBandit)?)?;
    let learning = fit_learning(get(TaskId::InstrumentalLearning)?)?;
    let stay = model_basedness(get(TaskId::TwoStep)?)?;
    let discounting_transcripts = get(TaskId::TemporalDiscounting)?;
    let mut score_sum = 0.0;
    for t in discounting_transcripts {
        score_sum += f64::from(phenolab_tasks::temporal_discounting::score(t)?);
    }
    let discounting = score_sum / discounting_transcripts.len() as f64;
    let risk = bart_risk(get(TaskId::Bart)?)?;

    Ok(PhenotypeVector {
        prior_weighting: urn_fit.beta1,
        likelihood_weighting: urn_fit.beta2,
        directed_exploration: exploration.directed.value,
        random_exploration: exploration.random.value,
        meta_cognition: meta.qsr,
        learning_rate: learning.alpha,
        optimism_bias: learning.optimism_bias,
        model_basedness: stay.interaction.value,
        temporal_discounting: discounting,
        risk,
    })
}
