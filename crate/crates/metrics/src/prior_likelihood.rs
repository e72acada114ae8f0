//! Prior and likelihood weightings from the urn task. The generalized
//! Bayesian updater with exponents (b1, b2) is linear in log-odds:
//!
//! logit(estimate) = b0 + b1 * logit(prior) + b2 * log(lik ratio)
//!
//! so an ordinary least-squares fit of the reported estimates recovers the
//! weightings; (1, 1) is exact Bayes.

use phenolab_core::{TaskId, Transcript};
use phenolab_numopt::ols;

use crate::MetricsError;

/// Estimates are clamped into this interval before the logit transform.
pub const LOGIT_CLAMP: (f64, f64) = (0.01, 0.99);

#[derive(Debug, Clone)]
pub struct PriorLikelihoodFit {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub n_obs: usize,
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

pub fn fit_prior_likelihood(
    transcripts: &[Transcript],
) -> Result<PriorLikelihoodFit, MetricsError> {
    let mut rows = Vec::new();
    let mut y = Vec::new();
    let mut interior = 0usize;
    for t in transcripts {
        for trial in t.free_trials() {
            let estimate = trial.parsed_choice.value().ok_or(MetricsError::MissingMeta {
                key: "estimate",
                task: TaskId::ProbabilisticReasoning,
            })?;
            let prior = Transcript::meta_f64(trial, "prior_f").ok_or(MetricsError::MissingMeta {
                key: "prior_f",
                task: TaskId::ProbabilisticReasoning,
            })?;
            let lik = Transcript::meta_f64(trial, "likelihood_red_given_f").ok_or(
                MetricsError::MissingMeta {
                    key: "likelihood_red_given_f",
                    task: TaskId::ProbabilisticReasoning,
                },
            )?;
            let ball = Transcript::meta_str(trial, "ball").ok_or(MetricsError::MissingMeta {
                key: "ball",
                task: TaskId::ProbabilisticReasoning,
            })?;
            if estimate > 0.0 && estimate < 1.0 {
                interior += 1;
            }
            let clamped = estimate.clamp(LOGIT_CLAMP.0, LOGIT_CLAMP.1);
            let prior_c = prior.clamp(LOGIT_CLAMP.0, LOGIT_CLAMP.1);
            let (lik_f, lik_j) = if ball == "red" {
                (lik, 1.0 - lik)
            } else {
                (1.0 - lik, lik)
            };
            let lik_f = lik_f.clamp(LOGIT_CLAMP.0, LOGIT_CLAMP.1);
            let lik_j = lik_j.clamp(LOGIT_CLAMP.0, LOGIT_CLAMP.1);
            rows.push(vec![logit(prior_c), (lik_f / lik_j).ln()]);
            y.push(logit(clamped));
        }
    }
    if rows.len() < 10 {
        return Err(MetricsError::InsufficientData(format!(
            "{} probability estimates, need at least 10",
            rows.len()
        )));
    }
    if interior == 0 {
        return Err(MetricsError::DegenerateData(
            "all probability estimates sit at the 0/1 bounds".into(),
        ));
    }
    let fit = ols(&rows, &y)?;
    Ok(PriorLikelihoodFit {
        beta0: fit.coefficients[0],
        beta1: fit.coefficients[1],
        beta2: fit.coefficients[2],
        n_obs: fit.n_obs,
    })
}
