//! Learning rate and optimism bias from the instrumental task, by maximum
//! likelihood over Rescorla-Wagner models: a single learning rate for the
//! standard model, and separate rates for positive and negative prediction
//! errors (their difference is the optimism bias). Values start at 0.5 and
//! choices follow a softmax at a jointly fitted inverse temperature.

use phenolab_core::{TaskId, Transcript};
use phenolab_numopt::{minimize_nll, GridSpec, OptResult};

use crate::MetricsError;

/// Fit bounds: learning rates in [0, 1], inverse temperature in [0, 20].
pub const RW_BOUNDS: ((f64, f64), (f64, f64)) = ((0.0, 1.0), (0.0, 20.0));

const Q_INIT: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub struct RwTrial {
    pub casino: usize,
    pub chosen_slot: usize,
    pub reward: f64,
}

/// Choice sequences extracted per episode.
#[derive(Debug, Clone)]
pub struct RwData {
    pub episodes: Vec<Vec<RwTrial>>,
}

pub fn extract_rw_data(transcripts: &[Transcript]) -> Result<RwData, MetricsError> {
    let mut episodes = Vec::with_capacity(transcripts.len());
    for t in transcripts {
        let mut trials = Vec::with_capacity(t.trials.len());
        for trial in t.free_trials() {
            let casino = Transcript::meta_f64(trial, "casino").ok_or(
                MetricsError::MissingMeta { key: "casino", task: TaskId::InstrumentalLearning },
            )? as usize
                - 1;
            let machine_a = Transcript::meta_str(trial, "machine_a").ok_or(
                MetricsError::MissingMeta { key: "machine_a", task: TaskId::InstrumentalLearning },
            )?;
            let machine = Transcript::meta_str(trial, "machine").ok_or(
                MetricsError::MissingMeta { key: "machine", task: TaskId::InstrumentalLearning },
            )?;
            let reward = Transcript::meta_f64(trial, "reward").ok_or(
                MetricsError::MissingMeta { key: "reward", task: TaskId::InstrumentalLearning },
            )?;
            trials.push(RwTrial {
                casino,
                chosen_slot: usize::from(machine != machine_a),
                reward,
            });
        }
        if !trials.is_empty() {
            episodes.push(trials);
        }
    }
    if episodes.is_empty() {
        return Err(MetricsError::InsufficientData(
            "no instrumental-learning trials".into(),
        ));
    }
    Ok(RwData { episodes })
}

impl RwData {
    /// Negative log-likelihood of the data under learning rates
    /// (alpha_plus, alpha_minus) and softmax inverse temperature.
    pub fn nll(&self, alpha_plus: f64, alpha_minus: f64, invtemp: f64) -> f64 {
        let mut nll = 0.0;
        for episode in &self.episodes {
            let mut values = [[Q_INIT; 2]; 4];
            for trial in episode {
                let pair = &mut values[trial.casino];
                // Stable softmax log-probability of the chosen slot.
                let diff = pair[trial.chosen_slot] - pair[1 - trial.chosen_slot];
                let log_p = -(-invtemp * diff).exp().ln_1p();
                nll -= log_p;
                let q = &mut pair[trial.chosen_slot];
                let delta = trial.reward - *q;
                let alpha = if delta >= 0.0 { alpha_plus } else { alpha_minus };
                *q += alpha * delta;
            }
        }
        nll
    }

    pub fn nll_single(&self, alpha: f64, invtemp: f64) -> f64 {
        self.nll(alpha, alpha, invtemp)
    }
}

#[derive(Debug, Clone)]
pub struct LearningFit {
    /// Single learning rate from the standard Rescorla-Wagner fit.
    pub alpha: f64,
    pub invtemp: f64,
    pub nll_single: f64,
    /// Asymmetric fit: positive- and negative-error learning rates.
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub invtemp_asymmetric: f64,
    pub nll_asymmetric: f64,
    /// alpha_plus - alpha_minus.
    pub optimism_bias: f64,
    pub single_diagnostics: OptResult,
    pub asymmetric_diagnostics: OptResult,
}

pub fn fit_learning(transcripts: &[Transcript]) -> Result<LearningFit, MetricsError> {
    let data = extract_rw_data(transcripts)?;

    let single = minimize_nll(
        &|p: &[f64]| data.nll_single(p[0], p[1]),
        &[RW_BOUNDS.0, RW_BOUNDS.1],
        GridSpec::default(),
    )?;
    let asymmetric = minimize_nll(
        &|p: &[f64]| data.nll(p[0], p[1], p[2]),
        &[RW_BOUNDS.0, RW_BOUNDS.0, RW_BOUNDS.1],
        GridSpec::default(),
    )?;

    Ok(LearningFit {
        alpha: single.params[0],
        invtemp: single.params[1],
        nll_single: single.nll,
        alpha_plus: asymmetric.params[0],
        alpha_minus: asymmetric.params[1],
        invtemp_asymmetric: asymmetric.params[2],
        nll_asymmetric: asymmetric.nll,
        optimism_bias: asymmetric.params[0] - asymmetric.params[1],
        single_diagnostics: single,
        asymmetric_diagnostics: asymmetric,
    })
}
