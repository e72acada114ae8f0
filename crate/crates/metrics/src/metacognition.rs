//! Meta-cognition from the restless bandit: the quadratic scoring rule
//! QSR = mean over trials of 1 - (accuracy - scaled confidence)^2, with
//! confidence min-max rescaled over all of the agent's reports.

use phenolab_core::{TaskId, Transcript};

use crate::MetricsError;

#[derive(Debug, Clone, Copy)]
pub struct Metacognition {
    pub qsr: f64,
    /// Set when every confidence report was identical; the rescaling is
    /// then undefined and 0.5 is substituted for all trials.
    pub constant_confidence: bool,
    pub n_trials: usize,
}

pub fn metacognition(transcripts: &[Transcript]) -> Result<Metacognition, MetricsError> {
    let mut pairs: Vec<(f64, f64)> = Vec::new(); // (accuracy, confidence)
    for t in transcripts {
        for trial in t.free_trials() {
            if Transcript::meta_str(trial, "phase") != Some("confidence") {
                continue;
            }
            let confidence = Transcript::meta_f64(trial, "confidence").ok_or(
                MetricsError::MissingMeta { key: "confidence", task: TaskId::RestlessBandit },
            )?;
            let correct = Transcript::meta_bool(trial, "correct").ok_or(
                MetricsError::MissingMeta { key: "correct", task: TaskId::RestlessBandit },
            )?;
            pairs.push((f64::from(correct), confidence));
        }
    }
    if pairs.is_empty() {
        return Err(MetricsError::InsufficientData(
            "no confidence reports in transcripts".into(),
        ));
    }
    let min = pairs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max = pairs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let constant = (max - min).abs() < f64::EPSILON;
    let qsr = pairs
        .iter()
        .map(|&(acc, conf)| {
            let scaled = if constant { 0.5 } else { (conf - min) / (max - min) };
            1.0 - (acc - scaled).powi(2)
        })
        .sum::<f64>()
        / pairs.len() as f64;
    Ok(Metacognition { qsr, constant_confidence: constant, n_trials: pairs.len() })
}
