//! Model-basedness from the two-step task: a logistic regression of stay
//! behavior (repeating yesterday's planet choice) on yesterday's reward
//! (x1), transition type (x2, 1 = common), and their interaction (x3).
//! The interaction coefficient separates model-based agents (positive)
//! from model-free ones (near zero).

use phenolab_core::{TaskId, Transcript};
use phenolab_numopt::logistic_fit;

use crate::exploration::Coefficient;
use crate::MetricsError;

#[derive(Debug, Clone)]
pub struct StayFit {
    pub interaction: Coefficient,
    pub n_obs: usize,
}

pub fn model_basedness(transcripts: &[Transcript]) -> Result<StayFit, MetricsError> {
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for t in transcripts {
        // Per-day (planet, common, treasure) from stage-2 records.
        let mut days: Vec<(String, bool, bool)> = Vec::new();
        for trial in &t.trials {
            if Transcript::meta_f64(trial, "stage") != Some(2.0) {
                continue;
            }
            let planet = Transcript::meta_str(trial, "planet").ok_or(
                MetricsError::MissingMeta { key: "planet", task: TaskId::TwoStep },
            )?;
            let common = Transcript::meta_bool(trial, "common").ok_or(
                MetricsError::MissingMeta { key: "common", task: TaskId::TwoStep },
            )?;
            let treasure = Transcript::meta_bool(trial, "treasure").ok_or(
                MetricsError::MissingMeta { key: "treasure", task: TaskId::TwoStep },
            )?;
            days.push((planet.to_string(), common, treasure));
        }
        for pair in days.windows(2) {
            let (prev, cur) = (&pair[0], &pair[1]);
            let x1 = f64::from(prev.2);
            let x2 = f64::from(prev.1);
            rows.push(vec![x1, x2, x1 * x2]);
            y.push(f64::from(cur.0 == prev.0));
        }
    }
    if rows.len() < 2 {
        return Err(MetricsError::InsufficientData(format!(
            "{} consecutive-day pairs, need at least 2",
            rows.len()
        )));
    }
    let fit = logistic_fit(&rows, &y).map_err(|err| match err {
        phenolab_numopt::NumoptError::SingleClass => MetricsError::DegenerateData(
            "stay behavior shows no variance (agent always stays or always switches)".into(),
        ),
        other => MetricsError::Fit(other),
    })?;
    Ok(StayFit {
        interaction: Coefficient {
            value: fit.coefficients[3],
            se: fit.standard_errors[3],
            z: fit.z_value(3),
            separated: fit.separated,
        },
        n_obs: fit.n_obs,
    })
}
