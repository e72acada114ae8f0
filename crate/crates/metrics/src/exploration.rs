//! Directed and random exploration from the horizon task.
//!
//! Both metrics regress the very first free choice of each game on the
//! observed-mean difference (x1), the horizon indicator (x2), and their
//! interaction (x3):
//!
//! - unequal-information games, choice coded 1 = less-observed machine:
//!   the x2 coefficient is directed exploration (information seeking
//!   beyond what values justify);
//! - equal-information games, choice coded 1 = lower-mean machine with
//!   x1 = |mean difference|: the x3 coefficient is random exploration
//!   (value sensitivity lost when more choices remain).

use phenolab_core::{TaskId, Transcript, TrialRecord};
use phenolab_numopt::logistic_fit;

use crate::MetricsError;

#[derive(Debug, Clone, Copy)]
pub struct Coefficient {
    pub value: f64,
    pub se: f64,
    pub z: f64,
    /// True when the underlying logistic fit hit perfect separation.
    pub separated: bool,
}

#[derive(Debug, Clone)]
pub struct ExplorationFit {
    pub directed: Coefficient,
    pub random: Coefficient,
}

struct FirstChoice {
    horizon_six: bool,
    /// Mean observed reward per machine index, with observation counts.
    means: [f64; 2],
    counts: [usize; 2],
    chosen: usize,
    equal_info: bool,
}

fn first_choices(transcripts: &[Transcript]) -> Result<Vec<FirstChoice>, MetricsError> {
    let mut out = Vec::new();
    for t in transcripts {
        let mut sums = [0.0f64; 2];
        let mut counts = [0usize; 2];
        let mut first: Option<(&TrialRecord, [f64; 2], [usize; 2])> = None;
        for trial in &t.trials {
            let machine = Transcript::meta_str(trial, "machine").ok_or(
                MetricsError::MissingMeta { key: "machine", task: TaskId::Horizon },
            )?;
            let idx = usize::from(machine != "F");
            if !trial.forced && first.is_none() {
                let means = [
                    if counts[0] > 0 { sums[0] / counts[0] as f64 } else { 0.0 },
                    if counts[1] > 0 { sums[1] / counts[1] as f64 } else { 0.0 },
                ];
                first = Some((trial, means, counts));
            }
            let reward = Transcript::meta_f64(trial, "reward").ok_or(
                MetricsError::MissingMeta { key: "reward", task: TaskId::Horizon },
            )?;
            sums[idx] += reward;
            counts[idx] += 1;
        }
        if let Some((trial, means, seen)) = first {
            let machine = Transcript::meta_str(trial, "machine").unwrap_or("F");
            out.push(FirstChoice {
                horizon_six: Transcript::meta_f64(trial, "horizon") == Some(6.0),
                means,
                counts: seen,
                chosen: usize::from(machine != "F"),
                equal_info: Transcript::meta_str(trial, "info") == Some("equal_2_2"),
            });
        }
    }
    Ok(out)
}

fn coefficient(fit: &phenolab_numopt::RegressionResult, index: usize) -> Coefficient {
    Coefficient {
        value: fit.coefficients[index],
        se: fit.standard_errors[index],
        z: fit.z_value(index),
        separated: fit.separated,
    }
}

pub fn fit_exploration(transcripts: &[Transcript]) -> Result<ExplorationFit, MetricsError> {
    let choices = first_choices(transcripts)?;

    // Directed exploration: unequal-information games.
    let mut rows = Vec::new();
    let mut y = Vec::new();
    let mut horizons = [false; 2];
    for c in choices.iter().filter(|c| !c.equal_info) {
        let less = if c.counts[0] < c.counts[1] { 0 } else { 1 };
        let x1 = c.means[less] - c.means[1 - less];
        let x2 = f64::from(c.horizon_six);
        rows.push(vec![x1, x2, x1 * x2]);
        y.push(f64::from(c.chosen == less));
        horizons[usize::from(c.horizon_six)] = true;
    }
    if !(horizons[0] && horizons[1]) {
        return Err(MetricsError::InsufficientData(
            "unequal-information games missing one horizon condition".into(),
        ));
    }
    let directed_fit = logistic_fit(&rows, &y).map_err(map_degenerate)?;

    // Random exploration: equal-information games.
    let mut rows = Vec::new();
    let mut y = Vec::new();
    let mut horizons = [false; 2];
    for c in choices.iter().filter(|c| c.equal_info) {
        if (c.means[0] - c.means[1]).abs() < f64::EPSILON {
            // No lower-mean machine exists; the trial carries no signal.
            continue;
        }
        let lower = if c.means[0] < c.means[1] { 0 } else { 1 };
        let x1 = (c.means[0] - c.means[1]).abs();
        let x2 = f64::from(c.horizon_six);
        rows.push(vec![x1, x2, x1 * x2]);
        y.push(f64::from(c.chosen == lower));
        horizons[usize::from(c.horizon_six)] = true;
    }
    if !(horizons[0] && horizons[1]) {
        return Err(MetricsError::InsufficientData(
            "equal-information games missing one horizon condition".into(),
        ));
    }
    let random_fit = logistic_fit(&rows, &y).map_err(map_degenerate)?;

    Ok(ExplorationFit {
        directed: coefficient(&directed_fit, 2),
        random: coefficient(&random_fit, 3),
    })
}

fn map_degenerate(err: phenolab_numopt::NumoptError) -> MetricsError {
    match err {
        phenolab_numopt::NumoptError::SingleClass => MetricsError::DegenerateData(
            "first free choices show no variance in the coded response".into(),
        ),
        other => MetricsError::Fit(other),
    }
}
