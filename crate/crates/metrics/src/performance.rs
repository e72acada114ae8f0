//! Per-task performance scores: the quantity each task asks the agent to
//! optimize, averaged the way the task defines it.

use phenolab_core::{Outcome, TaskId, Transcript};

use crate::phenotype::PerformanceVector;
use crate::MetricsError;

/// Computes the task's performance score from completed episodes.
///
/// Temporal discounting has no performance entry (its score is a
/// behavioral metric), so requesting it is an error.
pub fn performance(task: TaskId, transcripts: &[Transcript]) -> Result<f64, MetricsError> {
    if transcripts.is_empty() {
        return Err(MetricsError::MissingTask(task));
    }
    match task {
        TaskId::ProbabilisticReasoning => {
            // 1 - mean absolute deviation from the exact posterior.
            let mut dev = 0.0;
            let mut n = 0usize;
            for t in transcripts {
                for trial in t.free_trials() {
                    let estimate = trial.parsed_choice.value().ok_or(
                        MetricsError::MissingMeta { key: "estimate", task },
                    )?;
                    let posterior = Transcript::meta_f64(trial, "posterior")
                        .ok_or(MetricsError::MissingMeta { key: "posterior", task })?;
                    dev += (estimate - posterior).abs();
                    n += 1;
                }
            }
            ensure_some(n, task)?;
            Ok(1.0 - dev / n as f64)
        }
        TaskId::Horizon => {
            // Mean dollars per free-choice trial.
            mean_over_free(transcripts, task, "reward")
        }
        TaskId::RestlessBandit => {
            let mut correct = 0usize;
            let mut n = 0usize;
            for t in transcripts {
                for trial in t.free_trials() {
                    if Transcript::meta_str(trial, "phase") != Some("choice") {
                        continue;
                    }
                    let ok = Transcript::meta_bool(trial, "correct")
                        .ok_or(MetricsError::MissingMeta { key: "correct", task })?;
                    correct += usize::from(ok);
                    n += 1;
                }
            }
            ensure_some(n, task)?;
            Ok(correct as f64 / n as f64)
        }
        TaskId::InstrumentalLearning => mean_over_free(transcripts, task, "reward"),
        TaskId::TwoStep => {
            // Mean treasures per day.
            let mut treasures = 0.0;
            let mut days = 0usize;
            for t in transcripts {
                for trial in t.free_trials() {
                    if Transcript::meta_f64(trial, "stage") != Some(2.0) {
                        continue;
                    }
                    let hit = Transcript::meta_bool(trial, "treasure")
                        .ok_or(MetricsError::MissingMeta { key: "treasure", task })?;
                    treasures += f64::from(hit);
                    days += 1;
                }
            }
            ensure_some(days, task)?;
            Ok(treasures / days as f64)
        }
        TaskId::Bart => {
            // Mean banked points per balloon, exploded balloons counting 0.
            let mut banked = 0.0;
            let mut balloons = 0usize;
            for t in transcripts {
                for trial in &t.trials {
                    match trial.outcome {
                        Outcome::Banked(points) => {
                            banked += points;
                            balloons += 1;
                        }
                        Outcome::Exploded => balloons += 1,
                        _ => {}
                    }
                }
            }
            ensure_some(balloons, task)?;
            Ok(banked / balloons as f64)
        }
        TaskId::TemporalDiscounting => Err(MetricsError::DegenerateData(
            "temporal discounting has no performance metric".into(),
        )),
    }
}

fn mean_over_free(
    transcripts: &[Transcript],
    task: TaskId,
    key: &'static str,
) -> Result<f64, MetricsError> {
    let mut total = 0.0;
    let mut n = 0usize;
    for t in transcripts {
        for trial in t.free_trials() {
            total += Transcript::meta_f64(trial, key)
                .ok_or(MetricsError::MissingMeta { key, task })?;
            n += 1;
        }
    }
    ensure_some(n, task)?;
    Ok(total / n as f64)
}

fn ensure_some(n: usize, task: TaskId) -> Result<(), MetricsError> {
    if n == 0 {
        Err(MetricsError::MissingTask(task))
    } else {
        Ok(())
    }
}

/// Mean inflation attempts per balloon, exploded balloons included (the
/// unadjusted risk measure).
pub fn bart_risk(transcripts: &[Transcript]) -> Result<f64, MetricsError> {
    let mut pumps = 0usize;
    let mut balloons = 0usize;
    for t in transcripts {
        for trial in &t.trials {
            match Transcript::meta_str(trial, "action") {
                Some("inflate") => pumps += 1,
                Some("skip") => {}
                _ => continue,
            }
        }
        for trial in &t.trials {
            if matches!(trial.outcome, Outcome::Banked(_) | Outcome::Exploded) {
                balloons += 1;
            }
        }
    }
    if balloons == 0 {
        return Err(MetricsError::MissingTask(TaskId::Bart));
    }
    Ok(pumps as f64 / balloons as f64)
}

/// All six performance entries from per-task transcripts.
pub fn performance_vector(
    by_task: &std::collections::BTreeMap<TaskId, Vec<Transcript>>,
) -> Result<PerformanceVector, MetricsError> {
    let get = |task: TaskId| -> Result<f64, MetricsError> {
        let ts = by_task.get(&task).ok_or(MetricsError::MissingTask(task))?;
        performance(task, ts)
    };
    Ok(PerformanceVector {
        posterior_accuracy: get(TaskId::ProbabilisticReasoning)?,
        horizon_dollars: get(TaskId::Horizon)?,
        restless_accuracy: get(TaskId::RestlessBandit)?,
        instrumental_dollars: get(TaskId::InstrumentalLearning)?,
        two_step_treasures: get(TaskId::TwoStep)?,
        bart_points: get(TaskId::Bart)?,
    })
}
