//! Metric extraction: maps task transcripts to the ten behavioral metrics
//! and six performance metrics by fitting the corresponding computational
//! models (choice regressions, Rescorla-Wagner likelihoods, scoring rules).

mod exploration;
mod learning;
mod metacognition;
mod model_basedness;
mod normalize;
mod performance;
mod phenotype;
mod prior_likelihood;
mod report;

pub use exploration::{fit_exploration, Coefficient, ExplorationFit};
pub use learning::{extract_rw_data, fit_learning, LearningFit, RwData, RW_BOUNDS};
pub use metacognition::{metacognition, Metacognition};
pub use model_basedness::{model_basedness, StayFit};
pub use normalize::normalize;
pub use performance::{performance, performance_vector};
pub use phenotype::{compute_phenotype, PerformanceVector, PhenotypeVector};
pub use prior_likelihood::{fit_prior_likelihood, PriorLikelihoodFit, LOGIT_CLAMP};
pub use report::{
    behavioral_metrics, metric_task, performance_metrics, HumanReference, HumanReferenceFile,
    MetricKind, MetricReport, MetricRow,
};

use phenolab_core::TaskId;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("no transcripts for task {0}")]
    MissingTask(TaskId),
    #[error("trial record is missing `{key}` metadata for task {task}")]
    MissingMeta { key: &'static str, task: TaskId },
    #[error("normalization undefined for `{0}`: human reference equals the random baseline")]
    NormalizationUndefined(String),
    #[error("fit failed: {0}")]
    Fit(#[from] phenolab_numopt::NumoptError),
    #[error("discounting score: {0}")]
    Score(#[from] phenolab_tasks::temporal_discounting::ScoreError),
}
