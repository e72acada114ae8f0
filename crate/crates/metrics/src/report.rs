//! Metric report assembly and emission: CSV and JSON tables with raw
//! values, random baselines, human references, and normalized scores, plus
//! a plot-ready long-format table.

use std::collections::BTreeMap;

use phenolab_core::TaskId;
use serde::{Deserialize, Serialize};

use crate::{normalize, MetricsError, PerformanceVector, PhenotypeVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Behavioral,
    Performance,
}

pub fn behavioral_metrics() -> [&'static str; 10] {
    [
        "prior_weighting",
        "likelihood_weighting",
        "directed_exploration",
        "random_exploration",
        "meta_cognition",
        "learning_rate",
        "optimism_bias",
        "model_basedness",
        "temporal_discounting",
        "risk",
    ]
}

pub fn performance_metrics() -> [&'static str; 6] {
    [
        "posterior_accuracy",
        "horizon_dollars",
        "restless_accuracy",
        "instrumental_dollars",
        "two_step_treasures",
        "bart_points",
    ]
}

pub fn metric_task(name: &str) -> Option<TaskId> {
    Some(match name {
        "prior_weighting" | "likelihood_weighting" | "posterior_accuracy" => {
            TaskId::ProbabilisticReasoning
        }
        "directed_exploration" | "random_exploration" | "horizon_dollars" => TaskId::Horizon,
        "meta_cognition" | "restless_accuracy" => TaskId::RestlessBandit,
        "learning_rate" | "optimism_bias" | "instrumental_dollars" => {
            TaskId::InstrumentalLearning
        }
        "model_basedness" | "two_step_treasures" => TaskId::TwoStep,
        "temporal_discounting" => TaskId::TemporalDiscounting,
        "risk" | "bart_points" => TaskId::Bart,
        _ => return None,
    })
}

/// One human reference value with provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HumanReference {
    pub value: f64,
    pub source: String,
    pub verified: bool,
}

/// The human-reference data file: metric name to reference entry.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct HumanReferenceFile {
    #[serde(default)]
    pub metrics: BTreeMap<String, HumanReference>,
}

impl HumanReferenceFile {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricRow {
    pub metric: String,
    pub task: TaskId,
    pub kind: MetricKind,
    pub raw: f64,
    pub random_baseline: Option<f64>,
    pub human_reference: Option<f64>,
    pub human_source: Option<String>,
    pub human_verified: Option<bool>,
    pub normalized: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricReport {
    pub agent: String,
    pub rows: Vec<MetricRow>,
    /// Invalid (fallback-resolved) trial counts per task.
    pub invalid_counts: BTreeMap<String, u32>,
    /// Seed of the cached random baselines, when present.
    pub baseline_seed: Option<u64>,
}

impl MetricReport {
    /// Assembles the 16-row report. Baselines and human references are
    /// optional; normalization fills in only where both are present.
    pub fn assemble(
        agent: String,
        phenotype: &PhenotypeVector,
        performance: &PerformanceVector,
        baselines: Option<&BTreeMap<String, f64>>,
        human: Option<&HumanReferenceFile>,
        invalid_counts: BTreeMap<String, u32>,
        baseline_seed: Option<u64>,
    ) -> Result<MetricReport, MetricsError> {
        let mut rows = Vec::with_capacity(16);
        let entries = behavioral_metrics()
            .into_iter()
            .map(|name| (name, MetricKind::Behavioral, phenotype.get(name).unwrap()))
            .chain(
                performance_metrics()
                    .into_iter()
                    .map(|name| (name, MetricKind::Performance, performance.get(name).unwrap())),
            );
        for (name, kind, raw) in entries {
            let baseline = baselines.and_then(|b| b.get(name)).copied();
            let reference = human.and_then(|h| h.metrics.get(name));
            let normalized = match (baseline, reference) {
                (Some(b), Some(r)) => Some(normalize(raw, b, r.value)?),
                _ => None,
            };
            rows.push(MetricRow {
                metric: name.to_string(),
                task: metric_task(name).expect("known metric"),
                kind,
                raw,
                random_baseline: baseline,
                human_reference: reference.map(|r| r.value),
                human_source: reference.map(|r| r.source.clone()),
                human_verified: reference.map(|r| r.verified),
                normalized,
            });
        }
        Ok(MetricReport { agent, rows, invalid_counts, baseline_seed })
    }

    /// One row per metric: raw, baseline, human reference, normalized.
    pub fn to_csv(&self) -> Result<String, MetricsError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record([
                "metric",
                "task",
                "kind",
                "raw",
                "random_baseline",
                "human_reference",
                "normalized",
            ])
            .map_err(csv_err)?;
        for row in &self.rows {
            writer
                .write_record([
                    row.metric.clone(),
                    row.task.name().to_string(),
                    format!("{:?}", row.kind).to_lowercase(),
                    format_cell(Some(row.raw)),
                    format_cell(row.random_baseline),
                    format_cell(row.human_reference),
                    format_cell(row.normalized),
                ])
                .map_err(csv_err)?;
        }
        let bytes = writer.into_inner().map_err(|e| csv_err(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    /// Plot-ready long format: (metric, kind, value_type, value).
    pub fn to_long_format(&self) -> Result<String, MetricsError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["metric", "kind", "value_type", "value"])
            .map_err(csv_err)?;
        for row in &self.rows {
            let kind = format!("{:?}", row.kind).to_lowercase();
            let mut push = |value_type: &str, v: Option<f64>| -> Result<(), MetricsError> {
                if let Some(v) = v {
                    writer
                        .write_record([row.metric.as_str(), &kind, value_type, &format!("{v}")])
                        .map_err(csv_err)?;
                }
                Ok(())
            };
            push("raw", Some(row.raw))?;
            push("normalized", row.normalized)?;
        }
        let bytes = writer.into_inner().map_err(|e| csv_err(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

fn format_cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> MetricsError {
    MetricsError::InsufficientData(format!("csv write failed: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vectors() -> (PhenotypeVector, PerformanceVector) {
        (
            PhenotypeVector {
                prior_weighting: 1.0,
                likelihood_weighting: 1.0,
                directed_exploration: 0.1,
                random_exploration: 0.2,
                meta_cognition: 0.7,
                learning_rate: 0.3,
                optimism_bias: 0.05,
                model_basedness: 0.4,
                temporal_discounting: 9.0,
                risk: 11.0,
            },
            PerformanceVector {
                posterior_accuracy: 0.95,
                horizon_dollars: 55.0,
                restless_accuracy: 0.66,
                instrumental_dollars: 0.58,
                two_step_treasures: 0.51,
                bart_points: 4.2,
            },
        )
    }

    #[test]
    fn report_always_has_sixteen_rows() {
        let (p, perf) = vectors();
        let report = MetricReport::assemble(
            "test".into(),
            &p,
            &perf,
            None,
            None,
            BTreeMap::new(),
            None,
        )
        .unwrap();
        assert_eq!(report.rows.len(), 16);
        assert_eq!(
            report.rows.iter().filter(|r| r.kind == MetricKind::Behavioral).count(),
            10
        );
    }

    #[test]
    fn csv_has_header_plus_row_per_metric() {
        let (p, perf) = vectors();
        let report = MetricReport::assemble(
            "test".into(),
            &p,
            &perf,
            None,
            None,
            BTreeMap::new(),
            None,
        )
        .unwrap();
        let csv = report.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 17);
        assert!(csv.starts_with("metric,task,kind,raw"));
    }

    #[test]
    fn normalization_fills_when_anchors_present() {
        let (p, perf) = vectors();
        let mut baselines = BTreeMap::new();
        let mut human = HumanReferenceFile::default();
        for name in behavioral_metrics().into_iter().chain(performance_metrics()) {
            baselines.insert(name.to_string(), 0.0);
            human.metrics.insert(
                name.to_string(),
                HumanReference { value: 2.0, source: "placeholder".into(), verified: false },
            );
        }
        let report = MetricReport::assemble(
            "test".into(),
            &p,
            &perf,
            Some(&baselines),
            Some(&human),
            BTreeMap::new(),
            Some(123),
        )
        .unwrap();
        for row in &report.rows {
            let expected = row.raw / 2.0;
            assert!((row.normalized.unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn human_file_parses_from_toml() {
        let text = r#"
            [metrics.risk]
            value = 10.0
            source = "placeholder"
            verified = false
        "#;
        let f = HumanReferenceFile::from_toml(text).unwrap();
        assert_eq!(f.metrics["risk"].value, 10.0);
    }
}
