//! Report structures shared by the experiment, benchmark and empirical
//! pipelines, plus their JSON and CSV serializations.
//!
//! The JSON document carries metadata, per-condition aggregates and test
//! results; per-replication series go to companion CSV files with columns
//! `condition,replication,t,value`, one file per metric.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::stats::{self, TestResult};

/// Two-sided significance level for every H0 decision.
pub const SIGNIFICANCE: f64 = 0.05;

/// Which experiment or benchmark a report came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    P1,
    P2,
    P3,
    P4,
    Stability,
    Perturbation,
    Heterogeneity,
    Topology,
}

impl ExperimentId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentId::P1 => "p1",
            ExperimentId::P2 => "p2",
            ExperimentId::P3 => "p3",
            ExperimentId::P4 => "p4",
            ExperimentId::Stability => "stability",
            ExperimentId::Perturbation => "perturbation",
            ExperimentId::Heterogeneity => "heterogeneity",
            ExperimentId::Topology => "topology",
        }
    }
}

/// One metric's time series under one condition: every replication's
/// series plus the replication-aggregated mean and sample standard
/// deviation. Entries are `None` where a value could not be computed
/// (e.g. an empty partition group in an empirical bin).
#[derive(Debug, Clone, Serialize)]
pub struct ConditionSeries {
    pub condition: String,
    pub metric: String,
    #[serde(skip)]
    pub per_replication: Vec<Vec<Option<f64>>>,
    pub mean: Vec<Option<f64>>,
    pub std_dev: Vec<Option<f64>>,
}

impl ConditionSeries {
    /// Series where every value is present.
    pub fn from_rows(
        condition: impl Into<String>,
        metric: impl Into<String>,
        rows: Vec<Vec<f64>>,
    ) -> Self {
        Self::from_optional_rows(
            condition,
            metric,
            rows.into_iter()
                .map(|r| r.into_iter().map(Some).collect())
                .collect(),
        )
    }

    pub fn from_optional_rows(
        condition: impl Into<String>,
        metric: impl Into<String>,
        rows: Vec<Vec<Option<f64>>>,
    ) -> Self {
        let len = rows.first().map_or(0, Vec::len);
        debug_assert!(rows.iter().all(|r| r.len() == len));
        let mut mean = Vec::with_capacity(len);
        let mut std_dev = Vec::with_capacity(len);
        for t in 0..len {
            let present: Vec<f64> = rows.iter().filter_map(|r| r[t]).collect();
            if present.is_empty() {
                mean.push(None);
                std_dev.push(None);
            } else {
                mean.push(Some(stats::mean(&present)));
                std_dev.push(Some(stats::sample_std_dev(&present)));
            }
        }
        ConditionSeries {
            condition: condition.into(),
            metric: metric.into(),
            per_replication: rows,
            mean,
            std_dev,
        }
    }

    /// Final present value of each replication's series.
    pub fn final_values(&self) -> Vec<f64> {
        self.per_replication
            .iter()
            .filter_map(|r| r.iter().rev().find_map(|v| *v))
            .collect()
    }
}

/// A named hypothesis test outcome.
#[derive(Debug, Clone, Serialize)]
pub struct LabeledTest {
    pub label: String,
    #[serde(flatten)]
    pub result: TestResult,
}

impl LabeledTest {
    pub fn new(label: impl Into<String>, result: TestResult) -> Self {
        LabeledTest {
            label: label.into(),
            result,
        }
    }

    /// True when the p-value is present and below [`SIGNIFICANCE`].
    pub fn rejects(&self) -> bool {
        self.result.p_value.is_some_and(|p| p < SIGNIFICANCE)
    }
}

/// One tested claim and whether its null hypothesis fell.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisCheck {
    pub claim: String,
    pub h0_rejected: bool,
}

impl HypothesisCheck {
    pub fn new(claim: impl Into<String>, h0_rejected: bool) -> Self {
        HypothesisCheck {
            claim: claim.into(),
            h0_rejected,
        }
    }
}

/// Outcome of one experiment or benchmark run: per-condition metric
/// series, hypothesis tests and scalar summaries.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment_id: ExperimentId,
    pub conditions: Vec<ConditionSeries>,
    pub tests: Vec<LabeledTest>,
    pub h0: Vec<HypothesisCheck>,
    pub summary: BTreeMap<String, f64>,
}

impl ExperimentReport {
    pub fn new(experiment_id: ExperimentId) -> Self {
        ExperimentReport {
            experiment_id,
            conditions: Vec::new(),
            tests: Vec::new(),
            h0: Vec::new(),
            summary: BTreeMap::new(),
        }
    }

    /// Distinct metric names, in first-appearance order.
    pub fn metrics(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in &self.conditions {
            if !out.contains(&c.metric.as_str()) {
                out.push(&c.metric);
            }
        }
        out
    }

    /// The series for `(condition, metric)`, if recorded.
    pub fn series(&self, condition: &str, metric: &str) -> Option<&ConditionSeries> {
        self.conditions
            .iter()
            .find(|c| c.condition == condition && c.metric == metric)
    }

    pub fn write_json<W: Write>(&self, w: W) -> crate::error::Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(|e| std::io::Error::other(e).into())
    }

    /// Per-replication series of one metric as CSV rows
    /// `condition,replication,t,value` (empty value where absent).
    pub fn write_series_csv<W: Write>(&self, metric: &str, mut w: W) -> std::io::Result<()> {
        writeln!(w, "condition,replication,t,value")?;
        for c in self.conditions.iter().filter(|c| c.metric == metric) {
            for (rep, row) in c.per_replication.iter().enumerate() {
                for (t, v) in row.iter().enumerate() {
                    match v {
                        Some(v) => writeln!(w, "{},{},{},{}", c.condition, rep, t, v)?,
                        None => writeln!(w, "{},{},{},", c.condition, rep, t)?,
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregates_skip_absent_values() {
        let s = ConditionSeries::from_optional_rows(
            "g",
            "m",
            vec![vec![Some(1.0), None], vec![Some(3.0), None]],
        );
        assert_eq!(s.mean, vec![Some(2.0), None]);
        assert_eq!(s.final_values(), vec![1.0, 3.0]);
    }

    #[test]
    fn csv_writes_one_metric_at_a_time() {
        let mut report = ExperimentReport::new(ExperimentId::P1);
        report.conditions.push(ConditionSeries::from_rows(
            "a",
            "m1",
            vec![vec![1.0, 2.0]],
        ));
        report
            .conditions
            .push(ConditionSeries::from_rows("a", "m2", vec![vec![9.0]]));
        let mut buf = Vec::new();
        report.write_series_csv("m1", &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "condition,replication,t,value\na,0,0,1\na,0,1,2\n");
        assert_eq!(report.metrics(), vec!["m1", "m2"]);
    }

    #[test]
    fn json_is_serializable_and_ordered() {
        let mut report = ExperimentReport::new(ExperimentId::Stability);
        report.summary.insert("b_metric".into(), 2.0);
        report.summary.insert("a_metric".into(), 1.0);
        let mut buf = Vec::new();
        report.write_json(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.find("a_metric").unwrap() < text.find("b_metric").unwrap());
        assert!(text.contains("\"experiment_id\": \"stability\""));
    }
}
