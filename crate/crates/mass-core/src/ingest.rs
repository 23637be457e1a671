//! Empirical interaction-log pipeline: load post/reply records, build
//! time-binned cumulative reply networks with per-author karma, and run
//! the empirical analogues of the four structural-prior experiments.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{self, DegreePartition, InteractionGraph};
use crate::report::{
    ConditionSeries, ExperimentId, ExperimentReport, HypothesisCheck, LabeledTest,
};
use crate::stats::{self, Alternative};

/// One post or reply event from an empirical log.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct InteractionRecord {
    pub id: String,
    pub author: String,
    /// Absent for top-level posts.
    pub parent_id: Option<String>,
    /// Epoch seconds.
    pub created_at: i64,
    /// May be negative.
    pub karma: i64,
}

/// A parsed log plus the count of lines that failed to parse.
#[derive(Debug, Clone)]
pub struct LoadedLog {
    pub records: Vec<InteractionRecord>,
    pub malformed_lines: usize,
}

/// Load a line-delimited JSON log (or CSV when the path ends in `.csv`)
/// with fields `id, author, parent_id, created_at, karma`. Records come
/// back in input order; malformed lines are skipped and counted;
/// duplicate ids are an error.
pub fn load_log(path: &Path) -> Result<LoadedLog> {
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut malformed = 0usize;
    if is_csv {
        let mut lines = reader.lines();
        let header = match lines.next() {
            Some(h) => h?,
            None => {
                return Ok(LoadedLog {
                    records,
                    malformed_lines: 0,
                })
            }
        };
        let columns: Vec<&str> = header.split(',').map(str::trim).collect();
        let field = |name: &str| -> Result<usize> {
            columns
                .iter()
                .position(|c| *c == name)
                .ok_or_else(|| Error::invalid(format!("csv header missing column {name}")))
        };
        let (ci, ca, cp, ct, ck) = (
            field("id")?,
            field("author")?,
            field("parent_id")?,
            field("created_at")?,
            field("karma")?,
        );
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            let parsed = (|| -> Option<InteractionRecord> {
                let id = non_empty(cells.get(ci)?)?;
                let author = non_empty(cells.get(ca)?)?;
                let parent_id = cells.get(cp).and_then(|c| non_empty(c));
                Some(InteractionRecord {
                    id,
                    author,
                    parent_id,
                    created_at: cells.get(ct)?.trim().parse().ok()?,
                    karma: cells.get(ck)?.trim().parse().ok()?,
                })
            })();
            match parsed {
                Some(r) => records.push(r),
                None => malformed += 1,
            }
        }
    } else {
        for line in reader.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<InteractionRecord>(&line) {
                Ok(r) if !r.id.is_empty() && !r.author.is_empty() => records.push(r),
                _ => malformed += 1,
            }
        }
    }
    let mut seen = HashSet::with_capacity(records.len());
    for r in &records {
        if !seen.insert(r.id.as_str()) {
            return Err(Error::DuplicateId(r.id.clone()));
        }
    }
    Ok(LoadedLog {
        records,
        malformed_lines: malformed,
    })
}

fn non_empty(cell: &str) -> Option<String> {
    let trimmed = cell.trim();
    if trimmed.is_empty() {
        None
    } else {
        Some(trimmed.to_string())
    }
}

/// Sign-preserving log transform of a karma score: sign(k) * ln(1 + |k|).
/// Odd, strictly increasing and total over the integers.
pub fn signed_log(karma: i64) -> f64 {
    let magnitude = (1.0 + karma.unsigned_abs() as f64).ln();
    if karma < 0 {
        -magnitude
    } else {
        magnitude
    }
}

/// State of one time bin: the cumulative reply graph over all records up
/// to the bin boundary, cumulative per-author karma, and the degree
/// partition of the cumulative graph.
#[derive(Debug, Clone)]
pub struct Bin {
    pub bin_index: usize,
    pub graph: InteractionGraph,
    /// Cumulative karma per author index; 0 before the author's first record.
    pub karma: Vec<i64>,
    pub partition: DegreePartition,
}

/// The full binned view of a log. Authors are indexed by first appearance
/// in the record stream; every author is a node in every bin's graph.
#[derive(Debug, Clone)]
pub struct BinnedSeries {
    pub bin_duration: i64,
    pub authors: Vec<String>,
    /// First bin in which each author has a record.
    pub first_active_bin: Vec<usize>,
    pub bins: Vec<Bin>,
    /// Replies whose parent id was absent from the log.
    pub dangling_replies: usize,
}

impl BinnedSeries {
    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }
}

/// Build cumulative reply networks and karma series on bins of
/// `bin_duration` seconds, aligned to epoch multiples.
///
/// An undirected edge joins a reply's author to the parent record's
/// author; self-replies are ignored and replies to ids missing from the
/// log are skipped and counted. Bins run contiguously from the first to
/// the last occupied bin; a bin with no records repeats the previous
/// cumulative state.
pub fn build_binned_series(
    records: &[InteractionRecord],
    bin_duration: i64,
) -> Result<BinnedSeries> {
    if bin_duration <= 0 {
        return Err(Error::invalid("bin duration must be positive"));
    }
    if records.is_empty() {
        return Err(Error::invalid("no records to bin"));
    }
    let mut authors = Vec::new();
    let mut author_index: HashMap<&str, usize> = HashMap::new();
    for r in records {
        if !author_index.contains_key(r.author.as_str()) {
            author_index.insert(r.author.as_str(), authors.len());
            authors.push(r.author.clone());
        }
    }
    let record_author: HashMap<&str, usize> = records
        .iter()
        .map(|r| (r.id.as_str(), author_index[r.author.as_str()]))
        .collect();

    let first_bin_epoch = records
        .iter()
        .map(|r| r.created_at.div_euclid(bin_duration))
        .min()
        .expect("nonempty records");
    let last_bin_epoch = records
        .iter()
        .map(|r| r.created_at.div_euclid(bin_duration))
        .max()
        .expect("nonempty records");
    let bin_count = (last_bin_epoch - first_bin_epoch) as usize + 1;

    // records grouped by bin, preserving input order within a bin
    let mut by_bin: BTreeMap<usize, Vec<&InteractionRecord>> = BTreeMap::new();
    for r in records {
        let bin = (r.created_at.div_euclid(bin_duration) - first_bin_epoch) as usize;
        by_bin.entry(bin).or_default().push(r);
    }

    let n = authors.len();
    let mut first_active = vec![usize::MAX; n];
    let mut karma = vec![0i64; n];
    let mut graph = InteractionGraph::empty(n);
    let mut dangling = 0usize;
    let mut bins = Vec::with_capacity(bin_count);
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for bin_index in 0..bin_count {
        for r in by_bin.get(&bin_index).map_or(&[][..], |v| v.as_slice()) {
            let a = author_index[r.author.as_str()];
            if first_active[a] == usize::MAX {
                first_active[a] = bin_index;
            }
            karma[a] += r.karma;
            if let Some(parent_id) = &r.parent_id {
                match record_author.get(parent_id.as_str()) {
                    Some(&p) if p != a => {
                        if edges.insert((a.min(p), a.max(p))) {
                            graph = graph.with_edge(a, p)?;
                        }
                    }
                    Some(_) => {} // self-reply
                    None => dangling += 1,
                }
            }
        }
        bins.push(Bin {
            bin_index,
            graph: graph.clone(),
            karma: karma.clone(),
            partition: graph::degree_partition(&graph),
        });
    }
    // every author of the log has a record in some bin
    debug_assert!(first_active.iter().all(|&b| b != usize::MAX));
    Ok(BinnedSeries {
        bin_duration,
        authors,
        first_active_bin: first_active,
        bins,
        dangling_replies: dangling,
    })
}

fn group_values(bin: &Bin, group: &[usize]) -> Vec<f64> {
    group.iter().map(|&i| signed_log(bin.karma[i])).collect()
}

/// Empirical P1 and P2: per bin and per degree group, the mean (P1) and
/// variance (P2) of signed-log karma, with per-bin Kruskal-Wallis across
/// the three groups and hub-vs-periphery Mann-Whitney tests. The P2
/// variance contrast is reported descriptively plus a Mann-Whitney test
/// on per-group squared deviations.
pub fn empirical_p1_p2(series: &BinnedSeries) -> Result<(ExperimentReport, ExperimentReport)> {
    if series.bins.is_empty() {
        return Err(Error::invalid("binned series is empty"));
    }
    let groups = ["hub", "mid", "periphery"];
    let mut mean_rows: Vec<Vec<Option<f64>>> = vec![Vec::new(); groups.len()];
    let mut var_rows: Vec<Vec<Option<f64>>> = vec![Vec::new(); groups.len()];
    let mut p1 = ExperimentReport::new(ExperimentId::P1);
    let mut p2 = ExperimentReport::new(ExperimentId::P2);
    for bin in &series.bins {
        let members = [
            &bin.partition.hub,
            &bin.partition.mid,
            &bin.partition.periphery,
        ];
        let values: Vec<Vec<f64>> = members.iter().map(|g| group_values(bin, g)).collect();
        for (gi, vals) in values.iter().enumerate() {
            if vals.is_empty() {
                mean_rows[gi].push(None);
                var_rows[gi].push(None);
            } else {
                mean_rows[gi].push(Some(stats::mean(vals)));
                var_rows[gi].push(Some(stats::population_variance(vals)));
            }
        }
        if values.iter().all(|v| !v.is_empty()) {
            if let Ok(kw) = stats::kruskal_wallis(&values) {
                p1.tests.push(LabeledTest::new(
                    format!("bin-{}-groups-differ", bin.bin_index),
                    kw,
                ));
            }
        }
        if !values[0].is_empty() && !values[2].is_empty() {
            p1.tests.push(LabeledTest::new(
                format!("bin-{}-hub-vs-periphery", bin.bin_index),
                stats::mann_whitney_u(&values[0], &values[2])?,
            ));
            // squared deviations from each group's own mean
            let sq = |vals: &[f64]| -> Vec<f64> {
                let m = stats::mean(vals);
                vals.iter().map(|v| (v - m) * (v - m)).collect()
            };
            p2.tests.push(LabeledTest::new(
                format!("bin-{}-hub-vs-periphery-spread", bin.bin_index),
                stats::mann_whitney_u(&sq(&values[0]), &sq(&values[2]))?,
            ));
        }
    }
    for (gi, name) in groups.iter().enumerate() {
        p1.conditions.push(ConditionSeries::from_optional_rows(
            *name,
            "mean_signed_log_karma",
            vec![mean_rows[gi].clone()],
        ));
        p2.conditions.push(ConditionSeries::from_optional_rows(
            *name,
            "var_signed_log_karma",
            vec![var_rows[gi].clone()],
        ));
    }
    let p1_rejections = p1.tests.iter().filter(|t| t.rejects()).count();
    p1.h0.push(HypothesisCheck::new(
        "network position does not separate karma trajectories",
        p1_rejections > 0 && p1_rejections * 2 > p1.tests.len(),
    ));
    let p2_rejections = p2.tests.iter().filter(|t| t.rejects()).count();
    p2.h0.push(HypothesisCheck::new(
        "karma spread is independent of network position",
        p2_rejections > 0 && p2_rejections * 2 > p2.tests.len(),
    ));
    p1.summary
        .insert("bins".into(), series.bin_count() as f64);
    p1.summary
        .insert("authors".into(), series.author_count() as f64);
    p2.summary
        .insert("bins".into(), series.bin_count() as f64);
    Ok((p1, p2))
}

/// Empirical P3: for each bin t >= 1, regress each agent's signed-log
/// karma change on the mean signed-log karma of its bin-(t-1) reply
/// neighbors (agents isolated at t-1 are excluded), yielding a slope
/// series beta(t); a one-tailed Wilcoxon checks |beta(t)| > 0 across
/// bins. Bins where the regression is degenerate report no slope.
pub fn empirical_p3(series: &BinnedSeries) -> Result<ExperimentReport> {
    if series.bin_count() < 2 {
        return Err(Error::invalid(
            "neighbor-influence regression needs at least two bins",
        ));
    }
    let mut slopes: Vec<Option<f64>> = vec![None]; // t = 0 has no change
    let mut abs_slopes = Vec::new();
    for t in 1..series.bin_count() {
        let prev = &series.bins[t - 1];
        let cur = &series.bins[t];
        let mut predictor = Vec::new();
        let mut response = Vec::new();
        for i in 0..series.author_count() {
            let neighbors = prev.graph.neighbors(i)?;
            if neighbors.is_empty() {
                continue;
            }
            let neighbor_mean = neighbors
                .iter()
                .map(|&j| signed_log(prev.karma[j]))
                .sum::<f64>()
                / neighbors.len() as f64;
            predictor.push(neighbor_mean);
            response.push(signed_log(cur.karma[i]) - signed_log(prev.karma[i]));
        }
        match stats::ols_simple(&predictor, &response) {
            Ok(fit) => {
                slopes.push(Some(fit.slope));
                abs_slopes.push(fit.slope.abs());
            }
            Err(_) => slopes.push(None), // all isolated or constant predictor
        }
    }
    let mut report = ExperimentReport::new(ExperimentId::P3);
    report.conditions.push(ConditionSeries::from_optional_rows(
        "population",
        "neighbor_influence_slope",
        vec![slopes],
    ));
    if !abs_slopes.is_empty() {
        report
            .summary
            .insert("mean_abs_slope".into(), stats::mean(&abs_slopes));
        if let Ok(w) = stats::wilcoxon_signed_rank(&abs_slopes, Alternative::Greater) {
            report.h0.push(HypothesisCheck::new(
                "neighbor karma does not predict karma change",
                w.p_value.is_some_and(|p| p < crate::report::SIGNIFICANCE),
            ));
            report
                .tests
                .push(LabeledTest::new("abs-slope-greater-than-zero", w));
        }
    }
    Ok(report)
}

/// Empirical P4: Wasserstein-1 distance between consecutive bins'
/// signed-log karma distributions over the authors active in either bin
/// (an author contributes 0 before its first record), plus a KS test
/// between the first and last bins, a Spearman trend of W1 against the
/// bin index, and a one-tailed Wilcoxon that the W1 values exceed zero.
pub fn empirical_p4(series: &BinnedSeries) -> Result<ExperimentReport> {
    if series.bin_count() < 2 {
        return Err(Error::invalid("drift analysis needs at least two bins"));
    }
    let active_values = |bin: usize| -> Vec<f64> {
        (0..series.author_count())
            .filter(|&i| series.first_active_bin[i] <= bin)
            .map(|i| signed_log(series.bins[bin].karma[i]))
            .collect()
    };
    let mut w1_series: Vec<Option<f64>> = vec![None]; // no predecessor at t = 0
    let mut w1_values = Vec::new();
    for t in 1..series.bin_count() {
        let population: Vec<usize> = (0..series.author_count())
            .filter(|&i| series.first_active_bin[i] <= t)
            .collect();
        let prev: Vec<f64> = population
            .iter()
            .map(|&i| signed_log(series.bins[t - 1].karma[i]))
            .collect();
        let cur: Vec<f64> = population
            .iter()
            .map(|&i| signed_log(series.bins[t].karma[i]))
            .collect();
        let w1 = stats::wasserstein1(&prev, &cur)?;
        w1_series.push(Some(w1));
        w1_values.push(w1);
    }
    let mut report = ExperimentReport::new(ExperimentId::P4);
    report.conditions.push(ConditionSeries::from_optional_rows(
        "population",
        "w1_consecutive",
        vec![w1_series],
    ));
    report
        .summary
        .insert("mean_w1".into(), stats::mean(&w1_values));
    let first = active_values(0);
    let last = active_values(series.bin_count() - 1);
    if !first.is_empty() && !last.is_empty() {
        let ks = LabeledTest::new(
            "first-vs-last-karma-distribution",
            stats::ks_two_sample(&first, &last)?,
        );
        report.h0.push(HypothesisCheck::new(
            "the first and last karma distributions coincide",
            ks.rejects(),
        ));
        report.tests.push(ks);
    }
    if w1_values.len() >= 3 {
        let bins: Vec<f64> = (1..series.bin_count()).map(|t| t as f64).collect();
        if let Ok(trend) = stats::spearman_rho(&w1_values, &bins) {
            report.tests.push(LabeledTest::new("w1-trend-over-bins", trend));
        }
    }
    if let Ok(w) = stats::wilcoxon_signed_rank(&w1_values, Alternative::Greater) {
        report.h0.push(HypothesisCheck::new(
            "consecutive karma distributions are identical",
            w.p_value.is_some_and(|p| p < crate::report::SIGNIFICANCE),
        ));
        report
            .tests
            .push(LabeledTest::new("w1-greater-than-zero", w));
    }
    Ok(report)
}
