//! Scoring model outputs against a corpus.
//!
//! Each prediction goes through extraction, parsing, a goal consistency
//! check, planning and finally equivalence with the ground truth. The first
//! failing stage is recorded, so `correct` implies `solvable` implies
//! `parseable` on every record.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use pddleq_core::equivalence::{equivalent, EquivalenceMode};
use pddleq_core::fixtures::DomainId;
use pddleq_core::fullspec::{fully_specify_problem, FullSpecError};
use pddleq_core::pddl::{extract_problem, parse_problem, NotParseable};
use pddleq_core::planning::is_solvable;
use pddleq_core::DomainModel;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{read_jsonl, size_bin, DatasetRecord, SIZE_BINS};
use crate::domains::DomainSet;
use crate::Error;

/// One line of a predictions file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub output: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureStage {
    /// No problem definition in the output.
    Extract,
    /// A problem definition was found but none parsed.
    Parse,
    /// The goal contradicts itself or the initial state.
    Consistency,
    /// No plan was found.
    Plan,
    /// Solvable, but a different problem.
    Equivalence,
}

impl FailureStage {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureStage::Extract => "extract",
            FailureStage::Parse => "parse",
            FailureStage::Consistency => "consistency",
            FailureStage::Plan => "plan",
            FailureStage::Equivalence => "equivalence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub example_id: String,
    pub parseable: bool,
    pub solvable: bool,
    pub correct: bool,
    pub failure_stage: Option<FailureStage>,
    pub verdict_path: Option<String>,
    pub elapsed_us: u64,
}

impl EvalRecord {
    pub fn ladder_holds(&self) -> bool {
        (!self.correct || self.solvable) && (!self.solvable || self.parseable)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalOptions {
    pub relax_typing: bool,
    pub planner_budget: usize,
    pub workers: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            relax_typing: false,
            planner_budget: pddleq_core::planning::DEFAULT_NODE_BUDGET,
            workers: None,
        }
    }
}

/// Scores one output. Fails only when the ground truth itself does not
/// parse against `domain`.
pub fn evaluate_one(
    prediction: &str,
    truth: &DatasetRecord,
    domain: &DomainModel,
    options: &EvalOptions,
) -> Result<EvalRecord, Error> {
    let started = Instant::now();
    let truth_problem = parse_problem(&truth.ground_truth_pddl, domain, false)
        .map_err(|e| Error::Invariant(format!("ground truth of `{}` does not parse: {e}", truth.id)))?;
    let mut record = EvalRecord {
        example_id: truth.id.clone(),
        parseable: false,
        solvable: false,
        correct: false,
        failure_stage: None,
        verdict_path: None,
        elapsed_us: 0,
    };
    let finish = |mut r: EvalRecord, stage: Option<FailureStage>| {
        r.failure_stage = stage;
        r.elapsed_us = started.elapsed().as_micros() as u64;
        Ok(r)
    };

    let problem = match extract_problem(prediction, domain, options.relax_typing) {
        Ok(p) => p,
        Err(NotParseable { candidates: 0, unbalanced: 0, .. }) => return finish(record, Some(FailureStage::Extract)),
        Err(_) => return finish(record, Some(FailureStage::Parse)),
    };
    record.parseable = true;

    if let Some(id) = DomainId::from_name(&domain.name) {
        if let Err(FullSpecError::InconsistentGoal(_)) = fully_specify_problem(id, &problem) {
            return finish(record, Some(FailureStage::Consistency));
        }
    }
    if !is_solvable(&problem, domain, options.planner_budget).is_solvable() {
        return finish(record, Some(FailureStage::Plan));
    }
    record.solvable = true;

    let mode = EquivalenceMode {
        is_placeholder: truth.is_placeholder,
    };
    if let Ok(v) = equivalent(&problem, &truth_problem, mode) {
        record.verdict_path = Some(v.path.as_str().to_string());
        record.correct = v.equal;
    }
    let stage = (!record.correct).then_some(FailureStage::Equivalence);
    finish(record, stage)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub count: usize,
    pub parseable: usize,
    pub solvable: usize,
    pub correct: usize,
    pub parseable_rate: f64,
    pub solvable_rate: f64,
    pub correct_rate: f64,
}

impl Metrics {
    fn add(&mut self, r: &EvalRecord) {
        self.count += 1;
        self.parseable += r.parseable as usize;
        self.solvable += r.solvable as usize;
        self.correct += r.correct as usize;
    }

    fn finish(mut self) -> Metrics {
        let rate = |k: usize| if self.count == 0 { 0.0 } else { k as f64 / self.count as f64 };
        self.parseable_rate = rate(self.parseable);
        self.solvable_rate = rate(self.solvable);
        self.correct_rate = rate(self.correct);
        self
    }
}

/// Unweighted mean of the per-domain rates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MacroAverage {
    pub parseable_rate: f64,
    pub solvable_rate: f64,
    pub correct_rate: f64,
}

/// The part of a report that depends only on the inputs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CanonicalReport {
    pub relax_typing: bool,
    /// Pooled over all examples.
    pub overall: Metrics,
    pub macro_average: MacroAverage,
    pub per_domain: BTreeMap<String, Metrics>,
    pub by_category: BTreeMap<String, Metrics>,
    pub by_size_bin: BTreeMap<String, Metrics>,
    pub failure_stages: BTreeMap<String, usize>,
    pub verdict_paths: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingSummary {
    pub examples: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub p95_ms: f64,
    pub max_ms: f64,
}

impl TimingSummary {
    pub fn from_durations(mut samples: Vec<Duration>) -> TimingSummary {
        if samples.is_empty() {
            return TimingSummary::default();
        }
        samples.sort();
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        let n = samples.len();
        let at = |q: f64| ms(samples[((n - 1) as f64 * q).round() as usize]);
        TimingSummary {
            examples: n,
            mean_ms: samples.iter().map(|d| ms(*d)).sum::<f64>() / n as f64,
            median_ms: at(0.5),
            p95_ms: at(0.95),
            max_ms: ms(samples[n - 1]),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub canonical: CanonicalReport,
    pub timing: TimingSummary,
}

/// Aggregates scored examples; the result does not depend on their order.
pub fn aggregate(results: &[(EvalRecord, &DatasetRecord)], relax_typing: bool) -> EvalReport {
    let mut c = CanonicalReport {
        relax_typing,
        ..CanonicalReport::default()
    };
    let mut overall = Metrics::default();
    for (r, truth) in results {
        overall.add(r);
        c.per_domain.entry(truth.domain_id.clone()).or_default().add(r);
        c.by_category.entry(truth.category().to_string()).or_default().add(r);
        c.by_size_bin.entry(size_bin(truth.num_propositions).to_string()).or_default().add(r);
        if let Some(stage) = r.failure_stage {
            *c.failure_stages.entry(stage.as_str().to_string()).or_default() += 1;
        }
        if let Some(path) = &r.verdict_path {
            *c.verdict_paths.entry(path.clone()).or_default() += 1;
        }
    }
    c.overall = overall.finish();
    for m in [&mut c.per_domain, &mut c.by_category, &mut c.by_size_bin] {
        for v in m.values_mut() {
            *v = std::mem::take(v).finish();
        }
    }
    if !c.per_domain.is_empty() {
        let k = c.per_domain.len() as f64;
        let mean = |f: fn(&Metrics) -> f64| c.per_domain.values().map(f).sum::<f64>() / k;
        c.macro_average = MacroAverage {
            parseable_rate: mean(|m| m.parseable_rate),
            solvable_rate: mean(|m| m.solvable_rate),
            correct_rate: mean(|m| m.correct_rate),
        };
    }
    EvalReport {
        canonical: c,
        timing: TimingSummary::from_durations(
            results.iter().map(|(r, _)| Duration::from_micros(r.elapsed_us)).collect(),
        ),
    }
}

/// Scores every prediction against the dataset record with the same id.
/// Records come back sorted by id.
pub fn evaluate_batch(
    predictions: &Path,
    dataset: &Path,
    domains: &DomainSet,
    options: &EvalOptions,
) -> Result<(EvalReport, Vec<EvalRecord>), Error> {
    let truths: Vec<DatasetRecord> = read_jsonl(dataset)?;
    let mut by_id = BTreeMap::new();
    for t in &truths {
        if by_id.insert(t.id.as_str(), t).is_some() {
            return Err(Error::DuplicateId {
                path: dataset.to_path_buf(),
                id: t.id.clone(),
            });
        }
    }
    let preds: Vec<Prediction> = read_jsonl(predictions)?;
    let mut pairs = BTreeMap::new();
    for p in &preds {
        let truth = by_id.get(p.id.as_str()).ok_or_else(|| Error::MissingExample(p.id.clone()))?;
        if pairs.insert(p.id.as_str(), (p, *truth)).is_some() {
            return Err(Error::DuplicateId {
                path: predictions.to_path_buf(),
                id: p.id.clone(),
            });
        }
    }
    let pairs: Vec<_> = pairs.into_values().collect();
    for (_, t) in &pairs {
        domains.get(&t.domain_id)?;
    }
    let scored: Vec<EvalRecord> = crate::with_workers(options.workers, || {
        pairs
            .par_iter()
            .map(|(p, t)| evaluate_one(&p.output, t, domains.get(&t.domain_id)?, options))
            .collect::<Result<_, _>>()
    })?;
    if let Some(bad) = scored.iter().find(|r| !r.ladder_holds()) {
        return Err(Error::Invariant(format!("metric ladder broken for `{}`", bad.example_id)));
    }
    let joined: Vec<(EvalRecord, &DatasetRecord)> =
        scored.iter().cloned().zip(pairs.iter().map(|(_, t)| *t)).collect();
    Ok((aggregate(&joined, options.relax_typing), scored))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Table,
}

pub fn report_render(report: &EvalReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        ReportFormat::Table => table(report),
    }
}

fn table(report: &EvalReport) -> String {
    let c = &report.canonical;
    let mut out = String::new();
    let row = |out: &mut String, name: &str, m: &Metrics| {
        let _ = writeln!(
            out,
            "{name:<24} {:>7} {:>9.1}% {:>9.1}% {:>9.1}%",
            m.count,
            100.0 * m.parseable_rate,
            100.0 * m.solvable_rate,
            100.0 * m.correct_rate
        );
    };
    let header = |out: &mut String, title: &str| {
        let _ = writeln!(out, "{title:<24} {:>7} {:>10} {:>10} {:>10}", "count", "parseable", "solvable", "correct");
    };
    header(&mut out, "domain");
    for (name, m) in &c.per_domain {
        row(&mut out, name, m);
    }
    row(&mut out, "all (pooled)", &c.overall);
    let _ = writeln!(
        out,
        "{:<24} {:>7} {:>9.1}% {:>9.1}% {:>9.1}%",
        "all (domain mean)",
        "",
        100.0 * c.macro_average.parseable_rate,
        100.0 * c.macro_average.solvable_rate,
        100.0 * c.macro_average.correct_rate
    );
    out.push('\n');
    header(&mut out, "abstractness");
    for (name, m) in &c.by_category {
        row(&mut out, name, m);
    }
    out.push('\n');
    header(&mut out, "size");
    for bin in SIZE_BINS {
        if let Some(m) = c.by_size_bin.get(bin) {
            row(&mut out, bin, m);
        }
    }
    let _ = writeln!(
        out,
        "\nrelax typing: {}; time per example: mean {:.2} ms, median {:.2} ms",
        c.relax_typing, report.timing.mean_ms, report.timing.median_ms
    );
    out
}
