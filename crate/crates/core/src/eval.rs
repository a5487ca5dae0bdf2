//! F-measure and MAP of ranked summaries against human gold summaries.
//!
//! Matching is on (predicate token, object token) pairs. Scores are computed
//! per annotator and averaged, then averaged over entities.

use std::collections::{BTreeMap, HashSet};
use std::io::BufRead;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::mp::RankedSummary;
use crate::rdf::normalize_field;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("gold line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("no summary for gold entity {0}")]
    MissingSummary(String),
    #[error("read error: {0}")]
    Io(String),
}

/// A (predicate token, object token) pair.
pub type Feature = (String, String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldStandard {
    pub entity_iri: String,
    pub annotators: Vec<String>,
    /// One set per annotator, parallel to `annotators`.
    pub gold_summaries: Vec<HashSet<Feature>>,
    /// Largest gold set size.
    pub k_hint: usize,
}

/// Reads `entity<TAB>annotator<TAB>predicate<TAB>object` lines, grouping by
/// entity then annotator in first-appearance order.
pub fn load_gold<R: BufRead>(input: R) -> Result<Vec<GoldStandard>, EvalError> {
    let mut grouped: IndexMap<String, IndexMap<String, HashSet<Feature>>> = IndexMap::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| EvalError::Io(e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |reason: String| EvalError::MalformedLine {
            line: line_no,
            reason,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [entity, annotator, predicate, object] = fields[..] else {
            return Err(malformed(format!(
                "expected 4 columns, found {}",
                fields.len()
            )));
        };
        let entity = strip_angle(entity.trim());
        if entity.is_empty() || annotator.trim().is_empty() {
            return Err(malformed("empty entity or annotator".into()));
        }
        let p = normalize_field(predicate).map_err(|e| malformed(e.to_string()))?;
        let o = normalize_field(object).map_err(|e| malformed(e.to_string()))?;
        grouped
            .entry(entity.to_string())
            .or_default()
            .entry(annotator.trim().to_string())
            .or_default()
            .insert((p, o));
    }
    Ok(grouped
        .into_iter()
        .map(|(entity_iri, by_annotator)| {
            let (annotators, gold_summaries): (Vec<_>, Vec<_>) = by_annotator.into_iter().unzip();
            let k_hint = gold_summaries.iter().map(HashSet::len).max().unwrap_or(0);
            GoldStandard {
                entity_iri,
                annotators,
                gold_summaries,
                k_hint,
            }
        })
        .collect())
}

pub(crate) fn strip_angle(s: &str) -> &str {
    s.strip_prefix('<')
        .and_then(|x| x.strip_suffix('>'))
        .unwrap_or(s)
}

/// How annotators' gold sets are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GoldAggregation {
    /// Score against each annotator and average.
    #[default]
    PerAnnotator,
    /// Score once against the union of all annotators' sets.
    PooledUnion,
}

fn gold_sets(gold: &GoldStandard, agg: GoldAggregation) -> Vec<HashSet<&Feature>> {
    match agg {
        GoldAggregation::PerAnnotator => gold
            .gold_summaries
            .iter()
            .map(|g| g.iter().collect())
            .collect(),
        GoldAggregation::PooledUnion => {
            vec![gold.gold_summaries.iter().flatten().collect()]
        }
    }
}

fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values
        .into_iter()
        .fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// F-measure of the first `k` summary items against one gold set.
pub fn set_f_measure(summary: &[Feature], gold: &HashSet<&Feature>, k: usize) -> f64 {
    let chosen: HashSet<&Feature> = summary.iter().take(k).collect();
    if chosen.is_empty() || gold.is_empty() {
        return 0.0;
    }
    let hits = chosen.iter().filter(|f| gold.contains(*f)).count() as f64;
    let precision = hits / chosen.len() as f64;
    let recall = hits / gold.len() as f64;
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Average precision of the first `k` summary items against one gold set,
/// normalized by min(k, |G|). Repeated items count once.
pub fn set_average_precision(summary: &[Feature], gold: &HashSet<&Feature>, k: usize) -> f64 {
    let norm = k.min(gold.len());
    if norm == 0 {
        return 0.0;
    }
    let mut seen = HashSet::new();
    let mut hits = 0usize;
    let mut total = 0.0;
    for (i, item) in summary.iter().take(k).enumerate() {
        if seen.insert(item) && gold.contains(item) {
            hits += 1;
            total += hits as f64 / (i + 1) as f64;
        }
    }
    total / norm as f64
}

pub fn f_measure_with(
    summary: &[Feature],
    gold: &GoldStandard,
    k: usize,
    agg: GoldAggregation,
) -> f64 {
    mean(
        gold_sets(gold, agg)
            .iter()
            .map(|g| set_f_measure(summary, g, k)),
    )
}

pub fn average_precision_with(
    summary: &[Feature],
    gold: &GoldStandard,
    k: usize,
    agg: GoldAggregation,
) -> f64 {
    mean(
        gold_sets(gold, agg)
            .iter()
            .map(|g| set_average_precision(summary, g, k)),
    )
}

/// Mean F-measure over annotators.
pub fn f_measure(summary: &[Feature], gold: &GoldStandard, k: usize) -> f64 {
    f_measure_with(summary, gold, k, GoldAggregation::PerAnnotator)
}

/// Mean average precision over annotators.
pub fn average_precision(summary: &[Feature], gold: &GoldStandard, k: usize) -> f64 {
    average_precision_with(summary, gold, k, GoldAggregation::PerAnnotator)
}

/// A ranked list of features for one entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntitySummary {
    pub entity_iri: String,
    pub features: Vec<Feature>,
}

impl From<&RankedSummary> for EntitySummary {
    fn from(s: &RankedSummary) -> Self {
        EntitySummary {
            entity_iri: s.entity_iri.clone(),
            features: s
                .ranked
                .iter()
                .map(|r| {
                    (
                        r.predicate_token.clone(),
                        r.object_token.clone().unwrap_or_default(),
                    )
                })
                .collect(),
        }
    }
}

/// Gold standards for one dataset. `by_k` overrides `default` for a given k
/// (e.g. separate top-5 and top-10 gold files).
#[derive(Debug, Clone, Default)]
pub struct DatasetGold {
    pub label: String,
    pub default: Vec<GoldStandard>,
    pub by_k: BTreeMap<usize, Vec<GoldStandard>>,
}

impl DatasetGold {
    pub fn new(label: impl Into<String>, golds: Vec<GoldStandard>) -> Self {
        DatasetGold {
            label: label.into(),
            default: golds,
            by_k: BTreeMap::new(),
        }
    }

    pub fn golds_for(&self, k: usize) -> &[GoldStandard] {
        self.by_k.get(&k).unwrap_or(&self.default)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scores {
    pub f_measure: f64,
    pub average_precision: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntityScores {
    pub dataset: String,
    pub entity: String,
    pub per_k: BTreeMap<usize, Scores>,
}

/// Mean scores over the entities of a dataset (or over all datasets).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub dataset: String,
    pub entities: BTreeMap<usize, usize>,
    pub per_k: BTreeMap<usize, Scores>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub system: String,
    pub ks: Vec<usize>,
    pub per_entity: Vec<EntityScores>,
    /// One entry per dataset, then the pooled "All" entry.
    pub aggregates: Vec<Aggregate>,
}

pub const POOLED_LABEL: &str = "All";

/// Scores every gold entity of every dataset at each k.
pub fn evaluate(
    summaries: &[EntitySummary],
    datasets: &[DatasetGold],
    ks: &[usize],
    agg: GoldAggregation,
    exec: Execution,
) -> Result<EvalReport, EvalError> {
    let by_entity: std::collections::HashMap<&str, &EntitySummary> = summaries
        .iter()
        .map(|s| (s.entity_iri.as_str(), s))
        .collect();

    let mut jobs: Vec<(usize, &str, usize, &GoldStandard)> = Vec::new();
    for (di, ds) in datasets.iter().enumerate() {
        for &k in ks {
            for g in ds.golds_for(k) {
                if !by_entity.contains_key(g.entity_iri.as_str()) {
                    return Err(EvalError::MissingSummary(g.entity_iri.clone()));
                }
                jobs.push((di, g.entity_iri.as_str(), k, g));
            }
        }
    }
    let scored = exec.map(&jobs, |&(_, entity, k, gold)| {
        let s = &by_entity[entity].features;
        Scores {
            f_measure: f_measure_with(s, gold, k, agg),
            average_precision: average_precision_with(s, gold, k, agg),
        }
    });

    let mut per_entity: IndexMap<(usize, &str), BTreeMap<usize, Scores>> = IndexMap::new();
    for (&(di, entity, k, _), scores) in jobs.iter().zip(scored) {
        per_entity
            .entry((di, entity))
            .or_default()
            .insert(k, scores);
    }
    let mut per_entity: Vec<(usize, EntityScores)> = per_entity
        .into_iter()
        .map(|((di, entity), per_k)| {
            (
                di,
                EntityScores {
                    dataset: datasets[di].label.clone(),
                    entity: entity.to_string(),
                    per_k,
                },
            )
        })
        .collect();
    per_entity.sort_by_key(|(di, _)| *di);

    let aggregate = |label: &str, rows: &[&EntityScores]| {
        let mut per_k = BTreeMap::new();
        let mut entities = BTreeMap::new();
        for &k in ks {
            let at_k: Vec<Scores> = rows
                .iter()
                .filter_map(|r| r.per_k.get(&k).copied())
                .collect();
            entities.insert(k, at_k.len());
            per_k.insert(
                k,
                Scores {
                    f_measure: mean(at_k.iter().map(|s| s.f_measure)),
                    average_precision: mean(at_k.iter().map(|s| s.average_precision)),
                },
            );
        }
        Aggregate {
            dataset: label.to_string(),
            entities,
            per_k,
        }
    };
    let mut aggregates = Vec::new();
    for (di, ds) in datasets.iter().enumerate() {
        let rows: Vec<&EntityScores> = per_entity
            .iter()
            .filter(|(d, _)| *d == di)
            .map(|(_, r)| r)
            .collect();
        aggregates.push(aggregate(&ds.label, &rows));
    }
    let all: Vec<&EntityScores> = per_entity.iter().map(|(_, r)| r).collect();
    aggregates.push(aggregate(POOLED_LABEL, &all));

    Ok(EvalReport {
        system: "mpsum".to_string(),
        ks: ks.to_vec(),
        per_entity: per_entity.into_iter().map(|(_, r)| r).collect(),
        aggregates,
    })
}

impl EvalReport {
    pub fn pooled(&self) -> &Aggregate {
        self.aggregates
            .last()
            .expect("pooled aggregate always present")
    }

    pub fn aggregate(&self, dataset: &str) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| a.dataset == dataset)
    }

    /// Table layout: one row per metric, one column per (dataset, k).
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("metric\tsystem");
        for a in &self.aggregates {
            for k in &self.ks {
                out.push_str(&format!("\t{}@{}", a.dataset, k));
            }
        }
        out.push('\n');
        for (name, pick) in [
            (
                "F-measure",
                (|s: &Scores| s.f_measure) as fn(&Scores) -> f64,
            ),
            ("MAP", |s: &Scores| s.average_precision),
        ] {
            out.push_str(&format!("{name}\t{}", self.system));
            for a in &self.aggregates {
                for k in &self.ks {
                    out.push_str(&format!("\t{:.6}", pick(&a.per_k[k])));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn per_entity_tsv(&self) -> String {
        let mut out = String::from("dataset\tentity");
        for k in &self.ks {
            out.push_str(&format!("\tF@{k}\tAP@{k}"));
        }
        out.push('\n');
        for row in &self.per_entity {
            out.push_str(&format!("{}\t{}", row.dataset, row.entity));
            for k in &self.ks {
                match row.per_k.get(k) {
                    Some(s) => {
                        out.push_str(&format!("\t{:.6}\t{:.6}", s.f_measure, s.average_precision))
                    }
                    None => out.push_str("\t\t"),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
