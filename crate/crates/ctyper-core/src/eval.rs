//! Leave-one-project-out cross validation, precision/recall/F-score,
//! confusion matrices, and corpus-level reports.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::extract::Occurrence;
use crate::frontend::{component_count, ExprKind};
use crate::learn::{classify, id3_train, LearnerConfig, Sample};
use crate::registry::CType;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    SingleProject,
    EmptyInput,
}

impl core::fmt::Display for EvalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EvalError::SingleProject => {
                f.write_str("leave-one-project-out needs at least two projects")
            }
            EvalError::EmptyInput => f.write_str("empty evaluation input"),
        }
    }
}

/// One cross-validation fold; indices refer into the occurrence slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub held_out: String,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl Fold {
    pub fn is_empty_test(&self) -> bool {
        self.test.is_empty()
    }
}

pub fn projects_of(occurrences: &[Occurrence]) -> Vec<String> {
    let set: BTreeSet<&str> = occurrences.iter().map(|o| o.project.as_str()).collect();
    set.into_iter().map(|s| s.to_owned()).collect()
}

/// One fold per project: that project's occurrences form the test set and
/// every other project's form the training set.
pub fn lopo_folds(
    occurrences: &[Occurrence],
    projects: &[String],
) -> Result<Vec<Fold>, EvalError> {
    if projects.len() < 2 {
        return Err(EvalError::SingleProject);
    }
    let mut folds = Vec::new();
    for project in projects {
        let mut fold = Fold {
            held_out: project.clone(),
            train: Vec::new(),
            test: Vec::new(),
        };
        for (i, occ) in occurrences.iter().enumerate() {
            if &occ.project == project {
                fold.test.push(i);
            } else {
                fold.train.push(i);
            }
        }
        folds.push(fold);
    }
    Ok(folds)
}

/// Per-label precision, recall and F-score plus macro averages over the 12
/// c-types (OTHER participates in training and confusion, not the macro).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub per_ctype: BTreeMap<CType, (f64, f64, f64)>,
    pub support: BTreeMap<CType, usize>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f: f64,
}

pub fn score(pairs: &[(CType, CType)]) -> Result<MetricsReport, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut tp: BTreeMap<CType, usize> = BTreeMap::new();
    let mut predicted: BTreeMap<CType, usize> = BTreeMap::new();
    let mut support: BTreeMap<CType, usize> = BTreeMap::new();
    for &(truth, pred) in pairs {
        *support.entry(truth).or_insert(0) += 1;
        *predicted.entry(pred).or_insert(0) += 1;
        if truth == pred {
            *tp.entry(truth).or_insert(0) += 1;
        }
    }
    let mut per_ctype = BTreeMap::new();
    for label in CType::ALL {
        let sup = support.get(&label).copied().unwrap_or(0);
        let pred = predicted.get(&label).copied().unwrap_or(0);
        if sup == 0 && pred == 0 {
            continue;
        }
        let tp_n = tp.get(&label).copied().unwrap_or(0) as f64;
        // zero-division conventions: no predictions → P=0; no truths → R=0
        let p = if pred > 0 { tp_n / pred as f64 } else { 0.0 };
        let r = if sup > 0 { tp_n / sup as f64 } else { 0.0 };
        let f = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
        per_ctype.insert(label, (p, r, f));
    }
    let averaged: Vec<CType> = CType::CONCEPTS
        .iter()
        .copied()
        .filter(|c| support.get(c).copied().unwrap_or(0) > 0)
        .collect();
    let n = averaged.len().max(1) as f64;
    let sum = |pick: fn(&(f64, f64, f64)) -> f64| -> f64 {
        averaged
            .iter()
            .map(|c| per_ctype.get(c).map(pick).unwrap_or(0.0))
            .sum::<f64>()
            / n
    };
    Ok(MetricsReport {
        macro_precision: sum(|m| m.0),
        macro_recall: sum(|m| m.1),
        macro_f: sum(|m| m.2),
        per_ctype,
        support,
    })
}

/// Square true-label × predicted-label count table over all 13 labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: [[usize; 13]; 13],
}

fn label_index(label: CType) -> usize {
    CType::ALL.iter().position(|&c| c == label).expect("label in ALL")
}

pub fn confusion(pairs: &[(CType, CType)]) -> ConfusionMatrix {
    let mut counts = [[0usize; 13]; 13];
    for &(truth, pred) in pairs {
        counts[label_index(truth)][label_index(pred)] += 1;
    }
    ConfusionMatrix { counts }
}

impl ConfusionMatrix {
    pub fn get(&self, truth: CType, pred: CType) -> usize {
        self.counts[label_index(truth)][label_index(pred)]
    }

    pub fn row_sum(&self, truth: CType) -> usize {
        self.counts[label_index(truth)].iter().sum()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }
}

/// Train on every fold and classify its held-out project. Returns
/// (truth, prediction) pairs in occurrence order per fold.
pub fn lopo_evaluate(
    occurrences: &[Occurrence],
    projects: &[String],
    config: &LearnerConfig,
) -> Result<Vec<(CType, CType)>, EvalError> {
    let folds = lopo_folds(occurrences, projects)?;
    let mut pairs = Vec::new();
    for fold in &folds {
        let train: Vec<Sample> = fold
            .train
            .iter()
            .filter_map(|&i| {
                occurrences[i].features.as_ref().map(|fv| Sample {
                    features: fv.clone(),
                    label: occurrences[i].label,
                })
            })
            .collect();
        let Ok(tree) = id3_train(&train, config) else {
            continue;
        };
        for &i in &fold.test {
            let Some(fv) = occurrences[i].features.as_ref() else { continue };
            pairs.push((occurrences[i].label, classify(&tree, fv)));
        }
    }
    if pairs.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    Ok(pairs)
}

/// Distinct expression texts of a label ranked by frequency, constants
/// excluded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopExpressions {
    pub overall: Vec<(String, usize)>,
    pub per_project: BTreeMap<String, Vec<(String, usize)>>,
}

pub fn report_top_expressions(
    occurrences: &[Occurrence],
    label: CType,
    k: usize,
) -> TopExpressions {
    let mut overall: BTreeMap<&str, usize> = BTreeMap::new();
    let mut per_project: BTreeMap<&str, BTreeMap<&str, usize>> = BTreeMap::new();
    for occ in occurrences {
        if occ.label != label || occ.expr.kind == ExprKind::Constant {
            continue;
        }
        *overall.entry(&occ.expr_text).or_insert(0) += 1;
        *per_project
            .entry(&occ.project)
            .or_default()
            .entry(&occ.expr_text)
            .or_insert(0) += 1;
    }
    let rank = |m: BTreeMap<&str, usize>| -> Vec<(String, usize)> {
        let mut v: Vec<(String, usize)> =
            m.into_iter().map(|(t, n)| (t.to_owned(), n)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v.truncate(k);
        v
    };
    TopExpressions {
        overall: rank(overall),
        per_project: per_project
            .into_iter()
            .map(|(p, m)| (p.to_owned(), rank(m)))
            .collect(),
    }
}

/// Component-count buckets 1..=6 and ≥7.
pub const LENGTH_BUCKETS: usize = 7;

/// Percentage distribution of expression lengths per label. Rows for labels
/// with at least one occurrence sum to 100.
pub fn report_length_histogram(
    occurrences: &[Occurrence],
) -> BTreeMap<CType, [f64; LENGTH_BUCKETS]> {
    let mut raw: BTreeMap<CType, [usize; LENGTH_BUCKETS]> = BTreeMap::new();
    for occ in occurrences {
        let n = component_count(&occ.expr);
        let bucket = n.clamp(1, LENGTH_BUCKETS) - 1;
        raw.entry(occ.label).or_insert([0; LENGTH_BUCKETS])[bucket] += 1;
    }
    raw.into_iter()
        .map(|(label, counts)| {
            let total: usize = counts.iter().sum();
            let mut pct = [0.0; LENGTH_BUCKETS];
            for (i, &c) in counts.iter().enumerate() {
                pct[i] = 100.0 * c as f64 / total as f64;
            }
            (label, pct)
        })
        .collect()
}
