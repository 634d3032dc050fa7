//! Plain-text artifact formats: occurrence JSONL, tree JSON, and TSV /
//! aligned-text report tables. Everything here is byte-deterministic.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ctyper_core::eval::{ConfusionMatrix, MetricsReport};
use ctyper_core::extract::{CountTable, Occurrence};
use ctyper_core::features::FeatureVector;
use ctyper_core::frontend::parse_expression;
use ctyper_core::learn::DecisionTree;
use ctyper_core::registry::CType;
use ctyper_core::resolve::MethodId;
use serde::{Deserialize, Serialize};

/// One occurrence as serialized to JSONL.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OccurrenceRecord {
    pub project: String,
    pub file: String,
    pub line: u32,
    pub callee: String,
    pub arg_pos: usize,
    pub label: CType,
    pub expr_text: String,
    pub features: FeatureVector,
}

impl OccurrenceRecord {
    pub fn from_occurrence(occ: &Occurrence) -> OccurrenceRecord {
        OccurrenceRecord {
            project: occ.project.clone(),
            file: occ.file.clone(),
            line: occ.line,
            callee: occ.callee.text(),
            arg_pos: occ.arg_pos,
            label: occ.label,
            expr_text: occ.expr_text.clone(),
            features: occ.features.clone().unwrap_or_default(),
        }
    }

    /// Reconstruct the in-memory occurrence; the expression is re-parsed
    /// from its normalized text.
    pub fn to_occurrence(&self) -> Result<Occurrence> {
        let expr = parse_expression(&self.expr_text)
            .map_err(|e| anyhow::anyhow!("unparseable expr `{}`: {}", self.expr_text, e.message))?;
        Ok(Occurrence {
            project: self.project.clone(),
            file: self.file.clone(),
            line: self.line,
            callee: MethodId::parse(&self.callee).map_err(anyhow::Error::msg)?,
            arg_pos: self.arg_pos,
            label: self.label,
            expr,
            expr_text: self.expr_text.clone(),
            features: Some(self.features.clone()),
        })
    }
}

pub fn write_occurrences_jsonl(path: &Path, occurrences: &[Occurrence]) -> Result<()> {
    let mut out = String::new();
    for occ in occurrences {
        let record = OccurrenceRecord::from_occurrence(occ);
        out.push_str(&serde_json::to_string(&record)?);
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn read_occurrences_jsonl(path: &Path) -> Result<Vec<Occurrence>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut occurrences = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: OccurrenceRecord = serde_json::from_str(line)
            .with_context(|| format!("{}:{}: bad JSONL record", path.display(), i + 1))?;
        occurrences.push(
            record
                .to_occurrence()
                .with_context(|| format!("{}:{}", path.display(), i + 1))?,
        );
    }
    Ok(occurrences)
}

/// A decision tree plus the settings it was trained with.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeFile {
    pub min_items: usize,
    pub segmentation: ctyper_core::features::SegmentationMode,
    pub tree: DecisionTree,
}

pub fn write_tree(path: &Path, tree_file: &TreeFile) -> Result<()> {
    let mut json = serde_json::to_string_pretty(tree_file)?;
    json.push('\n');
    fs::write(path, json).with_context(|| format!("writing {}", path.display()))
}

pub fn read_tree(path: &Path) -> Result<TreeFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: bad tree file", path.display()))
}

/// Per-project, per-c-type count table as TSV with row and column totals.
pub fn render_counts_tsv(table: &CountTable) -> String {
    let mut out = String::from("project");
    for label in CType::ALL {
        let _ = write!(out, "\t{}", label.name());
    }
    out.push_str("\ttotal\n");
    for (project, row) in &table.rows {
        out.push_str(project);
        for label in CType::ALL {
            let _ = write!(out, "\t{}", row.get(&label).copied().unwrap_or(0));
        }
        let _ = writeln!(out, "\t{}", table.row_total(project));
    }
    out.push_str("total");
    for label in CType::ALL {
        let _ = write!(out, "\t{}", table.column_total(label));
    }
    let _ = writeln!(out, "\t{}", table.grand_total());
    out
}

/// Per-c-type precision/recall/F table as TSV, macro row last.
pub fn render_metrics_tsv(m: &MetricsReport) -> String {
    let mut out = String::from("ctype\tsupport\tprecision\trecall\tf\n");
    for label in CType::ALL {
        let Some((p, r, f)) = m.per_ctype.get(&label) else { continue };
        let support = m.support.get(&label).copied().unwrap_or(0);
        let _ = writeln!(out, "{}\t{support}\t{p:.4}\t{r:.4}\t{f:.4}", label.name());
    }
    let _ = writeln!(
        out,
        "Average\t{}\t{:.4}\t{:.4}\t{:.4}",
        m.support.values().sum::<usize>(),
        m.macro_precision,
        m.macro_recall,
        m.macro_f
    );
    out
}

/// Aligned-text version of the metrics table.
pub fn render_metrics_text(m: &MetricsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<8} {:>8} {:>10} {:>8} {:>8}", "CType", "Support", "Precision", "Recall", "F");
    for label in CType::ALL {
        let Some((p, r, f)) = m.per_ctype.get(&label) else { continue };
        let support = m.support.get(&label).copied().unwrap_or(0);
        let _ = writeln!(
            out,
            "{:<8} {:>8} {:>9.1}% {:>7.1}% {:>7.1}%",
            label.name(),
            support,
            p * 100.0,
            r * 100.0,
            f * 100.0
        );
    }
    let _ = writeln!(
        out,
        "{:<8} {:>8} {:>9.1}% {:>7.1}% {:>7.1}%",
        "Average",
        m.support.values().sum::<usize>(),
        m.macro_precision * 100.0,
        m.macro_recall * 100.0,
        m.macro_f * 100.0
    );
    out
}

/// Confusion matrix as TSV, rows = true labels, columns = predictions.
pub fn render_confusion_tsv(cm: &ConfusionMatrix) -> String {
    let mut out = String::from("truth\\pred");
    for label in CType::ALL {
        let _ = write!(out, "\t{}", label.name());
    }
    out.push('\n');
    for truth in CType::ALL {
        out.push_str(truth.name());
        for pred in CType::ALL {
            let _ = write!(out, "\t{}", cm.get(truth, pred));
        }
        out.push('\n');
    }
    out
}

/// Aligned-text confusion matrix; empty cells print as dots for legibility.
pub fn render_confusion_text(cm: &ConfusionMatrix) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<8}", "");
    for label in CType::ALL {
        let _ = write!(out, " {:>6}", &label.name()[..label.name().len().min(6)]);
    }
    out.push('\n');
    for truth in CType::ALL {
        let _ = write!(out, "{:<8}", truth.name());
        for pred in CType::ALL {
            let n = cm.get(truth, pred);
            if n == 0 {
                let _ = write!(out, " {:>6}", ".");
            } else {
                let _ = write!(out, " {n:>6}");
            }
        }
        out.push('\n');
    }
    out
}

/// Per-label component-count distribution (buckets 1..6 and ≥7) as TSV.
pub fn render_lengths_tsv(hist: &std::collections::BTreeMap<CType, [f64; 7]>) -> String {
    let mut out = String::from("ctype\t1\t2\t3\t4\t5\t6\t7+\n");
    for (label, row) in hist {
        out.push_str(label.name());
        for pct in row {
            let _ = write!(out, "\t{pct:.1}");
        }
        out.push('\n');
    }
    out
}

/// Read all occurrence files given on a command line.
pub fn read_occurrence_files(paths: &[String]) -> Result<Vec<Occurrence>> {
    if paths.is_empty() {
        bail!("no occurrence files given");
    }
    let mut all = Vec::new();
    for p in paths {
        all.extend(read_occurrences_jsonl(Path::new(p))?);
    }
    Ok(all)
}
