//! Command-line interface: `extract`, `train`, `predict`, `evaluate`,
//! `report`. Timestamps appear only in `.log` headers; every other artifact
//! is byte-deterministic.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ctyper_core::eval;
use ctyper_core::extract::tabulate_counts;
use ctyper_core::features::{featurize, top_words, SegmentationMode};
use ctyper_core::frontend::parse_expression;
use ctyper_core::learn::{classify, id3_train, LearnerConfig, Sample};
use ctyper_core::registry::{load_registry, CType, Registry};

use crate::formats::{
    read_occurrence_files, read_tree, render_confusion_text, render_confusion_tsv,
    render_counts_tsv, render_lengths_tsv, render_metrics_text, render_metrics_tsv,
    write_occurrences_jsonl, write_tree, TreeFile,
};
use crate::pipeline::{extract_project, parse_project_specs};
use crate::BUNDLED_REGISTRY;

#[derive(Parser)]
#[command(
    name = "ctyper",
    about = "Extracts conceptual types of Java API-call arguments and learns to predict them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args)]
pub struct CommonOpts {
    /// Registry file overriding the bundled catalog
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// Minimum samples required to split a tree node
    #[arg(long, default_value_t = 10)]
    pub min_items: usize,
    /// Identifier word segmentation: literal or camel
    #[arg(long, default_value = "literal")]
    pub segmentation: String,
    /// Output directory for artifacts
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Subcommand)]
pub enum Command {
    /// Scan projects and write labeled occurrences as JSONL
    Extract {
        #[command(flatten)]
        common: CommonOpts,
        /// `name=path` project specs, or manifest files (name<TAB>path lines)
        #[arg(required = true)]
        projects: Vec<String>,
    },
    /// Train a decision tree from occurrence files
    Train {
        #[command(flatten)]
        common: CommonOpts,
        /// Occurrence JSONL files
        #[arg(required = true)]
        occurrences: Vec<String>,
    },
    /// Classify an expression or re-classify occurrence files
    Predict {
        #[command(flatten)]
        common: CommonOpts,
        /// Trained tree JSON file
        #[arg(long)]
        tree: PathBuf,
        /// A raw Java expression to classify
        #[arg(long)]
        expr: Option<String>,
        /// Occurrence JSONL files to re-classify
        occurrences: Vec<String>,
    },
    /// Leave-one-project-out cross validation over occurrence files
    Evaluate {
        #[command(flatten)]
        common: CommonOpts,
        /// Occurrence JSONL files
        #[arg(required = true)]
        occurrences: Vec<String>,
    },
    /// Corpus reports: counts, top expressions, top words, length histogram
    Report {
        #[command(flatten)]
        common: CommonOpts,
        /// Occurrence JSONL files
        #[arg(required = true)]
        occurrences: Vec<String>,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract { common, projects } => cmd_extract(&common, &projects),
        Command::Train { common, occurrences } => cmd_train(&common, &occurrences),
        Command::Predict { common, tree, expr, occurrences } => {
            cmd_predict(&common, &tree, expr.as_deref(), &occurrences)
        }
        Command::Evaluate { common, occurrences } => cmd_evaluate(&common, &occurrences),
        Command::Report { common, occurrences } => cmd_report(&common, &occurrences),
    }
}

fn load_registry_opt(common: &CommonOpts) -> Result<Registry> {
    let text = match &common.registry {
        Some(path) => fs::read_to_string(path)
            .with_context(|| format!("reading registry {}", path.display()))?,
        None => BUNDLED_REGISTRY.to_owned(),
    };
    load_registry(&text).map_err(|e| anyhow::anyhow!("{e}"))
}

fn segmentation_of(common: &CommonOpts) -> Result<SegmentationMode> {
    SegmentationMode::parse(&common.segmentation)
        .ok_or_else(|| anyhow::anyhow!("unknown segmentation mode `{}`", common.segmentation))
}

fn learner_of(common: &CommonOpts) -> Result<LearnerConfig> {
    if common.min_items == 0 {
        bail!("--min-items must be at least 1");
    }
    Ok(LearnerConfig { min_items: common.min_items })
}

fn ensure_out(common: &CommonOpts) -> Result<&Path> {
    fs::create_dir_all(&common.out)
        .with_context(|| format!("creating {}", common.out.display()))?;
    Ok(&common.out)
}

/// Append lines to a `.log` file with a timestamp header. Logs are the only
/// artifacts that carry timestamps.
fn write_log(out: &Path, name: &str, lines: &[String]) -> Result<()> {
    let ts = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut text = format!("# run at unix-epoch {ts}\n");
    for l in lines {
        text.push_str(l);
        text.push('\n');
    }
    fs::write(out.join(name), text).with_context(|| format!("writing {name}"))
}

fn cmd_extract(common: &CommonOpts, projects: &[String]) -> Result<()> {
    let registry = load_registry_opt(common)?;
    let mode = segmentation_of(common)?;
    let out = ensure_out(common)?;
    let specs = parse_project_specs(projects)?;

    let mut all = Vec::new();
    let mut log = Vec::new();
    let mut failures = 0;
    for spec in &specs {
        match extract_project(spec, &registry, crate::BUNDLED_SIGNATURES, mode) {
            Ok(ex) => {
                log.push(format!(
                    "{}: {} files parsed, {} occurrences, {} skipped file(s)",
                    spec.name,
                    ex.files_parsed,
                    ex.occurrences.len(),
                    ex.diagnostics.len()
                ));
                for d in &ex.diagnostics {
                    log.push(format!("{}: skipped {d}", spec.name));
                }
                let path = out.join(format!("{}.jsonl", spec.name));
                write_occurrences_jsonl(&path, &ex.occurrences)?;
                println!("{}: {} occurrences -> {}", spec.name, ex.occurrences.len(), path.display());
                all.extend(ex.occurrences);
            }
            Err(e) => {
                failures += 1;
                log.push(format!("{}: FAILED: {e}", spec.name));
                eprintln!("{}: extraction failed: {e}", spec.name);
            }
        }
    }
    if failures == specs.len() {
        bail!("every project failed to extract");
    }
    let counts = tabulate_counts(&all);
    fs::write(out.join("counts.tsv"), render_counts_tsv(&counts))?;
    write_log(out, "extract.log", &log)?;
    Ok(())
}

fn cmd_train(common: &CommonOpts, occurrence_files: &[String]) -> Result<()> {
    let config = learner_of(common)?;
    let mode = segmentation_of(common)?;
    let out = ensure_out(common)?;
    let occurrences = read_occurrence_files(occurrence_files)?;
    let samples: Vec<Sample> = occurrences
        .iter()
        .filter_map(|o| {
            o.features.as_ref().map(|fv| Sample { features: fv.clone(), label: o.label })
        })
        .collect();
    let tree = id3_train(&samples, &config)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let rules = tree.to_rules_text();
    write_tree(
        &out.join("tree.json"),
        &TreeFile { min_items: config.min_items, segmentation: mode, tree },
    )?;
    fs::write(out.join("rules.txt"), &rules)?;
    write_log(
        out,
        "train.log",
        &[format!("trained on {} samples (min_items {})", samples.len(), config.min_items)],
    )?;
    println!("trained on {} samples -> {}", samples.len(), out.join("tree.json").display());
    Ok(())
}

fn cmd_predict(
    _common: &CommonOpts,
    tree_path: &Path,
    expr: Option<&str>,
    occurrence_files: &[String],
) -> Result<()> {
    let tree_file = read_tree(tree_path)?;
    if expr.is_none() && occurrence_files.is_empty() {
        bail!("give --expr or at least one occurrence file");
    }
    if let Some(text) = expr {
        let parsed = parse_expression(text)
            .map_err(|e| anyhow::anyhow!("cannot parse expression: {}:{}: {}", e.line, e.col, e.message))?;
        let fv = featurize(&parsed, tree_file.segmentation);
        println!("{}", classify(&tree_file.tree, &fv));
    }
    if !occurrence_files.is_empty() {
        let occurrences = read_occurrence_files(occurrence_files)?;
        for occ in &occurrences {
            let fv = occ.features.clone().unwrap_or_default();
            let predicted = classify(&tree_file.tree, &fv);
            println!("{}\t{}:{}\t{}", predicted, occ.file, occ.line, occ.expr_text);
            if predicted != occ.label {
                eprintln!(
                    "mismatch: {}:{} `{}` labeled {} predicted {}",
                    occ.file, occ.line, occ.expr_text, occ.label, predicted
                );
            }
        }
    }
    Ok(())
}

fn cmd_evaluate(common: &CommonOpts, occurrence_files: &[String]) -> Result<()> {
    let config = learner_of(common)?;
    let out = ensure_out(common)?;
    let occurrences = read_occurrence_files(occurrence_files)?;
    let projects = eval::projects_of(&occurrences);
    let pairs = eval::lopo_evaluate(&occurrences, &projects, &config)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let metrics = eval::score(&pairs).map_err(|e| anyhow::anyhow!("{e}"))?;
    let cm = eval::confusion(&pairs);
    fs::write(out.join("metrics.tsv"), render_metrics_tsv(&metrics))?;
    fs::write(out.join("metrics.txt"), render_metrics_text(&metrics))?;
    fs::write(out.join("confusion.tsv"), render_confusion_tsv(&cm))?;
    fs::write(out.join("confusion.txt"), render_confusion_text(&cm))?;
    write_log(
        out,
        "evaluate.log",
        &[format!(
            "{} folds over {} occurrences; macro F {:.4}",
            projects.len(),
            occurrences.len(),
            metrics.macro_f
        )],
    )?;
    print!("{}", render_metrics_text(&metrics));
    Ok(())
}

fn cmd_report(common: &CommonOpts, occurrence_files: &[String]) -> Result<()> {
    let out = ensure_out(common)?;
    let occurrences = read_occurrence_files(occurrence_files)?;
    let counts = tabulate_counts(&occurrences);
    fs::write(out.join("counts.tsv"), render_counts_tsv(&counts))?;

    let mut top_expr = String::new();
    let mut top_word = String::new();
    for label in CType::CONCEPTS {
        let top = eval::report_top_expressions(&occurrences, label, 10);
        if !top.overall.is_empty() {
            top_expr.push_str(&format!("== {} ==\n", label.name()));
            for (text, n) in &top.overall {
                top_expr.push_str(&format!("{n:>6}  {text}\n"));
            }
        }
        let words = top_words(&occurrences, label);
        if !words.is_empty() {
            top_word.push_str(&format!("== {} ==\n", label.name()));
            for (word, projects) in words.iter().take(10) {
                top_word.push_str(&format!("{projects:>6}  {word}\n"));
            }
        }
    }
    fs::write(out.join("top_expressions.txt"), top_expr)?;
    fs::write(out.join("top_words.txt"), top_word)?;

    let hist = eval::report_length_histogram(&occurrences);
    fs::write(out.join("lengths.tsv"), render_lengths_tsv(&hist))?;
    write_log(
        out,
        "report.log",
        &[format!("reported over {} occurrences", occurrences.len())],
    )?;
    println!("reports written to {}", out.display());
    Ok(())
}
