//! Corpus-level extraction: walk project roots for `.java` files, parse
//! them (skipping failures with diagnostics), build the package tree with
//! the bundled signature list, scan against the registry, and attach
//! features.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ctyper_core::extract::{scan_units, Occurrence};
use ctyper_core::features::{featurize, SegmentationMode};
use ctyper_core::frontend::{parse_source, CompilationUnit};
use ctyper_core::registry::Registry;
use ctyper_core::resolve::build_package_tree;

/// One project to extract from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectSpec {
    pub name: String,
    pub root: PathBuf,
}

/// Parse `name=path` pairs and manifest files (one `name<TAB>path` line
/// each) into project specs. A positional argument without `=` is treated
/// as a manifest path.
pub fn parse_project_specs(args: &[String]) -> Result<Vec<ProjectSpec>> {
    let mut specs = Vec::new();
    for arg in args {
        if let Some((name, path)) = arg.split_once('=') {
            specs.push(ProjectSpec { name: name.to_owned(), root: PathBuf::from(path) });
        } else {
            let text = fs::read_to_string(arg)
                .with_context(|| format!("cannot read manifest `{arg}`"))?;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim_end();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((name, path)) = line.split_once('\t') else {
                    bail!("manifest `{arg}` line {}: expected `name<TAB>path`", i + 1);
                };
                specs.push(ProjectSpec { name: name.to_owned(), root: PathBuf::from(path) });
            }
        }
    }
    if specs.is_empty() {
        bail!("no projects given; pass `name=path` arguments or a manifest file");
    }
    let mut names: Vec<&str> = specs.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    if names.len() != specs.len() {
        bail!("project names must be unique");
    }
    Ok(specs)
}

/// All `.java` files under a root, sorted for deterministic order.
pub fn java_files(root: &Path) -> Result<Vec<PathBuf>> {
    if !root.is_dir() {
        bail!("project root `{}` is not a directory", root.display());
    }
    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(root).sort_by_file_name() {
        let entry = entry?;
        if entry.file_type().is_file()
            && entry.path().extension().is_some_and(|e| e == "java")
        {
            files.push(entry.into_path());
        }
    }
    files.sort();
    Ok(files)
}

/// Result of extracting one project.
pub struct ProjectExtraction {
    pub occurrences: Vec<Occurrence>,
    pub files_parsed: usize,
    /// Per-file parse/read failures; the files were skipped.
    pub diagnostics: Vec<String>,
}

/// Parse every `.java` file under the project root and scan it. Unparseable
/// or unreadable files are reported in `diagnostics` and skipped.
pub fn extract_project(
    spec: &ProjectSpec,
    registry: &Registry,
    extra_signatures: &str,
    mode: SegmentationMode,
) -> Result<ProjectExtraction> {
    let mut parsed: Vec<(CompilationUnit, String)> = Vec::new();
    let mut diagnostics = Vec::new();
    for path in java_files(&spec.root)? {
        let rel = path
            .strip_prefix(&spec.root)
            .unwrap_or(&path)
            .to_string_lossy()
            .replace('\\', "/");
        let source = match fs::read_to_string(&path) {
            Ok(s) => s,
            Err(e) => {
                diagnostics.push(format!("{rel}: {e}"));
                continue;
            }
        };
        match parse_source(&source, &rel) {
            Ok(unit) => parsed.push((unit, source)),
            Err(e) => diagnostics.push(format!("{rel}:{}:{}: {}", e.line, e.col, e.message)),
        }
    }
    let units: Vec<CompilationUnit> = parsed.iter().map(|(u, _)| u.clone()).collect();
    let (tree, tree_diags) = build_package_tree(&units, Some(extra_signatures));
    diagnostics.extend(tree_diags);
    let mut occurrences = scan_units(&parsed, registry, &tree, &spec.name);
    for occ in &mut occurrences {
        occ.features = Some(featurize(&occ.expr, mode));
    }
    Ok(ProjectExtraction { occurrences, files_parsed: parsed.len(), diagnostics })
}

/// Extract several projects and merge their occurrences in (project, file,
/// line) order. Per-project failures are reported, not fatal, unless every
/// project fails.
pub fn extract_corpus(
    specs: &[ProjectSpec],
    registry: &Registry,
    extra_signatures: &str,
    mode: SegmentationMode,
) -> Result<(Vec<Occurrence>, Vec<String>)> {
    let mut all = Vec::new();
    let mut diagnostics = Vec::new();
    let mut failures = 0;
    for spec in specs {
        match extract_project(spec, registry, extra_signatures, mode) {
            Ok(mut ex) => {
                diagnostics.extend(
                    ex.diagnostics.into_iter().map(|d| format!("{}: {d}", spec.name)),
                );
                all.append(&mut ex.occurrences);
            }
            Err(e) => {
                failures += 1;
                diagnostics.push(format!("{}: extraction failed: {e}", spec.name));
            }
        }
    }
    if failures == specs.len() {
        bail!("every project failed to extract");
    }
    all.sort_by(|a, b| a.project.cmp(&b.project));
    sort_occurrences_stable(&mut all);
    Ok((all, diagnostics))
}

fn sort_occurrences_stable(occs: &mut [Occurrence]) {
    occs.sort_by(|a, b| {
        (&a.project, &a.file, a.line, a.expr.span.0, a.arg_pos)
            .cmp(&(&b.project, &b.file, b.line, b.expr.span.0, b.arg_pos))
    });
}
