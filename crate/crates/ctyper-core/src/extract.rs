//! Scan parsed compilation units, match every method and constructor call
//! against the registry, and emit one labeled Occurrence per argument of
//! each matched call. Arguments at unmapped positions of a matched call are
//! labeled OTHER; calls that miss the registry emit nothing.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::features::FeatureVector;
use crate::frontend::{CompilationUnit, ExprKind, ExprNode, MethodDecl, Stmt, TypeDecl};
use crate::registry::{CType, Registry};
use crate::resolve::{resolve_call, Imports, MethodId, PackageTree, ResolveCtx, ScopeTable};

/// One extracted argument expression with its label and location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub project: String,
    pub file: String,
    pub line: u32,
    pub callee: MethodId,
    pub arg_pos: usize,
    pub label: CType,
    pub expr: ExprNode,
    pub expr_text: String,
    pub features: Option<FeatureVector>,
}

/// Source whitespace runs collapsed to single spaces.
pub fn normalize_expr_text(src: &str) -> String {
    let mut out = String::new();
    for part in src.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(part);
    }
    out
}

/// Scan one parsed file. Occurrences are appended in source order.
pub fn scan_unit(
    unit: &CompilationUnit,
    source: &str,
    registry: &Registry,
    tree: &PackageTree,
    project: &str,
    out: &mut Vec<Occurrence>,
) {
    let imports = Imports::from_unit(unit);
    for decl in &unit.type_decls {
        scan_type(unit, source, decl, &imports, registry, tree, project, out);
    }
}

/// Scan parsed files and return occurrences ordered by (file, line, position).
pub fn scan_units(
    files: &[(CompilationUnit, String)],
    registry: &Registry,
    tree: &PackageTree,
    project: &str,
) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for (unit, source) in files {
        scan_unit(unit, source, registry, tree, project, &mut out);
    }
    sort_occurrences(&mut out);
    out
}

pub fn sort_occurrences(out: &mut [Occurrence]) {
    out.sort_by(|a, b| {
        (&a.file, a.line, a.expr.span.0, a.arg_pos)
            .cmp(&(&b.file, b.line, b.expr.span.0, b.arg_pos))
    });
}

#[allow(clippy::too_many_arguments)]
fn scan_type(
    unit: &CompilationUnit,
    source: &str,
    decl: &TypeDecl,
    imports: &Imports,
    registry: &Registry,
    tree: &PackageTree,
    project: &str,
    out: &mut Vec<Occurrence>,
) {
    let ctx = ResolveCtx {
        imports,
        package: &unit.package_name,
        enclosing: Some(&decl.fq_name),
    };
    let mut scopes = ScopeTable::new();
    for (name, ty) in &decl.fields {
        scopes.declare(name, ty);
    }
    for method in &decl.methods {
        scan_method(unit, source, method, &mut scopes, &ctx, registry, tree, project, out);
    }
    for nested in &decl.nested {
        scan_type(unit, source, nested, imports, registry, tree, project, out);
    }
}

#[allow(clippy::too_many_arguments)]
fn scan_method(
    unit: &CompilationUnit,
    source: &str,
    method: &MethodDecl,
    scopes: &mut ScopeTable,
    ctx: &ResolveCtx<'_>,
    registry: &Registry,
    tree: &PackageTree,
    project: &str,
    out: &mut Vec<Occurrence>,
) {
    scopes.push();
    for (name, ty) in &method.params {
        scopes.declare(name, ty);
    }
    scan_stmts(unit, source, &method.body, scopes, ctx, registry, tree, project, out);
    scopes.pop();
}

#[allow(clippy::too_many_arguments)]
fn scan_stmts(
    unit: &CompilationUnit,
    source: &str,
    stmts: &[Stmt],
    scopes: &mut ScopeTable,
    ctx: &ResolveCtx<'_>,
    registry: &Registry,
    tree: &PackageTree,
    project: &str,
    out: &mut Vec<Occurrence>,
) {
    macro_rules! expr {
        ($e:expr) => {
            scan_expr(unit, source, $e, scopes, ctx, registry, tree, project, out)
        };
    }
    macro_rules! block {
        ($b:expr) => {{
            scopes.push();
            scan_stmts(unit, source, $b, scopes, ctx, registry, tree, project, out);
            scopes.pop();
        }};
    }
    for stmt in stmts {
        match stmt {
            Stmt::Expr(e) => expr!(e),
            Stmt::Local { name, ty, init, .. } => {
                if let Some(e) = init {
                    expr!(e);
                }
                let declared = if ty == "var" {
                    // minimal local inference: take the constructed type
                    match init {
                        Some(e) if e.kind == ExprKind::NewObject => {
                            e.name.clone().unwrap_or_default()
                        }
                        _ => String::new(),
                    }
                } else {
                    ty.clone()
                };
                if !declared.is_empty() {
                    scopes.declare(name, &declared);
                }
            }
            Stmt::Block(b) => block!(b),
            Stmt::If { cond, then, els } => {
                expr!(cond);
                block!(then);
                block!(els);
            }
            Stmt::While { cond, body } | Stmt::DoWhile { cond, body } => {
                expr!(cond);
                block!(body);
            }
            Stmt::For { init, cond, update, body } => {
                scopes.push();
                scan_stmts(unit, source, init, scopes, ctx, registry, tree, project, out);
                if let Some(c) = cond {
                    expr!(c);
                }
                for u in update {
                    expr!(u);
                }
                scan_stmts(unit, source, body, scopes, ctx, registry, tree, project, out);
                scopes.pop();
            }
            Stmt::ForEach { name, ty, iterable, body } => {
                expr!(iterable);
                scopes.push();
                scopes.declare(name, ty);
                scan_stmts(unit, source, body, scopes, ctx, registry, tree, project, out);
                scopes.pop();
            }
            Stmt::Return(e) => {
                if let Some(e) = e {
                    expr!(e);
                }
            }
            Stmt::Throw(e) => expr!(e),
            Stmt::Try { resources, body, catches, finally } => {
                scopes.push();
                scan_stmts(unit, source, resources, scopes, ctx, registry, tree, project, out);
                scan_stmts(unit, source, body, scopes, ctx, registry, tree, project, out);
                scopes.pop();
                for (name, ty, cbody) in catches {
                    scopes.push();
                    scopes.declare(name, ty.split('|').next().unwrap_or(ty));
                    scan_stmts(unit, source, cbody, scopes, ctx, registry, tree, project, out);
                    scopes.pop();
                }
                block!(finally);
            }
            Stmt::Switch { scrutinee, arms } => {
                expr!(scrutinee);
                for arm in arms {
                    block!(arm);
                }
            }
            Stmt::Synchronized { lock, body } => {
                expr!(lock);
                block!(body);
            }
            Stmt::Assert(es) => {
                for e in es {
                    expr!(e);
                }
            }
            Stmt::Break | Stmt::Continue | Stmt::Empty => {}
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn scan_expr(
    unit: &CompilationUnit,
    source: &str,
    expr: &ExprNode,
    scopes: &ScopeTable,
    ctx: &ResolveCtx<'_>,
    registry: &Registry,
    tree: &PackageTree,
    project: &str,
    out: &mut Vec<Occurrence>,
) {
    expr.walk(&mut |node| {
        if !matches!(node.kind, ExprKind::MethodCall | ExprKind::NewObject) {
            return;
        }
        let candidates = resolve_call(node, scopes, ctx, tree);
        let Some(entry) = registry.lookup(&candidates) else {
            return;
        };
        for (pos, arg) in node.call_args().iter().enumerate() {
            let label = entry.arg_ctypes.get(&pos).copied().unwrap_or(CType::Other);
            let text = source
                .get(arg.span.0..arg.span.1)
                .map(normalize_expr_text)
                .unwrap_or_default();
            out.push(Occurrence {
                project: project.to_owned(),
                file: unit.file_path.clone(),
                line: arg.line,
                callee: entry.method.clone(),
                arg_pos: pos,
                label,
                expr: arg.clone(),
                expr_text: text,
                features: None,
            });
        }
    });
}

/// Per-project, per-c-type occurrence counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    pub rows: BTreeMap<String, BTreeMap<CType, usize>>,
}

impl CountTable {
    pub fn row_total(&self, project: &str) -> usize {
        self.rows.get(project).map(|r| r.values().sum()).unwrap_or(0)
    }

    pub fn column_total(&self, label: CType) -> usize {
        self.rows.values().filter_map(|r| r.get(&label)).sum()
    }

    pub fn grand_total(&self) -> usize {
        self.rows.values().flat_map(|r| r.values()).sum()
    }
}

pub fn tabulate_counts(occurrences: &[Occurrence]) -> CountTable {
    let mut table = CountTable::default();
    for occ in occurrences {
        *table
            .rows
            .entry(occ.project.clone())
            .or_default()
            .entry(occ.label)
            .or_insert(0) += 1;
    }
    table
}
