//! Java front end: tokenizer, recursive-descent parser and the abstract
//! syntax representation used by the rest of the pipeline.
//!
//! This is not a full Java compiler front end. It covers declarations,
//! statements and the full expression grammar; generics are erased to raw
//! type names, annotations are skipped, and lambda / anonymous-class bodies
//! are folded into the surrounding expression so call scanning still sees
//! them.

pub mod lexer;
pub mod parser;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use parser::{parse_expression, parse_source};

/// Parse failure with a source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at {}:{}: {}", self.line, self.col, self.message)
    }
}

/// One parsed `.java` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationUnit {
    pub file_path: String,
    pub package_name: String,
    pub imports: Vec<ImportDecl>,
    pub type_decls: Vec<TypeDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportDecl {
    pub target: String,
    pub on_demand: bool,
    pub static_import: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecl {
    pub fq_name: String,
    pub simple_name: String,
    /// Raw names from `extends` / `implements` clauses, generics erased.
    pub super_types: Vec<String>,
    pub fields: Vec<(String, String)>,
    pub methods: Vec<MethodDecl>,
    pub nested: Vec<TypeDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub return_type: Option<String>,
    pub body: Vec<Stmt>,
    pub is_constructor: bool,
    pub is_static: bool,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Expr(ExprNode),
    Local {
        name: String,
        ty: String,
        init: Option<ExprNode>,
        line: u32,
    },
    Block(Vec<Stmt>),
    If {
        cond: ExprNode,
        then: Vec<Stmt>,
        els: Vec<Stmt>,
    },
    While {
        cond: ExprNode,
        body: Vec<Stmt>,
    },
    DoWhile {
        cond: ExprNode,
        body: Vec<Stmt>,
    },
    For {
        init: Vec<Stmt>,
        cond: Option<ExprNode>,
        update: Vec<ExprNode>,
        body: Vec<Stmt>,
    },
    ForEach {
        name: String,
        ty: String,
        iterable: ExprNode,
        body: Vec<Stmt>,
    },
    Return(Option<ExprNode>),
    Throw(ExprNode),
    Try {
        resources: Vec<Stmt>,
        body: Vec<Stmt>,
        catches: Vec<(String, String, Vec<Stmt>)>,
        finally: Vec<Stmt>,
    },
    Switch {
        scrutinee: ExprNode,
        arms: Vec<Vec<Stmt>>,
    },
    Synchronized {
        lock: ExprNode,
        body: Vec<Stmt>,
    },
    Assert(Vec<ExprNode>),
    Break,
    Continue,
    Empty,
}

/// Expression node kinds; `children` arity depends on the kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Constant,
    VarRef,
    FieldAccess,
    MethodCall,
    NewObject,
    UnaryOp,
    BinaryOp,
    Assignment,
    Cast,
    Conditional,
    ArrayAccess,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprNode {
    pub kind: ExprKind,
    pub children: Vec<ExprNode>,
    pub name: Option<String>,
    pub literal: Option<String>,
    pub op: Option<String>,
    /// For method_call: whether children[0] is the receiver expression.
    pub has_receiver: bool,
    pub line: u32,
    /// Byte span in the original source text.
    pub span: (usize, usize),
}

impl ExprNode {
    /// Argument expressions of a method_call or new_object node.
    pub fn call_args(&self) -> &[ExprNode] {
        match self.kind {
            ExprKind::MethodCall if self.has_receiver => &self.children[1..],
            ExprKind::MethodCall | ExprKind::NewObject => &self.children,
            _ => &[],
        }
    }

    pub fn receiver(&self) -> Option<&ExprNode> {
        if self.kind == ExprKind::MethodCall && self.has_receiver {
            self.children.first()
        } else {
            None
        }
    }

    /// Structural equality ignoring positions; used by re-parse checks.
    pub fn same_shape(&self, other: &ExprNode) -> bool {
        self.kind == other.kind
            && self.name == other.name
            && self.literal == other.literal
            && self.op == other.op
            && self.has_receiver == other.has_receiver
            && self.children.len() == other.children.len()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|(a, b)| a.same_shape(b))
    }

    /// Pre-order walk over this node and all descendants.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a ExprNode)) {
        visit(self);
        for c in &self.children {
            c.walk(visit);
        }
    }
}

/// Number of value-producing components in an expression.
///
/// Each variable reference, field-access step, method call, object creation
/// and constant counts one; operators, casts, conditionals and array
/// subscripts count zero, so `a.b()` has two components.
pub fn component_count(expr: &ExprNode) -> usize {
    let mut n = 0;
    expr.walk(&mut |e| {
        if matches!(
            e.kind,
            ExprKind::Constant
                | ExprKind::VarRef
                | ExprKind::FieldAccess
                | ExprKind::MethodCall
                | ExprKind::NewObject
        ) {
            n += 1;
        }
    });
    n
}

/// All statements of a method body, flattened into a pre-order list of the
/// expressions they contain (declaration initializers included).
pub fn statement_expressions(stmts: &[Stmt]) -> Vec<&ExprNode> {
    let mut out = Vec::new();
    collect_stmt_exprs(stmts, &mut out);
    out
}

fn collect_stmt_exprs<'a>(stmts: &'a [Stmt], out: &mut Vec<&'a ExprNode>) {
    for s in stmts {
        match s {
            Stmt::Expr(e) => out.push(e),
            Stmt::Local { init, .. } => {
                if let Some(e) = init {
                    out.push(e);
                }
            }
            Stmt::Block(b) => collect_stmt_exprs(b, out),
            Stmt::If { cond, then, els } => {
                out.push(cond);
                collect_stmt_exprs(then, out);
                collect_stmt_exprs(els, out);
            }
            Stmt::While { cond, body } | Stmt::DoWhile { cond, body } => {
                out.push(cond);
                collect_stmt_exprs(body, out);
            }
            Stmt::For { init, cond, update, body } => {
                collect_stmt_exprs(init, out);
                if let Some(c) = cond {
                    out.push(c);
                }
                out.extend(update.iter());
                collect_stmt_exprs(body, out);
            }
            Stmt::ForEach { iterable, body, .. } => {
                out.push(iterable);
                collect_stmt_exprs(body, out);
            }
            Stmt::Return(e) => {
                if let Some(e) = e {
                    out.push(e);
                }
            }
            Stmt::Throw(e) => out.push(e),
            Stmt::Try { resources, body, catches, finally } => {
                collect_stmt_exprs(resources, out);
                collect_stmt_exprs(body, out);
                for (_, _, b) in catches {
                    collect_stmt_exprs(b, out);
                }
                collect_stmt_exprs(finally, out);
            }
            Stmt::Switch { scrutinee, arms } => {
                out.push(scrutinee);
                for a in arms {
                    collect_stmt_exprs(a, out);
                }
            }
            Stmt::Synchronized { lock, body } => {
                out.push(lock);
                collect_stmt_exprs(body, out);
            }
            Stmt::Assert(es) => out.extend(es.iter()),
            Stmt::Break | Stmt::Continue | Stmt::Empty => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(src: &str) -> ExprNode {
        parse_expression(src).unwrap()
    }

    #[test]
    fn component_count_examples() {
        assert_eq!(component_count(&expr("path")), 1);
        assert_eq!(component_count(&expr("file.getParent()")), 2);
        assert_eq!(component_count(&expr("base + configFile")), 2);
        assert_eq!(component_count(&expr("(int)(bounds.getWidth() * percent)")), 3);
    }

    #[test]
    fn component_count_matches_leaf_walk_oracle() {
        // Oracle: exhaustively count the counted kinds by an independent walk.
        for src in [
            "a.b.c",
            "x",
            "f(g(h), i.j)",
            "new File(a, b)",
            "a[i] + b[j]",
            "cond ? x : y.z()",
        ] {
            let e = expr(src);
            let mut stack = alloc::vec![&e];
            let mut n = 0;
            while let Some(node) = stack.pop() {
                if matches!(
                    node.kind,
                    ExprKind::Constant
                        | ExprKind::VarRef
                        | ExprKind::FieldAccess
                        | ExprKind::MethodCall
                        | ExprKind::NewObject
                ) {
                    n += 1;
                }
                stack.extend(node.children.iter());
            }
            assert_eq!(component_count(&e), n, "{src}");
            assert!(n >= 1);
        }
    }
}
