//! Symbol tables, method identity encoding and call-site resolution.
//!
//! Every method gets a globally unique identifier built from its class,
//! name and a JVM-style descriptor, e.g.
//! `foo.bar.Config.findString([LString;I)I`. Reference types are encoded by
//! simple name. Calls that cannot be resolved produce an empty candidate
//! set and are ignored downstream.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::frontend::{CompilationUnit, ExprKind, ExprNode, ImportDecl, TypeDecl};

/// Unique encoded method identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MethodId {
    pub class_fqname: String,
    pub method_name: String,
    pub descriptor: String,
}

impl MethodId {
    pub fn text(&self) -> String {
        format!("{}.{}{}", self.class_fqname, self.method_name, self.descriptor)
    }

    /// Parse `<class>.<name><descriptor>`, e.g. `java.io.File.<init>(LString;)V`.
    pub fn parse(s: &str) -> Result<MethodId, String> {
        let paren = s.find('(').ok_or_else(|| format!("missing `(` in method id `{s}`"))?;
        let head = &s[..paren];
        let descriptor = s[paren..].to_owned();
        decode_descriptor(&descriptor)
            .ok_or_else(|| format!("bad descriptor in method id `{s}`"))?;
        let dot = head.rfind('.').ok_or_else(|| format!("missing class name in `{s}`"))?;
        let (class_fqname, method_name) = (&head[..dot], &head[dot + 1..]);
        if class_fqname.is_empty() || method_name.is_empty() {
            return Err(format!("empty class or method name in `{s}`"));
        }
        Ok(MethodId {
            class_fqname: class_fqname.to_owned(),
            method_name: method_name.to_owned(),
            descriptor,
        })
    }

    pub fn arity(&self) -> usize {
        decode_descriptor(&self.descriptor).map(|(p, _)| p.len()).unwrap_or(0)
    }
}

impl core::fmt::Display for MethodId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.text())
    }
}

fn primitive_code(name: &str) -> Option<char> {
    Some(match name {
        "byte" => 'B',
        "char" => 'C',
        "double" => 'D',
        "float" => 'F',
        "int" => 'I',
        "long" => 'J',
        "short" => 'S',
        "boolean" => 'Z',
        "void" => 'V',
        _ => return None,
    })
}

fn primitive_name(code: char) -> Option<&'static str> {
    Some(match code {
        'B' => "byte",
        'C' => "char",
        'D' => "double",
        'F' => "float",
        'I' => "int",
        'J' => "long",
        'S' => "short",
        'Z' => "boolean",
        'V' => "void",
        _ => return None,
    })
}

/// Source-level simple name of a type: package qualifiers, generics and
/// array suffixes removed.
pub fn simple_type_name(ty: &str) -> &str {
    let base = ty.split(['<', '[']).next().unwrap_or(ty);
    base.rsplit('.').next().unwrap_or(base).trim()
}

fn encode_type(ty: &str, out: &mut String) {
    let dims = ty.matches("[]").count();
    for _ in 0..dims {
        out.push('[');
    }
    let simple = simple_type_name(ty);
    match primitive_code(simple) {
        Some(c) => out.push(c),
        None => {
            out.push('L');
            out.push_str(simple);
            out.push(';');
        }
    }
}

/// Encode parameter and return types as a descriptor, `([LString;I)I` style.
pub fn encode_descriptor(param_types: &[&str], return_type: &str) -> String {
    let mut out = String::from("(");
    for p in param_types {
        encode_type(p, &mut out);
    }
    out.push(')');
    encode_type(return_type, &mut out);
    out
}

/// Decode a descriptor back to source-level type names.
pub fn decode_descriptor(desc: &str) -> Option<(Vec<String>, String)> {
    let rest = desc.strip_prefix('(')?;
    let close = rest.find(')')?;
    let (params_part, ret_part) = (&rest[..close], &rest[close + 1..]);
    let mut params = Vec::new();
    let mut chars = params_part.chars().peekable();
    while chars.peek().is_some() {
        params.push(decode_one(&mut chars)?);
    }
    let mut ret_chars = ret_part.chars().peekable();
    let ret = decode_one(&mut ret_chars)?;
    if ret_chars.next().is_some() {
        return None;
    }
    Some((params, ret))
}

fn decode_one(chars: &mut core::iter::Peekable<core::str::Chars<'_>>) -> Option<String> {
    let mut dims = 0;
    while chars.peek() == Some(&'[') {
        chars.next();
        dims += 1;
    }
    let c = chars.next()?;
    let mut name = if c == 'L' {
        let mut n = String::new();
        loop {
            let c = chars.next()?;
            if c == ';' {
                break;
            }
            n.push(c);
        }
        n
    } else {
        primitive_name(c)?.to_owned()
    };
    for _ in 0..dims {
        name.push_str("[]");
    }
    Some(name)
}

/// Build the MethodId for a method signature, per the descriptor encoding.
pub fn encode_method_id(
    class_fqname: &str,
    name: &str,
    param_types: &[&str],
    return_type: &str,
) -> MethodId {
    MethodId {
        class_fqname: class_fqname.to_owned(),
        method_name: name.to_owned(),
        descriptor: encode_descriptor(param_types, return_type),
    }
}

/// One registered method signature inside the package tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodSig {
    pub id: MethodId,
    pub param_types: Vec<String>,
    pub return_type: String,
    pub is_static: bool,
    pub is_constructor: bool,
}

#[derive(Debug, Clone, Default)]
pub struct TypeInfo {
    pub fq_name: String,
    pub super_types: Vec<String>,
    pub fields: BTreeMap<String, String>,
    pub methods: Vec<MethodSig>,
}

/// Hierarchical symbol table over all declared and externally listed types.
#[derive(Debug, Clone, Default)]
pub struct PackageTree {
    types: BTreeMap<String, TypeInfo>,
    by_simple: BTreeMap<String, BTreeSet<String>>,
    subtypes: BTreeMap<String, BTreeSet<String>>,
    all_methods: BTreeSet<MethodId>,
}

impl PackageTree {
    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    pub fn get_type(&self, fq: &str) -> Option<&TypeInfo> {
        self.types.get(fq)
    }

    pub fn contains_method(&self, id: &MethodId) -> bool {
        self.all_methods.contains(id)
    }

    pub fn methods(&self) -> impl Iterator<Item = &MethodId> {
        self.all_methods.iter()
    }

    /// Package path → type fq-names directly inside it.
    pub fn packages(&self) -> BTreeMap<String, BTreeSet<String>> {
        let mut out: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for fq in self.types.keys() {
            let pkg = fq.rsplit_once('.').map(|(p, _)| p).unwrap_or("");
            out.entry(pkg.to_owned()).or_default().insert(fq.clone());
        }
        out
    }

    fn type_entry(&mut self, fq: &str) -> &mut TypeInfo {
        let simple = fq.rsplit('.').next().unwrap_or(fq).to_owned();
        self.by_simple.entry(simple).or_default().insert(fq.to_owned());
        self.types.entry(fq.to_owned()).or_insert_with(|| TypeInfo {
            fq_name: fq.to_owned(),
            ..TypeInfo::default()
        })
    }

    fn add_method(&mut self, fq: &str, sig: MethodSig) {
        self.all_methods.insert(sig.id.clone());
        let entry = self.type_entry(fq);
        if !entry.methods.iter().any(|m| m.id == sig.id) {
            entry.methods.push(sig);
        }
    }

    /// The class plus all transitive supertypes registered in the tree.
    fn with_supers(&self, fq: &str) -> Vec<&TypeInfo> {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![fq.to_owned()];
        let mut out = Vec::new();
        while let Some(cur) = stack.pop() {
            if !seen.insert(cur.clone()) {
                continue;
            }
            if let Some(info) = self.types.get(&cur) {
                stack.extend(info.super_types.iter().cloned());
                out.push(info);
            }
        }
        out
    }

    fn transitive_subtypes(&self, fq: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![fq.to_owned()];
        while let Some(cur) = stack.pop() {
            if let Some(subs) = self.subtypes.get(&cur) {
                for s in subs {
                    if seen.insert(s.clone()) {
                        stack.push(s.clone());
                    }
                }
            }
        }
        seen
    }

    /// Field type lookup along the supertype chain.
    pub fn field_type(&self, fq: &str, field: &str) -> Option<&str> {
        self.with_supers(fq)
            .into_iter()
            .find_map(|t| t.fields.get(field).map(|s| s.as_str()))
    }
}

/// Import view of a single compilation unit.
#[derive(Debug, Clone, Default)]
pub struct Imports {
    pub explicit: BTreeMap<String, String>,
    pub wildcard: Vec<String>,
}

impl Imports {
    pub fn from_unit(unit: &CompilationUnit) -> Imports {
        Self::from_decls(&unit.imports)
    }

    pub fn from_decls(decls: &[ImportDecl]) -> Imports {
        let mut imports = Imports::default();
        for d in decls {
            if d.static_import {
                continue;
            }
            if d.on_demand {
                imports.wildcard.push(d.target.clone());
            } else if let Some((_, simple)) = d.target.rsplit_once('.') {
                imports.explicit.insert(simple.to_owned(), d.target.clone());
            }
        }
        imports
    }
}

/// Innermost-first chain of name → declared-type bindings.
#[derive(Debug, Clone, Default)]
pub struct ScopeTable {
    frames: Vec<BTreeMap<String, String>>,
}

impl ScopeTable {
    pub fn new() -> ScopeTable {
        ScopeTable { frames: alloc::vec![BTreeMap::new()] }
    }

    pub fn push(&mut self) {
        self.frames.push(BTreeMap::new());
    }

    pub fn pop(&mut self) {
        self.frames.pop();
    }

    pub fn declare(&mut self, name: &str, ty: &str) {
        if let Some(top) = self.frames.last_mut() {
            top.insert(name.to_owned(), ty.to_owned());
        }
    }

    /// Innermost binding wins; shadowing is respected.
    pub fn lookup(&self, name: &str) -> Option<&str> {
        self.frames
            .iter()
            .rev()
            .find_map(|f| f.get(name).map(|s| s.as_str()))
    }
}

/// Build the package tree from parsed units plus an optional plain-text
/// signature list (External world knowledge such as the Java Standard API).
/// Returns the tree and any diagnostics (duplicates, malformed lines).
pub fn build_package_tree(
    units: &[CompilationUnit],
    extra_signatures: Option<&str>,
) -> (PackageTree, Vec<String>) {
    let mut tree = PackageTree::default();
    let mut diags = Vec::new();

    // phase 1: register declared types, fields and method signatures
    for unit in units {
        for decl in &unit.type_decls {
            register_type(&mut tree, decl, &mut diags);
        }
    }

    // phase 2: resolve raw supertype names now that every type is known
    for unit in units {
        let imports = Imports::from_unit(unit);
        let mut pending = Vec::new();
        for decl in &unit.type_decls {
            resolve_supers(&tree, decl, &imports, &unit.package_name, &mut pending);
        }
        for (fq, supers) in pending {
            for sup in &supers {
                tree.subtypes.entry(sup.clone()).or_default().insert(fq.clone());
            }
            if let Some(info) = tree.types.get_mut(&fq) {
                info.super_types = supers;
            }
        }
    }

    if let Some(text) = extra_signatures {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match MethodId::parse(line) {
                Ok(id) => {
                    let (param_types, return_type) =
                        decode_descriptor(&id.descriptor).expect("validated by parse");
                    let sig = MethodSig {
                        is_constructor: id.method_name == "<init>",
                        is_static: false,
                        id: id.clone(),
                        param_types,
                        return_type,
                    };
                    tree.add_method(&id.class_fqname.clone(), sig);
                }
                Err(e) => diags.push(format!("signature list line {}: {e}", lineno + 1)),
            }
        }
    }

    (tree, diags)
}

fn register_type(tree: &mut PackageTree, decl: &TypeDecl, diags: &mut Vec<String>) {
    if tree.types.contains_key(&decl.fq_name) {
        diags.push(format!("duplicate type `{}` merged", decl.fq_name));
    }
    {
        let info = tree.type_entry(&decl.fq_name);
        for (name, ty) in &decl.fields {
            info.fields.insert(name.clone(), ty.clone());
        }
    }
    for m in &decl.methods {
        if m.name == "<initializer>" {
            continue;
        }
        let params: Vec<&str> = m.params.iter().map(|(_, t)| t.as_str()).collect();
        let ret = if m.is_constructor {
            "void"
        } else {
            m.return_type.as_deref().unwrap_or("void")
        };
        let name = if m.is_constructor { "<init>" } else { m.name.as_str() };
        let id = encode_method_id(&decl.fq_name, name, &params, ret);
        tree.add_method(
            &decl.fq_name.clone(),
            MethodSig {
                id,
                param_types: m.params.iter().map(|(_, t)| t.clone()).collect(),
                return_type: ret.to_owned(),
                is_static: m.is_static,
                is_constructor: m.is_constructor,
            },
        );
    }
    for nested in &decl.nested {
        register_type(tree, nested, diags);
    }
}

fn resolve_supers(
    tree: &PackageTree,
    decl: &TypeDecl,
    imports: &Imports,
    package: &str,
    out: &mut Vec<(String, Vec<String>)>,
) {
    let supers: Vec<String> = decl
        .super_types
        .iter()
        .filter_map(|raw| resolve_type_name(raw, imports, package, None, tree))
        .collect();
    if !supers.is_empty() {
        out.push((decl.fq_name.clone(), supers));
    }
    for nested in &decl.nested {
        resolve_supers(tree, nested, imports, package, out);
    }
}

/// Resolve a source-level type name to a fq type registered in the tree.
pub fn resolve_type_name(
    name: &str,
    imports: &Imports,
    package: &str,
    enclosing: Option<&str>,
    tree: &PackageTree,
) -> Option<String> {
    let base = name.split(['<', '[']).next().unwrap_or(name).trim();
    if base.is_empty() || primitive_code(base).is_some() || base == "var" {
        return None;
    }
    if base.contains('.') {
        if tree.types.contains_key(base) {
            return Some(base.to_owned());
        }
        // Outer.Inner where Outer needs resolution
        let (head, rest) = base.split_once('.').unwrap();
        if let Some(outer) = resolve_type_name(head, imports, package, enclosing, tree) {
            let fq = format!("{outer}.{rest}");
            if tree.types.contains_key(&fq) {
                return Some(fq);
            }
        }
        return None;
    }
    if let Some(enc) = enclosing {
        let nested = format!("{enc}.{base}");
        if tree.types.contains_key(&nested) {
            return Some(nested);
        }
    }
    if let Some(fq) = imports.explicit.get(base) {
        return Some(fq.clone());
    }
    if !package.is_empty() {
        let fq = format!("{package}.{base}");
        if tree.types.contains_key(&fq) {
            return Some(fq);
        }
    }
    if tree.types.contains_key(base) {
        return Some(base.to_owned());
    }
    for pkg in &imports.wildcard {
        let fq = format!("{pkg}.{base}");
        if tree.types.contains_key(&fq) {
            return Some(fq);
        }
    }
    let fq = format!("java.lang.{base}");
    if tree.types.contains_key(&fq) {
        return Some(fq);
    }
    None
}

/// Everything needed to resolve names inside one method body.
pub struct ResolveCtx<'a> {
    pub imports: &'a Imports,
    pub package: &'a str,
    pub enclosing: Option<&'a str>,
}

/// Candidate methods for a call site. Virtual dispatch is over-approximated:
/// every same-name, same-arity method on the receiver type, its supertypes
/// or subtypes is a candidate. Unresolvable calls yield the empty set.
pub fn resolve_call(
    call: &ExprNode,
    scopes: &ScopeTable,
    ctx: &ResolveCtx<'_>,
    tree: &PackageTree,
) -> BTreeSet<MethodId> {
    let args = call.call_args();
    let arity = args.len();
    let mut candidates: Vec<&MethodSig> = Vec::new();
    match call.kind {
        ExprKind::NewObject => {
            let name = call.name.as_deref().unwrap_or("");
            if name.ends_with("[]") || name == "[]" {
                return BTreeSet::new();
            }
            if let Some(fq) = resolve_type_name(name, ctx.imports, ctx.package, ctx.enclosing, tree)
            {
                if let Some(info) = tree.types.get(&fq) {
                    candidates.extend(
                        info.methods
                            .iter()
                            .filter(|m| m.is_constructor && m.param_types.len() == arity),
                    );
                }
            }
        }
        ExprKind::MethodCall => {
            let name = call.name.as_deref().unwrap_or("");
            if name == "this" || name == "super" {
                return BTreeSet::new();
            }
            let classes: Vec<String> = if let Some(recv) = call.receiver() {
                receiver_classes(recv, scopes, ctx, tree)
            } else {
                ctx.enclosing.map(|e| alloc::vec![e.to_owned()]).unwrap_or_default()
            };
            let mut class_set: BTreeSet<String> = BTreeSet::new();
            for c in &classes {
                for info in tree.with_supers(c) {
                    class_set.insert(info.fq_name.clone());
                }
                class_set.extend(tree.transitive_subtypes(c));
                class_set.insert(c.clone());
            }
            for c in &class_set {
                if let Some(info) = tree.types.get(c) {
                    candidates.extend(info.methods.iter().filter(|m| {
                        !m.is_constructor
                            && m.id.method_name == name
                            && m.param_types.len() == arity
                    }));
                }
            }
        }
        _ => return BTreeSet::new(),
    }
    if candidates.len() > 1 {
        // prefer candidates compatible with statically known argument types
        let known: Vec<Option<String>> = args
            .iter()
            .map(|a| static_type_of(a, scopes, ctx, tree))
            .collect();
        if known.iter().any(|k| k.is_some()) {
            let compatible: Vec<&MethodSig> = candidates
                .iter()
                .copied()
                .filter(|m| {
                    known.iter().zip(&m.param_types).all(|(k, p)| match k {
                        None => true,
                        Some(k) => types_compatible(k, p),
                    })
                })
                .collect();
            if !compatible.is_empty() {
                candidates = compatible;
            }
        }
    }
    candidates.into_iter().map(|m| m.id.clone()).collect()
}

fn types_compatible(known: &str, param: &str) -> bool {
    let k = simple_type_name(known);
    let p = simple_type_name(param);
    if k == p {
        return true;
    }
    matches!(p, "Object" | "CharSequence" if k == "String")
        || matches!((k, p), ("int", "long") | ("int", "Integer") | ("Integer", "int"))
}

fn receiver_classes(
    recv: &ExprNode,
    scopes: &ScopeTable,
    ctx: &ResolveCtx<'_>,
    tree: &PackageTree,
) -> Vec<String> {
    if let Some(ty) = static_type_of(recv, scopes, ctx, tree) {
        if let Some(fq) = resolve_type_name(&ty, ctx.imports, ctx.package, ctx.enclosing, tree) {
            return alloc::vec![fq];
        }
        return Vec::new();
    }
    // not a value with a known type; maybe a type name (static call)
    if let Some(dotted) = flatten_dotted(recv) {
        if let Some(fq) = resolve_type_name(&dotted, ctx.imports, ctx.package, ctx.enclosing, tree)
        {
            return alloc::vec![fq];
        }
    }
    Vec::new()
}

fn flatten_dotted(expr: &ExprNode) -> Option<String> {
    match expr.kind {
        ExprKind::VarRef => expr.name.clone(),
        ExprKind::FieldAccess => {
            let base = flatten_dotted(&expr.children[0])?;
            Some(format!("{base}.{}", expr.name.as_deref()?))
        }
        _ => None,
    }
}

/// Best-effort static type of an expression, as source-level type text.
pub fn static_type_of(
    expr: &ExprNode,
    scopes: &ScopeTable,
    ctx: &ResolveCtx<'_>,
    tree: &PackageTree,
) -> Option<String> {
    match expr.kind {
        ExprKind::Constant => {
            let lit = expr.literal.as_deref()?;
            if lit.starts_with('"') {
                Some("String".to_owned())
            } else if lit.starts_with('\'') {
                Some("char".to_owned())
            } else if lit == "true" || lit == "false" {
                Some("boolean".to_owned())
            } else if lit == "null" || lit == "<lambda>" {
                None
            } else if lit.contains('.')
                || lit.ends_with(['f', 'F', 'd', 'D']) && !lit.starts_with("0x")
            {
                Some("double".to_owned())
            } else {
                Some("int".to_owned())
            }
        }
        ExprKind::VarRef => {
            let name = expr.name.as_deref()?;
            if name == "this" {
                return ctx.enclosing.map(|e| e.to_owned());
            }
            scopes.lookup(name).map(|t| t.to_owned())
        }
        ExprKind::Cast => expr.name.clone(),
        ExprKind::NewObject => expr.name.clone(),
        ExprKind::FieldAccess => {
            let base_ty = static_type_of(&expr.children[0], scopes, ctx, tree)?;
            let fq = resolve_type_name(&base_ty, ctx.imports, ctx.package, ctx.enclosing, tree)?;
            tree.field_type(&fq, expr.name.as_deref()?).map(|t| t.to_owned())
        }
        ExprKind::MethodCall => {
            let ids = resolve_call(expr, scopes, ctx, tree);
            let mut rets: BTreeSet<String> = BTreeSet::new();
            for id in &ids {
                let (_, ret) = decode_descriptor(&id.descriptor)?;
                rets.insert(ret);
            }
            if rets.len() == 1 {
                rets.into_iter().next()
            } else {
                None
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_expression, parse_source};
    use proptest::prelude::*;

    #[test]
    fn descriptor_examples() {
        assert_eq!(encode_descriptor(&["String[]", "int"], "int"), "([LString;I)I");
        assert_eq!(encode_descriptor(&[], "void"), "()V");
        assert_eq!(encode_descriptor(&["String"], "void"), "(LString;)V");
        assert_eq!(
            encode_descriptor(&["java.lang.String", "int[][]"], "boolean"),
            "(LString;[[I)Z"
        );
    }

    #[test]
    fn method_id_text_and_parse() {
        let id = encode_method_id("foo.bar.Config", "findString", &["String[]", "int"], "int");
        assert_eq!(id.text(), "foo.bar.Config.findString([LString;I)I");
        let back = MethodId::parse(&id.text()).unwrap();
        assert_eq!(back, id);
        assert_eq!(back.arity(), 2);
        let ctor = MethodId::parse("java.io.File.<init>(LString;)V").unwrap();
        assert_eq!(ctor.class_fqname, "java.io.File");
        assert_eq!(ctor.method_name, "<init>");
        assert_eq!(ctor.arity(), 1);
        assert!(MethodId::parse("nodescriptor").is_err());
        assert!(MethodId::parse("A.m(Q)V").is_err());
    }

    fn type_vocab() -> impl Strategy<Value = String> {
        prop_oneof![
            Just("int".to_owned()),
            Just("long".to_owned()),
            Just("boolean".to_owned()),
            Just("double".to_owned()),
            Just("String".to_owned()),
            Just("File".to_owned()),
            Just("Point".to_owned()),
            Just("int[]".to_owned()),
            Just("String[]".to_owned()),
            Just("String[][]".to_owned()),
        ]
    }

    proptest! {
        #[test]
        fn descriptor_round_trips(params in proptest::collection::vec(type_vocab(), 0..5),
                                  ret in type_vocab()) {
            let refs: Vec<&str> = params.iter().map(|s| s.as_str()).collect();
            let desc = encode_descriptor(&refs, &ret);
            let (back_params, back_ret) = decode_descriptor(&desc).unwrap();
            prop_assert_eq!(back_params, params);
            prop_assert_eq!(back_ret, ret);
        }

        #[test]
        fn encoding_is_injective(a in proptest::collection::vec(type_vocab(), 0..4),
                                 b in proptest::collection::vec(type_vocab(), 0..4)) {
            let ra: Vec<&str> = a.iter().map(|s| s.as_str()).collect();
            let rb: Vec<&str> = b.iter().map(|s| s.as_str()).collect();
            let da = encode_descriptor(&ra, "void");
            let db = encode_descriptor(&rb, "void");
            prop_assert_eq!(a == b, da == db);
        }
    }

    fn tree_of(sources: &[&str], sigs: Option<&str>) -> PackageTree {
        let units: Vec<_> = sources
            .iter()
            .enumerate()
            .map(|(i, s)| parse_source(s, &format!("F{i}.java")).unwrap())
            .collect();
        let (tree, diags) = build_package_tree(&units, sigs);
        assert!(diags.is_empty(), "{diags:?}");
        tree
    }

    #[test]
    fn package_tree_registers_declarations() {
        let tree = tree_of(
            &["package a.b; class C { int f(String s){ return 0; } }"],
            Some("java.io.File.<init>(LString;)V\n# comment\n\n"),
        );
        assert!(tree.contains_method(
            &MethodId::parse("a.b.C.f(LString;)I").unwrap()
        ));
        assert!(tree.contains_method(
            &MethodId::parse("java.io.File.<init>(LString;)V").unwrap()
        ));
        assert_eq!(tree.packages().get("a.b").unwrap().len(), 1);
    }

    #[test]
    fn signature_list_reports_bad_lines() {
        let (_, diags) = build_package_tree(&[], Some("not a signature\n"));
        assert_eq!(diags.len(), 1);
    }

    #[test]
    fn supertype_and_subtype_links() {
        let tree = tree_of(
            &[
                "package p; class Base { void m(int x){} }",
                "package p; class Left extends Base { void m(int x){} }",
                "package p; class Right extends Base { void m(int x){} }",
            ],
            None,
        );
        let subs = tree.transitive_subtypes("p.Base");
        assert_eq!(subs.len(), 2);
        assert!(subs.contains("p.Left") && subs.contains("p.Right"));
    }

    #[test]
    fn virtual_dispatch_over_approximates() {
        let tree = tree_of(
            &[
                "package p; class Base { void go(int x){} }",
                "package p; class Left extends Base { void go(int x){} }",
                "package p; class Right extends Base { void go(int x){} }",
            ],
            None,
        );
        let call = parse_expression("b.go(1)").unwrap();
        let imports = Imports::default();
        let ctx = ResolveCtx { imports: &imports, package: "p", enclosing: Some("p.Base") };
        let mut scopes = ScopeTable::new();
        scopes.declare("b", "Base");
        let ids = resolve_call(&call, &scopes, &ctx, &tree);
        let names: BTreeSet<&str> = ids.iter().map(|i| i.class_fqname.as_str()).collect();
        assert_eq!(
            names,
            BTreeSet::from(["p.Base", "p.Left", "p.Right"])
        );
    }

    #[test]
    fn unresolved_calls_yield_empty_set() {
        let tree = tree_of(&["package p; class C {}"], None);
        let call = parse_expression("mystery.unknown(1)").unwrap();
        let imports = Imports::default();
        let ctx = ResolveCtx { imports: &imports, package: "p", enclosing: Some("p.C") };
        let scopes = ScopeTable::new();
        assert!(resolve_call(&call, &scopes, &ctx, &tree).is_empty());
    }

    #[test]
    fn constructor_resolution_through_imports() {
        let tree = tree_of(&[], Some("java.io.File.<init>(LString;)V\n"));
        let call = parse_expression("new File(path)").unwrap();
        let decls = [ImportDecl {
            target: "java.io.File".to_owned(),
            on_demand: false,
            static_import: false,
        }];
        let imports = Imports::from_decls(&decls);
        let ctx = ResolveCtx { imports: &imports, package: "q", enclosing: None };
        let ids = resolve_call(&call, &ScopeTable::new(), &ctx, &tree);
        assert_eq!(ids.len(), 1);
        assert_eq!(ids.first().unwrap().text(), "java.io.File.<init>(LString;)V");
    }

    #[test]
    fn overload_filtered_by_argument_type() {
        let tree = tree_of(
            &["package p; class W { void set(int n){} void set(String s){} }"],
            None,
        );
        let call = parse_expression("w.set(\"x\")").unwrap();
        let imports = Imports::default();
        let ctx = ResolveCtx { imports: &imports, package: "p", enclosing: Some("p.W") };
        let mut scopes = ScopeTable::new();
        scopes.declare("w", "W");
        let ids = resolve_call(&call, &scopes, &ctx, &tree);
        assert_eq!(ids.len(), 1);
        assert_eq!(ids.first().unwrap().descriptor, "(LString;)V");
    }

    #[test]
    fn scope_shadowing() {
        let mut scopes = ScopeTable::new();
        scopes.declare("x", "int");
        scopes.push();
        scopes.declare("x", "String");
        assert_eq!(scopes.lookup("x"), Some("String"));
        scopes.pop();
        assert_eq!(scopes.lookup("x"), Some("int"));
        assert_eq!(scopes.lookup("y"), None);
    }

    #[test]
    fn type_name_resolution_precedence() {
        let tree = tree_of(
            &[
                "package p; class A {}",
                "package q; class A {}",
                "package java.lang; class String {}",
            ],
            None,
        );
        let decls = [ImportDecl {
            target: "q.A".to_owned(),
            on_demand: false,
            static_import: false,
        }];
        let imports = Imports::from_decls(&decls);
        // explicit import beats same-package
        assert_eq!(
            resolve_type_name("A", &imports, "p", None, &tree).as_deref(),
            Some("q.A")
        );
        let none = Imports::default();
        assert_eq!(
            resolve_type_name("A", &none, "p", None, &tree).as_deref(),
            Some("p.A")
        );
        assert_eq!(
            resolve_type_name("String", &none, "p", None, &tree).as_deref(),
            Some("java.lang.String")
        );
        assert_eq!(resolve_type_name("int", &none, "p", None, &tree), None);
    }
}
