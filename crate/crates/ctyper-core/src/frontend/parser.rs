//! Recursive-descent parser for the supported Java subset.
//!
//! Generics are erased while parsing, annotations are skipped, and a few
//! rare constructs (local classes, labeled breaks) are tolerated without
//! being represented. The output is sufficient for declaration, import and
//! call-site analysis, not for type checking.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::lexer::{tokenize, TokKind, Token};
use super::{
    CompilationUnit, ExprKind, ExprNode, ImportDecl, MethodDecl, Stmt, SyntaxError, TypeDecl,
};

/// Parse a whole `.java` source file.
pub fn parse_source(src: &str, path: &str) -> Result<CompilationUnit, SyntaxError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    p.compilation_unit(path)
}

/// Parse a single expression (used by `predict` and by re-parse checks).
pub fn parse_expression(src: &str) -> Result<ExprNode, SyntaxError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expression()?;
    if !p.at_eof() {
        return Err(p.error("trailing input after expression"));
    }
    Ok(e)
}

const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
];

const MODIFIERS: &[&str] = &[
    "public", "protected", "private", "static", "final", "abstract", "native", "synchronized",
    "transient", "volatile", "strictfp", "default", "sealed",
];

fn is_reserved_expr_word(s: &str) -> bool {
    matches!(
        s,
        "class" | "interface" | "enum" | "record" | "if" | "else" | "while" | "do" | "for"
            | "return" | "throw" | "try" | "catch" | "finally" | "switch" | "case" | "default"
            | "break" | "continue" | "assert" | "synchronized" | "instanceof" | "extends"
            | "implements" | "throws" | "package" | "import" | "static" | "public" | "private"
            | "protected" | "final" | "abstract" | "native" | "transient" | "volatile"
    )
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn tok(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn tok_at(&self, off: usize) -> &Token {
        let i = (self.pos + off).min(self.tokens.len() - 1);
        &self.tokens[i]
    }

    fn at(&self, text: &str) -> bool {
        self.tok().is(text)
    }

    fn at_ident(&self) -> bool {
        self.tok().kind == TokKind::Ident
    }

    fn at_eof(&self) -> bool {
        self.tok().kind == TokKind::Eof
    }

    fn bump(&mut self) -> Token {
        let t = self.tok().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> Result<Token, SyntaxError> {
        if self.at(text) {
            Ok(self.bump())
        } else {
            Err(self.error(&format!("expected `{}`, found `{}`", text, self.tok().text)))
        }
    }

    fn error(&self, message: &str) -> SyntaxError {
        let t = self.tok();
        SyntaxError { line: t.line, col: t.col, message: message.to_owned() }
    }

    fn expect_ident(&mut self) -> Result<Token, SyntaxError> {
        if self.at_ident() {
            Ok(self.bump())
        } else {
            Err(self.error(&format!("expected identifier, found `{}`", self.tok().text)))
        }
    }

    // ---- declarations -------------------------------------------------

    fn compilation_unit(&mut self, path: &str) -> Result<CompilationUnit, SyntaxError> {
        self.skip_annotations();
        let package_name = if self.at("package") {
            self.bump();
            let name = self.qualified_name()?;
            self.expect(";")?;
            name
        } else {
            String::new()
        };
        let mut imports = Vec::new();
        loop {
            self.skip_annotations();
            if !self.at("import") {
                break;
            }
            self.bump();
            let static_import = self.eat("static");
            let mut target = self.expect_ident()?.text;
            let mut on_demand = false;
            while self.eat(".") {
                if self.eat("*") {
                    on_demand = true;
                    break;
                }
                target.push('.');
                target.push_str(&self.expect_ident()?.text);
            }
            self.expect(";")?;
            imports.push(ImportDecl { target, on_demand, static_import });
        }
        let mut type_decls = Vec::new();
        while !self.at_eof() {
            if self.eat(";") {
                continue;
            }
            type_decls.push(self.type_decl(&package_name)?);
        }
        Ok(CompilationUnit {
            file_path: path.to_owned(),
            package_name,
            imports,
            type_decls,
        })
    }

    fn qualified_name(&mut self) -> Result<String, SyntaxError> {
        let mut name = self.expect_ident()?.text;
        while self.at(".") && self.tok_at(1).kind == TokKind::Ident {
            self.bump();
            name.push('.');
            name.push_str(&self.expect_ident()?.text);
        }
        Ok(name)
    }

    fn skip_annotations(&mut self) {
        while self.at("@") && self.tok_at(1).kind == TokKind::Ident
            && !self.tok_at(1).is("interface")
        {
            self.bump();
            let _ = self.qualified_name();
            if self.at("(") {
                let _ = self.skip_balanced("(", ")");
            }
        }
    }

    fn skip_modifiers(&mut self) -> bool {
        let mut is_static = false;
        loop {
            self.skip_annotations();
            if self.at_ident() && MODIFIERS.contains(&self.tok().text.as_str()) {
                // `default` is a modifier only in interface method position.
                if self.at("default") && !self.tok_at(1).kind.eq(&TokKind::Ident)
                    && !PRIMITIVES.contains(&self.tok_at(1).text.as_str())
                {
                    return is_static;
                }
                if self.at("static") {
                    is_static = true;
                }
                self.bump();
            } else if self.at("non") && self.tok_at(1).is("-") {
                // non-sealed
                self.bump();
                self.bump();
                self.bump();
            } else {
                return is_static;
            }
        }
    }

    fn at_type_keyword(&self) -> bool {
        self.at("class")
            || self.at("interface")
            || self.at("enum")
            || (self.at("record") && self.tok_at(1).kind == TokKind::Ident
                && self.tok_at(2).is("("))
            || (self.at("@") && self.tok_at(1).is("interface"))
    }

    fn type_decl(&mut self, enclosing: &str) -> Result<TypeDecl, SyntaxError> {
        self.skip_modifiers();
        if self.at("@") {
            self.bump(); // @interface
        }
        let keyword = self.bump().text;
        if !matches!(keyword.as_str(), "class" | "interface" | "enum" | "record") {
            return Err(self.error(&format!("expected type declaration, found `{keyword}`")));
        }
        let simple_name = self.expect_ident()?.text;
        let fq_name = if enclosing.is_empty() {
            simple_name.clone()
        } else {
            format!("{enclosing}.{simple_name}")
        };
        if self.at("<") {
            self.skip_generics()?;
        }
        let mut decl = TypeDecl {
            fq_name,
            simple_name: simple_name.clone(),
            super_types: Vec::new(),
            fields: Vec::new(),
            methods: Vec::new(),
            nested: Vec::new(),
        };
        // record components double as fields
        if keyword == "record" && self.at("(") {
            self.bump();
            while !self.at(")") {
                self.skip_annotations();
                let ty = self.parse_type()?;
                let name = self.expect_ident()?.text;
                decl.fields.push((name, ty));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
        }
        while self.at("extends") || self.at("implements") || self.at("permits") {
            let clause = self.bump().text;
            loop {
                let ty = self.parse_type()?;
                if clause != "permits" {
                    decl.super_types.push(ty);
                }
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect("{")?;
        if keyword == "enum" {
            self.enum_constants(&mut decl)?;
        }
        while !self.at("}") && !self.at_eof() {
            self.member(&mut decl)?;
        }
        self.expect("}")?;
        Ok(decl)
    }

    fn enum_constants(&mut self, decl: &mut TypeDecl) -> Result<(), SyntaxError> {
        let mut init_stmts = Vec::new();
        loop {
            self.skip_annotations();
            if self.at(";") || self.at("}") {
                break;
            }
            let tok = self.expect_ident()?;
            let (line, start) = (tok.line, tok.start);
            let mut args = Vec::new();
            if self.at("(") {
                args = self.argument_list()?;
            }
            if !args.is_empty() {
                init_stmts.push(Stmt::Expr(ExprNode {
                    kind: ExprKind::NewObject,
                    name: Some(decl.simple_name.clone()),
                    literal: None,
                    op: None,
                    has_receiver: false,
                    line,
                    span: (start, self.prev_end()),
                    children: args,
                }));
            }
            if self.at("{") {
                // constant class body: hoist its members onto the enum
                self.bump();
                while !self.at("}") && !self.at_eof() {
                    self.member(decl)?;
                }
                self.expect("}")?;
            }
            if !self.eat(",") {
                break;
            }
        }
        self.eat(";");
        if !init_stmts.is_empty() {
            decl.methods.push(MethodDecl {
                name: "<initializer>".to_owned(),
                params: Vec::new(),
                return_type: None,
                body: init_stmts,
                is_constructor: false,
                is_static: true,
                line: 0,
            });
        }
        Ok(())
    }

    fn member(&mut self, decl: &mut TypeDecl) -> Result<(), SyntaxError> {
        if self.eat(";") {
            return Ok(());
        }
        let is_static = self.skip_modifiers();
        if self.at_type_keyword() {
            // nested type; re-parse modifiers already consumed is fine
            let nested = self.type_decl_after_modifiers(&decl.fq_name)?;
            decl.nested.push(nested);
            return Ok(());
        }
        if self.at("{") {
            let line = self.tok().line;
            let body = self.block()?;
            decl.methods.push(MethodDecl {
                name: "<initializer>".to_owned(),
                params: Vec::new(),
                return_type: None,
                body,
                is_constructor: false,
                is_static,
                line,
            });
            return Ok(());
        }
        if self.at("<") {
            self.skip_generics()?;
        }
        // constructor?
        if self.at_ident() && self.tok().text == decl.simple_name && self.tok_at(1).is("(") {
            let line = self.tok().line;
            let name = self.bump().text;
            let params = self.parameter_list()?;
            self.skip_throws()?;
            let body = if self.at("{") { self.block()? } else { self.expect(";").map(|_| Vec::new())? };
            decl.methods.push(MethodDecl {
                name,
                params,
                return_type: None,
                body,
                is_constructor: true,
                is_static: false,
                line,
            });
            return Ok(());
        }
        let ty = self.parse_type()?;
        let tok = self.expect_ident()?;
        let (name, line) = (tok.text, tok.line);
        if self.at("(") {
            let params = self.parameter_list()?;
            // trailing array dims on the return type (legacy syntax)
            let mut ret = ty;
            while self.at("[") && self.tok_at(1).is("]") {
                self.bump();
                self.bump();
                ret.push_str("[]");
            }
            self.skip_throws()?;
            let body = if self.at("{") {
                self.block()?
            } else if self.eat("default") {
                // annotation member default value
                let _ = self.expression()?;
                self.expect(";")?;
                Vec::new()
            } else {
                self.expect(";")?;
                Vec::new()
            };
            decl.methods.push(MethodDecl {
                name,
                params,
                return_type: Some(ret),
                body,
                is_constructor: false,
                is_static,
                line,
            });
            return Ok(());
        }
        // field declaration, possibly multiple declarators
        let mut field_inits = Vec::new();
        let mut cur_name = name;
        loop {
            let mut cur_ty = ty.clone();
            while self.at("[") && self.tok_at(1).is("]") {
                self.bump();
                self.bump();
                cur_ty.push_str("[]");
            }
            if self.eat("=") {
                field_inits.push(Stmt::Expr(self.variable_initializer()?));
            }
            decl.fields.push((cur_name, cur_ty));
            if self.eat(",") {
                cur_name = self.expect_ident()?.text;
            } else {
                break;
            }
        }
        self.expect(";")?;
        if !field_inits.is_empty() {
            decl.methods.push(MethodDecl {
                name: "<initializer>".to_owned(),
                params: Vec::new(),
                return_type: None,
                body: field_inits,
                is_constructor: false,
                is_static,
                line,
            });
        }
        Ok(())
    }

    fn type_decl_after_modifiers(&mut self, enclosing: &str) -> Result<TypeDecl, SyntaxError> {
        self.type_decl(enclosing)
    }

    fn parameter_list(&mut self) -> Result<Vec<(String, String)>, SyntaxError> {
        self.expect("(")?;
        let mut params = Vec::new();
        while !self.at(")") {
            self.skip_annotations();
            self.eat("final");
            self.skip_annotations();
            let mut ty = self.parse_type()?;
            // receiver parameter `Type this` is skipped
            if self.at("this") {
                self.bump();
            } else {
                let name = self.expect_ident()?.text;
                while self.at("[") && self.tok_at(1).is("]") {
                    self.bump();
                    self.bump();
                    ty.push_str("[]");
                }
                params.push((name, ty));
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(params)
    }

    fn skip_throws(&mut self) -> Result<(), SyntaxError> {
        if self.eat("throws") {
            loop {
                let _ = self.parse_type()?;
                if !self.eat(",") {
                    break;
                }
            }
        }
        Ok(())
    }

    // ---- types --------------------------------------------------------

    /// Parse a type, erasing generics: `Map<String, List<Foo>>[]` → `Map[]`.
    fn parse_type(&mut self) -> Result<String, SyntaxError> {
        self.try_parse_type()
            .ok_or_else(|| self.error(&format!("expected type, found `{}`", self.tok().text)))
    }

    fn try_parse_type(&mut self) -> Option<String> {
        let save = self.pos;
        let mut name;
        if self.at_ident() && PRIMITIVES.contains(&self.tok().text.as_str()) {
            name = self.bump().text;
        } else if self.at_ident() && !is_reserved_expr_word(&self.tok().text) {
            name = self.bump().text;
            if self.at("<") && self.skip_generics().is_err() {
                self.pos = save;
                return None;
            }
            while self.at(".") && self.tok_at(1).kind == TokKind::Ident
                && !is_reserved_expr_word(&self.tok_at(1).text)
            {
                self.bump();
                name.push('.');
                name.push_str(&self.bump().text);
                if self.at("<") && self.skip_generics().is_err() {
                    self.pos = save;
                    return None;
                }
            }
        } else {
            return None;
        }
        loop {
            self.skip_annotations();
            if self.at("[") && self.tok_at(1).is("]") {
                self.bump();
                self.bump();
                name.push_str("[]");
            } else if self.at("...") {
                self.bump();
                name.push_str("[]");
            } else {
                break;
            }
        }
        Some(name)
    }

    /// Skip a balanced generic argument list starting at `<`. Fails fast on
    /// tokens that cannot occur inside one, so speculative callers can
    /// roll back when `<` was really a comparison.
    fn skip_generics(&mut self) -> Result<(), SyntaxError> {
        let mut depth: i32 = 0;
        loop {
            let t = self.tok();
            match t.text.as_str() {
                "<" => depth += 1,
                ">" => depth -= 1,
                ">>" => depth -= 2,
                ">>>" => depth -= 3,
                "," | "." | "?" | "&" | "[" | "]" | "extends" | "super" | "@" => {}
                _ if t.kind == TokKind::Ident => {}
                _ => return Err(self.error("unexpected token in type arguments")),
            }
            self.bump();
            if depth <= 0 {
                return Ok(());
            }
        }
    }

    fn skip_balanced(&mut self, open: &str, close: &str) -> Result<(), SyntaxError> {
        let mut depth = 0;
        loop {
            if self.at_eof() {
                return Err(self.error("unbalanced delimiters"));
            }
            if self.at(open) {
                depth += 1;
            } else if self.at(close) {
                depth -= 1;
            }
            self.bump();
            if depth == 0 {
                return Ok(());
            }
        }
    }

    // ---- statements ---------------------------------------------------

    fn block(&mut self) -> Result<Vec<Stmt>, SyntaxError> {
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.at("}") && !self.at_eof() {
            stmts.push(self.statement()?);
        }
        self.expect("}")?;
        Ok(stmts)
    }

    fn statement(&mut self) -> Result<Stmt, SyntaxError> {
        self.skip_annotations();
        match self.tok().text.as_str() {
            "{" => return Ok(Stmt::Block(self.block()?)),
            ";" => {
                self.bump();
                return Ok(Stmt::Empty);
            }
            "if" => return self.if_stmt(),
            "while" => {
                self.bump();
                self.expect("(")?;
                let cond = self.expression()?;
                self.expect(")")?;
                let body = self.statement_as_block()?;
                return Ok(Stmt::While { cond, body });
            }
            "do" => {
                self.bump();
                let body = self.statement_as_block()?;
                self.expect("while")?;
                self.expect("(")?;
                let cond = self.expression()?;
                self.expect(")")?;
                self.expect(";")?;
                return Ok(Stmt::DoWhile { cond, body });
            }
            "for" => return self.for_stmt(),
            "return" => {
                self.bump();
                let e = if self.at(";") { None } else { Some(self.expression()?) };
                self.expect(";")?;
                return Ok(Stmt::Return(e));
            }
            "throw" => {
                self.bump();
                let e = self.expression()?;
                self.expect(";")?;
                return Ok(Stmt::Throw(e));
            }
            "try" => return self.try_stmt(),
            "switch" => return self.switch_stmt(),
            "synchronized" => {
                self.bump();
                self.expect("(")?;
                let lock = self.expression()?;
                self.expect(")")?;
                let body = self.block()?;
                return Ok(Stmt::Synchronized { lock, body });
            }
            "break" | "continue" => {
                let kw = self.bump().text;
                if self.at_ident() && !is_reserved_expr_word(&self.tok().text) {
                    self.bump(); // label
                }
                self.expect(";")?;
                return Ok(if kw == "break" { Stmt::Break } else { Stmt::Continue });
            }
            "assert" => {
                self.bump();
                let mut es = alloc::vec![self.expression()?];
                if self.eat(":") {
                    es.push(self.expression()?);
                }
                self.expect(";")?;
                return Ok(Stmt::Assert(es));
            }
            "class" | "interface" | "enum" => {
                // local class: parsed but not represented
                let _ = self.type_decl("")?;
                return Ok(Stmt::Empty);
            }
            "final" if self.tok_at(1).is("class") => {
                self.bump();
                let _ = self.type_decl("")?;
                return Ok(Stmt::Empty);
            }
            _ => {}
        }
        // labeled statement
        if self.at_ident() && self.tok_at(1).is(":") && !self.tok_at(2).is(":")
            && !is_reserved_expr_word(&self.tok().text)
        {
            self.bump();
            self.bump();
            return self.statement();
        }
        if let Some(stmt) = self.try_local_decl()? {
            return Ok(stmt);
        }
        let e = self.expression()?;
        self.expect(";")?;
        Ok(Stmt::Expr(e))
    }

    fn statement_as_block(&mut self) -> Result<Vec<Stmt>, SyntaxError> {
        Ok(alloc::vec![self.statement()?])
    }

    /// Speculatively parse `Type name (= init)? (, name (= init)?)* ;`.
    fn try_local_decl(&mut self) -> Result<Option<Stmt>, SyntaxError> {
        let save = self.pos;
        self.eat("final");
        self.skip_annotations();
        let Some(ty) = self.try_parse_type() else {
            self.pos = save;
            return Ok(None);
        };
        if !self.at_ident() || is_reserved_expr_word(&self.tok().text) {
            self.pos = save;
            return Ok(None);
        }
        // The token after the declarator name must confirm a declaration.
        let after = &self.tok_at(1).text;
        if !matches!(after.as_str(), "=" | ";" | "," | "[" | ":") {
            self.pos = save;
            return Ok(None);
        }
        if after == ":" {
            // enhanced-for header parsed elsewhere; not a declaration here
            self.pos = save;
            return Ok(None);
        }
        let mut decls = Vec::new();
        loop {
            let tok = self.expect_ident()?;
            let (name, line) = (tok.text, tok.line);
            let mut cur_ty = ty.clone();
            while self.at("[") && self.tok_at(1).is("]") {
                self.bump();
                self.bump();
                cur_ty.push_str("[]");
            }
            let init = if self.eat("=") { Some(self.variable_initializer()?) } else { None };
            decls.push(Stmt::Local { name, ty: cur_ty, init, line });
            if !self.eat(",") {
                break;
            }
        }
        self.expect(";")?;
        Ok(Some(if decls.len() == 1 {
            decls.pop().unwrap()
        } else {
            Stmt::Block(decls)
        }))
    }

    fn if_stmt(&mut self) -> Result<Stmt, SyntaxError> {
        self.expect("if")?;
        self.expect("(")?;
        let cond = self.expression()?;
        self.expect(")")?;
        let then = self.statement_as_block()?;
        let els = if self.eat("else") { self.statement_as_block()? } else { Vec::new() };
        Ok(Stmt::If { cond, then, els })
    }

    fn for_stmt(&mut self) -> Result<Stmt, SyntaxError> {
        self.expect("for")?;
        self.expect("(")?;
        // enhanced for: [final] Type name : expr
        let save = self.pos;
        self.eat("final");
        self.skip_annotations();
        if let Some(ty) = self.try_parse_type() {
            if self.at_ident() && self.tok_at(1).is(":") {
                let name = self.bump().text;
                self.bump(); // :
                let iterable = self.expression()?;
                self.expect(")")?;
                let body = self.statement_as_block()?;
                return Ok(Stmt::ForEach { name, ty, iterable, body });
            }
        }
        self.pos = save;
        let mut init = Vec::new();
        if !self.at(";") {
            if let Some(decl) = self.try_local_decl_no_semi()? {
                init.push(decl);
            } else {
                loop {
                    init.push(Stmt::Expr(self.expression()?));
                    if !self.eat(",") {
                        break;
                    }
                }
            }
        }
        self.expect(";")?;
        let cond = if self.at(";") { None } else { Some(self.expression()?) };
        self.expect(";")?;
        let mut update = Vec::new();
        if !self.at(")") {
            loop {
                update.push(self.expression()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        let body = self.statement_as_block()?;
        Ok(Stmt::For { init, cond, update, body })
    }

    /// Like `try_local_decl` but leaves the terminating `;` unconsumed.
    fn try_local_decl_no_semi(&mut self) -> Result<Option<Stmt>, SyntaxError> {
        let save = self.pos;
        self.eat("final");
        let Some(ty) = self.try_parse_type() else {
            self.pos = save;
            return Ok(None);
        };
        if !self.at_ident() || is_reserved_expr_word(&self.tok().text)
            || !matches!(self.tok_at(1).text.as_str(), "=" | "," | ";")
        {
            self.pos = save;
            return Ok(None);
        }
        let mut decls = Vec::new();
        loop {
            let tok = self.expect_ident()?;
            let (name, line) = (tok.text, tok.line);
            let init = if self.eat("=") { Some(self.variable_initializer()?) } else { None };
            decls.push(Stmt::Local { name, ty: ty.clone(), init, line });
            if !self.eat(",") {
                break;
            }
        }
        Ok(Some(if decls.len() == 1 {
            decls.pop().unwrap()
        } else {
            Stmt::Block(decls)
        }))
    }

    fn try_stmt(&mut self) -> Result<Stmt, SyntaxError> {
        self.expect("try")?;
        let mut resources = Vec::new();
        if self.at("(") {
            self.bump();
            while !self.at(")") {
                if let Some(decl) = self.try_local_decl_no_semi()? {
                    resources.push(decl);
                } else {
                    resources.push(Stmt::Expr(self.expression()?));
                }
                if !self.eat(";") {
                    break;
                }
            }
            self.expect(")")?;
        }
        let body = self.block()?;
        let mut catches = Vec::new();
        while self.at("catch") {
            self.bump();
            self.expect("(")?;
            self.eat("final");
            let mut ty = self.parse_type()?;
            while self.eat("|") {
                ty.push('|');
                ty.push_str(&self.parse_type()?);
            }
            let name = self.expect_ident()?.text;
            self.expect(")")?;
            let cbody = self.block()?;
            catches.push((name, ty, cbody));
        }
        let finally = if self.eat("finally") { self.block()? } else { Vec::new() };
        Ok(Stmt::Try { resources, body, catches, finally })
    }

    fn switch_stmt(&mut self) -> Result<Stmt, SyntaxError> {
        self.expect("switch")?;
        self.expect("(")?;
        let scrutinee = self.expression()?;
        self.expect(")")?;
        self.expect("{")?;
        let mut arms: Vec<Vec<Stmt>> = Vec::new();
        let mut current: Vec<Stmt> = Vec::new();
        while !self.at("}") && !self.at_eof() {
            if self.at("case") || self.at("default") {
                if !current.is_empty() {
                    arms.push(core::mem::take(&mut current));
                }
                let kw = self.bump().text;
                if kw == "case" {
                    loop {
                        current.push(Stmt::Expr(self.ternary()?));
                        if !self.eat(",") {
                            break;
                        }
                    }
                }
                if self.eat("->") {
                    // arrow form: a single expression, block or throw
                    if self.at("{") {
                        current.push(Stmt::Block(self.block()?));
                    } else if self.at("throw") {
                        self.bump();
                        let e = self.expression()?;
                        self.expect(";")?;
                        current.push(Stmt::Throw(e));
                    } else {
                        let e = self.expression()?;
                        self.expect(";")?;
                        current.push(Stmt::Expr(e));
                    }
                    arms.push(core::mem::take(&mut current));
                } else {
                    self.expect(":")?;
                }
            } else {
                current.push(self.statement()?);
            }
        }
        if !current.is_empty() {
            arms.push(current);
        }
        self.expect("}")?;
        Ok(Stmt::Switch { scrutinee, arms })
    }

    // ---- expressions --------------------------------------------------

    fn prev_end(&self) -> usize {
        self.tokens[self.pos.saturating_sub(1)].end
    }

    #[allow(clippy::too_many_arguments)]
    fn node(
        &self,
        kind: ExprKind,
        name: Option<String>,
        literal: Option<String>,
        op: Option<String>,
        children: Vec<ExprNode>,
        has_receiver: bool,
        line: u32,
        start: usize,
    ) -> ExprNode {
        ExprNode {
            kind,
            children,
            name,
            literal,
            op,
            has_receiver,
            line,
            span: (start, self.prev_end()),
        }
    }

    pub(crate) fn expression(&mut self) -> Result<ExprNode, SyntaxError> {
        self.assignment()
    }

    fn assignment(&mut self) -> Result<ExprNode, SyntaxError> {
        if let Some(lambda) = self.try_lambda()? {
            return Ok(lambda);
        }
        let (line, start) = (self.tok().line, self.tok().start);
        let lhs = self.ternary()?;
        const ASSIGN_OPS: &[&str] = &[
            "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
        ];
        if ASSIGN_OPS.contains(&self.tok().text.as_str()) {
            let op = self.bump().text;
            let rhs = self.assignment()?;
            return Ok(self.node(
                ExprKind::Assignment,
                None,
                None,
                Some(op),
                alloc::vec![lhs, rhs],
                false,
                line,
                start,
            ));
        }
        Ok(lhs)
    }

    fn try_lambda(&mut self) -> Result<Option<ExprNode>, SyntaxError> {
        let is_lambda = if self.at_ident() && !is_reserved_expr_word(&self.tok().text)
            && self.tok_at(1).is("->")
        {
            true
        } else if self.at("(") {
            // scan to the matching close paren, lambda iff `->` follows
            let mut depth = 0;
            let mut i = self.pos;
            loop {
                let t = &self.tokens[i.min(self.tokens.len() - 1)];
                if t.kind == TokKind::Eof {
                    break false;
                }
                match t.text.as_str() {
                    "(" => depth += 1,
                    ")" => {
                        depth -= 1;
                        if depth == 0 {
                            break self.tokens.get(i + 1).is_some_and(|n| n.is("->"));
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
        } else {
            false
        };
        if !is_lambda {
            return Ok(None);
        }
        let (line, start) = (self.tok().line, self.tok().start);
        if self.at("(") {
            self.skip_balanced("(", ")")?;
        } else {
            self.bump();
        }
        self.expect("->")?;
        let mut children = Vec::new();
        if self.at("{") {
            let body = self.block()?;
            children = super::statement_expressions(&body).into_iter().cloned().collect();
        } else {
            children.push(self.expression()?);
        }
        Ok(Some(self.node(
            ExprKind::Constant,
            None,
            Some("<lambda>".to_owned()),
            None,
            children,
            false,
            line,
            start,
        )))
    }

    fn ternary(&mut self) -> Result<ExprNode, SyntaxError> {
        let (line, start) = (self.tok().line, self.tok().start);
        let cond = self.binary(0)?;
        if self.eat("?") {
            let then = self.expression()?;
            self.expect(":")?;
            let els = self.expression()?;
            return Ok(self.node(
                ExprKind::Conditional,
                None,
                None,
                Some("?:".to_owned()),
                alloc::vec![cond, then, els],
                false,
                line,
                start,
            ));
        }
        Ok(cond)
    }

    fn binary_level(op: &str) -> Option<u8> {
        Some(match op {
            "||" => 1,
            "&&" => 2,
            "|" => 3,
            "^" => 4,
            "&" => 5,
            "==" | "!=" => 6,
            "<" | ">" | "<=" | ">=" | "instanceof" => 7,
            "<<" | ">>" | ">>>" => 8,
            "+" | "-" => 9,
            "*" | "/" | "%" => 10,
            _ => return None,
        })
    }

    fn binary(&mut self, min_level: u8) -> Result<ExprNode, SyntaxError> {
        let (line, start) = (self.tok().line, self.tok().start);
        let mut lhs = self.unary()?;
        loop {
            let Some(level) = Self::binary_level(&self.tok().text) else {
                return Ok(lhs);
            };
            if level < min_level {
                return Ok(lhs);
            }
            let op = self.bump().text;
            let rhs = if op == "instanceof" {
                self.eat("final");
                let (tline, tstart) = (self.tok().line, self.tok().start);
                let ty = self.parse_type()?;
                // pattern variable
                if self.at_ident() && !is_reserved_expr_word(&self.tok().text) {
                    self.bump();
                }
                self.node(ExprKind::VarRef, Some(ty), None, None, Vec::new(), false, tline, tstart)
            } else {
                self.binary(level + 1)?
            };
            lhs = self.node(
                ExprKind::BinaryOp,
                None,
                None,
                Some(op),
                alloc::vec![lhs, rhs],
                false,
                line,
                start,
            );
        }
    }

    fn unary(&mut self) -> Result<ExprNode, SyntaxError> {
        let (line, start) = (self.tok().line, self.tok().start);
        match self.tok().text.as_str() {
            "+" | "-" | "!" | "~" | "++" | "--" => {
                let op = self.bump().text;
                let operand = self.unary()?;
                return Ok(self.node(
                    ExprKind::UnaryOp,
                    None,
                    None,
                    Some(op),
                    alloc::vec![operand],
                    false,
                    line,
                    start,
                ));
            }
            "(" => {
                if let Some(cast) = self.try_cast()? {
                    return Ok(cast);
                }
            }
            _ => {}
        }
        self.postfix()
    }

    /// Speculative cast: `(Type) unary-expression`.
    fn try_cast(&mut self) -> Result<Option<ExprNode>, SyntaxError> {
        let save = self.pos;
        let (line, start) = (self.tok().line, self.tok().start);
        self.bump(); // (
        let Some(ty) = self.try_parse_type() else {
            self.pos = save;
            return Ok(None);
        };
        // intersection casts: (A & B) expr
        let mut full_ty = ty;
        while self.at("&") {
            self.bump();
            let Some(more) = self.try_parse_type() else {
                self.pos = save;
                return Ok(None);
            };
            full_ty.push('&');
            full_ty.push_str(&more);
        }
        if !self.at(")") {
            self.pos = save;
            return Ok(None);
        }
        let is_primitive = PRIMITIVES.contains(&full_ty.as_str());
        let next = self.tok_at(1);
        let plausible = match next.kind {
            TokKind::Ident => !is_reserved_expr_word(&next.text) || next.is("this") || next.is("new"),
            TokKind::IntLit | TokKind::FloatLit | TokKind::StrLit | TokKind::CharLit => true,
            TokKind::Punct => {
                next.is("(") || next.is("!") || next.is("~")
                    || (is_primitive && (next.is("+") || next.is("-")))
            }
            TokKind::Eof => false,
        };
        if !plausible {
            self.pos = save;
            return Ok(None);
        }
        self.bump(); // )
        let operand = self.unary()?;
        Ok(Some(self.node(
            ExprKind::Cast,
            Some(full_ty),
            None,
            None,
            alloc::vec![operand],
            false,
            line,
            start,
        )))
    }

    fn postfix(&mut self) -> Result<ExprNode, SyntaxError> {
        let (line, start) = (self.tok().line, self.tok().start);
        let mut e = self.primary()?;
        loop {
            if self.at(".") {
                self.bump();
                if self.at("<") {
                    self.skip_generics()?;
                }
                if self.at("new") {
                    // qualified inner-class creation: expr.new Inner(args)
                    self.bump();
                    let ty = self.parse_type()?;
                    let mut children = self.argument_list()?;
                    children.insert(0, e);
                    e = self.node(
                        ExprKind::NewObject,
                        Some(ty),
                        None,
                        None,
                        children,
                        false,
                        line,
                        start,
                    );
                    continue;
                }
                let name = if self.at("class") || self.at("this") || self.at("super") {
                    self.bump().text
                } else {
                    self.expect_ident()?.text
                };
                if self.at("(") {
                    let mut children = self.argument_list()?;
                    children.insert(0, e);
                    e = self.node(
                        ExprKind::MethodCall,
                        Some(name),
                        None,
                        None,
                        children,
                        true,
                        line,
                        start,
                    );
                } else {
                    e = self.node(
                        ExprKind::FieldAccess,
                        Some(name),
                        None,
                        None,
                        alloc::vec![e],
                        false,
                        line,
                        start,
                    );
                }
            } else if self.at("::") {
                self.bump();
                if self.at("<") {
                    self.skip_generics()?;
                }
                let name = if self.at("new") { self.bump().text } else { self.expect_ident()?.text };
                e = self.node(
                    ExprKind::FieldAccess,
                    Some(name),
                    None,
                    None,
                    alloc::vec![e],
                    false,
                    line,
                    start,
                );
            } else if self.at("[") && !self.tok_at(1).is("]") {
                self.bump();
                let index = self.expression()?;
                self.expect("]")?;
                e = self.node(
                    ExprKind::ArrayAccess,
                    None,
                    None,
                    None,
                    alloc::vec![e, index],
                    false,
                    line,
                    start,
                );
            } else if self.at("++") || self.at("--") {
                let op = self.bump().text;
                e = self.node(
                    ExprKind::UnaryOp,
                    None,
                    None,
                    Some(op),
                    alloc::vec![e],
                    false,
                    line,
                    start,
                );
            } else {
                return Ok(e);
            }
        }
    }

    fn argument_list(&mut self) -> Result<Vec<ExprNode>, SyntaxError> {
        self.expect("(")?;
        let mut args = Vec::new();
        while !self.at(")") {
            args.push(self.expression()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn primary(&mut self) -> Result<ExprNode, SyntaxError> {
        let (line, start) = (self.tok().line, self.tok().start);
        match self.tok().kind {
            TokKind::IntLit | TokKind::FloatLit | TokKind::StrLit | TokKind::CharLit => {
                let lit = self.bump().text;
                return Ok(self.node(
                    ExprKind::Constant,
                    None,
                    Some(lit),
                    None,
                    Vec::new(),
                    false,
                    line,
                    start,
                ));
            }
            TokKind::Ident => {}
            _ => {
                if self.at("(") {
                    self.bump();
                    let e = self.expression()?;
                    self.expect(")")?;
                    return Ok(e);
                }
                return Err(self.error(&format!(
                    "expected expression, found `{}`",
                    self.tok().text
                )));
            }
        }
        match self.tok().text.as_str() {
            "true" | "false" | "null" => {
                let lit = self.bump().text;
                Ok(self.node(ExprKind::Constant, None, Some(lit), None, Vec::new(), false, line, start))
            }
            "new" => self.new_expression(line, start),
            "this" | "super" => {
                let name = self.bump().text;
                if self.at("(") {
                    // explicit constructor invocation
                    let children = self.argument_list()?;
                    Ok(self.node(ExprKind::MethodCall, Some(name), None, None, children, false, line, start))
                } else {
                    Ok(self.node(ExprKind::VarRef, Some(name), None, None, Vec::new(), false, line, start))
                }
            }
            "switch" => {
                // switch expression: represent as a conditional over its arms'
                // value expressions so nested calls remain visible
                let stmt = self.switch_stmt()?;
                let Stmt::Switch { scrutinee, arms } = stmt else { unreachable!() };
                let mut children = alloc::vec![scrutinee];
                for arm in &arms {
                    children.extend(super::statement_expressions(arm).into_iter().cloned());
                }
                Ok(self.node(
                    ExprKind::Conditional,
                    None,
                    None,
                    Some("switch".to_owned()),
                    children,
                    false,
                    line,
                    start,
                ))
            }
            w if is_reserved_expr_word(w) => {
                Err(self.error(&format!("unexpected keyword `{w}` in expression")))
            }
            _ => {
                let name = self.bump().text;
                if self.at("(") {
                    let children = self.argument_list()?;
                    Ok(self.node(ExprKind::MethodCall, Some(name), None, None, children, false, line, start))
                } else {
                    Ok(self.node(ExprKind::VarRef, Some(name), None, None, Vec::new(), false, line, start))
                }
            }
        }
    }

    fn new_expression(&mut self, line: u32, start: usize) -> Result<ExprNode, SyntaxError> {
        self.expect("new")?;
        if self.at("<") {
            self.skip_generics()?;
        }
        let ty = self.parse_type()?;
        if self.at("(") {
            let mut children = self.argument_list()?;
            if self.at("{") {
                // anonymous class body: hoist its expressions as extra children
                let mut anon = TypeDecl {
                    fq_name: String::new(),
                    simple_name: ty.clone(),
                    super_types: Vec::new(),
                    fields: Vec::new(),
                    methods: Vec::new(),
                    nested: Vec::new(),
                };
                self.bump();
                while !self.at("}") && !self.at_eof() {
                    self.member(&mut anon)?;
                }
                self.expect("}")?;
                for m in &anon.methods {
                    children.extend(
                        super::statement_expressions(&m.body).into_iter().cloned(),
                    );
                }
            }
            return Ok(self.node(ExprKind::NewObject, Some(ty), None, None, children, false, line, start));
        }
        if self.at("[") {
            let mut dims = Vec::new();
            let mut name = ty;
            while self.at("[") {
                self.bump();
                if !self.at("]") {
                    dims.push(self.expression()?);
                }
                self.expect("]")?;
                name.push_str("[]");
            }
            if self.at("{") {
                dims.extend(self.array_initializer_elements()?);
            }
            return Ok(self.node(ExprKind::NewObject, Some(name), None, None, dims, false, line, start));
        }
        if self.at("{") {
            let elems = self.array_initializer_elements()?;
            return Ok(self.node(ExprKind::NewObject, Some(ty), None, None, elems, false, line, start));
        }
        Err(self.error("expected `(` or `[` after `new`"))
    }

    fn variable_initializer(&mut self) -> Result<ExprNode, SyntaxError> {
        if self.at("{") {
            let (line, start) = (self.tok().line, self.tok().start);
            let elems = self.array_initializer_elements()?;
            return Ok(self.node(
                ExprKind::NewObject,
                Some("[]".to_owned()),
                None,
                None,
                elems,
                false,
                line,
                start,
            ));
        }
        self.expression()
    }

    fn array_initializer_elements(&mut self) -> Result<Vec<ExprNode>, SyntaxError> {
        self.expect("{")?;
        let mut elems = Vec::new();
        while !self.at("}") {
            elems.push(self.variable_initializer()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}")?;
        Ok(elems)
    }
}
