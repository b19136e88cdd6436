//! Parser and scope validator for pipeline scripts.

use super::ast::*;
use super::dataset::Dataset;
use super::lex::{tokenize_line, Spanned, Tok};
use crate::arith::cfrac_expand;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, col {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }
}

pub(super) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Spanned>, line: usize) -> Self {
        Cursor { toks, pos: 0, line }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    pub fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(1, |s| s.col)
    }

    pub fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected `{want}`, found `{t}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of line"))),
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(s)) = self.next() else { unreachable!() };
                Ok(s)
            }
            Some(t) => Err(self.err(format!("expected identifier, found `{t}`"))),
            None => Err(self.err("expected identifier, found end of line")),
        }
    }

    pub fn string(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Str(_)) => {
                let Some(Tok::Str(s)) = self.next() else { unreachable!() };
                Ok(s)
            }
            Some(t) => Err(self.err(format!("expected string, found `{t}`"))),
            None => Err(self.err("expected string, found end of line")),
        }
    }

    /// Integer with optional leading minus.
    pub fn int(&mut self) -> Result<i64, ParseError> {
        let neg = matches!(self.peek(), Some(Tok::Minus));
        if neg {
            self.pos += 1;
        }
        match self.peek() {
            Some(Tok::Int(_)) => {
                let Some(Tok::Int(v)) = self.next() else { unreachable!() };
                Ok(if neg { -v } else { v })
            }
            Some(t) => Err(self.err(format!("expected integer, found `{t}`"))),
            None => Err(self.err("expected integer, found end of line")),
        }
    }

    /// `key=` introducer for a named argument.
    pub fn key(&mut self, name: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == name => {
                self.pos += 1;
                self.expect(Tok::Eq)
            }
            Some(t) => Err(self.err(format!("expected `{name}=`, found `{t}`"))),
            None => Err(self.err(format!("expected `{name}=`, found end of line"))),
        }
    }

    pub fn at_key(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    pub fn end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(format!("unexpected trailing `{t}`"))),
        }
    }

    pub fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Parse a full script. Syntax only; scoping is `validate`'s job.
pub fn parse(name: &str, text: &str) -> Result<Script, ParseError> {
    let mut statements = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokenize_line(line, raw)
            .map_err(|e| ParseError::new(e.line, e.col, e.msg))?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(toks, line);
        let kind = parse_statement(&mut cur)?;
        cur.end()?;
        statements.push(Stmt { line, kind });
    }
    Ok(Script { name: name.to_string(), statements })
}

fn parse_statement(cur: &mut Cursor) -> Result<StmtKind, ParseError> {
    let head = cur.ident()?;
    match head.as_str() {
        "start" => {
            let model = cur.ident()?;
            let dataset = if cur.at_key("dataset") {
                cur.key("dataset")?;
                Some(cur.string()?)
            } else {
                None
            };
            Ok(StmtKind::Start { model, dataset })
        }
        "knot_surgery" => {
            cur.key("fiber")?;
            let fiber = cur.ident()?;
            cur.key("alexander")?;
            let alexander = parse_alex_spec(cur)?;
            Ok(StmtKind::KnotSurgery { fiber, alexander })
        }
        "blowup" => {
            let name = cur.ident()?;
            let at = if cur.at_key("at") {
                cur.key("at")?;
                Some(cur.string()?)
            } else {
                None
            };
            Ok(StmtKind::BlowUp { name, at })
        }
        "declare_class" => {
            let name = cur.ident()?;
            cur.expect(Tok::Eq)?;
            let expr = parse_class_expr(cur)?;
            Ok(StmtKind::DeclareClass { name, expr })
        }
        "declare_config" => Ok(StmtKind::DeclareConfig(parse_config_decl(cur)?)),
        "link_configs" => {
            let a = cur.ident()?;
            let b = cur.ident()?;
            cur.key("via")?;
            let via = cur.ident()?;
            Ok(StmtKind::LinkConfigs { a, b, via })
        }
        "rbd" => Ok(StmtKind::Rbd { config: cur.ident()? }),
        "assert_ledger" => {
            cur.key("e")?;
            let e = cur.int()?;
            cur.key("sigma")?;
            let sigma = cur.int()?;
            cur.key("b2plus")?;
            let b2_plus = cur.int()?;
            cur.key("b2minus")?;
            let b2_minus = cur.int()?;
            Ok(StmtKind::AssertLedger { e, sigma, b2_plus, b2_minus })
        }
        "assert_pi1" => Ok(StmtKind::AssertPi1 { status: cur.ident()? }),
        "assert_freedman" => {
            cur.key("cp2")?;
            let cp2 = cur.int()?;
            cur.key("cbar")?;
            let cbar = cur.int()?;
            Ok(StmtKind::AssertFreedman { cp2, cbar })
        }
        "assert_sw_count" => {
            let count = cur.int()?;
            if count < 0 {
                return Err(cur.err("count must be non-negative"));
            }
            Ok(StmtKind::AssertSwCount { count: count as u128 })
        }
        "assert_sw_value" => {
            cur.key("class")?;
            let class = cur.ident()?;
            cur.key("coeff")?;
            let coeff = parse_nexpr(cur)?;
            Ok(StmtKind::AssertSwValue { class, coeff })
        }
        "assert_sw_symmetric" => Ok(StmtKind::AssertSwSymmetric),
        "assert_embedding" => Ok(StmtKind::AssertEmbedding { config: cur.ident()? }),
        "assert_disjoint" => {
            let a = cur.ident()?;
            let b = cur.ident()?;
            Ok(StmtKind::AssertDisjoint { a, b })
        }
        other => Err(cur.err(format!("unknown statement `{other}`"))),
    }
}

fn parse_alex_spec(cur: &mut Cursor) -> Result<AlexSpec, ParseError> {
    let head = cur.ident()?;
    match head.as_str() {
        "twist" => {
            cur.expect(Tok::LParen)?;
            let e = parse_nexpr(cur)?;
            cur.expect(Tok::RParen)?;
            Ok(AlexSpec::Twist(e))
        }
        "poly" => {
            cur.expect(Tok::LParen)?;
            let mut terms = Vec::new();
            loop {
                let d = cur.int()?;
                cur.expect(Tok::Colon)?;
                let c = cur.int()?;
                terms.push((d, c));
                match cur.peek() {
                    Some(Tok::Comma) => {
                        cur.next();
                    }
                    _ => break,
                }
            }
            cur.expect(Tok::RParen)?;
            Ok(AlexSpec::Poly(terms))
        }
        other => Err(cur.err(format!("expected `twist(...)` or `poly(...)`, found `{other}`"))),
    }
}

/// `[-] [int ['*']] atom { ('+'|'-') [int ['*']] atom }`
pub(super) fn parse_class_expr(cur: &mut Cursor) -> Result<ClassExpr, ParseError> {
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let sign = match cur.peek() {
            Some(Tok::Minus) => {
                cur.next();
                -1
            }
            Some(Tok::Plus) if !first => {
                cur.next();
                1
            }
            _ if first => 1,
            _ => break,
        };
        let mag = match cur.peek() {
            Some(Tok::Int(_)) => {
                let Some(Tok::Int(v)) = cur.next() else { unreachable!() };
                if matches!(cur.peek(), Some(Tok::Star)) {
                    cur.next();
                }
                v
            }
            _ => 1,
        };
        let name = cur.ident()?;
        let atom = if matches!(cur.peek(), Some(Tok::DotDot)) {
            cur.next();
            Atom::Range(name, cur.ident()?)
        } else {
            Atom::Name(name)
        };
        terms.push((sign * mag, atom));
        first = false;
        if !matches!(cur.peek(), Some(Tok::Plus) | Some(Tok::Minus)) {
            break;
        }
    }
    if terms.is_empty() {
        return Err(cur.err("empty class expression"));
    }
    Ok(ClassExpr { terms })
}

/// `name [pq=(p, q)] plumbing=(w[^k], ...) spheres=[a, b, ...]`
pub(super) fn parse_config_decl(cur: &mut Cursor) -> Result<ConfigDecl, ParseError> {
    let name = cur.ident()?;
    let pq = if cur.at_key("pq") {
        cur.key("pq")?;
        cur.expect(Tok::LParen)?;
        let p = cur.int()?;
        cur.expect(Tok::Comma)?;
        let q = cur.int()?;
        cur.expect(Tok::RParen)?;
        if p <= 0 || q <= 0 {
            return Err(cur.err("pq entries must be positive"));
        }
        Some((p as u64, q as u64))
    } else {
        None
    };
    cur.key("plumbing")?;
    cur.expect(Tok::LParen)?;
    let mut weights = Vec::new();
    loop {
        let w = cur.int()?;
        let count = if matches!(cur.peek(), Some(Tok::Caret)) {
            cur.next();
            let c = cur.int()?;
            if c < 1 {
                return Err(cur.err("run length must be at least 1"));
            }
            c as usize
        } else {
            1
        };
        weights.push((w, count));
        match cur.peek() {
            Some(Tok::Comma) => {
                cur.next();
            }
            _ => break,
        }
    }
    cur.expect(Tok::RParen)?;
    cur.key("spheres")?;
    cur.expect(Tok::LBracket)?;
    let mut sphere_names = Vec::new();
    loop {
        sphere_names.push(cur.ident()?);
        match cur.peek() {
            Some(Tok::Comma) => {
                cur.next();
            }
            _ => break,
        }
    }
    cur.expect(Tok::RBracket)?;
    Ok(ConfigDecl { name, pq, weights, sphere_names })
}

fn parse_nexpr(cur: &mut Cursor) -> Result<NExpr, ParseError> {
    parse_additive(cur)
}

fn parse_additive(cur: &mut Cursor) -> Result<NExpr, ParseError> {
    let mut lhs = parse_multiplicative(cur)?;
    loop {
        match cur.peek() {
            Some(Tok::Plus) => {
                cur.next();
                let rhs = parse_multiplicative(cur)?;
                lhs = NExpr::Add(Box::new(lhs), Box::new(rhs));
            }
            Some(Tok::Minus) => {
                cur.next();
                let rhs = parse_multiplicative(cur)?;
                lhs = NExpr::Sub(Box::new(lhs), Box::new(rhs));
            }
            _ => return Ok(lhs),
        }
    }
}

fn parse_multiplicative(cur: &mut Cursor) -> Result<NExpr, ParseError> {
    let mut lhs = parse_unary(cur)?;
    while matches!(cur.peek(), Some(Tok::Star)) {
        cur.next();
        let rhs = parse_unary(cur)?;
        lhs = NExpr::Mul(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn parse_unary(cur: &mut Cursor) -> Result<NExpr, ParseError> {
    if matches!(cur.peek(), Some(Tok::Minus)) {
        cur.next();
        return Ok(NExpr::Neg(Box::new(parse_unary(cur)?)));
    }
    parse_power(cur)
}

fn parse_power(cur: &mut Cursor) -> Result<NExpr, ParseError> {
    let base = parse_primary(cur)?;
    if matches!(cur.peek(), Some(Tok::Caret)) {
        cur.next();
        let k = cur.int()?;
        if !(0..=16).contains(&k) {
            return Err(cur.err("exponent out of range 0..=16"));
        }
        return Ok(NExpr::Pow(Box::new(base), k as u32));
    }
    Ok(base)
}

fn parse_primary(cur: &mut Cursor) -> Result<NExpr, ParseError> {
    match cur.peek() {
        Some(Tok::Int(_)) => {
            let Some(Tok::Int(v)) = cur.next() else { unreachable!() };
            Ok(NExpr::Int(v))
        }
        Some(Tok::Ident(s)) if s == "n" => {
            cur.next();
            Ok(NExpr::N)
        }
        Some(Tok::LParen) => {
            cur.next();
            let e = parse_nexpr(cur)?;
            cur.expect(Tok::RParen)?;
            Ok(e)
        }
        Some(t) => Err(cur.err(format!("expected integer, `n`, or `(`, found `{t}`"))),
        None => Err(cur.err("expected expression, found end of line")),
    }
}

/// Scope and shape validation against a loaded dataset: every identifier
/// must be declared before use, `start` comes first, each configuration is
/// blown down at most once.
pub fn validate(script: &Script, dataset: &Dataset) -> Result<(), ParseError> {
    use std::collections::BTreeSet;

    let err = |line: usize, msg: String| ParseError::new(line, 1, msg);

    let mut classes: BTreeSet<String> = dataset.classes.keys().cloned().collect();
    for g in dataset.lattice.names() {
        classes.insert(g.clone());
    }
    let mut configs: BTreeSet<String> = dataset.configs.keys().cloned().collect();
    let mut blown: BTreeSet<String> = BTreeSet::new();
    let mut rbd_done: BTreeSet<String> = BTreeSet::new();

    let resolve_expr = |expr: &ClassExpr, known: &BTreeSet<String>, line: usize| {
        for (_, atom) in &expr.terms {
            match atom {
                Atom::Name(nm) => {
                    if !known.contains(nm) {
                        return Err(err(line, format!("undeclared identifier `{nm}`")));
                    }
                }
                Atom::Range(a, b) => {
                    if dataset.lattice.index_of(a).is_err()
                        || dataset.lattice.index_of(b).is_err()
                    {
                        return Err(err(
                            line,
                            format!("range `{a}..{b}` must span declared generators"),
                        ));
                    }
                }
            }
        }
        Ok(())
    };

    for (i, stmt) in script.statements.iter().enumerate() {
        let line = stmt.line;
        match &stmt.kind {
            StmtKind::Start { model, .. } => {
                if i != 0 {
                    return Err(err(line, "`start` must be the first statement".into()));
                }
                if model != "E2" {
                    return Err(err(line, format!("unknown starting model `{model}`")));
                }
            }
            _ if i == 0 => {
                return Err(err(line, "script must begin with `start`".into()));
            }
            StmtKind::KnotSurgery { fiber, .. } => {
                if !classes.contains(fiber) {
                    return Err(err(line, format!("undeclared fiber class `{fiber}`")));
                }
            }
            StmtKind::BlowUp { name, .. } => {
                let idx = dataset
                    .lattice
                    .index_of(name)
                    .map_err(|_| err(line, format!("undeclared generator `{name}`")))?;
                if !dataset.lattice.is_exceptional(idx) {
                    return Err(err(line, format!("generator `{name}` is not exceptional")));
                }
                if !blown.insert(name.clone()) {
                    return Err(err(line, format!("generator `{name}` blown up twice")));
                }
            }
            StmtKind::DeclareClass { name, expr } => {
                resolve_expr(expr, &classes, line)?;
                if !classes.insert(name.clone()) {
                    return Err(err(line, format!("class `{name}` already declared")));
                }
            }
            StmtKind::DeclareConfig(decl) => {
                for s in &decl.sphere_names {
                    if !classes.contains(s) {
                        return Err(err(line, format!("undeclared sphere class `{s}`")));
                    }
                }
                validate_config_shape(decl).map_err(|m| err(line, m))?;
                if !configs.insert(decl.name.clone()) {
                    return Err(err(line, format!("config `{}` already declared", decl.name)));
                }
            }
            StmtKind::LinkConfigs { a, b, via } => {
                for c in [a, b] {
                    if !configs.contains(c) {
                        return Err(err(line, format!("undeclared config `{c}`")));
                    }
                }
                if !classes.contains(via) {
                    return Err(err(line, format!("undeclared link class `{via}`")));
                }
            }
            StmtKind::Rbd { config } => {
                if !configs.contains(config) {
                    return Err(err(line, format!("undeclared config `{config}`")));
                }
                if !rbd_done.insert(config.clone()) {
                    return Err(err(
                        line,
                        format!("config `{config}` already blown down"),
                    ));
                }
            }
            StmtKind::AssertSwValue { class, .. } => {
                if !classes.contains(class) {
                    return Err(err(line, format!("undeclared class `{class}`")));
                }
            }
            StmtKind::AssertEmbedding { config } => {
                if !configs.contains(config) {
                    return Err(err(line, format!("undeclared config `{config}`")));
                }
            }
            StmtKind::AssertDisjoint { a, b } => {
                for c in [a, b] {
                    if !configs.contains(c) {
                        return Err(err(line, format!("undeclared config `{c}`")));
                    }
                }
            }
            StmtKind::AssertPi1 { status } => {
                if !["simply_connected", "h1_zero", "unknown"].contains(&status.as_str()) {
                    return Err(err(line, format!("unknown pi1 status `{status}`")));
                }
            }
            StmtKind::AssertLedger { .. }
            | StmtKind::AssertFreedman { .. }
            | StmtKind::AssertSwCount { .. }
            | StmtKind::AssertSwSymmetric => {}
        }
    }
    if script.statements.is_empty() {
        return Err(err(1, "empty script".into()));
    }
    Ok(())
}

/// Shared shape checks for configuration declarations.
pub(super) fn validate_config_shape(decl: &ConfigDecl) -> Result<(), String> {
    let weights = decl.expanded_weights();
    if weights.is_empty() {
        return Err(format!("config `{}` has an empty plumbing", decl.name));
    }
    if decl.sphere_names.len() != weights.len() {
        return Err(format!(
            "config `{}`: {} spheres for {} vertices",
            decl.name,
            decl.sphere_names.len(),
            weights.len()
        ));
    }
    if let Some((p, q)) = decl.pq {
        let cf = cfrac_expand(p, q)
            .map_err(|e| format!("config `{}`: {e}", decl.name))?;
        let expected: Vec<i64> = cf.entries.iter().map(|&b| -b).collect();
        if weights != expected {
            return Err(format!(
                "config `{}`: declared weights do not match the ({p}, {q}) expansion",
                decl.name
            ));
        }
    }
    Ok(())
}
