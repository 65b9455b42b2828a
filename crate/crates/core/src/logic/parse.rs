//! Line-oriented reader for the MLN text format.
//!
//! ```text
//! // comment
//! type person = {Anna, Bob}
//! type nat = infinite seed 0
//! function s(nat) -> nat
//! predicate Q(nat, nat)
//! 0.5 forall x:nat, y:nat Q(x, y) <=> Q(s(x), y)
//! inf exists y:person Loves(y, Anna)
//! ```
//!
//! Connectives by increasing binding strength: `<=>`, `=>` (right
//! associative), `|`, `&`, `!`. A quantifier body extends as far right as
//! possible. Variables start with a lowercase letter; free variables are
//! universally quantified at the outermost level in order of first use, and
//! untyped binders take the type of their first typed position.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::signature::{PredId, Signature, TypeId};
use super::syntax::{Atom, Formula, Program, Term, Var, Weight, WeightedFormula};
use crate::error::{Error, Result};

const KEYWORDS: &[&str] = &[
    "forall",
    "exists",
    "type",
    "function",
    "predicate",
    "infinite",
    "seed",
    "inf",
];
const UNRESOLVED: TypeId = TypeId(u32::MAX);

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Bang,
    Amp,
    Bar,
    Implies,
    Iff,
    Arrow,
    Eq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Num(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Implies => "`=>`".into(),
            Tok::Iff => "`<=>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
    start: usize,
    end: usize,
}

fn lex_line(line: &str, lineno: usize) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map_or(line.len(), |c| c.0);
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let col = i + 1;
        let next = chars.get(i + 1).map(|c| c.1);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '/' && next == Some('/') {
            break;
        }
        let simple = |tok, len| (tok, len);
        let (tok, len) = match c {
            '(' => simple(Tok::LParen, 1),
            ')' => simple(Tok::RParen, 1),
            '{' => simple(Tok::LBrace, 1),
            '}' => simple(Tok::RBrace, 1),
            ',' => simple(Tok::Comma, 1),
            ':' => simple(Tok::Colon, 1),
            '!' => simple(Tok::Bang, 1),
            '&' => simple(Tok::Amp, 1),
            '|' => simple(Tok::Bar, 1),
            '=' if next == Some('>') => simple(Tok::Implies, 2),
            '=' => simple(Tok::Eq, 1),
            '<' if next == Some('=') && chars.get(i + 2).map(|c| c.1) == Some('>') => simple(Tok::Iff, 3),
            '-' if next == Some('>') => simple(Tok::Arrow, 2),
            c if c.is_ascii_digit()
                || ((c == '-' || c == '+' || c == '.') && next.is_some_and(|n| n.is_ascii_digit() || n == '.')) =>
            {
                let mut j = i + 1;
                while j < chars.len() {
                    let d = chars[j].1;
                    let prev = chars[j - 1].1;
                    if d.is_ascii_digit()
                        || d == '.'
                        || d == 'e'
                        || d == 'E'
                        || ((d == '-' || d == '+') && (prev == 'e' || prev == 'E'))
                    {
                        j += 1;
                    } else {
                        break;
                    }
                }
                (Tok::Num(line[start..byte_at(j)].to_string()), j - i)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '\'') {
                    j += 1;
                }
                (Tok::Ident(line[start..byte_at(j)].to_string()), j - i)
            }
            other => {
                return Err(Error::Syntax {
                    line: lineno,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Token {
            tok,
            col,
            start,
            end: byte_at(i + len),
        });
        i += len;
    }
    Ok(out)
}

fn is_variable_name(name: &str) -> bool {
    name.starts_with(|c: char| c.is_lowercase() || c == '_')
}

#[derive(Debug)]
enum RawTerm {
    Name {
        name: String,
        col: usize,
    },
    App {
        name: String,
        col: usize,
        args: Vec<RawTerm>,
    },
}

/// Per-formula variable bookkeeping.
#[derive(Default)]
struct Scope {
    types: BTreeMap<String, TypeId>,
    in_scope: Vec<String>,
    bound: BTreeSet<String>,
    free: Vec<String>,
}

struct LineParser<'a> {
    sig: &'a Signature,
    line: &'a str,
    lineno: usize,
    toks: Vec<Token>,
    pos: usize,
    scope: Scope,
}

impl<'a> LineParser<'a> {
    fn new(sig: &'a Signature, line: &'a str, lineno: usize) -> Result<Self> {
        Ok(LineParser {
            sig,
            line,
            lineno,
            toks: lex_line(line, lineno)?,
            pos: 0,
            scope: Scope::default(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or_else(|| self.line.chars().count() + 1, |t| t.col)
    }

    fn syntax<T>(&self, message: String) -> Result<T> {
        Err(Error::Syntax {
            line: self.lineno,
            column: self.col(),
            message,
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        match self.peek() {
            Some(t) => self.syntax(format!("expected {wanted}, found {}", t.describe())),
            None => self.syntax(format!("expected {wanted}, found end of line")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize)> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let out = (s.clone(), self.col());
                self.pos += 1;
                Ok(out)
            }
            _ => self.unexpected(what),
        }
    }

    /// Identifier or numeral, as used for constant names.
    fn name(&mut self, what: &str) -> Result<(String, usize)> {
        if let Some(Tok::Num(s)) = self.peek() {
            if s.chars().all(|c| c.is_ascii_digit()) {
                let out = (s.clone(), self.col());
                self.pos += 1;
                return Ok(out);
            }
        }
        self.ident(what)
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            self.unexpected("end of line")
        } else {
            Ok(())
        }
    }

    fn declaration_error<T>(&self, column: usize, message: String) -> Result<T> {
        Err(Error::Declaration {
            line: self.lineno,
            column,
            message,
        })
    }

    fn type_ref(&mut self, sig: &Signature) -> Result<TypeId> {
        let (name, col) = self.ident("a type name")?;
        sig.type_id(&name).ok_or(Error::Undeclared {
            line: self.lineno,
            column: col,
            kind: "type",
            name,
        })
    }

    fn type_list(&mut self, sig: &Signature) -> Result<Vec<TypeId>> {
        let mut out = Vec::new();
        self.expect(Tok::LParen)?;
        if self.eat(&Tok::RParen) {
            return Ok(out);
        }
        loop {
            out.push(self.type_ref(sig)?);
            if self.eat(&Tok::RParen) {
                return Ok(out);
            }
            self.expect(Tok::Comma)?;
        }
    }

    // ----- declarations -------------------------------------------------

    fn declaration(&mut self, sig: &mut Signature) -> Result<()> {
        let col = self.col();
        if self.keyword("type") {
            let (name, _) = self.ident("a type name")?;
            self.expect(Tok::Eq)?;
            let result = if self.eat(&Tok::LBrace) {
                let mut names = Vec::new();
                if !self.eat(&Tok::RBrace) {
                    loop {
                        let (c, ccol) = self.name("a constant")?;
                        if is_variable_name(&c) {
                            return self
                                .declaration_error(ccol, format!("constant `{c}` must be capitalized or numeric"));
                        }
                        names.push(c);
                        if self.eat(&Tok::RBrace) {
                            break;
                        }
                        self.expect(Tok::Comma)?;
                    }
                }
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                sig.add_finite_type(&name, &refs)
            } else if self.keyword("infinite") {
                if !self.keyword("seed") {
                    return self.unexpected("`seed`");
                }
                let (seed, scol) = self.name("a seed constant")?;
                if is_variable_name(&seed) {
                    return self.declaration_error(scol, format!("constant `{seed}` must be capitalized or numeric"));
                }
                sig.add_infinite_type(&name, &seed)
            } else {
                return self.unexpected("`{` or `infinite`");
            };
            self.finish()?;
            result.map(|_| ()).or_else(|m| self.declaration_error(col, m))
        } else if self.keyword("function") {
            let (name, _) = self.ident("a function name")?;
            let args = self.type_list(sig)?;
            if args.is_empty() {
                return self.declaration_error(
                    col,
                    format!("function `{name}` has no arguments; declare a constant instead"),
                );
            }
            self.expect(Tok::Arrow)?;
            let ret = self.type_ref(sig)?;
            self.finish()?;
            sig.add_function(&name, args, ret)
                .map(|_| ())
                .or_else(|m| self.declaration_error(col, m))
        } else if self.keyword("predicate") {
            let (name, _) = self.ident("a predicate name")?;
            let args = if self.peek() == Some(&Tok::LParen) {
                self.type_list(sig)?
            } else {
                Vec::new()
            };
            self.finish()?;
            sig.add_predicate(&name, args)
                .map(|_| ())
                .or_else(|m| self.declaration_error(col, m))
        } else {
            self.unexpected("a declaration")
        }
    }

    fn weight(&mut self) -> Result<Weight> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "inf" => {
                self.pos += 1;
                Ok(Weight::Infinite)
            }
            Some(Tok::Num(s)) => {
                self.pos += 1;
                match s.parse::<f64>() {
                    Ok(w) if w.is_finite() => Ok(Weight::Finite(w)),
                    _ => Err(Error::Syntax {
                        line: self.lineno,
                        column: col,
                        message: format!("invalid weight `{s}`"),
                    }),
                }
            }
            _ => self.unexpected("a weight (decimal or `inf`)"),
        }
    }

    // ----- formulas ------------------------------------------------------

    /// Parses a whole formula, closes it over its free variables and
    /// resolves binder types.
    fn closed_formula(&mut self) -> Result<Formula> {
        let col = self.col();
        let body = self.iff()?;
        let mut f = body;
        for name in self.scope.free.iter().rev() {
            let ty = self.scope.types[name];
            f = Formula::Forall(Var { name: name.clone(), ty }, Box::new(f));
        }
        self.resolve_binders(&mut f, col)?;
        Ok(f)
    }

    fn resolve_binders(&self, f: &mut Formula, col: usize) -> Result<()> {
        match f {
            Formula::Atom(_) => Ok(()),
            Formula::Not(a) => self.resolve_binders(a, col),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.resolve_binders(a, col)?;
                self.resolve_binders(b, col)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                if v.ty == UNRESOLVED {
                    match self.scope.types.get(&v.name) {
                        Some(ty) => v.ty = *ty,
                        None => {
                            return Err(Error::Type {
                                line: self.lineno,
                                column: col,
                                atom: v.name.clone(),
                                message: "cannot infer the type of an unused, untyped variable".into(),
                            })
                        }
                    }
                }
                self.resolve_binders(body, col)
            }
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(&Tok::LParen) {
            let f = self.iff()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        let universal = self.keyword("forall");
        if universal || self.keyword("exists") {
            return self.quantified(universal);
        }
        self.atom()
    }

    fn quantified(&mut self, universal: bool) -> Result<Formula> {
        let mut binders = Vec::new();
        loop {
            let (name, col) = self.ident("a variable")?;
            if !is_variable_name(&name) {
                return self.syntax(format!("variable `{name}` must start with a lowercase letter"));
            }
            if self.scope.bound.contains(&name) || self.scope.free.contains(&name) {
                return Err(Error::Syntax {
                    line: self.lineno,
                    column: col,
                    message: format!("variable `{name}` is bound more than once"),
                });
            }
            let ty = if self.eat(&Tok::Colon) {
                let ty = self.type_ref(self.sig)?;
                self.scope.types.insert(name.clone(), ty);
                ty
            } else {
                UNRESOLVED
            };
            self.scope.bound.insert(name.clone());
            binders.push(Var { name, ty });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        let depth = self.scope.in_scope.len();
        self.scope.in_scope.extend(binders.iter().map(|v| v.name.clone()));
        let body = self.iff()?;
        self.scope.in_scope.truncate(depth);
        Ok(binders.into_iter().rev().fold(body, |acc, v| {
            if universal {
                Formula::Forall(v, Box::new(acc))
            } else {
                Formula::Exists(v, Box::new(acc))
            }
        }))
    }

    fn raw_term(&mut self) -> Result<RawTerm> {
        let (name, col) = self.name("a term")?;
        if self.eat(&Tok::LParen) {
            let args = self.raw_args()?;
            Ok(RawTerm::App { name, col, args })
        } else {
            Ok(RawTerm::Name { name, col })
        }
    }

    /// Arguments after an opening parenthesis, through the closing one.
    fn raw_args(&mut self) -> Result<Vec<RawTerm>> {
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.raw_term()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(Tok::Comma)?;
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let start = self.toks.get(self.pos).map_or(self.line.len(), |t| t.start);
        let (name, col) = self.ident("an atom")?;
        if is_variable_name(&name) {
            return Err(Error::Syntax {
                line: self.lineno,
                column: col,
                message: format!("predicate `{name}` must be capitalized"),
            });
        }
        let args = if self.eat(&Tok::LParen) {
            self.raw_args()?
        } else {
            Vec::new()
        };
        let end = self.toks[self.pos - 1].end;
        let text = &self.line[start..end];
        let pred = self.sig.pred_id(&name).ok_or_else(|| Error::Undeclared {
            line: self.lineno,
            column: col,
            kind: "predicate",
            name: name.clone(),
        })?;
        let atom = self.check_atom(pred, args, text, col, true)?;
        Ok(Formula::Atom(atom))
    }

    fn check_atom(
        &mut self,
        pred: PredId,
        args: Vec<RawTerm>,
        text: &str,
        col: usize,
        allow_vars: bool,
    ) -> Result<Atom> {
        let decl = self.sig.predicate(pred);
        if decl.args.len() != args.len() {
            return Err(Error::Type {
                line: self.lineno,
                column: col,
                atom: text.into(),
                message: format!(
                    "predicate `{}` takes {} argument(s), got {}",
                    decl.name,
                    decl.args.len(),
                    args.len()
                ),
            });
        }
        let expected = decl.args.clone();
        let mut out = Vec::with_capacity(args.len());
        for (raw, ty) in args.into_iter().zip(expected) {
            out.push(
                self.check_term(raw, ty, allow_vars)
                    .map_err(|(column, message)| match message {
                        TermError::Type(message) => Error::Type {
                            line: self.lineno,
                            column,
                            atom: text.into(),
                            message,
                        },
                        TermError::Undeclared(kind, name) => Error::Undeclared {
                            line: self.lineno,
                            column,
                            kind,
                            name,
                        },
                        TermError::Syntax(message) => Error::Syntax {
                            line: self.lineno,
                            column,
                            message,
                        },
                    })?,
            );
        }
        Ok(Atom { pred, args: out })
    }

    fn check_term(
        &mut self,
        raw: RawTerm,
        expected: TypeId,
        allow_vars: bool,
    ) -> core::result::Result<Term, (usize, TermError)> {
        let sig = self.sig;
        match raw {
            RawTerm::Name { name, col } if is_variable_name(&name) => {
                if !allow_vars {
                    return Err((col, TermError::Syntax(format!("variable `{name}` in a ground atom"))));
                }
                if !self.scope.in_scope.contains(&name) {
                    if self.scope.bound.contains(&name) {
                        return Err((
                            col,
                            TermError::Syntax(format!("variable `{name}` used outside its quantifier")),
                        ));
                    }
                    if !self.scope.free.contains(&name) {
                        self.scope.free.push(name.clone());
                    }
                }
                match self.scope.types.get(&name) {
                    Some(ty) if *ty != expected => Err((
                        col,
                        TermError::Type(format!(
                            "variable `{name}` has type `{}` but `{}` is expected here",
                            sig.ty(*ty).name,
                            sig.ty(expected).name
                        )),
                    )),
                    Some(_) => Ok(Term::Var(name)),
                    None => {
                        self.scope.types.insert(name.clone(), expected);
                        Ok(Term::Var(name))
                    }
                }
            }
            RawTerm::Name { name, col } => {
                let c = sig
                    .const_id(&name)
                    .ok_or_else(|| (col, TermError::Undeclared("constant", name.clone())))?;
                let ty = sig.constant(c).ty;
                if ty != expected {
                    return Err((
                        col,
                        TermError::Type(format!(
                            "constant `{name}` has type `{}` but `{}` is expected here",
                            sig.ty(ty).name,
                            sig.ty(expected).name
                        )),
                    ));
                }
                Ok(Term::Const(c))
            }
            RawTerm::App { name, col, args } => {
                let f = sig
                    .func_id(&name)
                    .ok_or_else(|| (col, TermError::Undeclared("function", name.clone())))?;
                let decl = sig.function(f);
                if decl.ret != expected {
                    return Err((
                        col,
                        TermError::Type(format!(
                            "function `{name}` returns `{}` but `{}` is expected here",
                            sig.ty(decl.ret).name,
                            sig.ty(expected).name
                        )),
                    ));
                }
                if decl.args.len() != args.len() {
                    return Err((
                        col,
                        TermError::Type(format!(
                            "function `{name}` takes {} argument(s), got {}",
                            decl.args.len(),
                            args.len()
                        )),
                    ));
                }
                let tys = decl.args.clone();
                let mut out = Vec::with_capacity(args.len());
                for (a, ty) in args.into_iter().zip(tys) {
                    out.push(self.check_term(a, ty, allow_vars)?);
                }
                Ok(Term::App(f, out))
            }
        }
    }
}

enum TermError {
    Type(String),
    Undeclared(&'static str, String),
    Syntax(String),
}

/// Parses a program in the MLN text format. Declarations must precede
/// their use; no clauses are compiled yet.
pub fn parse_program(text: &str) -> Result<Program> {
    let mut sig = Signature::new();
    let mut formulas = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let snapshot = sig.clone();
        let mut p = LineParser::new(&snapshot, line, lineno)?;
        match p.peek() {
            None => continue,
            Some(Tok::Ident(kw)) if kw == "type" || kw == "function" || kw == "predicate" => {
                p.declaration(&mut sig)?;
            }
            Some(_) => {
                let weight = p.weight()?;
                let formula = p.closed_formula()?;
                p.finish()?;
                formulas.push(WeightedFormula { formula, weight });
            }
        }
    }
    let mut program = Program::new(sig);
    program.formulas = formulas;
    Ok(program)
}

/// Parses a single formula against an existing signature. Free variables
/// are universally closed.
pub fn parse_formula(sig: &Signature, text: &str) -> Result<Formula> {
    let line = text.replace(['\n', '\r'], " ");
    let mut p = LineParser::new(sig, &line, 1)?;
    let f = p.closed_formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a ground atom such as `Q(s(0), 0)`.
pub fn parse_ground_atom(sig: &Signature, text: &str) -> Result<Atom> {
    let mut p = LineParser::new(sig, text.trim(), 1)?;
    let (name, col) = p.ident("an atom")?;
    let pred = sig.pred_id(&name).ok_or_else(|| Error::Undeclared {
        line: 1,
        column: col,
        kind: "predicate",
        name: name.clone(),
    })?;
    let args = if p.eat(&Tok::LParen) { p.raw_args()? } else { Vec::new() };
    p.finish()?;
    let line = p.line;
    p.check_atom(pred, args, line, col, false)
}
