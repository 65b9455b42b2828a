//! Canonical text form. Printing a parsed program and parsing the result
//! again yields the same program.

use core::fmt::{self, Display, Formatter, Write};

use super::compile::{ClauseTerm, Literal, WeightedClause};
use super::signature::{Signature, TypeKind};
use super::syntax::{Atom, Formula, Program, Term, Weight};

impl Display for Weight {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(w) => write!(f, "{w}"),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

fn comma_list<T>(
    f: &mut Formatter<'_>,
    items: &[T],
    mut each: impl FnMut(&mut Formatter<'_>, &T) -> fmt::Result,
) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        each(f, item)?;
    }
    Ok(())
}

pub struct TermDisplay<'a> {
    pub sig: &'a Signature,
    pub term: &'a Term,
}

impl Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => f.write_str(&self.sig.constant(*c).name),
            Term::App(func, args) => {
                write!(f, "{}(", self.sig.function(*func).name)?;
                comma_list(f, args, |f, a| TermDisplay { sig: self.sig, term: a }.fmt(f))?;
                f.write_char(')')
            }
        }
    }
}

pub struct AtomDisplay<'a> {
    pub sig: &'a Signature,
    pub atom: &'a Atom,
}

impl Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sig.predicate(self.atom.pred).name)?;
        if !self.atom.args.is_empty() {
            f.write_char('(')?;
            comma_list(f, &self.atom.args, |f, a| TermDisplay { sig: self.sig, term: a }.fmt(f))?;
            f.write_char(')')?;
        }
        Ok(())
    }
}

pub struct FormulaDisplay<'a> {
    pub sig: &'a Signature,
    pub formula: &'a Formula,
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(_) => 5,
        Formula::Atom(_) => 6,
    }
}

impl FormulaDisplay<'_> {
    fn child(&self, f: &mut Formatter<'_>, child: &Formula, parens: bool) -> fmt::Result {
        let inner = FormulaDisplay {
            sig: self.sig,
            formula: child,
        };
        if parens {
            write!(f, "({inner})")
        } else {
            inner.fmt(f)
        }
    }

    fn binary(
        &self,
        f: &mut Formatter<'_>,
        a: &Formula,
        op: &str,
        b: &Formula,
        prec: u8,
        right_assoc: bool,
    ) -> fmt::Result {
        let (pa, pb) = (precedence(a), precedence(b));
        let left_parens = if right_assoc { pa <= prec } else { pa < prec };
        let right_parens = if right_assoc { pb < prec } else { pb <= prec };
        self.child(f, a, left_parens || pa == 0)?;
        write!(f, " {op} ")?;
        self.child(f, b, right_parens || pb == 0)
    }
}

impl Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.formula {
            Formula::Atom(a) => AtomDisplay { sig: self.sig, atom: a }.fmt(f),
            Formula::Not(a) => {
                f.write_char('!')?;
                self.child(f, a, precedence(a) < 5)
            }
            Formula::And(a, b) => self.binary(f, a, "&", b, 4, false),
            Formula::Or(a, b) => self.binary(f, a, "|", b, 3, false),
            Formula::Implies(a, b) => self.binary(f, a, "=>", b, 2, true),
            Formula::Iff(a, b) => self.binary(f, a, "<=>", b, 1, false),
            Formula::Forall(..) | Formula::Exists(..) => {
                let universal = matches!(self.formula, Formula::Forall(..));
                f.write_str(if universal { "forall " } else { "exists " })?;
                let mut cur = self.formula;
                let mut first = true;
                while let (Formula::Forall(v, body), true) | (Formula::Exists(v, body), false) = (cur, universal) {
                    if !first {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}:{}", v.name, self.sig.ty(v.ty).name)?;
                    first = false;
                    cur = body;
                }
                f.write_char(' ')?;
                self.child(f, cur, false)
            }
        }
    }
}

impl Display for Program {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let sig = &self.signature;
        for ty in &sig.types {
            match &ty.kind {
                TypeKind::Finite(cs) => {
                    write!(f, "type {} = {{", ty.name)?;
                    comma_list(f, cs, |f, c| f.write_str(&sig.constant(*c).name))?;
                    f.write_str("}\n")?;
                }
                TypeKind::Infinite { seed } => {
                    writeln!(f, "type {} = infinite seed {}", ty.name, sig.constant(*seed).name)?;
                }
            }
        }
        for func in &sig.functions {
            write!(f, "function {}(", func.name)?;
            comma_list(f, &func.args, |f, t| f.write_str(&sig.ty(*t).name))?;
            writeln!(f, ") -> {}", sig.ty(func.ret).name)?;
        }
        for pred in &sig.predicates {
            write!(f, "predicate {}(", pred.name)?;
            comma_list(f, &pred.args, |f, t| f.write_str(&sig.ty(*t).name))?;
            f.write_str(")\n")?;
        }
        for wf in &self.formulas {
            writeln!(
                f,
                "{} {}",
                wf.weight,
                FormulaDisplay {
                    sig,
                    formula: &wf.formula
                }
            )?;
        }
        Ok(())
    }
}

pub struct ClauseDisplay<'a> {
    pub sig: &'a Signature,
    pub clause: &'a WeightedClause,
}

impl ClauseDisplay<'_> {
    fn term(&self, f: &mut Formatter<'_>, t: &ClauseTerm) -> fmt::Result {
        match t {
            ClauseTerm::Var(i) => f.write_str(&self.clause.vars[*i as usize].name),
            ClauseTerm::Const(c) => f.write_str(&self.sig.constant(*c).name),
            ClauseTerm::App(func, args) => {
                write!(f, "{}(", self.sig.function(*func).name)?;
                comma_list(f, args, |f, a| self.term(f, a))?;
                f.write_char(')')
            }
        }
    }

    fn literal(&self, f: &mut Formatter<'_>, lit: &Literal) -> fmt::Result {
        if !lit.positive {
            f.write_char('!')?;
        }
        f.write_str(&self.sig.predicate(lit.pred).name)?;
        if !lit.args.is_empty() {
            f.write_char('(')?;
            comma_list(f, &lit.args, |f, a| self.term(f, a))?;
            f.write_char(')')?;
        }
        Ok(())
    }
}

impl Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.clause.literals.is_empty() {
            return f.write_str("false");
        }
        for (i, lit) in self.clause.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            self.literal(f, lit)?;
        }
        Ok(())
    }
}

impl Program {
    pub fn display_formula<'a>(&'a self, formula: &'a Formula) -> FormulaDisplay<'a> {
        FormulaDisplay {
            sig: &self.signature,
            formula,
        }
    }

    pub fn display_clause<'a>(&'a self, clause: &'a WeightedClause) -> ClauseDisplay<'a> {
        ClauseDisplay {
            sig: &self.signature,
            clause,
        }
    }
}
