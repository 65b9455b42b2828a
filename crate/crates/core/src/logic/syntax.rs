use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::compile::WeightedClause;
use super::signature::{ConstId, FuncId, PredId, Signature, TypeId};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(ConstId),
    App(FuncId, Vec<Term>),
}

impl Term {
    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub(crate) fn substitute(&self, var: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => by.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.substitute(var, by)).collect()),
        }
    }

    pub(crate) fn visit_vars<'a>(&'a self, out: &mut impl FnMut(&'a str)) {
        match self {
            Term::Var(v) => out(v),
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.visit_vars(out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: PredId,
    pub args: Vec<Term>,
}

impl Atom {
    pub(crate) fn substitute(&self, var: &str, by: &Term) -> Atom {
        Atom {
            pred: self.pred,
            args: self.args.iter().map(|a| a.substitute(var, by)).collect(),
        }
    }
}

/// A typed variable introduced by a quantifier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub ty: TypeId,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: PredId, args: Vec<Term>) -> Self {
        Formula::Atom(Atom { pred, args })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(name: &str, ty: TypeId, body: Formula) -> Self {
        Formula::Forall(Var { name: name.into(), ty }, Box::new(body))
    }

    pub fn exists(name: &str, ty: TypeId, body: Formula) -> Self {
        Formula::Exists(Var { name: name.into(), ty }, Box::new(body))
    }

    /// Every quantified variable, outermost first, in textual order.
    pub fn bound_vars(&self) -> Vec<&Var> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound<'a>(&'a self, out: &mut Vec<&'a Var>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Not(a) => a.collect_bound(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_bound(out);
                b.collect_bound(out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                out.push(v);
                body.collect_bound(out);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Weight {
    Finite(f64),
    Infinite,
}

impl Weight {
    pub fn finite(self) -> Option<f64> {
        match self {
            Weight::Finite(w) => Some(w),
            Weight::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Weight::Infinite)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFormula {
    pub formula: Formula,
    pub weight: Weight,
}

/// A weighted first-order program.
///
/// `clauses` is filled in by [`Program::compile`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub signature: Signature,
    pub formulas: Vec<WeightedFormula>,
    pub clauses: Vec<WeightedClause>,
    pub compiled: bool,
}

impl Program {
    pub fn new(signature: Signature) -> Self {
        Program {
            signature,
            ..Program::default()
        }
    }

    pub fn is_compiled(&self) -> bool {
        self.compiled
    }

    /// Same declarations and formulas, ignoring compiled clauses.
    pub fn same_source(&self, other: &Program) -> bool {
        self.signature == other.signature && self.formulas == other.formulas
    }
}
