//! Weighted clauses: each formula's weight is split evenly over the clauses
//! its quantifier-free CNF produces.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::cnf::{expand_finite_existentials, to_prenex_cnf, SignedAtom, DEFAULT_CLAUSE_LIMIT};
use super::signature::{ConstId, FuncId, PredId, Signature};
use super::syntax::{Program, Term, Var, Weight, WeightedFormula};
use crate::error::{Error, Result};

/// A term inside a compiled clause; variables index into the clause's
/// variable list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClauseTerm {
    Var(u32),
    Const(ConstId),
    App(FuncId, Vec<ClauseTerm>),
}

impl ClauseTerm {
    pub fn contains_var(&self, var: u32) -> bool {
        match self {
            ClauseTerm::Var(v) => *v == var,
            ClauseTerm::Const(_) => false,
            ClauseTerm::App(_, args) => args.iter().any(|a| a.contains_var(var)),
        }
    }
}

/// Field order gives the canonical literal order: complementary literals
/// end up adjacent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub pred: PredId,
    pub args: Vec<ClauseTerm>,
    pub positive: bool,
}

impl Literal {
    pub fn contains_var(&self, var: u32) -> bool {
        self.args.iter().any(|a| a.contains_var(var))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedClause {
    pub literals: Vec<Literal>,
    pub vars: Vec<Var>,
    pub weight: Weight,
    /// Index of the source formula.
    pub origin: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompileOptions {
    pub clause_limit: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            clause_limit: DEFAULT_CLAUSE_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompileWarning {
    TautologyDropped { formula: usize, clause: String },
    NoClauses { formula: usize },
}

impl core::fmt::Display for CompileWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CompileWarning::TautologyDropped { formula, clause } => {
                write!(f, "formula {formula}: dropped tautological clause `{clause}`")
            }
            CompileWarning::NoClauses { formula } => {
                write!(f, "formula {formula} is a tautology and contributes no clauses")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Compilation {
    pub clauses: Vec<WeightedClause>,
    pub warnings: Vec<CompileWarning>,
}

fn clause_term(t: &Term, index: &BTreeMap<&str, u32>) -> ClauseTerm {
    match t {
        Term::Var(v) => ClauseTerm::Var(index[v.as_str()]),
        Term::Const(c) => ClauseTerm::Const(*c),
        Term::App(f, args) => ClauseTerm::App(*f, args.iter().map(|a| clause_term(a, index)).collect()),
    }
}

fn build_clause(lits: &[SignedAtom], vars: &[Var], weight: Weight, origin: usize) -> WeightedClause {
    let mut used = alloc::collections::BTreeSet::new();
    for l in lits {
        l.atom.args.iter().for_each(|t| {
            t.visit_vars(&mut |v| {
                used.insert(v);
            })
        });
    }
    let clause_vars: Vec<Var> = vars
        .iter()
        .filter(|v| used.contains(v.name.as_str()))
        .cloned()
        .collect();
    let index: BTreeMap<&str, u32> = clause_vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.as_str(), i as u32))
        .collect();
    let mut literals: Vec<Literal> = lits
        .iter()
        .map(|l| Literal {
            pred: l.atom.pred,
            args: l.atom.args.iter().map(|t| clause_term(t, &index)).collect(),
            positive: l.positive,
        })
        .collect();
    literals.sort();
    literals.dedup();
    WeightedClause {
        literals,
        vars: clause_vars,
        weight,
        origin,
    }
}

fn is_tautology(c: &WeightedClause) -> bool {
    c.literals
        .windows(2)
        .any(|w| w[0].pred == w[1].pred && w[0].args == w[1].args && w[0].positive != w[1].positive)
}

/// Compiles one weighted formula into its clauses.
pub fn compile_formula(
    sig: &Signature,
    wf: &WeightedFormula,
    origin: usize,
    opts: &CompileOptions,
) -> Result<Compilation> {
    let with_index = |e: Error| match e {
        Error::ClauseLimit { clauses, limit, .. } => Error::ClauseLimit {
            formula: origin,
            clauses,
            limit,
        },
        other => other,
    };
    let prenex = to_prenex_cnf(&wf.formula, opts.clause_limit).map_err(with_index)?;
    let qf = expand_finite_existentials(&prenex, sig, opts.clause_limit).map_err(with_index)?;

    let mut warnings = Vec::new();
    let mut kept = Vec::new();
    for lits in &qf.clauses {
        let clause = build_clause(lits, &qf.vars, wf.weight, origin);
        if is_tautology(&clause) {
            let text = super::print::ClauseDisplay { sig, clause: &clause }.to_string();
            warnings.push(CompileWarning::TautologyDropped {
                formula: origin,
                clause: text,
            });
        } else {
            kept.push(clause);
        }
    }
    if kept.is_empty() {
        warnings.push(CompileWarning::NoClauses { formula: origin });
    }
    let n = kept.len();
    if let Weight::Finite(w) = wf.weight {
        let share = Weight::Finite(w / n as f64);
        kept.iter_mut().for_each(|c| c.weight = share);
    }
    Ok(Compilation {
        clauses: kept,
        warnings,
    })
}

/// Compiles every formula of `p`, in order.
pub fn compile_clauses(p: &Program, opts: &CompileOptions) -> Result<Compilation> {
    let mut out = Compilation {
        clauses: Vec::new(),
        warnings: Vec::new(),
    };
    for (i, wf) in p.formulas.iter().enumerate() {
        let c = compile_formula(&p.signature, wf, i, opts)?;
        out.clauses.extend(c.clauses);
        out.warnings.extend(c.warnings);
    }
    Ok(out)
}

impl Program {
    /// Compiles the formulas and stores the resulting clauses.
    pub fn compile(&mut self, opts: &CompileOptions) -> Result<Vec<CompileWarning>> {
        let c = compile_clauses(self, opts)?;
        self.clauses = c.clauses;
        self.compiled = true;
        Ok(c.warnings)
    }

    /// Parses and compiles with default options.
    pub fn from_text(text: &str) -> Result<Program> {
        let mut p = super::parse::parse_program(text)?;
        p.compile(&CompileOptions::default())?;
        Ok(p)
    }
}
