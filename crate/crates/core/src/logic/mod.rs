//! Signatures, formulas, the MLN text format and clause compilation.

mod cnf;
mod compile;
mod parse;
mod print;
mod signature;
mod syntax;

pub use cnf::{
    expand_finite_existentials, to_prenex_cnf, PrenexCnf, Quantifier, QuantifierFree, SignedAtom, DEFAULT_CLAUSE_LIMIT,
};
pub use compile::{
    compile_clauses, compile_formula, ClauseTerm, Compilation, CompileOptions, CompileWarning, Literal, WeightedClause,
};
pub use parse::{parse_formula, parse_ground_atom, parse_program};
pub use print::{AtomDisplay, ClauseDisplay, FormulaDisplay, TermDisplay};
pub use signature::{ConstDecl, ConstId, DomainType, FuncDecl, FuncId, PredDecl, PredId, Signature, TypeId, TypeKind};
pub use syntax::{Atom, Formula, Program, Term, Var, Weight, WeightedFormula};
