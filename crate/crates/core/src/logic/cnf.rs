//! Prenex conjunctive normal form by distribution, and expansion of
//! existentials over finite types.
//!
//! Only equivalence-preserving rewrites are used. Clause counts are what
//! weights get split over, so no definitional (Tseitin-style) atoms are ever
//! introduced; the clause limit guards the exponential cases instead.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::signature::Signature;
use super::syntax::{Atom, Formula, Term, Var};
use crate::error::{Error, Result};

/// Default bound on the number of clauses one formula may produce.
pub const DEFAULT_CLAUSE_LIMIT: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedAtom {
    pub atom: Atom,
    pub positive: bool,
}

/// A formula in prenex form whose matrix is a conjunction of clauses.
#[derive(Clone, Debug, PartialEq)]
pub struct PrenexCnf {
    pub prefix: Vec<(Quantifier, Var)>,
    pub matrix: Vec<Vec<SignedAtom>>,
}

/// A quantifier-free CNF; every variable in `vars` is implicitly universal.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantifierFree {
    pub vars: Vec<Var>,
    pub clauses: Vec<Vec<SignedAtom>>,
}

fn literal_formula(l: &SignedAtom) -> Formula {
    let a = Formula::Atom(l.atom.clone());
    if l.positive {
        a
    } else {
        Formula::not(a)
    }
}

fn clauses_formula(clauses: &[Vec<SignedAtom>]) -> Option<Formula> {
    clauses
        .iter()
        .filter_map(|c| c.iter().map(literal_formula).reduce(Formula::or))
        .reduce(Formula::and)
}

impl PrenexCnf {
    pub fn to_formula(&self) -> Option<Formula> {
        let matrix = clauses_formula(&self.matrix)?;
        Some(self.prefix.iter().rev().fold(matrix, |acc, (q, v)| match q {
            Quantifier::Forall => Formula::Forall(v.clone(), Box::new(acc)),
            Quantifier::Exists => Formula::Exists(v.clone(), Box::new(acc)),
        }))
    }
}

impl QuantifierFree {
    pub fn to_formula(&self) -> Option<Formula> {
        clauses_formula(&self.clauses)
    }
}

/// Generates variable names not used anywhere in a formula.
struct Fresh {
    used: BTreeSet<String>,
}

impl Fresh {
    fn from_names<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        Fresh {
            used: names.into_iter().map(String::from).collect(),
        }
    }

    fn name(&mut self, base: &str) -> String {
        let mut k = 1usize;
        loop {
            let candidate = format!("{base}_{k}");
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
            k += 1;
        }
    }
}

fn formula_names(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(a) => a.args.iter().for_each(|t| {
            t.visit_vars(&mut |v| {
                out.insert(v.into());
            })
        }),
        Formula::Not(a) => formula_names(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            formula_names(a, out);
            formula_names(b, out);
        }
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            out.insert(v.name.clone());
            formula_names(b, out);
        }
    }
}

fn rename_term(t: &Term, map: &BTreeMap<String, String>) -> Term {
    match t {
        Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(*f, args.iter().map(|a| rename_term(a, map)).collect()),
    }
}

fn rename_atom(a: &Atom, map: &BTreeMap<String, String>) -> Atom {
    Atom {
        pred: a.pred,
        args: a.args.iter().map(|t| rename_term(t, map)).collect(),
    }
}

/// Copy of `f` with every bound variable renamed to a fresh name.
fn rename_bound(f: &Formula, fresh: &mut Fresh, map: &mut BTreeMap<String, String>) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(rename_atom(a, map)),
        Formula::Not(a) => Formula::not(rename_bound(a, fresh, map)),
        Formula::And(a, b) => Formula::and(rename_bound(a, fresh, map), rename_bound(b, fresh, map)),
        Formula::Or(a, b) => Formula::or(rename_bound(a, fresh, map), rename_bound(b, fresh, map)),
        Formula::Implies(a, b) => Formula::implies(rename_bound(a, fresh, map), rename_bound(b, fresh, map)),
        Formula::Iff(a, b) => Formula::iff(rename_bound(a, fresh, map), rename_bound(b, fresh, map)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let name = fresh.name(&v.name);
            let previous = map.insert(v.name.clone(), name.clone());
            let body = Box::new(rename_bound(body, fresh, map));
            match previous {
                Some(p) => map.insert(v.name.clone(), p),
                None => map.remove(&v.name),
            };
            let var = Var { name, ty: v.ty };
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(var, body)
            } else {
                Formula::Exists(var, body)
            }
        }
    }
}

enum Nnf {
    Lit(SignedAtom),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Quant(Quantifier, Var, Box<Nnf>),
}

/// Negation normal form with implications and biconditionals eliminated.
/// The second copy of a biconditional operand gets fresh bound variables so
/// every variable stays bound exactly once.
fn nnf(f: &Formula, positive: bool, fresh: &mut Fresh) -> Nnf {
    match f {
        Formula::Atom(a) => Nnf::Lit(SignedAtom {
            atom: a.clone(),
            positive,
        }),
        Formula::Not(a) => nnf(a, !positive, fresh),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let parts = vec![nnf(a, positive, fresh), nnf(b, positive, fresh)];
            if matches!(f, Formula::And(..)) == positive {
                Nnf::And(parts)
            } else {
                Nnf::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            let parts = vec![nnf(a, !positive, fresh), nnf(b, positive, fresh)];
            if positive {
                Nnf::Or(parts)
            } else {
                Nnf::And(parts)
            }
        }
        Formula::Iff(a, b) => {
            let a2 = rename_bound(a, fresh, &mut BTreeMap::new());
            let b2 = rename_bound(b, fresh, &mut BTreeMap::new());
            // a <=> b   is (!a | b) & (a | !b)
            // !(a <=> b) is (a | b) & (!a | !b)
            let (first, second) = if positive {
                (
                    Nnf::Or(vec![nnf(a, false, fresh), nnf(b, true, fresh)]),
                    Nnf::Or(vec![nnf(&a2, true, fresh), nnf(&b2, false, fresh)]),
                )
            } else {
                (
                    Nnf::Or(vec![nnf(a, true, fresh), nnf(b, true, fresh)]),
                    Nnf::Or(vec![nnf(&a2, false, fresh), nnf(&b2, false, fresh)]),
                )
            };
            Nnf::And(vec![first, second])
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..)) == positive;
            let q = if universal {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            Nnf::Quant(q, v.clone(), Box::new(nnf(body, positive, fresh)))
        }
    }
}

fn pull_quantifiers(n: Nnf, prefix: &mut Vec<(Quantifier, Var)>) -> Nnf {
    match n {
        Nnf::Lit(_) => n,
        Nnf::And(xs) => Nnf::And(xs.into_iter().map(|x| pull_quantifiers(x, prefix)).collect()),
        Nnf::Or(xs) => Nnf::Or(xs.into_iter().map(|x| pull_quantifiers(x, prefix)).collect()),
        Nnf::Quant(q, v, body) => {
            prefix.push((q, v));
            pull_quantifiers(*body, prefix)
        }
    }
}

fn limit_error(clauses: usize, limit: usize) -> Error {
    Error::ClauseLimit {
        formula: 0,
        clauses,
        limit,
    }
}

/// Disjunction of CNFs by distribution.
fn or_product(parts: Vec<Vec<Vec<SignedAtom>>>, limit: usize) -> Result<Vec<Vec<SignedAtom>>> {
    let mut acc: Vec<Vec<SignedAtom>> = vec![Vec::new()];
    for part in parts {
        let size = acc.len().saturating_mul(part.len());
        if size > limit {
            return Err(limit_error(size, limit));
        }
        let mut next = Vec::with_capacity(size);
        for a in &acc {
            for c in &part {
                let mut clause = a.clone();
                clause.extend(c.iter().cloned());
                next.push(clause);
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn matrix_cnf(n: Nnf, limit: usize) -> Result<Vec<Vec<SignedAtom>>> {
    match n {
        Nnf::Lit(l) => Ok(vec![vec![l]]),
        Nnf::And(xs) => {
            let mut out = Vec::new();
            for x in xs {
                out.extend(matrix_cnf(x, limit)?);
                if out.len() > limit {
                    return Err(limit_error(out.len(), limit));
                }
            }
            Ok(out)
        }
        Nnf::Or(xs) => {
            let parts = xs
                .into_iter()
                .map(|x| matrix_cnf(x, limit))
                .collect::<Result<Vec<_>>>()?;
            or_product(parts, limit)
        }
        Nnf::Quant(..) => unreachable!("quantifiers are pulled out before distribution"),
    }
}

/// Converts a closed formula to prenex form with a CNF matrix. Quantifiers
/// keep their textual order.
pub fn to_prenex_cnf(f: &Formula, clause_limit: usize) -> Result<PrenexCnf> {
    let mut names = BTreeSet::new();
    formula_names(f, &mut names);
    let mut fresh = Fresh::from_names(names.iter().map(String::as_str));
    let n = nnf(f, true, &mut fresh);
    let mut prefix = Vec::new();
    let matrix = pull_quantifiers(n, &mut prefix);
    Ok(PrenexCnf {
        prefix,
        matrix: matrix_cnf(matrix, clause_limit)?,
    })
}

fn substitute_clauses(clauses: &[Vec<SignedAtom>], var: &str, by: &Term) -> Vec<Vec<SignedAtom>> {
    clauses
        .iter()
        .map(|c| {
            c.iter()
                .map(|l| SignedAtom {
                    atom: l.atom.substitute(var, by),
                    positive: l.positive,
                })
                .collect()
        })
        .collect()
}

/// Replaces existentials over finite types by disjunctions over their
/// constants and drops universals. When an existential scopes over
/// universals, each disjunct gets its own copy of those universal
/// variables, since `(forall u A) | (forall u B)` is `forall u1, u2 (A | B)`.
pub fn expand_finite_existentials(pc: &PrenexCnf, sig: &Signature, clause_limit: usize) -> Result<QuantifierFree> {
    for (q, v) in &pc.prefix {
        if *q == Quantifier::Exists && sig.is_infinite(v.ty) {
            return Err(Error::InfiniteExistential {
                var: v.name.clone(),
                ty: sig.ty(v.ty).name.clone(),
            });
        }
    }
    let mut names: BTreeSet<String> = pc.prefix.iter().map(|(_, v)| v.name.clone()).collect();
    for c in &pc.matrix {
        for l in c {
            l.atom.args.iter().for_each(|t| {
                t.visit_vars(&mut |v| {
                    names.insert(v.into());
                })
            });
        }
    }
    let mut fresh = Fresh::from_names(names.iter().map(String::as_str));

    let mut clauses = pc.matrix.clone();
    let mut inner: Vec<Var> = Vec::new();
    for (q, v) in pc.prefix.iter().rev() {
        match q {
            Quantifier::Forall => inner.insert(0, v.clone()),
            Quantifier::Exists => {
                let constants = sig.finite_constants(v.ty).expect("checked above");
                let mut disjuncts = Vec::with_capacity(constants.len());
                let mut next_inner = Vec::new();
                for (k, c) in constants.iter().enumerate() {
                    let mut copy = substitute_clauses(&clauses, &v.name, &Term::Const(*c));
                    if k == 0 {
                        next_inner.extend(inner.iter().cloned());
                    } else {
                        for u in &inner {
                            let renamed = Var {
                                name: fresh.name(&u.name),
                                ty: u.ty,
                            };
                            copy = substitute_clauses(&copy, &u.name, &Term::Var(renamed.name.clone()));
                            next_inner.push(renamed);
                        }
                    }
                    disjuncts.push(copy);
                }
                clauses = or_product(disjuncts, clause_limit)?;
                inner = next_inner;
            }
        }
    }
    Ok(QuantifierFree { vars: inner, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, parse_program, ClauseDisplay, CompileOptions};
    use alloc::string::ToString;

    fn sig() -> Signature {
        parse_program(
            "type person = {Anna, Bob}\ntype nat = infinite seed 0\nfunction s(nat) -> nat\n\
             predicate P(person)\npredicate Q(person)\npredicate R(person)\npredicate Loves(person, person)\n\
             predicate N(nat, person)\n",
        )
        .unwrap()
        .signature
    }

    fn clauses(text: &str) -> Vec<String> {
        let sig = sig();
        let f = parse_formula(&sig, text).unwrap();
        let wf = crate::logic::WeightedFormula {
            formula: f,
            weight: crate::logic::Weight::Finite(1.0),
        };
        crate::logic::compile_formula(&sig, &wf, 0, &CompileOptions::default())
            .unwrap()
            .clauses
            .iter()
            .map(|c| ClauseDisplay { sig: &sig, clause: c }.to_string())
            .collect()
    }

    #[test]
    fn iff_gives_two_clauses() {
        assert_eq!(
            clauses("P(Anna) <=> Q(Anna)"),
            ["!P(Anna) | Q(Anna)", "P(Anna) | !Q(Anna)"]
        );
    }

    #[test]
    fn clause_unchanged() {
        assert_eq!(clauses("P(Anna) | !Q(Bob)"), ["P(Anna) | !Q(Bob)"]);
    }

    #[test]
    fn de_morgan() {
        assert_eq!(
            clauses("!(P(Anna) & Q(Anna)) | R(Anna)"),
            ["!P(Anna) | !Q(Anna) | R(Anna)"]
        );
    }

    #[test]
    fn finite_existential_expands() {
        assert_eq!(
            clauses("forall x:person exists y:person Loves(y, x)"),
            ["Loves(Anna, x) | Loves(Bob, x)"]
        );
        assert_eq!(clauses("forall x:person P(x)"), ["P(x)"]);
    }

    #[test]
    fn existential_over_universal_renames() {
        // exists y forall u: R(y) | P(u) becomes (R(Anna) | P(u)) | (R(Bob) | P(u1)).
        let got = clauses("exists y:person forall u:person R(y) | P(u)");
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].matches("P(").count(), 2, "{got:?}");
    }

    #[test]
    fn infinite_existential_rejected() {
        let sig = sig();
        let f = parse_formula(&sig, "forall x:person exists n:nat N(n, x)").unwrap();
        let pc = to_prenex_cnf(&f, 100).unwrap();
        assert!(matches!(
            expand_finite_existentials(&pc, &sig, 100),
            Err(Error::InfiniteExistential { ref var, ref ty }) if var == "n" && ty == "nat"
        ));
        // Under negation a universal becomes existential.
        let f = parse_formula(&sig, "!(forall n:nat N(n, Anna))").unwrap();
        let pc = to_prenex_cnf(&f, 100).unwrap();
        assert!(expand_finite_existentials(&pc, &sig, 100).is_err());
    }

    #[test]
    fn clause_limit() {
        let sig = sig();
        let f = parse_formula(
            &sig,
            "(P(Anna) & Q(Anna)) | (P(Bob) & Q(Bob)) | (R(Anna) & R(Bob)) | (Loves(Anna, Bob) & Loves(Bob, Anna))",
        )
        .unwrap();
        assert_eq!(to_prenex_cnf(&f, 16).unwrap().matrix.len(), 16);
        assert!(matches!(
            to_prenex_cnf(&f, 15),
            Err(Error::ClauseLimit {
                clauses: 16,
                limit: 15,
                ..
            })
        ));
    }

    #[test]
    fn tautology_dropped() {
        assert!(clauses("P(Anna) | !P(Anna)").is_empty());
        assert_eq!(clauses("(P(Anna) | !P(Anna)) & Q(Anna)"), ["Q(Anna)"]);
    }
}
