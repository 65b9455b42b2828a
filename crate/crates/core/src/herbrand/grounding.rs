use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use hashbrown::HashSet;

use super::universe::for_each_tuple;
use super::{AtomId, Head, Herbrand, TermId};
use crate::error::Result;
use crate::logic::{ClauseTerm, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundLiteral {
    pub atom: AtomId,
    pub positive: bool,
}

/// A substitution instance of a compiled clause.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundClause {
    /// Index into the program's compiled clauses.
    pub source: usize,
    /// Sorted by atom, without duplicates.
    pub literals: Vec<GroundLiteral>,
    pub weight: Weight,
    /// Value of each clause variable, indexed like the source clause's vars.
    pub binding: Vec<TermId>,
}

impl GroundClause {
    pub fn contains(&self, atom: AtomId) -> bool {
        self.literals.iter().any(|l| l.atom == atom)
    }

    /// Distinct atoms, in literal order.
    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.literals
            .iter()
            .enumerate()
            .filter(|(i, l)| *i == 0 || self.literals[i - 1].atom != l.atom)
            .map(|(_, l)| l.atom)
    }

    /// Number of distinct ground atoms.
    pub fn size(&self) -> usize {
        self.atoms().count()
    }

    pub fn is_satisfied(&self, mut value: impl FnMut(AtomId) -> bool) -> bool {
        self.literals.iter().any(|l| value(l.atom) == l.positive)
    }

    fn key(&self) -> (usize, Vec<GroundLiteral>) {
        (self.source, self.literals.clone())
    }
}

impl Herbrand {
    /// One-way matching of a clause pattern against a ground term. The
    /// binding is only extended, so a failed match may leave partial entries;
    /// callers match on a scratch copy.
    fn match_term(&self, pattern: &ClauseTerm, term: TermId, binding: &mut [Option<TermId>]) -> bool {
        match pattern {
            ClauseTerm::Var(v) => match binding[*v as usize] {
                Some(bound) => bound == term,
                None => {
                    binding[*v as usize] = Some(term);
                    true
                }
            },
            ClauseTerm::Const(c) => self.term(term).head == Head::Const(*c),
            ClauseTerm::App(f, args) => {
                let t = self.term(term);
                t.head == Head::Func(*f)
                    && t.args.len() == args.len()
                    && args
                        .iter()
                        .zip(t.args.clone())
                        .all(|(p, a)| self.match_term(p, a, binding))
            }
        }
    }

    fn instantiate_term(&mut self, pattern: &ClauseTerm, binding: &[TermId]) -> TermId {
        match pattern {
            ClauseTerm::Var(v) => binding[*v as usize],
            ClauseTerm::Const(c) => self.constant(*c),
            ClauseTerm::App(f, args) => {
                let args = args.iter().map(|a| self.instantiate_term(a, binding)).collect();
                self.intern_term(Head::Func(*f), args)
            }
        }
    }

    /// Ground instance of compiled clause `source` under a total binding.
    pub fn instantiate_clause(&mut self, source: usize, binding: &[TermId]) -> GroundClause {
        let clause = self.program.clauses[source].clone();
        let mut literals: Vec<GroundLiteral> = clause
            .literals
            .iter()
            .map(|l| {
                let args = l.args.iter().map(|a| self.instantiate_term(a, binding)).collect();
                GroundLiteral {
                    atom: self.intern_atom(l.pred, args),
                    positive: l.positive,
                }
            })
            .collect();
        literals.sort();
        literals.dedup();
        GroundClause {
            source,
            literals,
            weight: clause.weight,
            binding: binding.to_vec(),
        }
    }

    /// Every ground clause in which `atom` occurs.
    ///
    /// Each literal with the atom's predicate is matched against the atom;
    /// for a sigma-determinate program a successful match binds every
    /// infinite-domain variable, and the finite-domain rest is enumerated.
    /// Refuses programs that are not sigma-determinate.
    pub fn ground_clauses_containing(&mut self, atom: AtomId) -> Result<Vec<GroundClause>> {
        self.require_determinate()?;
        let target = self.atom(atom).clone();
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for ci in 0..self.program.clauses.len() {
            let clause = &self.program.clauses[ci];
            let nvars = clause.vars.len();
            let mut partials = Vec::new();
            for lit in clause.literals.iter().filter(|l| l.pred == target.pred) {
                let mut binding = alloc::vec![None; nvars];
                let ok = lit
                    .args
                    .iter()
                    .zip(&target.args)
                    .all(|(p, t)| self.match_term(p, *t, &mut binding));
                if ok {
                    partials.push(binding);
                }
            }
            for partial in partials {
                let free: Vec<usize> = (0..nvars).filter(|v| partial[*v].is_none()).collect();
                let mut choices = Vec::with_capacity(free.len());
                for v in &free {
                    let ty = self.program.clauses[ci].vars[*v].ty;
                    let consts = self
                        .signature()
                        .finite_constants(ty)
                        .expect("sigma-determinacy leaves only finite-domain variables unbound")
                        .to_vec();
                    choices.push(consts.into_iter().map(|c| self.constant(c)).collect());
                }
                let mut bindings = Vec::new();
                for_each_tuple(&choices, |values| {
                    let mut full: Vec<TermId> = partial.iter().map(|b| b.unwrap_or(TermId(u32::MAX))).collect();
                    for (v, t) in free.iter().zip(values) {
                        full[*v] = *t;
                    }
                    bindings.push(full);
                });
                for b in bindings {
                    let gc = self.instantiate_clause(ci, &b);
                    if seen.insert(gc.key()) {
                        out.push(gc);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Atoms sharing some ground clause with `atom`, excluding `atom`.
    pub fn neighbors(&mut self, atom: AtomId) -> Result<BTreeSet<AtomId>> {
        let clauses = self.ground_clauses_containing(atom)?;
        Ok(clauses.iter().flat_map(|c| c.atoms()).filter(|a| *a != atom).collect())
    }
}
