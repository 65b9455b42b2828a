use alloc::string::String;
use alloc::vec::Vec;

use crate::logic::Program;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseDeterminacy {
    pub clause: usize,
    /// Infinite-domain variables missing from some literal.
    pub violating: Vec<String>,
}

impl ClauseDeterminacy {
    pub fn is_determinate(&self) -> bool {
        self.violating.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminacyReport {
    pub clauses: Vec<ClauseDeterminacy>,
    pub sigma_determinate: bool,
    /// Upper bound on the ground clauses containing any one atom.
    pub ground_clause_bound: usize,
    /// Upper bound on the neighbors of any one atom.
    pub neighbor_bound: usize,
}

impl DeterminacyReport {
    pub fn violating_clauses(&self) -> Vec<usize> {
        self.clauses
            .iter()
            .filter(|c| !c.is_determinate())
            .map(|c| c.clause)
            .collect()
    }
}

/// A clause is sigma-determinate when each of its infinite-domain variables
/// occurs, possibly under function symbols, in every literal. Programs made
/// of such clauses are locally finite: matching any one literal against an
/// atom fixes every infinite-domain variable, and the remaining variables
/// range over finite types.
pub fn check_sigma_determinate(p: &Program) -> DeterminacyReport {
    let sig = &p.signature;
    let mut clauses = Vec::with_capacity(p.clauses.len());
    let mut ground_clause_bound = 0usize;
    let mut neighbor_bound = 0usize;
    for (i, c) in p.clauses.iter().enumerate() {
        let mut violating = Vec::new();
        let mut finite_groundings = 1usize;
        for (v, var) in c.vars.iter().enumerate() {
            match sig.finite_constants(var.ty) {
                Some(cs) => finite_groundings = finite_groundings.saturating_mul(cs.len()),
                None => {
                    if !c.literals.iter().all(|l| l.contains_var(v as u32)) {
                        violating.push(var.name.clone());
                    }
                }
            }
        }
        let per_clause = c.literals.len().saturating_mul(finite_groundings);
        ground_clause_bound = ground_clause_bound.saturating_add(per_clause);
        neighbor_bound = neighbor_bound.saturating_add(per_clause.saturating_mul(c.literals.len().saturating_sub(1)));
        clauses.push(ClauseDeterminacy { clause: i, violating });
    }
    let sigma_determinate = clauses.iter().all(ClauseDeterminacy::is_determinate);
    DeterminacyReport {
        clauses,
        sigma_determinate,
        ground_clause_bound,
        neighbor_bound,
    }
}
