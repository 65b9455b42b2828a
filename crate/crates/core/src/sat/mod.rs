//! Hard knowledge bases: unsatisfiability and entailment by Herbrand
//! truncation, and the limiting conditionals of infinite clause weights.
//!
//! A truncation at depth `d` holds every ground clause whose atoms all have
//! argument depth at most `d`. An unsatisfiable truncation certifies that the
//! whole base is unsatisfiable. Satisfiable truncations prove nothing about
//! deeper ones, so satisfiability is only ever reported up to a depth.

mod dpll;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use hashbrown::HashSet;

pub use dpll::{satisfies, solve, Clause, Outcome};

use crate::error::{Error, Result};
use crate::gibbs::{check_cap, BoundaryAssignment, MaskedClauses, Volume, DEFAULT_EXACT_CAP};
use crate::herbrand::{AtomId, GroundClause, Herbrand, TermId};
use crate::logic::{CompileOptions, Formula, Program, Weight, WeightedFormula};

pub const DEFAULT_MAX_DEPTH: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedKb {
    pub depth: usize,
    /// Distinct atoms of `clauses`, in order of first appearance.
    pub atoms: Vec<AtomId>,
    pub clauses: Vec<GroundClause>,
}

impl TruncatedKb {
    /// The clauses over variable indices into `atoms`.
    pub fn propositional(&self) -> Vec<Clause> {
        let index: BTreeMap<AtomId, u32> = self.atoms.iter().enumerate().map(|(i, a)| (*a, i as u32)).collect();
        self.clauses
            .iter()
            .map(|c| c.literals.iter().map(|l| (index[&l.atom], l.positive)).collect())
            .collect()
    }
}

fn require_hard(p: &Program) -> Result<()> {
    match p.clauses.iter().position(|c| !c.weight.is_infinite()) {
        Some(i) => Err(Error::SoftClause { clause: i }),
        None => Ok(()),
    }
}

/// Every ground clause of the knowledge base whose atoms have depth at most
/// `depth`.
pub fn ground_truncation(h: &mut Herbrand, depth: usize) -> Result<TruncatedKb> {
    require_hard(h.program())?;
    if !h.determinacy().sigma_determinate {
        return Err(Error::NotSigmaDeterminate {
            clauses: h.determinacy().violating_clauses(),
        });
    }
    let mut clauses = Vec::new();
    let mut seen = HashSet::new();
    for ci in 0..h.program().clauses.len() {
        let tys: Vec<_> = h.program().clauses[ci].vars.iter().map(|v| v.ty).collect();
        let mut choices = Vec::with_capacity(tys.len());
        for ty in tys {
            choices.push(h.enumerate_universe(ty, depth)?);
        }
        let total = choices.iter().fold(1usize, |acc, c| acc.saturating_mul(c.len()));
        if total > crate::herbrand::DEFAULT_TERM_LIMIT {
            return Err(Error::GroundingLimit {
                what: "ground clauses",
                limit: crate::herbrand::DEFAULT_TERM_LIMIT,
            });
        }
        let mut bindings: Vec<Vec<TermId>> = Vec::new();
        crate::herbrand::for_each_tuple(&choices, |b| bindings.push(b.to_vec()));
        for b in bindings {
            let gc = h.instantiate_clause(ci, &b);
            if gc.literals.iter().all(|l| h.atom(l.atom).depth as usize <= depth)
                && seen.insert((gc.source, gc.literals.clone()))
            {
                clauses.push(gc);
            }
        }
    }
    let mut atoms = Vec::new();
    let mut known = HashSet::new();
    for c in &clauses {
        for a in c.atoms() {
            if known.insert(a) {
                atoms.push(a);
            }
        }
    }
    Ok(TruncatedKb { depth, atoms, clauses })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DepthResult {
    pub depth: usize,
    pub atoms: usize,
    pub clauses: usize,
    /// A model of the truncation, as (atom, value) in atom order; `None`
    /// when the truncation is unsatisfiable.
    pub model: Option<Vec<(AtomId, bool)>>,
}

impl DepthResult {
    pub fn is_sat(&self) -> bool {
        self.model.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SatVerdict {
    UnsatisfiableCertified { depth: usize },
    SatisfiableUpToDepth { depth: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SatReport {
    pub max_depth: usize,
    pub depths: Vec<DepthResult>,
    pub verdict: SatVerdict,
}

/// Solves truncations at depth 0, 1, ... and stops at the first
/// unsatisfiable one.
pub fn check_satisfiable(h: &mut Herbrand, max_depth: usize) -> Result<SatReport> {
    let mut depths = Vec::new();
    for d in 0..=max_depth {
        let t = ground_truncation(h, d)?;
        let clauses = t.propositional();
        let model = match solve(t.atoms.len(), &clauses) {
            Outcome::Sat(m) => {
                debug_assert!(satisfies(&m, &clauses));
                Some(t.atoms.iter().copied().zip(m).collect())
            }
            Outcome::Unsat => None,
        };
        let unsat = model.is_none();
        depths.push(DepthResult {
            depth: d,
            atoms: t.atoms.len(),
            clauses: t.clauses.len(),
            model,
        });
        if unsat {
            return Ok(SatReport {
                max_depth,
                depths,
                verdict: SatVerdict::UnsatisfiableCertified { depth: d },
            });
        }
    }
    Ok(SatReport {
        max_depth,
        depths,
        verdict: SatVerdict::SatisfiableUpToDepth { depth: max_depth },
    })
}

/// The knowledge base with `!alpha` added as a hard formula, compiled.
/// Universals of `alpha` turn existential under the negation and must range
/// over finite types.
pub fn negated_query(kb: &Program, alpha: &Formula, opts: &CompileOptions) -> Result<Program> {
    let mut p = Program::new(kb.signature.clone());
    p.formulas = kb.formulas.clone();
    p.formulas.push(WeightedFormula {
        formula: Formula::not(alpha.clone()),
        weight: Weight::Infinite,
    });
    p.compile(opts)?;
    Ok(p)
}

/// `kb` entails `alpha` when `kb` plus `!alpha` is certified unsatisfiable.
pub fn check_entailment(kb: &Program, alpha: &Formula, max_depth: usize) -> Result<SatReport> {
    let p = negated_query(kb, alpha, &CompileOptions::default())?;
    let mut h = Herbrand::new(p)?;
    check_satisfiable(&mut h, max_depth)
}

/// Uniform distribution over the configurations of a volume that satisfy
/// the most hard clauses given the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitDistribution {
    pub atoms: Vec<AtomId>,
    pub boundary: Vec<(AtomId, bool)>,
    pub table: Vec<f64>,
    /// Satisfied clauses of the volume at a maximizer, boundary-satisfied
    /// ones included.
    pub max_satisfied: usize,
    pub maximizers: usize,
}

pub fn limit_conditional(v: &Volume, y: &BoundaryAssignment) -> Result<LimitDistribution> {
    limit_conditional_with_cap(v, y, DEFAULT_EXACT_CAP)
}

pub fn limit_conditional_with_cap(v: &Volume, y: &BoundaryAssignment, cap: usize) -> Result<LimitDistribution> {
    check_cap(v, cap)?;
    let m = MaskedClauses::new(v, y, |source, w| match w {
        Weight::Infinite => Ok(1.0),
        Weight::Finite(_) => Err(Error::SoftClause { clause: source }),
    })?;
    let counts: Vec<f64> = (0..1u64 << v.len()).map(|x| m.energy(x)).collect();
    let best = counts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let maximizers = counts.iter().filter(|c| **c == best).count();
    let share = 1.0 / maximizers as f64;
    Ok(LimitDistribution {
        atoms: v.atoms.clone(),
        boundary: v.boundary.iter().map(|a| (*a, y.get(*a).unwrap_or(false))).collect(),
        table: counts.iter().map(|c| if *c == best { share } else { 0.0 }).collect(),
        max_satisfied: best as usize,
        maximizers,
    })
}

/// The same volume with every clause weight set to `w`, the finite member
/// of the family whose limit [`limit_conditional`] describes.
pub fn relax_volume(v: &Volume, w: f64) -> Volume {
    let mut out = v.clone();
    out.clauses.iter_mut().for_each(|c| c.weight = Weight::Finite(w));
    out
}
