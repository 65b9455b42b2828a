use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{AtomId, Head, Herbrand, TermId};
use crate::error::{Error, Result};
use crate::logic::{PredId, TypeId, TypeKind};

/// Calls `emit` once per tuple of the cartesian product of `choices`, in
/// lexicographic index order.
pub(crate) fn for_each_tuple(choices: &[Vec<TermId>], mut emit: impl FnMut(&[TermId])) {
    if choices.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; choices.len()];
    let mut tuple: Vec<TermId> = choices.iter().map(|c| c[0]).collect();
    loop {
        emit(&tuple);
        let mut k = choices.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                tuple[k] = choices[k][idx[k]];
                break;
            }
            idx[k] = 0;
            tuple[k] = choices[k][0];
        }
    }
}

fn product_size(choices: &[Vec<TermId>]) -> usize {
    choices.iter().fold(1usize, |acc, c| acc.saturating_mul(c.len()))
}

impl Herbrand {
    /// Terms of type `ty` with depth exactly `depth`, sorted by printed form.
    fn level(&mut self, ty: TypeId, depth: usize) -> Result<Vec<TermId>> {
        if let Some(levels) = self.levels.get(&ty) {
            if let Some(l) = levels.get(depth) {
                return Ok(l.clone());
            }
        }
        let computed = if depth == 0 {
            match self.signature().ty(ty).kind.clone() {
                TypeKind::Finite(cs) => cs.into_iter().map(|c| self.constant(c)).collect(),
                TypeKind::Infinite { seed } => vec![self.constant(seed)],
            }
        } else {
            let gens: Vec<_> = self.signature().generators(ty).collect();
            let mut out = Vec::new();
            for f in gens {
                let arg_tys = self.signature().function(f).args.clone();
                // Arguments no deeper than depth-1, with at least one at exactly depth-1.
                let mut upto = Vec::with_capacity(arg_tys.len());
                for t in &arg_tys {
                    let mut all = Vec::new();
                    for d in 0..depth {
                        all.extend(self.level(*t, d)?);
                    }
                    upto.push(all);
                }
                if product_size(&upto) > self.term_limit {
                    return Err(Error::GroundingLimit {
                        what: "terms",
                        limit: self.term_limit,
                    });
                }
                let mut tuples = Vec::new();
                for_each_tuple(&upto, |tuple| {
                    if tuple.iter().any(|a| self.terms[a.index()].depth as usize == depth - 1) {
                        tuples.push(tuple.to_vec());
                    }
                });
                for args in tuples {
                    out.push(self.intern_term(Head::Func(f), args));
                }
                if out.len() > self.term_limit {
                    return Err(Error::GroundingLimit {
                        what: "terms",
                        limit: self.term_limit,
                    });
                }
            }
            let mut named: Vec<(String, TermId)> = out.into_iter().map(|t| (self.term_name(t), t)).collect();
            named.sort();
            named.into_iter().map(|(_, t)| t).collect()
        };
        let levels = self.levels.entry(ty).or_default();
        // Callers walk depths upward, so lower levels are already cached.
        debug_assert_eq!(levels.len(), depth);
        if levels.len() == depth {
            levels.push(computed.clone());
        }
        Ok(computed)
    }

    /// Ground terms of type `ty` up to `max_depth`, depth-major and sorted by
    /// printed form within a depth. Each term is interned once.
    pub fn enumerate_universe(&mut self, ty: TypeId, max_depth: usize) -> Result<Vec<TermId>> {
        let mut out = Vec::new();
        for d in 0..=max_depth {
            // Finite types have nothing beyond depth 0.
            if d > 0 && !self.signature().is_infinite(ty) {
                break;
            }
            let level = self.level(ty, d)?;
            out.extend(level);
            if out.len() > self.term_limit {
                return Err(Error::GroundingLimit {
                    what: "terms",
                    limit: self.term_limit,
                });
            }
        }
        Ok(out)
    }

    /// Ground atoms of `pred` whose arguments all have depth at most
    /// `max_depth`.
    pub fn enumerate_atoms(&mut self, pred: PredId, max_depth: usize) -> Result<Vec<AtomId>> {
        let arg_tys = self.signature().predicate(pred).args.clone();
        let mut choices = Vec::with_capacity(arg_tys.len());
        for t in arg_tys {
            choices.push(self.enumerate_universe(t, max_depth)?);
        }
        if product_size(&choices) > self.term_limit {
            return Err(Error::GroundingLimit {
                what: "atoms",
                limit: self.term_limit,
            });
        }
        let mut tuples = Vec::new();
        for_each_tuple(&choices, |t| tuples.push(t.to_vec()));
        Ok(tuples.into_iter().map(|args| self.intern_atom(pred, args)).collect())
    }

    /// Every ground atom of every predicate up to `max_depth`.
    pub fn enumerate_base(&mut self, max_depth: usize) -> Result<Vec<AtomId>> {
        let mut out = Vec::new();
        for p in 0..self.signature().predicates.len() {
            out.extend(self.enumerate_atoms(PredId(p as u32), max_depth)?);
        }
        Ok(out)
    }
}
