//! Sufficient condition for a unique Gibbs measure: every atom's interaction
//! sum `Σ (|C_j| - 1)|w_j|` over the ground clauses containing it stays
//! below 2. The supremum over the infinite base is estimated by a sweep over
//! atom depth.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::herbrand::{AtomId, Herbrand};
use crate::logic::Weight;

pub const DEFAULT_MAX_DEPTH: usize = 8;
pub const DEFAULT_WINDOW: usize = 3;

/// Printed alongside reports: the bound checked here is one of several
/// sufficient conditions, and the others are not checked.
pub const OTHER_CONDITIONS_NOTE: &str = "uniqueness also follows from sufficiently large unit-clause weights, \
     or in one dimension from a finite total interaction; neither condition is checked";

/// Max minus min of a potential's values.
pub fn oscillation(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyOscillation);
    }
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(*v), hi.max(*v))
    });
    Ok(hi - lo)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomInteraction {
    pub atom: AtomId,
    pub sum: f64,
    pub clause_count: usize,
}

/// Interaction sum of one atom. Unit clauses contribute nothing.
pub fn interaction_sum(h: &mut Herbrand, atom: AtomId) -> Result<AtomInteraction> {
    require_finite(h)?;
    let clauses = h.ground_clauses_containing(atom)?;
    let mut sum = 0.0;
    for c in &clauses {
        let w = match c.weight {
            Weight::Finite(w) => w,
            Weight::Infinite => return Err(Error::InfiniteWeight { clause: c.source }),
        };
        sum += (c.size() - 1) as f64 * w.abs();
    }
    Ok(AtomInteraction {
        atom,
        sum,
        clause_count: clauses.len(),
    })
}

fn require_finite(h: &Herbrand) -> Result<()> {
    match h.program().clauses.iter().position(|c| c.weight.is_infinite()) {
        Some(i) => Err(Error::InfiniteWeight { clause: i }),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    UniqueCertified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DepthMaximum {
    pub depth: usize,
    /// Atoms whose depth is exactly `depth`.
    pub atoms: usize,
    /// Largest sum among atoms of depth at most `depth`.
    pub running_max: f64,
    /// An atom attaining `running_max`, if any atom exists yet.
    pub witness: Option<AtomId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport {
    pub max_depth: usize,
    pub window: usize,
    pub depths: Vec<DepthMaximum>,
    pub supremum: f64,
    /// The running maximum did not change over the last `window` depths.
    pub stabilized: bool,
    pub verdict: Verdict,
}

/// Sweeps atom depths `0..=max_depth` and certifies uniqueness when the
/// running maximum is below 2 and has not moved over the last `window`
/// depths. Never reports non-uniqueness.
pub fn check_uniqueness(h: &mut Herbrand, max_depth: usize, window: usize) -> Result<UniquenessReport> {
    if window == 0 || window > max_depth {
        return Err(Error::InvalidArgument(alloc::format!(
            "need max_depth >= window >= 1, got max_depth {max_depth}, window {window}"
        )));
    }
    require_finite(h)?;
    let mut depths = Vec::with_capacity(max_depth + 1);
    let mut running = 0.0f64;
    let mut witness = None;
    for d in 0..=max_depth {
        let level: Vec<AtomId> = h
            .enumerate_base(d)?
            .into_iter()
            .filter(|a| h.atom(*a).depth as usize == d)
            .collect();
        for a in &level {
            let s = interaction_sum(h, *a)?;
            if witness.is_none() || s.sum > running {
                running = s.sum;
                witness = Some(*a);
            }
        }
        depths.push(DepthMaximum {
            depth: d,
            atoms: level.len(),
            running_max: running,
            witness,
        });
    }
    let tail = &depths[max_depth - window..];
    let stabilized = tail.iter().all(|m| m.running_max == tail[0].running_max);
    let verdict = if running < 2.0 && stabilized {
        Verdict::UniqueCertified
    } else {
        Verdict::Inconclusive
    };
    Ok(UniquenessReport {
        max_depth,
        window,
        depths,
        supremum: running,
        stabilized,
        verdict,
    })
}
