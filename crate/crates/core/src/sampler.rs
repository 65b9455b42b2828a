//! Single-site Gibbs sampling on truncated volumes, and the boundary
//! sensitivity diagnostic built on it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gibbs::{build_volume, finite_weight, BoundaryAssignment, Volume};
use crate::herbrand::{AtomId, Herbrand};

pub const DEFAULT_SWEEPS: usize = 100_000;
pub const DEFAULT_BURNIN: usize = 10_000;
const MAX_BATCHES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryPolicy {
    /// Drop every clause that reaches outside the volume.
    Free,
    AllZero,
    AllOne,
    Explicit(BoundaryAssignment),
}

impl BoundaryPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryPolicy::Free => "free",
            BoundaryPolicy::AllZero => "all-zero",
            BoundaryPolicy::AllOne => "all-one",
            BoundaryPolicy::Explicit(_) => "explicit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationSpec {
    pub queries: Vec<AtomId>,
    pub radius: usize,
    pub policy: BoundaryPolicy,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Truncation {
    pub volume: Volume,
    pub boundary: BoundaryAssignment,
    /// Graph distance from the nearest query, per volume atom.
    pub distance: Vec<usize>,
}

/// All atoms within `radius` neighbor hops of a query, ordered by distance
/// and then by printed name.
pub fn ball(h: &mut Herbrand, queries: &[AtomId], radius: usize) -> Result<Vec<(AtomId, usize)>> {
    let mut dist: BTreeMap<AtomId, usize> = BTreeMap::new();
    let mut frontier: Vec<AtomId> = Vec::new();
    for q in queries {
        if dist.insert(*q, 0).is_none() {
            frontier.push(*q);
        }
    }
    for d in 1..=radius {
        let mut next = BTreeSet::new();
        for a in &frontier {
            for n in h.neighbors(*a)? {
                if !dist.contains_key(&n) {
                    next.insert(n);
                }
            }
        }
        frontier = next.into_iter().collect();
        for a in &frontier {
            dist.insert(*a, d);
        }
        if frontier.is_empty() {
            break;
        }
    }
    let mut out: Vec<(usize, String, AtomId)> = dist.into_iter().map(|(a, d)| (d, h.atom_name(a), a)).collect();
    out.sort();
    Ok(out.into_iter().map(|(d, _, a)| (a, d)).collect())
}

pub fn truncate(h: &mut Herbrand, spec: &TruncationSpec) -> Result<Truncation> {
    let ball = ball(h, &spec.queries, spec.radius)?;
    let atoms: Vec<AtomId> = ball.iter().map(|(a, _)| *a).collect();
    let distance = ball.iter().map(|(_, d)| *d).collect();
    let volume = build_volume(h, &atoms)?;
    let (volume, boundary) = match &spec.policy {
        BoundaryPolicy::Free => (volume.restrict_to_interior(), BoundaryAssignment::new()),
        BoundaryPolicy::AllZero => {
            let y = BoundaryAssignment::constant(&volume.boundary, false);
            (volume, y)
        }
        BoundaryPolicy::AllOne => {
            let y = BoundaryAssignment::constant(&volume.boundary, true);
            (volume, y)
        }
        BoundaryPolicy::Explicit(y) => {
            let missing = y.missing(&volume);
            if !missing.is_empty() {
                return Err(Error::IncompleteBoundary {
                    missing: missing.iter().map(|a| h.atom_name(*a)).collect(),
                });
            }
            let y = BoundaryAssignment(volume.boundary.iter().map(|a| (*a, y.0[a])).collect());
            (volume, y)
        }
    };
    Ok(Truncation {
        volume,
        boundary,
        distance,
    })
}

/// Single-site transition kernel for one volume and boundary. Clauses
/// already satisfied by the boundary are dropped and false boundary
/// literals removed, so only volume sites remain.
#[derive(Clone, Debug)]
pub struct SweepKernel {
    clause_lits: Vec<Vec<(u32, bool)>>,
    weights: Vec<f64>,
    site_clauses: Vec<Vec<(u32, bool)>>,
}

/// Chain state: site values plus, per clause, how many literals are true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainState {
    pub values: Vec<bool>,
    true_count: Vec<u32>,
}

impl SweepKernel {
    pub fn new(v: &Volume, y: &BoundaryAssignment) -> Result<Self> {
        let missing = y.missing(v);
        if !missing.is_empty() {
            return Err(Error::IncompleteBoundary {
                missing: missing.iter().map(|a| alloc::format!("#{}", a.0)).collect(),
            });
        }
        let index: BTreeMap<AtomId, u32> = v.atoms.iter().enumerate().map(|(i, a)| (*a, i as u32)).collect();
        let mut clause_lits = Vec::new();
        let mut weights = Vec::new();
        let mut site_clauses = vec![Vec::new(); v.len()];
        for c in &v.clauses {
            let w = finite_weight(c.source, c.weight)?;
            let mut lits = Vec::new();
            let mut fixed = false;
            for l in &c.literals {
                match index.get(&l.atom) {
                    Some(i) => lits.push((*i, l.positive)),
                    None => fixed |= y.get(l.atom) == Some(l.positive),
                }
            }
            if fixed || lits.is_empty() {
                continue;
            }
            let ci = clause_lits.len() as u32;
            for (i, positive) in &lits {
                site_clauses[*i as usize].push((ci, *positive));
            }
            clause_lits.push(lits);
            weights.push(w);
        }
        Ok(SweepKernel {
            clause_lits,
            weights,
            site_clauses,
        })
    }

    pub fn len(&self) -> usize {
        self.site_clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.site_clauses.is_empty()
    }

    pub fn state(&self, values: Vec<bool>) -> Result<ChainState> {
        if values.len() != self.len() {
            return Err(Error::PartialAssignment {
                expected: self.len(),
                got: values.len(),
            });
        }
        let true_count = self
            .clause_lits
            .iter()
            .map(|lits| lits.iter().filter(|(i, p)| values[*i as usize] == *p).count() as u32)
            .collect();
        Ok(ChainState { values, true_count })
    }

    pub fn random_state<R: Rng>(&self, rng: &mut R) -> ChainState {
        let values = (0..self.len()).map(|_| rng.gen::<bool>()).collect();
        self.state(values).expect("length matches")
    }

    /// `P(site i = 1)` given every other site in `s`.
    pub fn site_probability(&self, s: &ChainState, i: usize) -> f64 {
        // H(x_i = 1) - H(x_i = 0), from clauses no other literal satisfies.
        let mut delta = 0.0;
        for &(c, positive) in &self.site_clauses[i] {
            let own = u32::from(s.values[i] == positive);
            if s.true_count[c as usize] - own == 0 {
                delta += if positive {
                    self.weights[c as usize]
                } else {
                    -self.weights[c as usize]
                };
            }
        }
        // A clause holding both signs of the site counts twice with opposite
        // signs, which is correct: it is always satisfied.
        1.0 / (1.0 + libm::exp(-delta))
    }

    fn set(&self, s: &mut ChainState, i: usize, value: bool) {
        if s.values[i] == value {
            return;
        }
        s.values[i] = value;
        for &(c, positive) in &self.site_clauses[i] {
            if value == positive {
                s.true_count[c as usize] += 1;
            } else {
                s.true_count[c as usize] -= 1;
            }
        }
    }

    /// Resamples every site once, in volume order.
    pub fn sweep<R: Rng>(&self, s: &mut ChainState, rng: &mut R) {
        for i in 0..self.len() {
            let p = self.site_probability(s, i);
            let u: f64 = rng.gen();
            self.set(s, i, u < p);
        }
    }
}

/// One systematic-scan sweep.
pub fn gibbs_sweep<R: Rng>(kernel: &SweepKernel, state: &mut ChainState, rng: &mut R) {
    kernel.sweep(state, rng)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarginalEstimate {
    /// Every volume atom, queries first.
    pub atoms: Vec<AtomId>,
    pub probabilities: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// `p(1-p) / se^2`, or the sample count when the batch variance is zero.
    pub effective_samples: Vec<f64>,
    pub sweeps: usize,
    pub burnin: usize,
    pub seed: u64,
}

impl MarginalEstimate {
    pub fn get(&self, atom: AtomId) -> Option<(f64, f64)> {
        let i = self.atoms.iter().position(|a| *a == atom)?;
        Some((self.probabilities[i], self.std_errors[i]))
    }
}

/// Per-sweep observer of the chain state, in scan order.
pub type Trace<'a> = &'a mut dyn FnMut(&[bool]);

/// Runs a chain on a prepared truncation. `trace` sees the state after every
/// sweep, burn-in included.
pub fn sample_volume(
    t: &Truncation,
    sweeps: usize,
    burnin: usize,
    seed: u64,
    mut trace: Option<Trace<'_>>,
) -> Result<MarginalEstimate> {
    if sweeps <= burnin {
        return Err(Error::InvalidArgument(alloc::format!(
            "sweeps ({sweeps}) must exceed burn-in ({burnin})"
        )));
    }
    let kernel = SweepKernel::new(&t.volume, &t.boundary)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = kernel.random_state(&mut rng);
    let n = sweeps - burnin;
    let batches = MAX_BATCHES.min(libm::sqrt(n as f64) as usize).max(1);
    let batch_len = n / batches;
    let sites = kernel.len();
    let mut totals = vec![0u64; sites];
    let mut batch_counts = vec![vec![0u32; batches]; sites];
    for k in 0..sweeps {
        kernel.sweep(&mut state, &mut rng);
        if let Some(f) = trace.as_mut() {
            f(&state.values);
        }
        if k < burnin {
            continue;
        }
        let j = k - burnin;
        let b = j / batch_len;
        for (i, v) in state.values.iter().enumerate() {
            if *v {
                totals[i] += 1;
                if b < batches {
                    batch_counts[i][b] += 1;
                }
            }
        }
    }
    let mut probabilities = Vec::with_capacity(sites);
    let mut std_errors = Vec::with_capacity(sites);
    let mut effective_samples = Vec::with_capacity(sites);
    for i in 0..sites {
        let p = totals[i] as f64 / n as f64;
        let means: Vec<f64> = batch_counts[i].iter().map(|c| *c as f64 / batch_len as f64).collect();
        let se = if batches > 1 {
            let m = means.iter().sum::<f64>() / batches as f64;
            let var = means.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (batches - 1) as f64;
            libm::sqrt(var / batches as f64)
        } else {
            libm::sqrt(p * (1.0 - p) / n as f64)
        };
        let ess = if se > 0.0 { p * (1.0 - p) / (se * se) } else { n as f64 };
        probabilities.push(p);
        std_errors.push(se);
        effective_samples.push(ess);
    }
    Ok(MarginalEstimate {
        atoms: t.volume.atoms.clone(),
        probabilities,
        std_errors,
        effective_samples,
        sweeps,
        burnin,
        seed,
    })
}

pub fn estimate_marginals(
    h: &mut Herbrand,
    spec: &TruncationSpec,
    sweeps: usize,
    burnin: usize,
    seed: u64,
    trace: Option<Trace<'_>>,
) -> Result<MarginalEstimate> {
    let t = truncate(h, spec)?;
    sample_volume(&t, sweeps, burnin, seed, trace)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SensitivityReport {
    pub queries: Vec<AtomId>,
    pub radius: usize,
    pub policies: Vec<BoundaryPolicy>,
    /// Formula weights of the program, finite ones only.
    pub weights: Vec<f64>,
    /// Per policy, estimates for the query atoms.
    pub estimates: Vec<Vec<(f64, f64)>>,
    /// Per query, max minus min across policies.
    pub spreads: Vec<f64>,
    /// Per query, the root sum of squared standard errors across policies.
    pub combined_se: Vec<f64>,
    pub sweeps: usize,
    pub burnin: usize,
    pub seed: u64,
}

/// Estimates the query marginals under each boundary policy, every chain
/// using the same seed, and reports how far they spread. A large spread is
/// consistent with several Gibbs measures; it proves nothing.
pub fn boundary_sensitivity(
    h: &mut Herbrand,
    queries: &[AtomId],
    radius: usize,
    policies: &[BoundaryPolicy],
    sweeps: usize,
    burnin: usize,
    seed: u64,
) -> Result<SensitivityReport> {
    if policies.len() < 2 {
        return Err(Error::InvalidArgument("need at least two boundary policies".into()));
    }
    let mut estimates = Vec::with_capacity(policies.len());
    for policy in policies {
        let spec = TruncationSpec {
            queries: queries.to_vec(),
            radius,
            policy: policy.clone(),
        };
        let m = estimate_marginals(h, &spec, sweeps, burnin, seed, None)?;
        estimates.push(
            queries
                .iter()
                .map(|q| m.get(*q).expect("queries are in the volume"))
                .collect::<Vec<_>>(),
        );
    }
    let mut spreads = Vec::with_capacity(queries.len());
    let mut combined_se = Vec::with_capacity(queries.len());
    for qi in 0..queries.len() {
        let ps = estimates.iter().map(|e| e[qi].0);
        let lo = ps.clone().fold(f64::INFINITY, f64::min);
        let hi = ps.fold(f64::NEG_INFINITY, f64::max);
        spreads.push(hi - lo);
        combined_se.push(libm::sqrt(estimates.iter().map(|e| e[qi].1 * e[qi].1).sum()));
    }
    let weights = h.program().formulas.iter().filter_map(|f| f.weight.finite()).collect();
    Ok(SensitivityReport {
        queries: queries.to_vec(),
        radius,
        policies: policies.to_vec(),
        weights,
        estimates,
        spreads,
        combined_se,
        sweeps,
        burnin,
        seed,
    })
}
