//! Hamiltonians and exact conditional distributions on finite volumes.
//!
//! For a finite atom set `X` with boundary values `y`, the conditional
//! probability of a configuration `x` is proportional to `exp(H(x, y))`,
//! where `H` sums the weights of the satisfied ground clauses that contain
//! at least one atom of `X`. The exponent carries no minus sign.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::error::{Error, Result};
use crate::herbrand::{AtomId, GroundClause, Herbrand};
use crate::logic::Weight;

/// Default bound on `|X|` for exact enumeration.
pub const DEFAULT_EXACT_CAP: usize = 20;
/// `2^30` table entries is the most any cap may ask for.
const HARD_CAP: usize = 30;

/// A finite atom set together with every ground clause touching it.
#[derive(Clone, Debug, PartialEq)]
pub struct Volume {
    pub atoms: Vec<AtomId>,
    pub clauses: Vec<GroundClause>,
    /// Atoms of `clauses` outside `atoms`, in order of first appearance.
    pub boundary: Vec<AtomId>,
}

impl Volume {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn position(&self, atom: AtomId) -> Option<usize> {
        self.atoms.iter().position(|a| *a == atom)
    }

    /// Same atoms, keeping only the clauses that lie entirely inside them.
    pub fn restrict_to_interior(&self) -> Volume {
        let inside: HashSet<AtomId> = self.atoms.iter().copied().collect();
        Volume {
            atoms: self.atoms.clone(),
            clauses: self
                .clauses
                .iter()
                .filter(|c| c.atoms().all(|a| inside.contains(&a)))
                .cloned()
                .collect(),
            boundary: Vec::new(),
        }
    }
}

/// Values for atoms outside a volume. May hold more atoms than the
/// volume's boundary; extra entries are ignored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundaryAssignment(pub BTreeMap<AtomId, bool>);

impl BoundaryAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(atoms: &[AtomId], value: bool) -> Self {
        BoundaryAssignment(atoms.iter().map(|a| (*a, value)).collect())
    }

    pub fn set(&mut self, atom: AtomId, value: bool) {
        self.0.insert(atom, value);
    }

    pub fn get(&self, atom: AtomId) -> Option<bool> {
        self.0.get(&atom).copied()
    }

    /// Boundary atoms of `v` without a value.
    pub fn missing(&self, v: &Volume) -> Vec<AtomId> {
        v.boundary.iter().filter(|a| !self.0.contains_key(a)).copied().collect()
    }
}

/// Collects the clauses touching `atoms` and their boundary. Duplicate
/// input atoms are ignored. Refuses programs that are not sigma-determinate.
pub fn build_volume(h: &mut Herbrand, atoms: &[AtomId]) -> Result<Volume> {
    let mut ordered = Vec::with_capacity(atoms.len());
    let mut inside = HashSet::new();
    for a in atoms {
        if inside.insert(*a) {
            ordered.push(*a);
        }
    }
    let mut clauses = Vec::new();
    let mut seen = HashSet::new();
    for a in &ordered {
        for c in h.ground_clauses_containing(*a)? {
            if seen.insert((c.source, c.literals.clone())) {
                clauses.push(c);
            }
        }
    }
    let mut boundary = Vec::new();
    let mut in_boundary = HashSet::new();
    for c in &clauses {
        for a in c.atoms() {
            if !inside.contains(&a) && in_boundary.insert(a) {
                boundary.push(a);
            }
        }
    }
    Ok(Volume {
        atoms: ordered,
        clauses,
        boundary,
    })
}

/// A volume's clauses as bit masks over the configuration of `X`, with the
/// boundary already folded in.
#[derive(Clone, Debug)]
pub(crate) struct MaskedClauses {
    /// (literal-true-when-bit-set mask, literal-true-when-bit-clear mask, weight)
    pub clauses: Vec<(u64, u64, f64)>,
    /// Total weight of clauses already satisfied by the boundary.
    pub constant: f64,
}

impl MaskedClauses {
    pub fn new(v: &Volume, y: &BoundaryAssignment, weight: impl Fn(usize, Weight) -> Result<f64>) -> Result<Self> {
        let missing = y.missing(v);
        if !missing.is_empty() {
            return Err(Error::IncompleteBoundary {
                missing: missing.iter().map(|a| alloc::format!("#{}", a.0)).collect(),
            });
        }
        let mut clauses = Vec::with_capacity(v.clauses.len());
        let mut constant = 0.0;
        for c in &v.clauses {
            let w = weight(c.source, c.weight)?;
            let (mut pos, mut neg, mut fixed) = (0u64, 0u64, false);
            for l in &c.literals {
                match v.position(l.atom) {
                    Some(i) if l.positive => pos |= 1 << i,
                    Some(i) => neg |= 1 << i,
                    None => fixed |= y.get(l.atom) == Some(l.positive),
                }
            }
            if fixed {
                constant += w;
            } else {
                clauses.push((pos, neg, w));
            }
        }
        Ok(MaskedClauses { clauses, constant })
    }

    pub fn energy(&self, x: u64) -> f64 {
        let mut h = self.constant;
        for &(pos, neg, w) in &self.clauses {
            if x & pos != 0 || !x & neg != 0 {
                h += w;
            }
        }
        h
    }
}

pub(crate) fn finite_weight(source: usize, w: Weight) -> Result<f64> {
    w.finite().ok_or(Error::InfiniteWeight { clause: source })
}

pub(crate) fn check_cap(v: &Volume, cap: usize) -> Result<()> {
    let cap = cap.min(HARD_CAP);
    if v.len() > cap {
        return Err(Error::VolumeTooLarge { size: v.len(), cap });
    }
    Ok(())
}

fn pack(x: &[bool]) -> u64 {
    x.iter().enumerate().fold(0, |acc, (i, b)| acc | (u64::from(*b) << i))
}

/// `H(x, y)`: total weight of satisfied clauses of `v`, with `x` in the
/// order of `v.atoms`.
pub fn hamiltonian(v: &Volume, x: &[bool], y: &BoundaryAssignment) -> Result<f64> {
    if x.len() != v.len() {
        return Err(Error::PartialAssignment {
            expected: v.len(),
            got: x.len(),
        });
    }
    if v.len() > 64 {
        // Slow path for volumes too wide for a mask.
        let missing = y.missing(v);
        if !missing.is_empty() {
            return Err(Error::IncompleteBoundary {
                missing: missing.iter().map(|a| alloc::format!("#{}", a.0)).collect(),
            });
        }
        let mut h = 0.0;
        for c in &v.clauses {
            let w = finite_weight(c.source, c.weight)?;
            if c.is_satisfied(|a| v.position(a).map_or_else(|| y.get(a).unwrap_or(false), |i| x[i])) {
                h += w;
            }
        }
        return Ok(h);
    }
    let m = MaskedClauses::new(v, y, finite_weight)?;
    Ok(m.energy(pack(x)))
}

/// Exact conditional distribution over the configurations of a volume.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalDistribution {
    pub atoms: Vec<AtomId>,
    /// Values of the volume's boundary atoms.
    pub boundary: Vec<(AtomId, bool)>,
    /// Indexed by configuration; bit `i` is the value of `atoms[i]`.
    pub table: Vec<f64>,
    /// Natural log of the partition function.
    pub log_partition: f64,
}

impl ConditionalDistribution {
    pub fn probability(&self, x: &[bool]) -> f64 {
        self.table[pack(x) as usize]
    }

    /// `P(atoms[i] = 1)`.
    pub fn marginal(&self, i: usize) -> f64 {
        self.table
            .iter()
            .enumerate()
            .filter(|(x, _)| x >> i & 1 == 1)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn marginals(&self) -> Vec<f64> {
        (0..self.atoms.len()).map(|i| self.marginal(i)).collect()
    }

    /// Marginal table over a subset of the atoms, indexed like `table` with
    /// bit `j` for `onto[j]`.
    pub fn marginalize(&self, onto: &[AtomId]) -> Result<Vec<f64>> {
        let positions = onto
            .iter()
            .map(|a| {
                self.atoms
                    .iter()
                    .position(|b| b == a)
                    .ok_or_else(|| Error::InvalidArgument(alloc::format!("atom #{} is not in the volume", a.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = vec![0.0; 1 << onto.len()];
        for (x, p) in self.table.iter().enumerate() {
            let sub = positions
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, i)| acc | ((x >> i & 1) << j));
            out[sub] += p;
        }
        Ok(out)
    }
}

/// Normalizes `exp(energies)` in log space.
pub(crate) fn normalize(energies: &[f64]) -> (Vec<f64>, f64) {
    let max = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = energies.iter().map(|h| libm::exp(h - max)).sum();
    let log_z = max + libm::log(sum);
    (energies.iter().map(|h| libm::exp(h - log_z)).collect(), log_z)
}

/// Conditional distribution of `v` given `y`, with the default cap.
pub fn conditional(v: &Volume, y: &BoundaryAssignment) -> Result<ConditionalDistribution> {
    conditional_with_cap(v, y, DEFAULT_EXACT_CAP)
}

/// Conditional distribution of `v` given `y` by full enumeration of the
/// `2^|X|` configurations. Infinite weights are rejected.
pub fn conditional_with_cap(v: &Volume, y: &BoundaryAssignment, cap: usize) -> Result<ConditionalDistribution> {
    check_cap(v, cap)?;
    let m = MaskedClauses::new(v, y, finite_weight)?;
    let energies: Vec<f64> = (0..1u64 << v.len()).map(|x| m.energy(x)).collect();
    let (table, log_partition) = normalize(&energies);
    Ok(ConditionalDistribution {
        atoms: v.atoms.clone(),
        boundary: v.boundary.iter().map(|a| (*a, y.get(*a).unwrap_or(false))).collect(),
        table,
        log_partition,
    })
}
