//! Backtracking search with unit propagation over propositional clauses.

use alloc::vec::Vec;

/// A literal is `(variable, polarity)`.
pub type Clause = Vec<(u32, bool)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Total assignment satisfying every clause.
    Sat(Vec<bool>),
    Unsat,
}

enum Status {
    Satisfied,
    Conflict,
    Unit(u32, bool),
    Open(u32, bool),
}

fn status(clause: &Clause, assign: &[Option<bool>]) -> Status {
    let mut free = None;
    let mut free_count = 0;
    for &(v, pol) in clause {
        match assign[v as usize] {
            Some(val) if val == pol => return Status::Satisfied,
            Some(_) => {}
            None => {
                free_count += 1;
                free.get_or_insert((v, pol));
            }
        }
    }
    match (free, free_count) {
        (None, _) => Status::Conflict,
        (Some((v, p)), 1) => Status::Unit(v, p),
        (Some((v, p)), _) => Status::Open(v, p),
    }
}

/// Assigns forced literals until a fixpoint. Returns the first literal of
/// some open clause to branch on, `Ok(None)` when everything is satisfied,
/// or `Err(())` on conflict.
fn propagate(clauses: &[Clause], assign: &mut [Option<bool>]) -> Result<Option<(u32, bool)>, ()> {
    loop {
        let mut changed = false;
        let mut branch = None;
        for c in clauses {
            match status(c, assign) {
                Status::Satisfied => {}
                Status::Conflict => return Err(()),
                Status::Unit(v, p) => {
                    assign[v as usize] = Some(p);
                    changed = true;
                }
                Status::Open(v, p) => {
                    branch.get_or_insert((v, p));
                }
            }
        }
        if !changed {
            return Ok(branch);
        }
    }
}

fn search(clauses: &[Clause], assign: &mut Vec<Option<bool>>) -> bool {
    let branch = match propagate(clauses, assign) {
        Err(()) => return false,
        Ok(None) => return true,
        Ok(Some(b)) => b,
    };
    let (v, pol) = branch;
    for value in [pol, !pol] {
        let mut trial = assign.clone();
        trial[v as usize] = Some(value);
        if search(clauses, &mut trial) {
            *assign = trial;
            return true;
        }
    }
    false
}

/// Decides a clause set over variables `0..num_vars`. Unconstrained
/// variables come back false.
pub fn solve(num_vars: usize, clauses: &[Clause]) -> Outcome {
    let mut assign = alloc::vec![None; num_vars];
    if search(clauses, &mut assign) {
        Outcome::Sat(assign.into_iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        Outcome::Unsat
    }
}

pub fn satisfies(model: &[bool], clauses: &[Clause]) -> bool {
    clauses.iter().all(|c| c.iter().any(|&(v, p)| model[v as usize] == p))
}
