use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use infmln_core::gibbs::{conditional_with_cap, Volume};
use infmln_core::herbrand::AtomId;
use infmln_core::logic::parse_formula;
use infmln_core::sampler::{boundary_sensitivity, sample_volume, truncate, TruncationSpec};
use infmln_core::sat::{check_satisfiable, limit_conditional_with_cap, SatReport};
use infmln_core::uniqueness::{check_uniqueness, Verdict, OTHER_CONDITIONS_NOTE};
use infmln_core::{build_volume, sat, BoundaryAssignment, Herbrand};

use crate::args::{Command, Policy};
use crate::report::*;
use crate::{load_mln_file, CliError};

type Outcome = (Report, Option<CliError>);

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    let (program, warnings) = load_mln_file(cmd.file())?;
    for w in &warnings {
        eprintln!("warning: {}: {w}", cmd.file().display());
    }
    let mut rejection = None;
    let payload = match cmd {
        Command::Analyze { .. } => {
            let h = Herbrand::new(program.clone())?;
            let det = h.determinacy();
            if !det.sigma_determinate {
                rejection = Some(CliError::Rejected(format!(
                    "{}: not sigma-determinate; clauses {:?} have infinite-domain variables missing from a literal",
                    cmd.file().display(),
                    det.violating_clauses()
                )));
            }
            Payload::Analyze(Analysis {
                formulas: program
                    .formulas
                    .iter()
                    .enumerate()
                    .map(|(index, f)| FormulaEntry {
                        index,
                        weight: f.weight.into(),
                        text: program.display_formula(&f.formula).to_string(),
                    })
                    .collect(),
                clauses: program
                    .clauses
                    .iter()
                    .zip(&det.clauses)
                    .enumerate()
                    .map(|(index, (c, d))| ClauseEntry {
                        index,
                        origin: c.origin,
                        weight: c.weight.into(),
                        text: program.display_clause(c).to_string(),
                        determinate: d.is_determinate(),
                        violating: d.violating.clone(),
                    })
                    .collect(),
                warnings: warnings.iter().map(ToString::to_string).collect(),
                sigma_determinate: det.sigma_determinate,
                ground_clause_bound: det.ground_clause_bound,
                neighbor_bound: det.neighbor_bound,
            })
        }
        Command::Uniqueness { depth, window, .. } => {
            let mut h = Herbrand::new(program)?;
            let r = check_uniqueness(&mut h, *depth, *window)?;
            Payload::Uniqueness(Uniqueness {
                max_depth: r.max_depth,
                window: r.window,
                depths: r
                    .depths
                    .iter()
                    .map(|d| DepthEntry {
                        depth: d.depth,
                        atoms: d.atoms,
                        running_max: d.running_max,
                        witness: d.witness.map(|a| h.atom_name(a)),
                    })
                    .collect(),
                supremum: r.supremum,
                stabilized: r.stabilized,
                verdict: match r.verdict {
                    Verdict::UniqueCertified => "UniqueCertified",
                    Verdict::Inconclusive => "Inconclusive",
                },
                note: OTHER_CONDITIONS_NOTE,
            })
        }
        Command::Query {
            atoms,
            boundary,
            set,
            cap,
            limit,
            ..
        } => {
            let mut h = Herbrand::new(program)?;
            let ids = parse_atoms(&mut h, atoms)?;
            let mut v = build_volume(&mut h, &ids)?;
            let mut y = match boundary {
                Policy::Free => {
                    v = v.restrict_to_interior();
                    BoundaryAssignment::new()
                }
                p => BoundaryAssignment::constant(&v.boundary, *p == Policy::AllOne),
            };
            apply_overrides(&mut h, &v, &mut y, set)?;
            let names: Vec<String> = v.atoms.iter().map(|a| h.atom_name(*a)).collect();
            let assignments = boundary_list(&h, &v, &y);
            if *limit {
                let l = limit_conditional_with_cap(&v, &y, *cap)?;
                Payload::Limit(Limit {
                    marginals: marginals(&names, &l.table),
                    atoms: names,
                    policy: boundary.name(),
                    boundary: assignments,
                    clauses: v.clauses.len(),
                    max_satisfied: l.max_satisfied,
                    maximizers: l.maximizers,
                    table: l.table,
                })
            } else {
                let d = conditional_with_cap(&v, &y, *cap)?;
                Payload::Query(Query {
                    marginals: marginals(&names, &d.table),
                    atoms: names,
                    policy: boundary.name(),
                    boundary: assignments,
                    clauses: v.clauses.len(),
                    log_partition: d.log_partition,
                    table: d.table,
                })
            }
        }
        Command::Sample {
            atoms,
            radius,
            sweeps,
            burnin,
            seed,
            boundary,
            set,
            trace,
            ..
        } => {
            let mut h = Herbrand::new(program)?;
            let queries = parse_atoms(&mut h, atoms)?;
            let spec = TruncationSpec {
                queries: queries.clone(),
                radius: *radius,
                policy: boundary.core(),
            };
            let mut t = truncate(&mut h, &spec)?;
            let volume = t.volume.clone();
            apply_overrides(&mut h, &volume, &mut t.boundary, set)?;
            let m = match trace {
                Some(path) => with_trace(path, |f| sample_volume(&t, *sweeps, *burnin, *seed, Some(f)))?,
                None => sample_volume(&t, *sweeps, *burnin, *seed, None)?,
            };
            Payload::Sample(Sample {
                queries: queries.iter().map(|a| h.atom_name(*a)).collect(),
                radius: *radius,
                policy: boundary.name(),
                boundary_atoms: t.volume.boundary.len(),
                clauses: t.volume.clauses.len(),
                sweeps: m.sweeps,
                burnin: m.burnin,
                seed: m.seed,
                atoms: m
                    .atoms
                    .iter()
                    .enumerate()
                    .map(|(i, a)| Estimate {
                        atom: h.atom_name(*a),
                        distance: t.distance[t.volume.position(*a).expect("estimate atoms are volume atoms")],
                        probability: m.probabilities[i],
                        std_error: m.std_errors[i],
                        effective_samples: m.effective_samples[i],
                    })
                    .collect(),
            })
        }
        Command::Sensitivity {
            atoms,
            radius,
            sweeps,
            burnin,
            seed,
            policies,
            ..
        } => {
            let mut h = Herbrand::new(program)?;
            let queries = parse_atoms(&mut h, atoms)?;
            let core: Vec<_> = policies.iter().map(|p| p.core()).collect();
            let r = boundary_sensitivity(&mut h, &queries, *radius, &core, *sweeps, *burnin, *seed)?;
            Payload::Sensitivity(Sensitivity {
                radius: r.radius,
                weights: r.weights.clone(),
                sweeps: r.sweeps,
                burnin: r.burnin,
                seed: r.seed,
                queries: r
                    .queries
                    .iter()
                    .enumerate()
                    .map(|(qi, a)| QuerySensitivity {
                        atom: h.atom_name(*a),
                        estimates: policies
                            .iter()
                            .zip(&r.estimates)
                            .map(|(p, e)| PolicyEstimate {
                                policy: p.name(),
                                probability: e[qi].0,
                                std_error: e[qi].1,
                            })
                            .collect(),
                        spread: r.spreads[qi],
                        combined_se: r.combined_se[qi],
                    })
                    .collect(),
            })
        }
        Command::Sat { max_depth, .. } => {
            let mut h = Herbrand::new(program)?;
            let r = check_satisfiable(&mut h, *max_depth)?;
            Payload::Sat(sat_payload(&h, &r, None))
        }
        Command::Entail { query, max_depth, .. } => {
            let alpha =
                parse_formula(&program.signature, query).map_err(|e| CliError::Usage(format!("--query: {e}")))?;
            // Same steps as check_entailment, keeping the store for atom names.
            let extended = sat::negated_query(&program, &alpha, &Default::default())?;
            let mut h = Herbrand::new(extended)?;
            let r = check_satisfiable(&mut h, *max_depth)?;
            Payload::Sat(sat_payload(&h, &r, Some(query.clone())))
        }
    };
    Ok((
        Report {
            tool: TOOL,
            version: VERSION,
            command: cmd.name(),
            config: Config { args: cmd.to_args() },
            result: payload,
        },
        rejection,
    ))
}

fn parse_atoms(h: &mut Herbrand, atoms: &[String]) -> Result<Vec<AtomId>, CliError> {
    atoms
        .iter()
        .map(|a| h.parse_atom(a).map_err(|e| CliError::Usage(format!("atom `{a}`: {e}"))))
        .collect()
}

fn apply_overrides(h: &mut Herbrand, v: &Volume, y: &mut BoundaryAssignment, set: &[String]) -> Result<(), CliError> {
    for s in set {
        let (atom, value) = s
            .rsplit_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set `{s}`: expected ATOM=0 or ATOM=1")))?;
        let value = match value.trim() {
            "0" | "false" => false,
            "1" | "true" => true,
            other => return Err(CliError::Usage(format!("--set `{s}`: value `{other}` is not 0 or 1"))),
        };
        let a = h
            .parse_atom(atom.trim())
            .map_err(|e| CliError::Usage(format!("--set `{s}`: {e}")))?;
        if !v.boundary.contains(&a) {
            return Err(CliError::Usage(format!(
                "--set `{s}`: not a boundary atom of the volume"
            )));
        }
        y.set(a, value);
    }
    Ok(())
}

fn boundary_list(h: &Herbrand, v: &Volume, y: &BoundaryAssignment) -> Vec<Assignment> {
    v.boundary
        .iter()
        .map(|a| Assignment {
            atom: h.atom_name(*a),
            value: y.get(*a).unwrap_or(false),
        })
        .collect()
}

fn marginals(names: &[String], table: &[f64]) -> Vec<Marginal> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| Marginal {
            atom: n.clone(),
            probability: table
                .iter()
                .enumerate()
                .filter(|(x, _)| x >> i & 1 == 1)
                .map(|(_, p)| p)
                .sum(),
        })
        .collect()
}

fn with_trace<T>(
    path: &Path,
    run: impl FnOnce(&mut dyn FnMut(&[bool])) -> infmln_core::Result<T>,
) -> Result<T, CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    let mut failed = None;
    let mut line = String::new();
    let out = run(&mut |state: &[bool]| {
        if failed.is_some() {
            return;
        }
        line.clear();
        for (i, b) in state.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push(if *b { '1' } else { '0' });
        }
        line.push('\n');
        if let Err(e) = w.write_all(line.as_bytes()) {
            failed = Some(e);
        }
    })?;
    if let Some(e) = failed {
        return Err(io(e));
    }
    w.flush().map_err(io)?;
    Ok(out)
}

fn sat_payload(h: &Herbrand, r: &SatReport, query: Option<String>) -> Sat {
    let (kind, depth) = match r.verdict {
        sat::SatVerdict::UnsatisfiableCertified { depth } => ("UnsatisfiableCertified", depth),
        sat::SatVerdict::SatisfiableUpToDepth { depth } => ("SatisfiableUpToDepth", depth),
    };
    Sat {
        entailed: query.as_ref().map(|_| kind == "UnsatisfiableCertified"),
        query,
        max_depth: r.max_depth,
        verdict: SatVerdict { kind, depth },
        depths: r
            .depths
            .iter()
            .map(|d| SatDepth {
                depth: d.depth,
                atoms: d.atoms,
                clauses: d.clauses,
                satisfiable: d.is_sat(),
                model: d.model.as_ref().map(|m| {
                    m.iter()
                        .map(|(a, value)| Assignment {
                            atom: h.atom_name(*a),
                            value: *value,
                        })
                        .collect()
                }),
            })
            .collect(),
    }
}
