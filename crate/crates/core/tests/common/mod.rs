//! Brute-force reference implementations. Terms and atoms are plain strings
//! here, so nothing is shared with the engine's intern tables or matcher.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use infmln_core::logic::{ClauseTerm, Formula, Literal, Signature, Term, TypeKind, WeightedClause};
use infmln_core::Program;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ground terms of `ty` up to `depth`, printed, with their depth.
pub fn terms(sig: &Signature, ty: infmln_core::logic::TypeId, depth: usize) -> Vec<(String, usize)> {
    let mut by_type: BTreeMap<u32, BTreeMap<String, usize>> = BTreeMap::new();
    for (i, t) in sig.types.iter().enumerate() {
        let consts: Vec<_> = match &t.kind {
            TypeKind::Finite(cs) => cs.clone(),
            TypeKind::Infinite { seed } => vec![*seed],
        };
        by_type.insert(
            i as u32,
            consts.iter().map(|c| (sig.constant(*c).name.clone(), 0)).collect(),
        );
    }
    for _ in 0..depth {
        let snapshot = by_type.clone();
        for f in &sig.functions {
            let mut tuples: Vec<(Vec<String>, usize)> = vec![(Vec::new(), 0)];
            for a in &f.args {
                let mut next = Vec::new();
                for (prefix, d) in &tuples {
                    for (t, td) in &snapshot[&a.0] {
                        let mut p = prefix.clone();
                        p.push(t.clone());
                        next.push((p, (*d).max(*td)));
                    }
                }
                tuples = next;
            }
            for (args, d) in tuples {
                let name = format!("{}({})", f.name, args.join(", "));
                by_type.get_mut(&f.ret.0).unwrap().entry(name).or_insert(d + 1);
            }
        }
    }
    by_type[&ty.0].iter().map(|(t, d)| (t.clone(), *d)).collect()
}

fn show(sig: &Signature, t: &ClauseTerm, b: &[String]) -> String {
    match t {
        ClauseTerm::Var(i) => b[*i as usize].clone(),
        ClauseTerm::Const(c) => sig.constant(*c).name.clone(),
        ClauseTerm::App(f, args) => format!(
            "{}({})",
            sig.function(*f).name,
            args.iter().map(|a| show(sig, a, b)).collect::<Vec<_>>().join(", ")
        ),
    }
}

pub fn literal_atom(sig: &Signature, l: &Literal, b: &[String]) -> String {
    let name = &sig.predicate(l.pred).name;
    if l.args.is_empty() {
        name.clone()
    } else {
        format!(
            "{}({})",
            name,
            l.args.iter().map(|a| show(sig, a, b)).collect::<Vec<_>>().join(", ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct RefClause {
    pub source: usize,
    pub literals: Vec<(String, bool)>,
    pub weight: f64,
}

impl RefClause {
    pub fn atoms(&self) -> BTreeSet<String> {
        self.literals.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn holds(&self, value: &dyn Fn(&str) -> bool) -> bool {
        self.literals.iter().any(|(a, p)| value(a) == *p)
    }
}

/// Every grounding of every clause with variables over terms of depth at
/// most `depth`, deduplicated per source clause.
pub fn ground_all(p: &Program, depth: usize) -> Vec<RefClause> {
    let sig = &p.signature;
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (ci, c) in p.clauses.iter().enumerate() {
        let mut bindings: Vec<Vec<String>> = vec![Vec::new()];
        for v in &c.vars {
            let ts = terms(sig, v.ty, depth);
            bindings = bindings
                .into_iter()
                .flat_map(|b| {
                    ts.iter().map(move |(t, _)| {
                        let mut b = b.clone();
                        b.push(t.clone());
                        b
                    })
                })
                .collect();
        }
        for b in bindings {
            let mut lits: Vec<(String, bool)> = c
                .literals
                .iter()
                .map(|l| (literal_atom(sig, l, &b), l.positive))
                .collect();
            lits.sort();
            lits.dedup();
            if seen.insert((ci, lits.clone())) {
                out.push(RefClause {
                    source: ci,
                    literals: lits,
                    weight: c.weight.finite().unwrap_or(f64::INFINITY),
                });
            }
        }
    }
    out
}

/// Ground clauses touching any atom of `x`.
pub fn relevant(all: &[RefClause], x: &[String]) -> Vec<RefClause> {
    all.iter()
        .filter(|c| c.literals.iter().any(|(a, _)| x.contains(a)))
        .cloned()
        .collect()
}

/// Atoms of `clauses` outside `x`.
pub fn boundary_of(clauses: &[RefClause], x: &[String]) -> BTreeSet<String> {
    clauses
        .iter()
        .flat_map(|c| c.atoms())
        .filter(|a| !x.contains(a))
        .collect()
}

/// The conditional table by direct summation, indexed with bit `i` for
/// `x[i]`. No log-space tricks: callers keep weights moderate.
pub fn brute_conditional(clauses: &[RefClause], x: &[String], y: &BTreeMap<String, bool>) -> Vec<f64> {
    let n = x.len();
    let mut scores = Vec::with_capacity(1 << n);
    for bits in 0..1usize << n {
        let value = |a: &str| match x.iter().position(|b| b == a) {
            Some(i) => bits >> i & 1 == 1,
            None => y[a],
        };
        let h: f64 = clauses.iter().filter(|c| c.holds(&value)).map(|c| c.weight).sum();
        scores.push(h.exp());
    }
    let z: f64 = scores.iter().sum();
    scores.iter().map(|s| s / z).collect()
}

/// Ground atoms of a function-free program with finite types.
pub fn finite_base(p: &Program) -> Vec<String> {
    let sig = &p.signature;
    let mut out = Vec::new();
    for pred in &sig.predicates {
        let mut tuples: Vec<Vec<String>> = vec![Vec::new()];
        for a in &pred.args {
            let ts = terms(sig, *a, 0);
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    ts.iter().map(move |(c, _)| {
                        let mut t = t.clone();
                        t.push(c.clone());
                        t
                    })
                })
                .collect();
        }
        for t in tuples {
            out.push(if t.is_empty() {
                pred.name.clone()
            } else {
                format!("{}({})", pred.name, t.join(", "))
            });
        }
    }
    out
}

/// Truth of a closed formula over a finite-typed signature, quantifiers
/// evaluated by enumeration.
pub fn eval_formula(
    sig: &Signature,
    f: &Formula,
    env: &mut Vec<(String, String)>,
    world: &dyn Fn(&str) -> bool,
) -> bool {
    match f {
        Formula::Atom(a) => {
            let name = &sig.predicate(a.pred).name;
            let s = if a.args.is_empty() {
                name.clone()
            } else {
                let args: Vec<String> = a.args.iter().map(|t| eval_term(sig, t, env)).collect();
                format!("{}({})", name, args.join(", "))
            };
            world(&s)
        }
        Formula::Not(a) => !eval_formula(sig, a, env, world),
        Formula::And(a, b) => eval_formula(sig, a, env, world) && eval_formula(sig, b, env, world),
        Formula::Or(a, b) => eval_formula(sig, a, env, world) || eval_formula(sig, b, env, world),
        Formula::Implies(a, b) => !eval_formula(sig, a, env, world) || eval_formula(sig, b, env, world),
        Formula::Iff(a, b) => eval_formula(sig, a, env, world) == eval_formula(sig, b, env, world),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let consts: Vec<String> = terms(sig, v.ty, 0).into_iter().map(|(c, _)| c).collect();
            let mut results = consts.iter().map(|c| {
                env.push((v.name.clone(), c.clone()));
                let r = eval_formula(sig, body, env, world);
                env.pop();
                r
            });
            if universal {
                results.all(|r| r)
            } else {
                results.any(|r| r)
            }
        }
    }
}

fn eval_term(sig: &Signature, t: &Term, env: &[(String, String)]) -> String {
    match t {
        Term::Var(v) => env.iter().rev().find(|(n, _)| n == v).expect("bound").1.clone(),
        Term::Const(c) => sig.constant(*c).name.clone(),
        Term::App(f, args) => format!(
            "{}({})",
            sig.function(*f).name,
            args.iter()
                .map(|a| eval_term(sig, a, env))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

/// A closed formula with quantifiers expanded over their finite types and
/// atoms replaced by positions in a base.
pub enum Prop {
    Atom(usize),
    Not(Box<Prop>),
    All(Vec<Prop>),
    Any(Vec<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn eval(&self, world: u64) -> bool {
        match self {
            Prop::Atom(i) => world >> i & 1 == 1,
            Prop::Not(a) => !a.eval(world),
            Prop::All(xs) => xs.iter().all(|x| x.eval(world)),
            Prop::Any(xs) => xs.iter().any(|x| x.eval(world)),
            Prop::Iff(a, b) => a.eval(world) == b.eval(world),
        }
    }
}

/// Same semantics as [`eval_formula`], with the string work done once.
pub fn expand_formula(
    sig: &Signature,
    f: &Formula,
    env: &mut Vec<(String, String)>,
    index: &HashMap<String, usize>,
) -> Prop {
    let go = |g: &Formula, env: &mut Vec<(String, String)>| Box::new(expand_formula(sig, g, env, index));
    match f {
        Formula::Atom(a) => {
            let name = &sig.predicate(a.pred).name;
            let s = if a.args.is_empty() {
                name.clone()
            } else {
                let args: Vec<String> = a.args.iter().map(|t| eval_term(sig, t, env)).collect();
                format!("{}({})", name, args.join(", "))
            };
            Prop::Atom(index[&s])
        }
        Formula::Not(a) => Prop::Not(go(a, env)),
        Formula::And(a, b) => Prop::All(vec![*go(a, env), *go(b, env)]),
        Formula::Or(a, b) => Prop::Any(vec![*go(a, env), *go(b, env)]),
        Formula::Implies(a, b) => Prop::Any(vec![Prop::Not(go(a, env)), *go(b, env)]),
        Formula::Iff(a, b) => Prop::Iff(go(a, env), go(b, env)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let parts = terms(sig, v.ty, 0)
                .into_iter()
                .map(|(c, _)| {
                    env.push((v.name.clone(), c));
                    let r = *go(body, env);
                    env.pop();
                    r
                })
                .collect();
            if matches!(f, Formula::Forall(..)) {
                Prop::All(parts)
            } else {
                Prop::Any(parts)
            }
        }
    }
}

/// Every ground instance of the clauses, literals as (base position, sign).
pub fn expand_clauses(
    p: &Program,
    clauses: &[&WeightedClause],
    index: &HashMap<String, usize>,
) -> Vec<Vec<(usize, bool)>> {
    let sig = &p.signature;
    let mut out = Vec::new();
    for c in clauses {
        let mut bindings: Vec<Vec<String>> = vec![Vec::new()];
        for v in &c.vars {
            let ts = terms(sig, v.ty, 0);
            bindings = bindings
                .into_iter()
                .flat_map(|b| {
                    ts.iter().map(move |(t, _)| {
                        let mut b = b.clone();
                        b.push(t.clone());
                        b
                    })
                })
                .collect();
        }
        for b in &bindings {
            out.push(
                c.literals
                    .iter()
                    .map(|l| (index[&literal_atom(sig, l, b)], l.positive))
                    .collect(),
            );
        }
    }
    out
}

pub fn eval_ground_clauses(clauses: &[Vec<(usize, bool)>], world: u64) -> bool {
    clauses
        .iter()
        .all(|c| c.iter().any(|(i, pos)| (world >> i & 1 == 1) == *pos))
}

/// Random formula text over `P(t) Q(t) R(t, t) S(t, t) Z` with `t = {A, B}`.
pub struct FormulaGen<'a, R: Rng> {
    pub rng: &'a mut R,
    bound: Vec<String>,
    next: usize,
}

pub const FINITE_HEADER: &str =
    "type t = {A, B}\npredicate P(t)\npredicate Q(t)\npredicate R(t, t)\npredicate S(t, t)\npredicate Z\n";

impl<'a, R: Rng> FormulaGen<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        FormulaGen {
            rng,
            bound: Vec::new(),
            next: 0,
        }
    }

    fn term(&mut self) -> String {
        let k = self.rng.gen_range(0..self.bound.len() + 2);
        match k {
            0 => "A".into(),
            1 => "B".into(),
            _ => self.bound[k - 2].clone(),
        }
    }

    fn atom(&mut self) -> String {
        match self.rng.gen_range(0..5) {
            0 => format!("P({})", self.term()),
            1 => format!("Q({})", self.term()),
            2 => format!("R({}, {})", self.term(), self.term()),
            3 => format!("S({}, {})", self.term(), self.term()),
            _ => "Z".into(),
        }
    }

    pub fn formula(&mut self, depth: usize) -> String {
        self.bound.clear();
        self.next = 0;
        self.sub(depth)
    }

    fn sub(&mut self, depth: usize) -> String {
        if depth == 0 {
            return self.atom();
        }
        match self.rng.gen_range(0..9) {
            0 => format!("!({})", self.sub(depth - 1)),
            1 => format!("({}) & ({})", self.sub(depth - 1), self.sub(depth - 1)),
            2 | 3 => format!("({}) | ({})", self.sub(depth - 1), self.sub(depth - 1)),
            4 => format!("({}) => ({})", self.sub(depth - 1), self.sub(depth - 1)),
            5 => format!("({}) <=> ({})", self.sub(depth - 1), self.sub(depth - 1)),
            6 | 7 => {
                let q = if self.rng.gen_bool(0.5) { "forall" } else { "exists" };
                let v = format!("v{}", self.next);
                self.next += 1;
                self.bound.push(v.clone());
                let body = self.sub(depth - 1);
                self.bound.pop();
                format!("({q} {v}:t {body})")
            }
            _ => self.atom(),
        }
    }
}

pub const INFINITE_HEADER: &str = "type nat = infinite seed 0\nfunction s(nat) -> nat\n\
    predicate Q(nat, nat)\npredicate R(nat, nat)\n";

pub const TEMPLATES: [&str; 6] = [
    "forall x, y Q(x, y) <=> Q(s(x), y)",
    "forall x, y Q(x, y) <=> Q(x, s(y))",
    "forall x, y Q(x, y) & R(x, y) => R(s(x), y)",
    "forall x, y Q(x, y)",
    "forall x, y !Q(x, y) | R(x, s(y))",
    "forall x, y R(x, y) <=> !Q(y, x)",
];

pub fn finite_program(rng: &mut ChaCha8Rng) -> String {
    let mut text = String::from(FINITE_HEADER);
    for _ in 0..rng.gen_range(1..4) {
        let depth = rng.gen_range(1..3);
        let f = FormulaGen::new(rng).formula(depth);
        let w: f64 = rng.gen_range(-2.0..2.0);
        text.push_str(&format!("{w} {f}\n"));
    }
    text
}

pub fn infinite_program(rng: &mut ChaCha8Rng) -> String {
    let mut text = String::from(INFINITE_HEADER);
    for t in TEMPLATES {
        if rng.gen_bool(0.6) {
            let w: f64 = rng.gen_range(-2.0..2.0);
            text.push_str(&format!("{w} {t}\n"));
        }
    }
    text
}

pub fn infinite_atoms() -> Vec<String> {
    let terms = ["0", "s(0)", "s(s(0))"];
    let mut out = Vec::new();
    for p in ["Q", "R"] {
        for a in terms {
            for b in terms {
                out.push(format!("{p}({a}, {b})"));
            }
        }
    }
    out
}

pub struct Case {
    pub program: Program,
    pub x: Vec<String>,
    pub y: BTreeMap<String, bool>,
}

/// A random program, volume of at most 12 atoms and boundary assignment.
pub fn random_case(seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let finite = rng.gen_bool(0.5);
    let text = if finite {
        finite_program(&mut rng)
    } else {
        infinite_program(&mut rng)
    };
    let program = Program::from_text(&text).expect("generated programs compile");
    let mut pool = if finite {
        finite_base(&program)
    } else {
        infinite_atoms()
    };
    pool.shuffle(&mut rng);
    let size = rng.gen_range(1..=12);
    let x: Vec<String> = pool.into_iter().take(size).collect();
    let all = ground_all(&program, if finite { 0 } else { 2 });
    let rel = relevant(&all, &x);
    let y = boundary_of(&rel, &x)
        .into_iter()
        .map(|a| (a, rng.gen_bool(0.5)))
        .collect();
    Case { program, x, y }
}
