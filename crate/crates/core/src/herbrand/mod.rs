//! The Herbrand universe and base, represented lazily.
//!
//! Ground terms and atoms are hash-consed into a [`Herbrand`] table: two
//! terms are equal iff they have the same head and the same arguments, which
//! is the free-constructor equality of Herbrand interpretations. Ids are
//! assigned on first internment and stay stable for the lifetime of the
//! table. Insertions need `&mut self`; everything else works on `&self`, so
//! a finished table can be shared between readers.

mod determinacy;
mod grounding;
mod universe;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use hashbrown::HashMap;

pub use determinacy::{check_sigma_determinate, ClauseDeterminacy, DeterminacyReport};
pub use grounding::{GroundClause, GroundLiteral};
pub(crate) use universe::for_each_tuple;

use crate::error::{Error, Result};
use crate::logic::{parse_ground_atom, ConstId, FuncId, PredId, Program, Signature, Term, TypeId};

/// Default cap on the number of terms a single enumeration may produce.
pub const DEFAULT_TERM_LIMIT: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Const(ConstId),
    Func(FuncId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTerm {
    pub head: Head,
    pub args: Vec<TermId>,
    /// 0 for constants, otherwise one more than the deepest argument.
    pub depth: u32,
    pub ty: TypeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundAtom {
    pub pred: PredId,
    pub args: Vec<TermId>,
    /// Deepest argument depth; 0 for nullary atoms.
    pub depth: u32,
}

/// Intern table for one compiled program.
#[derive(Clone, Debug)]
pub struct Herbrand {
    program: Program,
    determinacy: DeterminacyReport,
    terms: Vec<GroundTerm>,
    term_index: HashMap<(Head, Vec<TermId>), TermId>,
    atoms: Vec<GroundAtom>,
    atom_index: HashMap<(PredId, Vec<TermId>), AtomId>,
    /// Per type, terms grouped by exact depth.
    levels: BTreeMap<TypeId, Vec<Vec<TermId>>>,
    term_limit: usize,
}

impl Herbrand {
    /// Wraps a compiled program.
    pub fn new(program: Program) -> Result<Self> {
        if !program.is_compiled() {
            return Err(Error::NotCompiled);
        }
        let determinacy = check_sigma_determinate(&program);
        Ok(Herbrand {
            program,
            determinacy,
            terms: Vec::new(),
            term_index: HashMap::new(),
            atoms: Vec::new(),
            atom_index: HashMap::new(),
            levels: BTreeMap::new(),
            term_limit: DEFAULT_TERM_LIMIT,
        })
    }

    pub fn with_term_limit(mut self, limit: usize) -> Self {
        self.term_limit = limit;
        self
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn signature(&self) -> &Signature {
        &self.program.signature
    }

    pub fn determinacy(&self) -> &DeterminacyReport {
        &self.determinacy
    }

    pub fn term(&self, id: TermId) -> &GroundTerm {
        &self.terms[id.index()]
    }

    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id.index()]
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn intern_term(&mut self, head: Head, args: Vec<TermId>) -> TermId {
        if let Some(id) = self.term_index.get(&(head, args.clone())) {
            return *id;
        }
        let sig = &self.program.signature;
        let (depth, ty) = match head {
            Head::Const(c) => (0, sig.constant(c).ty),
            Head::Func(f) => (
                1 + args.iter().map(|a| self.terms[a.index()].depth).max().unwrap_or(0),
                sig.function(f).ret,
            ),
        };
        let id = TermId(self.terms.len() as u32);
        self.terms.push(GroundTerm {
            head,
            args: args.clone(),
            depth,
            ty,
        });
        self.term_index.insert((head, args), id);
        id
    }

    pub fn constant(&mut self, c: ConstId) -> TermId {
        self.intern_term(Head::Const(c), Vec::new())
    }

    pub fn intern_atom(&mut self, pred: PredId, args: Vec<TermId>) -> AtomId {
        if let Some(id) = self.atom_index.get(&(pred, args.clone())) {
            return *id;
        }
        let depth = args.iter().map(|a| self.terms[a.index()].depth).max().unwrap_or(0);
        let id = AtomId(self.atoms.len() as u32);
        self.atoms.push(GroundAtom {
            pred,
            args: args.clone(),
            depth,
        });
        self.atom_index.insert((pred, args), id);
        id
    }

    /// Looks up an atom without interning it.
    pub fn find_atom(&self, pred: PredId, args: &[TermId]) -> Option<AtomId> {
        self.atom_index.get(&(pred, args.to_vec())).copied()
    }

    /// Interns a ground syntax term.
    pub fn ground_term(&mut self, t: &Term) -> Result<TermId> {
        match t {
            Term::Var(v) => Err(Error::InvalidArgument(alloc::format!("term has variable `{v}`"))),
            Term::Const(c) => Ok(self.constant(*c)),
            Term::App(f, args) => {
                let args = args.iter().map(|a| self.ground_term(a)).collect::<Result<Vec<_>>>()?;
                Ok(self.intern_term(Head::Func(*f), args))
            }
        }
    }

    /// Parses and interns a ground atom such as `Q(s(0), 0)`.
    pub fn parse_atom(&mut self, text: &str) -> Result<AtomId> {
        let atom = parse_ground_atom(&self.program.signature, text)?;
        let args = atom
            .args
            .iter()
            .map(|a| self.ground_term(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.intern_atom(atom.pred, args))
    }

    pub fn write_term(&self, out: &mut String, id: TermId) {
        let sig = &self.program.signature;
        let t = self.term(id);
        match t.head {
            Head::Const(c) => out.push_str(&sig.constant(c).name),
            Head::Func(f) => {
                out.push_str(&sig.function(f).name);
                out.push('(');
                for (i, a) in t.args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.write_term(out, *a);
                }
                out.push(')');
            }
        }
    }

    pub fn term_name(&self, id: TermId) -> String {
        let mut s = String::new();
        self.write_term(&mut s, id);
        s
    }

    /// Printed form, which [`Herbrand::parse_atom`] reads back to the same id.
    pub fn atom_name(&self, id: AtomId) -> String {
        let a = self.atom(id);
        let mut s = String::new();
        let _ = write!(s, "{}", self.program.signature.predicate(a.pred).name);
        if !a.args.is_empty() {
            s.push('(');
            for (i, t) in a.args.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                self.write_term(&mut s, *t);
            }
            s.push(')');
        }
        s
    }

    fn require_determinate(&self) -> Result<()> {
        if self.determinacy.sigma_determinate {
            Ok(())
        } else {
            Err(Error::NotSigmaDeterminate {
                clauses: self.determinacy.violating_clauses(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn herbrand(text: &str) -> Herbrand {
        Herbrand::new(Program::from_text(text).unwrap()).unwrap()
    }

    const LATTICE: &str = "type nat = infinite seed 0\nfunction s(nat) -> nat\npredicate Q(nat, nat)\n\
        1 forall x, y Q(x, y) <=> Q(s(x), y)\n1 forall x, y Q(x, y) <=> Q(x, s(y))\n";

    fn names(h: &Herbrand, atoms: impl IntoIterator<Item = AtomId>) -> Vec<String> {
        atoms.into_iter().map(|a| h.atom_name(a)).collect()
    }

    #[test]
    fn uncompiled_program_refused() {
        let p = crate::logic::parse_program("predicate P\n1 P\n").unwrap();
        assert!(matches!(Herbrand::new(p), Err(Error::NotCompiled)));
    }

    #[test]
    fn universe_of_one_function() {
        let mut h = herbrand("type u = infinite seed A\nfunction f(u) -> u\npredicate P(u)\n");
        let ty = h.signature().type_id("u").unwrap();
        let terms = h.enumerate_universe(ty, 2).unwrap();
        let shown: Vec<_> = terms.iter().map(|t| h.term_name(*t)).collect();
        assert_eq!(shown, ["A", "f(A)", "f(f(A))"]);
        // Enumerating again interns nothing new.
        let before = h.terms.len();
        assert_eq!(h.enumerate_universe(ty, 2).unwrap(), terms);
        assert_eq!(h.terms.len(), before);
    }

    #[test]
    fn universe_of_two_functions() {
        let mut h =
            herbrand("type nat = infinite seed 0\nfunction s(nat) -> nat\nfunction t(nat) -> nat\npredicate P(nat)\n");
        let ty = h.signature().type_id("nat").unwrap();
        assert_eq!(h.enumerate_universe(ty, 2).unwrap().len(), 7);
        assert_eq!(h.enumerate_universe(ty, 3).unwrap().len(), 15);
    }

    #[test]
    fn finite_universe_ignores_depth() {
        let mut h = herbrand("type person = {Anna, Bob}\npredicate P(person)\n");
        let ty = h.signature().type_id("person").unwrap();
        assert_eq!(h.enumerate_universe(ty, 5).unwrap().len(), 2);
    }

    #[test]
    fn binary_function_universe() {
        let mut h = herbrand("type u = infinite seed A\nfunction g(u, u) -> u\npredicate P(u)\n");
        let ty = h.signature().type_id("u").unwrap();
        // 1, then g(A,A), then the 9 - 1 pairs of depth-1-or-less terms with a depth-1 member.
        assert_eq!(h.enumerate_universe(ty, 2).unwrap().len(), 1 + 1 + 3);
    }

    #[test]
    fn atom_names_round_trip() {
        let mut h = herbrand(LATTICE);
        let a = h.parse_atom("Q(s(s(0)), 0)").unwrap();
        assert_eq!(h.atom_name(a), "Q(s(s(0)), 0)");
        assert_eq!(h.parse_atom(&h.atom_name(a)).unwrap(), a);
        assert_eq!(h.atom(a).depth, 2);
    }

    #[test]
    fn determinacy_examples() {
        let h = herbrand(
            "type nat = infinite seed 0\nfunction f(nat) -> nat\nfunction g(nat, nat) -> nat\n\
             predicate Q(nat, nat)\npredicate R(nat, nat)\n1 forall x, y Q(x, y) => R(f(x), g(x, y))\n",
        );
        assert!(h.determinacy().sigma_determinate);

        let h = herbrand("type nat = infinite seed 0\npredicate P(nat)\npredicate Q(nat)\n1 forall x, y P(x) | Q(y)\n");
        let d = h.determinacy();
        assert!(!d.sigma_determinate);
        assert_eq!(d.clauses[0].violating, vec!["x".to_string(), "y".to_string()]);

        let h = herbrand(
            "type person = {A, B}\ntype nat = infinite seed 0\npredicate Loves(person, nat)\n\
             1 forall x:nat Loves(A, x) | Loves(B, x)\n",
        );
        assert!(h.determinacy().sigma_determinate);
    }

    #[test]
    fn grounding_refused_without_determinacy() {
        let mut h =
            herbrand("type nat = infinite seed 0\npredicate P(nat)\npredicate Q(nat)\n1 forall x, y P(x) | Q(y)\n");
        let a = h.parse_atom("P(0)").unwrap();
        assert!(matches!(
            h.ground_clauses_containing(a),
            Err(Error::NotSigmaDeterminate { ref clauses }) if clauses == &[0]
        ));
    }

    #[test]
    fn lattice_interior_and_corner() {
        let mut h = herbrand(LATTICE);
        let c = h.parse_atom("Q(s(0), s(0))").unwrap();
        assert_eq!(h.ground_clauses_containing(c).unwrap().len(), 8);
        let n = h.neighbors(c).unwrap();
        let mut shown = names(&h, n);
        shown.sort();
        assert_eq!(
            shown,
            ["Q(0, s(0))", "Q(s(0), 0)", "Q(s(0), s(s(0)))", "Q(s(s(0)), s(0))"]
        );

        let corner = h.parse_atom("Q(0, 0)").unwrap();
        assert_eq!(h.ground_clauses_containing(corner).unwrap().len(), 4);
        assert_eq!(h.neighbors(corner).unwrap().len(), 2);
    }

    #[test]
    fn unit_clause_grounding() {
        let mut h = herbrand("type nat = infinite seed 0\nfunction s(nat) -> nat\npredicate P(nat)\n1 forall x P(x)\n");
        let a = h.parse_atom("P(s(s(0)))").unwrap();
        let gc = h.ground_clauses_containing(a).unwrap();
        assert_eq!(gc.len(), 1);
        assert!(h.neighbors(a).unwrap().is_empty());
    }

    #[test]
    fn finite_variables_enumerated() {
        let mut h = herbrand(
            "type person = {Anna, Bob}\ntype nat = infinite seed 0\npredicate Likes(person, nat)\npredicate Q(nat)\n\
             1 forall p:person, x:nat Likes(p, x) => Q(x)\n",
        );
        let q = h.parse_atom("Q(0)").unwrap();
        let gc = h.ground_clauses_containing(q).unwrap();
        assert_eq!(gc.len(), 2);
        assert!(gc.iter().all(|c| c.contains(q)));
        let bound = h.determinacy().ground_clause_bound;
        assert!(gc.len() <= bound);
    }

    #[test]
    fn binding_reproduces_clause() {
        let mut h = herbrand(LATTICE);
        let c = h.parse_atom("Q(s(s(0)), s(0))").unwrap();
        for gc in h.ground_clauses_containing(c).unwrap() {
            let again = h.instantiate_clause(gc.source, &gc.binding.clone());
            assert_eq!(again, gc);
        }
    }
}
