use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::syntax::{Concept, Gci, Name, Tbox};

/// Operand of a normalized axiom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Top,
    Bottom,
    Name(Name),
}

impl Atom {
    pub fn to_concept(&self) -> Concept {
        match self {
            Atom::Top => Concept::Top,
            Atom::Bottom => Concept::Bottom,
            Atom::Name(n) => Concept::Name(n.clone()),
        }
    }

    fn of(c: &Concept) -> Option<Atom> {
        match c {
            Concept::Top => Some(Atom::Top),
            Concept::Bottom => Some(Atom::Bottom),
            Concept::Name(n) => Some(Atom::Name(n.clone())),
            _ => None,
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_concept())
    }
}

/// A GCI in one of the four normal forms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum NormalAxiom {
    /// `A ⊑ B`
    Sub(Atom, Atom),
    /// `A1 ⊓ A2 ⊑ B`
    Conj(Atom, Atom, Atom),
    /// `A ⊑ ∃r.B`
    ExistsRight(Atom, Name, Atom),
    /// `∃r.A ⊑ B`
    ExistsLeft(Name, Atom, Atom),
}

impl NormalAxiom {
    pub fn to_gci(&self) -> Gci {
        match self {
            NormalAxiom::Sub(a, b) => Gci::new(a.to_concept(), b.to_concept()),
            NormalAxiom::Conj(a1, a2, b) => Gci::new(Concept::and(a1.to_concept(), a2.to_concept()), b.to_concept()),
            NormalAxiom::ExistsRight(a, r, b) => {
                Gci::new(a.to_concept(), Concept::Exists(r.clone(), Box::new(b.to_concept())))
            }
            NormalAxiom::ExistsLeft(r, a, b) => {
                Gci::new(Concept::Exists(r.clone(), Box::new(a.to_concept())), b.to_concept())
            }
        }
    }
}

/// A TBox in normal form together with the definitions of the fresh names
/// introduced to get there.
///
/// Fresh names start with `_`, which the text format never produces, so
/// they cannot collide with user names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizedTbox {
    pub axioms: BTreeSet<NormalAxiom>,
    pub defs: BTreeMap<Name, Concept>,
}

impl NormalizedTbox {
    pub fn gcis(&self) -> Tbox {
        self.axioms.iter().map(NormalAxiom::to_gci).collect()
    }

    pub fn is_fresh(name: &Name) -> bool {
        name.as_str().starts_with('_')
    }
}

#[derive(Default)]
struct Normalizer {
    out: NormalizedTbox,
    fresh: HashMap<Concept, Name>,
    // directions already emitted for a fresh name: (C ⊑ X, X ⊑ C)
    emitted: HashMap<Name, (bool, bool)>,
}

impl Normalizer {
    fn fresh_for(&mut self, c: &Concept) -> Name {
        if let Some(n) = self.fresh.get(c) {
            return n.clone();
        }
        let n = Name::new(format!("_N{}", self.fresh.len() + 1));
        self.fresh.insert(c.clone(), n.clone());
        self.out.defs.insert(n.clone(), c.clone());
        n
    }

    fn emit(&mut self, ax: NormalAxiom) {
        let trivial = match &ax {
            NormalAxiom::Sub(a, b) => a == b || *a == Atom::Bottom || *b == Atom::Top,
            NormalAxiom::Conj(a1, a2, b) => {
                *b == Atom::Top || a1 == b || a2 == b || *a1 == Atom::Bottom || *a2 == Atom::Bottom
            }
            NormalAxiom::ExistsRight(a, _, _) => *a == Atom::Bottom,
            NormalAxiom::ExistsLeft(_, _, b) => *b == Atom::Top,
        };
        if !trivial {
            self.out.axioms.insert(ax);
        }
    }

    /// Atom standing for `c` on the left of an inclusion.
    fn lhs_atom(&mut self, c: &Concept) -> Atom {
        if let Some(a) = Atom::of(c) {
            return a;
        }
        let x = self.fresh_for(c);
        let done = self.emitted.entry(x.clone()).or_default();
        if !done.0 {
            done.0 = true;
            self.lhs(c, Atom::Name(x.clone()));
        }
        Atom::Name(x)
    }

    /// Atom standing for `c` on the right of an inclusion.
    fn rhs_atom(&mut self, c: &Concept) -> Atom {
        if let Some(a) = Atom::of(c) {
            return a;
        }
        let x = self.fresh_for(c);
        let done = self.emitted.entry(x.clone()).or_default();
        if !done.1 {
            done.1 = true;
            self.rhs(Atom::Name(x.clone()), c);
        }
        Atom::Name(x)
    }

    /// `c ⊑ b`
    fn lhs(&mut self, c: &Concept, b: Atom) {
        match c {
            Concept::Bottom => {}
            Concept::Top | Concept::Name(_) => self.emit(NormalAxiom::Sub(Atom::of(c).unwrap(), b)),
            Concept::And(l, r) => {
                let l = self.lhs_atom(l);
                let r = self.lhs_atom(r);
                self.emit(NormalAxiom::Conj(l, r, b));
            }
            Concept::Exists(role, filler) => {
                let f = self.lhs_atom(filler);
                self.emit(NormalAxiom::ExistsLeft(role.clone(), f, b));
            }
        }
    }

    /// `a ⊑ d`
    fn rhs(&mut self, a: Atom, d: &Concept) {
        match d {
            Concept::Top => {}
            Concept::Bottom | Concept::Name(_) => self.emit(NormalAxiom::Sub(a, Atom::of(d).unwrap())),
            Concept::And(l, r) => {
                self.rhs(a.clone(), l);
                self.rhs(a, r);
            }
            Concept::Exists(role, filler) => {
                let f = self.rhs_atom(filler);
                self.emit(NormalAxiom::ExistsRight(a, role.clone(), f));
            }
        }
    }

    fn gci(&mut self, g: &Gci) {
        match (&g.lhs, Atom::of(&g.rhs)) {
            (Concept::Bottom, _) | (_, Some(Atom::Top)) => {}
            (lhs, Some(b)) => self.lhs(lhs, b),
            (lhs, None) => {
                if let Concept::And(l, r) = &g.rhs {
                    self.gci(&Gci::new(lhs.clone(), (**l).clone()));
                    self.gci(&Gci::new(lhs.clone(), (**r).clone()));
                } else {
                    let a = self.lhs_atom(lhs);
                    self.rhs(a, &g.rhs);
                }
            }
        }
    }
}

/// Rewrites `tbox` into normal form. Each complex subconcept gets at most
/// one fresh name, and only the inclusion directions actually needed are
/// emitted, so the result is a conservative extension of the input.
pub fn normalize(tbox: &Tbox) -> NormalizedTbox {
    let mut n = Normalizer::default();
    for g in tbox {
        n.gci(g);
    }
    n.out
}
