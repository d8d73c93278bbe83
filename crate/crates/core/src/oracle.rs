//! Brute-force checkers, kept apart from the saturation engine.
//!
//! Entailment under the empty TBox and the bounded chase never call the
//! reasoner. Subset enumeration uses the reasoner's consistency test only.

use std::collections::{BTreeMap, BTreeSet};

use crate::reasoner::Reasoner;
use crate::repair::{Justification, Repair};
use crate::syntax::{signature, Abox, Assertion, Concept, Name, NodeId, Tbox};

/// Largest ABox the subset oracles accept.
pub const DEFAULT_BOUND: usize = 12;

/// A finite structure: named and anonymous elements with name labels and
/// role edges.
#[derive(Clone, Debug, Default)]
struct Structure {
    index: BTreeMap<NodeId, usize>,
    labels: Vec<BTreeSet<Name>>,
    edges: Vec<BTreeSet<(Name, usize)>>,
    bottom: bool,
}

impl Structure {
    fn element(&mut self, x: &NodeId) -> usize {
        if let Some(&i) = self.index.get(x) {
            return i;
        }
        let i = self.fresh();
        self.index.insert(x.clone(), i);
        i
    }

    fn fresh(&mut self) -> usize {
        self.labels.push(BTreeSet::new());
        self.edges.push(BTreeSet::new());
        self.labels.len() - 1
    }

    /// Makes `c` hold at `e`, creating witnesses for existentials that are
    /// not yet satisfied. Returns whether anything changed.
    fn realize(&mut self, c: &Concept, e: usize) -> bool {
        match c {
            Concept::Top => false,
            Concept::Bottom => !std::mem::replace(&mut self.bottom, true),
            Concept::Name(n) => self.labels[e].insert(n.clone()),
            Concept::And(l, r) => {
                let a = self.realize(l, e);
                self.realize(r, e) || a
            }
            Concept::Exists(r, f) => {
                if self.satisfies(c, e) {
                    return false;
                }
                let z = self.fresh();
                self.edges[e].insert((r.clone(), z));
                self.realize(f, z);
                true
            }
        }
    }

    fn satisfies(&self, c: &Concept, e: usize) -> bool {
        match c {
            Concept::Top => true,
            Concept::Bottom => false,
            Concept::Name(n) => self.labels[e].contains(n),
            Concept::And(l, r) => self.satisfies(l, e) && self.satisfies(r, e),
            Concept::Exists(r, f) => self.edges[e].iter().any(|(r2, z)| r2 == r && self.satisfies(f, *z)),
        }
    }

    fn of_abox(abox: &Abox) -> Structure {
        let mut s = Structure::default();
        for a in abox {
            match a {
                Assertion::Concept(c, x) => {
                    let e = s.element(x);
                    s.realize(c, e);
                }
                Assertion::Role(r, x, y) => {
                    let (ex, ey) = (s.element(x), s.element(y));
                    s.edges[ex].insert((r.clone(), ey));
                }
            }
        }
        s
    }
}

/// Assignment of query positions to structure elements witnessing a match.
/// Positions are paths into the query concept: each step picks the left
/// (0) or right (1) side of a conjunction, or enters an existential (0).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchAssignment {
    pub positions: BTreeMap<Vec<u8>, usize>,
}

fn find_match(s: &Structure, c: &Concept, e: usize, path: &mut Vec<u8>, m: &mut MatchAssignment) -> bool {
    m.positions.insert(path.clone(), e);
    let ok = match c {
        Concept::Top => true,
        Concept::Bottom => false,
        Concept::Name(n) => s.labels[e].contains(n),
        Concept::And(l, r) => {
            path.push(0);
            let a = find_match(s, l, e, path, m);
            path.pop();
            path.push(1);
            let b = a && find_match(s, r, e, path, m);
            path.pop();
            b
        }
        Concept::Exists(r, f) => {
            path.push(0);
            let found = s.edges[e].iter().filter(|(r2, _)| r2 == r).any(|(_, z)| {
                let mut trial = m.clone();
                if find_match(s, f, *z, path, &mut trial) {
                    *m = trial;
                    true
                } else {
                    false
                }
            });
            path.pop();
            found
        }
    };
    if !ok {
        m.positions.retain(|p, _| !p.starts_with(path));
    }
    ok
}

/// A witness that `⟨∅, abox⟩ ⊨ c(x)`, if one exists in the ABox itself.
pub fn concept_match(abox: &Abox, c: &Concept, x: &NodeId) -> Option<MatchAssignment> {
    let mut s = Structure::of_abox(abox);
    let e = s.element(x);
    let mut m = MatchAssignment::default();
    find_match(&s, c, e, &mut Vec::new(), &mut m).then_some(m)
}

/// `⟨∅, abox⟩ ⊨ a`, decided by matching `a` into the ABox.
pub fn empty_tbox_entails(abox: &Abox, a: &Assertion) -> bool {
    let s = Structure::of_abox(abox);
    if s.bottom {
        return true;
    }
    match a {
        Assertion::Role(..) => abox.contains(a),
        Assertion::Concept(c, x) => match s.index.get(x) {
            Some(&e) => s.satisfies(c, e),
            None => {
                let mut s = s;
                let e = s.fresh();
                s.satisfies(c, e)
            }
        },
    }
}

/// Decides consistency of `⟨tbox, abox⟩` by a restricted chase. `None`
/// when the TBox has a cyclic name dependency or the chase exceeds its
/// budget.
pub fn chase_is_consistent(tbox: &Tbox, abox: &Abox) -> Option<bool> {
    const MAX_ELEMENTS: usize = 5000;
    if has_cycle(tbox) {
        return None;
    }
    let mut s = Structure::of_abox(abox);
    if s.labels.is_empty() {
        s.fresh();
    }
    loop {
        if s.bottom {
            return Some(false);
        }
        let mut changed = false;
        let mut e = 0;
        while e < s.labels.len() {
            for g in tbox {
                if s.satisfies(&g.lhs, e) {
                    changed |= s.realize(&g.rhs, e);
                }
            }
            if s.labels.len() > MAX_ELEMENTS {
                return None;
            }
            e += 1;
        }
        if !changed {
            return Some(!s.bottom);
        }
    }
}

fn has_cycle(tbox: &Tbox) -> bool {
    let mut deps: BTreeMap<Option<Name>, BTreeSet<Option<Name>>> = BTreeMap::new();
    for g in tbox {
        let lhs = signature(&g.lhs).concept_names;
        let rhs = signature(&g.rhs).concept_names;
        // a name-free left side fires everywhere, so it depends on anything
        let sources: Vec<Option<Name>> = if lhs.is_empty() { vec![None] } else { lhs.into_iter().map(Some).collect() };
        for s in sources {
            let targets = deps.entry(s).or_default();
            targets.extend(rhs.iter().cloned().map(Some));
            if matches!(g.rhs, Concept::Exists(..)) || g.rhs.conjuncts().iter().any(|c| matches!(c, Concept::Exists(..))) {
                targets.insert(None);
            }
        }
    }
    fn visit(
        n: &Option<Name>,
        deps: &BTreeMap<Option<Name>, BTreeSet<Option<Name>>>,
        state: &mut BTreeMap<Option<Name>, u8>,
    ) -> bool {
        match state.get(n) {
            Some(1) => return true,
            Some(_) => return false,
            None => {}
        }
        state.insert(n.clone(), 1);
        let cyclic = deps.get(n).is_some_and(|ts| ts.iter().any(|t| visit(t, deps, state)));
        state.insert(n.clone(), 2);
        cyclic
    }
    let mut state = BTreeMap::new();
    deps.keys().any(|n| visit(n, &deps, &mut state))
}

/// Subsets of `items` as bit masks, in increasing size.
fn masks_by_size(len: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (0..(1u32 << len)).collect();
    all.sort_by_key(|m| (m.count_ones(), *m));
    all
}

fn pick<T: Clone + Ord>(items: &[T], mask: u32) -> BTreeSet<T> {
    items.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, x)| x.clone()).collect()
}

/// All minimal `J ⊆ a` with `⟨tbox, J ∪ n⟩` inconsistent, by enumerating
/// every subset. `None` when `a` exceeds `bound`.
pub fn brute_force_justifications(tbox: &Tbox, a: &Abox, n: &Abox, bound: usize) -> Option<BTreeSet<Justification>> {
    if a.len() > bound.min(31) {
        return None;
    }
    let r = Reasoner::new(tbox);
    let items: Vec<Assertion> = a.iter().cloned().collect();
    let mut minimal: Vec<u32> = Vec::new();
    for m in masks_by_size(items.len()) {
        if minimal.iter().any(|j| j & m == *j) {
            continue;
        }
        if !r.is_consistent_iter(pick(&items, m).iter().chain(n.iter())) {
            minimal.push(m);
        }
    }
    Some(minimal.into_iter().map(|m| pick(&items, m)).collect())
}

/// All subsets of the union of the justifications meeting each in exactly
/// one assertion, by enumeration. `None` when out of bounds.
pub fn brute_force_repairs(tbox: &Tbox, a: &Abox, n: &Abox, bound: usize) -> Option<BTreeSet<Repair>> {
    let js = brute_force_justifications(tbox, a, n, bound)?;
    Some(repairs_of(&js))
}

/// Exactly-one hitting sets of a justification family, by enumeration.
pub fn repairs_of<T: Clone + Ord>(js: &BTreeSet<BTreeSet<T>>) -> BTreeSet<BTreeSet<T>> {
    let universe: Vec<T> = js.iter().flatten().cloned().collect::<BTreeSet<T>>().into_iter().collect();
    if js.is_empty() || universe.len() > 31 {
        return BTreeSet::new();
    }
    (0..(1u32 << universe.len()))
        .map(|m| pick(&universe, m))
        .filter(|r| js.iter().all(|j| j.intersection(r).count() == 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_assertion, parse_kb};

    const T1: &str = "A SubClassOf (some R. A).\nA SubClassOf C.\n(E and (some R. A)) SubClassOf Bottom.\n";
    const AG: &str = "assert A(a).\nassert C(a).\nassert R(a, ?x1).\nassert A(?x1).\nassert C(?x1).\nassert R(?x1, ?x2).\nassert A(?x2).\nassert C(?x2).\n";

    fn abox(text: &str) -> Abox {
        parse_kb(text).unwrap().abox
    }
    fn q(text: &str) -> Assertion {
        parse_assertion(text).unwrap()
    }

    #[test]
    fn matching_into_the_chain() {
        assert!(empty_tbox_entails(&abox(AG), &q("(some R. (C and (some R. A)))(a)")));
        assert!(!empty_tbox_entails(&abox(AG), &q("(some R. (some R. (some R. A)))(a)")));
        assert!(empty_tbox_entails(&abox("assert A(a)."), &q("Top(a)")));
        assert!(!empty_tbox_entails(&abox("assert A(a)."), &q("(some R. A)(a)")));
        assert!(empty_tbox_entails(&abox("assert A(a)."), &q("Top(b)")));
        assert!(empty_tbox_entails(&abox("assert (some R. (A and B))(a)."), &q("(some R. B)(a)")));
        assert!(empty_tbox_entails(&abox("assert Bottom(a)."), &q("B(c)")));
    }

    #[test]
    fn match_assignment_records_witnesses() {
        let m = concept_match(&abox(AG), &Concept::exists("R", Concept::exists("R", Concept::name("A"))), &NodeId::individual("a")).unwrap();
        assert_eq!(m.positions.len(), 3);
        assert!(concept_match(&abox(AG), &Concept::name("E"), &NodeId::individual("a")).is_none());
    }

    #[test]
    fn worked_example_by_enumeration() {
        let t = parse_kb(T1).unwrap().tbox;
        let js = brute_force_justifications(&t, &abox(AG), &abox("assert E(a)."), DEFAULT_BOUND).unwrap();
        let expected: BTreeSet<Abox> =
            [abox("assert A(a)."), abox("assert R(a, ?x1).\nassert A(?x1).")].into_iter().collect();
        assert_eq!(js, expected);
        let rs = brute_force_repairs(&t, &abox(AG), &abox("assert E(a)."), DEFAULT_BOUND).unwrap();
        let expected: BTreeSet<Abox> =
            [abox("assert A(a).\nassert A(?x1)."), abox("assert A(a).\nassert R(a, ?x1).")].into_iter().collect();
        assert_eq!(rs, expected);
    }

    #[test]
    fn enumeration_edge_cases() {
        let t = parse_kb(T1).unwrap().tbox;
        assert!(brute_force_justifications(&t, &abox("assert C(a)."), &abox("assert E(a)."), 12).unwrap().is_empty());
        let big: Abox = (0..13).map(|i| Assertion::concept(Concept::name("A"), NodeId::individual(format!("a{i}")))).collect();
        assert!(brute_force_justifications(&t, &big, &Abox::new(), DEFAULT_BOUND).is_none());
        let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<BTreeSet<String>>();
        let single: BTreeSet<BTreeSet<String>> = [s(&["p", "q"])].into_iter().collect();
        assert_eq!(repairs_of(&single), [s(&["p"]), s(&["q"])].into_iter().collect());
        let triangle: BTreeSet<BTreeSet<String>> = [s(&["a", "b"]), s(&["b", "c"]), s(&["a", "c"])].into_iter().collect();
        assert!(repairs_of(&triangle).is_empty());
    }

    #[test]
    fn chase_decides_acyclic_cases() {
        let cancer = parse_kb("Tamoxifen SubClassOf Anti-oestrogen.\nTamoxifen SubClassOf (some metabolizedTo. (Compounds and (some bindto. OestrogenReceptor))).\n((some hasGene. CYP2D6) and (some TreatBy. Tamoxifen)) SubClassOf Bottom.").unwrap().tbox;
        let bad = abox("assert TreatBy(Mary, y).\nassert Tamoxifen(y).\nassert (some hasGene. CYP2D6)(Mary).");
        assert_eq!(chase_is_consistent(&cancer, &bad), Some(false));
        let ok = abox("assert TreatBy(Mary, y).\nassert Tamoxifen(y).");
        assert_eq!(chase_is_consistent(&cancer, &ok), Some(true));
        assert_eq!(chase_is_consistent(&parse_kb(T1).unwrap().tbox, &abox("assert A(a).")), None);
        assert_eq!(chase_is_consistent(&parse_kb("Top SubClassOf Bottom.").unwrap().tbox, &Abox::new()), Some(false));
    }
}
