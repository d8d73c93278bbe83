use std::collections::BTreeSet;

use super::concept::{Assertion, Concept, Gci, Name, NodeId};

pub type Tbox = BTreeSet<Gci>;
pub type Abox = BTreeSet<Assertion>;

/// A TBox paired with an ABox.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub tbox: Tbox,
    pub abox: Abox,
}

impl KnowledgeBase {
    pub fn new(tbox: Tbox, abox: Abox) -> Self {
        KnowledgeBase { tbox, abox }
    }

    pub fn is_empty(&self) -> bool {
        self.tbox.is_empty() && self.abox.is_empty()
    }

    /// Individual names occurring in the ABox (variables excluded).
    pub fn individuals(&self) -> BTreeSet<Name> {
        signature(&self.abox).node_names
    }
}

/// Concept, role and individual names occurring in a syntactic object.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub concept_names: BTreeSet<Name>,
    pub role_names: BTreeSet<Name>,
    pub node_names: BTreeSet<Name>,
}

impl Signature {
    pub fn union(mut self, other: Signature) -> Signature {
        self.concept_names.extend(other.concept_names);
        self.role_names.extend(other.role_names);
        self.node_names.extend(other.node_names);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.concept_names.is_empty() && self.role_names.is_empty() && self.node_names.is_empty()
    }

    pub fn contains(&self, other: &Signature) -> bool {
        other.concept_names.is_subset(&self.concept_names)
            && other.role_names.is_subset(&self.role_names)
            && other.node_names.is_subset(&self.node_names)
    }
}

/// Anything built from concepts, roles and nodes.
pub trait Syntax {
    /// Visits every top-level concept (not its subterms).
    fn for_each_concept<'a>(&'a self, f: &mut dyn FnMut(&'a Concept));
    /// Visits role names used in role assertions.
    fn for_each_asserted_role<'a>(&'a self, _f: &mut dyn FnMut(&'a Name)) {}
    fn for_each_node<'a>(&'a self, _f: &mut dyn FnMut(&'a NodeId)) {}
}

impl Syntax for Concept {
    fn for_each_concept<'a>(&'a self, f: &mut dyn FnMut(&'a Concept)) {
        f(self)
    }
}

impl Syntax for Gci {
    fn for_each_concept<'a>(&'a self, f: &mut dyn FnMut(&'a Concept)) {
        f(&self.lhs);
        f(&self.rhs);
    }
}

impl Syntax for Assertion {
    fn for_each_concept<'a>(&'a self, f: &mut dyn FnMut(&'a Concept)) {
        if let Assertion::Concept(c, _) = self {
            f(c)
        }
    }

    fn for_each_asserted_role<'a>(&'a self, f: &mut dyn FnMut(&'a Name)) {
        if let Assertion::Role(r, _, _) = self {
            f(r)
        }
    }

    fn for_each_node<'a>(&'a self, f: &mut dyn FnMut(&'a NodeId)) {
        for n in self.nodes() {
            f(n)
        }
    }
}

impl<T: Syntax> Syntax for BTreeSet<T> {
    fn for_each_concept<'a>(&'a self, f: &mut dyn FnMut(&'a Concept)) {
        self.iter().for_each(|x| x.for_each_concept(f))
    }
    fn for_each_asserted_role<'a>(&'a self, f: &mut dyn FnMut(&'a Name)) {
        self.iter().for_each(|x| x.for_each_asserted_role(f))
    }
    fn for_each_node<'a>(&'a self, f: &mut dyn FnMut(&'a NodeId)) {
        self.iter().for_each(|x| x.for_each_node(f))
    }
}

impl<T: Syntax> Syntax for [T] {
    fn for_each_concept<'a>(&'a self, f: &mut dyn FnMut(&'a Concept)) {
        self.iter().for_each(|x| x.for_each_concept(f))
    }
    fn for_each_asserted_role<'a>(&'a self, f: &mut dyn FnMut(&'a Name)) {
        self.iter().for_each(|x| x.for_each_asserted_role(f))
    }
    fn for_each_node<'a>(&'a self, f: &mut dyn FnMut(&'a NodeId)) {
        self.iter().for_each(|x| x.for_each_node(f))
    }
}

impl Syntax for KnowledgeBase {
    fn for_each_concept<'a>(&'a self, f: &mut dyn FnMut(&'a Concept)) {
        self.tbox.for_each_concept(f);
        self.abox.for_each_concept(f);
    }
    fn for_each_asserted_role<'a>(&'a self, f: &mut dyn FnMut(&'a Name)) {
        self.abox.for_each_asserted_role(f)
    }
    fn for_each_node<'a>(&'a self, f: &mut dyn FnMut(&'a NodeId)) {
        self.abox.for_each_node(f)
    }
}

/// Maximum role depth over all subconcepts; 0 for empty containers.
pub fn depth<X: Syntax + ?Sized>(x: &X) -> usize {
    let mut d = 0;
    x.for_each_concept(&mut |c| d = d.max(c.role_depth()));
    d
}

/// The syntactic closure of `x`'s concepts under subterms.
pub fn subconcepts<X: Syntax + ?Sized>(x: &X) -> BTreeSet<Concept> {
    let mut out = BTreeSet::new();
    x.for_each_concept(&mut |c| {
        c.walk(&mut |s| {
            out.insert(s.clone());
        })
    });
    out
}

/// Names occurring in `x`. Variables are not names and are left out.
pub fn signature<X: Syntax + ?Sized>(x: &X) -> Signature {
    let mut sig = Signature::default();
    x.for_each_concept(&mut |c| {
        c.walk(&mut |s| match s {
            Concept::Name(n) => {
                sig.concept_names.insert(n.clone());
            }
            Concept::Exists(r, _) => {
                sig.role_names.insert(r.clone());
            }
            _ => {}
        })
    });
    x.for_each_asserted_role(&mut |r| {
        sig.role_names.insert(r.clone());
    });
    x.for_each_node(&mut |n| {
        if let NodeId::Individual(name) = n {
            sig.node_names.insert(name.clone());
        }
    });
    sig
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Concept {
        Concept::name(s)
    }
    fn ind(s: &str) -> NodeId {
        NodeId::individual(s)
    }

    fn cancer_tbox() -> Tbox {
        [
            Gci::new(n("Tamoxifen"), n("Anti-oestrogen")),
            Gci::new(n("Anti-aromatases"), n("Anti-oestrogen")),
            Gci::new(
                n("Tamoxifen"),
                Concept::exists(
                    "metabolizedTo",
                    Concept::and(n("Compounds"), Concept::exists("bindto", n("OestrogenReceptor"))),
                ),
            ),
            Gci::new(
                Concept::and(
                    Concept::exists("hasGene", n("CYP2D6")),
                    Concept::exists("TreatBy", n("Tamoxifen")),
                ),
                Concept::Bottom,
            ),
        ]
        .into_iter()
        .collect()
    }

    fn t1() -> Tbox {
        [
            Gci::new(n("A"), Concept::exists("R", n("A"))),
            Gci::new(n("A"), n("C")),
            Gci::new(Concept::and(n("E"), Concept::exists("R", n("A"))), Concept::Bottom),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn depth_of_example_tboxes() {
        assert_eq!(depth(&cancer_tbox()), 2);
        assert_eq!(depth(&t1()), 1);
        assert_eq!(depth(&Abox::new()), 0);
    }

    #[test]
    fn subconcepts_of_clash_axiom() {
        let gci = Gci::new(Concept::and(n("E"), Concept::exists("R", n("A"))), Concept::Bottom);
        let expected: BTreeSet<Concept> = [
            Concept::and(n("E"), Concept::exists("R", n("A"))),
            n("E"),
            Concept::exists("R", n("A")),
            n("A"),
            Concept::Bottom,
        ]
        .into_iter()
        .collect();
        assert_eq!(subconcepts(&gci), expected);
        assert_eq!(subconcepts(&Concept::Top), [Concept::Top].into_iter().collect());
        assert_eq!(
            subconcepts(&Concept::exists("R", n("A"))),
            [Concept::exists("R", n("A")), n("A")].into_iter().collect()
        );
    }

    #[test]
    fn signature_of_target_problem() {
        let abox: Abox = [
            Assertion::concept(n("Symp"), ind("Mary")),
            Assertion::concept(Concept::exists("hasGene", n("CYP2D6")), ind("Mary")),
        ]
        .into_iter()
        .collect();
        let sig = signature(&abox);
        assert!(sig.concept_names.contains(&Name::new("Symp")));
        assert!(sig.concept_names.contains(&Name::new("CYP2D6")));
        assert_eq!(sig.role_names, [Name::new("hasGene")].into_iter().collect());
        assert_eq!(sig.node_names, [Name::new("Mary")].into_iter().collect());
        assert!(signature(&KnowledgeBase::default()).is_empty());
    }

    #[test]
    fn variables_are_not_node_names() {
        let abox: Abox = [
            Assertion::concept(n("A"), ind("a")),
            Assertion::role("R", ind("a"), NodeId::Variable(1)),
            Assertion::role("R", NodeId::Variable(1), NodeId::Variable(2)),
            Assertion::concept(n("A"), NodeId::Variable(2)),
        ]
        .into_iter()
        .collect();
        assert_eq!(signature(&abox).node_names, [Name::new("a")].into_iter().collect());
    }
}
