use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::normalize::{normalize, Atom, NormalAxiom, NormalizedTbox};
use crate::syntax::{Abox, Assertion, Concept, KnowledgeBase, Name, NodeId, Tbox};

const TOP: u32 = 0;
const BOTTOM: u32 = 1;

#[derive(Default)]
struct Interner {
    ids: HashMap<Name, u32>,
    names: Vec<Name>,
}

impl Interner {
    fn intern(&mut self, n: &Name, offset: u32) -> u32 {
        if let Some(&i) = self.ids.get(n) {
            return i;
        }
        let i = offset + self.names.len() as u32;
        self.ids.insert(n.clone(), i);
        self.names.push(n.clone());
        i
    }
}

/// Indexed form of a normalized TBox, shared by every saturation.
struct Tables {
    normalized: NormalizedTbox,
    concepts: Interner,
    roles: Interner,
    told: Vec<Vec<u32>>,
    conj: Vec<Vec<(u32, u32)>>,
    exists_right: Vec<Vec<(u32, u32)>>,
    exists_left: HashMap<(u32, u32), Vec<u32>>,
}

impl Tables {
    fn build(normalized: NormalizedTbox) -> Tables {
        let mut concepts = Interner::default();
        let mut roles = Interner::default();
        let atom_id = |a: &Atom, concepts: &mut Interner| match a {
            Atom::Top => TOP,
            Atom::Bottom => BOTTOM,
            Atom::Name(n) => concepts.intern(n, 2),
        };
        let mut told: Vec<(u32, u32)> = Vec::new();
        let mut conj = Vec::new();
        let mut right = Vec::new();
        let mut left = Vec::new();
        for ax in &normalized.axioms {
            match ax {
                NormalAxiom::Sub(a, b) => told.push((atom_id(a, &mut concepts), atom_id(b, &mut concepts))),
                NormalAxiom::Conj(a1, a2, b) => conj.push((
                    atom_id(a1, &mut concepts),
                    atom_id(a2, &mut concepts),
                    atom_id(b, &mut concepts),
                )),
                NormalAxiom::ExistsRight(a, r, b) => right.push((
                    atom_id(a, &mut concepts),
                    roles.intern(r, 0),
                    atom_id(b, &mut concepts),
                )),
                NormalAxiom::ExistsLeft(r, a, b) => left.push((
                    roles.intern(r, 0),
                    atom_id(a, &mut concepts),
                    atom_id(b, &mut concepts),
                )),
            }
        }
        let n = concepts.names.len() + 2;
        let mut t = Tables {
            normalized,
            concepts,
            roles,
            told: vec![Vec::new(); n],
            conj: vec![Vec::new(); n],
            exists_right: vec![Vec::new(); n],
            exists_left: HashMap::new(),
        };
        for (a, b) in told {
            t.told[a as usize].push(b);
        }
        for (a1, a2, b) in conj {
            t.conj[a1 as usize].push((a2, b));
            if a1 != a2 {
                t.conj[a2 as usize].push((a1, b));
            }
        }
        for (a, r, b) in right {
            t.exists_right[a as usize].push((r, b));
        }
        for (r, a, b) in left {
            t.exists_left.entry((r, a)).or_default().push(b);
        }
        t
    }

    fn base_concepts(&self) -> usize {
        self.concepts.names.len() + 2
    }
}

/// An EL⊥ reasoner for a fixed TBox.
///
/// The TBox is normalized once; each ABox is then saturated with the
/// completion rules for ⊑, ⊓, ∃ on either side, and ⊥ propagation.
/// Individuals and variables become distinguished elements; every concept
/// name used as an existential filler on a right-hand side gets one shared
/// anonymous element.
pub struct Reasoner {
    tables: Arc<Tables>,
    saturations: AtomicU64,
    queries: AtomicU64,
}

impl Reasoner {
    pub fn new(tbox: &Tbox) -> Reasoner {
        Reasoner {
            tables: Arc::new(Tables::build(normalize(tbox))),
            saturations: AtomicU64::new(0),
            queries: AtomicU64::new(0),
        }
    }

    pub fn normalized(&self) -> &NormalizedTbox {
        &self.tables.normalized
    }

    /// Number of saturations run so far.
    pub fn saturation_count(&self) -> u64 {
        self.saturations.load(Ordering::Relaxed)
    }

    /// Number of entailment and consistency questions answered so far.
    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn saturate(&self, abox: &Abox) -> Saturation {
        self.saturations.fetch_add(1, Ordering::Relaxed);
        Saturation::build(self.tables.clone(), abox.iter())
    }

    pub fn saturate_iter<'a>(&self, abox: impl IntoIterator<Item = &'a Assertion>) -> Saturation {
        self.saturations.fetch_add(1, Ordering::Relaxed);
        Saturation::build(self.tables.clone(), abox)
    }

    pub fn is_consistent(&self, abox: &Abox) -> bool {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.saturate(abox).is_consistent()
    }

    pub fn is_consistent_iter<'a>(&self, abox: impl IntoIterator<Item = &'a Assertion>) -> bool {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.saturate_iter(abox).is_consistent()
    }

    pub fn entails(&self, abox: &Abox, a: &Assertion) -> bool {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.saturate(abox).entails(a)
    }

    pub fn entails_all(&self, abox: &Abox, other: &Abox) -> bool {
        self.queries.fetch_add(1, Ordering::Relaxed);
        let sat = self.saturate(abox);
        other.iter().all(|a| sat.entails(a))
    }

    /// Whether `⊓ label ⊑ query` follows from the TBox, i.e.
    /// `⟨T, {D(x) | D ∈ label}⟩ ⊨ query(x)` for a fresh `x`.
    pub fn label_entails<'a>(&self, label: impl IntoIterator<Item = &'a Concept>, query: &Concept) -> bool {
        self.queries.fetch_add(1, Ordering::Relaxed);
        let x = NodeId::Variable(0);
        let abox: Vec<Assertion> = label.into_iter().map(|c| Assertion::Concept(c.clone(), x.clone())).collect();
        self.saturate_iter(abox.iter()).entails(&Assertion::Concept(query.clone(), x))
    }
}

/// Compact set of concept ids.
#[derive(Clone, Default)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn insert(&mut self, i: u32) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        if w >= self.0.len() {
            self.0.resize(w + 1, 0);
        }
        let fresh = self.0[w] & (1 << b) == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    fn contains(&self, i: u32) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        w < self.0.len() && self.0[w] & (1 << b) != 0
    }

    fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| (w * 64 + b) as u32))
    }
}

/// What an element of a saturation stands for.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelElement {
    /// An ABox individual or variable.
    Node(NodeId),
    /// The shared witness for an existential with this filler.
    Filler(Atom),
    /// A witness for an existential inside an asserted complex concept.
    Anonymous(usize),
    /// An arbitrary domain element; ⊥ here means ⊤ ⊑ ⊥.
    Domain,
}

enum Task {
    Add(usize, u32),
    Link(usize, u32, usize),
}

/// A completed saturation of one ABox against a TBox.
pub struct Saturation {
    tables: Arc<Tables>,
    extra_concepts: Interner,
    extra_roles: Interner,
    elements: Vec<ModelElement>,
    nodes: BTreeMap<NodeId, usize>,
    fillers: HashMap<u32, usize>,
    domain: usize,
    subsumers: Vec<BitSet>,
    succ: Vec<Vec<(u32, usize)>>,
    pred: Vec<Vec<(u32, usize)>>,
    links: HashSet<(usize, u32, usize)>,
    queue: VecDeque<Task>,
    clash: bool,
}

impl Saturation {
    fn build<'a>(tables: Arc<Tables>, abox: impl IntoIterator<Item = &'a Assertion>) -> Saturation {
        let mut s = Saturation {
            tables,
            extra_concepts: Interner::default(),
            extra_roles: Interner::default(),
            elements: Vec::new(),
            nodes: BTreeMap::new(),
            fillers: HashMap::new(),
            domain: 0,
            subsumers: Vec::new(),
            succ: Vec::new(),
            pred: Vec::new(),
            links: HashSet::new(),
            queue: VecDeque::new(),
            clash: false,
        };
        s.domain = s.new_element(ModelElement::Domain);
        for a in abox {
            match a {
                Assertion::Concept(c, x) => {
                    let e = s.node(x);
                    s.decompose(c, e);
                }
                Assertion::Role(r, x, y) => {
                    let r = s.role_id(r);
                    let (ex, ey) = (s.node(x), s.node(y));
                    s.queue.push_back(Task::Link(ex, r, ey));
                }
            }
        }
        s.run();
        s.clash = s.subsumers[s.domain].contains(BOTTOM)
            || s.nodes.values().any(|&e| s.subsumers[e].contains(BOTTOM));
        s
    }

    fn new_element(&mut self, kind: ModelElement) -> usize {
        let e = self.elements.len();
        self.elements.push(kind);
        self.subsumers.push(BitSet::default());
        self.succ.push(Vec::new());
        self.pred.push(Vec::new());
        self.queue.push_back(Task::Add(e, TOP));
        e
    }

    fn node(&mut self, x: &NodeId) -> usize {
        if let Some(&e) = self.nodes.get(x) {
            return e;
        }
        let e = self.new_element(ModelElement::Node(x.clone()));
        self.nodes.insert(x.clone(), e);
        e
    }

    fn filler(&mut self, a: u32) -> usize {
        if let Some(&e) = self.fillers.get(&a) {
            return e;
        }
        let atom = match a {
            TOP => Atom::Top,
            BOTTOM => Atom::Bottom,
            _ => Atom::Name(self.concept_name(a).clone()),
        };
        let e = self.new_element(ModelElement::Filler(atom));
        self.fillers.insert(a, e);
        self.queue.push_back(Task::Add(e, a));
        e
    }

    fn concept_id(&mut self, n: &Name) -> u32 {
        if let Some(&i) = self.tables.concepts.ids.get(n) {
            return i;
        }
        let offset = self.tables.base_concepts() as u32;
        self.extra_concepts.intern(n, offset)
    }

    fn lookup_concept(&self, n: &Name) -> Option<u32> {
        self.tables.concepts.ids.get(n).or_else(|| self.extra_concepts.ids.get(n)).copied()
    }

    fn concept_name(&self, i: u32) -> &Name {
        let base = self.tables.base_concepts() as u32;
        if i < base {
            &self.tables.concepts.names[(i - 2) as usize]
        } else {
            &self.extra_concepts.names[(i - base) as usize]
        }
    }

    fn role_id(&mut self, r: &Name) -> u32 {
        if let Some(&i) = self.tables.roles.ids.get(r) {
            return i;
        }
        let offset = self.tables.roles.names.len() as u32;
        self.extra_roles.intern(r, offset)
    }

    fn lookup_role(&self, r: &Name) -> Option<u32> {
        self.tables.roles.ids.get(r).or_else(|| self.extra_roles.ids.get(r)).copied()
    }

    fn role_name(&self, i: u32) -> &Name {
        let base = self.tables.roles.names.len() as u32;
        if i < base {
            &self.tables.roles.names[i as usize]
        } else {
            &self.extra_roles.names[(i - base) as usize]
        }
    }

    /// Turns an asserted complex concept into memberships and links over
    /// fresh anonymous elements.
    fn decompose(&mut self, c: &Concept, e: usize) {
        match c {
            Concept::Top => {}
            Concept::Bottom => self.queue.push_back(Task::Add(e, BOTTOM)),
            Concept::Name(n) => {
                let i = self.concept_id(n);
                self.queue.push_back(Task::Add(e, i));
            }
            Concept::And(l, r) => {
                self.decompose(l, e);
                self.decompose(r, e);
            }
            Concept::Exists(r, d) => {
                let r = self.role_id(r);
                let idx = self.elements.len();
                let f = self.new_element(ModelElement::Anonymous(idx));
                self.queue.push_back(Task::Link(e, r, f));
                self.decompose(d, f);
            }
        }
    }

    fn run(&mut self) {
        let tables = self.tables.clone();
        let base = tables.base_concepts();
        while let Some(task) = self.queue.pop_front() {
            match task {
                Task::Add(e, a) => {
                    if !self.subsumers[e].insert(a) {
                        continue;
                    }
                    if a == BOTTOM {
                        for &(_, p) in &self.pred[e] {
                            self.queue.push_back(Task::Add(p, BOTTOM));
                        }
                    }
                    if (a as usize) < base {
                        for &b in &tables.told[a as usize] {
                            self.queue.push_back(Task::Add(e, b));
                        }
                        for &(other, b) in &tables.conj[a as usize] {
                            if self.subsumers[e].contains(other) {
                                self.queue.push_back(Task::Add(e, b));
                            }
                        }
                        for &(r, f) in &tables.exists_right[a as usize] {
                            let t = self.filler(f);
                            self.queue.push_back(Task::Link(e, r, t));
                        }
                        for &(r, p) in &self.pred[e] {
                            if let Some(bs) = tables.exists_left.get(&(r, a)) {
                                for &b in bs {
                                    self.queue.push_back(Task::Add(p, b));
                                }
                            }
                        }
                    }
                }
                Task::Link(e, r, t) => {
                    if !self.links.insert((e, r, t)) {
                        continue;
                    }
                    self.succ[e].push((r, t));
                    self.pred[t].push((r, e));
                    for a in self.subsumers[t].iter() {
                        if a == BOTTOM {
                            self.queue.push_back(Task::Add(e, BOTTOM));
                        }
                        if let Some(bs) = tables.exists_left.get(&(r, a)) {
                            for &b in bs {
                                self.queue.push_back(Task::Add(e, b));
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn is_consistent(&self) -> bool {
        !self.clash
    }

    pub fn has_clash(&self) -> bool {
        self.clash
    }

    /// Whether every model of the saturated KB satisfies `a`. Nodes absent
    /// from the ABox are treated as fresh individuals.
    pub fn entails(&self, a: &Assertion) -> bool {
        if self.clash {
            return true;
        }
        match a {
            Assertion::Role(r, x, y) => match (self.nodes.get(x), self.nodes.get(y), self.lookup_role(r)) {
                (Some(&ex), Some(&ey), Some(r)) => self.links.contains(&(ex, r, ey)),
                _ => false,
            },
            Assertion::Concept(c, x) => {
                let e = self.nodes.get(x).copied().unwrap_or(self.domain);
                self.simulates(c, e)
            }
        }
    }

    /// Does element `e` of the canonical model satisfy `c`?
    fn simulates(&self, c: &Concept, e: usize) -> bool {
        match c {
            Concept::Top => true,
            Concept::Bottom => self.subsumers[e].contains(BOTTOM),
            Concept::Name(n) => self.lookup_concept(n).is_some_and(|i| self.subsumers[e].contains(i)),
            Concept::And(l, r) => self.simulates(l, e) && self.simulates(r, e),
            Concept::Exists(r, d) => match self.lookup_role(r) {
                Some(r) => self.succ[e].iter().any(|&(r2, t)| r2 == r && self.simulates(d, t)),
                None => false,
            },
        }
    }

    /// Concept names (and ⊥) derived for `x`, fresh normalization names
    /// excluded.
    pub fn subsumers_of(&self, x: &NodeId) -> BTreeSet<Atom> {
        match self.nodes.get(x) {
            Some(&e) => self.atoms_of(e),
            None => BTreeSet::new(),
        }
    }

    fn atoms_of(&self, e: usize) -> BTreeSet<Atom> {
        self.subsumers[e]
            .iter()
            .filter_map(|i| match i {
                TOP => None,
                BOTTOM => Some(Atom::Bottom),
                _ => {
                    let n = self.concept_name(i);
                    (!NormalizedTbox::is_fresh(n)).then(|| Atom::Name(n.clone()))
                }
            })
            .collect()
    }

    /// All derived (element, role, element) links.
    pub fn links(&self) -> BTreeSet<(ModelElement, Name, ModelElement)> {
        self.links
            .iter()
            .map(|&(e, r, t)| (self.elements[e].clone(), self.role_name(r).clone(), self.elements[t].clone()))
            .collect()
    }

    pub fn canonical_model(&self) -> CanonicalModel {
        let memberships = (0..self.elements.len())
            .map(|e| {
                self.atoms_of(e)
                    .into_iter()
                    .filter_map(|a| match a {
                        Atom::Name(n) => Some(n),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        let edges = self.links.iter().map(|&(e, r, t)| (e, self.role_name(r).clone(), t)).collect();
        CanonicalModel { elements: self.elements.clone(), memberships, edges }
    }
}

/// The finite model read off a clash-free saturation.
#[derive(Clone, Debug)]
pub struct CanonicalModel {
    pub elements: Vec<ModelElement>,
    pub memberships: Vec<BTreeSet<Name>>,
    pub edges: BTreeSet<(usize, Name, usize)>,
}

impl CanonicalModel {
    pub fn element_of(&self, x: &NodeId) -> Option<usize> {
        self.elements.iter().position(|e| matches!(e, ModelElement::Node(n) if n == x))
    }

    /// Evaluates `c` at element `e`.
    pub fn satisfies(&self, e: usize, c: &Concept) -> bool {
        match c {
            Concept::Top => true,
            Concept::Bottom => false,
            Concept::Name(n) => self.memberships[e].contains(n),
            Concept::And(l, r) => self.satisfies(e, l) && self.satisfies(e, r),
            Concept::Exists(r, d) => self.edges.iter().any(|(s, r2, t)| *s == e && r2 == r && self.satisfies(*t, d)),
        }
    }
}

/// Saturates `kb` with a throwaway reasoner.
pub fn saturate(kb: &KnowledgeBase) -> Saturation {
    Reasoner::new(&kb.tbox).saturate(&kb.abox)
}
