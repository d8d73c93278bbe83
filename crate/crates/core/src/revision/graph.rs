use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::RevisionError;
use crate::syntax::{print_kb, Abox, Assertion, Concept, KnowledgeBase, Name, NodeId};

/// A labelled digraph over individuals and variables.
///
/// Variables hang off individuals as trees: no edge leaves a variable
/// towards an individual, every variable has at most one predecessor, and
/// the edge into a variable carries exactly one role.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RevisionGraph {
    nodes: BTreeSet<NodeId>,
    labels: BTreeMap<NodeId, BTreeSet<Concept>>,
    edges: BTreeMap<(NodeId, NodeId), BTreeSet<Name>>,
}

impl RevisionGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter()
    }

    pub fn contains(&self, x: &NodeId) -> bool {
        self.nodes.contains(x)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn variables(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter().filter(|n| n.is_variable())
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(NodeId, NodeId), &BTreeSet<Name>)> {
        self.edges.iter()
    }

    pub fn label(&self, x: &NodeId) -> &BTreeSet<Concept> {
        static EMPTY: BTreeSet<Concept> = BTreeSet::new();
        self.labels.get(x).unwrap_or(&EMPTY)
    }

    pub fn edge_label(&self, x: &NodeId, y: &NodeId) -> Option<&BTreeSet<Name>> {
        self.edges.get(&(x.clone(), y.clone()))
    }

    pub fn add_node(&mut self, x: NodeId) {
        self.labels.entry(x.clone()).or_default();
        self.nodes.insert(x);
    }

    /// Adds `c` to the label of `x`; returns whether it was new.
    pub fn add_label(&mut self, x: &NodeId, c: Concept) -> bool {
        self.add_node(x.clone());
        self.labels.get_mut(x).unwrap().insert(c)
    }

    pub fn set_label(&mut self, x: &NodeId, label: BTreeSet<Concept>) {
        self.add_node(x.clone());
        self.labels.insert(x.clone(), label);
    }

    /// Adds role `r` to the edge `⟨x, y⟩`, checking the variable invariants.
    pub fn add_edge(&mut self, x: &NodeId, y: &NodeId, r: Name) -> Result<(), RevisionError> {
        let describe = || Assertion::Role(r.clone(), x.clone(), y.clone()).to_string();
        if x.is_variable() && y.is_individual() {
            return Err(RevisionError::Structure {
                assertion: describe(),
                reason: "edge from a variable to an individual".into(),
            });
        }
        if y.is_variable() {
            if let Some(p) = self.predecessor(y) {
                if p != x {
                    return Err(RevisionError::Structure {
                        assertion: describe(),
                        reason: format!("variable {y} already has predecessor {p}"),
                    });
                }
            }
            if let Some(roles) = self.edges.get(&(x.clone(), y.clone())) {
                if !roles.contains(&r) {
                    return Err(RevisionError::Structure {
                        assertion: describe(),
                        reason: format!("edge into variable {y} must carry exactly one role"),
                    });
                }
            }
        }
        self.add_node(x.clone());
        self.add_node(y.clone());
        self.edges.entry((x.clone(), y.clone())).or_default().insert(r);
        Ok(())
    }

    pub fn successors<'a>(&'a self, x: &'a NodeId) -> impl Iterator<Item = (&'a NodeId, &'a BTreeSet<Name>)> + 'a {
        self.edges
            .range((x.clone(), min_node())..)
            .take_while(move |((s, _), _)| s == x)
            .map(|((_, t), roles)| (t, roles))
    }

    pub fn has_successor(&self, x: &NodeId) -> bool {
        self.successors(x).next().is_some()
    }

    pub fn predecessor(&self, y: &NodeId) -> Option<&NodeId> {
        self.edges.keys().find(|(_, t)| t == y).map(|(s, _)| s)
    }

    fn predecessors<'a>(&'a self, y: &'a NodeId) -> impl Iterator<Item = &'a NodeId> + 'a {
        self.edges.keys().filter(move |(_, t)| t == y).map(|(s, _)| s)
    }

    /// Removes the nodes and every edge touching them.
    pub fn remove_nodes(&mut self, doomed: &BTreeSet<NodeId>) {
        self.nodes.retain(|n| !doomed.contains(n));
        self.labels.retain(|n, _| !doomed.contains(n));
        self.edges.retain(|(s, t), _| !doomed.contains(s) && !doomed.contains(t));
    }

    pub fn remove_edge(&mut self, x: &NodeId, y: &NodeId) {
        self.edges.remove(&(x.clone(), y.clone()));
    }

    /// Variables reachable from `x`, not including `x`.
    pub fn variable_descendants(&self, x: &NodeId) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<&NodeId> = vec![x];
        while let Some(n) = stack.pop() {
            for (t, _) in self.successors(n) {
                if t.is_variable() && out.insert(t.clone()) {
                    stack.push(t);
                }
            }
        }
        out
    }

    /// Level of a node: 0 for individuals, one more than the predecessor
    /// for variables. Undefined for variables not rooted at an individual.
    pub fn level(&self, x: &NodeId) -> Result<usize, RevisionError> {
        if !self.nodes.contains(x) {
            return Err(RevisionError::UnknownNode(x.to_string()));
        }
        let mut cur = x;
        let mut lvl = 0;
        while cur.is_variable() {
            match self.predecessor(cur) {
                Some(p) => {
                    cur = p;
                    lvl += 1;
                    if lvl > self.nodes.len() {
                        return Err(RevisionError::UndefinedLevel(x.to_string()));
                    }
                }
                None => return Err(RevisionError::UndefinedLevel(x.to_string())),
            }
        }
        Ok(lvl)
    }

    /// Checks the four structural invariants.
    pub fn check_invariants(&self) -> Result<(), RevisionError> {
        for ((s, t), roles) in &self.edges {
            let err = |reason: &str| RevisionError::Structure {
                assertion: format!("<{s}, {t}>"),
                reason: reason.to_string(),
            };
            if !self.nodes.contains(s) || !self.nodes.contains(t) {
                return Err(err("edge endpoint is not a node"));
            }
            if s.is_variable() && t.is_individual() {
                return Err(err("edge from a variable to an individual"));
            }
            if t.is_variable() {
                if roles.len() != 1 {
                    return Err(err("edge into a variable must carry exactly one role"));
                }
                if self.predecessors(t).count() > 1 {
                    return Err(err("variable with more than one predecessor"));
                }
            }
        }
        Ok(())
    }

    /// The ABox representation: one assertion per label entry and per edge
    /// role.
    pub fn to_abox(&self) -> Abox {
        let mut out = Abox::new();
        for (x, label) in &self.labels {
            for c in label {
                out.insert(Assertion::Concept(c.clone(), x.clone()));
            }
        }
        for ((x, y), roles) in &self.edges {
            for r in roles {
                out.insert(Assertion::Role(r.clone(), x.clone(), y.clone()));
            }
        }
        out
    }

    /// Builds the graph whose ABox representation is `abox`.
    pub fn from_abox(abox: &Abox) -> Result<Self, RevisionError> {
        let mut g = RevisionGraph::new();
        for a in abox {
            match a {
                Assertion::Concept(c, x) => {
                    g.add_label(x, c.clone());
                }
                Assertion::Role(r, x, y) => g.add_edge(x, y, r.clone())?,
            }
        }
        Ok(g)
    }

    /// Renders the graph in the knowledge-base text format.
    pub fn dump(&self) -> String {
        print_kb(&KnowledgeBase::new(Default::default(), self.to_abox()))
    }

    /// Removes the non-root nodes and the edges of `b`.
    pub fn remove_branch(&mut self, b: &Branch) {
        for (s, t) in &b.edges {
            self.remove_edge(s, t);
        }
        let doomed: BTreeSet<NodeId> = b.nodes.iter().filter(|n| **n != b.root).cloned().collect();
        self.remove_nodes(&doomed);
    }
}

fn min_node() -> NodeId {
    NodeId::Individual(Name::new(""))
}

/// Converts an ABox into its revision graph.
pub fn graph_from_abox(abox: &Abox) -> Result<RevisionGraph, RevisionError> {
    RevisionGraph::from_abox(abox)
}

pub fn abox_of_graph(g: &RevisionGraph) -> Abox {
    g.to_abox()
}

pub fn level(g: &RevisionGraph, x: &NodeId) -> Result<usize, RevisionError> {
    g.level(x)
}

/// A tree-shaped subgraph with a designated root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    root: NodeId,
    nodes: BTreeSet<NodeId>,
    edges: BTreeSet<(NodeId, NodeId)>,
}

impl Branch {
    /// Validates that `edges` over `nodes` form a tree rooted at `root`
    /// inside `g`.
    pub fn new(
        g: &RevisionGraph,
        root: NodeId,
        nodes: BTreeSet<NodeId>,
        edges: BTreeSet<(NodeId, NodeId)>,
    ) -> Result<Branch, RevisionError> {
        let bad = |reason: &str| RevisionError::NotABranch(reason.to_string());
        if !nodes.contains(&root) {
            return Err(bad("root is not among the nodes"));
        }
        if let Some(n) = nodes.iter().find(|n| !g.contains(n)) {
            return Err(bad(&format!("{n} is not a node of the graph")));
        }
        let mut parent: HashMap<&NodeId, &NodeId> = HashMap::new();
        for (s, t) in &edges {
            if g.edge_label(s, t).is_none() {
                return Err(bad(&format!("<{s}, {t}> is not an edge of the graph")));
            }
            if !nodes.contains(s) || !nodes.contains(t) {
                return Err(bad("edge endpoint outside the branch"));
            }
            if *t == root || parent.insert(t, s).is_some() {
                return Err(bad("node with more than one parent"));
            }
        }
        if parent.len() + 1 != nodes.len() {
            return Err(bad("not connected"));
        }
        for n in &nodes {
            let mut cur = n;
            let mut steps = 0;
            while *cur != root {
                cur = parent[cur];
                steps += 1;
                if steps > nodes.len() {
                    return Err(bad("cycle"));
                }
            }
        }
        Ok(Branch { root, nodes, edges })
    }

    /// The branch made of `root`, its variable successor `child`, and all of
    /// `child`'s descendants.
    pub fn through(g: &RevisionGraph, root: &NodeId, child: &NodeId) -> Result<Branch, RevisionError> {
        let mut nodes = g.variable_descendants(child);
        nodes.insert(child.clone());
        let mut edges: BTreeSet<(NodeId, NodeId)> = nodes
            .iter()
            .flat_map(|n| g.successors(n).map(move |(t, _)| (n.clone(), t.clone())))
            .collect();
        edges.insert((root.clone(), child.clone()));
        nodes.insert(root.clone());
        Branch::new(g, root.clone(), nodes, edges)
    }

    pub fn root(&self) -> &NodeId {
        &self.root
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.edges
    }

    fn children<'a>(&'a self, x: &'a NodeId) -> impl Iterator<Item = &'a NodeId> + 'a {
        self.edges.iter().filter(move |(s, _)| s == x).map(|(_, t)| t)
    }
}

/// Whether `b1` is subsumed by `b2`: same root, only the root in common,
/// and a root-fixing map from `b1` into `b2` that preserves edges and
/// includes node and edge labels.
pub fn branch_subsumed(g: &RevisionGraph, b1: &Branch, b2: &Branch) -> bool {
    if b1.root != b2.root || b1.nodes.intersection(&b2.nodes).count() != 1 {
        return false;
    }
    fn maps(g: &RevisionGraph, b1: &Branch, b2: &Branch, u: &NodeId, v: &NodeId) -> bool {
        g.label(u).is_subset(g.label(v))
            && b1.children(u).all(|u2| {
                let need = g.edge_label(u, u2).unwrap();
                b2.children(v)
                    .any(|v2| need.is_subset(g.edge_label(v, v2).unwrap()) && maps(g, b1, b2, u2, v2))
            })
    }
    maps(g, b1, b2, &b1.root, &b2.root)
}

/// Searches for a branch of `g` that subsumes `b1`, built from the image
/// of a label-compatible map.
fn find_subsumer(g: &RevisionGraph, b1: &Branch) -> Option<Branch> {
    // preorder of b1 below the root, with parents
    let mut order: Vec<(NodeId, NodeId)> = Vec::new();
    let mut stack = vec![b1.root.clone()];
    while let Some(u) = stack.pop() {
        let kids: Vec<NodeId> = b1.children(&u).cloned().collect();
        for k in kids.into_iter().rev() {
            order.push((u.clone(), k.clone()));
            stack.push(k);
        }
    }

    struct Search<'a> {
        g: &'a RevisionGraph,
        b1: &'a Branch,
        order: &'a [(NodeId, NodeId)],
        f: HashMap<NodeId, NodeId>,
        // image node -> (image parent, number of b1 nodes mapped onto it)
        image: HashMap<NodeId, (NodeId, usize)>,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize) -> bool {
            if i == self.order.len() {
                return true;
            }
            let (p, u) = &self.order[i];
            let fp = self.f[p].clone();
            let need = self.g.edge_label(p, u).unwrap();
            let candidates: Vec<NodeId> = self
                .g
                .successors(&fp)
                .filter(|(z, roles)| {
                    !self.b1.nodes.contains(*z)
                        && need.is_subset(roles)
                        && self.g.label(u).is_subset(self.g.label(z))
                        && self.image.get(*z).is_none_or(|(q, _)| *q == fp)
                })
                .map(|(z, _)| z.clone())
                .collect();
            for z in candidates {
                self.f.insert(u.clone(), z.clone());
                self.image.entry(z.clone()).or_insert((fp.clone(), 0)).1 += 1;
                if self.go(i + 1) {
                    return true;
                }
                let slot = self.image.get_mut(&z).unwrap();
                slot.1 -= 1;
                if slot.1 == 0 {
                    self.image.remove(&z);
                }
                self.f.remove(u);
            }
            false
        }
    }

    let mut s = Search { g, b1, order: &order, f: HashMap::new(), image: HashMap::new() };
    s.f.insert(b1.root.clone(), b1.root.clone());
    if order.is_empty() || !s.go(0) {
        return None;
    }
    let mut nodes: BTreeSet<NodeId> = s.image.keys().cloned().collect();
    nodes.insert(b1.root.clone());
    let edges = s.image.iter().map(|(z, (q, _))| (q.clone(), z.clone())).collect();
    let b2 = Branch::new(g, b1.root.clone(), nodes, edges).ok()?;
    debug_assert!(branch_subsumed(g, b1, &b2));
    Some(b2)
}

/// A redundant branch of `g`, if any: all nodes but the root are
/// variables, and another branch subsumes it. Variables are tried in
/// decreasing level, then increasing index; the candidate for a variable
/// `y` is the branch through `y` from its predecessor.
pub fn find_redundant_branch(g: &RevisionGraph) -> Option<Branch> {
    let mut vars: Vec<(usize, &NodeId)> = g.variables().filter_map(|v| g.level(v).ok().map(|l| (l, v))).collect();
    vars.sort_by(|(la, a), (lb, b)| lb.cmp(la).then(a.cmp(b)));
    for (_, y) in vars {
        let root = g.predecessor(y)?;
        let b1 = Branch::through(g, root, y).ok()?;
        if find_subsumer(g, &b1).is_some() {
            return Some(b1);
        }
    }
    None
}

/// Whether a bijection fixing individuals maps `g1` onto `g2` with equal
/// node and edge labels.
pub fn isomorphic(g1: &RevisionGraph, g2: &RevisionGraph) -> bool {
    fn canon(g: &RevisionGraph, x: &NodeId) -> String {
        let mut kids: Vec<String> = g
            .successors(x)
            .filter(|(t, _)| t.is_variable())
            .map(|(t, roles)| format!("{roles:?}:{}", canon(g, t)))
            .collect();
        kids.sort();
        format!("{:?}[{}]", g.label(x), kids.join(","))
    }
    type Skeleton<'a> = (BTreeSet<&'a NodeId>, Vec<(&'a (NodeId, NodeId), &'a BTreeSet<Name>)>);
    fn skeleton(g: &RevisionGraph) -> Skeleton<'_> {
        (
            g.nodes().filter(|n| n.is_individual()).collect(),
            g.edges().filter(|((_, t), _)| t.is_individual()).collect(),
        )
    }
    fn roots(g: &RevisionGraph) -> Vec<String> {
        let mut out: Vec<String> = g
            .nodes()
            .filter(|n| n.is_variable() && g.predecessor(n).is_none())
            .map(|n| canon(g, n))
            .collect();
        out.sort();
        out
    }
    if skeleton(g1) != skeleton(g2) || roots(g1) != roots(g2) {
        return false;
    }
    g1.nodes()
        .filter(|n| n.is_individual())
        .all(|a| canon(g1, a) == canon(g2, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_kb;

    fn abox(text: &str) -> Abox {
        parse_kb(text).unwrap().abox
    }
    fn v(i: u32) -> NodeId {
        NodeId::Variable(i)
    }
    fn ind(s: &str) -> NodeId {
        NodeId::individual(s)
    }

    const AG: &str = "assert A(a).\nassert C(a).\nassert R(a, ?x1).\nassert A(?x1).\nassert C(?x1).\nassert R(?x1, ?x2).\nassert A(?x2).\nassert C(?x2).\n";

    #[test]
    fn single_assertion_graph() {
        let g = graph_from_abox(&abox("assert A(a).")).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.label(&ind("a")).len(), 1);
        assert!(graph_from_abox(&Abox::new()).unwrap().to_abox().is_empty());
    }

    #[test]
    fn chain_graph_and_levels() {
        let g = graph_from_abox(&abox(AG)).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.level(&ind("a")).unwrap(), 0);
        assert_eq!(g.level(&v(1)).unwrap(), 1);
        assert_eq!(g.level(&v(2)).unwrap(), 2);
        assert_eq!(g.label(&v(1)), &[Concept::name("A"), Concept::name("C")].into_iter().collect());
        assert_eq!(g.edge_label(&ind("a"), &v(1)).unwrap().len(), 1);
        assert_eq!(g.to_abox(), abox(AG));
        assert!(g.check_invariants().is_ok());
    }

    #[test]
    fn individual_cycles_are_fine() {
        let g = graph_from_abox(&abox("assert R(a, b).\nassert R(b, a).")).unwrap();
        assert!(g.check_invariants().is_ok());
    }

    #[test]
    fn structural_violations_name_the_assertion() {
        let err = graph_from_abox(&abox("assert R(?x1, a).")).unwrap_err();
        assert!(err.to_string().contains("R(?x1, a)"), "{err}");
        assert!(graph_from_abox(&abox("assert R(a, ?x1).\nassert R(b, ?x1).")).is_err());
        assert!(graph_from_abox(&abox("assert R(a, ?x1).\nassert S(a, ?x1).")).is_err());
    }

    #[test]
    fn parentless_variable_has_no_level() {
        let g = graph_from_abox(&abox("assert A(?x1).\nassert R(?x1, ?x2).")).unwrap();
        assert!(matches!(g.level(&v(1)), Err(RevisionError::UndefinedLevel(_))));
        assert!(matches!(g.level(&v(2)), Err(RevisionError::UndefinedLevel(_))));
    }

    #[test]
    fn trivial_branches_subsume_each_other() {
        let g = graph_from_abox(&abox("assert A(a).")).unwrap();
        let b = Branch::new(&g, ind("a"), [ind("a")].into_iter().collect(), BTreeSet::new()).unwrap();
        assert!(branch_subsumed(&g, &b, &b));
    }

    #[test]
    fn duplicate_successors_are_redundant() {
        let g = graph_from_abox(&abox(
            "assert R(a, ?x1).\nassert A(?x1).\nassert R(a, ?x2).\nassert A(?x2).\n",
        ))
        .unwrap();
        let b1 = Branch::through(&g, &ind("a"), &v(1)).unwrap();
        let b2 = Branch::through(&g, &ind("a"), &v(2)).unwrap();
        assert!(branch_subsumed(&g, &b1, &b2));
        assert!(branch_subsumed(&g, &b2, &b1));
        let found = find_redundant_branch(&g).unwrap();
        assert_eq!(found, b1);
    }

    #[test]
    fn larger_label_is_not_subsumed_by_smaller() {
        let g = graph_from_abox(&abox(
            "assert R(a, ?x1).\nassert A(?x1).\nassert B(?x1).\nassert R(a, ?x2).\nassert A(?x2).\n",
        ))
        .unwrap();
        let b1 = Branch::through(&g, &ind("a"), &v(1)).unwrap();
        let b2 = Branch::through(&g, &ind("a"), &v(2)).unwrap();
        assert!(!branch_subsumed(&g, &b1, &b2));
        assert!(branch_subsumed(&g, &b2, &b1));
        assert_eq!(find_redundant_branch(&g).unwrap(), b2);
    }

    #[test]
    fn chain_has_no_redundant_branch() {
        let g = graph_from_abox(&abox(AG)).unwrap();
        assert!(find_redundant_branch(&g).is_none());
        assert!(find_redundant_branch(&graph_from_abox(&abox("assert A(a).")).unwrap()).is_none());
    }

    #[test]
    fn individual_successor_can_subsume() {
        let g = graph_from_abox(&abox("assert R(a, b).\nassert A(b).\nassert B(b).\nassert R(a, ?x1).\nassert A(?x1).")).unwrap();
        let found = find_redundant_branch(&g).unwrap();
        assert_eq!(found.root(), &ind("a"));
        assert!(found.nodes().contains(&v(1)));
    }

    #[test]
    fn branch_validation() {
        let g = graph_from_abox(&abox(AG)).unwrap();
        let nodes: BTreeSet<NodeId> = [ind("a"), v(2)].into_iter().collect();
        assert!(Branch::new(&g, ind("a"), nodes, BTreeSet::new()).is_err());
        let edges: BTreeSet<(NodeId, NodeId)> = [(ind("a"), v(2))].into_iter().collect();
        let nodes: BTreeSet<NodeId> = [ind("a"), v(2)].into_iter().collect();
        assert!(Branch::new(&g, ind("a"), nodes, edges).is_err());
    }

    #[test]
    fn isomorphism_ignores_variable_names() {
        let g1 = graph_from_abox(&abox(AG)).unwrap();
        let renamed = abox(&AG.replace("?x1", "?x7").replace("?x2", "?x3"));
        let g2 = graph_from_abox(&renamed).unwrap();
        assert!(isomorphic(&g1, &g2));
        let g3 = graph_from_abox(&abox("assert A(a).\nassert C(a).")).unwrap();
        assert!(!isomorphic(&g1, &g3));
    }
}
