use std::collections::{BTreeSet, VecDeque};

use super::graph::{find_redundant_branch, RevisionGraph};
use super::RevisionError;
use crate::reasoner::{Reasoner, Saturation};
use crate::syntax::{Abox, Assertion, Concept, KnowledgeBase, NodeId, Tbox};

/// Which existing successors block the ∃-rule for `∃R.C` at `x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SuccessorReuse {
    /// A successor `z` with `C ∈ L(z)` blocks only when `R ∈ L(⟨x, z⟩)`.
    #[default]
    SameRole,
    /// Any successor `z` with `C ∈ L(z)` blocks, whatever the edge role.
    AnyRole,
}

/// How a successor is judged to already satisfy the filler `C`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BlockingTest {
    /// `C` follows from the successor's label (for individuals, from the
    /// source KB).
    #[default]
    Entailed,
    /// `C ∈ L(z)` syntactically.
    Syntactic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BmwOptions {
    pub successor_reuse: SuccessorReuse,
    pub blocking: BlockingTest,
}

/// Builds the bounded revision graph of `kb` with default options.
pub fn b_mw(kb: &KnowledgeBase, k: usize) -> Result<RevisionGraph, RevisionError> {
    b_mw_with(&Reasoner::new(&kb.tbox), &kb.tbox, &kb.abox, k, BmwOptions::default())
}

/// Builds the bounded revision graph of `⟨tbox, abox⟩`. `reasoner` must
/// have been built for `tbox`.
///
/// Nodes are expanded breadth first: individuals in name order, then
/// variables in creation order. Each node's label is closed under the GCI
/// and ⊓ rules before any ∃-rule fires at it, and ∃-rules at a node fire
/// in `(role, filler)` order.
pub fn b_mw_with(
    reasoner: &Reasoner,
    tbox: &Tbox,
    abox: &Abox,
    k: usize,
    opts: BmwOptions,
) -> Result<RevisionGraph, RevisionError> {
    if let Some(a) = abox.iter().find(|a| a.mentions_variable()) {
        return Err(RevisionError::VariableInSource(a.to_string()));
    }
    let source = reasoner.saturate(abox);
    if !source.is_consistent() {
        return Err(RevisionError::InconsistentSource);
    }

    let mut g = RevisionGraph::from_abox(abox)?;
    let mut queue: VecDeque<(NodeId, usize)> = VecDeque::new();
    let individuals: Vec<NodeId> = g.nodes().cloned().collect();
    for x in individuals {
        let label = close(tbox, &source, &x, g.label(&x).clone());
        g.set_label(&x, label);
        queue.push_back((x, 0));
    }

    let mut next = 1u32;
    while let Some((x, lvl)) = queue.pop_front() {
        if lvl > k {
            continue;
        }
        let wanted: Vec<Concept> = g.label(&x).iter().filter(|c| matches!(c, Concept::Exists(..))).cloned().collect();
        for c in wanted {
            let Concept::Exists(r, filler) = c else { unreachable!() };
            let blocked = g.successors(&x).any(|(z, roles)| {
                (opts.successor_reuse == SuccessorReuse::AnyRole || roles.contains(&r))
                    && (g.label(z).contains(&filler)
                        || opts.blocking == BlockingTest::Entailed
                            && satisfied(reasoner, &source, &g, z, &filler))
            });
            if blocked {
                continue;
            }
            let z = NodeId::Variable(next);
            next += 1;
            g.add_edge(&x, &z, r)?;
            let seed: BTreeSet<Concept> = [*filler].into_iter().collect();
            // A label only grows by consequences of itself, so saturating
            // the seed decides every later GCI premise at z.
            let sat = reasoner.saturate_iter(
                seed.iter().map(|c| Assertion::Concept(c.clone(), z.clone())).collect::<Vec<_>>().iter(),
            );
            let label = close(tbox, &sat, &z, seed);
            g.set_label(&z, label);
            queue.push_back((z, lvl + 1));
        }
    }

    let nodes: Vec<NodeId> = g.nodes().cloned().collect();
    for x in nodes {
        let names = g.label(&x).iter().filter(|c| c.is_name()).cloned().collect();
        g.set_label(&x, names);
    }

    while let Some(b) = find_redundant_branch(&g) {
        g.remove_branch(&b);
    }
    debug_assert!(g.check_invariants().is_ok());
    Ok(g)
}

/// Whether node `z` of the graph under construction is known to satisfy
/// `c`.
fn satisfied(reasoner: &Reasoner, source: &Saturation, g: &RevisionGraph, z: &NodeId, c: &Concept) -> bool {
    match z {
        NodeId::Individual(_) => source.entails(&Assertion::Concept(c.clone(), z.clone())),
        NodeId::Variable(_) => reasoner.label_entails(g.label(z), c),
    }
}

/// Closes `label` under the GCI rule (premises decided by `sat` at `x`)
/// and the ⊓-rule.
fn close(tbox: &Tbox, sat: &Saturation, x: &NodeId, mut label: BTreeSet<Concept>) -> BTreeSet<Concept> {
    for gci in tbox {
        if !label.contains(&gci.rhs) && sat.entails(&Assertion::Concept(gci.lhs.clone(), x.clone())) {
            label.insert(gci.rhs.clone());
        }
    }
    let mut todo: Vec<Concept> = label.iter().cloned().collect();
    while let Some(c) = todo.pop() {
        if let Concept::And(l, r) = c {
            for part in [*l, *r] {
                if label.insert(part.clone()) {
                    todo.push(part);
                }
            }
        }
    }
    label
}
