use std::collections::BTreeSet;

use super::graph::RevisionGraph;
use super::RevisionError;
use crate::reasoner::Reasoner;
use crate::syntax::{Abox, Concept, NodeId, Tbox};

/// Rolls every variable of `abox` into nested existential restrictions on
/// individuals. Variables not below an individual are dropped.
pub fn rolling(abox: &Abox, tbox: &Tbox) -> Result<Abox, RevisionError> {
    rolling_with(&Reasoner::new(tbox), abox)
}

/// As [`rolling`], with a reasoner built for the TBox.
///
/// Leaves are rolled deepest first. Before `∃R.C_y` is formed, conjuncts of
/// `L(y)` that follow from the remaining ones are dropped, so `C_y` is the
/// shortest conjunction equivalent to the label.
pub fn rolling_with(reasoner: &Reasoner, abox: &Abox) -> Result<Abox, RevisionError> {
    let mut g = RevisionGraph::from_abox(abox)?;
    let rooted: BTreeSet<NodeId> = g
        .nodes()
        .filter(|n| n.is_individual())
        .flat_map(|a| g.variable_descendants(a))
        .collect();
    let loose: BTreeSet<NodeId> = g.variables().filter(|v| !rooted.contains(*v)).cloned().collect();
    g.remove_nodes(&loose);

    loop {
        let leaf = g
            .variables()
            .filter(|v| !g.has_successor(v))
            .map(|v| (g.level(v).unwrap_or(0), v.clone()))
            .min_by(|(la, a), (lb, b)| lb.cmp(la).then(a.cmp(b)));
        let Some((_, y)) = leaf else { break };
        let x = g.predecessor(&y).expect("rooted variable has a predecessor").clone();
        let role = g.edge_label(&x, &y).and_then(|r| r.iter().next()).expect("edge into a variable has a role").clone();
        let c_y = Concept::conjunction(reduce(reasoner, g.label(&y)));
        let rolled = Concept::Exists(role, Box::new(c_y));
        if !reasoner.label_entails(g.label(&x), &rolled) {
            g.add_label(&x, rolled);
        }
        g.remove_nodes(&[y].into_iter().collect());
    }
    Ok(g.to_abox())
}

/// Drops conjuncts entailed by the others, scanning from the largest.
fn reduce(reasoner: &Reasoner, label: &BTreeSet<Concept>) -> Vec<Concept> {
    let mut kept: Vec<Concept> = label.iter().cloned().collect();
    for i in (0..kept.len()).rev() {
        let others: Vec<&Concept> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c).collect();
        if reasoner.label_entails(others, &kept[i]) {
            kept.remove(i);
        }
    }
    kept
}
