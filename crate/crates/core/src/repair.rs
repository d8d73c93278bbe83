//! Justifications for clashes and exactly-one repairs.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::reasoner::Reasoner;
use crate::syntax::{Abox, Assertion, Tbox};

/// Minimal subset of the revisable ABox that clashes together with the
/// target ABox.
pub type Justification = Abox;

/// Set meeting every justification in exactly one assertion.
pub type Repair = Abox;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepairError {
    #[error("target problem inconsistent")]
    TargetInconsistent,
    #[error("no clash to repair: the union of the ABoxes is consistent")]
    ConsistentUnion,
}

/// Justifications together with the repairs they admit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairSet {
    pub justifications: BTreeSet<Justification>,
    pub repairs: BTreeSet<Repair>,
}

impl RepairSet {
    /// Explains an empty repair set.
    pub fn diagnostic(&self) -> Option<String> {
        if !self.repairs.is_empty() {
            return None;
        }
        let listed: Vec<String> = self
            .justifications
            .iter()
            .map(|j| format!("{{{}}}", j.iter().map(Assertion::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        Some(format!(
            "no set meets each justification in exactly one assertion: {}",
            listed.join(" ")
        ))
    }
}

struct Clash<'a> {
    reasoner: &'a Reasoner,
    n: &'a Abox,
}

impl<'a> Clash<'a> {
    fn holds<'b>(&self, part: impl IntoIterator<Item = &'b Assertion>) -> bool
    where
        'a: 'b,
    {
        let all: Vec<&Assertion> = part.into_iter().chain(self.n.iter()).collect();
        !self.reasoner.is_consistent_iter(all)
    }

    /// Deletion-based shrinking of a clashing set to a minimal one.
    fn shrink(&self, mut set: Vec<Assertion>) -> Justification {
        let mut i = 0;
        while i < set.len() {
            let removed = set.remove(i);
            if !self.holds(set.iter()) {
                set.insert(i, removed);
                i += 1;
            }
        }
        set.into_iter().collect()
    }
}

fn check_preconditions(reasoner: &Reasoner, a: &Abox, n: &Abox) -> Result<(), RepairError> {
    if !reasoner.is_consistent(n) {
        return Err(RepairError::TargetInconsistent);
    }
    if reasoner.is_consistent_iter(a.iter().chain(n.iter())) {
        return Err(RepairError::ConsistentUnion);
    }
    Ok(())
}

pub fn find_justifications(tbox: &Tbox, a: &Abox, n: &Abox) -> Result<BTreeSet<Justification>, RepairError> {
    find_justifications_with(&Reasoner::new(tbox), a, n)
}

/// All justifications, by a hitting-set tree: each node removes a path of
/// assertions from `a`, reuses a known justification disjoint from the
/// path or shrinks a fresh one, and branches on its members.
pub fn find_justifications_with(
    reasoner: &Reasoner,
    a: &Abox,
    n: &Abox,
) -> Result<BTreeSet<Justification>, RepairError> {
    check_preconditions(reasoner, a, n)?;
    let clash = Clash { reasoner, n };
    let mut found: Vec<Justification> = Vec::new();
    let mut seen: HashSet<BTreeSet<Assertion>> = HashSet::new();
    let mut queue: VecDeque<BTreeSet<Assertion>> = VecDeque::from([BTreeSet::new()]);
    while let Some(path) = queue.pop_front() {
        if !seen.insert(path.clone()) {
            continue;
        }
        let label = match found.iter().find(|j| j.is_disjoint(&path)) {
            Some(j) => j.clone(),
            None => {
                let rest: Vec<Assertion> = a.difference(&path).cloned().collect();
                if !clash.holds(rest.iter()) {
                    continue;
                }
                let j = clash.shrink(rest);
                found.push(j.clone());
                j
            }
        };
        for alpha in &label {
            let mut next = path.clone();
            next.insert(alpha.clone());
            queue.push_back(next);
        }
    }
    Ok(found.into_iter().collect())
}

pub fn find_repairs(tbox: &Tbox, a: &Abox, n: &Abox) -> Result<RepairSet, RepairError> {
    find_repairs_with(&Reasoner::new(tbox), a, n)
}

pub fn find_repairs_with(reasoner: &Reasoner, a: &Abox, n: &Abox) -> Result<RepairSet, RepairError> {
    let justifications = find_justifications_with(reasoner, a, n)?;
    let sets: Vec<Justification> = justifications.iter().cloned().collect();
    let repairs = exactly_one_hitting_sets(&sets);
    Ok(RepairSet { justifications, repairs })
}

/// Every subset of the union of `sets` that meets each set in exactly one
/// element. Empty if some set is empty or no such subset exists.
pub fn exactly_one_hitting_sets<T: Ord + Clone>(sets: &[BTreeSet<T>]) -> BTreeSet<BTreeSet<T>> {
    let universe: Vec<T> = sets.iter().flatten().cloned().collect::<BTreeSet<T>>().into_iter().collect();
    let member: Vec<Vec<usize>> = universe
        .iter()
        .map(|e| (0..sets.len()).filter(|&s| sets[s].contains(e)).collect())
        .collect();

    struct State<'a, T> {
        universe: &'a [T],
        member: &'a [Vec<usize>],
        hits: Vec<usize>,
        // elements of each set not yet decided
        open: Vec<usize>,
        chosen: Vec<usize>,
        out: BTreeSet<BTreeSet<T>>,
    }

    impl<T: Ord + Clone> State<'_, T> {
        fn go(&mut self, i: usize) {
            if i == self.universe.len() {
                if self.hits.iter().all(|&h| h == 1) {
                    self.out.insert(self.chosen.iter().map(|&e| self.universe[e].clone()).collect());
                }
                return;
            }
            let ms = &self.member[i];
            for &s in ms {
                self.open[s] -= 1;
            }
            if ms.iter().all(|&s| self.hits[s] == 0) {
                for &s in ms {
                    self.hits[s] += 1;
                }
                self.chosen.push(i);
                self.go(i + 1);
                self.chosen.pop();
                for &s in ms {
                    self.hits[s] -= 1;
                }
            }
            if ms.iter().all(|&s| self.hits[s] == 1 || self.open[s] > 0) {
                self.go(i + 1);
            }
            for &s in ms {
                self.open[s] += 1;
            }
        }
    }

    if sets.iter().any(BTreeSet::is_empty) {
        return BTreeSet::new();
    }
    let mut st = State {
        universe: &universe,
        member: &member,
        hits: vec![0; sets.len()],
        open: sets.iter().map(BTreeSet::len).collect(),
        chosen: Vec::new(),
        out: BTreeSet::new(),
    };
    st.go(0);
    st.out
}
