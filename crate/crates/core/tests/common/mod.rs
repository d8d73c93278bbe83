//! Seeded generators of small EL⊥ knowledge bases and adaptation settings.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use eladapt::adaptation::AdaptationSetting;
use eladapt::reasoner::Reasoner;
use eladapt::syntax::{depth, parse_kb, signature, Abox, Assertion, Concept, Gci, KnowledgeBase, Name, NodeId, Tbox};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub const T1: &str = "A SubClassOf (some R. A).\nA SubClassOf C.\n(E and (some R. A)) SubClassOf Bottom.\n";

pub fn kb(text: &str) -> KnowledgeBase {
    parse_kb(text).unwrap()
}

pub fn abox(text: &str) -> Abox {
    kb(text).abox
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const CONCEPTS: [&str; 5] = ["A", "B", "C", "D", "E"];
const ROLES: [&str; 2] = ["R", "S"];
const INDIVIDUALS: [&str; 3] = ["a", "b", "c"];

pub fn concept(rng: &mut ChaCha8Rng, depth: usize) -> Concept {
    let roll = rng.gen_range(0..10);
    if depth == 0 || roll < 4 {
        return if rng.gen_bool(0.1) { Concept::Top } else { Concept::name(CONCEPTS.choose(rng).unwrap()) };
    }
    if roll < 7 {
        Concept::exists(ROLES.choose(rng).unwrap(), concept(rng, depth - 1))
    } else {
        Concept::and(concept(rng, depth), concept(rng, depth - 1))
    }
}

pub fn tbox(rng: &mut ChaCha8Rng) -> Tbox {
    let mut t = Tbox::new();
    for _ in 0..rng.gen_range(1..=4) {
        let lhs = concept(rng, 1);
        let rhs = if rng.gen_bool(0.2) { Concept::Bottom } else { concept(rng, 2) };
        if lhs != Concept::Top {
            t.insert(Gci::new(lhs, rhs));
        }
    }
    t
}

pub fn abox_random(rng: &mut ChaCha8Rng, size: usize) -> Abox {
    let mut a = Abox::new();
    for _ in 0..size {
        let x = NodeId::individual(INDIVIDUALS.choose(rng).unwrap());
        if rng.gen_bool(0.25) {
            let y = NodeId::individual(INDIVIDUALS.choose(rng).unwrap());
            a.insert(Assertion::role(ROLES.choose(rng).unwrap(), x, y));
        } else {
            a.insert(Assertion::concept(concept(rng, 2), x));
        }
    }
    a
}

/// A consistent KB with a nonempty ABox.
pub fn consistent_kb(rng: &mut ChaCha8Rng) -> KnowledgeBase {
    loop {
        let t = tbox(rng);
        let size = rng.gen_range(1..=3);
        let a = abox_random(rng, size);
        if Reasoner::new(&t).is_consistent(&a) {
            return KnowledgeBase::new(t, a);
        }
    }
}

/// A setting with consistent `⟨T, A⟩` and `⟨T, N⟩`. With `clash`, the
/// union is inconsistent.
pub fn setting(rng: &mut ChaCha8Rng, clash: bool) -> AdaptationSetting {
    loop {
        let mut t = tbox(rng);
        if clash || rng.gen_bool(0.5) {
            let l = Concept::and(concept(rng, 0), concept(rng, 1));
            t.insert(Gci::new(l, Concept::Bottom));
        }
        let r = Reasoner::new(&t);
        let (sa, sn) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
        let a = abox_random(rng, sa);
        let n = abox_random(rng, sn);
        if !r.is_consistent(&a) || !r.is_consistent(&n) {
            continue;
        }
        let union: Abox = a.union(&n).cloned().collect();
        if clash && r.is_consistent(&union) {
            continue;
        }
        return AdaptationSetting::new(t, a, n);
    }
}

/// Concepts over `names` and `roles` of depth at most `k`, of the shapes
/// `X`, `∃r.C` and `X ⊓ ∃r.C` with `X` a name or `⊤`.
pub fn enumerate_concepts(names: &BTreeSet<Name>, roles: &BTreeSet<Name>, k: usize) -> Vec<Concept> {
    let mut base: Vec<Concept> = vec![Concept::Top];
    base.extend(names.iter().map(|n| Concept::Name(n.clone())));
    let mut level = base.clone();
    for _ in 0..k {
        let mut next = base.clone();
        for r in roles {
            for c in &level {
                let ex = Concept::Exists(r.clone(), Box::new(c.clone()));
                for n in names {
                    next.push(Concept::and(Concept::Name(n.clone()), ex.clone()));
                }
                next.push(ex);
            }
        }
        level = next;
    }
    level
}

/// Assertions over the signature of `kb` with concept depth at most `k`.
pub fn enumerate_assertions(kb: &KnowledgeBase, k: usize) -> Vec<Assertion> {
    let sig = signature(kb);
    let concepts = enumerate_concepts(&sig.concept_names, &sig.role_names, k);
    let mut out = Vec::new();
    for x in &sig.node_names {
        let x = NodeId::Individual(x.clone());
        for c in &concepts {
            out.push(Assertion::Concept(c.clone(), x.clone()));
        }
        for r in &sig.role_names {
            for y in &sig.node_names {
                out.push(Assertion::Role(r.clone(), x.clone(), NodeId::Individual(y.clone())));
            }
        }
    }
    out
}

/// An ABox equivalent to `a` under `t`: `a` plus some of its consequences
/// of depth at most `k`.
pub fn equivalent_variant(rng: &mut ChaCha8Rng, t: &Tbox, a: &Abox, k: usize) -> Abox {
    let r = Reasoner::new(t);
    let sat = r.saturate(a);
    let whole = KnowledgeBase::new(t.clone(), a.clone());
    let mut candidates: Vec<Assertion> =
        enumerate_assertions(&whole, k.min(2)).into_iter().filter(|x| sat.entails(x) && !a.contains(x)).collect();
    candidates.shuffle(rng);
    let mut out = a.clone();
    out.extend(candidates.into_iter().take(rng.gen_range(1..=3)));
    debug_assert!(depth(&out) <= k.max(depth(a)));
    out
}

/// Whether some substitution of variables maps `r1` onto `r2`.
pub fn equal_up_to_substitution(r1: &Abox, r2: &Abox) -> bool {
    fn go(items: &[Assertion], target: &Abox, sub: &mut BTreeMap<NodeId, NodeId>, used: &mut BTreeSet<Assertion>) -> bool {
        let Some((first, rest)) = items.split_first() else {
            return used.len() == target.len();
        };
        for cand in target {
            let saved = sub.clone();
            if unify(first, cand, sub) {
                let fresh = used.insert(cand.clone());
                if go(rest, target, sub, used) {
                    return true;
                }
                if fresh {
                    used.remove(cand);
                }
            }
            *sub = saved;
        }
        false
    }
    fn bind(x: &NodeId, y: &NodeId, sub: &mut BTreeMap<NodeId, NodeId>) -> bool {
        if x.is_individual() {
            return x == y;
        }
        match sub.get(x) {
            Some(z) => z == y,
            None => {
                sub.insert(x.clone(), y.clone());
                true
            }
        }
    }
    fn unify(a: &Assertion, b: &Assertion, sub: &mut BTreeMap<NodeId, NodeId>) -> bool {
        match (a, b) {
            (Assertion::Concept(c, x), Assertion::Concept(d, y)) => c == d && bind(x, y, sub),
            (Assertion::Role(r, x1, x2), Assertion::Role(s, y1, y2)) => r == s && bind(x1, y1, sub) && bind(x2, y2, sub),
            _ => false,
        }
    }
    let items: Vec<Assertion> = r1.iter().cloned().collect();
    go(&items, r2, &mut BTreeMap::new(), &mut BTreeSet::new())
}

/// Each outcome of one run has a partner in the other with an equivalent
/// solution and a removed set equal up to substitution.
pub fn outcomes_correspond(
    t: &Tbox,
    first: &[eladapt::adaptation::AdaptationOutcome],
    second: &[eladapt::adaptation::AdaptationOutcome],
) -> bool {
    let r = Reasoner::new(t);
    let matches = |x: &eladapt::adaptation::AdaptationOutcome, y: &eladapt::adaptation::AdaptationOutcome| {
        r.entails_all(&x.solution, &y.solution)
            && r.entails_all(&y.solution, &x.solution)
            && equal_up_to_substitution(&x.removed, &y.removed)
    };
    first.len() == second.len()
        && first.iter().all(|x| second.iter().any(|y| matches(x, y)))
        && second.iter().all(|y| first.iter().any(|x| matches(x, y)))
}
