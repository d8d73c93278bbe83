//! Consistency and entailment for EL⊥ knowledge bases.

mod normalize;
mod saturation;

use thiserror::Error;

pub use normalize::{normalize, Atom, NormalAxiom, NormalizedTbox};
pub use saturation::{saturate, CanonicalModel, ModelElement, Reasoner, Saturation};

use crate::syntax::{Abox, Assertion, KnowledgeBase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("equivalence is only decided for knowledge bases sharing one TBox")]
    TboxMismatch,
}

pub fn is_consistent(kb: &KnowledgeBase) -> bool {
    saturate(kb).is_consistent()
}

pub fn entails_assertion(kb: &KnowledgeBase, a: &Assertion) -> bool {
    saturate(kb).entails(a)
}

pub fn entails_abox(kb: &KnowledgeBase, abox: &Abox) -> bool {
    let sat = saturate(kb);
    abox.iter().all(|a| sat.entails(a))
}

/// `k1 ≡ k2` for two KBs over the same TBox: each ABox follows from the
/// other.
pub fn kb_equivalent(k1: &KnowledgeBase, k2: &KnowledgeBase) -> Result<bool, ReasonerError> {
    if k1.tbox != k2.tbox {
        return Err(ReasonerError::TboxMismatch);
    }
    let r = Reasoner::new(&k1.tbox);
    Ok(r.entails_all(&k1.abox, &k2.abox) && r.entails_all(&k2.abox, &k1.abox))
}
