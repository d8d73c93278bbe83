//! EL⊥ abstract syntax, knowledge-base containers, structural measures and
//! the text format.

mod concept;
mod kb;
mod text;

pub use concept::{Assertion, Concept, Gci, Name, NodeId};
pub use kb::{depth, signature, subconcepts, Abox, KnowledgeBase, Signature, Syntax, Tbox};
pub use text::{format_assertion, format_gci, parse_assertion, parse_concept, parse_kb, print_kb, ParseError};
