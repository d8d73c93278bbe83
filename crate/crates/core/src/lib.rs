//! Case adaptation as knowledge-base revision in the description logic EL⊥.

pub mod adaptation;
pub mod cli;
pub mod oracle;
pub mod reasoner;
pub mod repair;
pub mod revision;
pub mod syntax;
