//! Revision graphs, bounded expansion, and rolling variables back into
//! concepts.

mod bmw;
mod graph;
mod rolling;

use thiserror::Error;

pub use bmw::{b_mw, b_mw_with, BlockingTest, BmwOptions, SuccessorReuse};
pub use graph::{
    abox_of_graph, branch_subsumed, find_redundant_branch, graph_from_abox, isomorphic, level, Branch, RevisionGraph,
};
pub use rolling::{rolling, rolling_with};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RevisionError {
    #[error("{assertion}: {reason}")]
    Structure { assertion: String, reason: String },
    #[error("{0} is not a node of the graph")]
    UnknownNode(String),
    #[error("level of {0} is undefined: it is not rooted at an individual")]
    UndefinedLevel(String),
    #[error("not a branch: {0}")]
    NotABranch(String),
    #[error("the knowledge base is inconsistent")]
    InconsistentSource,
    #[error("source ABox mentions variable {0}")]
    VariableInSource(String),
}
