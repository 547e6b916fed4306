//! Free substructural categories as term calculi.
//!
//! Morphism terms of the free monoidal, symmetric monoidal, relevant, affine
//! and cartesian categories over a set of letters, their graphs, an equality
//! decider based on graph comparison, constructive normal forms, the standard
//! cartesian axiomatization, and a bounded rewriting oracle used to check all
//! of the above.

pub mod cart_std;
pub mod coherence;
pub mod graphs;
pub mod normalize;
pub mod oracle;
pub mod parse;
pub mod syntax;
pub mod typing;

pub use graphs::Graph;
pub use syntax::{Letter, MorTerm, Obj};
pub use typing::{Kind, MorType};
