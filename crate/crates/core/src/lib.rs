//! Reference semantics for ground logic programs with aggregates.
//!
//! Every semantics is a [`SatisfactionRelation`]: a relation between
//! consistent interpretation pairs `(X, Y)` and rule bodies that marks the
//! bodies certainly true in all interpretations between `X` and `Y`.
//! Relations are selected by name through a [`Registry`] and plugged into
//! one fixpoint engine that computes stable models, the Kripke-Kleene
//! fixpoint and the well-founded fixpoint.
//!
//! ```
//! use aggsem::{fixpoints, Program, SemanticsId};
//!
//! let program: Program = "p :- sum{1:p, 1:q} > 1.  p :- sum{1:q} > 0.  q :- sum{1:p} > 0."
//!     .parse()
//!     .unwrap();
//! let ult = SemanticsId::Ult.relation();
//! let models = fixpoints::stable_enumerate(ult, &program, 20).unwrap();
//! assert_eq!(models.len(), 1);
//! assert!(models[0].is_empty());
//! ```

pub mod bounds;
mod error;
pub mod eval2;
pub mod fixpoints;
pub mod interp;
pub mod oracle;
pub mod stats;
pub mod syntax;
pub mod ternary;

pub use error::{Error, ParseError, Result};
pub use interp::{Interpretation, Pair};
pub use syntax::{
    AggFunc, AggregateAtom, Atom, BodyElement, Cmp, DisjunctiveBodyProgram, Entry, Literal,
    Program, Rule, Universe,
};
pub use ternary::{Registry, SatisfactionRelation, SemanticsId, TruthValue};

/// Largest universe an [`Interpretation`] can hold.
pub const MAX_UNIVERSE: usize = 64;
