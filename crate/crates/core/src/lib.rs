//! Initial algebras of finitary set functors, built as colimits of finite
//! recursive coalgebras.
//!
//! The modules follow the construction bottom-up: [`finset`] and [`functor`]
//! give the ambient category and the functors, [`colimit`] computes finite
//! colimits, [`coalgebra`] decides recursiveness and evaluates
//! hylomorphisms, [`construction`] assembles truncations of the initial
//! algebra, [`chain`] builds the classical chain `F^k ∅` for comparison, and
//! [`iterate`] checks that `(FA, Fα)` is again a colimit of finite recursive
//! coalgebras.

pub mod builtins;
pub mod chain;
pub mod coalgebra;
pub mod colimit;
pub mod construction;
pub mod error;
pub mod finset;
pub mod functor;
pub mod iterate;

pub use coalgebra::{Algebra, Coalgebra};
pub use colimit::{Cocone, ColimitData, Diagram};
pub use construction::{InitialTruncation, Term};
pub use error::{Error, Limits, Result, DEFAULT_CAP};
pub use finset::{Elem, FinFn, FinSet, Partition};
pub use functor::{FElem, FObj, OpSym, Shape, Signature};
