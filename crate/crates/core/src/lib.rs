//! Exact combinatorics for k-SAT functions and partially directed hypergraphs.
//!
//! The crate is `no_std` (it needs `alloc`). Every pass/fail decision is made
//! in integer, rational or `Q(√2)` arithmetic; nothing here uses floats.
//!
//! * [`formula`]: clauses, formulae, syntactic predicates, blowups, copies.
//! * [`semantics`]: truth tables, witnesses, minimality, prime implicants and
//!   the census of k-SAT functions.
//! * [`pdg`]: partially directed k-graphs, the type map, `T_k` detection and
//!   extremal search for `α + θβ`.
//! * [`qsqrt2`]: exact arithmetic in `Q(√2)`.
//! * [`certificate`]: the exhaustive check of the
//!   `(k+1)`-vertex digraph inequality behind the Turán bound.
//! * [`lemmas`]: squared graphs, simplex counts, bounded-codegree orientations
//!   and the binary entropy bound.
//! * [`stability`]: the classifier predicates for nearly monotone, sparsely
//!   minimal formulae.
#![cfg_attr(not(test), no_std)]
#![cfg_attr(
    feature = "arithmetic-audit",
    deny(clippy::float_arithmetic, clippy::float_cmp)
)]

extern crate alloc;

pub mod certificate;
pub mod combin;
pub mod exact;
pub mod formula;
pub mod lemmas;
pub mod pdg;
pub mod qsqrt2;
pub mod semantics;
pub mod stability;

pub use exact::Rational;
pub use formula::{Clause, Formula, FormulaError, Literal, SignVector};
pub use qsqrt2::QSqrt2;
